//! Labeled and reduced Rauzy diagrams, the covering between them, and the
//! combinatorial facts about the hyperelliptic families.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{family_pi, family_tau, LabeledPermutation, Letter, MoveType, Renumbering};

/// Default cap on the number of vertices of a diagram.
pub const DEFAULT_VERTEX_BUDGET: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramMode {
    Labeled,
    Reduced,
}

/// The two families of base permutations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `tau_n`, hyperelliptic components without marked point.
    Hyp,
    /// `pi_n`, the same components with a regular marked point.
    Marked,
}

impl Family {
    pub fn base(self, n: u32) -> Result<LabeledPermutation> {
        match self {
            Family::Hyp => family_tau(n),
            Family::Marked => family_pi(n),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Hyp => "hyp",
            Family::Marked => "marked",
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hyp" => Ok(Family::Hyp),
            "marked" => Ok(Family::Marked),
            _ => Err(Error::Parse(format!("unknown family {s:?}, expected hyp or marked"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub target: usize,
    pub winner: Letter,
    pub loser: Letter,
}

/// A Rauzy diagram. In reduced mode each vertex stores the first labeled
/// representative met during the search and edge letters refer to it.
#[derive(Clone, Debug)]
pub struct RauzyDiagram {
    mode: DiagramMode,
    vertices: Vec<LabeledPermutation>,
    edges: Vec<[Edge; 2]>,
    base: usize,
    index: HashMap<Vec<u32>, usize>,
}

fn vertex_key(mode: DiagramMode, p: &LabeledPermutation) -> Vec<u32> {
    match mode {
        DiagramMode::Labeled => p.key(),
        DiagramMode::Reduced => p.reduce().key(),
    }
}

impl RauzyDiagram {
    pub fn build(base: &LabeledPermutation, mode: DiagramMode) -> Result<Self> {
        Self::build_with_budget(base, mode, DEFAULT_VERTEX_BUDGET)
    }

    /// Breadth-first closure under both moves, `t` explored before `b`.
    pub fn build_with_budget(base: &LabeledPermutation, mode: DiagramMode, budget: usize) -> Result<Self> {
        if !base.is_irreducible() {
            return Err(Error::Reducible(base.to_string()));
        }
        let mut vertices = vec![base.clone()];
        let mut index = HashMap::from([(vertex_key(mode, base), 0)]);
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let mut out = Vec::with_capacity(2);
            for eps in MoveType::BOTH {
                let mv = vertices[v].rauzy_move(eps)?;
                let key = vertex_key(mode, &mv.target);
                let target = match index.get(&key) {
                    Some(&t) => t,
                    None => {
                        if vertices.len() >= budget {
                            return Err(Error::DiagramTooLarge(budget));
                        }
                        vertices.push(mv.target);
                        index.insert(key, vertices.len() - 1);
                        queue.push_back(vertices.len() - 1);
                        vertices.len() - 1
                    }
                };
                out.push(Edge { target, winner: mv.winner, loser: mv.loser });
            }
            edges.push([out[0], out[1]]);
        }
        Ok(RauzyDiagram { mode, vertices, edges, base: 0, index })
    }

    pub fn mode(&self) -> DiagramMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    /// Number of letters.
    pub fn letters(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertex(&self, v: usize) -> &LabeledPermutation {
        &self.vertices[v]
    }

    pub fn vertices(&self) -> &[LabeledPermutation] {
        &self.vertices
    }

    pub fn edge(&self, v: usize, eps: MoveType) -> Edge {
        self.edges[v][eps.index()]
    }

    pub fn edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    /// Vertex of `p` (by its labeled or reduced key), if present.
    pub fn find(&self, p: &LabeledPermutation) -> Option<usize> {
        self.index.get(&vertex_key(self.mode, p)).copied()
    }

    /// Endpoint of the move word starting at `v`.
    pub fn follow(&self, v: usize, moves: &[MoveType]) -> usize {
        moves.iter().fold(v, |u, &eps| self.edge(u, eps).target)
    }

    /// Vertices reachable from `start` without passing through `avoid`.
    pub fn reachable_avoiding(&self, start: usize, avoid: usize) -> Vec<usize> {
        if start == avoid {
            return Vec::new();
        }
        let mut seen = vec![false; self.len()];
        seen[start] = true;
        let mut order = vec![start];
        let mut i = 0;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for eps in MoveType::BOTH {
                let t = self.edge(v, eps).target;
                if t != avoid && !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Checks that every vertex is irreducible, has out-degree 2 into the
    /// vertex set, and is reachable from the base.
    pub fn check_invariants(&self) -> bool {
        let all_irreducible = self.vertices.iter().all(LabeledPermutation::is_irreducible);
        let closed = self.edges.iter().flatten().all(|e| e.target < self.len());
        let connected = self.reachable_avoiding(self.base, usize::MAX).len() == self.len();
        all_irreducible && closed && connected && self.edges.len() == self.len()
    }

    /// Deterministic Graphviz export. Edges are labeled `eps:winner/loser`.
    pub fn export_dot(&self) -> String {
        let mut out = String::from("digraph rauzy {\n");
        let _ = writeln!(out, "  // mode={:?} vertices={} base=n{}", self.mode, self.len(), self.base);
        for (i, p) in self.vertices.iter().enumerate() {
            let top: Vec<String> = p.top().iter().map(ToString::to_string).collect();
            let bottom: Vec<String> = p.bottom().iter().map(ToString::to_string).collect();
            let _ = writeln!(out, "  n{i} [label=\"{}\\n{}\"];", top.join(" "), bottom.join(" "));
        }
        for (i, pair) in self.edges.iter().enumerate() {
            for (eps, e) in MoveType::BOTH.iter().zip(pair) {
                let _ = writeln!(out, "  n{i} -> n{} [label=\"{eps}:{}/{}\"];", e.target, e.winner, e.loser);
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            mode: self.mode,
            n: self.letters(),
            vertices: self
                .vertices
                .iter()
                .enumerate()
                .map(|(id, p)| VertexJson { id, top: p.top().to_vec(), bottom: p.bottom().to_vec() })
                .collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .flat_map(|(from, pair)| {
                    MoveType::BOTH.into_iter().zip(pair).map(move |(eps, e)| EdgeJson {
                        from,
                        eps,
                        to: e.target,
                        winner: e.winner,
                        loser: e.loser,
                    })
                })
                .collect(),
            base: self.base,
        }
    }

    /// The covering of the reduced diagram by this labeled one.
    pub fn covering(&self) -> Result<CoveringMap> {
        if self.mode != DiagramMode::Labeled {
            return Err(Error::Range("covering needs a labeled diagram".into()));
        }
        let reduced = RauzyDiagram::build(&self.vertices[self.base], DiagramMode::Reduced)?;
        let map: Vec<usize> = self
            .vertices
            .iter()
            .map(|p| reduced.find(p).expect("projection lies in the reduced diagram"))
            .collect();
        for (v, &r) in map.iter().enumerate() {
            for eps in MoveType::BOTH {
                if map[self.edge(v, eps).target] != reduced.edge(r, eps).target {
                    return Err(Error::Commutation { vertex: v, eps: eps.as_char() });
                }
            }
        }
        let mut fibers = vec![Vec::new(); reduced.len()];
        for (v, &r) in map.iter().enumerate() {
            fibers[r].push(v);
        }
        Ok(CoveringMap { reduced, map, fibers })
    }

    /// First vertex (in numbering order) with the given symmetry.
    pub fn detect_symmetric_vertex(&self, kind: Symmetry) -> Option<usize> {
        self.vertices.iter().position(|p| kind.holds(p))
    }
}

/// Symmetric shapes of a two-row table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    /// The bottom row is the top row reversed.
    FullyReversed,
    /// `(a .. b / b .. a)`: only the end letters are exchanged.
    EndSwapped,
}

impl Symmetry {
    pub fn holds(self, p: &LabeledPermutation) -> bool {
        let (t, b) = (p.top(), p.bottom());
        match self {
            Symmetry::FullyReversed => t.iter().eq(b.iter().rev()),
            Symmetry::EndSwapped => t[0] == b[b.len() - 1] && t[t.len() - 1] == b[0],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: usize,
    pub top: Vec<Letter>,
    pub bottom: Vec<Letter>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: usize,
    pub eps: MoveType,
    pub to: usize,
    pub winner: Letter,
    pub loser: Letter,
}

/// JSON dump of a diagram; `n` is the number of letters.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiagramJson {
    pub mode: DiagramMode,
    pub n: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub base: usize,
}

/// Projection of a labeled diagram onto its reduced diagram.
#[derive(Clone, Debug)]
pub struct CoveringMap {
    pub reduced: RauzyDiagram,
    /// `map[v]` is the reduced vertex under labeled vertex `v`.
    pub map: Vec<usize>,
    pub fibers: Vec<Vec<usize>>,
}

impl CoveringMap {
    /// True iff every fiber has exactly `k` points.
    pub fn uniform_degree(&self) -> Option<usize> {
        let k = self.fibers.first()?.len();
        self.fibers.iter().all(|f| f.len() == k).then_some(k)
    }

    /// Checks that relabeling by `r` maps labeled vertices to labeled vertices
    /// in the same fiber.
    pub fn is_deck_transformation(&self, labeled: &RauzyDiagram, r: &Renumbering) -> bool {
        labeled.vertices().iter().enumerate().all(|(v, p)| {
            labeled.find(&p.renumber(r)).is_some_and(|w| self.map[w] == self.map[v])
        })
    }
}

/// Table of `R_b R_t^k (pi_n)`.
pub fn added_bt(n: u32, k: u32) -> Result<LabeledPermutation> {
    let top: Vec<u32> = [0].into_iter().chain(2..=k).chain([n]).chain(k + 1..n).chain([1]).collect();
    let bottom: Vec<u32> = [n].into_iter().chain((1..k).rev()).chain([0]).chain((k..n).rev()).collect();
    LabeledPermutation::from_ids(&top, &bottom)
}

/// Table of `R_t R_b^k (pi_n)`.
pub fn added_tb(n: u32, k: u32) -> Result<LabeledPermutation> {
    let top: Vec<u32> =
        [0].into_iter().chain(n - k + 2..n).chain([1, n]).chain(2..=n - k + 1).collect();
    let bottom: Vec<u32> = [n]
        .into_iter()
        .chain((n - k + 2..n).rev())
        .chain([n - k + 1, 0])
        .chain((1..=n - k).rev())
        .collect();
    LabeledPermutation::from_ids(&top, &bottom)
}

/// Table of `R_t (pi_n)`.
pub fn added_t(n: u32) -> Result<LabeledPermutation> {
    let top: Vec<u32> = [0].into_iter().chain(2..n).chain([1, n]).collect();
    let bottom: Vec<u32> = [n, 0].into_iter().chain((1..n).rev()).collect();
    LabeledPermutation::from_ids(&top, &bottom)
}

/// Table of `R_b (pi_n)`.
pub fn added_b(n: u32) -> Result<LabeledPermutation> {
    let top: Vec<u32> = [0, n].into_iter().chain(2..n).chain([1]).collect();
    let bottom: Vec<u32> = (0..=n).rev().collect();
    LabeledPermutation::from_ids(&top, &bottom)
}

/// All added permutations of the marked diagram, as printed tables.
pub fn added_permutations(n: u32) -> Result<Vec<LabeledPermutation>> {
    let mut out = vec![added_t(n)?, added_b(n)?];
    for k in 2..n {
        out.push(added_bt(n, k)?);
        out.push(added_tb(n, k)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedCase {
    pub k: u32,
    /// `R_b R_t^k (pi_n)` equals its printed table.
    pub bt_matches: bool,
    /// `R_t R_b^k (pi_n)` equals its printed table.
    pub tb_matches: bool,
    /// Both project to the same reduced vertex.
    pub reduced_equal: bool,
    /// Exponent `j` in `0..n-1` with `R_t R_b^k (pi_n)` renumbered by
    /// `sigma^j` equal to `R_b R_t^k (pi_n)`.
    pub sigma_power: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddedReport {
    pub n: u32,
    pub t_matches: bool,
    pub b_matches: bool,
    /// `R_t(pi_n)` and `R_b(pi_n)` project to different reduced vertices.
    pub t_b_distinct: bool,
    pub cases: Vec<AddedCase>,
}

impl AddedReport {
    pub fn pass(&self) -> bool {
        self.t_matches
            && self.b_matches
            && self.t_b_distinct
            && self.cases.iter().all(|c| {
                c.bt_matches && c.tb_matches && c.reduced_equal && c.sigma_power.is_some()
            })
    }

    /// The `k` values whose renumbering is not `sigma^{-k}`.
    pub fn sigma_exceptions(&self) -> Vec<u32> {
        let n = self.n;
        self.cases
            .iter()
            .filter(|c| c.sigma_power != Some((n - 1 - c.k % (n - 1)) % (n - 1)))
            .map(|c| c.k)
            .collect()
    }
}

fn iterate(p: &LabeledPermutation, eps: MoveType, k: u32) -> Result<LabeledPermutation> {
    (0..k).try_fold(p.clone(), |q, _| Ok(q.rauzy_move(eps)?.target))
}

/// Recomputes the added permutations of the marked diagram and compares them
/// with their printed tables.
pub fn verify_added_permutations(n: u32) -> Result<AddedReport> {
    if n < 3 {
        return Err(Error::Range(format!("added permutations need n >= 3, got {n}")));
    }
    let pi = family_pi(n)?;
    let rt = pi.rauzy_move(MoveType::Top)?.target;
    let rb = pi.rauzy_move(MoveType::Bottom)?.target;
    let sigma = Renumbering::sigma(n);
    let mut cases = Vec::new();
    for k in 2..n {
        let bt = iterate(&pi, MoveType::Top, k)?.rauzy_move(MoveType::Bottom)?.target;
        let tb = iterate(&pi, MoveType::Bottom, k)?.rauzy_move(MoveType::Top)?.target;
        let sigma_power = (0..n - 1).find(|&j| tb.renumber(&sigma.pow(j as i64)) == bt);
        cases.push(AddedCase {
            k,
            bt_matches: bt == added_bt(n, k)?,
            tb_matches: tb == added_tb(n, k)?,
            reduced_equal: bt.reduce() == tb.reduce(),
            sigma_power,
        });
    }
    Ok(AddedReport {
        n,
        t_matches: rt == added_t(n)?,
        b_matches: rb == added_b(n)?,
        t_b_distinct: rt.reduce() != rb.reduce(),
        cases,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexClass {
    Central,
    Transition,
    Plain,
}

/// Classifies a permutation of the marked diagram of `pi_n`: central when it
/// is a renumbering of `pi_n`, transition when it is a renumbering of an added
/// permutation.
pub fn classify_vertex(n: u32, p: &LabeledPermutation) -> Result<VertexClass> {
    let key = p.reduce();
    if family_pi(n)?.reduce() == key {
        return Ok(VertexClass::Central);
    }
    if added_permutations(n)?.iter().any(|a| a.reduce() == key) {
        return Ok(VertexClass::Transition);
    }
    Ok(VertexClass::Plain)
}

/// One instance of the recursive structure of the hyperelliptic diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionCase {
    pub n: u32,
    pub k: u32,
    pub eps: MoveType,
    pub size: usize,
    pub isomorphic: bool,
}

/// `G^eps(p)`: vertices reached from `p` by a path starting with `R_eps`
/// and not returning to `p`, rooted at `R_eps(p)`.
fn rooted_isomorphic(d1: &RauzyDiagram, root1: usize, avoid1: usize, d2: &RauzyDiagram, root2: usize, avoid2: usize) -> (bool, usize) {
    let s1 = d1.reachable_avoiding(root1, avoid1);
    let s2 = d2.reachable_avoiding(root2, avoid2);
    if s1.len() != s2.len() {
        return (false, s1.len());
    }
    if s1.is_empty() {
        return (true, 0);
    }
    let mut map: BTreeMap<usize, usize> = BTreeMap::from([(avoid1, avoid2), (root1, root2)]);
    let mut queue = VecDeque::from([root1]);
    while let Some(u) = queue.pop_front() {
        let w = map[&u];
        for eps in MoveType::BOTH {
            let (a, b) = (d1.edge(u, eps).target, d2.edge(w, eps).target);
            match map.get(&a) {
                Some(&m) if m != b => return (false, s1.len()),
                Some(_) => {}
                None => {
                    if b == avoid2 || map.values().any(|&x| x == b) {
                        return (false, s1.len());
                    }
                    map.insert(a, b);
                    queue.push_back(a);
                }
            }
        }
    }
    (map.len() == s1.len() + 1, s1.len())
}

/// Checks that in `D(tau_n)`, the part reached from `tau_{n,k} = R_eps^k(tau_n)`
/// by a first step of the other type is isomorphic, as a rooted graph with
/// typed edges, to the corresponding part of `D(tau_{n-k})`.
pub fn verify_rauzy_recursion(n: u32) -> Result<Vec<RecursionCase>> {
    let big = RauzyDiagram::build(&family_tau(n)?, DiagramMode::Labeled)?;
    let mut cases = Vec::new();
    for k in 1..=n.saturating_sub(2) {
        let small = RauzyDiagram::build(&family_tau(n - k)?, DiagramMode::Labeled)?;
        for eps in MoveType::BOTH {
            let v = big.follow(big.base(), &vec![eps; k as usize]);
            let other = eps.other();
            let (isomorphic, size) = rooted_isomorphic(
                &big,
                big.edge(v, other).target,
                v,
                &small,
                small.edge(small.base(), other).target,
                small.base(),
            );
            cases.push(RecursionCase { n, k, eps, size, isomorphic });
        }
    }
    Ok(cases)
}

/// Expected number of vertices of the hyperelliptic diagram.
pub fn expected_hyp_size(n: u32) -> u64 {
    (1u64 << (n - 1)) - 1
}

/// Expected number of vertices of the reduced marked diagram.
pub fn expected_marked_reduced_size(n: u32) -> u64 {
    (1u64 << (n - 1)) - 1 + n as u64
}

/// Expected number of vertices of the labeled marked diagram.
pub fn expected_marked_labeled_size(n: u32) -> u64 {
    expected_marked_reduced_size(n) * (n as u64 - 1)
}
