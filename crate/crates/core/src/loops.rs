//! Enumeration of closed loops in Rauzy diagrams, the winner criterion for
//! primitivity, structural checks on loops, and the spectral search.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{DiagramMode, Family, RauzyDiagram};
use crate::error::{Error, Result};
use crate::linalg::{BigMatrix, IntPolynomial, PerronRoot};
use crate::paths::{LabeledPath, RauzyPath};
use crate::perm::{family_pi, moves_to_string, parse_moves, LabeledPermutation, MoveType, Renumbering};

/// Default cap on the number of enumerated loops.
pub const DEFAULT_LOOP_BUDGET: usize = 5_000_000;

/// Cap on the number of laps when closing up the lift of a reduced loop.
const MAX_LIFT_LAPS: usize = 10_000;

/// A closed loop in canonical form: among its cyclic rotations it has the
/// least `(moves, start)`, with `b < t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loop {
    pub start: usize,
    pub moves: Vec<MoveType>,
    /// Winner criterion: the closed lift has every letter as a winner.
    pub primitive: bool,
}

impl Loop {
    pub fn word(&self) -> String {
        moves_to_string(&self.moves)
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn path(&self, diagram: &RauzyDiagram) -> RauzyPath {
        RauzyPath::new(diagram, self.start, &self.moves).expect("start is a vertex")
    }

    pub fn to_wire(&self) -> LoopWire {
        LoopWire { base: self.start, moves: self.word(), primitive: Some(self.primitive) }
    }
}

/// Wire format of a loop, one JSON object per line in streams.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoopWire {
    pub base: usize,
    pub moves: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primitive: Option<bool>,
}

impl LoopWire {
    pub fn parse_moves(&self) -> Result<Vec<MoveType>> {
        parse_moves(&self.moves)
    }
}

/// Distances to `target` along edges, by breadth-first search on reversed edges.
fn distances_to(diagram: &RauzyDiagram, reverse: &[Vec<usize>], target: usize) -> Vec<usize> {
    let mut dist = vec![usize::MAX; diagram.len()];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &u in &reverse[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// True iff no cyclic rotation is smaller than the walk itself.
fn is_canonical(moves: &[MoveType], vertices: &[usize]) -> bool {
    let n = moves.len();
    let start = vertices[0];
    (1..n).all(|k| {
        let rotated = moves[k..].iter().chain(&moves[..k]);
        match rotated.cmp(moves.iter()) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => vertices[k] >= start,
        }
    })
}

fn walks_from(
    diagram: &RauzyDiagram,
    start: usize,
    dist: &[usize],
    max_len: usize,
    out: &mut Vec<(Vec<MoveType>, Vec<usize>)>,
) {
    let mut moves = Vec::with_capacity(max_len);
    let mut vertices = Vec::with_capacity(max_len + 1);
    vertices.push(start);
    fn dfs(
        d: &RauzyDiagram,
        start: usize,
        dist: &[usize],
        max_len: usize,
        moves: &mut Vec<MoveType>,
        vertices: &mut Vec<usize>,
        out: &mut Vec<(Vec<MoveType>, Vec<usize>)>,
    ) {
        let v = *vertices.last().expect("nonempty");
        if !moves.is_empty() && v == start && is_canonical(moves, vertices) {
            out.push((moves.clone(), vertices.clone()));
        }
        if moves.len() == max_len {
            return;
        }
        for eps in MoveType::BOTH {
            let t = d.edge(v, eps).target;
            if dist[t] == usize::MAX || moves.len() + 1 + dist[t] > max_len {
                continue;
            }
            moves.push(eps);
            vertices.push(t);
            dfs(d, start, dist, max_len, moves, vertices, out);
            moves.pop();
            vertices.pop();
        }
    }
    dfs(diagram, start, dist, max_len, &mut moves, &mut vertices, out);
}

/// Every closed loop of length `1..=max_len` in the diagram, up to cyclic
/// rotation, sorted by `(length, moves, start)`.
pub fn enumerate_loops(diagram: &RauzyDiagram, max_len: usize, budget: usize) -> Result<Vec<Loop>> {
    let mut reverse = vec![Vec::new(); diagram.len()];
    for v in 0..diagram.len() {
        for eps in MoveType::BOTH {
            reverse[diagram.edge(v, eps).target].push(v);
        }
    }
    let found: Vec<Vec<(Vec<MoveType>, Vec<usize>)>> = (0..diagram.len())
        .into_par_iter()
        .map(|s| {
            let dist = distances_to(diagram, &reverse, s);
            let mut out = Vec::new();
            walks_from(diagram, s, &dist, max_len, &mut out);
            out
        })
        .collect();
    let total: usize = found.iter().map(Vec::len).sum();
    if total > budget {
        return Err(Error::BudgetExceeded(budget));
    }
    let mut loops: Vec<Loop> = found
        .into_par_iter()
        .flatten()
        .map(|(moves, vertices)| {
            let start = vertices[0];
            let primitive = winner_criterion(diagram, start, &moves).expect("diagram loops lift");
            Loop { start, moves, primitive }
        })
        .collect();
    loops.sort_by(|a, b| (a.len(), &a.moves, a.start).cmp(&(b.len(), &b.moves, b.start)));
    Ok(loops)
}

/// Repeats the move word from the start representative until the labeled
/// path closes, and returns that closed lift.
pub fn closed_lift(diagram: &RauzyDiagram, start: usize, moves: &[MoveType]) -> Result<LabeledPath> {
    let base = diagram.vertex(start);
    let mut path = LabeledPath::new(base, moves)?;
    if path.end().reduce() != base.reduce() {
        return Err(Error::OpenPath(format!("{} is not closed", moves_to_string(moves))));
    }
    for _ in 0..MAX_LIFT_LAPS {
        if path.is_closed() {
            return Ok(path);
        }
        path = path.then(moves)?;
    }
    Err(Error::BudgetExceeded(MAX_LIFT_LAPS))
}

/// Winner criterion for primitivity of a loop matrix: some closed lift of the
/// loop has every letter as a winner.
pub fn winner_criterion(diagram: &RauzyDiagram, start: usize, moves: &[MoveType]) -> Result<bool> {
    match diagram.mode() {
        DiagramMode::Labeled => {
            let path = LabeledPath::new(diagram.vertex(start), moves)?;
            if !path.is_closed() {
                return Err(Error::OpenPath(path.word()));
            }
            Ok(path.all_winners())
        }
        DiagramMode::Reduced => Ok(closed_lift(diagram, start, moves)?.all_winners()),
    }
}

/// Outcome of the structural checks on one loop. `None` marks a check that
/// does not apply to the loop's family.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralReport {
    pub moves: String,
    pub start: usize,
    /// Every step between distinct vertices is followed, somewhere in the
    /// loop, by a step out of its target won by the same letter.
    pub winner_continues: Option<bool>,
    /// The loop passes through the central class, so its lift from a central
    /// permutation ends at a central permutation.
    pub central_lift: Option<bool>,
    /// That lift has every letter as a loser.
    pub all_losers: Option<bool>,
    /// Steps along the secondary loops are always continued by the next step.
    pub secondary_steps: Option<bool>,
    /// Description of the first violated clause.
    pub violation: Option<String>,
}

impl StructuralReport {
    pub fn pass(&self) -> bool {
        [self.winner_continues, self.central_lift, self.all_losers, self.secondary_steps]
            .iter()
            .all(|c| c.unwrap_or(true))
    }
}

/// Steps `(u, eps)` whose presence forces the step `(R_eps(u), eps)`, for the
/// secondary loops of the marked diagram: `u = R_eps^{k'-1} R_{1-eps}^k(pi_n o sigma^i)`
/// with `k` in `2..=n-2` and `k'` in `2..=n-k`.
pub fn secondary_step_rules(n: u32) -> Result<Vec<(LabeledPermutation, MoveType, LabeledPermutation)>> {
    let pi = family_pi(n)?;
    let sigma = Renumbering::sigma(n);
    let mut rules = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let base = pi.renumber(&sigma.pow(i as i64));
        for k in 2..=n.saturating_sub(2) {
            for eps in MoveType::BOTH {
                let mut u = base.clone();
                for _ in 0..k {
                    u = u.rauzy_move(eps.other())?.target;
                }
                for kp in 1..=n - k {
                    if kp >= 2 {
                        let w = u.rauzy_move(eps)?.target;
                        rules.push((u.clone(), eps, w));
                    }
                    u = u.rauzy_move(eps)?.target;
                }
            }
        }
    }
    Ok(rules)
}

fn check_secondary(lift: &LabeledPath, rules: &[(LabeledPermutation, MoveType, LabeledPermutation)]) -> Option<String> {
    let steps: HashSet<(&LabeledPermutation, MoveType)> =
        lift.moves.iter().enumerate().map(|(j, &eps)| (&lift.vertices[j], eps)).collect();
    for (u, eps, w) in rules {
        if steps.contains(&(u, *eps)) && !steps.contains(&(w, *eps)) {
            return Some(format!("step {eps} from {u} is not followed by step {eps} from {w}"));
        }
    }
    None
}

/// Runs the structural checks appropriate to `family` on a closed loop of
/// the diagram built from that family's base permutation.
pub fn check_loop_structure(
    family: Family,
    n: u32,
    diagram: &RauzyDiagram,
    lp: &Loop,
    rules: &[(LabeledPermutation, MoveType, LabeledPermutation)],
) -> Result<StructuralReport> {
    let path = lp.path(diagram);
    let mut report = StructuralReport { moves: lp.word(), start: lp.start, ..Default::default() };
    match family {
        Family::Hyp => {
            let labeled = path.labeled(diagram)?;
            let m = path.len();
            let mut ok = true;
            for i in 0..m {
                let (src, dst) = (path.vertices[i], path.vertices[i + 1]);
                if src == dst {
                    continue;
                }
                let w = labeled.steps[i].0;
                if !(0..m).any(|j| path.vertices[j] == dst && labeled.steps[j].0 == w) {
                    ok = false;
                    report.violation = Some(format!("step {i} into vertex {dst} won by {w} is not continued"));
                    break;
                }
            }
            report.winner_continues = Some(ok);
        }
        Family::Marked => {
            if !lp.primitive {
                return Ok(report);
            }
            let central = family_pi(n)?.reduce();
            let k = path.vertices[..path.len()].iter().position(|&v| diagram.vertex(v).reduce() == central);
            let Some(k) = k else {
                report.central_lift = Some(false);
                report.violation = Some("loop avoids the central permutations".into());
                return Ok(report);
            };
            let rotated = path.rotate(k);
            let base = match diagram.mode() {
                DiagramMode::Reduced => family_pi(n)?,
                DiagramMode::Labeled => diagram.vertex(rotated.start).clone(),
            };
            let lift = LabeledPath::new(&base, &rotated.moves)?;
            report.central_lift = Some(lift.end().reduce() == central);
            report.all_losers = Some(lift.all_losers());
            if report.all_losers == Some(false) {
                report.violation = Some(format!("lift {} misses a loser", lift.word()));
            }
            let secondary = check_secondary(&lift, rules);
            report.secondary_steps = Some(secondary.is_none());
            if report.violation.is_none() {
                report.violation = secondary;
            }
        }
    }
    Ok(report)
}

/// Minimum over a set of loops.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystoleWitness {
    pub start: usize,
    pub moves: String,
    pub root: PerronRoot,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystoleReport {
    pub max_len: usize,
    pub precision: f64,
    pub loops: usize,
    pub primitive_loops: usize,
    /// Least Perron root over primitive loops.
    pub primitive_min: SystoleWitness,
    /// Least spectral radius above 1 over all loops, primitive or not.
    pub raw_min: Option<SystoleWitness>,
    pub distinct_polynomials: usize,
}

/// `V = V-hat P` of a closed loop, relative to its start representative.
pub fn loop_matrix(diagram: &RauzyDiagram, lp: &Loop) -> Result<BigMatrix> {
    let lift = lp.path(diagram).labeled(diagram)?;
    let p = crate::paths::renumbering_matrix(lift.end(), diagram.vertex(lp.start))?;
    Ok(lift.matrix().mul(&p))
}

/// Certified Perron roots of every primitive loop, with a cache keyed by
/// characteristic polynomial. Output order follows `loops`.
pub fn loop_roots(diagram: &RauzyDiagram, loops: &[Loop], precision: f64) -> Result<Vec<(IntPolynomial, Option<PerronRoot>)>> {
    let polys: Vec<IntPolynomial> = loops
        .par_iter()
        .map(|lp| Ok(loop_matrix(diagram, lp)?.charpoly()))
        .collect::<Result<_>>()?;
    let mut unique: Vec<&IntPolynomial> = polys.iter().collect::<HashSet<_>>().into_iter().collect();
    unique.sort_by_key(|p| p.coeffs().to_vec());
    let roots: HashMap<&IntPolynomial, Option<PerronRoot>> = unique
        .par_iter()
        .map(|&p| (p, PerronRoot::isolate(p, precision).ok()))
        .collect();
    Ok(polys
        .iter()
        .zip(loops)
        .map(|(p, lp)| {
            let root = roots[p].clone();
            (p.clone(), if lp.primitive { root } else { root.filter(|_| false) })
        })
        .collect())
}

/// Least certified dilatation over the primitive loops of length `<= max_len`.
pub fn systole_search(diagram: &RauzyDiagram, max_len: usize, precision: f64) -> Result<SystoleReport> {
    let loops = enumerate_loops(diagram, max_len, DEFAULT_LOOP_BUDGET)?;
    systole_over(diagram, &loops, max_len, precision)
}

pub fn systole_over(diagram: &RauzyDiagram, loops: &[Loop], max_len: usize, precision: f64) -> Result<SystoleReport> {
    let data = loop_roots(diagram, loops, precision)?;
    let distinct: HashSet<&IntPolynomial> = data.iter().map(|d| &d.0).collect();
    let mut best: Option<SystoleWitness> = None;
    let mut raw: Option<SystoleWitness> = None;
    let mut primitive_loops = 0;
    for (lp, (poly, root)) in loops.iter().zip(&data) {
        let witness = |r: PerronRoot| SystoleWitness { start: lp.start, moves: lp.word(), root: r };
        if let Some(r) = root {
            primitive_loops += 1;
            if best.as_ref().map_or(true, |b| r.hi < b.root.lo || (r.value < b.root.value && r.lo < b.root.lo)) {
                best = Some(witness(r.clone()));
            }
        }
        let spectral = match root {
            Some(r) => Some(r.clone()),
            None => PerronRoot::isolate(poly, precision).ok(),
        };
        if let Some(r) = spectral {
            if raw.as_ref().map_or(true, |b| r.lo < b.root.lo) {
                raw = Some(witness(r));
            }
        }
    }
    let primitive_min = best.ok_or(Error::NoPrimitiveLoop)?;
    Ok(SystoleReport {
        max_len,
        precision,
        loops: loops.len(),
        primitive_loops,
        primitive_min,
        raw_min: raw,
        distinct_polynomials: distinct.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::family_tau;

    #[test]
    fn self_loops_of_tau4() {
        let d = RauzyDiagram::build(&family_tau(4).unwrap(), DiagramMode::Labeled).unwrap();
        let loops = enumerate_loops(&d, 2, DEFAULT_LOOP_BUDGET).unwrap();
        let ones: Vec<&Loop> = loops.iter().filter(|l| l.len() == 1).collect();
        let fixed = (0..d.len())
            .flat_map(|v| MoveType::BOTH.map(|e| (v, e)))
            .filter(|&(v, e)| d.edge(v, e).target == v)
            .count();
        assert_eq!(ones.len(), fixed);
        assert!(fixed > 0);
        assert!(ones.iter().all(|l| !l.primitive));
    }

    #[test]
    fn canonical_rotation() {
        use MoveType::*;
        assert!(is_canonical(&[Bottom, Top], &[3, 5, 3]));
        assert!(!is_canonical(&[Top, Bottom], &[3, 5, 3]));
        assert!(is_canonical(&[Bottom, Top, Bottom, Top], &[1, 2, 1, 2, 1]));
        assert!(!is_canonical(&[Top, Bottom, Top, Bottom], &[1, 2, 1, 2, 1]));
    }

    #[test]
    fn budget() {
        let d = RauzyDiagram::build(&family_tau(4).unwrap(), DiagramMode::Labeled).unwrap();
        assert_eq!(enumerate_loops(&d, 8, 3), Err(Error::BudgetExceeded(3)));
    }

    #[test]
    fn systole_of_tau4_is_at_least_two() {
        let d = RauzyDiagram::build(&family_tau(4).unwrap(), DiagramMode::Reduced).unwrap();
        let r = systole_search(&d, 8, 1e-12).unwrap();
        assert!(r.primitive_min.root.verify());
        assert!(r.primitive_min.root.value >= 2.0 - 1e-9);
    }

    #[test]
    fn secondary_rules_are_well_formed() {
        let rules = secondary_step_rules(5).unwrap();
        // (n - 1) deck images, two move types, sum over k of (n - k - 1)
        assert_eq!(rules.len(), 4 * 2 * (2 + 1));
        assert!(secondary_step_rules(3).unwrap().is_empty());
    }
}
