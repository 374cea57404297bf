//! Paths of Rauzy moves and their transition matrices.

use serde::{Deserialize, Serialize};

use crate::diagram::RauzyDiagram;
use crate::error::{Error, Result};
use crate::linalg::{transvection, BigMatrix, IntPolynomial, PerronRoot};
use crate::perm::{moves_to_string, LabeledPermutation, Letter, MoveType, Renumbering};

/// A move word applied to a labeled permutation, with the winner and loser
/// of every step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPath {
    pub start: LabeledPermutation,
    pub moves: Vec<MoveType>,
    /// `(winner, loser)` of each step.
    pub steps: Vec<(Letter, Letter)>,
    /// Permutations visited, `start` first and the endpoint last.
    pub vertices: Vec<LabeledPermutation>,
}

impl LabeledPath {
    pub fn new(start: &LabeledPermutation, moves: &[MoveType]) -> Result<Self> {
        let mut vertices = vec![start.clone()];
        let mut steps = Vec::with_capacity(moves.len());
        for &eps in moves {
            let mv = vertices.last().expect("nonempty").rauzy_move(eps)?;
            steps.push((mv.winner, mv.loser));
            vertices.push(mv.target);
        }
        Ok(LabeledPath { start: start.clone(), moves: moves.to_vec(), steps, vertices })
    }

    pub fn end(&self) -> &LabeledPermutation {
        self.vertices.last().expect("nonempty")
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.end() == &self.start
    }

    pub fn word(&self) -> String {
        moves_to_string(&self.moves)
    }

    pub fn winners(&self) -> impl Iterator<Item = Letter> + '_ {
        self.steps.iter().map(|s| s.0)
    }

    pub fn losers(&self) -> impl Iterator<Item = Letter> + '_ {
        self.steps.iter().map(|s| s.1)
    }

    /// True iff every letter of the alphabet wins at least once.
    pub fn all_winners(&self) -> bool {
        let alphabet = self.start.alphabet();
        let mut seen = vec![false; alphabet.len()];
        for w in self.winners() {
            seen[self.start.letter_index(w).expect("letter")] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// True iff every letter of the alphabet loses at least once.
    pub fn all_losers(&self) -> bool {
        let alphabet = self.start.alphabet();
        let mut seen = vec![false; alphabet.len()];
        for l in self.losers() {
            seen[self.start.letter_index(l).expect("letter")] = true;
        }
        seen.into_iter().all(|b| b)
    }

    /// `V-hat`: starting from the identity, each step adds the winner's column
    /// to the loser's column. Rows and columns follow the sorted alphabet.
    pub fn matrix(&self) -> BigMatrix {
        let mut m = BigMatrix::identity(self.start.len());
        for &(w, l) in &self.steps {
            let (wi, li) = (self.index(w), self.index(l));
            m.add_column(wi, li);
        }
        m
    }

    /// Product of the transvections `I + E_{winner, loser}` in path order.
    pub fn transvection_product(&self) -> BigMatrix {
        let d = self.start.len();
        self.steps.iter().fold(BigMatrix::identity(d), |acc, &(w, l)| {
            acc.mul(&transvection(d, self.index(w), self.index(l)).expect("distinct letters"))
        })
    }

    fn index(&self, a: Letter) -> usize {
        self.start.letter_index(a).expect("letter in alphabet")
    }

    /// Concatenation with `other`, which must start where `self` ends.
    pub fn then(&self, moves: &[MoveType]) -> Result<LabeledPath> {
        let tail = LabeledPath::new(self.end(), moves)?;
        let mut out = self.clone();
        out.moves.extend(tail.moves);
        out.steps.extend(tail.steps);
        out.vertices.extend(tail.vertices.into_iter().skip(1));
        Ok(out)
    }
}

/// Permutation matrix `P` of the renumbering that sends the endpoint of a
/// reduced loop back to `reference`: `P[i][r(i)] = 1` where letter `i` of the
/// endpoint sits in the top row at the position of letter `r(i)` in
/// `reference`.
pub fn renumbering_matrix(end: &LabeledPermutation, reference: &LabeledPermutation) -> Result<BigMatrix> {
    let r = end
        .renumbering_to(reference)
        .ok_or_else(|| Error::OpenPath(format!("{end} is not a renumbering of {reference}")))?;
    renumbering_matrix_of(end, reference, &r)
}

fn renumbering_matrix_of(
    end: &LabeledPermutation,
    reference: &LabeledPermutation,
    r: &Renumbering,
) -> Result<BigMatrix> {
    let image: Vec<usize> = end
        .alphabet()
        .iter()
        .map(|&a| reference.letter_index(r.apply(a)).expect("same alphabet"))
        .collect();
    BigMatrix::permutation(&image)
}

/// Matrix data of a closed path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LoopMatrixReport {
    pub moves: String,
    pub v_hat: BigMatrix,
    pub p: BigMatrix,
    pub v: BigMatrix,
    pub charpoly: IntPolynomial,
    pub primitive: bool,
    pub perron: Option<PerronRoot>,
}

/// Matrices of a path that closes up to renumbering: `V = V-hat P`.
pub fn path_matrix(path: &LabeledPath, reference: &LabeledPermutation, precision: f64) -> Result<LoopMatrixReport> {
    let p = renumbering_matrix(path.end(), reference)?;
    let v_hat = path.matrix();
    let v = v_hat.mul(&p);
    let charpoly = v.charpoly();
    let primitive = v.is_primitive()?;
    let perron = if primitive { Some(PerronRoot::isolate(&charpoly, precision)?) } else { None };
    Ok(LoopMatrixReport { moves: path.word(), v_hat, p, v, charpoly, primitive, perron })
}

/// A path in a built diagram.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RauzyPath {
    pub start: usize,
    pub moves: Vec<MoveType>,
    pub vertices: Vec<usize>,
}

impl RauzyPath {
    pub fn new(diagram: &RauzyDiagram, start: usize, moves: &[MoveType]) -> Result<Self> {
        if start >= diagram.len() {
            return Err(Error::Index(format!("vertex {start} outside a diagram of {}", diagram.len())));
        }
        let mut vertices = vec![start];
        for &eps in moves {
            vertices.push(diagram.edge(*vertices.last().expect("nonempty"), eps).target);
        }
        Ok(RauzyPath { start, moves: moves.to_vec(), vertices })
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("nonempty")
    }

    pub fn is_closed(&self) -> bool {
        self.end() == self.start
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// The same moves applied to the stored representative of the start.
    pub fn labeled(&self, diagram: &RauzyDiagram) -> Result<LabeledPath> {
        LabeledPath::new(diagram.vertex(self.start), &self.moves)
    }

    /// Matrix report of a closed path, relative to the start representative.
    pub fn matrix_report(&self, diagram: &RauzyDiagram, precision: f64) -> Result<LoopMatrixReport> {
        if !self.is_closed() {
            return Err(Error::OpenPath(format!(
                "{} from vertex {} ends at vertex {}",
                moves_to_string(&self.moves),
                self.start,
                self.end()
            )));
        }
        path_matrix(&self.labeled(diagram)?, diagram.vertex(self.start), precision)
    }

    /// Cyclic rotation by `k` steps of a closed path.
    pub fn rotate(&self, k: usize) -> RauzyPath {
        let n = self.moves.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let moves: Vec<MoveType> = self.moves[k..].iter().chain(&self.moves[..k]).copied().collect();
        let vertices: Vec<usize> =
            self.vertices[k..n].iter().chain(&self.vertices[..=k]).copied().collect();
        RauzyPath { start: self.vertices[k], moves, vertices }
    }
}

/// Lift of a move word to the labeled permutation `base`, which must project
/// to the start vertex of the reduced path.
pub fn lift_path(diagram: &RauzyDiagram, path: &RauzyPath, base: &LabeledPermutation) -> Result<LabeledPath> {
    if base.reduce() != diagram.vertex(path.start).reduce() {
        return Err(Error::BaseMismatch);
    }
    LabeledPath::new(base, &path.moves)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::DiagramMode;
    use crate::perm::{family_pi, family_tau, parse_moves};

    #[test]
    fn empty_path_is_identity() {
        let tau = family_tau(4).unwrap();
        let path = LabeledPath::new(&tau, &[]).unwrap();
        let r = path_matrix(&path, &tau, 1e-12).unwrap();
        assert_eq!(r.v_hat, BigMatrix::identity(4));
        assert_eq!(r.p, BigMatrix::identity(4));
        assert!(!r.primitive);
        assert!(r.perron.is_none());
    }

    #[test]
    fn column_rule_matches_transvections() {
        let pi = family_pi(5).unwrap();
        let path = LabeledPath::new(&pi, &parse_moves("ttbtbbbttb").unwrap()).unwrap();
        assert_eq!(path.matrix(), path.transvection_product());
    }

    #[test]
    fn open_reduced_path_is_rejected() {
        let d = RauzyDiagram::build(&family_tau(4).unwrap(), DiagramMode::Reduced).unwrap();
        let path = RauzyPath::new(&d, 0, &parse_moves("t").unwrap()).unwrap();
        assert!(matches!(path.matrix_report(&d, 1e-12), Err(Error::OpenPath(_))));
    }

    #[test]
    fn rotation_keeps_closedness() {
        let d = RauzyDiagram::build(&family_tau(4).unwrap(), DiagramMode::Reduced).unwrap();
        let path = RauzyPath::new(&d, 0, &parse_moves("tttbbb").unwrap()).unwrap();
        assert!(path.is_closed());
        for k in 0..path.len() {
            let r = path.rotate(k);
            assert!(r.is_closed());
            assert_eq!(RauzyPath::new(&d, r.start, &r.moves).unwrap(), r);
        }
    }

    #[test]
    fn marked_lift() {
        let labeled = RauzyDiagram::build(&family_pi(4).unwrap(), DiagramMode::Labeled).unwrap();
        let reduced = RauzyDiagram::build(&family_pi(4).unwrap(), DiagramMode::Reduced).unwrap();
        let start: LabeledPermutation = "1 3 0 2 4 / 4 3 2 1 0".parse().unwrap();
        // the table is written with letters 0 and 1 exchanged relative to pi_4
        let swap = Renumbering::from_pairs([(Letter(0), Letter(1)), (Letter(1), Letter(0))]);
        assert!(labeled.find(&start).is_none());
        assert!(labeled.find(&start.renumber(&swap)).is_some());
        let path = LabeledPath::new(&start, &parse_moves("btbttt").unwrap()).unwrap();
        assert!(path.winners().chain(path.losers()).all(|a| a != Letter(3)));
        let v = reduced.find(&start).unwrap();
        let red = RauzyPath::new(&reduced, v, &path.moves).unwrap();
        assert!(red.is_closed());
        let report = path_matrix(&path, &start, 1e-12).unwrap();
        assert!(report.primitive);
        let central: LabeledPermutation = "1 2 3 0 4 / 4 3 2 0 1".parse().unwrap();
        let rotated = red.rotate(3);
        assert_eq!(moves_to_string(&rotated.moves), "tttbtb");
        let lift = lift_path(&reduced, &rotated, &central).unwrap();
        assert!(lift.all_losers());
        assert_eq!(lift_path(&reduced, &red, &central), Err(Error::BaseMismatch));
    }
}
