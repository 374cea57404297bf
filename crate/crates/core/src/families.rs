//! Explicit families of loops: closed-form matrices, the Rauzy paths that
//! produce them, their characteristic polynomials and dilatation bounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{gt_sqrt2_affine, lt_sqrt2_affine, BigMatrix, IntPolynomial, PerronRoot};
use crate::paths::{renumbering_matrix, LabeledPath};
use crate::perm::{
    family_genperm_odd, moves_to_string, parse_moves, GeneralizedPermutation, LabeledPermutation, Letter, MoveType,
};

/// Most precision escalations tried when a bound is too close to call.
const MAX_ESCALATIONS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyKind {
    /// `2g` letters, one zero of order `2g - 2`.
    A1,
    /// `2g + 1` letters, two zeros of order `g - 1`, even `g`.
    A2Even,
    /// Same, odd `g`.
    A2Odd,
    /// Quadratic differentials on the sphere, odd `g >= 3`.
    B,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::A1 => "A1",
            FamilyKind::A2Even => "A2-even",
            FamilyKind::A2Odd => "A2-odd",
            FamilyKind::B => "B",
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Family selector as given on the command line; `A2` resolves by parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyChoice {
    A1,
    A2,
    B,
}

impl FromStr for FamilyChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(FamilyChoice::A1),
            "A2" => Ok(FamilyChoice::A2),
            "B" => Ok(FamilyChoice::B),
            _ => Err(Error::Parse(format!("unknown family {s:?}, expected A1, A2 or B"))),
        }
    }
}

impl FamilyChoice {
    pub fn spec(self, g: u32) -> Result<FamilySpec> {
        let which = match self {
            FamilyChoice::A1 => FamilyKind::A1,
            FamilyChoice::A2 if g % 2 == 0 => FamilyKind::A2Even,
            FamilyChoice::A2 => FamilyKind::A2Odd,
            FamilyChoice::B => FamilyKind::B,
        };
        FamilySpec::new(which, g)
    }

    /// The values of `g` in `lo..=hi` the family is defined for.
    pub fn genera(self, lo: u32, hi: u32) -> Vec<u32> {
        (lo..=hi)
            .filter(|&g| match self {
                FamilyChoice::A1 | FamilyChoice::A2 => g >= 2,
                FamilyChoice::B => g >= 3 && g % 2 == 1,
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilySpec {
    pub which: FamilyKind,
    pub g: u32,
}

impl FamilySpec {
    pub fn new(which: FamilyKind, g: u32) -> Result<Self> {
        let ok = match which {
            FamilyKind::A1 => g >= 2,
            FamilyKind::A2Even => g >= 2 && g % 2 == 0,
            FamilyKind::A2Odd => g >= 3 && g % 2 == 1,
            FamilyKind::B => g >= 3 && g % 2 == 1,
        };
        if !ok {
            return Err(Error::Range(format!("{which} is not defined for g = {g}")));
        }
        Ok(FamilySpec { which, g })
    }

    pub fn dimension(&self) -> usize {
        match self.which {
            FamilyKind::A1 => 2 * self.g as usize,
            _ => 2 * self.g as usize + 1,
        }
    }
}

fn from_entries(n: usize, entries: &[(usize, usize, i64)]) -> BigMatrix {
    let mut m = BigMatrix::zeros(n);
    for &(i, j, v) in entries {
        m.set(i - 1, j - 1, BigInt::from(v));
    }
    m
}

/// `M_g`, 1-based: `m_{1,g} = 2`, `m_{1,j} = 1` for `j = g+1..2g`,
/// `m_{i,i+g-1} = 1` for `i = 2..g`, `m_{i,i-g} = 1` for `i = g+1..2g-1`,
/// `m_{2g,g} = m_{2g,2g} = 1`.
fn a1_matrix(g: usize) -> BigMatrix {
    let n = 2 * g;
    let mut e = vec![(1, g, 2)];
    e.extend((g + 1..=n).map(|j| (1, j, 1)));
    e.extend((2..=g).map(|i| (i, i + g - 1, 1)));
    e.extend((g + 1..n).map(|i| (i, i - g, 1)));
    e.extend([(n, g, 1), (n, n, 1)]);
    from_entries(n, &e)
}

/// `N_g` for even `g`, 1-based on `n = 2g + 1` letters.
fn a2_even_matrix(g: usize) -> BigMatrix {
    let n = 2 * g + 1;
    let mut e = vec![(1, g, 2), (1, g + 1, 2), (1, n, 1)];
    e.extend((g + 2..=2 * g).map(|j| (1, j, 1)));
    e.extend((2..=g + 1).map(|i| (i, g - 1 + i, 1)));
    e.extend((1..g).map(|j| (g + 1 + j, j, 1)));
    e.extend([(n, g, 1), (n, g + 1, 1), (n, n, 1)]);
    from_entries(n, &e)
}

/// `V-hat` for the quadratic family: the identity with the entries below
/// overwritten, 1-based on `n = 2g + 1` letters. The diagonal 2 sits at
/// `g + 2`.
fn b_v_hat(g: usize) -> BigMatrix {
    let n = 2 * g + 1;
    let mut m = BigMatrix::identity(n);
    for (i, j, v) in [
        (1, 1, 2),
        (1, n, 1),
        (g + 1, 1, 2),
        (g + 1, g + 2, 1),
        (g + 1, n, 1),
        (g + 2, g + 1, 1),
        (g + 2, g + 2, 2),
        (n, 1, 1),
        (n, g + 1, 1),
    ] {
        m.set(i - 1, j - 1, BigInt::from(v));
    }
    m
}

/// The cyclic shift `P[i][i+1] = 1`, `P[n][1] = 1`.
fn cyclic_shift(n: usize) -> BigMatrix {
    let image: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    BigMatrix::permutation(&image).expect("a permutation")
}

/// Matrices of a family member. `v_hat` and `p` are present when the
/// closed form is a product.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyMatrix {
    pub spec: FamilySpec,
    pub matrix: BigMatrix,
    pub v_hat: Option<BigMatrix>,
    pub p: Option<BigMatrix>,
}

/// Closed-form matrix of a family member. `A2-odd` has no closed form and
/// is produced by its path.
pub fn matrix_family(spec: FamilySpec) -> Result<FamilyMatrix> {
    let g = spec.g as usize;
    Ok(match spec.which {
        FamilyKind::A1 => FamilyMatrix { spec, matrix: a1_matrix(g), v_hat: None, p: None },
        FamilyKind::A2Even => FamilyMatrix { spec, matrix: a2_even_matrix(g), v_hat: None, p: None },
        FamilyKind::A2Odd => {
            let path = family_path(spec)?;
            FamilyMatrix { spec, matrix: path.v, v_hat: Some(path.v_hat), p: Some(path.p) }
        }
        FamilyKind::B => {
            let (v_hat, p) = (b_v_hat(g), cyclic_shift(2 * g + 1));
            FamilyMatrix { spec, matrix: v_hat.mul(&p), v_hat: Some(v_hat), p: Some(p) }
        }
    })
}

/// `pi` for the hyperelliptic families and its half-turn companion `pi'`.
pub fn family_permutations(spec: FamilySpec) -> Result<(LabeledPermutation, LabeledPermutation)> {
    let g = spec.g;
    let (top, bottom): (Vec<u32>, Vec<u32>) = match spec.which {
        FamilyKind::A1 => {
            let n = 2 * g;
            let mut bottom = vec![n];
            bottom.extend((1..=g).rev());
            bottom.extend((g + 1..n).rev());
            ((1..=n).collect(), bottom)
        }
        FamilyKind::A2Even | FamilyKind::A2Odd => {
            let n = 2 * g + 1;
            let mut bottom = vec![n];
            bottom.extend((1..=g + 1).rev());
            bottom.extend((g + 2..=2 * g).rev());
            ((1..=n).collect(), bottom)
        }
        FamilyKind::B => return Err(Error::Range("the quadratic family has a generalized permutation".into())),
    };
    let pi = LabeledPermutation::from_ids(&top, &bottom)?;
    let rotated = pi.rotated();
    Ok((pi, rotated))
}

pub fn family_moves(spec: FamilySpec) -> Vec<MoveType> {
    let g = spec.g as usize;
    let word = match spec.which {
        FamilyKind::A1 => "b".repeat(g) + "t",
        FamilyKind::A2Even => "b".repeat(g + 1) + "tt",
        FamilyKind::A2Odd => "b".repeat(g) + "tbtt",
        FamilyKind::B => "tbtbtb".to_string(),
    };
    parse_moves(&word).expect("valid word")
}

/// A family path followed from its start, with its matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyPath {
    pub spec: FamilySpec,
    pub start: String,
    pub end: String,
    pub moves: String,
    /// `(winner, loser)` of each step.
    pub steps: Vec<(Letter, Letter)>,
    pub v_hat: BigMatrix,
    pub p: BigMatrix,
    pub v: BigMatrix,
}

fn genperm_path(spec: FamilySpec) -> Result<FamilyPath> {
    let start: GeneralizedPermutation = family_genperm_odd(spec.g)?;
    let moves = family_moves(spec);
    let alphabet = start.alphabet();
    let index = |a: Letter| alphabet.binary_search(&a).expect("letter");
    let mut cur = start.clone();
    let mut steps = Vec::new();
    let mut v_hat = BigMatrix::identity(alphabet.len());
    for &eps in &moves {
        let (next, winner, loser) = cur.rauzy_move(eps)?;
        v_hat.add_column(index(winner), index(loser));
        steps.push((winner, loser));
        cur = next;
    }
    let r = cur
        .renumbering_to(&start)
        .ok_or_else(|| Error::EndpointMismatch(format!("{cur} is not a renumbering of {start}")))?;
    let image: Vec<usize> = alphabet.iter().map(|&a| index(r.apply(a))).collect();
    let p = BigMatrix::permutation(&image)?;
    let v = v_hat.mul(&p);
    Ok(FamilyPath {
        spec,
        start: start.to_string(),
        end: cur.to_string(),
        moves: moves_to_string(&moves),
        steps,
        v_hat,
        p,
        v,
    })
}

/// The family's Rauzy path: from `pi'` to a renumbering of `pi` for the
/// hyperelliptic families, a loop up to renumbering for the quadratic one.
pub fn family_path(spec: FamilySpec) -> Result<FamilyPath> {
    if spec.which == FamilyKind::B {
        return genperm_path(spec);
    }
    let (pi, rotated) = family_permutations(spec)?;
    let moves = family_moves(spec);
    let path = LabeledPath::new(&rotated, &moves)?;
    let p = renumbering_matrix(path.end(), &pi)
        .map_err(|_| Error::EndpointMismatch(format!("{} does not end at a renumbering of {pi}", path.word())))?;
    let v_hat = path.matrix();
    let v = v_hat.mul(&p);
    Ok(FamilyPath {
        spec,
        start: rotated.to_string(),
        end: path.end().to_string(),
        moves: path.word(),
        steps: path.steps.clone(),
        v_hat,
        p,
        v,
    })
}

/// `(X + 1) chi = ...` or `chi = (X - 1) ...`: the closed form and how the
/// characteristic polynomial relates to it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolynomialIdentity {
    pub spec: FamilySpec,
    pub charpoly: IntPolynomial,
    /// Cofactor `c` with `c * chi = closed` (hyperelliptic families) or
    /// `chi = c * closed` (quadratic family).
    pub cofactor: IntPolynomial,
    pub closed_form: IntPolynomial,
    pub holds: bool,
    /// The polynomial whose largest root is the dilatation.
    pub dilatation_polynomial: IntPolynomial,
}

/// The closed-form polynomial of a family member.
pub fn closed_form(spec: FamilySpec) -> IntPolynomial {
    let g = spec.g as usize;
    match spec.which {
        FamilyKind::A1 => IntPolynomial::from_terms(&[(2 * g + 1, 1), (2 * g - 1, -2), (2, -2), (0, 1)]),
        FamilyKind::A2Even => {
            IntPolynomial::from_terms(&[(2 * g + 2, 1), (2 * g, -2), (g + 1, -2), (2, -2), (0, 1)])
        }
        FamilyKind::A2Odd => {
            IntPolynomial::from_terms(&[(2 * g + 2, 1), (2 * g, -2), (g + 2, -4), (g, 4), (2, 2), (0, -1)])
        }
        FamilyKind::B => IntPolynomial::from_terms(&[(2 * g, 1), (2 * g - 1, -1), (g, -4), (1, -1), (0, 1)]),
    }
}

pub fn verify_polynomial_identity(spec: FamilySpec) -> Result<PolynomialIdentity> {
    let m = matrix_family(spec)?;
    let charpoly = m.matrix.charpoly();
    let closed = closed_form(spec);
    let (cofactor, holds) = match spec.which {
        FamilyKind::B => {
            let c = IntPolynomial::linear(1);
            let holds = c.mul(&closed) == charpoly;
            (c, holds)
        }
        _ => {
            let c = IntPolynomial::from_i64(&[1, 1]);
            let holds = c.mul(&charpoly) == closed;
            (c, holds)
        }
    };
    let dilatation_polynomial = if spec.which == FamilyKind::B { closed.clone() } else { charpoly.clone() };
    Ok(PolynomialIdentity { spec, charpoly, cofactor, closed_form: closed, holds, dilatation_polynomial })
}

/// A certified strict inequality `lower < theta < upper`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub g: u32,
    pub theta: PerronRoot,
    pub target: String,
    /// Distance from the root estimate to the nearer bound.
    pub margin: f64,
    pub width: f64,
    pub escalations: usize,
    pub pass: bool,
}

/// Bounds `s1 sqrt2 + t1 < theta < s2 sqrt2 + t2`.
struct AffineBounds {
    lower: (BigRational, BigRational),
    upper: (BigRational, BigRational),
    target: String,
}

fn pow2(k: i64) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    if k >= 0 {
        num_traits::pow(two, k as usize)
    } else {
        num_traits::pow(two, (-k) as usize).recip()
    }
}

fn sqrt2_bounds(spec: FamilySpec) -> Result<AffineBounds> {
    let g = spec.g as i64;
    let (zero, one) = (BigRational::zero(), BigRational::one());
    match spec.which {
        FamilyKind::A1 => Ok(AffineBounds {
            lower: (one.clone(), zero),
            upper: (one, pow2(1 - g)),
            target: format!("sqrt(2) < theta < sqrt(2) + 2^(1-{g})"),
        }),
        FamilyKind::A2Even | FamilyKind::A2Odd => {
            // 4 / sqrt2^g is rational for even g and a rational multiple of sqrt2 for odd g
            let upper = if g % 2 == 0 {
                (one.clone(), pow2(2 - g / 2))
            } else {
                (&one + pow2(2 - (g + 1) / 2), zero.clone())
            };
            Ok(AffineBounds {
                lower: (one, zero),
                upper,
                target: format!("sqrt(2) < theta < sqrt(2) + 4/sqrt(2)^{g}"),
            })
        }
        FamilyKind::B => Err(Error::Range("the quadratic family has no sqrt(2) bound".into())),
    }
}

fn affine_f64(b: &(BigRational, BigRational)) -> f64 {
    use num_traits::ToPrimitive;
    b.0.to_f64().unwrap_or(f64::NAN) * std::f64::consts::SQRT_2 + b.1.to_f64().unwrap_or(f64::NAN)
}

/// Refines `root` until it separates from every bound by more than ten
/// interval widths, then decides the inequalities exactly.
fn certify(
    g: u32,
    mut root: PerronRoot,
    target: String,
    bounds: impl Fn(&PerronRoot) -> (bool, f64),
) -> Result<BoundReport> {
    let mut escalations = 0;
    loop {
        let (holds, margin) = bounds(&root);
        let width = root.width();
        if margin > 10.0 * width || escalations == MAX_ESCALATIONS {
            let pass = holds && margin > 10.0 * width;
            return Ok(BoundReport { g, theta: root, target, margin, width, escalations, pass });
        }
        escalations += 1;
        root = root.refine(root.precision * 1e-3)?;
    }
}

fn dilatation(spec: FamilySpec, precision: f64) -> Result<PerronRoot> {
    let id = verify_polynomial_identity(spec)?;
    PerronRoot::isolate(&id.dilatation_polynomial, precision)
}

/// Certifies the `sqrt(2)` bounds of a hyperelliptic family member.
pub fn verify_bounds(spec: FamilySpec, precision: f64) -> Result<BoundReport> {
    let b = sqrt2_bounds(spec)?;
    let root = dilatation(spec, precision)?;
    let (lo_f, hi_f) = (affine_f64(&b.lower), affine_f64(&b.upper));
    certify(spec.g, root, b.target, |r| {
        let holds = gt_sqrt2_affine(&r.lo, &b.lower.0, &b.lower.1) && lt_sqrt2_affine(&r.hi, &b.upper.0, &b.upper.1);
        (holds, (r.value - lo_f).min(hi_f - r.value))
    })
}

/// Dilatation of one member of the quadratic family with its envelope
/// `theta - 1 < 4/g`, and the comparison with `1 + 1/g`, which is reported
/// but not asserted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeCase {
    pub bound: BoundReport,
    pub below_one_plus_inverse_g: Option<bool>,
}

pub fn verify_envelope(g: u32, precision: f64) -> Result<EnvelopeCase> {
    let spec = FamilySpec::new(FamilyKind::B, g)?;
    let root = dilatation(spec, precision)?;
    let one = BigRational::one();
    let envelope = &one + BigRational::new(BigInt::from(4), BigInt::from(g));
    let tight = &one + BigRational::new(BigInt::one(), BigInt::from(g));
    let env_f = 1.0 + 4.0 / f64::from(g);
    let bound = certify(g, root, format!("1 < theta < 1 + 4/{g}"), |r| {
        (r.above(&one) && r.below(&envelope), (r.value - 1.0).min(env_f - r.value))
    })?;
    let below_one_plus_inverse_g = if bound.theta.below(&tight) {
        Some(true)
    } else if bound.theta.above(&tight) {
        Some(false)
    } else {
        None
    };
    Ok(EnvelopeCase { bound, below_one_plus_inverse_g })
}

/// True iff each root is certified strictly below the previous one.
pub fn strictly_decreasing(roots: &[PerronRoot]) -> bool {
    roots.windows(2).all(|w| w[1].hi < w[0].lo)
}

/// Orders of the quadratic differential on the sphere: two zeros of order
/// `g - 2` and `2g` poles.
pub fn sphere_orders(g: u32) -> Vec<i64> {
    let mut orders = vec![i64::from(g) - 2; 2];
    orders.extend(std::iter::repeat(-1).take(2 * g as usize));
    orders
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &BigMatrix) -> Vec<Vec<i64>> {
        use num_traits::ToPrimitive;
        m.rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect()
    }

    #[test]
    fn a1_at_genus_two() {
        let m = matrix_family(FamilySpec::new(FamilyKind::A1, 2).unwrap()).unwrap();
        assert_eq!(rows(&m.matrix), vec![vec![0, 2, 1, 1], vec![0, 0, 1, 0], vec![1, 0, 0, 0], vec![0, 1, 0, 1]]);
    }

    #[test]
    fn a1_first_row() {
        for g in 2..8usize {
            let m = rows(&a1_matrix(g));
            let mut want = vec![0; 2 * g];
            want[g - 1] = 2;
            for w in &mut want[g..] {
                *w = 1;
            }
            assert_eq!(m[0], want);
        }
    }

    #[test]
    fn a1_steps_at_genus_two() {
        let p = family_path(FamilySpec::new(FamilyKind::A1, 2).unwrap()).unwrap();
        let steps: Vec<(u32, u32)> = p.steps.iter().map(|(w, l)| (w.0, l.0)).collect();
        assert_eq!(steps, vec![(1, 4), (1, 2), (4, 1)]);
    }

    #[test]
    fn quadratic_shift() {
        let p = rows(&cyclic_shift(7));
        assert_eq!(p[6][0], 1);
        assert_eq!(p[0][1], 1);
    }

    #[test]
    fn specs() {
        assert!(FamilySpec::new(FamilyKind::A2Even, 3).is_err());
        assert!(FamilySpec::new(FamilyKind::B, 4).is_err());
        assert_eq!(FamilyChoice::A2.spec(5).unwrap().which, FamilyKind::A2Odd);
        assert_eq!(FamilyChoice::B.genera(2, 9), vec![3, 5, 7, 9]);
    }
}
