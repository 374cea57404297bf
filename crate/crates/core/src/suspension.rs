//! Suspension data over interval exchanges, their polygons, singularity
//! data of a permutation, induction on suspensions, and pseudo-Anosov
//! certificates for closed loops.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::diagram::{Family, RauzyDiagram};
use crate::error::{Error, Result};
use crate::linalg::{eigenvector, BigMatrix, IntPolynomial, PerronRoot, SignRule, EIGEN_TOLERANCE};
use crate::loops::LoopWire;
use crate::paths::{renumbering_matrix, LabeledPath};
use crate::perm::{family_pi, family_tau, moves_to_string, LabeledPermutation, Letter, MoveType};

/// `(pi, lambda, tau)`: lengths and heights indexed by the sorted alphabet.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuspensionDatum {
    pub permutation: LabeledPermutation,
    pub lambda: Vec<f64>,
    pub tau: Vec<f64>,
}

impl SuspensionDatum {
    pub fn new(permutation: LabeledPermutation, lambda: Vec<f64>, tau: Vec<f64>) -> Result<Self> {
        let d = permutation.len();
        if lambda.len() != d || tau.len() != d {
            return Err(Error::InvalidPermutation(format!(
                "{d} letters but {} lengths and {} heights",
                lambda.len(),
                tau.len()
            )));
        }
        if let Some(x) = lambda.iter().find(|&&x| !(x > 0.0)) {
            return Err(Error::Range(format!("lengths must be positive, got {x}")));
        }
        Ok(SuspensionDatum { permutation, lambda, tau })
    }

    fn index(&self, a: Letter) -> usize {
        self.permutation.letter_index(a).expect("letter in alphabet")
    }

    pub fn zeta(&self, a: Letter) -> (f64, f64) {
        let i = self.index(a);
        (self.lambda[i], self.tau[i])
    }

    pub fn total_length(&self) -> f64 {
        self.lambda.iter().sum()
    }

    pub fn validate(&self) -> MarginReport {
        validate_suspension(&self.permutation, &self.lambda, &self.tau)
    }

    /// The same datum with letters renamed so that its permutation becomes
    /// `reference`, which must be a renumbering of it.
    pub fn renumbered_to(&self, reference: &LabeledPermutation) -> Result<SuspensionDatum> {
        let r = self
            .permutation
            .renumbering_to(reference)
            .ok_or_else(|| Error::EndpointMismatch(format!("{} is not a renumbering of {reference}", self.permutation)))?;
        let d = self.lambda.len();
        let (mut lambda, mut tau) = (vec![0.0; d], vec![0.0; d]);
        for (i, &a) in self.permutation.alphabet().iter().enumerate() {
            let j = reference.letter_index(r.apply(a)).expect("same alphabet");
            lambda[j] = self.lambda[i];
            tau[j] = self.tau[i];
        }
        Ok(SuspensionDatum { permutation: reference.clone(), lambda, tau })
    }
}

/// Partial sums of `tau` along both rows. The datum is a suspension iff all
/// top sums are positive and all bottom sums negative.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub valid: bool,
    /// `min(top sums, -bottom sums)`: positive iff valid.
    pub margin: f64,
    pub top_sums: Vec<f64>,
    pub bottom_sums: Vec<f64>,
}

pub fn validate_suspension(permutation: &LabeledPermutation, lambda: &[f64], tau: &[f64]) -> MarginReport {
    let sums = |row: &[Letter]| -> Vec<f64> {
        let mut acc = 0.0;
        row[..row.len() - 1]
            .iter()
            .map(|&a| {
                acc += tau[permutation.letter_index(a).expect("letter")];
                acc
            })
            .collect()
    };
    let top_sums = sums(permutation.top());
    let bottom_sums = sums(permutation.bottom());
    let margin = top_sums
        .iter()
        .copied()
        .chain(bottom_sums.iter().map(|s| -s))
        .fold(f64::INFINITY, f64::min);
    let positive = lambda.iter().all(|&x| x > 0.0);
    MarginReport { valid: positive && margin > 0.0, margin, top_sums, bottom_sums }
}

/// The two broken lines of a suspension, from the origin to `sum zeta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonSurface {
    pub top: Vec<(f64, f64)>,
    pub bottom: Vec<(f64, f64)>,
    pub top_letters: Vec<Letter>,
    pub bottom_letters: Vec<Letter>,
}

fn chain(datum: &SuspensionDatum, row: &[Letter]) -> Vec<(f64, f64)> {
    let mut p = (0.0, 0.0);
    let mut out = vec![p];
    for &a in row {
        let (x, y) = datum.zeta(a);
        p = (p.0 + x, p.1 + y);
        out.push(p);
    }
    out
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

fn segments_meet(p1: (f64, f64), p2: (f64, f64), q1: (f64, f64), q2: (f64, f64)) -> bool {
    let d1 = cross(q1, q2, p1);
    let d2 = cross(q1, q2, p2);
    let d3 = cross(p1, p2, q1);
    let d4 = cross(p1, p2, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        || [(d1, q1, q2, p1), (d2, q1, q2, p2), (d3, p1, p2, q1), (d4, p1, p2, q2)]
            .iter()
            .any(|&(d, a, b, p)| d == 0.0 && on_segment(a, b, p))
}

fn on_segment(a: (f64, f64), b: (f64, f64), p: (f64, f64)) -> bool {
    p.0 >= a.0.min(b.0) && p.0 <= a.0.max(b.0) && p.1 >= a.1.min(b.1) && p.1 <= a.1.max(b.1)
}

impl PolygonSurface {
    /// Area by the shoelace formula over the top line
    /// followed by the reversed bottom line.
    pub fn area(&self) -> f64 {
        let ring: Vec<(f64, f64)> = self.top.iter().chain(self.bottom.iter().rev().skip(1)).copied().collect();
        let n = ring.len();
        let twice: f64 = (0..n)
            .map(|i| {
                let (a, b) = (ring[i], ring[(i + 1) % n]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum();
        twice.abs() / 2.0
    }

    pub fn endpoint_gap(&self) -> f64 {
        let (a, b) = (self.top.last().expect("nonempty"), self.bottom.last().expect("nonempty"));
        (a.0 - b.0).hypot(a.1 - b.1)
    }

    /// SVG drawing; the two sides of each letter share a color.
    pub fn to_svg(&self) -> String {
        let pts = self.top.iter().chain(&self.bottom);
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in pts {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let scale = 400.0 / (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
        let map = |p: (f64, f64)| ((p.0 - x0) * scale + 10.0, (y1 - p.1) * scale + 10.0);
        let mut letters: Vec<Letter> = self.top_letters.clone();
        letters.sort();
        let color = |a: Letter| {
            let i = letters.binary_search(&a).unwrap_or(0);
            format!("hsl({},70%,40%)", 360 * i / letters.len().max(1))
        };
        let mut svg = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\">\n",
            (x1 - x0) * scale + 20.0,
            (y1 - y0) * scale + 20.0
        );
        for (line, letters) in [(&self.top, &self.top_letters), (&self.bottom, &self.bottom_letters)] {
            for (k, &a) in letters.iter().enumerate() {
                let (p, q) = (map(line[k]), map(line[k + 1]));
                let _ = writeln!(
                    svg,
                    "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"{}\" stroke-width=\"2\"><title>{a}</title></line>",
                    p.0,
                    p.1,
                    q.0,
                    q.1,
                    color(a)
                );
            }
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Polygon of a suspension datum. Broken lines that cross each other need
/// zippered rectangles and are rejected.
pub fn build_polygon(datum: &SuspensionDatum) -> Result<PolygonSurface> {
    let p = &datum.permutation;
    let top = chain(datum, p.top());
    let bottom = chain(datum, p.bottom());
    let d = p.len();
    for i in 0..d {
        for j in 0..d {
            let shares_origin = i == 0 && j == 0;
            let shares_end = i == d - 1 && j == d - 1;
            if shares_origin || shares_end {
                continue;
            }
            if segments_meet(top[i], top[i + 1], bottom[j], bottom[j + 1]) {
                return Err(Error::SelfIntersection);
            }
        }
    }
    Ok(PolygonSurface { top, bottom, top_letters: p.top().to_vec(), bottom_letters: p.bottom().to_vec() })
}

/// Which point of the surface sits at the left end of the interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparatrixKind {
    Singular,
    RegularMarked,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSignature {
    /// Orders of the cone points, marked points as 0, in decreasing order.
    pub orders: Vec<u32>,
    pub genus: u32,
    /// Matrix dimension, `2g + #points - 1`.
    pub dimension: usize,
    /// Order of the point at the left end of the interval.
    pub origin_order: u32,
    pub kind: SeparatrixKind,
    pub family: Option<Family>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Cone points of the suspension surface of `p`. Vertices of the polygon
/// are slots `T_0..T_d` on the top line and `B_0..B_d` on the bottom line;
/// the side of letter `a` glues `T_{t(a)-1} ~ B_{b(a)-1}` and
/// `T_{t(a)} ~ B_{b(a)}`, and the lines share their endpoints. A class
/// meeting `k` interior top slots has cone angle `2 pi k`, so order `k - 1`.
pub fn stratum_signature(p: &LabeledPermutation) -> Result<StratumSignature> {
    if !p.is_irreducible() {
        return Err(Error::Reducible(p.to_string()));
    }
    let d = p.len();
    let b = |i: usize| d + 1 + i;
    let mut parent: Vec<usize> = (0..2 * (d + 1)).collect();
    let union = |x: usize, y: usize, parent: &mut Vec<usize>| {
        let (rx, ry) = (find(parent, x), find(parent, y));
        parent[rx] = ry;
    };
    union(0, b(0), &mut parent);
    union(d, b(d), &mut parent);
    for &a in p.top() {
        let t = p.top_position(a).expect("letter") + 1;
        let s = p.bottom_position(a).expect("letter") + 1;
        union(t - 1, b(s - 1), &mut parent);
        union(t, b(s), &mut parent);
    }
    let mut classes: Vec<(usize, u32)> = Vec::new();
    for i in 0..=d {
        let root = find(&mut parent, i);
        let interior = u32::from(i > 0 && i < d);
        match classes.iter_mut().find(|c| c.0 == root) {
            Some(c) => c.1 += interior,
            None => classes.push((root, interior)),
        }
    }
    let origin_root = find(&mut parent, 0);
    let origin_order = classes.iter().find(|c| c.0 == origin_root).map(|c| c.1).unwrap_or(0).saturating_sub(1);
    let mut orders: Vec<u32> = classes.iter().map(|c| c.1.saturating_sub(1)).collect();
    orders.sort_unstable_by(|a, b| b.cmp(a));
    let genus = (orders.iter().sum::<u32>() + 2) / 2;
    let reduced = p.reduce();
    let n = d as u32;
    let family = if family_tau(n).map(|t| t.reduce() == reduced).unwrap_or(false) {
        Some(Family::Hyp)
    } else if n >= 3 && family_pi(n - 1).map(|t| t.reduce() == reduced).unwrap_or(false) {
        Some(Family::Marked)
    } else {
        None
    };
    Ok(StratumSignature {
        dimension: 2 * genus as usize + orders.len() - 1,
        orders,
        genus,
        origin_order,
        kind: if origin_order == 0 { SeparatrixKind::RegularMarked } else { SeparatrixKind::Singular },
        family,
    })
}

/// One step of induction on a suspension: the winner's vector loses the
/// loser's vector, for both coordinates.
pub fn suspension_rauzy_step(datum: &SuspensionDatum) -> Result<(SuspensionDatum, MoveType)> {
    let p = &datum.permutation;
    let (t, b) = (p.top_last(), p.bottom_last());
    let (lt, lb) = (datum.lambda[datum.index(t)], datum.lambda[datum.index(b)]);
    let eps = if lt > lb {
        MoveType::Top
    } else if lb > lt {
        MoveType::Bottom
    } else {
        return Err(Error::Tie { top: t, bottom: b });
    };
    let mv = p.rauzy_move_unchecked(eps);
    let (w, l) = (datum.index(mv.winner), datum.index(mv.loser));
    let mut next = datum.clone();
    next.permutation = mv.target;
    next.lambda[w] -= datum.lambda[l];
    next.tau[w] -= datum.tau[l];
    Ok((next, eps))
}

/// Induction step followed by the Teichmuller flow that brings the total
/// length back to 1.
pub fn renormalized_step(datum: &SuspensionDatum) -> Result<(SuspensionDatum, MoveType)> {
    let (next, eps) = suspension_rauzy_step(datum)?;
    let t = -next.total_length().ln();
    Ok((teich_flow(&next, t), eps))
}

/// `g_t`: lengths scale by `e^t`, heights by `e^-t`.
pub fn teich_flow(datum: &SuspensionDatum, t: f64) -> SuspensionDatum {
    let (a, b) = (t.exp(), (-t).exp());
    SuspensionDatum {
        permutation: datum.permutation.clone(),
        lambda: datum.lambda.iter().map(|x| x * a).collect(),
        tau: datum.tau.iter().map(|x| x * b).collect(),
    }
}

/// Measured quantities behind a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `|V lambda - theta lambda| / |lambda|`.
    pub lambda_eigen: f64,
    /// `|V tau - tau / theta| / |tau|`.
    pub tau_eigen: f64,
    /// Relative distance between the induced lengths and `lambda / theta`.
    pub round_trip_lambda: f64,
    /// Relative distance between the induced heights and `theta tau`.
    pub round_trip_tau: f64,
    /// Suspension margin of the starting datum.
    pub margin: f64,
    /// Global sign applied to the computed `1/theta`-eigenvector.
    pub tau_sign: i8,
    /// Largest vertex mismatch of the half-turn polygon comparison, when run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseudoAnosovCertificate {
    #[serde(rename = "loop")]
    pub path: LoopWire,
    pub matrix: BigMatrix,
    pub charpoly: IntPolynomial,
    pub dilatation: PerronRoot,
    pub lambda: Vec<f64>,
    pub tau: Vec<f64>,
    pub kind: SeparatrixKind,
    pub residuals: Residuals,
    pub start: LabeledPermutation,
}

fn rel_dist(a: &[f64], b: &[f64]) -> f64 {
    let num = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    let den = b.iter().map(|y| y * y).sum::<f64>().sqrt();
    num / den
}

/// Follows `moves` from `start`, checking that the lengths select exactly
/// those moves, and renames the result onto `reference`.
fn induce_along(start: &SuspensionDatum, moves: &[MoveType], reference: &LabeledPermutation) -> Result<SuspensionDatum> {
    let mut cur = start.clone();
    for (k, &want) in moves.iter().enumerate() {
        let (next, got) = suspension_rauzy_step(&cur)?;
        if got != want {
            return Err(Error::CertificationFailed(format!(
                "step {k}: lengths select {got}, the loop has {want}"
            )));
        }
        cur = next;
    }
    cur.renumbered_to(reference)
}

struct EigenDatum {
    v: BigMatrix,
    charpoly: IntPolynomial,
    theta: PerronRoot,
    datum: SuspensionDatum,
    residuals: Residuals,
}

/// Eigen-datum of the path `moves` from `start`, whose endpoint is a
/// renumbering of `reference`, with the round trip checked.
fn eigen_datum(
    start: &LabeledPermutation,
    moves: &[MoveType],
    reference: &LabeledPermutation,
    precision: f64,
) -> Result<EigenDatum> {
    let path = LabeledPath::new(start, moves)?;
    let p = renumbering_matrix(path.end(), reference)
        .map_err(|_| Error::EndpointMismatch(format!("{} does not end at a renumbering of {reference}", path.word())))?;
    let v = path.matrix().mul(&p);
    if !v.is_primitive()? {
        return Err(Error::NotPrimitive);
    }
    let charpoly = v.charpoly();
    let theta = PerronRoot::isolate(&charpoly, precision)?;
    let lambda = eigenvector(&v, theta.value, SignRule::Positive)?;
    let tau = eigenvector(&v, 1.0 / theta.value, SignRule::Dominant)?;
    let mut chosen = None;
    for sign in [1i8, -1] {
        let t: Vec<f64> = tau.vector.iter().map(|x| x * f64::from(sign)).collect();
        let report = validate_suspension(start, &lambda.vector, &t);
        if report.valid {
            chosen = Some((sign, t, report.margin));
            break;
        }
    }
    let (tau_sign, tau_vec, margin) = chosen.ok_or_else(|| {
        Error::CertificationFailed("neither sign of the contracting eigenvector is a suspension".into())
    })?;
    let datum = SuspensionDatum::new(start.clone(), lambda.vector.clone(), tau_vec)?;
    let end = induce_along(&datum, moves, reference)?;
    let th = theta.value;
    let want_lambda: Vec<f64> = datum.lambda.iter().map(|x| x / th).collect();
    let want_tau: Vec<f64> = datum.tau.iter().map(|x| x * th).collect();
    let residuals = Residuals {
        lambda_eigen: lambda.residual,
        tau_eigen: tau.residual,
        round_trip_lambda: rel_dist(&end.lambda, &want_lambda),
        round_trip_tau: rel_dist(&end.tau, &want_tau),
        margin,
        tau_sign,
        rotation: None,
    };
    Ok(EigenDatum { v, charpoly, theta, datum, residuals })
}

fn check_residuals(r: &Residuals) -> Result<()> {
    let worst = r.lambda_eigen.max(r.tau_eigen).max(r.round_trip_lambda).max(r.round_trip_tau);
    if !(worst <= EIGEN_TOLERANCE) {
        return Err(Error::CertificationFailed(format!("relative residual {worst:e} above {EIGEN_TOLERANCE:e}")));
    }
    if !(r.margin > 0.0) {
        return Err(Error::CertificationFailed(format!("suspension margin {}", r.margin)));
    }
    Ok(())
}

/// Certificate for a closed primitive loop of a diagram, based at the stored
/// representative of its start vertex.
pub fn veech_pa_from_loop(
    diagram: &RauzyDiagram,
    start: usize,
    moves: &[MoveType],
    precision: f64,
) -> Result<PseudoAnosovCertificate> {
    let base = diagram.vertex(start);
    let e = eigen_datum(base, moves, base, precision)?;
    check_residuals(&e.residuals)?;
    Ok(PseudoAnosovCertificate {
        path: LoopWire { base: start, moves: moves_to_string(moves), primitive: Some(true) },
        matrix: e.v,
        charpoly: e.charpoly,
        dilatation: e.theta,
        lambda: e.datum.lambda,
        tau: e.datum.tau,
        kind: stratum_signature(base)?.kind,
        residuals: e.residuals,
        start: base.clone(),
    })
}

/// Rigid motion used when comparing two polygons.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Turn {
    /// `v -> E - v`, with `E` the common endpoint.
    Half,
    Identity,
}

/// Largest vertex distance between the polygon of `(rotated, zeta)` and the
/// image of the polygon of `(base, zeta)` under `turn`. Side labels must agree.
pub fn polygon_mismatch(base: &SuspensionDatum, rotated: &SuspensionDatum, turn: Turn) -> Result<f64> {
    let (p, q) = (&base.permutation, &rotated.permutation);
    let (mut top, mut bottom) = (chain(base, p.top()), chain(base, p.bottom()));
    let (mut top_letters, mut bottom_letters) = (p.top().to_vec(), p.bottom().to_vec());
    if turn == Turn::Half {
        let e = *top.last().expect("nonempty");
        let flip = |line: &[(f64, f64)]| line.iter().rev().map(|v| (e.0 - v.0, e.1 - v.1)).collect::<Vec<_>>();
        (top, bottom) = (flip(&bottom), flip(&top));
        top_letters = p.bottom().iter().rev().copied().collect();
        bottom_letters = p.top().iter().rev().copied().collect();
    }
    if top_letters != q.top() || bottom_letters != q.bottom() {
        return Err(Error::RotationMismatch(format!("side order {:?} against {q}", top_letters)));
    }
    let (qt, qb) = (chain(rotated, q.top()), chain(rotated, q.bottom()));
    let worst = top
        .iter()
        .zip(&qt)
        .chain(bottom.iter().zip(&qb))
        .map(|(a, b)| (a.0 - b.0).hypot(a.1 - b.1))
        .fold(0.0, f64::max);
    Ok(worst)
}

/// Certificate for a path from the half-turn companion `rotated` of `base`
/// to a renumbering of `base`. The map is the half turn followed by the
/// induction along the path.
pub fn rotation_closure_pa(
    base: &LabeledPermutation,
    rotated: &LabeledPermutation,
    moves: &[MoveType],
    precision: f64,
) -> Result<PseudoAnosovCertificate> {
    if &base.rotated() != rotated {
        return Err(Error::RotationMismatch(format!("{rotated} is not the half turn of {base}")));
    }
    let mut e = eigen_datum(rotated, moves, base, precision)?;
    let on_base = SuspensionDatum { permutation: base.clone(), ..e.datum.clone() };
    let mismatch = polygon_mismatch(&on_base, &e.datum, Turn::Half)?;
    let scale = e.datum.total_length();
    if !(mismatch <= EIGEN_TOLERANCE * scale) {
        return Err(Error::RotationMismatch(format!("vertices differ by {mismatch:e}")));
    }
    e.residuals.rotation = Some(mismatch);
    check_residuals(&e.residuals)?;
    Ok(PseudoAnosovCertificate {
        path: LoopWire { base: 0, moves: moves_to_string(moves), primitive: Some(true) },
        matrix: e.v,
        charpoly: e.charpoly,
        dilatation: e.theta,
        lambda: e.datum.lambda,
        tau: e.datum.tau,
        kind: stratum_signature(rotated)?.kind,
        residuals: e.residuals,
        start: rotated.clone(),
    })
}

/// Spin parity `floor(|n_1 - n_-1| / 4) mod 2` of a quadratic differential
/// on the sphere, from its singularity orders.
pub fn spin_parity(orders: &[i64]) -> Result<u8> {
    let total: i64 = orders.iter().sum();
    if total != -4 {
        return Err(Error::GaussBonnet(total));
    }
    let plus = orders.iter().filter(|&&k| k.rem_euclid(4) == 1).count() as i64;
    let minus = orders.iter().filter(|&&k| k.rem_euclid(4) == 3).count() as i64;
    Ok((((plus - minus).abs() / 4) % 2) as u8)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> LabeledPermutation {
        s.parse().unwrap()
    }

    #[test]
    fn torus_parallelogram() {
        let d = SuspensionDatum::new(perm("1 2 / 2 1"), vec![1.0, 1.0], vec![1.0, -1.0]).unwrap();
        assert!(d.validate().valid);
        let poly = build_polygon(&d).unwrap();
        assert_eq!(poly.top, vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        assert_eq!(poly.bottom, vec![(0.0, 0.0), (1.0, -1.0), (2.0, 0.0)]);
        assert_eq!(poly.area(), 2.0);
        assert_eq!(poly.endpoint_gap(), 0.0);
    }

    #[test]
    fn positive_heights_are_not_a_suspension() {
        let p = family_tau(5).unwrap();
        let r = validate_suspension(&p, &[1.0; 5], &[1.0; 5]);
        assert!(!r.valid);
        assert!(r.top_sums.iter().all(|&s| s > 0.0));
        assert!(r.bottom_sums.iter().all(|&s| s > 0.0));
    }

    #[test]
    fn signatures_of_the_families() {
        let s = stratum_signature(&family_tau(4).unwrap()).unwrap();
        assert_eq!((s.orders.clone(), s.genus, s.kind, s.family), (vec![2], 2, SeparatrixKind::Singular, Some(Family::Hyp)));
        let s = stratum_signature(&family_tau(5).unwrap()).unwrap();
        assert_eq!((s.orders.clone(), s.genus), (vec![1, 1], 2));
        let s = stratum_signature(&family_pi(4).unwrap()).unwrap();
        assert_eq!((s.orders.clone(), s.genus, s.dimension), (vec![2, 0], 2, 5));
        assert_eq!((s.kind, s.family), (SeparatrixKind::RegularMarked, Some(Family::Marked)));
    }

    #[test]
    fn spin() {
        assert_eq!(spin_parity(&[1, 1, -1, -1, -1, -1, -1, -1]), Ok(1));
        let mut g5 = vec![3, 3];
        g5.extend([-1; 10]);
        assert_eq!(spin_parity(&g5), Ok(1));
        assert_eq!(spin_parity(&[0, -1, -1, -1, -1]), Ok(1));
        assert_eq!(spin_parity(&[0, -1]), Err(Error::GaussBonnet(-1)));
    }

    #[test]
    fn flow_at_zero_is_identity() {
        let d = SuspensionDatum::new(perm("1 2 / 2 1"), vec![1.5, 0.5], vec![1.0, -2.0]).unwrap();
        assert_eq!(teich_flow(&d, 0.0), d);
    }

    #[test]
    fn step_tie() {
        let d = SuspensionDatum::new(perm("1 2 / 2 1"), vec![1.0, 1.0], vec![1.0, -1.0]).unwrap();
        assert!(matches!(suspension_rauzy_step(&d), Err(Error::Tie { .. })));
    }
}
