//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion on stderr, then asserts it.

use std::collections::BTreeSet;
use std::io::Write;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rauzy_core::diagram::{
    expected_hyp_size, expected_marked_labeled_size, expected_marked_reduced_size, DiagramMode, Family, RauzyDiagram,
};
use rauzy_core::families::{
    closed_form, family_moves, family_path, family_permutations, matrix_family, strictly_decreasing, verify_bounds,
    verify_envelope, verify_polynomial_identity, FamilyKind, FamilySpec,
};
use rauzy_core::loops::{
    check_loop_structure, enumerate_loops, loop_matrix, loop_roots, secondary_step_rules, Loop, DEFAULT_LOOP_BUDGET,
};
use rauzy_core::paths::LabeledPath;
use rauzy_core::suspension::{
    rotation_closure_pa, spin_parity, suspension_rauzy_step, validate_suspension, veech_pa_from_loop,
};
use rauzy_core::{BigMatrix, Iet, IntPolynomial, LabeledPermutation, Letter, PerronRoot};

const PRECISION: f64 = 1e-12;

fn line(criterion: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {criterion} [{name}]: {verdict} ({detail})");
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Wielandt: a nonnegative `d x d` matrix is primitive iff its
/// `(d-1)^2 + 1`-th power is positive.
fn wielandt(m: &BigMatrix) -> bool {
    let d = m.dim();
    let a: Vec<Vec<bool>> = (0..d).map(|i| (0..d).map(|j| m.get(i, j).sign() == Sign::Plus).collect()).collect();
    let mut p = a.clone();
    for _ in 1..(d - 1) * (d - 1) + 1 {
        p = (0..d)
            .map(|i| (0..d).map(|j| (0..d).any(|k| p[i][k] && a[k][j])).collect())
            .collect();
    }
    p.iter().all(|r| r.iter().all(|&x| x))
}

/// `det(x I - m)` by elimination, independent of the Hessenberg reduction.
fn det_shifted(m: &BigMatrix, x: i64) -> BigRational {
    let d = m.dim();
    let mut s = BigMatrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            let diag = if i == j { BigInt::from(x) } else { BigInt::zero() };
            s.set(i, j, diag - m.get(i, j));
        }
    }
    BigRational::from_integer(s.det())
}

/// `factor(x) * det(x I - m) == target(x)` at enough integer points to pin
/// a polynomial of the target's degree.
fn identity_at_points(m: &BigMatrix, factor: &IntPolynomial, target: &IntPolynomial) -> bool {
    let deg = target.degree().max(m.dim() + factor.degree()) as i64;
    (-deg / 2..=deg / 2 + 1).all(|x| factor.eval(&int(x)) * det_shifted(m, x) == target.eval(&int(x)))
}

/// Largest real root by Newton from above, in floating point.
fn newton_largest(p: &IntPolynomial, start: f64) -> f64 {
    let dp = p.derivative();
    let mut x = start;
    for _ in 0..200 {
        let step = p.eval_f64(x) / dp.eval_f64(x);
        x -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    x
}

#[test]
fn criterion_1_cardinalities() {
    let mut bad = Vec::new();
    for n in 4..=14u32 {
        let d = RauzyDiagram::build(&Family::Hyp.base(n).unwrap(), DiagramMode::Reduced).unwrap();
        if d.len() as u64 != (1 << (n - 1)) - 1 || d.len() as u64 != expected_hyp_size(n) {
            bad.push(format!("hyp n={n}: {}", d.len()));
        }
    }
    for n in 4..=10u32 {
        let base = Family::Marked.base(n).unwrap();
        let reduced = RauzyDiagram::build(&base, DiagramMode::Reduced).unwrap().len() as u64;
        let labeled = RauzyDiagram::build(&base, DiagramMode::Labeled).unwrap().len() as u64;
        let want = (1u64 << (n - 1)) - 1 + u64::from(n);
        if reduced != want || reduced != expected_marked_reduced_size(n) {
            bad.push(format!("marked reduced n={n}: {reduced}"));
        }
        if labeled != want * u64::from(n - 1) || labeled != expected_marked_labeled_size(n) {
            bad.push(format!("marked labeled n={n}: {labeled}"));
        }
    }
    let sizes_ok = bad.is_empty();
    line(1, "diagram sizes", sizes_ok, &if sizes_ok { "all sizes match".to_string() } else { bad.join("; ") });

    let d = RauzyDiagram::build(&Family::Hyp.base(4).unwrap(), DiagramMode::Labeled).unwrap();
    let built: BTreeSet<String> = d.vertices().iter().map(|p| p.to_string()).collect();
    let printed: BTreeSet<String> = [
        "0 2 3 4 / 4 3 2 0",
        "0 2 3 4 / 4 0 3 2",
        "0 2 4 3 / 4 2 0 3",
        "0 4 2 3 / 4 3 0 2",
        "0 3 4 2 / 4 3 0 2",
        "0 2 4 3 / 4 0 3 2",
        "0 4 2 3 / 4 3 2 0",
    ]
    .iter()
    .map(|s| s.parse::<LabeledPermutation>().unwrap().to_string())
    .collect();
    let missing: Vec<&String> = printed.difference(&built).collect();
    let extra: Vec<&String> = built.difference(&printed).collect();
    let figure_ok = missing.is_empty() && extra.is_empty();
    line(
        1,
        "seven vertices of D(tau_4) against the printed tables",
        figure_ok,
        &format!("{} vertices built; printed but not built {missing:?}; built but not printed {extra:?}", built.len()),
    );
    assert!(sizes_ok, "{bad:?}");
    assert!(figure_ok, "printed tables differ: missing {missing:?}, extra {extra:?}");
}

/// Exchange map evaluated from the two rows; `None` at a left endpoint.
fn exchange(p: &LabeledPermutation, lengths: &[BigRational], x: &BigRational) -> Option<BigRational> {
    let len = |a: Letter| &lengths[p.letter_index(a).unwrap()];
    let mut left = BigRational::zero();
    for &a in p.top() {
        let right = &left + len(a);
        if *x == left {
            return None;
        }
        if *x < right {
            let mut image_left = BigRational::zero();
            for &b in p.bottom().iter().take_while(|&&b| b != a) {
                image_left += len(b);
            }
            return Some(x - &left + image_left);
        }
        left = right;
    }
    None
}

#[test]
fn criterion_2_rauzy_step_is_first_return() {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_415);
    let (mut iets, mut points, mut mismatches) = (0, 0, 0);
    while iets < 200 {
        let d: u32 = rng.gen_range(4..=6);
        let top: Vec<u32> = (1..=d).collect();
        let mut bottom = top.clone();
        bottom.shuffle(&mut rng);
        let p = LabeledPermutation::from_ids(&top, &bottom).unwrap();
        if !p.is_irreducible() {
            continue;
        }
        let lengths: Vec<BigRational> = (0..d).map(|_| rat(rng.gen_range(1..1000), rng.gen_range(1..100))).collect();
        let iet = Iet::new(p.clone(), lengths.clone()).unwrap();
        // ties are resampled
        let Ok((induced, ty)) = iet.rauzy_step() else { continue };
        iets += 1;
        let total = lengths.iter().fold(BigRational::zero(), |a, l| a + l);
        let bound = total - &lengths[p.letter_index(ty.loser).unwrap()];
        let mut taken = 0;
        while taken < 1000 {
            let x = &bound * rat(rng.gen_range(1..1_000_003), 1_000_003);
            let mut y = match exchange(&p, &lengths, &x) {
                Some(y) => y,
                None => continue,
            };
            let mut hit_boundary = false;
            while y >= bound {
                match exchange(&p, &lengths, &y) {
                    Some(z) => y = z,
                    None => {
                        hit_boundary = true;
                        break;
                    }
                }
            }
            let Ok(stepped) = induced.apply(&x) else { continue };
            if hit_boundary {
                continue;
            }
            taken += 1;
            points += 1;
            if stepped != y {
                mismatches += 1;
            }
        }
    }
    let pass = mismatches == 0 && points == 200_000;
    line(2, "induced map equals first return", pass, &format!("{iets} exchanges, {points} points, {mismatches} mismatches"));
    assert!(pass);
}

#[test]
fn criterion_3_winner_criterion_is_primitivity() {
    let mut details = Vec::new();
    let mut total_discrepancies = 0;
    for family in [Family::Hyp, Family::Marked] {
        let d = RauzyDiagram::build(&family.base(4).unwrap(), DiagramMode::Labeled).unwrap();
        let loops = enumerate_loops(&d, 8, DEFAULT_LOOP_BUDGET).unwrap();
        let mut discrepancies = 0;
        let mut primitive = 0;
        for lp in &loops {
            let path = LabeledPath::new(d.vertex(lp.start), &lp.moves).unwrap();
            let winners: BTreeSet<Letter> = path.steps.iter().map(|s| s.0).collect();
            let by_winners = winners.len() == d.letters();
            let by_power = wielandt(&loop_matrix(&d, lp).unwrap());
            primitive += usize::from(by_power);
            if by_winners != by_power || lp.primitive != by_power {
                discrepancies += 1;
            }
        }
        total_discrepancies += discrepancies;
        details.push(format!("{}: {} loops, {primitive} primitive, {discrepancies} discrepancies", family.name(), loops.len()));
    }
    let pass = total_discrepancies == 0;
    line(3, "winner criterion against the power test", pass, &details.join("; "));
    assert!(pass);
}

#[test]
fn criterion_4_floor_and_structure() {
    let floor = int(2) - rat(1, 1_000_000_000);
    let mut details = Vec::new();
    let mut pass = true;
    for (family, n, mode) in [
        (Family::Hyp, 4, DiagramMode::Labeled),
        (Family::Hyp, 5, DiagramMode::Labeled),
        (Family::Marked, 4, DiagramMode::Reduced),
        (Family::Marked, 5, DiagramMode::Reduced),
    ] {
        let d = RauzyDiagram::build(&family.base(n).unwrap(), mode).unwrap();
        let loops = enumerate_loops(&d, 10, DEFAULT_LOOP_BUDGET).unwrap();
        let roots = loop_roots(&d, &loops, PRECISION).unwrap();
        let mut min: Option<PerronRoot> = None;
        let mut below = 0;
        for ((_, root), lp) in roots.iter().zip(&loops) {
            assert_eq!(root.is_some(), lp.primitive);
            if let Some(r) = root {
                assert!(r.verify());
                if r.lo < floor {
                    below += 1;
                }
                if min.as_ref().map_or(true, |m| r.value < m.value) {
                    min = Some(r.clone());
                }
            }
        }
        let rules = secondary_step_rules(n).unwrap();
        let violations = loops
            .iter()
            .filter(|lp| lp.primitive || family == Family::Hyp)
            .filter(|lp| !check_loop_structure(family, n, &d, lp, &rules).unwrap().pass())
            .count();
        let primitive = loops.iter().filter(|l| l.primitive).count();
        pass &= below == 0 && violations == 0;
        details.push(format!(
            "{} n={n}: {} loops, {primitive} primitive, min {}, {below} below floor, {violations} structural violations",
            family.name(),
            loops.len(),
            min.map_or("none".to_string(), |m| format!("{:.6}", m.value)),
        ));
    }
    line(4, "floor 2 and structural checks", pass, &details.join("; "));
    assert!(pass);
}

#[test]
fn criterion_5_first_hyperelliptic_family() {
    let mut failures = Vec::new();
    for g in 2..=20 {
        let spec = FamilySpec::new(FamilyKind::A1, g).unwrap();
        let m = matrix_family(spec).unwrap().matrix;
        let id = verify_polynomial_identity(spec).unwrap();
        let x_plus_one = IntPolynomial::from_i64(&[1, 1]);
        if !id.holds || !identity_at_points(&m, &x_plus_one, &closed_form(spec)) {
            failures.push(format!("identity g={g}"));
        }
        if g <= 10 && family_path(spec).unwrap().v != m {
            failures.push(format!("path g={g}"));
        }
        let b = verify_bounds(spec, PRECISION).unwrap();
        let gap = b.theta.value - std::f64::consts::SQRT_2;
        if !b.pass || b.width > PRECISION || !(gap > 0.0 && gap < 2f64.powi(1 - g as i32)) {
            failures.push(format!("bounds g={g}"));
        }
    }
    let spec = FamilySpec::new(FamilyKind::A1, 2).unwrap();
    let theta = verify_bounds(spec, PRECISION).unwrap().theta;
    let newton = newton_largest(&closed_form(spec), 3.0);
    if (theta.value - 1.722_083_805).abs() > 1e-9 || (newton - theta.value).abs() > 1e-12 {
        failures.push(format!("g=2 value {} (Newton {newton})", theta.value));
    }
    for g in 2..=6 {
        let spec = FamilySpec::new(FamilyKind::A1, g).unwrap();
        let (pi, rotated) = family_permutations(spec).unwrap();
        match rotation_closure_pa(&pi, &rotated, &family_moves(spec), PRECISION) {
            Ok(c) => {
                if !validate_suspension(&c.start, &c.lambda, &c.tau).valid || c.residuals.margin <= 0.0 {
                    failures.push(format!("validity g={g}"));
                }
            }
            Err(e) => failures.push(format!("closure g={g}: {e}")),
        }
    }
    let pass = failures.is_empty();
    line(
        5,
        "first hyperelliptic family",
        pass,
        &if pass { format!("g=2..20, theta_2 = {:.10}", theta.value) } else { failures.join("; ") },
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn criterion_6_second_hyperelliptic_family() {
    let mut failures = Vec::new();
    for g in 2..=12u32 {
        let kind = if g % 2 == 0 { FamilyKind::A2Even } else { FamilyKind::A2Odd };
        let spec = FamilySpec::new(kind, g).unwrap();
        let m = matrix_family(spec).unwrap().matrix;
        let id = verify_polynomial_identity(spec).unwrap();
        if !id.holds || !identity_at_points(&m, &id.cofactor, &closed_form(spec)) {
            failures.push(format!("identity g={g}"));
        }
        let b = verify_bounds(spec, PRECISION).unwrap();
        let gap = b.theta.value - std::f64::consts::SQRT_2;
        if !b.pass || !(gap > 0.0 && gap < 4.0 / std::f64::consts::SQRT_2.powi(g as i32)) {
            failures.push(format!("bounds g={g}"));
        }
    }
    let pass = failures.is_empty();
    line(6, "second hyperelliptic family", pass, &if pass { "g=2..12".to_string() } else { failures.join("; ") });
    assert!(pass, "{failures:?}");
}

/// `floor(|n_1 - n_3| / 4) mod 2`, counting orders congruent to 1 and 3
/// modulo 4.
fn spin_by_count(orders: &[i64]) -> u8 {
    let n1 = orders.iter().filter(|&&k| k.rem_euclid(4) == 1).count() as i64;
    let n3 = orders.iter().filter(|&&k| k.rem_euclid(4) == 3).count() as i64;
    (((n1 - n3).abs() / 4) % 2) as u8
}

#[test]
fn criterion_7_quadratic_family() {
    let mut failures = Vec::new();
    let mut roots = Vec::new();
    let genera: Vec<u32> = (3..=19).step_by(2).collect();
    for &g in &genera {
        let spec = FamilySpec::new(FamilyKind::B, g).unwrap();
        let m = matrix_family(spec).unwrap().matrix;
        let id = verify_polynomial_identity(spec).unwrap();
        if !id.holds || !identity_at_points(&m, &IntPolynomial::one(), &IntPolynomial::linear(1).mul(&closed_form(spec))) {
            failures.push(format!("identity g={g}"));
        }
        if !wielandt(&m) || !m.is_primitive().unwrap() {
            failures.push(format!("primitivity g={g}"));
        }
        let mut orders = vec![i64::from(g) - 2; 2];
        orders.extend(std::iter::repeat(-1).take(2 * g as usize));
        let spin = spin_parity(&orders).unwrap();
        if spin != 1 || spin_by_count(&orders) != 1 {
            failures.push(format!("spin g={g} (g mod 4 = {})", g % 4));
        }
        roots.push(verify_envelope(g, PRECISION).unwrap().bound.theta);
    }
    if !strictly_decreasing(&roots) {
        failures.push("not strictly decreasing".into());
    }
    let last = roots.last().unwrap();
    if !last.below(&rat(6, 5)) {
        failures.push(format!("theta_19 = {}", last.value));
    }
    let pass = failures.is_empty();
    line(
        7,
        "quadratic family",
        pass,
        &if pass {
            format!("odd g=3..19, theta_3 = {:.5}, theta_19 = {:.5}", roots[0].value, last.value)
        } else {
            failures.join("; ")
        },
    );
    assert!(pass, "{failures:?}");
}

fn rel_dist(a: &[f64], b: &[f64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
    num / b.iter().map(|y| y * y).sum::<f64>().sqrt()
}

#[test]
fn criterion_8_certificate_round_trip() {
    let mut pools: Vec<(RauzyDiagram, Vec<Loop>)> = Vec::new();
    for (family, n, mode) in [
        (Family::Hyp, 4, DiagramMode::Labeled),
        (Family::Hyp, 5, DiagramMode::Labeled),
        (Family::Marked, 4, DiagramMode::Reduced),
        (Family::Marked, 5, DiagramMode::Reduced),
    ] {
        let d = RauzyDiagram::build(&family.base(n).unwrap(), mode).unwrap();
        let loops: Vec<Loop> = enumerate_loops(&d, 10, DEFAULT_LOOP_BUDGET).unwrap().into_iter().filter(|l| l.primitive).collect();
        pools.push((d, loops));
    }
    let mut picked = Vec::new();
    for k in 0.. {
        if picked.len() == 50 || pools.iter().all(|p| k >= p.1.len()) {
            break;
        }
        for (i, pool) in pools.iter().enumerate() {
            if picked.len() < 50 && k < pool.1.len() {
                picked.push((i, k));
            }
        }
    }
    let (mut worst, mut min_margin, mut failures) = (0f64, f64::INFINITY, Vec::new());
    for &(i, k) in &picked {
        let (d, loops) = &pools[i];
        let lp = &loops[k];
        let cert = match veech_pa_from_loop(d, lp.start, &lp.moves, PRECISION) {
            Ok(c) => c,
            Err(e) => {
                failures.push(format!("{} at {}: {e}", lp.word(), lp.start));
                continue;
            }
        };
        let theta = cert.dilatation.value;
        let start = rauzy_core::suspension::SuspensionDatum::new(cert.start.clone(), cert.lambda.clone(), cert.tau.clone()).unwrap();
        let mut cur = start.clone();
        for &eps in &lp.moves {
            let (next, got) = suspension_rauzy_step(&cur).unwrap();
            assert_eq!(got, eps);
            cur = next;
        }
        let end = cur.renumbered_to(&cert.start).unwrap();
        let want_lambda: Vec<f64> = start.lambda.iter().map(|x| x / theta).collect();
        let want_tau: Vec<f64> = start.tau.iter().map(|x| x * theta).collect();
        let residual = rel_dist(&end.lambda, &want_lambda).max(rel_dist(&end.tau, &want_tau));
        let margin = validate_suspension(&cert.start, &cert.lambda, &cert.tau).margin;
        worst = worst.max(residual);
        min_margin = min_margin.min(margin);
        if !(residual <= 1e-9 && margin > 0.0) {
            failures.push(format!("{} at {}: residual {residual:e}, margin {margin}", lp.word(), lp.start));
        }
    }
    let pass = picked.len() == 50 && failures.is_empty();
    line(
        8,
        "certificate round trip",
        pass,
        &format!("{} loops, worst residual {worst:.2e}, least margin {min_margin:.3e}, {} failures", picked.len(), failures.len()),
    );
    assert!(pass, "{failures:?}");
}

#[test]
fn sanity_of_oracles() {
    let m = BigMatrix::from_rows(&[vec![1, 1], vec![1, 0]]).unwrap();
    assert!(wielandt(&m));
    assert!(!wielandt(&BigMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()));
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    assert!((newton_largest(&m.charpoly(), 3.0) - golden).abs() < 1e-14);
    assert!(identity_at_points(&m, &IntPolynomial::one(), &IntPolynomial::from_i64(&[-1, -1, 1])));
    assert_eq!(spin_by_count(&[1, 1, -1, -1, -1, -1, -1, -1]), 1);
}
