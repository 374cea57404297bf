//! Certified isolation of the largest real root with Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Default absolute precision of root intervals.
pub const DEFAULT_PRECISION: f64 = 1e-12;

/// Sturm sequence of a square-free polynomial, each term a positive multiple
/// of the classical remainder sequence.
#[derive(Clone, Debug)]
pub struct SturmChain {
    terms: Vec<IntPolynomial>,
}

impl SturmChain {
    pub fn new(p: &IntPolynomial) -> Self {
        let mut terms = vec![p.clone(), p.derivative().primitive_part()];
        if terms[1].leading().is_negative() {
            terms[1] = terms[1].neg();
        }
        while !terms.last().expect("nonempty").is_zero() && terms.last().expect("nonempty").degree() > 0 {
            let n = terms.len();
            let (a, b) = (&terms[n - 2], &terms[n - 1]);
            let delta = a.degree() + 1 - b.degree();
            let mut r = a.pseudo_rem(b).neg();
            // pseudo_rem multiplied by lc(b)^delta; undo a negative factor
            if b.leading().is_negative() && delta % 2 == 1 {
                r = r.neg();
            }
            let r = r.primitive_part();
            if r.is_zero() {
                break;
            }
            terms.push(r);
        }
        SturmChain { terms }
    }

    /// Number of sign changes of the chain at `x`.
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for t in &self.terms {
            let s = t.sign_at(x);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// A root certificate: the largest real root of `polynomial` lies in
/// `(lo, hi)`, it is the only root of `squarefree` there, and `squarefree`
/// changes sign across the interval.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronRoot {
    #[serde(rename = "poly")]
    pub polynomial: IntPolynomial,
    pub squarefree: IntPolynomial,
    #[serde(with = "rational_string")]
    pub lo: BigRational,
    #[serde(with = "rational_string")]
    pub hi: BigRational,
    pub value: f64,
    pub precision: f64,
}

/// Power of two not exceeding `precision`.
fn dyadic_width(precision: f64) -> BigRational {
    let k = (-precision.log2()).ceil().max(1.0) as usize;
    BigRational::new(BigInt::one(), BigInt::one() << k)
}

/// Integer Cauchy bound: every root of `p` has modulus below it.
fn cauchy_bound(p: &IntPolynomial) -> BigInt {
    let lead = p.leading().abs();
    let max = p.coeffs().iter().map(|c| c.abs()).max().unwrap_or_default();
    BigInt::one() + (max + &lead - BigInt::one()) / lead + BigInt::one()
}

impl PerronRoot {
    /// Isolates the largest real root of `p` above 1 to absolute `precision`.
    pub fn isolate(p: &IntPolynomial, precision: f64) -> Result<PerronRoot> {
        if !(precision > 0.0) {
            return Err(Error::Range(format!("precision must be positive, got {precision}")));
        }
        if p.degree() == 0 {
            return Err(Error::NoRootAboveOne);
        }
        let sqf = p.squarefree_part();
        let chain = SturmChain::new(&sqf);
        let one = BigRational::one();
        let bound = BigRational::from_integer(cauchy_bound(&sqf));
        if chain.count(&one, &bound) == 0 {
            return Err(Error::NoRootAboveOne);
        }
        let width = dyadic_width(precision);
        let two = BigRational::from_integer(BigInt::from(2));
        let (mut lo, mut hi) = (one, bound);
        // invariant: the largest root lies in (lo, hi] and hi is not a root
        loop {
            let done = &hi - &lo <= width
                && chain.count(&lo, &hi) == 1
                && sqf.sign_at(&lo) * sqf.sign_at(&hi) < 0;
            if done {
                break;
            }
            let mid = split_point(&sqf, &lo, &hi);
            if chain.count(&mid, &hi) >= 1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let value = ((&lo + &hi) / &two).to_f64().unwrap_or(f64::NAN);
        Ok(PerronRoot { polynomial: p.clone(), squarefree: sqf, lo, hi, value, precision })
    }

    /// Re-checks every claim of the certificate from scratch.
    pub fn verify(&self) -> bool {
        let sqf = self.polynomial.squarefree_part();
        if sqf != self.squarefree || self.lo >= self.hi {
            return false;
        }
        let chain = SturmChain::new(&sqf);
        let bound = BigRational::from_integer(cauchy_bound(&sqf));
        sqf.sign_at(&self.lo) * sqf.sign_at(&self.hi) < 0
            && chain.count(&self.lo, &self.hi) == 1
            && chain.count(&self.hi, &bound) == 0
            && self.width() <= self.precision
    }

    pub fn width(&self) -> f64 {
        (&self.hi - &self.lo).to_f64().unwrap_or(f64::INFINITY)
    }

    /// Narrows the interval to `precision`.
    pub fn refine(&self, precision: f64) -> Result<PerronRoot> {
        Self::isolate(&self.polynomial, precision)
    }

    /// Certified `root > c`; the root lies strictly inside `(lo, hi)`.
    pub fn above(&self, c: &BigRational) -> bool {
        self.lo >= *c
    }

    /// Certified `root < c`.
    pub fn below(&self, c: &BigRational) -> bool {
        self.hi <= *c
    }
}

/// A point of `(lo, hi)` close to the midpoint that is not a root of `sqf`.
fn split_point(sqf: &IntPolynomial, lo: &BigRational, hi: &BigRational) -> BigRational {
    let w = hi - lo;
    let mut k = 1u32;
    loop {
        // candidates 1/2, 1/2 - 1/8, 1/2 + 1/8, 1/2 - 1/16, ...
        for offset in [0i64, -1, 1] {
            let frac = BigRational::new(BigInt::one(), BigInt::from(2))
                + BigRational::new(BigInt::from(offset), BigInt::one() << (k + 2));
            let x = lo + &w * frac;
            if sqf.sign_at(&x) != 0 {
                return x;
            }
        }
        k += 1;
    }
}

/// Converts an `f64` to the exact rational it represents.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        use serde::de::Error as _;
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

/// Exact test of `x > s * sqrt(2) + t` for rational `x`, `t` and `s >= 0`.
pub fn gt_sqrt2_affine(x: &BigRational, s: &BigRational, t: &BigRational) -> bool {
    let y = x - t;
    if !y.is_positive() {
        return false;
    }
    &y * &y > s * s * BigRational::from_integer(BigInt::from(2))
}

/// Exact test of `x < s * sqrt(2) + t` for rational `x`, `t` and `s >= 0`.
pub fn lt_sqrt2_affine(x: &BigRational, s: &BigRational, t: &BigRational) -> bool {
    let y = x - t;
    if !y.is_positive() {
        return true;
    }
    &y * &y < s * s * BigRational::from_integer(BigInt::from(2))
}
