use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Polynomial with integer coefficients, stored low to high degree. The zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Builds `sum c X^e` from `(e, c)` pairs.
    pub fn from_terms(terms: &[(usize, i64)]) -> Self {
        let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        for &(e, c) in terms {
            coeffs[e] += c;
        }
        Self::new(coeffs)
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `X - a`.
    pub fn linear(a: i64) -> Self {
        Self::from_i64(&[-a, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigInt::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return self.clone();
        }
        Self::new(self.coeffs.iter().map(|x| x / &c).collect())
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) a mod b`.
    pub fn pseudo_rem(&self, b: &Self) -> Self {
        assert!(!b.is_zero(), "division by zero polynomial");
        let mut r = self.clone();
        let lb = b.leading();
        let db = b.degree();
        if r.is_zero() || r.degree() < db {
            return r;
        }
        let mut steps = r.degree() - db + 1;
        while !r.is_zero() && r.degree() >= db {
            let shift = r.degree() - db;
            let lr = r.leading();
            let mut coeffs: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lb).collect();
            for (i, c) in b.coeffs.iter().enumerate() {
                coeffs[i + shift] -= &lr * c;
            }
            r = Self::new(coeffs);
            steps -= 1;
        }
        r.scale(&num_traits::pow(lb, steps))
    }

    /// Exact quotient and remainder over the integers. Returns `None` when
    /// the division leaves the integers.
    pub fn div_rem_exact(&self, b: &Self) -> Option<(Self, Self)> {
        assert!(!b.is_zero(), "division by zero polynomial");
        let lb = b.leading();
        let db = b.degree();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); (self.degree() + 1).saturating_sub(db)];
        for shift in (0..q.len()).rev() {
            let top = &r[shift + db];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(&lb);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in b.coeffs.iter().enumerate() {
                r[i + shift] -= &quot * c;
            }
            q[shift] = quot;
        }
        Some((Self::new(q), Self::new(r)))
    }

    /// Quotient when `b` divides `self` exactly.
    pub fn exact_div(&self, b: &Self) -> Option<Self> {
        match self.div_rem_exact(b) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    /// Greatest common divisor, primitive with positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.primitive_part(), other.primitive_part());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        if a.leading().is_negative() {
            a.neg()
        } else {
            a
        }
    }

    /// `p / gcd(p, p')`, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> Self {
        let g = self.gcd(&self.derivative());
        let q = self.primitive_part().exact_div(&g).expect("gcd divides");
        if q.leading().is_negative() {
            q.neg()
        } else {
            q
        }
    }

    /// `X^deg p(1/X)`.
    pub fn reverse(&self) -> Self {
        Self::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// Strips every factor `X - 1` and `X + 1`.
    pub fn strip_unit_roots(&self) -> Self {
        let mut p = self.clone();
        for a in [1, -1] {
            let f = Self::linear(a);
            while !p.is_zero() && p.degree() > 0 {
                match p.exact_div(&f) {
                    Some(q) => p = q,
                    None => break,
                }
            }
        }
        p
    }

    /// True iff, after removing all `X - 1` and `X + 1` factors, the
    /// coefficient sequence is a palindrome up to a global sign.
    pub fn is_reciprocal(&self) -> bool {
        let p = self.strip_unit_roots();
        if p.is_zero() || p.coeffs[0].is_zero() {
            return false;
        }
        let r = p.reverse();
        r == p || r == p.neg()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| {
            acc * x + BigRational::from_integer(c.clone())
        })
    }

    /// Sign of `p(num/den)` for `den > 0`, computed in integers from the
    /// homogenized form `sum c_i num^i den^(n-i)`.
    pub fn sign_at(&self, x: &BigRational) -> i8 {
        let (num, den) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &dpow;
            dpow *= den;
        }
        match acc.sign() {
            num_bigint::Sign::Plus => 1,
            num_bigint::Sign::Minus => -1,
            num_bigint::Sign::NoSign => 0,
        }
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        use num_traits::ToPrimitive;
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = !a.is_one() || e == 0;
            if show_coeff {
                write!(f, "{a}")?;
            }
            match e {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v: Vec<String> = Vec::deserialize(d)?;
        let coeffs: std::result::Result<Vec<BigInt>, _> = v.iter().map(|c| c.parse()).collect();
        Ok(Self::new(coeffs.map_err(D::Error::custom)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -1, -1, -1, 1]).to_string(), "X^4 - X^3 - X^2 - X + 1");
        assert_eq!(p(&[-2, 0, 3]).to_string(), "3X^2 - 2");
        assert_eq!(p(&[]).to_string(), "0");
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 0, 1]));
        assert_eq!(a.gcd(&a.derivative()), p(&[-1, 1]));
        assert_eq!(a.squarefree_part(), p(&[-1, 1]).mul(&p(&[2, 0, 1])));
        assert_eq!(p(&[6, 5, 1]).gcd(&p(&[3, 1]).scale(&BigInt::from(-4))), p(&[3, 1]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[1, -1, -1, -1, 1]).mul(&p(&[1, 1]));
        assert_eq!(a, p(&[1, 0, -2, -2, 0, 1]));
        assert_eq!(a.exact_div(&p(&[1, 1])), Some(p(&[1, -1, -1, -1, 1])));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[1, 2]).exact_div(&p(&[0, 2])), None);
    }

    #[test]
    fn reciprocity() {
        assert!(p(&[1, -1, -1, -1, 1]).is_reciprocal());
        assert!(p(&[1, 0, -2, -2, 0, 1]).is_reciprocal());
        assert!(!p(&[0, -2, 1]).is_reciprocal());
        assert!(p(&[-1, 1]).mul(&p(&[1, -3, 1])).is_reciprocal());
    }

    #[test]
    fn sign_evaluation_matches_rational_eval() {
        let a = p(&[1, -1, -1, -1, 1]);
        for (n, d) in [(17, 10), (7, 4), (-3, 2), (0, 1), (5, 3)] {
            let x = BigRational::new(n.into(), d.into());
            let v = a.eval(&x);
            let s = if v.is_positive() { 1 } else if v.is_negative() { -1 } else { 0 };
            assert_eq!(a.sign_at(&x), s, "at {n}/{d}");
        }
        assert_eq!(p(&[-1, 1]).sign_at(&BigRational::one()), 0);
    }

    #[test]
    fn pseudo_remainder_scaling() {
        let a = p(&[1, 0, 0, 1]);
        let b = p(&[1, 2]);
        // lc(b)^3 * a(-1/2) = 8 * (1 - 1/8) = 7
        assert_eq!(a.pseudo_rem(&b), p(&[7]));
    }
}
