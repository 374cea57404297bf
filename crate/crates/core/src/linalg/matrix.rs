use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigMatrix {
    dim: usize,
    data: Vec<BigInt>,
}

impl BigMatrix {
    pub fn zeros(dim: usize) -> Self {
        BigMatrix { dim, data: vec![BigInt::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Index("rows do not form a square matrix".into()));
        }
        let data = rows.iter().flat_map(|r| r.iter().cloned().map(Into::into)).collect();
        Ok(BigMatrix { dim, data })
    }

    /// Permutation matrix with a 1 at `(i, image[i])`.
    pub fn permutation(image: &[usize]) -> Result<Self> {
        let dim = image.len();
        let mut seen = vec![false; dim];
        let mut m = Self::zeros(dim);
        for (i, &j) in image.iter().enumerate() {
            if j >= dim || std::mem::replace(&mut seen[j], true) {
                return Err(Error::Index(format!("{image:?} is not a permutation")));
            }
            m.data[i * dim + j] = BigInt::one();
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.dim).map(|i| self.row(i).to_vec()).collect()
    }

    /// Adds column `src` to column `dst`, i.e. right multiplication by
    /// `I + E_{src,dst}`.
    pub fn add_column(&mut self, src: usize, dst: usize) {
        for i in 0..self.dim {
            let v = self.data[i * self.dim + src].clone();
            self.data[i * self.dim + dst] += v;
        }
    }

    pub fn mul(&self, other: &BigMatrix) -> BigMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.data[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &other.data[k * d + j];
                    if !b.is_zero() {
                        out.data[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> BigMatrix {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j].clone();
            }
        }
        out
    }

    pub fn first_negative(&self) -> Option<(usize, usize)> {
        self.data.iter().position(|x| x.is_negative()).map(|k| (k / self.dim, k % self.dim))
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        use num_traits::ToPrimitive;
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|x| x.to_f64().unwrap_or(f64::INFINITY)).collect())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let d = self.dim;
        if d == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..d - 1 {
            if a[k * d + k].is_zero() {
                match (k + 1..d).find(|&i| !a[i * d + k].is_zero()) {
                    Some(i) => {
                        for j in 0..d {
                            a.swap(k * d + j, i * d + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..d {
                for j in k + 1..d {
                    let v = &a[i * d + j] * &a[k * d + k] - &a[i * d + k] * &a[k * d + j];
                    a[i * d + j] = v / &prev;
                }
            }
            prev = a[k * d + k].clone();
        }
        sign * &a[d * d - 1]
    }

    /// `det(X I - M)`, by reduction to upper Hessenberg form over the
    /// rationals followed by the standard determinant recurrence.
    pub fn charpoly(&self) -> IntPolynomial {
        let n = self.dim;
        let mut h: Vec<Vec<BigRational>> = (0..n)
            .map(|i| self.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
            .collect();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
                continue;
            };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            for j in m + 1..n {
                if h[j][m - 1].is_zero() {
                    continue;
                }
                let u = &h[j][m - 1] / &h[m][m - 1];
                for c in 0..n {
                    let v = &u * &h[m][c];
                    h[j][c] -= v;
                }
                for row in h.iter_mut() {
                    let v = &u * &row[j];
                    row[m] += v;
                }
            }
        }
        // p_k is the characteristic polynomial of the leading k x k block.
        let mut p: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
        for k in 0..n {
            let mut next = vec![BigRational::zero(); k + 2];
            for (i, c) in p[k].iter().enumerate() {
                next[i + 1] += c;
                next[i] -= &h[k][k] * c;
            }
            let mut t = BigRational::one();
            for i in (0..k).rev() {
                t *= &h[i + 1][i];
                if t.is_zero() {
                    break;
                }
                let coef = &t * &h[i][k];
                for (j, c) in p[i].iter().enumerate() {
                    next[j] -= &coef * c;
                }
            }
            p.push(next);
        }
        let coeffs = p[n]
            .iter()
            .map(|c| {
                debug_assert!(c.is_integer());
                c.to_integer()
            })
            .collect();
        IntPolynomial::new(coeffs)
    }

    /// True iff some power `M^k` with `k <= (d-1)^2 + 1` is entrywise
    /// positive. Works on the zero pattern only.
    pub fn is_primitive(&self) -> Result<bool> {
        if let Some((i, j)) = self.first_negative() {
            return Err(Error::NegativeEntry(i, j));
        }
        let d = self.dim;
        if d == 0 {
            return Ok(false);
        }
        let pattern = BoolMatrix::from_fn(d, |i, j| !self.get(i, j).is_zero());
        let exponent = (d - 1) * (d - 1) + 1;
        // Once M^k > 0 every row of M is nonzero, so M^{k+1} > 0 as well;
        // checking the largest allowed power suffices.
        Ok(pattern.pow(exponent).is_full())
    }
}

/// `I + E_{alpha,beta}` of size `d` (0-based indices).
pub fn transvection(d: usize, alpha: usize, beta: usize) -> Result<BigMatrix> {
    if alpha >= d || beta >= d {
        return Err(Error::Index(format!("({alpha}, {beta}) outside a {d}x{d} matrix")));
    }
    if alpha == beta {
        return Err(Error::Index(format!("transvection needs distinct indices, got {alpha} twice")));
    }
    let mut m = BigMatrix::identity(d);
    m.set(alpha, beta, BigInt::one());
    Ok(m)
}

impl fmt::Display for BigMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for BigMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.dim).map(|i| self.row(i).iter().map(|x| x.to_string()).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BigMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed: std::result::Result<Vec<Vec<BigInt>>, _> =
            rows.iter().map(|r| r.iter().map(|x| x.parse::<BigInt>()).collect()).collect();
        let parsed = parsed.map_err(D::Error::custom)?;
        BigMatrix::from_rows(&parsed).map_err(D::Error::custom)
    }
}

/// Boolean matrix over the (or, and) semiring with bitset rows.
#[derive(Clone, Debug, PartialEq, Eq)]
struct BoolMatrix {
    dim: usize,
    rows: Vec<Vec<u64>>,
}

impl BoolMatrix {
    fn words(dim: usize) -> usize {
        dim.div_ceil(64)
    }

    fn from_fn(dim: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut rows = vec![vec![0u64; Self::words(dim)]; dim];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..dim {
                if f(i, j) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
        }
        BoolMatrix { dim, rows }
    }

    fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |i, j| i == j)
    }

    fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        let mut rows = vec![vec![0u64; Self::words(self.dim)]; self.dim];
        for (i, out) in rows.iter_mut().enumerate() {
            for k in 0..self.dim {
                if self.rows[i][k / 64] >> (k % 64) & 1 == 1 {
                    for (o, w) in out.iter_mut().zip(&other.rows[k]) {
                        *o |= w;
                    }
                }
            }
        }
        BoolMatrix { dim: self.dim, rows }
    }

    fn pow(&self, mut e: usize) -> BoolMatrix {
        let mut acc = Self::identity(self.dim);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    fn is_full(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.rows[i][j / 64] >> (j % 64) & 1 == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> BigMatrix {
        BigMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn transvection_basics() {
        assert_eq!(transvection(2, 0, 1).unwrap(), m(&[&[1, 1], &[0, 1]]));
        assert!(transvection(2, 1, 1).is_err());
        assert!(transvection(2, 0, 2).is_err());
    }

    #[test]
    fn add_column_is_right_multiplication() {
        let a = m(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let mut b = a.clone();
        b.add_column(2, 0);
        assert_eq!(b, a.mul(&transvection(3, 2, 0).unwrap()));
    }

    #[test]
    fn charpoly_small_cases() {
        assert_eq!(BigMatrix::identity(3).charpoly(), IntPolynomial::from_i64(&[-1, 3, -3, 1]));
        let m2 = m(&[&[0, 2, 1, 1], &[0, 0, 1, 0], &[1, 0, 0, 0], &[0, 1, 0, 1]]);
        assert_eq!(m2.charpoly(), IntPolynomial::from_i64(&[1, -1, -1, -1, 1]));
        // companion matrix of X^3 - 2X + 5
        let c = m(&[&[0, 0, -5], &[1, 0, 2], &[0, 1, 0]]);
        assert_eq!(c.charpoly(), IntPolynomial::from_i64(&[5, -2, 0, 1]));
        // a zero subdiagonal forces the block recurrence
        let z = m(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 3]]);
        assert_eq!(z.charpoly(), IntPolynomial::from_i64(&[-6, 11, -6, 1]));
    }

    #[test]
    fn determinant() {
        assert_eq!(m(&[&[2, 1], &[1, 1]]).det(), BigInt::from(1));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), BigInt::from(0));
    }

    #[test]
    fn primitivity() {
        assert!(m(&[&[1, 1], &[1, 0]]).is_primitive().unwrap());
        assert!(!BigMatrix::identity(3).is_primitive().unwrap());
        assert!(!m(&[&[0, 1], &[1, 0]]).is_primitive().unwrap());
        assert_eq!(m(&[&[1, -1], &[1, 0]]).is_primitive(), Err(Error::NegativeEntry(0, 1)));
        // Wielandt matrix: primitive with exponent exactly (d-1)^2 + 1
        let w = m(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 0, 0]]);
        assert!(w.is_primitive().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"[["1","2"],["3","4"]]"#);
        assert_eq!(serde_json::from_str::<BigMatrix>(&s).unwrap(), a);
    }
}
