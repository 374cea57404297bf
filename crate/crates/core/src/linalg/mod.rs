//! Exact integer linear algebra: matrices, characteristic polynomials,
//! primitivity and certified Perron roots.

mod eigen;
mod matrix;
mod poly;
mod roots;

pub use eigen::{eigenvector, Eigenvector, SignRule, EIGEN_TOLERANCE};
pub use matrix::{transvection, BigMatrix};
pub use poly::IntPolynomial;
pub use roots::{
    gt_sqrt2_affine, lt_sqrt2_affine, rational_from_f64, PerronRoot, SturmChain, DEFAULT_PRECISION,
};

/// Largest real root of `p` above 1, certified to `precision`.
pub fn perron_root(p: &IntPolynomial, precision: f64) -> crate::Result<PerronRoot> {
    PerronRoot::isolate(p, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn golden_ratio() {
        let r = perron_root(&IntPolynomial::from_i64(&[-1, -1, 1]), 1e-12).unwrap();
        assert!(r.verify());
        assert!(r.width() <= 1e-12);
        assert!((r.value - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn genus_two_minimum() {
        let r = perron_root(&IntPolynomial::from_i64(&[1, -1, -1, -1, 1]), 1e-12).unwrap();
        assert!(r.verify());
        assert!((r.value - 1.722_083_805_7).abs() < 1e-9);
    }

    #[test]
    fn no_root_above_one() {
        let p = IntPolynomial::linear(1).mul(&IntPolynomial::linear(1)).mul(&IntPolynomial::linear(1));
        assert_eq!(perron_root(&p, 1e-12), Err(Error::NoRootAboveOne));
        assert_eq!(perron_root(&IntPolynomial::from_i64(&[1, 0, 1]), 1e-12), Err(Error::NoRootAboveOne));
    }

    #[test]
    fn rational_root_is_bracketed() {
        // (X - 2)^2 (X^2 - X - 1): largest root 2, a double rational root
        let p = IntPolynomial::linear(2)
            .mul(&IntPolynomial::linear(2))
            .mul(&IntPolynomial::from_i64(&[-1, -1, 1]));
        let r = perron_root(&p, 1e-12).unwrap();
        assert!(r.verify());
        assert!(r.lo < rational_from_f64(2.0) && r.hi > rational_from_f64(2.0));
        assert!((r.value - 2.0).abs() < 1e-12);
    }
}
