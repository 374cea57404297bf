//! Interval exchange transformations and one step of Rauzy-Veech induction.

use num_traits::{Num, Signed};

use crate::error::{Error, Result};
use crate::perm::{LabeledPermutation, Letter, MoveType};

/// Outcome of comparing the two last intervals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IetType {
    pub eps: MoveType,
    pub winner: Letter,
    pub loser: Letter,
}

/// An IET `T = (pi, lambda)`. `lengths[i]` is the length of
/// `permutation.alphabet()[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Iet<T> {
    permutation: LabeledPermutation,
    lengths: Vec<T>,
}

impl<T> Iet<T>
where
    T: Num + Signed + Clone + PartialOrd,
{
    pub fn new(permutation: LabeledPermutation, lengths: Vec<T>) -> Result<Self> {
        if lengths.len() != permutation.len() {
            return Err(Error::InvalidPermutation(format!(
                "{} lengths for {} letters",
                lengths.len(),
                permutation.len()
            )));
        }
        if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(Error::Range(format!(
                "length of letter {} is not positive",
                permutation.alphabet()[i]
            )));
        }
        Ok(Iet { permutation, lengths })
    }

    pub fn permutation(&self) -> &LabeledPermutation {
        &self.permutation
    }

    pub fn lengths(&self) -> &[T] {
        &self.lengths
    }

    pub fn length(&self, letter: Letter) -> &T {
        let i = self.permutation.letter_index(letter).expect("letter in alphabet");
        &self.lengths[i]
    }

    pub fn total(&self) -> T {
        self.lengths.iter().fold(T::zero(), |acc, l| acc + l.clone())
    }

    pub fn iet_type(&self) -> Result<IetType> {
        let (top, bottom) = (self.permutation.top_last(), self.permutation.bottom_last());
        let (lt, lb) = (self.length(top), self.length(bottom));
        if lt > lb {
            Ok(IetType { eps: MoveType::Top, winner: top, loser: bottom })
        } else if lt < lb {
            Ok(IetType { eps: MoveType::Bottom, winner: bottom, loser: top })
        } else {
            Err(Error::Tie { top, bottom })
        }
    }

    fn start_in(&self, row: &[Letter], letter: Letter) -> T {
        row.iter()
            .take_while(|&&a| a != letter)
            .fold(T::zero(), |acc, &a| acc + self.length(a).clone())
    }

    /// Image of `x` under the exchange. Endpoints of the top partition,
    /// including 0, are rejected.
    pub fn apply(&self, x: &T) -> Result<T> {
        if x.is_negative() || *x >= self.total() {
            return Err(Error::OutOfRange("point outside [0, |I|)".into()));
        }
        let mut left = T::zero();
        for &a in self.permutation.top() {
            let right = left.clone() + self.length(a).clone();
            if *x == left {
                return Err(Error::Boundary(format!("point is the left endpoint of letter {a}")));
            }
            if *x < right {
                let offset = self.start_in(self.permutation.bottom(), a) - left;
                return Ok(x.clone() + offset);
            }
            left = right;
        }
        unreachable!("x < total lies in some interval")
    }

    /// One step of Rauzy-Veech induction: `(R_eps(pi), lambda')` with
    /// `V lambda' = lambda`, i.e. the winner loses the loser's length.
    pub fn rauzy_step(&self) -> Result<(Iet<T>, IetType)> {
        let ty = self.iet_type()?;
        let target = self.permutation.rauzy_move_unchecked(ty.eps).target;
        let mut lengths = self.lengths.clone();
        let w = self.permutation.letter_index(ty.winner).expect("letter");
        lengths[w] = lengths[w].clone() - self.length(ty.loser).clone();
        Ok((Iet { permutation: target, lengths }, ty))
    }

    /// First return of `x` to `[0, bound)` under iteration of `self`,
    /// evaluated directly. `max_iter` caps the orbit length.
    pub fn first_return(&self, bound: &T, x: &T, max_iter: usize) -> Result<T> {
        let mut y = self.apply(x)?;
        for _ in 0..max_iter {
            if y < *bound {
                return Ok(y);
            }
            y = self.apply(&y)?;
        }
        Err(Error::BudgetExceeded(max_iter))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::family_tau;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn tau4(lens: [i64; 4]) -> Iet<BigRational> {
        // alphabet order is 0, 2, 3, 4
        Iet::new(family_tau(4).unwrap(), lens.iter().map(|&l| q(l, 1)).collect()).unwrap()
    }

    #[test]
    fn type_of_tau4() {
        let t = tau4([3, 1, 1, 2]).iet_type().unwrap();
        assert_eq!(t, IetType { eps: MoveType::Bottom, winner: Letter(0), loser: Letter(4) });
        let t = tau4([2, 1, 1, 3]).iet_type().unwrap();
        assert_eq!(t, IetType { eps: MoveType::Top, winner: Letter(4), loser: Letter(0) });
        assert_eq!(
            tau4([2, 1, 1, 2]).iet_type().unwrap_err(),
            Error::Tie { top: Letter(4), bottom: Letter(0) }
        );
    }

    #[test]
    fn rotation_and_identity() {
        let rot = Iet::new("1 2 / 2 1".parse().unwrap(), vec![1.0, 1.0]).unwrap();
        assert_eq!(rot.apply(&0.25).unwrap(), 1.25);
        assert!(matches!(rot.apply(&1.0), Err(Error::Boundary(_))));
        assert!(matches!(rot.apply(&0.0), Err(Error::Boundary(_))));
        assert!(matches!(rot.apply(&2.0), Err(Error::OutOfRange(_))));
        let id = Iet::new("1 2 / 1 2".parse().unwrap(), vec![0.7, 0.3]).unwrap();
        assert_eq!(id.apply(&0.9).unwrap(), 0.9);
    }

    #[test]
    fn step_shrinks_winner() {
        let t = tau4([3, 1, 1, 2]);
        let (s, ty) = t.rauzy_step().unwrap();
        assert_eq!(ty.winner, Letter(0));
        assert_eq!(s.lengths(), &[q(1, 1), q(1, 1), q(1, 1), q(2, 1)]);
        assert_eq!(s.total(), t.total() - q(2, 1));
        assert_eq!(s.permutation(), &"0 4 2 3 / 4 3 2 0".parse().unwrap());
    }

    #[test]
    fn nonpositive_length_rejected() {
        assert!(Iet::new(family_tau(4).unwrap(), vec![q(1, 1), q(0, 1), q(1, 1), q(1, 1)]).is_err());
    }
}
