//! Rauzy-Veech induction, Rauzy diagrams, and certified dilatations of the
//! pseudo-Anosov maps built from their loops.

pub mod diagram;
pub mod error;
pub mod families;
pub mod iet;
pub mod linalg;
pub mod loops;
pub mod paths;
pub mod perm;
pub mod suites;
pub mod suspension;


pub use error::{Error, Result};
pub use iet::{Iet, IetType};
pub use linalg::{BigMatrix, IntPolynomial, PerronRoot};
pub use perm::{
    family_genperm_odd, family_pi, family_tau, GeneralizedPermutation, LabeledPermutation, Letter,
    MoveType, ReducedPermutation, Renumbering,
};
