//! Multi-index combinatorics, symmetric sequence lattices and certified
//! numerical bounds for constants of polynomial Banach spaces.
//!
//! Every numerical constant is returned as a [`Bracket`] `[lo, hi]`: `lo` is
//! attained by an explicit witness or proven lower bound, `hi` is a proven
//! upper bound.

pub mod bracket;
mod certify;
pub mod characteristics;
pub mod constants;
pub mod error;
pub mod lattice;
pub mod multiindex;
pub mod polynomials;
pub mod quadrature;
mod search;
pub mod tetra_average;

pub use bracket::{Bracket, Budget};
pub use characteristics::{characteristic, CharResult};
pub use constants::{
    bohr_bracket, chi_mon_bracket, k_m_bracket, lambda_hat, lebesgue_constant, lorentz_bound_suite, rw_projection_constant,
    ConstantReport,
};
pub use error::{Error, Result};
pub use lattice::{embedding_norm, Family, LatticeSpec};
pub use multiindex::{Generator, IndexSetSpec, MultiIndex};
pub use num_complex::Complex64;
pub use polynomials::{sup_norm, Polynomial};
pub use tetra_average::{kappa, moment, tetra_projection_norm_check};
