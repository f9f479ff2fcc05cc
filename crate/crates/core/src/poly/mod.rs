//! Exact multivariate polynomials over `Z`, `Q` and `F_p`, with Buchberger
//! bases and an integer triviality decision.

pub mod domain;
pub mod groebner;
pub mod integer;
pub mod monomial;
pub mod polynomial;

pub use domain::{DomainTag, Field, Integers, PrimeField, Rationals, Ring};
pub use groebner::{buchberger, normal_form, Budget, BudgetExceeded, IdealBasis};
pub use integer::{
    contained_in_z_ideal, is_trivial_over_z, IntegerSpan, ZCertificate, ZTriviality,
};
pub use monomial::{Monomial, MonomialOrder};
pub use polynomial::{PolyRing, Polynomial};
