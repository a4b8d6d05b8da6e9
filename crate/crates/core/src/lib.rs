//! Exact decision procedures for upper motives of varieties of flags of right
//! ideals in central simple algebras.
//!
//! Two anisotropic flag varieties `X(d_1, ..., d_k; A)` and `X(d'_1, ..., d'_s; A')`
//! have isomorphic upper motives with coefficients of characteristic p iff
//! `v_p(gcd d_i) = v_p(gcd d'_i)` and the p-primary parts of `[A]` and `[A']`
//! generate the same subgroup of the Brauer group. [`motives::compare_flag_upper_motives`]
//! implements that criterion; [`motives::oracle_isomorphic`] re-derives every
//! answer from the index reduction formula, and [`oracles`] sweeps both against
//! each other.

pub mod brauer;
pub mod error;
pub mod exact;
pub mod motives;
pub mod oracles;
pub mod varieties;

pub use brauer::{BrauerClass, CentralSimpleAlgebra, FieldModel, IndexTable, Place};
pub use error::{Error, Result};
pub use exact::{Fraction, Prime};
pub use motives::{Dichotomy, UpperMotive, UpperSummand};
pub use varieties::FlagVariety;
