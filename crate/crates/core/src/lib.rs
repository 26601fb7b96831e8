//! Exact arithmetic for principally polarized abelian varieties in simple
//! ordinary isogeny classes over finite fields.
//!
//! - [`weil`]: validation of Weil polynomials, Frobenius angles, random classes.
//! - [`quadratic`]: class numbers of quadratic orders, units, prime ideals.
//! - [`orders`]: lattices and orders in CM fields, trace duals, convenience.
//! - [`ppav`]: discriminant ratios, stratum reports, certificates, explicit families.
//! - [`measures`]: angle distributions and their normalizing constants.
//! - [`census`]: elliptic curves over `F_p` against the semicircle law.
//! - [`cli`]: the `strata` command line.
//!
//! Weil polynomials are always given by ascending coefficients, constant term first.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod census;
pub mod cli;
pub mod error;
pub mod measures;
pub mod orders;
pub mod ppav;
pub mod quadratic;
pub mod weil;

mod serde_util;

pub use error::{Error, Result};
pub use weil::IsogenyClassSpec;
