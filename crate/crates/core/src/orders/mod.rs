//! Number fields, lattices and orders, with the CM-specific constructions built on them.

mod cm;
mod field;
mod lattice;

pub use cm::*;
pub use field::{Elem, NumberField};
pub use lattice::Lattice;
