//! The standard germs: classical and dual Artin monoids of types A and I2,
//! and the germ file format.

mod artin;
pub mod io;
pub mod perm;

pub use artin::{classical_artin, dual_artin, BuildError, CoxeterSpec, MAX_RANK_A};
pub use io::{load_germ, save_germ, to_raw, GermFileError};
