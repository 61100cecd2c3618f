//! The finite classifying complex of a germ, integral (co)homology through
//! Smith normal form, and the poset-homology checkers.

pub mod bar;
pub mod chain;
pub mod checks;
pub mod matrix;
pub mod poset;
pub mod snf;

pub use bar::{abelianization, bar_complex, boundary, cells, cohomology, homology, TupleCell};
pub use chain::{ChainComplex, HomologyGroup};
pub use checks::{
    ascending_link, avoid_poset, descending_link, duality_check, end_connectivity_check, proper_poset,
    DualityVerdict, EndConnectivity, PosetReport, Verdict,
};
pub use matrix::{Matrix, SparseMatrix};
pub use poset::{reduced_poset_cohomology, reduced_poset_homology, FinitePoset, ReducedHomology};
pub use snf::{invariant_factors, smith_normal_form, SmithForm, SnfError};
