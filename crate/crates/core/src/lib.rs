//! Garside germs and what can be computed from them.
//!
//! A germ is the finite lattice of simple divisors of a Garside monoid
//! together with its partial product. From it this crate solves the word
//! problem with greedy and Deligne normal forms, builds the finite
//! classifying complex and its integral (co)homology, evaluates the
//! poset-homology criteria for duality and connectivity at infinity, and
//! computes the combinatorial geometry of the coset complex.

pub mod builders;
pub mod cli;
pub mod geometry;
pub mod germ;
pub mod homology;
pub mod words;

pub use germ::{validate, Germ, GermId, RawGerm, Side, SimpleId, Violation};
pub use words::{GroupElement, Positive, PositiveWord, WordError};
