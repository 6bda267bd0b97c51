//! Exact computer algebra for finite-dimensional graded Leibniz color
//! 3-algebras with a compatible automorphism.
//!
//! The crate builds everything from one primitive: exact linear algebra over
//! cyclotomic-rational fields. On top of that it constructs the inner
//! multiplication algebra of a 3-algebra, splits the algebra into root spaces
//! relative to a maximal abelian subalgebra, relates roots by connection
//! chains, and certifies the resulting decomposition into ideals. Every
//! product law and decomposition claim is re-verified on the concrete input
//! rather than assumed, so a run either produces checked certificates or a
//! precise counterexample.

pub mod algebra;
pub mod connect;
pub mod descent;
pub mod envelope;
pub mod field;
pub mod fixtures;
pub mod grading;
pub mod io;
pub mod linalg;
pub mod pipeline;
pub mod report;
pub mod roots;
