//! Totally nonnegative Grassmannians over finite fields.
//!
//! An element of `F_q` is *positive* when it is a nonzero square. A point of
//! the Grassmannian `Gr_{k,n}(F_q)` is totally nonnegative (TNN) when all of
//! its Plücker coordinates, after scaling, are squares, and totally positive
//! (TP) when they are all nonzero squares.
//!
//! The crate provides field arithmetic ([`field`]), matrices and Plücker
//! vectors ([`matrix`]), canonical subspaces and pruned enumeration
//! ([`grassmannian`]), exact counting formulas ([`closed_forms`]), matroid and
//! cyclic-shift structure ([`structures`]) and named cross-check suites
//! ([`verify`]).

pub mod closed_forms;
pub mod field;
pub mod grassmannian;
pub mod matrix;
pub mod structures;
pub mod verify;

pub use field::{FieldElement, FieldError, FieldSpec, Sign};
pub use grassmannian::{CountTable, Enumerator, Filter, GrassmannianError, Subspace};
pub use matrix::{IndexSet, MatrixError, MatrixFq};
pub use structures::{Matroid, StructureError};
