//! Exact arithmetic for orders in étale algebras over the rationals.
//!
//! An étale algebra here is `K = Q[x]/(f)` for a monic squarefree integer
//! polynomial `f`.  The crate represents full-rank lattices in `K` exactly
//! (denominator plus Hermite-form integer basis), and builds on that to
//! compute maximal orders, prime ideals, Cohen-Macaulay types, overorder
//! lattices, weak equivalence classes, Picard groups and ideal class
//! monoids, together with the applications to conjugacy classes of integer
//! matrices and to isomorphism classes of abelian varieties over finite
//! fields in an isogeny class determined by a Weil polynomial.
//!
//! Everything user-visible is exact: floating point enters only as a guide
//! for short-vector searches, and every numeric candidate is re-verified in
//! exact arithmetic before it can influence a result.

pub mod algebra;
pub mod classes;
pub mod cmtype;
pub mod compare;
pub mod error;
pub mod fpalg;
pub mod lattice;
pub mod linalg;
pub mod order;
pub mod overorders;
pub mod poly;
pub mod roots;
pub mod verify;

pub use algebra::{AlgElement, EtaleAlgebra};
pub use error::{Error, Result};
pub use lattice::{FracIdeal, QuotientData};
pub use linalg::{HnfResult, IntMatrix, SnfResult};
pub use order::{Order, PrimeIdeal};
