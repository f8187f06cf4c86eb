//! Exact computations with pseudorepresentations (determinant laws) over finite fields.

pub mod algebra;
pub mod cohomology;
pub mod error;
pub mod field;
pub mod groebner;
pub mod gma;
pub mod group;
pub mod json;
pub mod linalg;
pub mod moduli;
pub mod ordinary;
pub mod poly;
pub mod presentation;
pub mod pseudorep;
pub mod rep;
pub mod selftest;

pub use algebra::{ideal_generated, quotient, FinAlgebra, Ideal, Nilpotency, Projection};
pub use error::{Error, Result};
pub use field::{Elem, FFElem, Field, FieldSpec};
pub use group::FiniteGroup;
pub use linalg::{Mat, Subspace};
pub use poly::{MPoly, Monomial};
pub use presentation::{saturate, Presentation};
pub use rep::{enumerate_reps, invariant_subspace, isomorphic, semisimplify, JHDecomposition, Representation};
pub use pseudorep::{ch_ideal, ch_quotient, equals, induce, is_cayley_hamilton, kernel, split_search, CharPoly, PseudoRep};
