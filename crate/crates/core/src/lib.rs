//! Higher order invariants and higher order cohomology of groups acting on
//! finite-dimensional modules over exact fields.
//!
//! The crate computes the invariant filtration `H_q^0(Γ, V) = {v : I^{q+1} v = 0}`
//! (with `I` the augmentation ideal), the graded dimensions
//! `N_Γ(q) = dim I^q / I^{q+1}`, and `Ext^p_A(A/I^{q+1}, V)` for finite groups,
//! and checks the structural relations between them on concrete instances.

pub mod error;
pub mod field;
pub mod groupalg;
pub mod instance;
pub mod invariants;
pub mod linalg;
pub mod magnus;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use groupalg::{AModule, FiniteGroup, GroupAlgebra};
pub use instance::Instance;
pub use invariants::{invariants_filtration, Filtration, Representation};
pub use linalg::{kernel, quotient_map, span_closure, Matrix, Quotient, Subspace, Vector};
pub use verify::{run_checks, Report, Status};
pub use words::{exponent_matrix, fox_derivative, hom_space, parse_word, FoxDerivative, GroupPresentation, Word};
