//! Finite-dimensional left-symmetric (pre-Lie) algebras over the complex
//! numbers, represented by dense structure-constant tensors.
//!
//! The crate verifies the algebra axioms, evaluates and solves the
//! S-equation (the left-symmetric analogue of the classical Yang-Baxter
//! equation), constructs the induced phase spaces (parakähler Lie algebras
//! on `A ⊕ A*`), and ships a catalog of the known 2- and 3-dimensional
//! solution families as regression fixtures.
//!
//! Everything is a pure function on immutable values; the supported
//! envelope is dimension ≤ 16 (catalog entries live at n ≤ 3, phase
//! spaces at 2n ≤ 6).

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod io;
pub mod phase;
pub mod sequation;
pub mod solver;
pub mod tensor;

pub use algebra::{Algebra, LieAlgebra, LinearOperator};
pub use error::LsaError;
pub use phase::{LinearMap, PhaseSpace};
pub use sequation::{BilinearForm, Coproduct, FormRole, SResidual, SymmetricTensor};
pub use solver::{SolutionSet, SolveConfig};
pub use tensor::Tensor3;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Default tolerance for residual-vanishing decisions.
pub const DEFAULT_TOL: f64 = 1e-9;
