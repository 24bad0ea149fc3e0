//! Multicomplex number kernel.
//!
//! M_n is built by n successive complexifications of the reals: commuting
//! units i_1, .., i_n, each squaring to -1. For n >= 2 the algebra splits
//! over a basis of 2^(n-1) orthogonal idempotents, which turns
//! multiplication, inversion, determinants and spectral theory into
//! componentwise complex work. The modules follow those layers:
//!
//! - [`standard`]: the real-coefficient carrier and its full product
//! - [`idempotent`]: the canonical idempotent basis and the fast transforms
//! - [`ideal`]: the lattice of ideals as index sets over that basis
//! - [`linalg`]: matrices over M_n, slicewise determinant and inverse
//! - [`hilbert`]: module scalar product, Riesz vectors, spectral theory
//! - [`expr`], [`docs`], [`render`]: expression language and JSON interchange
//!   shared by the `mcx` binary and the C ABI

// kernels index into several parallel slices at once; indexed loops keep
// them aligned with the componentwise formulas
#![allow(clippy::needless_range_loop)]

pub mod docs;
pub mod error;
pub mod expr;
pub mod hilbert;
pub mod ideal;
pub mod idempotent;
pub mod linalg;
pub mod render;
pub mod standard;

pub use error::{McError, Result};
pub use hilbert::{
    apply_operator, is_self_adjoint, outer_product, riesz_vector, spectral_decompose, Ket,
    SpectralResult,
};
pub use idempotent::{from_idempotent, to_idempotent, EpsilonIndex, IdempotentRep, Multiperplex};
pub use linalg::{ComplexMatrix, McMatrix, DEFAULT_SINGULAR_TOL};
pub use standard::{ConjugationMask, Level, Multicomplex, UnitIndexSet, DEFAULT_TOL, MAX_LEVEL};
