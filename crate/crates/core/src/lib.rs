//! Hochschild and cyclic (co)homology of finite superadditive categories.
//!
//! A superadditive category is presented by structure constants over an
//! exact field (the rationals or an odd prime field): finitely many objects,
//! a homogeneous basis of each Z_2-graded hom space, designated identities,
//! and the expansion of every composable basis pair. On top of that sit the
//! graded Hochschild–Mitchell complex, the cyclic bicomplex with its total
//! complex, the mixed (∂+B)-complex with the Gysin–Connes sequence, shuffle
//! and cyclic-shuffle products, and finite Morita-type completions.
//!
//! All arithmetic is exact; there is no floating point anywhere. The core is
//! generic over [`field::Scalar`]; the crate root exposes aliases for the
//! two shipped instantiations.

pub mod builtin;
pub mod category;
pub mod complex;
pub mod cyclic;
pub mod field;
pub mod homology;
pub mod morita;
pub mod nerve;
pub mod products;
pub mod sparse;

pub use builtin::{builtin, BUILTIN_NAMES};
pub use category::{BasisMorphism, Parity, SuperCategory, ValidationReport};
pub use field::{FieldKind, FieldSpec, Fp, Rat, Scalar};
pub use sparse::{SparseMatrix, SparseVec};

/// Categories over the rationals.
pub type RatCategory = SuperCategory<Rat>;
/// Categories over an odd prime field.
pub type FpCategory = SuperCategory<Fp>;
/// Sparse matrices over the rationals.
pub type RatMatrix = SparseMatrix<Rat>;
/// Sparse matrices over an odd prime field.
pub type FpMatrix = SparseMatrix<Fp>;
