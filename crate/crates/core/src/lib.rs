//! Limiting spectral density and Monte Carlo verification for random
//! Hermitian matrices with a two-valued diagonal external source.
//!
//! The model is W = X / sqrt(n) + A with X an n x n complex Wigner matrix
//! and A = diag(a,...,a,-a,...,-a). The crate computes the limiting
//! eigenvalue density along two independent routes (the cubic it
//! satisfies, and the free-convolution fixed point for its Stieltjes
//! transform), samples the model reproducibly, decomposes it with a
//! built-in Hermitian eigensolver, and drives seeded experiments that
//! probe local-law, variance, concentration, and convergence-rate
//! behavior at desk scale.

pub mod eigen;
pub mod error;
pub mod experiment;
pub mod freeconv;
pub mod model;
pub mod pastur;
pub mod quadrature;
pub mod stats;
pub mod stream;

pub use eigen::{SpectralSample, Tridiagonal};
pub use error::{Error, Result};
pub use freeconv::{StieltjesQuery, StieltjesValue};
pub use model::{AtomDistribution, AtomKind, HermitianMatrix, ModelConfig};
pub use pastur::{
    CubicRoots, DensityValue, Regime, RootClassification, SourceParameter, SupportEdges,
};
pub use stats::{DerivativePair, DeviationRecord, IntervalCount, PerturbationDirection};
