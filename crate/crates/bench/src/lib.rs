//! Shared fixtures for the criterion benches.

use extsource_core::model::{assemble, AtomDistribution, AtomKind, HermitianMatrix, ModelConfig};
use extsource_core::pastur::SourceParameter;
use extsource_core::stream::{trial_stream, Lane};

/// One deterministic model matrix at the given dimension.
pub fn fixture(n: usize, seed: u64) -> HermitianMatrix {
    let cfg = ModelConfig::new(
        n,
        SourceParameter::new(2.0).unwrap(),
        AtomDistribution::new(AtomKind::Gaussian),
        seed,
    )
    .unwrap();
    assemble(&cfg, &mut trial_stream(seed, 0, Lane::Matrix)).unwrap()
}
