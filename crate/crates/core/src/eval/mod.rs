//! Empirical evaluations: avalanche statistics, key-space census and
//! randomness-test input generation with three in-house statistical tests.

mod avalanche;
mod census;
mod nist;

pub use avalanche::{
    avalanche_report, avalanche_trial, entropy_window, AvalancheConfig, AvalancheKind,
    AvalancheReport, EntropyStats,
};
pub use census::{keyspace_census, CensusReport, DEFAULT_CENSUS_SAMPLES};
pub use nist::{
    bits_from_bytes, block_frequency_test, monobit_test, nist_sequence, runs_test, smoke_test,
    write_ascii, write_raw, SmokeResult, DEFAULT_BLOCK_LEN, MIN_TEST_BITS,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for work item `index` under `seed`.
pub(crate) fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Mean and sample standard deviation.
pub(crate) fn mean_sigma(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
