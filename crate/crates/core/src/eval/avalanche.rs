use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use super::{mean_sigma, stream_rng};
use crate::cipher::{CipherParams, HcaCipher};
use crate::error::{HcaError, Result};
use crate::key::Key;
use crate::keyschedule::{spatial_entropy, validate_key, ValidatedKey};
use crate::lattice::Lattice;

/// Which input receives the single-bit flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AvalancheKind {
    Plaintext,
    Key,
}

impl fmt::Display for AvalancheKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AvalancheKind::Plaintext => "plaintext",
            AvalancheKind::Key => "key",
        })
    }
}

impl FromStr for AvalancheKind {
    type Err = HcaError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "plaintext" | "p" => Ok(AvalancheKind::Plaintext),
            "key" | "k" => Ok(AvalancheKind::Key),
            other => Err(HcaError::InvalidConfig(format!("unknown avalanche kind {other:?}"))),
        }
    }
}

/// Difference lattice `Z = E(p, k) ^ E(p', k')` where exactly one bit of the
/// plaintext or of the key's rule bits is flipped. `flip = None` flips nothing.
pub fn avalanche_trial(
    key: &ValidatedKey,
    plaintext: &Lattice,
    kind: AvalancheKind,
    flip: Option<usize>,
    params: CipherParams,
) -> Result<Lattice> {
    let base = HcaCipher::new(key.clone(), params)?;
    let c1 = base.encrypt_block(plaintext)?;
    let c2 = match (kind, flip) {
        (_, None) => base.encrypt_block(plaintext)?,
        (AvalancheKind::Plaintext, Some(i)) => {
            if i >= plaintext.len() {
                return Err(HcaError::InvalidConfig(format!(
                    "flip index {i} outside a {}-bit block",
                    plaintext.len()
                )));
            }
            base.encrypt_block(&plaintext.with_flipped(i))?
        }
        (AvalancheKind::Key, Some(i)) => {
            if i >= key.key().rule_bits().len() {
                return Err(HcaError::InvalidConfig(format!(
                    "flip index {i} outside the {} rule bits",
                    key.key().rule_bits().len()
                )));
            }
            let flipped = validate_key(&key.key().with_flipped(i)?)?;
            HcaCipher::new(flipped, params)?.encrypt_block(plaintext)?
        }
    };
    c1.xor(&c2)
}

/// Entropy window for difference lattices: `floor(log2 N)`, at least 1.
pub fn entropy_window(block_bits: usize) -> usize {
    (usize::BITS - 1 - block_bits.max(2).leading_zeros()) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvalancheConfig {
    pub block_bits: usize,
    pub radius: usize,
    pub rounds: usize,
    pub kind: AvalancheKind,
    pub trials: usize,
    pub seed: u64,
}

impl AvalancheConfig {
    /// Radius 4, `T = N` rounds and `N^2` trials.
    pub fn new(block_bits: usize, kind: AvalancheKind, seed: u64) -> Self {
        AvalancheConfig {
            block_bits,
            radius: 4,
            rounds: block_bits,
            kind,
            trials: block_bits * block_bits,
            seed,
        }
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyStats {
    pub min: f64,
    pub max: f64,
    pub avg: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvalancheReport {
    pub kind: AvalancheKind,
    pub block_bits: usize,
    pub trials: usize,
    pub seed: u64,
    /// Mean percentage of flipped ciphertext bits.
    pub mean: f64,
    /// Standard deviation of that percentage.
    pub sigma: f64,
    pub entropy: EntropyStats,
}

impl AvalancheReport {
    pub const CSV_HEADER: &'static str = "kind,N,trials,mean,sigma,ent_min,ent_max,ent_avg,ent_sigma";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3}",
            self.kind,
            self.block_bits,
            self.trials,
            self.mean,
            self.sigma,
            self.entropy.min,
            self.entropy.max,
            self.entropy.avg,
            self.entropy.sigma
        )
    }
}

impl fmt::Display for AvalancheReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kind: {}", self.kind)?;
        writeln!(f, "N: {}", self.block_bits)?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "seed: {}", self.seed)?;
        writeln!(f, "mean: {:.3}%", self.mean)?;
        writeln!(f, "sigma: {:.3}", self.sigma)?;
        writeln!(
            f,
            "entropy (w={}): min {:.3} max {:.3} avg {:.3} sigma {:.3}",
            entropy_window(self.block_bits),
            self.entropy.min,
            self.entropy.max,
            self.entropy.avg,
            self.entropy.sigma
        )
    }
}

fn random_valid_key<R: Rng>(radius: usize, rng: &mut R) -> Result<ValidatedKey> {
    loop {
        if let Ok(k) = validate_key(&Key::random(radius, rng)?) {
            return Ok(k);
        }
    }
}

fn run_trial(config: &AvalancheConfig, params: CipherParams, index: usize) -> Result<(f64, f64)> {
    let mut rng = stream_rng(config.seed, index as u64);
    let n = config.block_bits;
    let (key, flip) = loop {
        let key = random_valid_key(config.radius, &mut rng)?;
        match config.kind {
            AvalancheKind::Plaintext => break (key, rng.random_range(0..n)),
            AvalancheKind::Key => {
                let i = rng.random_range(0..key.key().rule_bits().len());
                if validate_key(&key.key().with_flipped(i)?).is_ok() {
                    break (key, i);
                }
            }
        }
    };
    let plaintext = Lattice::from_bools((0..n).map(|_| rng.random::<bool>()));
    let z = avalanche_trial(&key, &plaintext, config.kind, Some(flip), params)?;
    let h = spatial_entropy(z.cells(), entropy_window(n))?;
    Ok((100.0 * z.ones_fraction(), h))
}

/// Runs `config.trials` independent trials, each with its own random valid
/// key, plaintext and flip position. Results do not depend on thread count.
pub fn avalanche_report(config: &AvalancheConfig) -> Result<AvalancheReport> {
    if config.trials == 0 {
        return Err(HcaError::InvalidConfig("at least one trial is required".into()));
    }
    let params = CipherParams::new(config.radius, config.block_bits, config.rounds)?;
    let results = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, params, i))
        .collect::<Result<Vec<_>>>()?;
    let flips: Vec<f64> = results.iter().map(|r| r.0).collect();
    let entropies: Vec<f64> = results.iter().map(|r| r.1).collect();
    let (mean, sigma) = mean_sigma(&flips);
    let (avg, ent_sigma) = mean_sigma(&entropies);
    Ok(AvalancheReport {
        kind: config.kind,
        block_bits: config.block_bits,
        trials: config.trials,
        seed: config.seed,
        mean,
        sigma,
        entropy: EntropyStats {
            min: entropies.iter().copied().fold(f64::INFINITY, f64::min),
            max: entropies.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            avg,
            sigma: ent_sigma,
        },
    })
}
