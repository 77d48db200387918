use std::fmt;

use rayon::prelude::*;

use super::stream_rng;
use crate::error::{HcaError, Result};
use crate::key::Key;
use crate::keyschedule::validate_key;
use crate::rule::check_radius;

/// Sample count used when the key space is too large to enumerate.
pub const DEFAULT_CENSUS_SAMPLES: u64 = 1 << 20;

const EXHAUSTIVE_MAX_RADIUS: usize = 2;
const SAMPLES_PER_TASK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CensusReport {
    pub radius: usize,
    pub examined: u64,
    pub discarded: u64,
    pub exhaustive: bool,
}

impl CensusReport {
    pub fn discarded_percent(&self) -> f64 {
        100.0 * self.discarded as f64 / self.examined as f64
    }
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "radius: {}", self.radius)?;
        writeln!(f, "key bits: {}", Key::len_for_radius(self.radius))?;
        writeln!(
            f,
            "examined: {} ({})",
            self.examined,
            if self.exhaustive { "exhaustive" } else { "sampled" }
        )?;
        writeln!(f, "rejected: {}", self.discarded)?;
        writeln!(f, "discarded: {:.2}%", self.discarded_percent())
    }
}

fn key_from_code(code: u64, len: usize) -> Key {
    let bits: Vec<u8> = (0..len).map(|i| ((code >> (len - 1 - i)) & 1) as u8).collect();
    Key::from_bits(bits).expect("length matches the radius")
}

/// Share of keys failing validation. Radius 1 and 2 enumerate every key;
/// larger radii draw `samples` uniform keys from `seed`.
pub fn keyspace_census(radius: usize, samples: u64, seed: u64) -> Result<CensusReport> {
    check_radius(radius)?;
    let len = Key::len_for_radius(radius);
    if radius <= EXHAUSTIVE_MAX_RADIUS {
        let total = 1u64 << len;
        let discarded = (0..total)
            .into_par_iter()
            .filter(|&code| validate_key(&key_from_code(code, len)).is_err())
            .count() as u64;
        return Ok(CensusReport {
            radius,
            examined: total,
            discarded,
            exhaustive: true,
        });
    }
    if samples == 0 {
        return Err(HcaError::InvalidConfig("at least one sample is required".into()));
    }
    let tasks = samples.div_ceil(SAMPLES_PER_TASK);
    let discarded = (0..tasks)
        .into_par_iter()
        .map(|task| {
            let mut rng = stream_rng(seed, task);
            let count = SAMPLES_PER_TASK.min(samples - task * SAMPLES_PER_TASK);
            let mut rejected = 0u64;
            for _ in 0..count {
                let key = Key::random(radius, &mut rng)?;
                if validate_key(&key).is_err() {
                    rejected += 1;
                }
            }
            Ok(rejected)
        })
        .collect::<Result<Vec<u64>>>()?
        .into_iter()
        .sum();
    Ok(CensusReport {
        radius,
        examined: samples,
        discarded,
        exhaustive: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius1_quarter_discarded() {
        let report = keyspace_census(1, 0, 0).unwrap();
        assert_eq!(report.examined, 32);
        assert_eq!(report.discarded, 8);
        assert!(report.to_string().contains("discarded: 25.00%"));
    }

    #[test]
    fn sampled_census_is_deterministic() {
        let a = keyspace_census(3, 5000, 4).unwrap();
        assert_eq!(a, keyspace_census(3, 5000, 4).unwrap());
        assert_eq!(a.examined, 5000);
        assert!(!a.exhaustive);
        assert!(keyspace_census(4, 0, 0).is_err());
    }

    #[test]
    fn codes_are_msb_first() {
        let k = key_from_code(0b01110, 5);
        assert_eq!(k.bits(), &[0, 1, 1, 1, 0]);
    }
}
