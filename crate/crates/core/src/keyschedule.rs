//! Key acceptance, rule derivation and the per-round key schedule.
//!
//! A key is accepted when the normalized spatial entropy of its rule bits,
//! measured with circular windows of `2r` bits, is at least
//! [`ENTROPY_THRESHOLD`]. The main rule is built from the rule bits (left
//! toggle: `K ++ !K`; right toggle: `K[0], !K[0], K[1], !K[1], …`). The border
//! rule is the absolute rule with the same toggle side whose first entry is
//! the complement of the main rule's first entry.
//!
//! Round `t` of encryption uses the key rotated left by `t` bits over its full
//! length, direction bit included, so the toggle side can change per round.

use std::collections::HashMap;

use crate::error::{HcaError, Result};
use crate::key::Key;
use crate::lattice::ToggleDirection;
use crate::rule::Rule;

/// Minimum accepted normalized key entropy.
pub const ENTROPY_THRESHOLD: f64 = 0.75;

/// Slack for floating-point noise around the threshold; keys that sit exactly
/// on it (e.g. `0001` at radius 1) must be accepted.
const THRESHOLD_EPSILON: f64 = 1e-9;

/// A key that passed the entropy gate, together with its entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedKey {
    key: Key,
    entropy: f64,
}

impl ValidatedKey {
    pub fn key(&self) -> &Key {
        &self.key
    }

    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    pub fn radius(&self) -> usize {
        self.key.radius()
    }

    pub fn into_key(self) -> Key {
        self.key
    }
}

/// Which algorithm a round key is requested for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScheduleMode {
    Cipher,
    Decipher,
}

/// Normalized windowed Shannon entropy.
///
/// Counts every `window`-bit pattern over the `len` circular overlapping
/// windows of `bits` and returns `-Σ p log2 p / window`.
pub fn spatial_entropy(bits: &[u8], window: usize) -> Result<f64> {
    if bits.is_empty() {
        return Err(HcaError::InputTooShort { len: 0, min: 1 });
    }
    if window == 0 || window > bits.len() || window > 63 {
        return Err(HcaError::InvalidConfig(format!(
            "window of {window} bits is invalid for a {}-bit sequence",
            bits.len()
        )));
    }
    let len = bits.len();
    let mask = if window == 64 { u64::MAX } else { (1u64 << window) - 1 };

    let mut code = 0u64;
    for &b in &bits[..window] {
        code = (code << 1) | b as u64;
    }
    let total = len as f64;
    let entropy_of = |counts: &mut dyn Iterator<Item = usize>| {
        counts
            .filter(|&c| c > 0)
            .map(|c| {
                let p = c as f64 / total;
                p * (1.0 / p).log2()
            })
            .sum::<f64>()
    };

    let h = if window <= 16 {
        let mut counts = vec![0usize; 1 << window];
        for start in 0..len {
            counts[code as usize] += 1;
            code = ((code << 1) | bits[(start + window) % len] as u64) & mask;
        }
        entropy_of(&mut counts.into_iter())
    } else {
        let mut counts: HashMap<u64, usize> = HashMap::new();
        for start in 0..len {
            *counts.entry(code).or_default() += 1;
            code = ((code << 1) | bits[(start + window) % len] as u64) & mask;
        }
        entropy_of(&mut counts.into_values())
    };
    Ok(h / window as f64)
}

/// Entropy of a key's rule bits with the standard `2r`-bit window.
pub fn key_entropy(key: &Key) -> f64 {
    spatial_entropy(key.rule_bits(), 2 * key.radius()).expect("rule bits are never empty")
}

/// Accepts a key iff its entropy reaches [`ENTROPY_THRESHOLD`].
pub fn validate_key(key: &Key) -> Result<ValidatedKey> {
    let entropy = key_entropy(key);
    if entropy + THRESHOLD_EPSILON >= ENTROPY_THRESHOLD {
        Ok(ValidatedKey {
            key: key.clone(),
            entropy,
        })
    } else {
        Err(HcaError::KeyRejected { entropy })
    }
}

/// Main rule table from a key (no entropy check is implied).
pub fn derive_main_rule(key: &Key) -> Rule {
    let bits = key.rule_bits();
    let direction = key.direction();
    let table: Vec<u8> = match direction {
        ToggleDirection::Left => bits.iter().copied().chain(bits.iter().map(|b| b ^ 1)).collect(),
        ToggleDirection::Right => bits.iter().flat_map(|&b| [b, b ^ 1]).collect(),
    };
    Rule::with_toggle(key.radius(), table, direction).expect("derived table always toggles")
}

/// Border rule: one of the four absolute rules, chosen by the key's
/// direction and the main rule's first entry.
pub fn derive_border_rule(key: &Key) -> Rule {
    let main_first = key.rule_bits()[0];
    border_rule_for(key.radius(), main_first, key.direction())
}

pub(crate) fn border_rule_for(radius: usize, main_first: u8, direction: ToggleDirection) -> Rule {
    let half = 1usize << (2 * radius);
    let first = main_first ^ 1;
    let table: Vec<u8> = match direction {
        // first=1: 1^h 0^h ; first=0: 0^h 1^h
        ToggleDirection::Left => (0..2 * half).map(|n| first ^ (n >= half) as u8).collect(),
        // first=1: (10)^h ; first=0: (01)^h
        ToggleDirection::Right => (0..2 * half).map(|n| first ^ (n & 1) as u8).collect(),
    };
    Rule::with_toggle(radius, table, direction).expect("absolute rules toggle")
}

/// Key used in round `t` of a `rounds`-round run.
pub fn round_key(base: &Key, t: usize, rounds: usize, mode: ScheduleMode) -> Result<Key> {
    if t >= rounds {
        return Err(HcaError::RoundOutOfRange { round: t, rounds });
    }
    Ok(match mode {
        ScheduleMode::Cipher => base.rotate_left(t),
        ScheduleMode::Decipher => base.rotate_left(rounds - 1 - t),
    })
}

/// Iterates the round keys of a run in execution order.
#[derive(Debug, Clone)]
pub struct RoundKeys {
    base: Key,
    rounds: usize,
    mode: ScheduleMode,
    next: usize,
}

impl RoundKeys {
    pub fn new(base: Key, rounds: usize, mode: ScheduleMode) -> Self {
        RoundKeys {
            base,
            rounds,
            mode,
            next: 0,
        }
    }
}

impl Iterator for RoundKeys {
    type Item = Key;

    fn next(&mut self) -> Option<Key> {
        let t = self.next;
        if t >= self.rounds {
            return None;
        }
        self.next += 1;
        round_key(&self.base, t, self.rounds, self.mode).ok()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.rounds - self.next;
        (left, Some(left))
    }
}

impl ExactSizeIterator for RoundKeys {}
