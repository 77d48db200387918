//! Secret keys and their text format.
//!
//! A radius-`r` key has `2^(2r) + 1` bits. The first `2^(2r)` bits seed the
//! rule tables; the final bit selects the toggle direction (0 = left,
//! 1 = right).
//!
//! Text form: the rule bits as hex (bit 0 is the MSB of the first digit),
//! a colon, then `L` or `R`. At radius 4 that is 64 hex digits, e.g.
//! `"00…00:L"`. Key files hold one key per line; `#` starts a comment.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{HcaError, Result};
use crate::lattice::{decode_hex, encode_hex, ToggleDirection};
use crate::rule::{check_radius, MAX_RADIUS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Key {
    bits: Vec<u8>,
    radius: usize,
}

impl Key {
    /// Number of key bits for a radius: `2^(2r) + 1`.
    pub fn len_for_radius(radius: usize) -> usize {
        (1usize << (2 * radius)) + 1
    }

    /// Wraps raw key bits; the length fixes the radius.
    pub fn from_bits(bits: impl Into<Vec<u8>>) -> Result<Self> {
        let bits = bits.into();
        let radius = (1..=MAX_RADIUS)
            .find(|&r| Key::len_for_radius(r) == bits.len())
            .ok_or_else(|| {
                HcaError::InvalidKey(format!(
                    "{} bits is not 2^(2r)+1 for any supported radius",
                    bits.len()
                ))
            })?;
        if let Some(index) = bits.iter().position(|&b| b > 1) {
            return Err(HcaError::InvalidCell {
                index,
                value: bits[index],
            });
        }
        Ok(Key { bits, radius })
    }

    pub fn from_parts(rule_bits: &[u8], direction: ToggleDirection) -> Result<Self> {
        let mut bits = rule_bits.to_vec();
        bits.push(direction.bit());
        Key::from_bits(bits)
    }

    /// Uniformly random key of the given radius (not entropy-checked).
    pub fn random<R: Rng + ?Sized>(radius: usize, rng: &mut R) -> Result<Self> {
        check_radius(radius)?;
        let bits = (0..Key::len_for_radius(radius))
            .map(|_| rng.random::<bool>() as u8)
            .collect::<Vec<_>>();
        Ok(Key { bits, radius })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    /// The `2^(2r)` bits that seed the rule tables.
    pub fn rule_bits(&self) -> &[u8] {
        &self.bits[..self.bits.len() - 1]
    }

    pub fn direction(&self) -> ToggleDirection {
        ToggleDirection::from_bit(self.bits[self.bits.len() - 1])
    }

    /// Circular left rotation over all key bits, direction bit included.
    pub fn rotate_left(&self, k: usize) -> Key {
        let mut bits = self.bits.clone();
        let k = k % bits.len();
        bits.rotate_left(k);
        Key {
            bits,
            radius: self.radius,
        }
    }

    pub fn rotate_right(&self, k: usize) -> Key {
        let mut bits = self.bits.clone();
        let k = k % bits.len();
        bits.rotate_right(k);
        Key {
            bits,
            radius: self.radius,
        }
    }

    pub fn with_flipped(&self, index: usize) -> Result<Key> {
        if index >= self.bits.len() {
            return Err(HcaError::InvalidKey(format!(
                "bit index {index} out of range for a {}-bit key",
                self.bits.len()
            )));
        }
        let mut bits = self.bits.clone();
        bits[index] ^= 1;
        Ok(Key {
            bits,
            radius: self.radius,
        })
    }

    pub fn to_text(&self) -> String {
        let hex = encode_hex(self.rule_bits()).expect("2^(2r) bits is a multiple of 4");
        let dir = match self.direction() {
            ToggleDirection::Left => 'L',
            ToggleDirection::Right => 'R',
        };
        format!("{hex}:{dir}")
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let text = text.trim();
        let (hex, dir) = text
            .rsplit_once(':')
            .ok_or_else(|| HcaError::InvalidKey("expected <hex>:<L|R>".into()))?;
        let direction = match dir.trim() {
            "L" | "l" => ToggleDirection::Left,
            "R" | "r" => ToggleDirection::Right,
            other => {
                return Err(HcaError::InvalidKey(format!(
                    "direction must be L or R, got {other:?}"
                )))
            }
        };
        let rule_bits = decode_hex(hex.trim())?;
        Key::from_parts(&rule_bits, direction)
    }
}

impl FromStr for Key {
    type Err = HcaError;

    fn from_str(s: &str) -> Result<Self> {
        Key::parse_text(s)
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Key({})", self.to_text())
    }
}

/// Parses a key file: one key per line, blank lines and `#` comments ignored.
pub fn parse_key_file(text: &str) -> Result<Vec<Key>> {
    text.lines()
        .map(|line| line.split('#').next().unwrap_or("").trim())
        .filter(|line| !line.is_empty())
        .map(Key::parse_text)
        .collect()
}
