//! Circular binary lattices: the cipher block and CA configuration.
//!
//! A [`Lattice`] stores one cell per byte (always `0` or `1`). Bit 0 is the
//! leftmost cell; in every byte and hex encoding it is the most significant
//! bit of the first byte or digit.

use std::fmt;

use crate::error::{HcaError, Result};

/// Left or right. Used both as a toggle direction of a rule and as a
/// rotation direction of a lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

/// Toggle direction of a rule pair, selected by the last key bit.
pub type ToggleDirection = Direction;

impl Direction {
    /// Key-bit convention: `0` is left, `1` is right.
    pub fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Direction::Left
        } else {
            Direction::Right
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Direction::Left => 0,
            Direction::Right => 1,
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Direction::Left => f.write_str("left"),
            Direction::Right => f.write_str("right"),
        }
    }
}

/// Fixed-length circular sequence of binary cells.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lattice {
    cells: Vec<u8>,
}

impl Lattice {
    pub fn zeros(len: usize) -> Self {
        Lattice {
            cells: vec![0; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Lattice {
            cells: vec![1; len],
        }
    }

    /// Builds a lattice from cell values, each of which must be 0 or 1.
    pub fn from_cells(cells: impl Into<Vec<u8>>) -> Result<Self> {
        let cells = cells.into();
        if let Some((index, &value)) = cells.iter().enumerate().find(|(_, &c)| c > 1) {
            return Err(HcaError::InvalidCell { index, value });
        }
        Ok(Lattice { cells })
    }

    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        Lattice {
            cells: bits.into_iter().map(u8::from).collect(),
        }
    }

    /// Parses a string of `0` / `1` characters. Whitespace and `_` are ignored.
    pub fn from_bit_str(text: &str) -> Result<Self> {
        let mut cells = Vec::with_capacity(text.len());
        for (index, ch) in text.chars().enumerate() {
            match ch {
                '0' => cells.push(0),
                '1' => cells.push(1),
                c if c.is_whitespace() || c == '_' => {}
                c => {
                    return Err(HcaError::InvalidCell {
                        index,
                        value: c as u32 as u8,
                    })
                }
            }
        }
        Ok(Lattice { cells })
    }

    /// Unpacks bytes MSB-first into `8 * bytes.len()` cells.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut cells = Vec::with_capacity(bytes.len() * 8);
        for &b in bytes {
            for shift in (0..8).rev() {
                cells.push((b >> shift) & 1);
            }
        }
        Lattice { cells }
    }

    /// Packs cells MSB-first. The length must be a multiple of 8.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        if !self.cells.len().is_multiple_of(8) {
            return Err(HcaError::LengthMismatch {
                expected: self.cells.len().next_multiple_of(8),
                found: self.cells.len(),
            });
        }
        Ok(pack_bytes(&self.cells))
    }

    pub(crate) fn from_raw(cells: Vec<u8>) -> Self {
        debug_assert!(cells.iter().all(|&c| c <= 1));
        Lattice { cells }
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Cell at `index mod len`.
    pub fn get(&self, index: usize) -> u8 {
        self.cells[index % self.cells.len()]
    }

    /// Returns a copy with cell `index mod len` inverted.
    pub fn with_flipped(&self, index: usize) -> Self {
        let mut cells = self.cells.clone();
        let i = index % cells.len();
        cells[i] ^= 1;
        Lattice { cells }
    }

    /// Circular rotation by `k` cells. Rotating left moves cell 0 to the end.
    pub fn rotate(&self, k: usize, direction: Direction) -> Self {
        let mut cells = self.cells.clone();
        if !cells.is_empty() {
            let k = k % cells.len();
            match direction {
                Direction::Left => cells.rotate_left(k),
                Direction::Right => cells.rotate_right(k),
            }
        }
        Lattice { cells }
    }

    pub fn xor(&self, other: &Lattice) -> Result<Lattice> {
        if self.len() != other.len() {
            return Err(HcaError::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(Lattice {
            cells: self
                .cells
                .iter()
                .zip(&other.cells)
                .map(|(a, b)| a ^ b)
                .collect(),
        })
    }

    pub fn count_ones(&self) -> usize {
        self.cells.iter().map(|&c| c as usize).sum()
    }

    /// Fraction of cells equal to 1. Zero for an empty lattice.
    pub fn ones_fraction(&self) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        self.count_ones() as f64 / self.cells.len() as f64
    }

    /// Uppercase hex, bit 0 as the MSB of the first digit.
    pub fn to_hex(&self) -> Result<String> {
        encode_hex(&self.cells)
    }

    /// Inverse of [`Lattice::to_hex`]; accepts either case.
    pub fn from_hex(text: &str) -> Result<Self> {
        Ok(Lattice {
            cells: decode_hex(text)?,
        })
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.cells {
            f.write_str(if c == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice({self})")
    }
}

pub(crate) fn pack_bytes(cells: &[u8]) -> Vec<u8> {
    cells
        .chunks(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, &c| (acc << 1) | c))
        .collect()
}

pub(crate) fn unpack_bytes_into(bytes: &[u8], cells: &mut [u8]) {
    debug_assert_eq!(cells.len(), bytes.len() * 8);
    for (chunk, &b) in cells.chunks_mut(8).zip(bytes) {
        for (k, c) in chunk.iter_mut().enumerate() {
            *c = (b >> (7 - k)) & 1;
        }
    }
}

/// Hex-encodes a cell sequence whose length is a multiple of 4.
pub(crate) fn encode_hex(cells: &[u8]) -> Result<String> {
    if !cells.len().is_multiple_of(4) {
        return Err(HcaError::InvalidHex(format!(
            "{} cells is not a whole number of hex digits",
            cells.len()
        )));
    }
    const DIGITS: &[u8; 16] = b"0123456789ABCDEF";
    Ok(cells
        .chunks(4)
        .map(|nibble| {
            let v = nibble.iter().fold(0usize, |acc, &c| (acc << 1) | c as usize);
            DIGITS[v] as char
        })
        .collect())
}

pub(crate) fn decode_hex(text: &str) -> Result<Vec<u8>> {
    let mut cells = Vec::with_capacity(text.len() * 4);
    for ch in text.chars() {
        let v = ch
            .to_digit(16)
            .ok_or_else(|| HcaError::InvalidHex(format!("unexpected character {ch:?}")))?;
        for shift in (0..4).rev() {
            cells.push(((v >> shift) & 1) as u8);
        }
    }
    Ok(cells)
}
