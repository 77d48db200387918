use std::io::Write;

use rand::RngCore;
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

use super::stream_rng;
use crate::cipher::{CipherParams, HcaCipher};
use crate::error::{HcaError, Result};
use crate::keyschedule::ValidatedKey;
use crate::lattice::unpack_bytes_into;

/// Shortest input accepted by the statistical tests.
pub const MIN_TEST_BITS: usize = 100;
/// Block length `M` of the block-frequency test.
pub const DEFAULT_BLOCK_LEN: usize = 128;

/// Chained difference stream: `P1` is seeded random, `P(i+1) = E(P(i))`, and
/// the output is `P1^P2 || P2^P3 || ...` up to `total_bytes`, which must be
/// a whole number of blocks.
pub fn nist_sequence(
    seed: u64,
    total_bytes: usize,
    key: &ValidatedKey,
    params: CipherParams,
) -> Result<Vec<u8>> {
    let block = params.block_bytes().ok_or_else(|| {
        HcaError::InvalidConfig(format!("{}-bit blocks are not byte aligned", params.block_bits()))
    })?;
    if !total_bytes.is_multiple_of(block) {
        return Err(HcaError::InvalidConfig(format!(
            "{total_bytes} bytes is not a multiple of the {block}-byte block"
        )));
    }
    let cipher = HcaCipher::new(key.clone(), params)?;
    let mut current = vec![0u8; block];
    stream_rng(seed, 0).fill_bytes(&mut current);
    let mut out = Vec::with_capacity(total_bytes);
    while out.len() < total_bytes {
        let mut next = current.clone();
        cipher.encrypt_bytes(&mut next)?;
        out.extend(current.iter().zip(&next).map(|(a, b)| a ^ b));
        current = next;
    }
    Ok(out)
}

/// Unpacks bytes MSB first into 0/1 values.
pub fn bits_from_bytes(bytes: &[u8]) -> Vec<u8> {
    let mut bits = vec![0u8; bytes.len() * 8];
    unpack_bytes_into(bytes, &mut bits);
    bits
}

pub fn write_raw<W: Write>(mut out: W, bytes: &[u8]) -> Result<()> {
    out.write_all(bytes)?;
    Ok(())
}

/// One ASCII `'0'`/`'1'` character per bit, no separators.
pub fn write_ascii<W: Write>(mut out: W, bytes: &[u8]) -> Result<()> {
    let text: Vec<u8> = bits_from_bytes(bytes).iter().map(|&b| b'0' + b).collect();
    out.write_all(&text)?;
    Ok(())
}

fn check_len(bits: &[u8], min: usize) -> Result<()> {
    if bits.len() < min {
        return Err(HcaError::InputTooShort { len: bits.len(), min });
    }
    Ok(())
}

/// Frequency (monobit) test p-value.
pub fn monobit_test(bits: &[u8]) -> Result<f64> {
    check_len(bits, MIN_TEST_BITS)?;
    let n = bits.len() as f64;
    let ones = bits.iter().filter(|&&b| b == 1).count() as f64;
    let sum = 2.0 * ones - n;
    Ok(erfc(sum.abs() / n.sqrt() / std::f64::consts::SQRT_2))
}

/// Frequency-within-a-block test p-value with blocks of `block_len` bits.
pub fn block_frequency_test(bits: &[u8], block_len: usize) -> Result<f64> {
    check_len(bits, MIN_TEST_BITS)?;
    if block_len == 0 || block_len > bits.len() {
        return Err(HcaError::InvalidConfig(format!(
            "block length {block_len} does not fit a {}-bit sequence",
            bits.len()
        )));
    }
    let blocks = bits.len() / block_len;
    let chi_sq: f64 = bits
        .chunks_exact(block_len)
        .map(|chunk| {
            let pi = chunk.iter().filter(|&&b| b == 1).count() as f64 / block_len as f64;
            (pi - 0.5).powi(2)
        })
        .sum::<f64>()
        * 4.0
        * block_len as f64;
    Ok(gamma_ur(blocks as f64 / 2.0, chi_sq / 2.0))
}

/// Runs test p-value (0 when the frequency pre-test fails).
pub fn runs_test(bits: &[u8]) -> Result<f64> {
    check_len(bits, MIN_TEST_BITS)?;
    let n = bits.len() as f64;
    let pi = bits.iter().filter(|&&b| b == 1).count() as f64 / n;
    if (pi - 0.5).abs() >= 2.0 / n.sqrt() {
        return Ok(0.0);
    }
    let runs = 1 + bits.windows(2).filter(|w| w[0] != w[1]).count();
    let expected = 2.0 * n * pi * (1.0 - pi);
    Ok(erfc(
        (runs as f64 - expected).abs() / (2.0 * (2.0 * n).sqrt() * pi * (1.0 - pi)),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmokeResult {
    pub bits: usize,
    pub monobit: f64,
    pub block_frequency: f64,
    pub runs: f64,
}

impl SmokeResult {
    pub fn passes(&self, alpha: f64) -> bool {
        self.monobit >= alpha && self.block_frequency >= alpha && self.runs >= alpha
    }
}

/// Monobit, block-frequency (`M = 128`) and runs tests on one sequence.
pub fn smoke_test(bits: &[u8]) -> Result<SmokeResult> {
    Ok(SmokeResult {
        bits: bits.len(),
        monobit: monobit_test(bits)?,
        block_frequency: block_frequency_test(bits, DEFAULT_BLOCK_LEN.min(bits.len()))?,
        runs: runs_test(bits)?,
    })
}
