//! Modes of operation, block padding and the ciphertext container.
//!
//! Byte streams are cut into `N/8`-byte blocks, so stream block sizes must be
//! multiples of 8 bits. A stream cipher instance uses the key's radius and
//! `T = N` rounds, which is the default 128/128 configuration at `N = 128`.
//!
//! ECB and CBC always pad; CTR is a keystream mode and leaves the payload
//! length equal to the plaintext length.

use rayon::prelude::*;

use crate::cipher::{CipherParams, HcaCipher};
use crate::error::{HcaError, Result};
use crate::keyschedule::ValidatedKey;

pub const MAGIC: &[u8; 4] = b"HCA1";
pub const VERSION: u8 = 0x01;
/// Padding stores the pad length in one byte, so blocks are at most 255 bytes.
pub const MAX_STREAM_BLOCK_BITS: usize = 255 * 8;

/// Mode of operation together with its IV.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CipherMode {
    /// Discouraged: equal plaintext blocks give equal ciphertext blocks.
    Ecb,
    /// Discouraged: malleable and prone to padding oracles.
    Cbc { iv: Vec<u8> },
    Ctr { iv: Vec<u8> },
}

impl CipherMode {
    pub fn code(&self) -> u8 {
        match self {
            CipherMode::Ecb => 1,
            CipherMode::Cbc { .. } => 2,
            CipherMode::Ctr { .. } => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CipherMode::Ecb => "ecb",
            CipherMode::Cbc { .. } => "cbc",
            CipherMode::Ctr { .. } => "ctr",
        }
    }

    pub fn iv(&self) -> Option<&[u8]> {
        match self {
            CipherMode::Ecb => None,
            CipherMode::Cbc { iv } | CipherMode::Ctr { iv } => Some(iv),
        }
    }

    fn is_padded(&self) -> bool {
        !matches!(self, CipherMode::Ctr { .. })
    }

    fn check_iv(&self, block_bytes: usize) -> Result<()> {
        match self.iv() {
            Some(iv) if iv.len() != block_bytes => Err(HcaError::InvalidConfig(format!(
                "IV is {} bytes, block is {block_bytes}",
                iv.len()
            ))),
            _ => Ok(()),
        }
    }
}

/// Serialized ciphertext: header, optional IV and payload.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Container {
    pub mode: CipherMode,
    pub block_bits: u16,
    pub payload: Vec<u8>,
}

impl Container {
    pub fn block_bytes(&self) -> usize {
        self.block_bits as usize / 8
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let iv = self.mode.iv().unwrap_or(&[]);
        let mut out = Vec::with_capacity(8 + iv.len() + self.payload.len());
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.mode.code());
        out.extend_from_slice(&self.block_bits.to_be_bytes());
        out.extend_from_slice(iv);
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 8 {
            return Err(HcaError::Container(format!(
                "header needs 8 bytes, got {}",
                bytes.len()
            )));
        }
        if &bytes[..4] != MAGIC {
            return Err(HcaError::Container("bad magic".into()));
        }
        if bytes[4] != VERSION {
            return Err(HcaError::Container(format!("unsupported version {}", bytes[4])));
        }
        let block_bits = u16::from_be_bytes([bytes[6], bytes[7]]);
        if block_bits == 0 || !block_bits.is_multiple_of(8) {
            return Err(HcaError::Container(format!("invalid block size {block_bits}")));
        }
        let block_bytes = block_bits as usize / 8;
        let rest = &bytes[8..];
        let (mode, payload) = match bytes[5] {
            1 => (CipherMode::Ecb, rest),
            code @ (2 | 3) => {
                if rest.len() < block_bytes {
                    return Err(HcaError::Container("truncated IV".into()));
                }
                let iv = rest[..block_bytes].to_vec();
                let mode = if code == 2 {
                    CipherMode::Cbc { iv }
                } else {
                    CipherMode::Ctr { iv }
                };
                (mode, &rest[block_bytes..])
            }
            other => return Err(HcaError::Container(format!("unknown mode {other}"))),
        };
        if mode.is_padded() && payload.len() % block_bytes != 0 {
            return Err(HcaError::Container(format!(
                "payload of {} bytes is not a whole number of {block_bytes}-byte blocks",
                payload.len()
            )));
        }
        Ok(Container {
            mode,
            block_bits,
            payload: payload.to_vec(),
        })
    }
}

/// Appends `k` bytes of value `k` (`1 <= k <= N/8`).
pub fn pad(data: &[u8], block_bits: usize) -> Vec<u8> {
    let block = block_bits / 8;
    assert!(
        (1..=255).contains(&block),
        "padding needs a block of 1 to 255 bytes"
    );
    let k = block - data.len() % block;
    let mut out = Vec::with_capacity(data.len() + k);
    out.extend_from_slice(data);
    out.resize(data.len() + k, k as u8);
    out
}

pub fn unpad(data: &[u8], block_bits: usize) -> Result<Vec<u8>> {
    let block = block_bits / 8;
    if block == 0 || data.is_empty() || !data.len().is_multiple_of(block) {
        return Err(HcaError::BadPadding);
    }
    let k = data[data.len() - 1] as usize;
    if k == 0 || k > block || data[data.len() - k..].iter().any(|&b| b as usize != k) {
        return Err(HcaError::BadPadding);
    }
    Ok(data[..data.len() - k].to_vec())
}

fn stream_cipher(key: &ValidatedKey, block_bits: usize) -> Result<(HcaCipher, usize)> {
    if !block_bits.is_multiple_of(8) || block_bits > MAX_STREAM_BLOCK_BITS {
        return Err(HcaError::InvalidConfig(format!(
            "stream block size must be a multiple of 8 up to {MAX_STREAM_BLOCK_BITS}, got {block_bits}"
        )));
    }
    let params = CipherParams::new(key.radius(), block_bits, block_bits)?;
    Ok((HcaCipher::new(key.clone(), params)?, block_bits / 8))
}

/// Adds `index` to the big-endian counter `iv`, wrapping at `2^N`.
fn counter_block(iv: &[u8], index: u64) -> Vec<u8> {
    let mut block = iv.to_vec();
    let mut carry = index as u128;
    for byte in block.iter_mut().rev() {
        if carry == 0 {
            break;
        }
        let sum = *byte as u128 + (carry & 0xff);
        *byte = sum as u8;
        carry = (carry >> 8) + (sum >> 8);
    }
    block
}

fn xor_into(dst: &mut [u8], src: &[u8]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn ctr_apply(cipher: &HcaCipher, iv: &[u8], data: &mut [u8], block: usize) -> Result<()> {
    data.par_chunks_mut(block)
        .enumerate()
        .try_for_each(|(i, chunk)| {
            let mut keystream = counter_block(iv, i as u64);
            cipher.encrypt_bytes(&mut keystream)?;
            xor_into(chunk, &keystream);
            Ok(())
        })
}

/// Encrypts `data` into a container with blocks of `block_bits` bits.
pub fn encrypt_stream(
    data: &[u8],
    key: &ValidatedKey,
    mode: &CipherMode,
    block_bits: usize,
) -> Result<Container> {
    let (cipher, block) = stream_cipher(key, block_bits)?;
    mode.check_iv(block)?;
    let payload = match mode {
        CipherMode::Ecb => {
            let mut buf = pad(data, block_bits);
            buf.par_chunks_mut(block)
                .try_for_each(|chunk| cipher.encrypt_bytes(chunk))?;
            buf
        }
        CipherMode::Cbc { iv } => {
            let mut buf = pad(data, block_bits);
            let mut prev = iv.clone();
            for chunk in buf.chunks_mut(block) {
                xor_into(chunk, &prev);
                cipher.encrypt_bytes(chunk)?;
                prev.copy_from_slice(chunk);
            }
            buf
        }
        CipherMode::Ctr { iv } => {
            let mut buf = data.to_vec();
            ctr_apply(&cipher, iv, &mut buf, block)?;
            buf
        }
    };
    Ok(Container {
        mode: mode.clone(),
        block_bits: block_bits as u16,
        payload,
    })
}

/// Inverts [`encrypt_stream`].
pub fn decrypt_stream(container: &Container, key: &ValidatedKey) -> Result<Vec<u8>> {
    let block_bits = container.block_bits as usize;
    let (cipher, block) = stream_cipher(key, block_bits)?;
    container.mode.check_iv(block)?;
    if container.mode.is_padded() && !container.payload.len().is_multiple_of(block) {
        return Err(HcaError::Container("truncated payload".into()));
    }
    let mut buf = container.payload.clone();
    match &container.mode {
        CipherMode::Ecb => {
            buf.par_chunks_mut(block)
                .try_for_each(|chunk| cipher.decrypt_bytes(chunk))?;
            unpad(&buf, block_bits)
        }
        CipherMode::Cbc { iv } => {
            let source = &container.payload;
            buf.par_chunks_mut(block)
                .enumerate()
                .try_for_each(|(i, chunk)| {
                    cipher.decrypt_bytes(chunk)?;
                    let prev = if i == 0 {
                        &iv[..]
                    } else {
                        &source[(i - 1) * block..i * block]
                    };
                    xor_into(chunk, prev);
                    Ok::<_, HcaError>(())
                })?;
            unpad(&buf, block_bits)
        }
        CipherMode::Ctr { iv } => {
            ctr_apply(&cipher, iv, &mut buf, block)?;
            Ok(buf)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::key::Key;
    use crate::keyschedule::validate_key;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn test_key(seed: u64, radius: usize) -> ValidatedKey {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            if let Ok(k) = validate_key(&Key::random(radius, &mut rng).unwrap()) {
                return k;
            }
        }
    }

    fn modes(block: usize) -> Vec<CipherMode> {
        let iv: Vec<u8> = (0..block as u8).map(|b| b.wrapping_mul(37)).collect();
        vec![
            CipherMode::Ecb,
            CipherMode::Cbc { iv: iv.clone() },
            CipherMode::Ctr { iv },
        ]
    }

    #[test]
    fn padding_examples() {
        let p = pad(&[7u8; 15], 128);
        assert_eq!(p.len(), 16);
        assert_eq!(p[15], 0x01);
        let p = pad(&[7u8; 16], 128);
        assert_eq!(p.len(), 32);
        assert!(p[16..].iter().all(|&b| b == 0x10));
        assert_eq!(pad(&[], 128), vec![0x10; 16]);
        assert!(unpad(&[0u8; 16], 128).is_err());
        assert!(unpad(&[0x11u8; 16], 128).is_err());
        assert!(unpad(&[], 128).is_err());
    }

    #[test]
    fn counter_wraps_big_endian() {
        assert_eq!(counter_block(&[0, 0, 0xff], 1), vec![0, 1, 0]);
        assert_eq!(counter_block(&[0xff, 0xff], 2), vec![0, 1]);
        assert_eq!(counter_block(&[1, 2, 3], 0), vec![1, 2, 3]);
    }

    #[test]
    fn round_trip_all_modes() {
        let key = test_key(1, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for len in [0usize, 1, 15, 16, 17, 100] {
            let data: Vec<u8> = (0..len).map(|_| rng.random()).collect();
            for mode in modes(16) {
                let c = encrypt_stream(&data, &key, &mode, 128).unwrap();
                let parsed = Container::from_bytes(&c.to_bytes()).unwrap();
                assert_eq!(parsed, c);
                assert_eq!(decrypt_stream(&parsed, &key).unwrap(), data, "{}", mode.name());
                if mode.is_padded() {
                    assert_eq!(c.payload.len() % 16, 0);
                    assert!(c.payload.len() > len);
                } else {
                    assert_eq!(c.payload.len(), len);
                }
            }
        }
    }

    #[test]
    fn other_block_sizes() {
        let key = test_key(4, 4);
        let data = b"a short message that spans several blocks".to_vec();
        for bits in [64usize, 256] {
            for mode in modes(bits / 8) {
                let c = encrypt_stream(&data, &key, &mode, bits).unwrap();
                assert_eq!(decrypt_stream(&c, &key).unwrap(), data);
            }
        }
    }

    #[test]
    fn ecb_leaks_equal_blocks() {
        let key = test_key(5, 4);
        let c = encrypt_stream(&[0x42; 32], &key, &CipherMode::Ecb, 128).unwrap();
        assert_eq!(c.payload[..16], c.payload[16..32]);
        let c = encrypt_stream(&[0x42; 32], &key, &modes(16)[1], 128).unwrap();
        assert_ne!(c.payload[..16], c.payload[16..32]);
    }

    #[test]
    fn ctr_empty_payload() {
        let key = test_key(6, 4);
        let c = encrypt_stream(&[], &key, &CipherMode::Ctr { iv: vec![0; 16] }, 128).unwrap();
        assert!(c.payload.is_empty());
        let bytes = c.to_bytes();
        assert_eq!(bytes.len(), 8 + 16);
        assert_eq!(&bytes[..8], b"HCA1\x01\x03\x00\x80");
    }

    #[test]
    fn ctr_first_block_is_encrypted_iv() {
        let key = test_key(7, 4);
        let iv: Vec<u8> = (1..=16).collect();
        let c = encrypt_stream(&[0; 16], &key, &CipherMode::Ctr { iv: iv.clone() }, 128).unwrap();
        let cipher = HcaCipher::new(key, CipherParams::default()).unwrap();
        let mut expected = iv;
        cipher.encrypt_bytes(&mut expected).unwrap();
        assert_eq!(c.payload, expected);
    }

    #[test]
    fn cbc_block_depends_on_two_ciphertext_blocks() {
        let key = test_key(8, 4);
        let data = vec![9u8; 64];
        let mut c = encrypt_stream(&data, &key, &modes(16)[1], 128).unwrap();
        c.payload[20] ^= 1;
        // Only plaintext blocks 1 and 2 see a flip in ciphertext block 1;
        // block 2 sees exactly the flipped bit.
        let out = decrypt_stream(&c, &key).unwrap();
        assert_eq!(out[..16], data[..16]);
        assert_ne!(out[16..32], data[16..32]);
        let diff: Vec<u8> = out[32..48].iter().zip(&data[32..48]).map(|(a, b)| a ^ b).collect();
        let mut expected = vec![0u8; 16];
        expected[4] = 1;
        assert_eq!(diff, expected);
        assert_eq!(out[48..], data[48..]);
    }

    #[test]
    fn container_rejects_mutations() {
        let key = test_key(9, 4);
        let c = encrypt_stream(b"hello", &key, &modes(16)[1], 128).unwrap();
        let bytes = c.to_bytes();
        for (idx, value) in [(0usize, b'X'), (3, b'0'), (4, 0x02), (5, 0x09), (7, 0x81)] {
            let mut bad = bytes.clone();
            bad[idx] = value;
            assert!(Container::from_bytes(&bad).is_err(), "byte {idx}");
        }
        assert!(Container::from_bytes(&bytes[..7]).is_err());
        assert!(Container::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        assert!(Container::from_bytes(&bytes[..20]).is_err());
    }

    #[test]
    fn wrong_key_or_padding_fails() {
        let key = test_key(10, 4);
        let other = test_key(11, 4);
        let c = encrypt_stream(b"attack at dawn", &key, &CipherMode::Ecb, 128).unwrap();
        // A wrong key almost surely garbles the padding byte.
        assert!(matches!(decrypt_stream(&c, &other), Err(HcaError::BadPadding)));
        assert!(encrypt_stream(b"x", &key, &CipherMode::Cbc { iv: vec![0; 8] }, 128).is_err());
        assert!(encrypt_stream(b"x", &key, &CipherMode::Ecb, 100).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn unpad_inverts_pad(data in proptest::collection::vec(any::<u8>(), 0..100), bytes in 1usize..40) {
            prop_assert_eq!(unpad(&pad(&data, bytes * 8), bytes * 8).unwrap(), data);
        }

        #[test]
        fn container_round_trip(payload in proptest::collection::vec(any::<u8>(), 0..8), code in 1u8..=3) {
            let iv = vec![0xA5; 4];
            let mode = match code { 1 => CipherMode::Ecb, 2 => CipherMode::Cbc { iv }, _ => CipherMode::Ctr { iv } };
            let payload = if mode.is_padded() { payload[..payload.len() / 4 * 4].to_vec() } else { payload };
            let c = Container { mode, block_bits: 32, payload };
            prop_assert_eq!(Container::from_bytes(&c.to_bytes()).unwrap(), c);
        }
    }
}
