//! The block cipher: `T` rounds of hybrid pre-image computation.
//!
//! Encryption round `t` derives the rule pair from the key rotated left by
//! `t`, replaces the block by its pre-image and then rotates the block by
//! `2r` cells against that round's toggle direction. Decryption runs the
//! rounds backwards: rotate with the toggle direction, then evolve forward.
//!
//! Rule tables are never materialized on the hot path. For a rotated key `K`
//! the main rule is `K[n mod 2^(2r)] ^ (n >> 2r)` (left toggle) or
//! `K[n >> 1] ^ (n & 1)` (right toggle), and the border rule is the toggle-side
//! extreme bit XOR `!K[0]`; these agree bit-for-bit with
//! [`derive_main_rule`](crate::keyschedule::derive_main_rule) and
//! [`derive_border_rule`](crate::keyschedule::derive_border_rule).

use crate::engine::{forward_cells, preimage_cells, StepRules};
use crate::error::{HcaError, Result};
use crate::key::Key;
use crate::keyschedule::{validate_key, ValidatedKey};
use crate::lattice::{pack_bytes, unpack_bytes_into, Lattice, ToggleDirection};
use crate::rule::check_radius;

/// Radius, block size and round count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CipherParams {
    radius: usize,
    block_bits: usize,
    rounds: usize,
}

impl Default for CipherParams {
    /// Radius 4, 128-bit blocks, 128 rounds.
    fn default() -> Self {
        CipherParams {
            radius: 4,
            block_bits: 128,
            rounds: 128,
        }
    }
}

impl CipherParams {
    pub fn new(radius: usize, block_bits: usize, rounds: usize) -> Result<Self> {
        check_radius(radius)?;
        if block_bits < 2 * radius + 2 {
            return Err(HcaError::InvalidConfig(format!(
                "block of {block_bits} bits is too small for radius {radius} (need at least {})",
                2 * radius + 2
            )));
        }
        if rounds == 0 {
            return Err(HcaError::InvalidConfig("at least one round is required".into()));
        }
        Ok(CipherParams {
            radius,
            block_bits,
            rounds,
        })
    }

    /// Radius 4 with as many rounds as block bits.
    pub fn for_block_bits(block_bits: usize) -> Result<Self> {
        CipherParams::new(4, block_bits, block_bits)
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn block_bits(&self) -> usize {
        self.block_bits
    }

    pub fn block_bytes(&self) -> Option<usize> {
        self.block_bits.is_multiple_of(8).then_some(self.block_bits / 8)
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Cells evolved by the border rule, and the per-round block shift.
    pub fn border_span(&self) -> usize {
        2 * self.radius
    }
}

/// Rule lookups for one round, read from a rotated window of the key.
struct KeyRules<'a> {
    bits: &'a [u8],
    radius: usize,
    span: usize,
    low_mask: usize,
    direction: ToggleDirection,
    border_flip: u8,
}

impl<'a> KeyRules<'a> {
    fn new(rotated: &'a [u8], radius: usize) -> Self {
        let span = 2 * radius;
        KeyRules {
            bits: rotated,
            radius,
            span,
            low_mask: (1 << span) - 1,
            direction: ToggleDirection::from_bit(rotated[rotated.len() - 1]),
            border_flip: rotated[0] ^ 1,
        }
    }
}

impl StepRules for KeyRules<'_> {
    fn radius(&self) -> usize {
        self.radius
    }

    #[inline(always)]
    fn main(&self, n: usize) -> u8 {
        match self.direction {
            ToggleDirection::Left => self.bits[n & self.low_mask] ^ (n >> self.span) as u8,
            ToggleDirection::Right => self.bits[n >> 1] ^ (n & 1) as u8,
        }
    }

    #[inline(always)]
    fn border(&self, n: usize) -> u8 {
        let extreme = match self.direction {
            ToggleDirection::Left => (n >> self.span) & 1,
            ToggleDirection::Right => n & 1,
        } as u8;
        extreme ^ self.border_flip
    }
}

/// A keyed cipher instance. Cheap to share across threads.
#[derive(Debug, Clone)]
pub struct HcaCipher {
    key: ValidatedKey,
    params: CipherParams,
    /// Key bits twice over, so every rotation is a contiguous slice.
    doubled: Vec<u8>,
}

impl HcaCipher {
    pub fn new(key: ValidatedKey, params: CipherParams) -> Result<Self> {
        if key.radius() != params.radius() {
            return Err(HcaError::InvalidConfig(format!(
                "radius-{} key used with radius-{} parameters",
                key.radius(),
                params.radius()
            )));
        }
        let bits = key.key().bits();
        let doubled = bits.iter().chain(bits.iter()).copied().collect();
        Ok(HcaCipher {
            key,
            params,
            doubled,
        })
    }

    /// Validates `key` and builds a cipher.
    pub fn from_key(key: &Key, params: CipherParams) -> Result<Self> {
        HcaCipher::new(validate_key(key)?, params)
    }

    pub fn key(&self) -> &ValidatedKey {
        &self.key
    }

    pub fn params(&self) -> &CipherParams {
        &self.params
    }

    fn rules_for_rotation(&self, rotation: usize) -> KeyRules<'_> {
        let len = self.doubled.len() / 2;
        let offset = rotation % len;
        KeyRules::new(&self.doubled[offset..offset + len], self.params.radius)
    }

    fn check_block(&self, block: &Lattice) -> Result<()> {
        if block.len() != self.params.block_bits {
            return Err(HcaError::LengthMismatch {
                expected: self.params.block_bits,
                found: block.len(),
            });
        }
        Ok(())
    }

    fn check_round(&self, t: usize) -> Result<()> {
        if t >= self.params.rounds {
            return Err(HcaError::RoundOutOfRange {
                round: t,
                rounds: self.params.rounds,
            });
        }
        Ok(())
    }

    pub fn encrypt_block(&self, plaintext: &Lattice) -> Result<Lattice> {
        self.check_block(plaintext)?;
        let mut cells = plaintext.cells().to_vec();
        let mut scratch = vec![0u8; cells.len()];
        self.encrypt_cells(&mut cells, &mut scratch);
        Ok(Lattice::from_raw(cells))
    }

    pub fn decrypt_block(&self, ciphertext: &Lattice) -> Result<Lattice> {
        self.check_block(ciphertext)?;
        let mut cells = ciphertext.cells().to_vec();
        let mut scratch = vec![0u8; cells.len()];
        self.decrypt_cells(&mut cells, &mut scratch);
        Ok(Lattice::from_raw(cells))
    }

    /// Encryption round `t` alone.
    pub fn encrypt_round(&self, block: &Lattice, t: usize) -> Result<Lattice> {
        self.check_block(block)?;
        self.check_round(t)?;
        let mut cells = block.cells().to_vec();
        let mut scratch = vec![0u8; cells.len()];
        self.encrypt_round_cells(&mut cells, &mut scratch, t);
        Ok(Lattice::from_raw(cells))
    }

    /// Inverse of [`HcaCipher::encrypt_round`] for the same `t`.
    pub fn decrypt_round(&self, block: &Lattice, t: usize) -> Result<Lattice> {
        self.check_block(block)?;
        self.check_round(t)?;
        let mut cells = block.cells().to_vec();
        let mut scratch = vec![0u8; cells.len()];
        self.undo_round_cells(&mut cells, &mut scratch, t);
        Ok(Lattice::from_raw(cells))
    }

    /// Encrypts one block of `block_bits / 8` bytes in place.
    pub fn encrypt_bytes(&self, block: &mut [u8]) -> Result<()> {
        self.apply_bytes(block, true)
    }

    pub fn decrypt_bytes(&self, block: &mut [u8]) -> Result<()> {
        self.apply_bytes(block, false)
    }

    fn apply_bytes(&self, block: &mut [u8], encrypt: bool) -> Result<()> {
        if block.len() * 8 != self.params.block_bits {
            return Err(HcaError::LengthMismatch {
                expected: self.params.block_bits,
                found: block.len() * 8,
            });
        }
        let mut cells = vec![0u8; self.params.block_bits];
        let mut scratch = vec![0u8; self.params.block_bits];
        unpack_bytes_into(block, &mut cells);
        if encrypt {
            self.encrypt_cells(&mut cells, &mut scratch);
        } else {
            self.decrypt_cells(&mut cells, &mut scratch);
        }
        block.copy_from_slice(&pack_bytes(&cells));
        Ok(())
    }

    pub(crate) fn encrypt_cells(&self, cells: &mut [u8], scratch: &mut [u8]) {
        for t in 0..self.params.rounds {
            self.encrypt_round_cells(cells, scratch, t);
        }
    }

    pub(crate) fn decrypt_cells(&self, cells: &mut [u8], scratch: &mut [u8]) {
        for t in (0..self.params.rounds).rev() {
            self.undo_round_cells(cells, scratch, t);
        }
    }

    fn encrypt_round_cells(&self, cells: &mut [u8], scratch: &mut [u8], t: usize) {
        let rules = self.rules_for_rotation(t);
        preimage_cells(cells, scratch, &rules, rules.direction);
        cells.copy_from_slice(scratch);
        let shift = self.params.border_span();
        match rules.direction.opposite() {
            ToggleDirection::Left => cells.rotate_left(shift),
            ToggleDirection::Right => cells.rotate_right(shift),
        }
    }

    fn undo_round_cells(&self, cells: &mut [u8], scratch: &mut [u8], t: usize) {
        let rules = self.rules_for_rotation(t);
        let shift = self.params.border_span();
        match rules.direction {
            ToggleDirection::Left => cells.rotate_left(shift),
            ToggleDirection::Right => cells.rotate_right(shift),
        }
        forward_cells(cells, scratch, &rules);
        cells.copy_from_slice(scratch);
    }
}

/// One-shot block encryption.
pub fn encrypt_block(plaintext: &Lattice, key: &ValidatedKey, params: CipherParams) -> Result<Lattice> {
    HcaCipher::new(key.clone(), params)?.encrypt_block(plaintext)
}

/// One-shot block decryption.
pub fn decrypt_block(ciphertext: &Lattice, key: &ValidatedKey, params: CipherParams) -> Result<Lattice> {
    HcaCipher::new(key.clone(), params)?.decrypt_block(ciphertext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{preimage_step, HybridStepConfig};
    use crate::keyschedule::{derive_border_rule, derive_main_rule, round_key, ScheduleMode};
    use crate::lattice::Direction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_valid_key(rng: &mut ChaCha8Rng, radius: usize) -> ValidatedKey {
        loop {
            if let Ok(k) = validate_key(&Key::random(radius, rng).unwrap()) {
                return k;
            }
        }
    }

    fn random_block(rng: &mut ChaCha8Rng, n: usize) -> Lattice {
        Lattice::from_bools((0..n).map(|_| rng.random::<bool>()))
    }

    #[test]
    fn key_rules_match_derived_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let key = random_valid_key(&mut rng, 4);
            let cipher = HcaCipher::new(key.clone(), CipherParams::default()).unwrap();
            for t in [0, 1, 100, 256, 300] {
                let rotated = key.key().rotate_left(t);
                let main = derive_main_rule(&rotated);
                let border = derive_border_rule(&rotated);
                let rules = cipher.rules_for_rotation(t);
                assert_eq!(rules.direction, rotated.direction());
                for n in 0..512 {
                    assert_eq!(rules.main(n), main.output(n));
                    assert_eq!(rules.border(n), border.output(n));
                }
            }
        }
    }

    #[test]
    fn single_round_radius1_worked_example() {
        // K = 0111:L gives rule 30 with border rule 15; one round is the
        // pre-image followed by a 2-cell right rotation.
        let key = validate_key(&Key::parse_text("7:L").unwrap()).unwrap();
        let params = CipherParams::new(1, 8, 1).unwrap();
        let cipher = HcaCipher::new(key, params).unwrap();
        let p = Lattice::from_bit_str("01001111").unwrap();
        let c = cipher.encrypt_block(&p).unwrap();
        let expected = Lattice::from_bit_str("01101001").unwrap().rotate(2, Direction::Right);
        assert_eq!(c, expected);
        assert_eq!(c, Lattice::from_bit_str("01011010").unwrap());
        assert_eq!(cipher.decrypt_block(&c).unwrap(), p);
    }

    #[test]
    fn round_matches_engine_step() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let key = random_valid_key(&mut rng, 4);
        let params = CipherParams::default();
        let cipher = HcaCipher::new(key.clone(), params).unwrap();
        let block = random_block(&mut rng, 128);
        for t in [0usize, 5, 127] {
            let rk = round_key(key.key(), t, 128, ScheduleMode::Cipher).unwrap();
            let cfg = HybridStepConfig::new(derive_main_rule(&rk), derive_border_rule(&rk), 128, rk.direction()).unwrap();
            let expected = preimage_step(&block, &cfg).unwrap().rotate(8, rk.direction().opposite());
            assert_eq!(cipher.encrypt_round(&block, t).unwrap(), expected);
        }
    }

    #[test]
    fn per_round_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cipher = HcaCipher::new(random_valid_key(&mut rng, 4), CipherParams::default()).unwrap();
        for t in 0..128 {
            let block = random_block(&mut rng, 128);
            let once = cipher.encrypt_round(&block, t).unwrap();
            assert_eq!(cipher.decrypt_round(&once, t).unwrap(), block);
        }
    }

    #[test]
    fn round_trip_default_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let key = random_valid_key(&mut rng, 4);
            let p = random_block(&mut rng, 128);
            let c = encrypt_block(&p, &key, CipherParams::default()).unwrap();
            assert_eq!(c.len(), 128);
            assert_eq!(decrypt_block(&c, &key, CipherParams::default()).unwrap(), p);
        }
    }

    #[test]
    fn exhaustive_round_trip_radius1() {
        let params = CipherParams::new(1, 8, 8).unwrap();
        for code in 0u8..16 {
            for dir in [Direction::Left, Direction::Right] {
                let bits: Vec<u8> = (0..4).map(|i| (code >> (3 - i)) & 1).collect();
                let Ok(key) = validate_key(&Key::from_parts(&bits, dir).unwrap()) else {
                    continue;
                };
                let cipher = HcaCipher::new(key, params).unwrap();
                let mut images = std::collections::HashSet::new();
                for block in 0u8..=255 {
                    let p = Lattice::from_bytes(&[block]);
                    let c = cipher.encrypt_block(&p).unwrap();
                    assert_eq!(cipher.decrypt_block(&c).unwrap(), p);
                    images.insert(c);
                }
                assert_eq!(images.len(), 256);
            }
        }
    }

    #[test]
    fn byte_interface_matches_lattice_interface() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cipher = HcaCipher::new(random_valid_key(&mut rng, 4), CipherParams::default()).unwrap();
        let mut bytes: [u8; 16] = rng.random();
        let lattice = Lattice::from_bytes(&bytes);
        cipher.encrypt_bytes(&mut bytes).unwrap();
        assert_eq!(Lattice::from_bytes(&bytes), cipher.encrypt_block(&lattice).unwrap());
        cipher.decrypt_bytes(&mut bytes).unwrap();
        assert_eq!(Lattice::from_bytes(&bytes), lattice);
        assert!(cipher.encrypt_bytes(&mut [0u8; 15]).is_err());
    }

    #[test]
    fn parameter_and_size_errors() {
        assert!(CipherParams::new(4, 9, 1).is_err());
        assert!(CipherParams::new(4, 128, 0).is_err());
        assert!(CipherParams::new(0, 128, 1).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let key = random_valid_key(&mut rng, 4);
        assert!(encrypt_block(&Lattice::zeros(64), &key, CipherParams::default()).is_err());
        assert!(HcaCipher::new(key, CipherParams::new(2, 64, 64).unwrap()).is_err());
        let cipher = HcaCipher::new(random_valid_key(&mut rng, 4), CipherParams::default()).unwrap();
        assert!(cipher.encrypt_round(&Lattice::zeros(128), 128).is_err());
    }

    #[test]
    fn invalid_key_is_refused() {
        let zero = Key::from_bits(vec![0; 257]).unwrap();
        assert!(matches!(
            HcaCipher::from_key(&zero, CipherParams::default()),
            Err(HcaError::KeyRejected { .. })
        ));
    }
}
