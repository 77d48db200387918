mod common;

use common::{naive_decrypt, naive_encrypt, KAT};
use hca::cipher::{CipherParams, HcaCipher};
use hca::key::Key;
use hca::keyschedule::validate_key;
use hca::lattice::Lattice;
use proptest::prelude::*;

fn cipher_for(radius: usize, block_bits: usize, rounds: usize, key: &Key) -> HcaCipher {
    let params = CipherParams::new(radius, block_bits, rounds).unwrap();
    HcaCipher::from_key(key, params).unwrap()
}

#[test]
fn frozen_vectors() {
    assert!(KAT.len() >= 10);
    for kat in KAT {
        let key = Key::parse_text(kat.key).unwrap();
        let cipher = cipher_for(kat.radius, kat.block_bits, kat.rounds, &key);
        let p = Lattice::from_hex(kat.plaintext).unwrap();
        let c = Lattice::from_hex(kat.ciphertext).unwrap();
        assert_eq!(cipher.encrypt_block(&p).unwrap(), c, "key {}", kat.key);
        assert_eq!(cipher.decrypt_block(&c).unwrap(), p, "key {}", kat.key);
    }
}

#[test]
fn rust_reference_reproduces_vectors() {
    for kat in KAT.iter().filter(|k| k.block_bits <= 128) {
        let key = Key::parse_text(kat.key).unwrap();
        let p = Lattice::from_hex(kat.plaintext).unwrap();
        let c = Lattice::from_hex(kat.ciphertext).unwrap();
        assert_eq!(naive_encrypt(p.cells(), key.bits(), kat.radius, kat.rounds), c.cells());
        assert_eq!(naive_decrypt(c.cells(), key.bits(), kat.radius, kat.rounds), p.cells());
    }
}

fn valid_key(radius: usize) -> impl Strategy<Value = Key> {
    proptest::collection::vec(0u8..2, Key::len_for_radius(radius))
        .prop_map(|bits| Key::from_bits(bits).unwrap())
        .prop_filter("key must validate", |k| validate_key(k).is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn optimized_matches_reference(key in valid_key(4), bits in proptest::collection::vec(0u8..2, 64), rounds in 1usize..40) {
        let cipher = cipher_for(4, 64, rounds, &key);
        let p = Lattice::from_cells(bits.clone()).unwrap();
        let expected = naive_encrypt(&bits, key.bits(), 4, rounds);
        let got = cipher.encrypt_block(&p).unwrap();
        prop_assert_eq!(got.cells(), &expected[..]);
    }

    #[test]
    fn optimized_matches_reference_radius2(key in valid_key(2), bits in proptest::collection::vec(0u8..2, 12..40)) {
        let n = bits.len();
        let cipher = cipher_for(2, n, n, &key);
        let p = Lattice::from_cells(bits.clone()).unwrap();
        let expected = naive_encrypt(&bits, key.bits(), 2, n);
        let got = cipher.encrypt_block(&p).unwrap();
        prop_assert_eq!(got.cells(), &expected[..]);
    }
}
