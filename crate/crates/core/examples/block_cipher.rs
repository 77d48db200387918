//! Encrypt and decrypt single blocks, and step through individual rounds.
//!
//! ```bash
//! cargo run --example block_cipher
//! ```

use hca::cipher::{CipherParams, HcaCipher};
use hca::key::Key;
use hca::keyschedule::{derive_border_rule, derive_main_rule, validate_key};
use hca::lattice::Lattice;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hca::Result<()> {
    // The smallest possible setup: radius 1, 8-bit blocks, one round.
    let key = validate_key(&Key::parse_text("7:L")?)?;
    println!("key {} has entropy {:.3}", key.key(), key.entropy());
    println!("main rule   {}", derive_main_rule(key.key()));
    println!("border rule {}", derive_border_rule(key.key()));

    let tiny = HcaCipher::new(key, CipherParams::new(1, 8, 1)?)?;
    let p = Lattice::from_bit_str("01001111")?;
    let c = tiny.encrypt_block(&p)?;
    println!("{p} -> {c} -> {}", tiny.decrypt_block(&c)?);

    // The default configuration: radius 4, 128-bit blocks, 128 rounds.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let key = loop {
        if let Ok(k) = validate_key(&Key::random(4, &mut rng)?) {
            break k;
        }
    };
    println!("\nkey {}", key.key());
    let cipher = HcaCipher::new(key, CipherParams::default())?;
    let p = Lattice::from_hex("00112233445566778899AABBCCDDEEFF")?;
    let c = cipher.encrypt_block(&p)?;
    println!("plaintext  {}", p.to_hex()?);
    println!("ciphertext {}", c.to_hex()?);
    println!("decrypted  {}", cipher.decrypt_block(&c)?.to_hex()?);

    let mut block = p.clone();
    for t in 0..3 {
        block = cipher.encrypt_round(&block, t)?;
        println!("after round {t}: {}", block.to_hex()?);
    }
    for t in (0..3).rev() {
        block = cipher.decrypt_round(&block, t)?;
    }
    assert_eq!(block, p);
    println!("three rounds undone one at a time");

    let mut bytes = *b"sixteen byte msg";
    cipher.encrypt_bytes(&mut bytes)?;
    cipher.decrypt_bytes(&mut bytes)?;
    println!("byte interface: {}", String::from_utf8_lossy(&bytes));
    Ok(())
}
