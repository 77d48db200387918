//! ECB, CBC and CTR over byte streams, and the on-disk container.
//!
//! ```bash
//! cargo run --example stream_modes
//! ```

use hca::key::Key;
use hca::keyschedule::validate_key;
use hca::modes::{decrypt_stream, encrypt_stream, pad, CipherMode, Container};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn main() -> hca::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let key = loop {
        if let Ok(k) = validate_key(&Key::random(4, &mut rng)?) {
            break k;
        }
    };
    let mut iv = vec![0u8; 16];
    rng.fill_bytes(&mut iv);

    println!("padding 15 bytes: {}", hex(&pad(&[0xAA; 15], 128)));
    println!("padding 16 bytes: {}", hex(&pad(&[0xAA; 16], 128)));

    // Two identical aligned blocks, then a tail.
    let message = b"ABCDEFGHIJKLMNOPABCDEFGHIJKLMNOP and a tail".to_vec();
    for mode in [
        CipherMode::Ecb,
        CipherMode::Cbc { iv: iv.clone() },
        CipherMode::Ctr { iv: iv.clone() },
    ] {
        let container = encrypt_stream(&message, &key, &mode, 128)?;
        let bytes = container.to_bytes();
        let parsed = Container::from_bytes(&bytes)?;
        let back = decrypt_stream(&parsed, &key)?;
        assert_eq!(back, message);
        println!(
            "\n{}: {} plaintext bytes -> {} container bytes (payload {})",
            mode.name(),
            message.len(),
            bytes.len(),
            container.payload.len()
        );
        for block in container.payload.chunks(16) {
            println!("  {}", hex(block));
        }
    }

    let empty = encrypt_stream(&[], &key, &CipherMode::Ctr { iv: vec![0; 16] }, 128)?;
    println!("\nempty CTR stream: {} byte container", empty.to_bytes().len());

    let mut tampered = encrypt_stream(&message, &key, &CipherMode::Ecb, 128)?.to_bytes();
    tampered[4] = 0x02;
    println!("version byte changed: {}", Container::from_bytes(&tampered).unwrap_err());
    Ok(())
}
