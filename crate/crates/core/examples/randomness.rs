//! Build chained difference sequences, run the three in-house tests, and
//! write files for the external statistical test suite.
//!
//! ```bash
//! cargo run --release --example randomness -- /tmp/hca-seq
//! ```

use std::fs::File;
use std::io::BufWriter;

use hca::cipher::CipherParams;
use hca::eval::{bits_from_bytes, nist_sequence, smoke_test, write_ascii, write_raw};
use hca::key::Key;
use hca::keyschedule::validate_key;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> hca::Result<()> {
    let out_dir = std::env::args().nth(1);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let key = loop {
        if let Ok(k) = validate_key(&Key::random(4, &mut rng)?) {
            break k;
        }
    };

    let sequences = 10;
    let bytes = 1 << 17;
    let mut passed = 0;
    for seed in 0..sequences {
        let seq = nist_sequence(seed, bytes, &key, CipherParams::default())?;
        let r = smoke_test(&bits_from_bytes(&seq))?;
        println!(
            "seed {seed}: monobit {:.4}  block-frequency {:.4}  runs {:.4}",
            r.monobit, r.block_frequency, r.runs
        );
        if r.passes(0.01) {
            passed += 1;
        }
        if let (Some(dir), 0) = (&out_dir, seed) {
            std::fs::create_dir_all(dir)?;
            write_raw(BufWriter::new(File::create(format!("{dir}/seq0.bin"))?), &seq)?;
            write_ascii(BufWriter::new(File::create(format!("{dir}/seq0.txt"))?), &seq)?;
            println!("  wrote {dir}/seq0.bin and {dir}/seq0.txt");
        }
    }
    println!("{passed}/{sequences} sequences pass all three tests at alpha 0.01");
    Ok(())
}
