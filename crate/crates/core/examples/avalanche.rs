//! Avalanche statistics: flip one plaintext or key bit and count how many
//! ciphertext bits change.
//!
//! ```bash
//! cargo run --release --example avalanche -- 128 16384
//! ```

use hca::eval::{avalanche_report, entropy_window, AvalancheConfig, AvalancheKind, AvalancheReport};

fn main() -> hca::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(128);
    let trials: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(2048);

    println!("N={n}, T={n}, {trials} trials, entropy window {}", entropy_window(n));
    println!("{}", AvalancheReport::CSV_HEADER);
    for (kind, seed) in [(AvalancheKind::Plaintext, 1), (AvalancheKind::Key, 2)] {
        let config = AvalancheConfig::new(n, kind, seed).with_trials(trials);
        let report = avalanche_report(&config)?;
        println!("{}", report.csv_row());
    }
    Ok(())
}
