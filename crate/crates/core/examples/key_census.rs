//! How many keys the entropy check throws away, per radius.
//!
//! ```bash
//! cargo run --release --example key_census
//! ```

use hca::eval::{keyspace_census, DEFAULT_CENSUS_SAMPLES};
use hca::key::Key;
use hca::keyschedule::{key_entropy, validate_key};

fn main() -> hca::Result<()> {
    for text in ["0:L", "5:L", "1:L", "7:R", "E4C1:L"] {
        let Ok(key) = Key::parse_text(text) else {
            println!("{text}: not a key");
            continue;
        };
        let verdict = if validate_key(&key).is_ok() { "accepted" } else { "rejected" };
        println!("{text:>5}  h={:.3}  {verdict}", key_entropy(&key));
    }
    println!();
    println!("radius  key bits  examined  discarded");
    for radius in 1..=4 {
        let samples = if radius <= 2 { 0 } else { DEFAULT_CENSUS_SAMPLES };
        let report = keyspace_census(radius, samples, 11)?;
        println!(
            "{radius:>6}  {:>8}  {:>8}  {:>8.4}%{}",
            Key::len_for_radius(radius),
            report.examined,
            report.discarded_percent(),
            if report.exhaustive { "" } else { " (sampled)" }
        );
    }
    Ok(())
}
