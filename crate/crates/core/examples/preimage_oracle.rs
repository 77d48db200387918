//! Forward and backward hybrid steps, checked against brute-force search,
//! and what goes wrong without a toggle rule.
//!
//! ```bash
//! cargo run --example preimage_oracle
//! ```

use hca::engine::{brute_force_preimages, forward_step, preimage_step, HybridStepConfig};
use hca::lattice::{Direction, Lattice};
use hca::rule::Rule;

fn main() -> hca::Result<()> {
    let cfg = HybridStepConfig::new(Rule::elementary(30), Rule::elementary(15), 8, Direction::Left)?;
    let p = Lattice::from_bit_str("01101001")?;
    let s = forward_step(&p, &cfg)?;
    println!("forward  {p} -> {s}");
    println!("backward {s} -> {}", preimage_step(&s, &cfg)?);

    let mut unique = 0;
    for code in 0u8..=255 {
        let s = Lattice::from_bytes(&[code]);
        let all = brute_force_preimages(&s, &cfg)?;
        if all.len() == 1 && all.contains(&preimage_step(&s, &cfg)?) {
            unique += 1;
        }
    }
    println!("rule 30/15: {unique}/256 configurations have exactly one pre-image");

    // Rule 110 toggles on neither side.
    let broken = HybridStepConfig::unchecked(Rule::elementary(110), Rule::elementary(15), 8)?;
    let mut histogram = [0usize; 4];
    for code in 0u8..=255 {
        let n = brute_force_preimages(&Lattice::from_bytes(&[code]), &broken)?.len();
        histogram[n.min(3)] += 1;
    }
    println!(
        "rule 110/15: {} with none, {} with one, {} with two, {} with more",
        histogram[0], histogram[1], histogram[2], histogram[3]
    );
    Ok(())
}
