//! Block cipher built on hybrid toggle cellular automata.
//!
//! A block is a circular lattice of cells. Encryption replaces it, round by
//! round, with its unique pre-image under a key-derived pair of rules: a
//! chaotic toggle rule for most cells and an absolute rule for a `2r`-cell
//! border. Decryption evolves the lattice forward again.
//!
//! ## Examples
//!
//! ```text
//! examples/
//! ├── block_cipher.rs      # keys, block encryption, single rounds
//! ├── stream_modes.rs      # ECB / CBC / CTR and the container format
//! ├── preimage_oracle.rs   # engine steps against brute-force search
//! ├── avalanche.rs         # one-bit flips, mean / sigma / entropy
//! ├── key_census.rs        # share of keys rejected per radius
//! ├── randomness.rs        # chained sequences and statistical tests
//! └── transducer.rs        # backward step as a Moore machine, DOT output
//! ```
//!
//! ```bash
//! cargo run --example block_cipher
//! cargo run --release --example avalanche -- 256 4096
//! cargo run --example transducer | dot -Tsvg > machine.svg
//! ```
//!
//! The `hca` binary exposes the same operations as subcommands.
//!
//! ```no_run
//! use hca::cipher::{CipherParams, HcaCipher};
//! use hca::key::Key;
//! use hca::lattice::Lattice;
//!
//! # fn main() -> hca::Result<()> {
//! let key: Key = std::fs::read_to_string("key.txt")?.trim().parse()?;
//! let cipher = HcaCipher::from_key(&key, CipherParams::default())?;
//! let c = cipher.encrypt_block(&Lattice::from_hex("00112233445566778899AABBCCDDEEFF")?)?;
//! assert_eq!(cipher.decrypt_block(&c)?.to_hex()?, "00112233445566778899AABBCCDDEEFF");
//! # Ok(())
//! # }
//! ```

pub mod cipher;
pub mod cli;
pub mod engine;
pub mod error;
pub mod eval;
pub mod graph;
pub mod key;
pub mod keyschedule;
pub mod lattice;
pub mod modes;
pub mod rule;

pub use error::{HcaError, Result};
