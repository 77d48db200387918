//! Command-line front end used by the `hca` binary.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when a key, a
//! container or a ciphertext fails validation. Keys are read from
//! `--key-file` or the `HCA_KEY` environment variable, never from arguments.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cipher::CipherParams;
use crate::error::{HcaError, Result};
use crate::eval::{
    avalanche_report, bits_from_bytes, keyspace_census, nist_sequence, smoke_test, write_ascii,
    write_raw, AvalancheConfig, AvalancheKind, AvalancheReport, DEFAULT_CENSUS_SAMPLES,
};
use crate::graph::{build_backward_transducer, export_dot, hamiltonian_cycles};
use crate::key::{parse_key_file, Key};
use crate::keyschedule::{key_entropy, validate_key, ValidatedKey, ENTROPY_THRESHOLD};
use crate::lattice::Lattice;
use crate::modes::{decrypt_stream, encrypt_stream, CipherMode, Container};
use crate::rule::Rule;

/// Environment variable holding a key in text form.
pub const KEY_ENV: &str = "HCA_KEY";

#[derive(Debug, Parser)]
#[command(name = "hca", version, about = "Hybrid cellular automata block cipher")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct KeySource {
    /// File with one key per line (`hex:L` or `hex:R`); the first key is used.
    /// Falls back to the HCA_KEY environment variable.
    #[arg(long)]
    key_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Electronic codebook (discouraged: leaks equal blocks).
    Ecb,
    /// Cipher block chaining (discouraged: padding-oracle prone).
    Cbc,
    /// Counter mode.
    Ctr,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Plaintext,
    Key,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Raw,
    Ascii,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print a random key that passes validation.
    Keygen {
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "-")]
        out: PathBuf,
    },
    /// Print a key's spatial entropy and verdict.
    Validate {
        #[command(flatten)]
        key: KeySource,
    },
    /// Encrypt a file into a container.
    Encrypt {
        #[command(flatten)]
        key: KeySource,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "ctr")]
        mode: ModeArg,
        /// IV as hex; random when omitted.
        #[arg(long)]
        iv: Option<String>,
        /// Seed for the random IV.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 128)]
        block_bits: usize,
    },
    /// Decrypt a container.
    Decrypt {
        #[command(flatten)]
        key: KeySource,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Avalanche statistics over random keys, plaintexts and flips.
    Avalanche {
        #[arg(long = "n", default_value_t = 128)]
        block_bits: usize,
        #[arg(long, value_enum, default_value = "plaintext")]
        kind: KindArg,
        /// Defaults to N squared.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print a CSV header and row instead of text.
        #[arg(long)]
        csv: bool,
    },
    /// Share of keys rejected by validation.
    Census {
        #[arg(long)]
        radius: usize,
        /// Sample count for radius 3 and above.
        #[arg(long, default_value_t = DEFAULT_CENSUS_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate a chained difference sequence for external randomness tests.
    Nistgen {
        #[command(flatten)]
        key: KeySource,
        #[arg(long)]
        bytes: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value = "raw")]
        format: FormatArg,
        #[arg(long, default_value = "-")]
        out: PathBuf,
        #[arg(long, default_value_t = 128)]
        block_bits: usize,
    },
    /// Monobit, block-frequency and runs tests on a sequence file.
    Smoketest {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "raw")]
        format: FormatArg,
        /// Split the input into sequences of this many bits.
        #[arg(long)]
        sequence_bits: Option<usize>,
        #[arg(long, default_value_t = 0.01)]
        alpha: f64,
    },
    /// Backward-step transducer of a radius-1 or radius-2 rule pair.
    Graph {
        /// Main rule: a Wolfram number, or an 8- or 32-entry table bit string.
        #[arg(long)]
        rule: String,
        /// Border rule, same syntax.
        #[arg(long)]
        border: String,
        /// Write the DOT graph here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Configuration to invert, as a bit string.
        #[arg(long)]
        input: Option<String>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code(&err)
        }
    }
}

fn exit_code(err: &HcaError) -> i32 {
    match err {
        HcaError::InvalidKey(_)
        | HcaError::KeyRejected { .. }
        | HcaError::Container(_)
        | HcaError::BadPadding
        | HcaError::LengthMismatch { .. } => 2,
        _ => 1,
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read(path)?)
    }
}

/// Writes to a temporary file next to `path` and renames it into place, so
/// a failed command never leaves a partial file behind.
fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    if path.as_os_str() == "-" {
        let mut stdout = io::stdout().lock();
        stdout.write_all(bytes)?;
        stdout.flush()?;
        return Ok(());
    }
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| HcaError::Io(e.error))?;
    Ok(())
}

fn load_key(source: &KeySource) -> Result<Key> {
    let text = match &source.key_file {
        Some(path) => fs::read_to_string(path)?,
        None => std::env::var(KEY_ENV).map_err(|_| {
            HcaError::InvalidConfig(format!("no key: pass --key-file or set {KEY_ENV}"))
        })?,
    };
    parse_key_file(&text)?
        .into_iter()
        .next()
        .ok_or_else(|| HcaError::InvalidKey("no key found".into()))
}

fn load_valid_key(source: &KeySource) -> Result<ValidatedKey> {
    validate_key(&load_key(source)?)
}

fn rng_for(seed: Option<u64>) -> ChaCha8Rng {
    match seed {
        Some(s) => ChaCha8Rng::seed_from_u64(s),
        None => ChaCha8Rng::from_rng(&mut rand::rng()),
    }
}

fn parse_hex_bytes(text: &str) -> Result<Vec<u8>> {
    Lattice::from_hex(text)?.to_bytes()
}

/// An 8- or 32-character 0/1 string is a table; anything else a rule number.
fn parse_rule(text: &str) -> Result<Rule> {
    let table: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let binary = table.chars().all(|c| c == '0' || c == '1');
    match table.len() {
        8 if binary => Rule::from_bit_str(1, &table),
        32 if binary => Rule::from_bit_str(2, &table),
        _ => table
            .parse::<u8>()
            .map(Rule::elementary)
            .map_err(|_| HcaError::InvalidRule(format!(
                "{text:?} is neither a rule number nor an 8- or 32-entry table"
            ))),
    }
}

fn execute(command: Command) -> Result<i32> {
    match command {
        Command::Keygen { radius, seed, out } => {
            let mut rng = rng_for(seed);
            let key = loop {
                if let Ok(k) = validate_key(&Key::random(radius, &mut rng)?) {
                    break k;
                }
            };
            write_output(&out, format!("{}\n", key.key().to_text()).as_bytes())?;
            Ok(0)
        }
        Command::Validate { key } => {
            let key = load_key(&key)?;
            let h = key_entropy(&key);
            let verdict = validate_key(&key);
            println!("h={h:.3}");
            println!("threshold: {ENTROPY_THRESHOLD:.3}");
            match verdict {
                Ok(_) => {
                    println!("accepted");
                    Ok(0)
                }
                Err(_) => {
                    println!("rejected");
                    Ok(2)
                }
            }
        }
        Command::Encrypt {
            key,
            input,
            out,
            mode,
            iv,
            seed,
            block_bits,
        } => {
            let key = load_valid_key(&key)?;
            let data = read_input(&input)?;
            let iv = match iv {
                Some(text) => parse_hex_bytes(&text)?,
                None => {
                    let mut buf = vec![0u8; block_bits / 8];
                    rng_for(seed).fill_bytes(&mut buf);
                    buf
                }
            };
            let mode = match mode {
                ModeArg::Ecb => CipherMode::Ecb,
                ModeArg::Cbc => CipherMode::Cbc { iv },
                ModeArg::Ctr => CipherMode::Ctr { iv },
            };
            let container = encrypt_stream(&data, &key, &mode, block_bits)?;
            write_output(&out, &container.to_bytes())?;
            Ok(0)
        }
        Command::Decrypt { key, input, out } => {
            let key = load_valid_key(&key)?;
            let container = Container::from_bytes(&read_input(&input)?)?;
            let data = decrypt_stream(&container, &key)?;
            write_output(&out, &data)?;
            Ok(0)
        }
        Command::Avalanche {
            block_bits,
            kind,
            trials,
            seed,
            csv,
        } => {
            let kind = match kind {
                KindArg::Plaintext => AvalancheKind::Plaintext,
                KindArg::Key => AvalancheKind::Key,
            };
            let mut config = AvalancheConfig::new(block_bits, kind, seed);
            if let Some(t) = trials {
                config = config.with_trials(t);
            }
            let report = avalanche_report(&config)?;
            if csv {
                println!("{}", AvalancheReport::CSV_HEADER);
                println!("{}", report.csv_row());
            } else {
                print!("{report}");
            }
            Ok(0)
        }
        Command::Census {
            radius,
            samples,
            seed,
        } => {
            print!("{}", keyspace_census(radius, samples, seed)?);
            Ok(0)
        }
        Command::Nistgen {
            key,
            bytes,
            seed,
            format,
            out,
            block_bits,
        } => {
            let key = load_valid_key(&key)?;
            let params = CipherParams::new(key.radius(), block_bits, block_bits)?;
            let seq = nist_sequence(seed, bytes, &key, params)?;
            let mut buf = Vec::new();
            match format {
                FormatArg::Raw => write_raw(&mut buf, &seq)?,
                FormatArg::Ascii => write_ascii(&mut buf, &seq)?,
            }
            write_output(&out, &buf)?;
            Ok(0)
        }
        Command::Smoketest {
            input,
            format,
            sequence_bits,
            alpha,
        } => {
            let data = read_input(&input)?;
            let bits = match format {
                FormatArg::Raw => bits_from_bytes(&data),
                FormatArg::Ascii => data
                    .iter()
                    .filter(|b| !b.is_ascii_whitespace())
                    .enumerate()
                    .map(|(i, &b)| match b {
                        b'0' | b'1' => Ok(b - b'0'),
                        other => Err(HcaError::InvalidCell { index: i, value: other }),
                    })
                    .collect::<Result<Vec<u8>>>()?,
            };
            let chunk = sequence_bits.unwrap_or(bits.len()).max(1);
            let mut passed = [0usize; 3];
            let mut total = 0usize;
            for seq in bits.chunks_exact(chunk) {
                let r = smoke_test(seq)?;
                total += 1;
                for (slot, p) in passed.iter_mut().zip([r.monobit, r.block_frequency, r.runs]) {
                    if p >= alpha {
                        *slot += 1;
                    }
                }
                if total == 1 && bits.len() == chunk {
                    println!("monobit p={:.6}", r.monobit);
                    println!("block-frequency p={:.6}", r.block_frequency);
                    println!("runs p={:.6}", r.runs);
                }
            }
            if total == 0 {
                return Err(HcaError::InputTooShort { len: bits.len(), min: chunk });
            }
            println!("sequences: {total} of {chunk} bits");
            for (name, count) in ["monobit", "block-frequency", "runs"].iter().zip(passed) {
                println!("{name}: {count}/{total} passed (alpha {alpha})");
            }
            Ok(0)
        }
        Command::Graph {
            rule,
            border,
            dot,
            input,
        } => {
            let main = parse_rule(&rule)?;
            let border = parse_rule(&border)?;
            let t = build_backward_transducer(&main, &border)?;
            println!("main: {main}");
            println!("border: {border}");
            println!("direction: {}", t.direction());
            println!("states: {} ({} main)", t.states().len(), t.main_states().len());
            match hamiltonian_cycles(&t) {
                Ok(cycles) => {
                    println!("hamiltonian cycles: {}", cycles.len());
                    for c in cycles {
                        let names: Vec<String> = c.iter().map(|i| format!("q{i}")).collect();
                        println!("  ({}, q{})", names.join(", "), c[0]);
                    }
                }
                Err(e) => println!("hamiltonian cycles: skipped ({e})"),
            }
            if let Some(text) = input {
                let config = Lattice::from_bit_str(&text)?;
                println!("pre-image of {config}: {}", t.backward_step(&config)?);
            }
            if let Some(path) = dot {
                write_output(&path, export_dot(&t).as_bytes())?;
            }
            Ok(0)
        }
    }
}
