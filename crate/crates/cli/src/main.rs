use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use ascon_drbg::bench::{self, BenchConfig};
use ascon_drbg::kat::{self, KatSuite};
use ascon_drbg::{BitString, EntropySource, Mechanism, OsEntropy, ScriptedEntropy, MAX_BITS_PER_REQUEST};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ascon-drbg", version, about = "Ascon-driven deterministic random bit generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate random bytes from one mechanism.
    Generate(GenerateArgs),
    /// Run the known-answer test suites.
    Kat(KatArgs),
    /// Time generate calls for each mechanism.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputForm {
    Hex,
    Raw,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Markdown,
}

#[derive(clap::Args)]
struct GenerateArgs {
    /// One of: ascon-hash, ascon-hmac, ascon-ctr, sha256-hash, sha256-hmac, aes128-ctr.
    #[arg(long)]
    mechanism: Mechanism,
    /// Number of bytes to emit.
    #[arg(long)]
    bytes: usize,
    /// Entropy script in hex. Without it the OS entropy source is used.
    #[arg(long)]
    seed_hex: Option<String>,
    /// Additional input passed to every generate call, in hex.
    #[arg(long)]
    add_input_hex: Option<String>,
    #[arg(long, value_enum, default_value = "hex")]
    format: OutputForm,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct KatArgs {
    /// all, ascon (primitives only) or drbg (baseline DRBG vectors).
    #[arg(default_value = "all")]
    suite: KatSuite,
    /// Directory holding the vector files. Defaults to the vendored set.
    #[arg(long)]
    kat_dir: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Mechanisms to time, comma separated or repeated. Defaults to all six.
    #[arg(long, value_delimiter = ',')]
    mechanism: Vec<Mechanism>,
    #[arg(long, default_value_t = bench::DEFAULT_ITERATIONS)]
    iterations: usize,
    #[arg(long, default_value_t = bench::DEFAULT_BITS_PER_CALL)]
    bits_per_call: usize,
    #[arg(long, value_enum, default_value = "markdown")]
    format: ReportFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn decode_hex(what: &str, s: &str) -> Result<Vec<u8>> {
    hex::decode(s.trim()).with_context(|| format!("{what} is not valid hex"))
}

fn generate(args: GenerateArgs) -> Result<()> {
    let mut entropy: Box<dyn EntropySource> = match &args.seed_hex {
        Some(s) => Box::new(ScriptedEntropy::new(decode_hex("--seed-hex", s)?)),
        None => Box::new(OsEntropy),
    };
    let add = args
        .add_input_hex
        .as_deref()
        .map(|s| decode_hex("--add-input-hex", s).map(BitString::from))
        .transpose()?;

    let mut drbg = args
        .mechanism
        .instantiate(entropy.as_mut(), None)
        .with_context(|| format!("instantiating {}", args.mechanism))?;

    let mut output = Vec::with_capacity(args.bytes);
    let chunk = MAX_BITS_PER_REQUEST / 8;
    while output.len() < args.bytes {
        let n = (args.bytes - output.len()).min(chunk);
        let bits = drbg
            .generate(n * 8, add.as_ref())
            .with_context(|| format!("generating from {}", args.mechanism))?;
        output.extend_from_slice(bits.as_bytes());
    }

    let mut out = open_output(args.out.as_ref())?;
    match args.format {
        OutputForm::Hex => writeln!(out, "{}", hex::encode(&output))?,
        OutputForm::Raw => out.write_all(&output)?,
    }
    out.flush()?;
    Ok(())
}

fn run_kat(args: KatArgs) -> Result<bool> {
    let dir = args
        .kat_dir
        .unwrap_or_else(|| PathBuf::from(kat::VENDORED_KAT_DIR));
    let report = kat::run_suite(args.suite, &dir)?;
    println!("{report}");
    Ok(report.all_passed())
}

fn run_bench(args: BenchArgs) -> Result<bool> {
    let config = BenchConfig {
        mechanisms: if args.mechanism.is_empty() {
            Mechanism::ALL.to_vec()
        } else {
            args.mechanism
        },
        iterations: args.iterations,
        bits_per_call: args.bits_per_call,
        ..BenchConfig::default()
    };
    let report = bench::run(&config)?;

    let mut out = open_output(args.out.as_ref())?;
    match args.format {
        ReportFormat::Csv => {
            out.write_all(report.to_csv().as_bytes())?;
            eprintln!("published reference figures (other platform, context only):");
            eprint!("{}", bench::reference_csv());
        }
        ReportFormat::Markdown => {
            out.write_all(report.to_markdown().as_bytes())?;
            writeln!(out, "\nPublished reference figures (other platform, context only):\n")?;
            out.write_all(bench::reference_markdown().as_bytes())?;
        }
    }
    out.flush()?;

    for row in report.failures() {
        eprintln!("{}: failed: {}", row.mechanism, row.error.as_deref().unwrap_or("unknown"));
    }
    Ok(report.failures().count() == 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate(args).map(|()| true),
        Command::Kat(args) => run_kat(args),
        Command::Bench(args) => {
            if args.iterations == 0 {
                Err(anyhow::anyhow!("--iterations must be at least 1"))
            } else {
                run_bench(args)
            }
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
