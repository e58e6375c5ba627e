//! Timing driver: per mechanism, an untimed warm-up and then a timed loop of
//! generate calls, each call measured with a monotonic clock.
//!
//! State sizes are analytic (the serialized working state), not measured.

use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use crate::drbg::{EntropySource, Mechanism, OsEntropy};

pub const DEFAULT_ITERATIONS: usize = 10_000;
pub const DEFAULT_BITS_PER_CALL: usize = 256;
pub const WARMUP_CALLS: usize = 1_000;

pub const CSV_HEADER: &str = "mechanism,primitive,state_bytes,mean_ms,iterations,bits_per_call";

/// Published figures for the six mechanisms: (mechanism, memory in bytes,
/// mean time in ms). Measured on a different platform and runtime; shown for
/// context only.
pub const REFERENCE_FIGURES: [(Mechanism, u64, f64); 6] = [
    (Mechanism::Sha256Hash, 5216, 0.100),
    (Mechanism::AsconHash, 2608, 0.103),
    (Mechanism::Sha256Hmac, 10424, 0.133),
    (Mechanism::AsconHmac, 5208, 0.154),
    (Mechanism::Aes128Ctr, 8072, 0.114),
    (Mechanism::AsconCtr, 5208, 0.109),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    pub mechanisms: Vec<Mechanism>,
    pub iterations: usize,
    pub bits_per_call: usize,
    pub warmup: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            mechanisms: Mechanism::ALL.to_vec(),
            iterations: DEFAULT_ITERATIONS,
            bits_per_call: DEFAULT_BITS_PER_CALL,
            warmup: WARMUP_CALLS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub mechanism: Mechanism,
    pub state_bytes: Option<usize>,
    /// Mean over the completed timed iterations.
    pub mean_ms: Option<f64>,
    /// Timed iterations that completed.
    pub iterations: usize,
    pub bits_per_call: usize,
    pub error: Option<String>,
}

impl BenchRow {
    pub fn primitive(&self) -> &'static str {
        self.mechanism.primitive()
    }

    pub fn failed(&self) -> bool {
        self.error.is_some()
    }

    fn cells(&self) -> [String; 6] {
        [
            self.mechanism.name().to_string(),
            self.primitive().to_string(),
            self.state_bytes.map(|b| b.to_string()).unwrap_or_default(),
            match (self.mean_ms, self.failed()) {
                (Some(ms), false) => format!("{ms:.6}"),
                _ => "failed".to_string(),
            },
            self.iterations.to_string(),
            self.bits_per_call.to_string(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    pub elapsed: Duration,
}

/// One Ascon mechanism's state size next to its baseline's.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FootprintComparison {
    pub ascon: Mechanism,
    pub ascon_bytes: usize,
    pub baseline_bytes: usize,
}

impl FootprintComparison {
    pub fn strictly_smaller(&self) -> bool {
        self.ascon_bytes < self.baseline_bytes
    }
}

impl BenchReport {
    pub fn row(&self, mechanism: Mechanism) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.mechanism == mechanism)
    }

    /// Pairs every Ascon row with its baseline row, when both have a size.
    pub fn footprint_comparisons(&self) -> Vec<FootprintComparison> {
        self.rows
            .iter()
            .filter(|r| r.mechanism.is_ascon())
            .filter_map(|r| {
                let base = self.row(r.mechanism.counterpart())?;
                Some(FootprintComparison {
                    ascon: r.mechanism,
                    ascon_bytes: r.state_bytes?,
                    baseline_bytes: base.state_bytes?,
                })
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.cells().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let header: Vec<&str> = CSV_HEADER.split(',').collect();
        let _ = writeln!(out, "| {} |", header.join(" | "));
        let _ = writeln!(out, "|{}", "---|".repeat(header.len()));
        for row in &self.rows {
            let _ = writeln!(out, "| {} |", row.cells().join(" | "));
        }
        out
    }

    pub fn failures(&self) -> impl Iterator<Item = &BenchRow> {
        self.rows.iter().filter(|r| r.failed())
    }
}

/// The published figures as a markdown table.
pub fn reference_markdown() -> String {
    let mut out = String::from("| mechanism | primitive | published_memory_bytes | published_mean_ms |\n|---|---|---|---|\n");
    for (m, bytes, ms) in REFERENCE_FIGURES {
        let _ = writeln!(out, "| {} | {} | {bytes} | {ms:.3} |", m.name(), m.primitive());
    }
    out
}

pub fn reference_csv() -> String {
    let mut out = String::from("mechanism,primitive,published_memory_bytes,published_mean_ms\n");
    for (m, bytes, ms) in REFERENCE_FIGURES {
        let _ = writeln!(out, "{},{},{bytes},{ms:.3}", m.name(), m.primitive());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BenchConfigError {
    NoIterations,
    NoMechanisms,
    BitsPerCall(usize),
}

impl fmt::Display for BenchConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BenchConfigError::NoIterations => f.write_str("iterations must be at least 1"),
            BenchConfigError::NoMechanisms => f.write_str("no mechanisms selected"),
            BenchConfigError::BitsPerCall(n) => write!(
                f,
                "bits per call must be in 1..={}, got {n}",
                crate::drbg::MAX_BITS_PER_REQUEST
            ),
        }
    }
}

impl std::error::Error for BenchConfigError {}

fn bench_one(
    mechanism: Mechanism,
    config: &BenchConfig,
    entropy: &mut dyn EntropySource,
) -> BenchRow {
    let mut row = BenchRow {
        mechanism,
        state_bytes: None,
        mean_ms: None,
        iterations: 0,
        bits_per_call: config.bits_per_call,
        error: None,
    };
    let mut drbg = match mechanism.instantiate(entropy, None) {
        Ok(d) => d,
        Err(e) => {
            row.error = Some(format!("instantiate: {e}"));
            return row;
        }
    };
    row.state_bytes = Some(drbg.state_bytes());

    for _ in 0..config.warmup {
        if let Err(e) = drbg.generate(config.bits_per_call, None) {
            row.error = Some(format!("warm-up: {e}"));
            return row;
        }
    }

    let mut total = Duration::ZERO;
    for _ in 0..config.iterations {
        let start = Instant::now();
        let out = drbg.generate(config.bits_per_call, None);
        total += start.elapsed();
        match out {
            Ok(bits) => {
                std::hint::black_box(bits);
                row.iterations += 1;
            }
            Err(e) => {
                row.error = Some(format!("generate: {e}"));
                break;
            }
        }
    }
    if row.iterations > 0 {
        row.mean_ms = Some(total.as_secs_f64() * 1e3 / row.iterations as f64);
    }
    row
}

/// Runs the benchmark with instances seeded from `entropy`. A mechanism that
/// fails is reported in its row and the run continues.
pub fn run_with(
    config: &BenchConfig,
    entropy: &mut dyn EntropySource,
) -> Result<BenchReport, BenchConfigError> {
    if config.iterations == 0 {
        return Err(BenchConfigError::NoIterations);
    }
    if config.mechanisms.is_empty() {
        return Err(BenchConfigError::NoMechanisms);
    }
    if config.bits_per_call == 0 || config.bits_per_call > crate::drbg::MAX_BITS_PER_REQUEST {
        return Err(BenchConfigError::BitsPerCall(config.bits_per_call));
    }
    let start = Instant::now();
    let rows = config
        .mechanisms
        .iter()
        .map(|&m| bench_one(m, config, entropy))
        .collect();
    Ok(BenchReport {
        rows,
        elapsed: start.elapsed(),
    })
}

/// Runs the benchmark with OS entropy.
pub fn run(config: &BenchConfig) -> Result<BenchReport, BenchConfigError> {
    run_with(config, &mut OsEntropy)
}
