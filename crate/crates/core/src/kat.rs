//! Known-answer test files: parsing and a suite runner.
//!
//! Files are line-oriented text. Records are runs of `Key = Value` lines
//! separated by blank lines; `#` starts a comment line; `[...]` lines are
//! section headers that apply to the records after them. Values are hex.
//!
//! The DRBG files follow the no-reseed protocol: instantiate, generate and
//! discard, generate again and compare with `ReturnedBits`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::ascon::{aead128_encrypt, ascon_hash256, AeadKey, AeadNonce};
use crate::bitstring::BitString;
use crate::ctr_drbg::{self, Aes128Block, DEFAULT_CTR_LEN};
use crate::drbg::{DrbgError, DrbgStatus, GenerateResult};
use crate::hmac::Hmac;
use crate::{hash_drbg, hmac_drbg};

/// The vector files shipped with this crate.
pub const VENDORED_KAT_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/kats");

#[derive(Debug, Error)]
pub enum KatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

/// One record: its fields in file order and the headers in force.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub line: usize,
    pub sections: Vec<String>,
    pub fields: Vec<(String, String)>,
}

impl Record {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.fields
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn get_all(&self, key: &str) -> Vec<&str> {
        self.fields
            .iter()
            .filter(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .collect()
    }

    /// The record's `Count`/`COUNT` field, or its line number.
    pub fn label(&self) -> String {
        match self.get("Count").or_else(|| self.get("COUNT")) {
            Some(c) => format!("Count={c}"),
            None => format!("line {}", self.line),
        }
    }
}

pub fn parse_records(text: &str) -> Result<Vec<Record>, (usize, String)> {
    let mut records = Vec::new();
    let mut sections: Vec<String> = Vec::new();
    let mut headers_closed = true;
    let mut current: Option<Record> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            records.extend(current.take());
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if let Some(inner) = line.strip_prefix('[') {
            let inner = inner
                .strip_suffix(']')
                .ok_or((line_no, "unterminated section header".to_string()))?;
            records.extend(current.take());
            if headers_closed {
                sections.clear();
                headers_closed = false;
            }
            sections.push(inner.trim().to_string());
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or((line_no, format!("expected `Key = Value`, got `{line}`")))?;
        headers_closed = true;
        current
            .get_or_insert_with(|| Record {
                line: line_no,
                sections: sections.clone(),
                fields: Vec::new(),
            })
            .fields
            .push((key.trim().to_string(), value.trim().to_string()));
    }
    records.extend(current);
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KatKind {
    AsconHash256,
    AsconAead128,
    Sha256HashDrbg,
    Sha256HmacDrbg,
    Aes128CtrDrbg,
}

impl KatKind {
    pub const ALL: [KatKind; 5] = [
        KatKind::AsconHash256,
        KatKind::AsconAead128,
        KatKind::Sha256HashDrbg,
        KatKind::Sha256HmacDrbg,
        KatKind::Aes128CtrDrbg,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            KatKind::AsconHash256 => "ascon_hash256.txt",
            KatKind::AsconAead128 => "ascon_aead128.txt",
            KatKind::Sha256HashDrbg => "hash_drbg_sha256.rsp",
            KatKind::Sha256HmacDrbg => "hmac_drbg_sha256.rsp",
            KatKind::Aes128CtrDrbg => "ctr_drbg_aes128_no_df.rsp",
        }
    }

    pub fn is_primitive(self) -> bool {
        matches!(self, KatKind::AsconHash256 | KatKind::AsconAead128)
    }

    fn check(self, record: &Record) -> Result<(), String> {
        match self {
            KatKind::AsconHash256 => check_hash(record),
            KatKind::AsconAead128 => check_aead(record),
            KatKind::Sha256HashDrbg | KatKind::Sha256HmacDrbg | KatKind::Aes128CtrDrbg => {
                check_drbg(self, record)
            }
        }
    }
}

impl fmt::Display for KatKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KatKind::AsconHash256 => "Ascon-Hash256",
            KatKind::AsconAead128 => "Ascon-AEAD128",
            KatKind::Sha256HashDrbg => "Hash DRBG (SHA-256)",
            KatKind::Sha256HmacDrbg => "HMAC DRBG (SHA-256)",
            KatKind::Aes128CtrDrbg => "CTR DRBG (AES-128, no df)",
        })
    }
}

fn field<'a>(record: &'a Record, key: &str) -> Result<&'a str, String> {
    record.get(key).ok_or_else(|| format!("missing field `{key}`"))
}

fn hex_field(record: &Record, key: &str) -> Result<Vec<u8>, String> {
    hex::decode(field(record, key)?).map_err(|e| format!("field `{key}`: {e}"))
}

fn compare(what: &str, expected: &[u8], actual: &[u8]) -> Result<(), String> {
    if expected == actual {
        return Ok(());
    }
    Err(format!(
        "{what} mismatch: expected {}, got {}",
        hex::encode(expected),
        hex::encode(actual)
    ))
}

fn check_hash(record: &Record) -> Result<(), String> {
    let msg = hex_field(record, "Msg")?;
    let md = hex_field(record, "MD")?;
    compare("MD", &md, &ascon_hash256(&msg))
}

fn check_aead(record: &Record) -> Result<(), String> {
    let key = AeadKey::try_from(hex_field(record, "Key")?.as_slice()).map_err(|e| e.to_string())?;
    let nonce =
        AeadNonce::try_from(hex_field(record, "Nonce")?.as_slice()).map_err(|e| e.to_string())?;
    let (ct, tag) = aead128_encrypt(&key, &nonce, &hex_field(record, "AD")?, &hex_field(record, "PT")?);
    let mut out = ct;
    out.extend_from_slice(tag.as_bytes());
    compare("CT", &hex_field(record, "CT")?, &out)
}

fn generated<S>(result: Result<GenerateResult<S>, DrbgError>) -> Result<(BitString, S), String> {
    let out = result.map_err(|e| e.to_string())?;
    match (out.status, out.bits) {
        (DrbgStatus::Success, Some(bits)) => Ok((bits, out.state)),
        (status, _) => Err(format!("generate returned {status:?}")),
    }
}

fn check_drbg(kind: KatKind, record: &Record) -> Result<(), String> {
    let entropy = BitString::from(hex_field(record, "EntropyInput")?);
    let nonce = BitString::from(hex::decode(record.get("Nonce").unwrap_or("")).map_err(|e| e.to_string())?);
    let pers = BitString::from(hex_field(record, "PersonalizationString")?);
    let adds = record.get_all("AdditionalInput");
    if adds.len() != 2 {
        return Err(format!("expected 2 AdditionalInput fields, found {}", adds.len()));
    }
    let add1 = BitString::from(hex::decode(adds[0]).map_err(|e| e.to_string())?);
    let add2 = BitString::from(hex::decode(adds[1]).map_err(|e| e.to_string())?);
    let expected = hex_field(record, "ReturnedBits")?;
    let n = expected.len() * 8;
    let err = |e: DrbgError| e.to_string();

    let bits = match kind {
        KatKind::Sha256HashDrbg => {
            let s = hash_drbg::instantiate_with::<sha2::Sha256>(&entropy, &nonce, Some(&pers)).map_err(err)?;
            let (_, s) = generated(hash_drbg::generate::<sha2::Sha256>(&s, n, Some(&add1)))?;
            generated(hash_drbg::generate::<sha2::Sha256>(&s, n, Some(&add2)))?.0
        }
        KatKind::Sha256HmacDrbg => {
            let mac = Hmac::<sha2::Sha256>::default();
            let s = hmac_drbg::instantiate_with(&mac, &entropy, &nonce, Some(&pers)).map_err(err)?;
            let (_, s) = generated(hmac_drbg::generate(&mac, &s, n, Some(&add1)))?;
            generated(hmac_drbg::generate(&mac, &s, n, Some(&add2)))?.0
        }
        KatKind::Aes128CtrDrbg => {
            let s = ctr_drbg::instantiate_with(Aes128Block, &entropy, Some(&pers), DEFAULT_CTR_LEN)
                .map_err(err)?;
            let (_, s) = generated(ctr_drbg::generate(&s, n, Some(&add1)))?;
            generated(ctr_drbg::generate(&s, n, Some(&add2)))?.0
        }
        _ => unreachable!("not a DRBG vector file"),
    };
    compare("ReturnedBits", &expected, bits.as_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KatSuite {
    All,
    Ascon,
    Drbg,
}

impl KatSuite {
    pub fn kinds(self) -> Vec<KatKind> {
        KatKind::ALL
            .into_iter()
            .filter(|k| match self {
                KatSuite::All => true,
                KatSuite::Ascon => k.is_primitive(),
                KatSuite::Drbg => !k.is_primitive(),
            })
            .collect()
    }
}

impl FromStr for KatSuite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(KatSuite::All),
            "ascon" => Ok(KatSuite::Ascon),
            "drbg" => Ok(KatSuite::Drbg),
            other => Err(format!("unknown suite `{other}` (expected all, ascon or drbg)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatFailure {
    pub file: String,
    pub vector: String,
    pub message: String,
}

impl fmt::Display for KatFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FAIL {} {}: {}", self.file, self.vector, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatFileResult {
    pub kind: KatKind,
    pub total: usize,
    pub failures: Vec<KatFailure>,
}

impl KatFileResult {
    pub fn passed(&self) -> usize {
        self.total - self.failures.len()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KatReport {
    pub files: Vec<KatFileResult>,
}

impl KatReport {
    pub fn all_passed(&self) -> bool {
        self.files.iter().all(|f| f.failures.is_empty() && f.total > 0)
    }

    pub fn total(&self) -> usize {
        self.files.iter().map(|f| f.total).sum()
    }

    pub fn failures(&self) -> impl Iterator<Item = &KatFailure> {
        self.files.iter().flat_map(|f| f.failures.iter())
    }
}

impl fmt::Display for KatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for failure in self.failures() {
            writeln!(f, "{failure}")?;
        }
        for file in &self.files {
            writeln!(
                f,
                "{:<28} {:>5}/{:<5} {}",
                file.kind.to_string(),
                file.passed(),
                file.total,
                file.kind.file_name()
            )?;
        }
        write!(
            f,
            "{}: {} vectors, {} failed",
            if self.all_passed() { "PASS" } else { "FAIL" },
            self.total(),
            self.failures().count()
        )
    }
}

pub fn run_file(kind: KatKind, path: &Path) -> Result<KatFileResult, KatError> {
    let text = std::fs::read_to_string(path).map_err(|source| KatError::Io {
        path: path.to_owned(),
        source,
    })?;
    let records = parse_records(&text).map_err(|(line, message)| KatError::Parse {
        path: path.to_owned(),
        line,
        message,
    })?;
    let failures = records
        .iter()
        .filter_map(|r| {
            kind.check(r).err().map(|message| KatFailure {
                file: kind.file_name().to_string(),
                vector: r.label(),
                message,
            })
        })
        .collect();
    Ok(KatFileResult {
        kind,
        total: records.len(),
        failures,
    })
}

pub fn run_suite(suite: KatSuite, dir: &Path) -> Result<KatReport, KatError> {
    let files = suite
        .kinds()
        .into_iter()
        .map(|kind| run_file(kind, &dir.join(kind.file_name())))
        .collect::<Result<_, _>>()?;
    Ok(KatReport { files })
}
