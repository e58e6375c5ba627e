//! Pieces shared by every mechanism: status codes, request limits, entropy
//! sources, the primitive traits the mechanisms are generic over, and the
//! object-safe [`Drbg`] interface used by the CLI and the benchmark driver.
//!
//! A DRBG instance is a mutable state machine. Calls need exclusive access
//! (`&mut self`); instances are `Send` and may move between threads, but
//! sharing one requires external locking.

use thiserror::Error;

use crate::ascon::AsconHash256;
use crate::bitstring::{BitString, BitStringError};

/// Number of generate requests allowed between reseeds. A request is refused
/// once the reseed counter exceeds this value.
pub const RESEED_INTERVAL: u64 = 1 << 48;

/// Largest number of bits a single generate call may return.
pub const MAX_BITS_PER_REQUEST: usize = 1 << 19;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DrbgLimits {
    pub reseed_interval: u64,
    pub max_bits_per_request: usize,
}

pub const LIMITS: DrbgLimits = DrbgLimits {
    reseed_interval: RESEED_INTERVAL,
    max_bits_per_request: MAX_BITS_PER_REQUEST,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DrbgStatus {
    Success,
    ErrorFlag,
    ReseedRequired,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EntropyError {
    #[error("entropy requests must be a positive multiple of 8 bits, got {0}")]
    InvalidLength(usize),
    #[error("entropy script exhausted: wanted {wanted} bytes, {remaining} left")]
    Exhausted { wanted: usize, remaining: usize },
    #[error("operating system entropy failure: {0}")]
    Os(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DrbgError {
    #[error(transparent)]
    Entropy(#[from] EntropyError),
    #[error("working state has not been instantiated")]
    NotInstantiated,
    #[error("reseed required")]
    ReseedRequired,
    #[error("requested {requested} bits, limit is {max}")]
    RequestTooLarge { requested: usize, max: usize },
    #[error("{what} is {len} bits, limit is {max}")]
    InputTooLong {
        what: &'static str,
        len: usize,
        max: usize,
    },
    #[error("{what} must be {expected} bits, got {actual}")]
    Width {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("derivation function output length {0} out of range")]
    DerivationLength(usize),
    #[error("counter length {0} outside 4..=128")]
    CounterLength(usize),
    #[error(transparent)]
    BitString(#[from] BitStringError),
}

impl DrbgError {
    pub fn status(&self) -> DrbgStatus {
        match self {
            DrbgError::ReseedRequired => DrbgStatus::ReseedRequired,
            _ => DrbgStatus::ErrorFlag,
        }
    }
}

/// Outcome of a pure generate step: status, the returned bits (only on
/// success) and the next working state. On `ReseedRequired` the state is the
/// input state, untouched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerateResult<S> {
    pub status: DrbgStatus,
    pub bits: Option<BitString>,
    pub state: S,
}

impl<S> GenerateResult<S> {
    pub(crate) fn success(bits: BitString, state: S) -> Self {
        Self {
            status: DrbgStatus::Success,
            bits: Some(bits),
            state,
        }
    }

    pub(crate) fn reseed_required(state: S) -> Self {
        Self {
            status: DrbgStatus::ReseedRequired,
            bits: None,
            state,
        }
    }
}

pub(crate) fn check_request(output_len: usize) -> Result<(), DrbgError> {
    if output_len > MAX_BITS_PER_REQUEST {
        return Err(DrbgError::RequestTooLarge {
            requested: output_len,
            max: MAX_BITS_PER_REQUEST,
        });
    }
    Ok(())
}

/// The empty string and an absent input are the same thing.
pub(crate) fn non_empty(input: Option<&BitString>) -> Option<&BitString> {
    input.filter(|s| !s.is_empty())
}

pub(crate) fn aligned(s: &BitString) -> Result<&[u8], DrbgError> {
    if !s.is_byte_aligned() {
        return Err(BitStringError::NotByteAligned(s.len()).into());
    }
    Ok(s.as_bytes())
}

/// Source of seed material.
pub trait EntropySource {
    /// Exactly `n_bits` of entropy; `n_bits` must be a positive multiple of 8.
    fn get_entropy(&mut self, n_bits: usize) -> Result<BitString, EntropyError>;
}

fn check_entropy_len(n_bits: usize) -> Result<usize, EntropyError> {
    if n_bits == 0 || n_bits % 8 != 0 {
        return Err(EntropyError::InvalidLength(n_bits));
    }
    Ok(n_bits / 8)
}

/// Entropy from the operating system.
#[derive(Debug, Default, Clone, Copy)]
pub struct OsEntropy;

impl EntropySource for OsEntropy {
    fn get_entropy(&mut self, n_bits: usize) -> Result<BitString, EntropyError> {
        let mut buf = vec![0u8; check_entropy_len(n_bits)?];
        getrandom::fill(&mut buf).map_err(|e| EntropyError::Os(e.to_string()))?;
        Ok(BitString::from(buf))
    }
}

/// Replays a fixed byte script in order. Used for known-answer tests and
/// reproducible output.
#[derive(Debug, Clone)]
pub struct ScriptedEntropy {
    script: Vec<u8>,
    pos: usize,
}

impl ScriptedEntropy {
    pub fn new(script: impl Into<Vec<u8>>) -> Self {
        Self {
            script: script.into(),
            pos: 0,
        }
    }

    pub fn remaining(&self) -> usize {
        self.script.len() - self.pos
    }
}

impl EntropySource for ScriptedEntropy {
    fn get_entropy(&mut self, n_bits: usize) -> Result<BitString, EntropyError> {
        let wanted = check_entropy_len(n_bits)?;
        if wanted > self.remaining() {
            return Err(EntropyError::Exhausted {
                wanted,
                remaining: self.remaining(),
            });
        }
        let out = BitString::from_bytes(&self.script[self.pos..self.pos + wanted]);
        self.pos += wanted;
        Ok(out)
    }
}

/// A 256-bit hash function.
pub trait HashFunction {
    const NAME: &'static str;
    const IS_ASCON: bool;

    /// Hash of the concatenation of `parts`.
    fn digest(parts: &[&[u8]]) -> [u8; 32];
}

impl HashFunction for AsconHash256 {
    const NAME: &'static str = "Ascon-Hash256";
    const IS_ASCON: bool = true;

    fn digest(parts: &[&[u8]]) -> [u8; 32] {
        let mut h = AsconHash256::new();
        for p in parts {
            h.update(p);
        }
        h.finalize()
    }
}

impl HashFunction for sha2::Sha256 {
    const NAME: &'static str = "SHA-256";
    const IS_ASCON: bool = false;

    fn digest(parts: &[&[u8]]) -> [u8; 32] {
        use sha2::Digest;
        let mut h = sha2::Sha256::new();
        for p in parts {
            h.update(p);
        }
        h.finalize().into()
    }
}

/// A keyed 128-bit block encryption, as consumed by the counter-mode DRBG.
pub trait BlockCipher128 {
    const NAME: &'static str;
    /// Per-key precomputation (key schedule, or just the key).
    type Keyed;

    fn expand_key(&self, key: &[u8; 16]) -> Self::Keyed;
    fn encrypt_block(&self, keyed: &Self::Keyed, block: &[u8; 16]) -> [u8; 16];

    /// Bytes of per-instance context carried in the working state.
    fn context_bytes(&self) -> usize {
        0
    }
}

/// Object-safe interface shared by all six mechanisms.
pub trait Drbg: Send {
    fn mechanism(&self) -> Mechanism;

    /// Returns `n_bits` fresh bits, or [`DrbgError::ReseedRequired`] once the
    /// reseed interval is exhausted.
    fn generate(
        &mut self,
        n_bits: usize,
        additional_input: Option<&BitString>,
    ) -> Result<BitString, DrbgError>;

    fn reseed(
        &mut self,
        entropy: &mut dyn EntropySource,
        additional_input: Option<&BitString>,
    ) -> Result<(), DrbgError>;

    fn reseed_counter(&self) -> u64;

    /// Size of the serialized working state in bytes.
    fn state_bytes(&self) -> usize;
}

/// The mechanisms this crate provides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mechanism {
    AsconHash,
    AsconHmac,
    AsconCtr,
    Sha256Hash,
    Sha256Hmac,
    Aes128Ctr,
}

impl Mechanism {
    pub const ALL: [Mechanism; 6] = [
        Mechanism::Sha256Hash,
        Mechanism::AsconHash,
        Mechanism::Sha256Hmac,
        Mechanism::AsconHmac,
        Mechanism::Aes128Ctr,
        Mechanism::AsconCtr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::AsconHash => "ascon-hash",
            Mechanism::AsconHmac => "ascon-hmac",
            Mechanism::AsconCtr => "ascon-ctr",
            Mechanism::Sha256Hash => "sha256-hash",
            Mechanism::Sha256Hmac => "sha256-hmac",
            Mechanism::Aes128Ctr => "aes128-ctr",
        }
    }

    pub fn primitive(self) -> &'static str {
        match self {
            Mechanism::AsconHash | Mechanism::AsconHmac => "Ascon-Hash256",
            Mechanism::AsconCtr => "Ascon-AEAD128",
            Mechanism::Sha256Hash | Mechanism::Sha256Hmac => "SHA-256",
            Mechanism::Aes128Ctr => "AES-128",
        }
    }

    pub fn is_ascon(self) -> bool {
        matches!(
            self,
            Mechanism::AsconHash | Mechanism::AsconHmac | Mechanism::AsconCtr
        )
    }

    /// The mechanism with the same construction over the other primitive family.
    pub fn counterpart(self) -> Mechanism {
        match self {
            Mechanism::AsconHash => Mechanism::Sha256Hash,
            Mechanism::AsconHmac => Mechanism::Sha256Hmac,
            Mechanism::AsconCtr => Mechanism::Aes128Ctr,
            Mechanism::Sha256Hash => Mechanism::AsconHash,
            Mechanism::Sha256Hmac => Mechanism::AsconHmac,
            Mechanism::Aes128Ctr => Mechanism::AsconCtr,
        }
    }

    /// Instantiates with default parameters (empty associated data and a
    /// full-block counter for the counter-mode variants).
    pub fn instantiate(
        self,
        entropy: &mut dyn EntropySource,
        personalization: Option<&BitString>,
    ) -> Result<Box<dyn Drbg>, DrbgError> {
        use crate::{ctr_drbg, hash_drbg, hmac_drbg};
        Ok(match self {
            Mechanism::AsconHash => Box::new(hash_drbg::AsconHashDrbg::new(entropy, personalization)?),
            Mechanism::Sha256Hash => Box::new(hash_drbg::Sha256HashDrbg::new(entropy, personalization)?),
            Mechanism::AsconHmac => Box::new(hmac_drbg::AsconHmacDrbg::new(entropy, personalization)?),
            Mechanism::Sha256Hmac => Box::new(hmac_drbg::Sha256HmacDrbg::new(entropy, personalization)?),
            Mechanism::AsconCtr => Box::new(ctr_drbg::AsconCtrDrbg::new(
                entropy,
                personalization,
                Vec::new(),
                ctr_drbg::DEFAULT_CTR_LEN,
            )?),
            Mechanism::Aes128Ctr => Box::new(ctr_drbg::Aes128CtrDrbg::new(
                entropy,
                personalization,
                ctr_drbg::DEFAULT_CTR_LEN,
            )?),
        })
    }
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Mechanism {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mechanism::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let known: Vec<_> = Mechanism::ALL.iter().map(|m| m.name()).collect();
                format!("unknown mechanism `{s}` (known: {})", known.join(", "))
            })
    }
}
