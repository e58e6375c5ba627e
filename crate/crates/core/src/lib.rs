//! Deterministic random bit generators driven by Ascon-Hash256 and
//! Ascon-AEAD128, with SHA-256 and AES-128 baselines behind the same
//! interface.
//!
//! Three constructions are provided, each generic over its primitive:
//! [`hash_drbg`], [`hmac_drbg`] and [`ctr_drbg`] (no derivation function).
//! Every mechanism exposes pure `instantiate`/`reseed`/`generate` functions
//! over an explicit working state, plus a stateful wrapper implementing
//! [`Drbg`]. [`Mechanism::instantiate`] builds any of the six by name.

pub mod ascon;
pub mod bench;
pub mod bitstring;
pub mod ctr_drbg;
pub mod drbg;
pub mod hash_drbg;
pub mod hmac;
pub mod hmac_drbg;
pub mod kat;

pub use bitstring::{BitString, BitStringError};
pub use drbg::{
    Drbg, DrbgError, DrbgStatus, EntropyError, EntropySource, GenerateResult, Mechanism,
    OsEntropy, ScriptedEntropy, MAX_BITS_PER_REQUEST, RESEED_INTERVAL,
};
