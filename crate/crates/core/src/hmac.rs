//! HMAC over any 256-bit [`HashFunction`], with Ascon-Hash256 as the default.
//!
//! `HMAC(k, M) = H((K0 ^ opad) || H((K0 ^ ipad) || M))`, where `K0` is the key
//! zero-padded to the block length, or hashed first when it is longer than
//! the block length.
//!
//! Ascon-Hash256 has no HMAC block length of its own. 64 bytes is used, the
//! same as SHA-256; the sponge rate (8 bytes) would be the other natural
//! choice but is shorter than the digest.

use std::marker::PhantomData;

use thiserror::Error;

use crate::ascon::AsconHash256;
use crate::drbg::HashFunction;

pub const DIGEST_BYTES: usize = 32;
pub const DEFAULT_BLOCK_LEN: usize = 64;
pub const IPAD: u8 = 0x36;
pub const OPAD: u8 = 0x5c;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("HMAC block length {0} is shorter than the {DIGEST_BYTES}-byte digest")]
pub struct BlockLenError(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HmacParams {
    block_len: usize,
    ipad: u8,
    opad: u8,
}

impl Default for HmacParams {
    fn default() -> Self {
        Self {
            block_len: DEFAULT_BLOCK_LEN,
            ipad: IPAD,
            opad: OPAD,
        }
    }
}

impl HmacParams {
    pub fn with_block_len(block_len: usize) -> Result<Self, BlockLenError> {
        if block_len < DIGEST_BYTES {
            return Err(BlockLenError(block_len));
        }
        Ok(Self {
            block_len,
            ..Self::default()
        })
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn ipad(&self) -> u8 {
        self.ipad
    }

    pub fn opad(&self) -> u8 {
        self.opad
    }
}

/// HMAC keyed by nothing yet: a hash function plus block geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hmac<H> {
    params: HmacParams,
    _hash: PhantomData<fn() -> H>,
}

impl<H: HashFunction> Default for Hmac<H> {
    fn default() -> Self {
        Self::new(HmacParams::default())
    }
}

impl<H: HashFunction> Hmac<H> {
    pub fn new(params: HmacParams) -> Self {
        Self {
            params,
            _hash: PhantomData,
        }
    }

    pub fn params(&self) -> &HmacParams {
        &self.params
    }

    /// `K0`: the key brought to exactly the block length.
    pub fn derive_k0(&self, key: &[u8]) -> Vec<u8> {
        let mut k0 = if key.len() > self.params.block_len {
            H::digest(&[key]).to_vec()
        } else {
            key.to_vec()
        };
        k0.resize(self.params.block_len, 0);
        k0
    }

    /// MAC of the concatenation of `message` parts.
    pub fn mac_parts(&self, key: &[u8], message: &[&[u8]]) -> [u8; 32] {
        let k0 = self.derive_k0(key);
        let inner_key: Vec<u8> = k0.iter().map(|b| b ^ self.params.ipad).collect();
        let outer_key: Vec<u8> = k0.iter().map(|b| b ^ self.params.opad).collect();

        let mut inner_parts = Vec::with_capacity(message.len() + 1);
        inner_parts.push(inner_key.as_slice());
        inner_parts.extend_from_slice(message);
        let inner = H::digest(&inner_parts);
        H::digest(&[&outer_key, &inner])
    }

    pub fn mac(&self, key: &[u8], message: &[u8]) -> [u8; 32] {
        self.mac_parts(key, &[message])
    }
}

/// HMAC instantiated with Ascon-Hash256 and a 64-byte block.
pub type AsconHmac = Hmac<AsconHash256>;

/// Ascon-Hash256 HMAC with the default parameters.
pub fn ascon_hmac(key: &[u8], message: &[u8]) -> [u8; 32] {
    AsconHmac::default().mac(key, message)
}
