//! Ascon permutation, Ascon-Hash256 and Ascon-AEAD128 (encryption only).
//!
//! Words are loaded from and stored to bytes in little-endian order. No
//! constant-time guarantees are claimed beyond what the branch-free round
//! function gives naturally.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsconError {
    #[error("unsupported round count {0}, expected 8 or 12")]
    UnsupportedRounds(usize),
    #[error("expected a 16-byte {what}, got {len} bytes")]
    Length { what: &'static str, len: usize },
}

const ROUND_CONSTANTS: [u64; 12] = [
    0xf0, 0xe1, 0xd2, 0xc3, 0xb4, 0xa5, 0x96, 0x87, 0x78, 0x69, 0x5a, 0x4b,
];

const HASH256_IV: u64 = 0x0000_0801_00cc_0002;
const AEAD128_IV: u64 = 0x0000_1000_808c_0001;
const DOMAIN_SEPARATOR: u64 = 0x8000_0000_0000_0000;

const fn round(x: [u64; 5], c: u64) -> [u64; 5] {
    // constant addition and substitution layer (bitsliced 5-bit S-box)
    let x0 = x[0] ^ x[4];
    let x2 = x[2] ^ x[1] ^ c;
    let x4 = x[4] ^ x[3];

    let t0 = x0 ^ (!x[1] & x2);
    let t1 = x[1] ^ (!x2 & x[3]);
    let t2 = x2 ^ (!x[3] & x4);
    let t3 = x[3] ^ (!x4 & x0);
    let t4 = x4 ^ (!x0 & x[1]);
    let t1 = t1 ^ t0;
    let t3 = t3 ^ t2;
    let t0 = t0 ^ t4;
    let t2 = !t2;

    // linear diffusion layer
    [
        t0 ^ t0.rotate_right(19) ^ t0.rotate_right(28),
        t1 ^ t1.rotate_right(61) ^ t1.rotate_right(39),
        t2 ^ t2.rotate_right(1) ^ t2.rotate_right(6),
        t3 ^ t3.rotate_right(10) ^ t3.rotate_right(17),
        t4 ^ t4.rotate_right(7) ^ t4.rotate_right(41),
    ]
}

const fn permute_words(mut x: [u64; 5], rounds: usize) -> [u64; 5] {
    let mut i = 12 - rounds;
    while i < 12 {
        x = round(x, ROUND_CONSTANTS[i]);
        i += 1;
    }
    x
}

/// State after absorbing the Ascon-Hash256 IV, computed at compile time.
const HASH256_INIT: [u64; 5] = permute_words([HASH256_IV, 0, 0, 0, 0], 12);

/// The 320-bit Ascon state as five 64-bit words.
#[derive(Clone, Copy, Default, PartialEq, Eq)]
pub struct AsconState {
    words: [u64; 5],
}

impl AsconState {
    pub const BYTES: usize = 40;

    pub fn from_words(words: [u64; 5]) -> Self {
        Self { words }
    }

    pub fn words(&self) -> [u64; 5] {
        self.words
    }

    pub fn from_bytes(bytes: &[u8; Self::BYTES]) -> Self {
        let mut words = [0u64; 5];
        for (w, chunk) in words.iter_mut().zip(bytes.chunks_exact(8)) {
            *w = u64::from_le_bytes(chunk.try_into().unwrap());
        }
        Self { words }
    }

    pub fn to_bytes(&self) -> [u8; Self::BYTES] {
        let mut out = [0u8; Self::BYTES];
        for (chunk, w) in out.chunks_exact_mut(8).zip(self.words) {
            chunk.copy_from_slice(&w.to_le_bytes());
        }
        out
    }

    /// Applies the Ascon permutation with 8 or 12 rounds.
    pub fn permute(&mut self, rounds: usize) -> Result<(), AsconError> {
        match rounds {
            8 | 12 => {
                self.words = permute_words(self.words, rounds);
                Ok(())
            }
            other => Err(AsconError::UnsupportedRounds(other)),
        }
    }

    #[inline]
    fn p12(&mut self) {
        self.words = permute_words(self.words, 12);
    }

    #[inline]
    fn p8(&mut self) {
        self.words = permute_words(self.words, 8);
    }
}

impl fmt::Debug for AsconState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.words.iter().map(|w| format!("{w:016x}")))
            .finish()
    }
}

/// Little-endian load of up to 8 bytes.
#[inline]
fn load_partial(bytes: &[u8]) -> u64 {
    let mut buf = [0u8; 8];
    buf[..bytes.len()].copy_from_slice(bytes);
    u64::from_le_bytes(buf)
}

/// Padding bit placed right after `n` message bytes of a word.
#[inline]
const fn pad(n: usize) -> u64 {
    0x01 << (8 * n)
}

/// Incremental Ascon-Hash256.
#[derive(Clone)]
pub struct AsconHash256 {
    state: AsconState,
    buffer: [u8; 8],
    buffered: usize,
}

impl Default for AsconHash256 {
    fn default() -> Self {
        Self::new()
    }
}

impl AsconHash256 {
    pub const OUTPUT_BYTES: usize = 32;

    pub fn new() -> Self {
        Self {
            state: AsconState::from_words(HASH256_INIT),
            buffer: [0; 8],
            buffered: 0,
        }
    }

    pub fn update(&mut self, mut data: &[u8]) {
        if self.buffered > 0 {
            let take = (8 - self.buffered).min(data.len());
            self.buffer[self.buffered..self.buffered + take].copy_from_slice(&data[..take]);
            self.buffered += take;
            data = &data[take..];
            if self.buffered < 8 {
                return;
            }
            self.state.words[0] ^= u64::from_le_bytes(self.buffer);
            self.state.p12();
            self.buffered = 0;
        }
        let mut blocks = data.chunks_exact(8);
        for block in blocks.by_ref() {
            self.state.words[0] ^= u64::from_le_bytes(block.try_into().unwrap());
            self.state.p12();
        }
        let rest = blocks.remainder();
        self.buffer[..rest.len()].copy_from_slice(rest);
        self.buffered = rest.len();
    }

    pub fn finalize(mut self) -> [u8; 32] {
        self.state.words[0] ^= load_partial(&self.buffer[..self.buffered]) ^ pad(self.buffered);
        self.state.p12();
        let mut out = [0u8; 32];
        for (i, chunk) in out.chunks_exact_mut(8).enumerate() {
            if i > 0 {
                self.state.p12();
            }
            chunk.copy_from_slice(&self.state.words[0].to_le_bytes());
        }
        out
    }
}

/// One-shot Ascon-Hash256.
pub fn ascon_hash256(message: &[u8]) -> [u8; 32] {
    let mut h = AsconHash256::new();
    h.update(message);
    h.finalize()
}

macro_rules! block128 {
    ($name:ident, $what:literal) => {
        #[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
        pub struct $name([u8; 16]);

        impl $name {
            pub const fn new(bytes: [u8; 16]) -> Self {
                Self(bytes)
            }

            pub fn as_bytes(&self) -> &[u8; 16] {
                &self.0
            }
        }

        impl From<[u8; 16]> for $name {
            fn from(bytes: [u8; 16]) -> Self {
                Self(bytes)
            }
        }

        impl TryFrom<&[u8]> for $name {
            type Error = AsconError;

            fn try_from(bytes: &[u8]) -> Result<Self, Self::Error> {
                <[u8; 16]>::try_from(bytes)
                    .map(Self)
                    .map_err(|_| AsconError::Length {
                        what: $what,
                        len: bytes.len(),
                    })
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!(stringify!($name), "({})"), hex::encode(self.0))
            }
        }
    };
}

block128!(AeadKey, "key");
block128!(AeadNonce, "nonce");
block128!(AeadTag, "tag");

/// Ascon-AEAD128 encryption of `buffer` in place; returns the tag.
pub fn aead128_encrypt_in_place(
    key: &AeadKey,
    nonce: &AeadNonce,
    associated_data: &[u8],
    buffer: &mut [u8],
) -> AeadTag {
    let k0 = u64::from_le_bytes(key.0[..8].try_into().unwrap());
    let k1 = u64::from_le_bytes(key.0[8..].try_into().unwrap());
    let n0 = u64::from_le_bytes(nonce.0[..8].try_into().unwrap());
    let n1 = u64::from_le_bytes(nonce.0[8..].try_into().unwrap());

    let mut s = AsconState::from_words([AEAD128_IV, k0, k1, n0, n1]);
    s.p12();
    s.words[3] ^= k0;
    s.words[4] ^= k1;

    if !associated_data.is_empty() {
        let mut blocks = associated_data.chunks_exact(16);
        for block in blocks.by_ref() {
            s.words[0] ^= load_partial(&block[..8]);
            s.words[1] ^= load_partial(&block[8..]);
            s.p8();
        }
        absorb_final_rate(&mut s, blocks.remainder());
        s.p8();
    }
    s.words[4] ^= DOMAIN_SEPARATOR;

    let full = buffer.len() / 16 * 16;
    let (blocks, last) = buffer.split_at_mut(full);
    for block in blocks.chunks_exact_mut(16) {
        s.words[0] ^= load_partial(&block[..8]);
        s.words[1] ^= load_partial(&block[8..]);
        block[..8].copy_from_slice(&s.words[0].to_le_bytes());
        block[8..].copy_from_slice(&s.words[1].to_le_bytes());
        s.p8();
    }
    absorb_final_rate(&mut s, last);
    let mut rate = [0u8; 16];
    rate[..8].copy_from_slice(&s.words[0].to_le_bytes());
    rate[8..].copy_from_slice(&s.words[1].to_le_bytes());
    last.copy_from_slice(&rate[..last.len()]);

    s.words[2] ^= k0;
    s.words[3] ^= k1;
    s.p12();
    let mut tag = [0u8; 16];
    tag[..8].copy_from_slice(&(s.words[3] ^ k0).to_le_bytes());
    tag[8..].copy_from_slice(&(s.words[4] ^ k1).to_le_bytes());
    AeadTag(tag)
}

/// XORs a final (possibly empty) partial block of fewer than 16 bytes into
/// the 128-bit rate, followed by the padding bit.
fn absorb_final_rate(s: &mut AsconState, block: &[u8]) {
    if block.len() >= 8 {
        s.words[0] ^= load_partial(&block[..8]);
        s.words[1] ^= load_partial(&block[8..]) ^ pad(block.len() - 8);
    } else {
        s.words[0] ^= load_partial(block) ^ pad(block.len());
    }
}

/// Ascon-AEAD128 encryption. The ciphertext has the plaintext's length.
pub fn aead128_encrypt(
    key: &AeadKey,
    nonce: &AeadNonce,
    associated_data: &[u8],
    plaintext: &[u8],
) -> (Vec<u8>, AeadTag) {
    let mut ct = plaintext.to_vec();
    let tag = aead128_encrypt_in_place(key, nonce, associated_data, &mut ct);
    (ct, tag)
}
