//! Bit strings with an MSB-first bit order and a big-endian integer view.
//!
//! Every DRBG in this crate describes its data flow in terms of bit strings:
//! concatenation, `leftmost`/`rightmost` selection, XOR and addition modulo
//! `2^n`. [`BitString`] stores bits packed into bytes, most significant bit
//! first. When the length is not a multiple of eight the unused low-order bits
//! of the last byte are kept at zero, so two equal bit sequences always have
//! equal byte storage.

use std::fmt;

use thiserror::Error;

/// Errors produced by bit-string operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitStringError {
    #[error("requested {requested} bits from a string of {available} bits")]
    Length { requested: usize, available: usize },
    #[error("value needs more than {width} bits")]
    Overflow { width: usize },
    #[error("operands differ in length ({left} vs {right} bits)")]
    LengthMismatch { left: usize, right: usize },
    #[error("bit string of {0} bits is not a whole number of bytes")]
    NotByteAligned(usize),
    #[error("invalid hex: {0}")]
    Hex(String),
}

/// An ordered sequence of bits, MSB first.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bytes: Vec<u8>,
    len: usize,
}

#[inline]
fn byte_len(bits: usize) -> usize {
    bits.div_ceil(8)
}

/// Mask selecting the used (high) bits of a final byte holding `bits % 8` bits.
#[inline]
fn tail_mask(bits: usize) -> u8 {
    match bits % 8 {
        0 => 0xff,
        r => 0xffu8 << (8 - r),
    }
}

impl BitString {
    /// The empty bit string.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            bytes: vec![0; byte_len(len)],
            len,
        }
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self {
            bytes: bytes.to_vec(),
            len: bytes.len() * 8,
        }
    }

    /// Builds a bit string from the first `len` bits of `bytes`.
    pub fn from_bytes_with_len(bytes: &[u8], len: usize) -> Result<Self, BitStringError> {
        if len > bytes.len() * 8 {
            return Err(BitStringError::Length {
                requested: len,
                available: bytes.len() * 8,
            });
        }
        let mut out = Self {
            bytes: bytes[..byte_len(len)].to_vec(),
            len,
        };
        out.clear_tail();
        Ok(out)
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = Self::new();
        for bit in bits {
            if out.len % 8 == 0 {
                out.bytes.push(0);
            }
            if bit {
                let last = out.bytes.len() - 1;
                out.bytes[last] |= 0x80 >> (out.len % 8);
            }
            out.len += 1;
        }
        out
    }

    /// Parses lowercase or uppercase hex. An empty string gives the empty bit string.
    pub fn from_hex(s: &str) -> Result<Self, BitStringError> {
        let bytes = hex::decode(s.trim()).map_err(|e| BitStringError::Hex(e.to_string()))?;
        Ok(Self::from_bytes(&bytes))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_byte_aligned(&self) -> bool {
        self.len % 8 == 0
    }

    /// Packed storage. When the length is not a multiple of 8 the final byte
    /// carries zero padding in its low bits.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// The bytes of a whole-byte bit string.
    pub fn to_bytes(&self) -> Result<Vec<u8>, BitStringError> {
        if !self.is_byte_aligned() {
            return Err(BitStringError::NotByteAligned(self.len));
        }
        Ok(self.bytes.clone())
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, BitStringError> {
        if !self.is_byte_aligned() {
            return Err(BitStringError::NotByteAligned(self.len));
        }
        Ok(self.bytes)
    }

    /// Lowercase hex of a whole-byte bit string.
    pub fn to_hex(&self) -> Result<String, BitStringError> {
        if !self.is_byte_aligned() {
            return Err(BitStringError::NotByteAligned(self.len));
        }
        Ok(hex::encode(&self.bytes))
    }

    /// Bit `i`, counting from the most significant end.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.bytes[i / 8] & (0x80 >> (i % 8)) != 0
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.bit(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn clear_tail(&mut self) {
        if let Some(last) = self.bytes.last_mut() {
            *last &= tail_mask(self.len);
        }
    }

    /// `n` bits starting at bit offset `start`. Caller guarantees bounds.
    fn extract(&self, start: usize, n: usize) -> Self {
        let first = start / 8;
        let shift = start % 8;
        let out_len = byte_len(n);
        let bytes = if shift == 0 {
            self.bytes[first..first + out_len].to_vec()
        } else {
            (0..out_len)
                .map(|i| {
                    let hi = self.bytes[first + i] << shift;
                    let lo = self
                        .bytes
                        .get(first + i + 1)
                        .map_or(0, |b| b >> (8 - shift));
                    hi | lo
                })
                .collect()
        };
        let mut out = Self { bytes, len: n };
        out.clear_tail();
        out
    }

    /// The first `n` bits.
    pub fn leftmost(&self, n: usize) -> Result<Self, BitStringError> {
        if n > self.len {
            return Err(BitStringError::Length {
                requested: n,
                available: self.len,
            });
        }
        Ok(self.extract(0, n))
    }

    /// The last `n` bits.
    pub fn rightmost(&self, n: usize) -> Result<Self, BitStringError> {
        if n > self.len {
            return Err(BitStringError::Length {
                requested: n,
                available: self.len,
            });
        }
        Ok(self.extract(self.len - n, n))
    }

    /// Shortens to the first `n` bits in place; no-op when already shorter.
    pub fn truncate(&mut self, n: usize) {
        if n < self.len {
            self.len = n;
            self.bytes.truncate(byte_len(n));
            self.clear_tail();
        }
    }

    pub fn append(&mut self, other: &BitString) {
        let shift = self.len % 8;
        if shift == 0 {
            self.bytes.extend_from_slice(&other.bytes);
        } else {
            let last = self.bytes.len() - 1;
            for (i, &b) in other.bytes.iter().enumerate() {
                self.bytes[last + i] |= b >> shift;
                self.bytes.push(b << (8 - shift));
            }
        }
        self.len += other.len;
        self.bytes.truncate(byte_len(self.len));
        self.clear_tail();
    }

    /// Appends whole bytes.
    pub fn append_bytes(&mut self, bytes: &[u8]) {
        if self.is_byte_aligned() {
            self.bytes.extend_from_slice(bytes);
            self.len += bytes.len() * 8;
        } else {
            self.append(&Self::from_bytes(bytes));
        }
    }

    /// `self || other`.
    pub fn concat(&self, other: &BitString) -> Self {
        let mut out = self.clone();
        out.append(other);
        out
    }

    /// Bitwise XOR of two equal-length strings.
    pub fn xor(&self, other: &BitString) -> Result<Self, BitStringError> {
        if self.len != other.len {
            return Err(BitStringError::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(Self {
            bytes: self
                .bytes
                .iter()
                .zip(&other.bytes)
                .map(|(a, b)| a ^ b)
                .collect(),
            len: self.len,
        })
    }

    /// Appends zero bits on the right up to `len` bits.
    pub fn pad_right(&self, len: usize) -> Self {
        if len <= self.len {
            return self.clone();
        }
        let mut out = self.clone();
        out.bytes.resize(byte_len(len), 0);
        out.len = len;
        out
    }

    /// Big-endian integer bytes of this string, right-aligned in exactly
    /// `width_bytes` bytes. High-order bytes that do not fit are dropped.
    fn int_bytes(&self, width_bytes: usize) -> Vec<u8> {
        let shift = self.len % 8;
        let aligned: Vec<u8> = if shift == 0 {
            self.bytes.clone()
        } else {
            // shift the whole string right by (8 - shift) bits
            let s = 8 - shift;
            let mut v = Vec::with_capacity(self.bytes.len());
            let mut carry = 0u8;
            for &b in &self.bytes {
                v.push(carry | (b >> s));
                carry = b << (8 - s);
            }
            v
        };
        let mut out = vec![0u8; width_bytes];
        let take = aligned.len().min(width_bytes);
        out[width_bytes - take..].copy_from_slice(&aligned[aligned.len() - take..]);
        out
    }

    /// Inverse of [`Self::int_bytes`]: the low `len` bits of the big-endian
    /// integer in `bytes` (which holds exactly `byte_len(len)` bytes).
    fn from_int_bytes(mut bytes: Vec<u8>, len: usize) -> Self {
        let r = len % 8;
        if r != 0 {
            bytes[0] &= (1u8 << r) - 1;
            let s = 8 - r;
            for i in 0..bytes.len() {
                let next = bytes.get(i + 1).map_or(0, |b| b >> r);
                bytes[i] = (bytes[i] << s) | next;
            }
        }
        Self { bytes, len }
    }

    /// Unsigned value of the bit string. Fails if it does not fit in 128 bits.
    pub fn to_u128(&self) -> Result<u128, BitStringError> {
        let bytes = self.int_bytes(byte_len(self.len));
        let significant: Vec<u8> = bytes.into_iter().skip_while(|&b| b == 0).collect();
        if significant.len() > 16 {
            return Err(BitStringError::Overflow { width: 128 });
        }
        Ok(significant
            .iter()
            .fold(0u128, |acc, &b| (acc << 8) | u128::from(b)))
    }

    /// `(self + other) mod 2^width`, encoded in exactly `width` bits.
    pub fn add_mod(&self, other: &BitString, width: usize) -> Self {
        add_mod_pow2(self, other, width)
    }

    /// Adds a small integer in place modulo `2^len`.
    pub fn increment_by(&mut self, value: u64) {
        if self.len == 0 {
            return;
        }
        // Fast path for whole-byte strings.
        if self.is_byte_aligned() {
            let mut carry = u128::from(value);
            for b in self.bytes.iter_mut().rev() {
                if carry == 0 {
                    break;
                }
                let sum = u128::from(*b) + (carry & 0xff);
                *b = sum as u8;
                carry = (carry >> 8) + (sum >> 8);
            }
        } else {
            *self = add_mod_pow2(self, &int_encode(u128::from(value), 64).unwrap(), self.len);
        }
    }
}

/// `(int(a) + int(b)) mod 2^width`, as a `width`-bit string. Operands are
/// read as unsigned big-endian integers and zero-extended on the left.
pub fn add_mod_pow2(a: &BitString, b: &BitString, width: usize) -> BitString {
    let nbytes = byte_len(width);
    let mut acc = a.int_bytes(nbytes);
    let rhs = b.int_bytes(nbytes);
    let mut carry = 0u16;
    for (x, y) in acc.iter_mut().zip(rhs.iter()).rev() {
        let sum = u16::from(*x) + u16::from(*y) + carry;
        *x = sum as u8;
        carry = sum >> 8;
    }
    BitString::from_int_bytes(acc, width)
}

/// Big-endian encoding of `value` in exactly `width` bits.
pub fn int_encode(value: u128, width: usize) -> Result<BitString, BitStringError> {
    if width < 128 && value >> width != 0 {
        return Err(BitStringError::Overflow { width });
    }
    let nbytes = byte_len(width);
    let raw = value.to_be_bytes();
    let mut bytes = vec![0u8; nbytes];
    let take = nbytes.min(16);
    bytes[nbytes - take..].copy_from_slice(&raw[16 - take..]);
    Ok(BitString::from_int_bytes(bytes, width))
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({} bits: {})", self.len, hex::encode(&self.bytes))
    }
}

impl From<&[u8]> for BitString {
    fn from(bytes: &[u8]) -> Self {
        Self::from_bytes(bytes)
    }
}

impl From<Vec<u8>> for BitString {
    fn from(bytes: Vec<u8>) -> Self {
        let len = bytes.len() * 8;
        Self { bytes, len }
    }
}

impl<const N: usize> From<[u8; N]> for BitString {
    fn from(bytes: [u8; N]) -> Self {
        Self::from_bytes(&bytes)
    }
}
