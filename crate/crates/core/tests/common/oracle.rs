//! Straight-line reference transcriptions of the DRBG steps.
//!
//! Bit strings here are plain `Vec<bool>` (MSB first) and modular sums go
//! through `BigUint`; nothing is shared with the library's bit-string type or
//! its DRBG code. The primitives (Ascon-Hash256, Ascon-AEAD128) are the
//! library's, which the known-answer suites check separately.

#![allow(dead_code, clippy::manual_div_ceil, clippy::explicit_counter_loop, clippy::useless_vec)]

use ascon_drbg::ascon::{aead128_encrypt, ascon_hash256, AeadKey, AeadNonce};
use num_bigint::BigUint;

pub type Bits = Vec<bool>;

pub fn bits_of(bytes: &[u8]) -> Bits {
    let mut out = Vec::with_capacity(bytes.len() * 8);
    for byte in bytes {
        for i in (0..8).rev() {
            out.push((byte >> i) & 1 == 1);
        }
    }
    out
}

pub fn bytes_of(bits: &[bool]) -> Vec<u8> {
    assert_eq!(bits.len() % 8, 0, "not a whole number of bytes");
    bits.chunks(8)
        .map(|chunk| chunk.iter().fold(0u8, |acc, &b| (acc << 1) | b as u8))
        .collect()
}

pub fn cat(parts: &[&[bool]]) -> Bits {
    parts.iter().flat_map(|p| p.iter().copied()).collect()
}

pub fn leftmost(bits: &[bool], n: usize) -> Bits {
    bits[..n].to_vec()
}

pub fn rightmost(bits: &[bool], n: usize) -> Bits {
    bits[bits.len() - n..].to_vec()
}

pub fn xor(a: &[bool], b: &[bool]) -> Bits {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

pub fn to_int(bits: &[bool]) -> BigUint {
    bits.iter().fold(BigUint::from(0u8), |acc, &b| (acc << 1u32) + BigUint::from(b as u8))
}

pub fn from_int(value: &BigUint, width: usize) -> Bits {
    (0..width).rev().map(|i| value.bit(i as u64)).collect()
}

pub fn modulus(width: usize) -> BigUint {
    BigUint::from(1u8) << width
}

/// Sum of the operands read as integers, modulo `2^width`.
pub fn add_mod(operands: &[&[bool]], width: usize) -> Bits {
    let sum = operands.iter().map(|op| to_int(op)).sum::<BigUint>() % modulus(width);
    from_int(&sum, width)
}

fn hash(bits: &[bool]) -> Bits {
    bits_of(&ascon_hash256(&bytes_of(bits)))
}

fn blocks_for(output_len: usize, block: usize) -> usize {
    (output_len + block - 1) / block
}

// Hash DRBG

pub fn hash_df(input: &[bool], output_len: usize) -> Bits {
    let mut temp = Vec::new();
    let len = blocks_for(output_len, 256);
    let mut counter = 1u8;
    for _ in 1..=len {
        let length_field = from_int(&BigUint::from(output_len), 32);
        let block = hash(&cat(&[&bits_of(&[counter]), &length_field, input]));
        temp = cat(&[&temp, &block]);
        counter += 1;
    }
    leftmost(&temp, output_len)
}

pub fn hashgen(output_len: usize, v: &[bool]) -> Bits {
    let m = blocks_for(output_len, 256);
    let mut data = v.to_vec();
    let mut w_all = Vec::new();
    for _ in 1..=m {
        let w = hash(&data);
        w_all = cat(&[&w_all, &w]);
        data = add_mod(&[&data, &from_int(&BigUint::from(1u8), 440)], 440);
    }
    leftmost(&w_all, output_len)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashState {
    pub v: Bits,
    pub c: Bits,
    pub reseed_counter: u64,
}

pub fn hash_generate(state: &HashState, output_len: usize, add: Option<&[bool]>) -> (Bits, HashState) {
    let mut v = state.v.clone();
    if let Some(add) = add.filter(|a| !a.is_empty()) {
        let w = hash(&cat(&[&bits_of(&[0x02]), &v, add]));
        v = add_mod(&[&v, &w], 440);
    }
    let requested = hashgen(output_len, &v);
    let h = hash(&cat(&[&bits_of(&[0x03]), &v]));
    let counter = from_int(&BigUint::from(state.reseed_counter), 64);
    let v = add_mod(&[&v, &h, &state.c, &counter], 440);
    (
        requested,
        HashState {
            v,
            c: state.c.clone(),
            reseed_counter: state.reseed_counter + 1,
        },
    )
}

pub fn hash_instantiate(entropy: &[bool], nonce: &[bool], pers: &[bool]) -> HashState {
    let seed = cat(&[entropy, nonce, pers]);
    let v = hash_df(&seed, 440);
    let c = hash_df(&cat(&[&bits_of(&[0x00]), &v]), 440);
    HashState { v, c, reseed_counter: 1 }
}

// HMAC DRBG

pub fn hmac(key: &[bool], msg: &[bool]) -> Bits {
    let mut k0 = if key.len() > 512 { hash(key) } else { key.to_vec() };
    k0.resize(512, false);
    let ipad = bits_of(&[0x36; 64]);
    let opad = bits_of(&[0x5c; 64]);
    let inner = hash(&cat(&[&xor(&k0, &ipad), msg]));
    hash(&cat(&[&xor(&k0, &opad), &inner]))
}

pub fn hmac_update(provided: Option<&[bool]>, k: &[bool], v: &[bool]) -> (Bits, Bits) {
    let data: &[bool] = provided.unwrap_or(&[]);
    let k = hmac(k, &cat(&[v, &bits_of(&[0x00]), data]));
    let v = hmac(&k, v);
    if data.is_empty() {
        return (k, v);
    }
    let k = hmac(&k, &cat(&[&v, &bits_of(&[0x01]), data]));
    let v = hmac(&k, &v);
    (k, v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HmacState {
    pub k: Bits,
    pub v: Bits,
    pub reseed_counter: u64,
}

pub fn hmac_generate(state: &HmacState, output_len: usize, add: Option<&[bool]>) -> (Bits, HmacState) {
    let add = add.filter(|a| !a.is_empty());
    let (mut k, mut v) = (state.k.clone(), state.v.clone());
    if add.is_some() {
        (k, v) = hmac_update(add, &k, &v);
    }
    let mut temp = Vec::new();
    while temp.len() < output_len {
        v = hmac(&k, &v);
        temp = cat(&[&temp, &v]);
    }
    let requested = leftmost(&temp, output_len);
    let (k, v) = hmac_update(add, &k, &v);
    (
        requested,
        HmacState {
            k,
            v,
            reseed_counter: state.reseed_counter + 1,
        },
    )
}

pub fn hmac_instantiate(entropy: &[bool], nonce: &[bool], pers: &[bool]) -> HmacState {
    let k = vec![false; 256];
    let v = bits_of(&[0x01; 32]);
    let seed = cat(&[entropy, nonce, pers]);
    let (k, v) = hmac_update(Some(&seed), &k, &v);
    HmacState { k, v, reseed_counter: 1 }
}

// CTR DRBG

pub fn block_encrypt(k: &[bool], n: &[u8; 16], a: &[u8], v: &[bool]) -> Bits {
    let key = AeadKey::try_from(bytes_of(k).as_slice()).unwrap();
    let (ct, _tag) = aead128_encrypt(&key, &AeadNonce::new(*n), a, &bytes_of(v));
    bits_of(&ct)
}

pub fn ctr_increment(v: &[bool], ctr_len: usize) -> Bits {
    if ctr_len < 128 {
        let one = from_int(&BigUint::from(1u8), ctr_len);
        let inc = add_mod(&[&rightmost(v, ctr_len), &one], ctr_len);
        cat(&[&leftmost(v, 128 - ctr_len), &inc])
    } else {
        add_mod(&[v, &from_int(&BigUint::from(1u8), 128)], 128)
    }
}

pub fn ctr_update(provided: &[bool], k: &[bool], v: &[bool], n: &[u8; 16], a: &[u8], ctr_len: usize) -> (Bits, Bits) {
    let mut temp = Vec::new();
    let mut v = v.to_vec();
    while temp.len() < 256 {
        v = ctr_increment(&v, ctr_len);
        let block = block_encrypt(k, n, a, &v);
        temp = cat(&[&temp, &block]);
    }
    let temp = leftmost(&temp, 256);
    let temp = xor(&temp, provided);
    (leftmost(&temp, 128), rightmost(&temp, 128))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtrState {
    pub k: Bits,
    pub v: Bits,
    pub n: [u8; 16],
    pub a: Vec<u8>,
    pub ctr_len: usize,
    pub reseed_counter: u64,
}

pub fn ctr_generate(state: &CtrState, output_len: usize, add: Option<&[bool]>) -> (Bits, CtrState) {
    let (n, a, ctr_len) = (&state.n, &state.a, state.ctr_len);
    let (mut k, mut v) = (state.k.clone(), state.v.clone());
    let add_padded = match add.filter(|a| !a.is_empty()) {
        Some(add) => {
            let mut padded = add.to_vec();
            if padded.len() < 256 {
                padded.resize(256, false);
            }
            (k, v) = ctr_update(&padded, &k, &v, n, a, ctr_len);
            padded
        }
        None => vec![false; 256],
    };
    let mut temp = Vec::new();
    while temp.len() < output_len {
        v = ctr_increment(&v, ctr_len);
        let block = block_encrypt(&k, n, a, &v);
        temp = cat(&[&temp, &block]);
    }
    let requested = leftmost(&temp, output_len);
    let (k, v) = ctr_update(&add_padded, &k, &v, n, a, ctr_len);
    (
        requested,
        CtrState {
            k,
            v,
            n: *n,
            a: a.clone(),
            ctr_len,
            reseed_counter: state.reseed_counter + 1,
        },
    )
}

/// Entropy input, then nonce, both read from `script` in order.
pub fn ctr_instantiate(script: &[u8], pers: &[bool], a: &[u8], ctr_len: usize) -> CtrState {
    let entropy = bits_of(&script[..32]);
    let n: [u8; 16] = script[32..48].try_into().unwrap();
    let mut pers = pers.to_vec();
    pers.resize(256, false);
    let seed = xor(&entropy, &pers);
    let (k, v) = ctr_update(&seed, &vec![false; 128], &vec![false; 128], &n, a, ctr_len);
    CtrState {
        k,
        v,
        n,
        a: a.to_vec(),
        ctr_len,
        reseed_counter: 1,
    }
}
