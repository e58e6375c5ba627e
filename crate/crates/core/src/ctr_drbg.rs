//! Counter-mode DRBG without a derivation function, over a 128-bit block
//! encryption.
//!
//! The Ascon variant uses Ascon-AEAD128 as the block function: the 16-byte
//! counter `V` is encrypted under `(K, N, A)` and only the ciphertext is kept.
//! `N` is drawn once at instantiation and `A` is fixed per instance, so every
//! block call is an AEAD encryption under a repeated nonce used purely as a
//! keystream. The AES-128 variant is the classic SP 800-90A `CTR_DRBG`.
//!
//! # Caveat
//!
//! Ascon-AEAD128 encrypts a single full block by XOR with a state word that
//! depends only on `(K, N, A)`. With `N` and `A` fixed the block function is
//! therefore `V ^ mask(K)`, and within one request the output blocks are
//! `(V + i) ^ mask` for consecutive `i`: neighbouring blocks differ only in
//! the low counter bits. `K` and `V` are refreshed after every request, so
//! the mask changes between requests, but the output inside a request is
//! not pseudorandom. The construction is kept as defined; do not use the
//! Ascon counter-mode generator where output quality matters.

use aes::cipher::{BlockEncrypt, KeyInit};
use aes::Aes128;

use crate::ascon::{aead128_encrypt_in_place, AeadKey, AeadNonce};
use crate::bitstring::BitString;
use crate::drbg::{
    check_request, non_empty, BlockCipher128, Drbg, DrbgError, EntropySource, GenerateResult,
    Mechanism, RESEED_INTERVAL,
};

pub const BLOCKLEN: usize = 128;
pub const KEYLEN: usize = 128;
pub const SEEDLEN: usize = KEYLEN + BLOCKLEN;
pub const ENTROPY_BITS: usize = SEEDLEN;
pub const NONCE_BITS: usize = 128;
pub const DEFAULT_CTR_LEN: usize = BLOCKLEN;
pub const MIN_CTR_LEN: usize = 4;

/// Ascon-AEAD128 with a fixed nonce and associated data, reduced to a block
/// function by dropping the tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsconBlockEncrypt {
    nonce: AeadNonce,
    associated_data: Vec<u8>,
}

impl AsconBlockEncrypt {
    pub fn new(nonce: AeadNonce, associated_data: Vec<u8>) -> Self {
        Self {
            nonce,
            associated_data,
        }
    }

    pub fn nonce(&self) -> &AeadNonce {
        &self.nonce
    }

    pub fn associated_data(&self) -> &[u8] {
        &self.associated_data
    }
}

impl BlockCipher128 for AsconBlockEncrypt {
    const NAME: &'static str = "Ascon-AEAD128";
    type Keyed = AeadKey;

    fn expand_key(&self, key: &[u8; 16]) -> AeadKey {
        AeadKey::new(*key)
    }

    fn encrypt_block(&self, key: &AeadKey, block: &[u8; 16]) -> [u8; 16] {
        let mut out = *block;
        aead128_encrypt_in_place(key, &self.nonce, &self.associated_data, &mut out);
        out
    }

    fn context_bytes(&self) -> usize {
        16 + self.associated_data.len()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Aes128Block;

impl BlockCipher128 for Aes128Block {
    const NAME: &'static str = "AES-128";
    type Keyed = Aes128;

    fn expand_key(&self, key: &[u8; 16]) -> Aes128 {
        Aes128::new(key.into())
    }

    fn encrypt_block(&self, keyed: &Aes128, block: &[u8; 16]) -> [u8; 16] {
        let mut b = (*block).into();
        keyed.encrypt_block(&mut b);
        b.into()
    }
}

fn block128(what: &'static str, s: &BitString) -> Result<[u8; 16], DrbgError> {
    if s.len() != BLOCKLEN {
        return Err(DrbgError::Width {
            what,
            expected: BLOCKLEN,
            actual: s.len(),
        });
    }
    Ok(s.as_bytes().try_into().unwrap())
}

/// The 128-bit ciphertext of `V` under Ascon-AEAD128 with key `K`, nonce `N`
/// and associated data `A`.
pub fn ascon_block_encrypt(
    key: &BitString,
    nonce: &AeadNonce,
    associated_data: &[u8],
    v: &BitString,
) -> Result<BitString, DrbgError> {
    let key = block128("K", key)?;
    let v = block128("V", v)?;
    let cipher = AsconBlockEncrypt::new(*nonce, associated_data.to_vec());
    Ok(BitString::from(cipher.encrypt_block(&AeadKey::new(key), &v)))
}

pub fn check_ctr_len(ctr_len: usize) -> Result<(), DrbgError> {
    if !(MIN_CTR_LEN..=BLOCKLEN).contains(&ctr_len) {
        return Err(DrbgError::CounterLength(ctr_len));
    }
    Ok(())
}

/// Adds one to the rightmost `ctr_len` bits of `v` modulo `2^ctr_len`,
/// leaving the leftmost `128 - ctr_len` bits alone.
pub fn increment(v: u128, ctr_len: usize) -> u128 {
    if ctr_len >= BLOCKLEN {
        return v.wrapping_add(1);
    }
    let mask = (1u128 << ctr_len) - 1;
    (v & !mask) | (v.wrapping_add(1) & mask)
}

fn keystream<B: BlockCipher128>(
    cipher: &B,
    keyed: &B::Keyed,
    ctr_len: usize,
    v: &mut u128,
    out: &mut [u8],
) {
    for chunk in out.chunks_mut(16) {
        *v = increment(*v, ctr_len);
        let block = cipher.encrypt_block(keyed, &v.to_be_bytes());
        chunk.copy_from_slice(&block[..chunk.len()]);
    }
}

fn update_raw<B: BlockCipher128>(
    cipher: &B,
    ctr_len: usize,
    provided: &[u8; 32],
    key: &[u8; 16],
    v: u128,
) -> ([u8; 16], u128) {
    let keyed = cipher.expand_key(key);
    let mut v = v;
    let mut temp = [0u8; 32];
    keystream(cipher, &keyed, ctr_len, &mut v, &mut temp);
    for (t, p) in temp.iter_mut().zip(provided) {
        *t ^= p;
    }
    let key = temp[..16].try_into().unwrap();
    let v = u128::from_be_bytes(temp[16..].try_into().unwrap());
    (key, v)
}

fn seed_block(provided: &BitString) -> Result<[u8; 32], DrbgError> {
    if provided.len() != SEEDLEN {
        return Err(DrbgError::Width {
            what: "provided data",
            expected: SEEDLEN,
            actual: provided.len(),
        });
    }
    Ok(provided.as_bytes().try_into().unwrap())
}

/// An optional input of at most `seedlen` bits, zero-padded on the right.
fn padded(what: &'static str, input: Option<&BitString>) -> Result<[u8; 32], DrbgError> {
    match non_empty(input) {
        None => Ok([0u8; 32]),
        Some(s) if s.len() > SEEDLEN => Err(DrbgError::InputTooLong {
            what,
            len: s.len(),
            max: SEEDLEN,
        }),
        Some(s) => Ok(s.pad_right(SEEDLEN).as_bytes().try_into().unwrap()),
    }
}

/// The update function: two keystream blocks XORed with `provided_data`
/// become the new `K || V`.
pub fn update<B: BlockCipher128>(
    cipher: &B,
    ctr_len: usize,
    provided_data: &BitString,
    key: &BitString,
    v: &BitString,
) -> Result<(BitString, BitString), DrbgError> {
    check_ctr_len(ctr_len)?;
    let provided = seed_block(provided_data)?;
    let key = block128("K", key)?;
    let v = u128::from_be_bytes(block128("V", v)?);
    let (k, v) = update_raw(cipher, ctr_len, &provided, &key, v);
    Ok((BitString::from(k), BitString::from(v.to_be_bytes())))
}

#[derive(Clone, PartialEq, Eq)]
pub struct CtrDrbgState<B> {
    key: [u8; 16],
    v: u128,
    ctr_len: usize,
    reseed_counter: u64,
    cipher: B,
}

impl<B> std::fmt::Debug for CtrDrbgState<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CtrDrbgState")
            .field("ctr_len", &self.ctr_len)
            .field("reseed_counter", &self.reseed_counter)
            .finish_non_exhaustive()
    }
}

impl<B: BlockCipher128> CtrDrbgState<B> {
    pub fn from_parts(
        cipher: B,
        key: BitString,
        v: BitString,
        ctr_len: usize,
        reseed_counter: u64,
    ) -> Result<Self, DrbgError> {
        check_ctr_len(ctr_len)?;
        Ok(Self {
            key: block128("K", &key)?,
            v: u128::from_be_bytes(block128("V", &v)?),
            ctr_len,
            reseed_counter,
            cipher,
        })
    }

    pub fn key(&self) -> BitString {
        BitString::from(self.key)
    }

    pub fn v(&self) -> BitString {
        BitString::from(self.v.to_be_bytes())
    }

    pub fn ctr_len(&self) -> usize {
        self.ctr_len
    }

    pub fn reseed_counter(&self) -> u64 {
        self.reseed_counter
    }

    pub fn cipher(&self) -> &B {
        &self.cipher
    }

    /// `K`, `V`, the cipher context (`N || A` for Ascon) and the counter.
    pub fn serialized_len(&self) -> usize {
        16 + 16 + self.cipher.context_bytes() + 8
    }
}

pub fn generate<B: BlockCipher128 + Clone>(
    state: &CtrDrbgState<B>,
    output_len: usize,
    additional_input: Option<&BitString>,
) -> Result<GenerateResult<CtrDrbgState<B>>, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    check_request(output_len)?;
    if state.reseed_counter > RESEED_INTERVAL {
        return Ok(GenerateResult::reseed_required(state.clone()));
    }
    let add = padded("additional input", additional_input)?;
    let cipher = &state.cipher;
    let (mut key, mut v) = (state.key, state.v);
    if non_empty(additional_input).is_some() {
        (key, v) = update_raw(cipher, state.ctr_len, &add, &key, v);
    }

    let keyed = cipher.expand_key(&key);
    let mut temp = vec![0u8; output_len.div_ceil(BLOCKLEN) * 16];
    keystream(cipher, &keyed, state.ctr_len, &mut v, &mut temp);
    let bits = BitString::from(temp).leftmost(output_len)?;
    (key, v) = update_raw(cipher, state.ctr_len, &add, &key, v);

    Ok(GenerateResult::success(
        bits,
        CtrDrbgState {
            key,
            v,
            ctr_len: state.ctr_len,
            reseed_counter: state.reseed_counter + 1,
            cipher: cipher.clone(),
        },
    ))
}

/// `seed = entropy_input XOR pad(personalization)`, `K = V = 0`, then update.
pub fn instantiate_with<B: BlockCipher128>(
    cipher: B,
    entropy_input: &BitString,
    personalization: Option<&BitString>,
    ctr_len: usize,
) -> Result<CtrDrbgState<B>, DrbgError> {
    check_ctr_len(ctr_len)?;
    let mut seed = seed_block(entropy_input)?;
    let pers = padded("personalization string", personalization)?;
    seed.iter_mut().zip(pers).for_each(|(s, p)| *s ^= p);
    let (key, v) = update_raw(&cipher, ctr_len, &seed, &[0u8; 16], 0);
    Ok(CtrDrbgState {
        key,
        v,
        ctr_len,
        reseed_counter: 1,
        cipher,
    })
}

/// Draws 256 bits of entropy input and then instantiates.
pub fn instantiate<B: BlockCipher128>(
    cipher: B,
    entropy: &mut dyn EntropySource,
    personalization: Option<&BitString>,
    ctr_len: usize,
) -> Result<CtrDrbgState<B>, DrbgError> {
    check_ctr_len(ctr_len)?;
    let entropy_input = entropy.get_entropy(ENTROPY_BITS)?;
    instantiate_with(cipher, &entropy_input, personalization, ctr_len)
}

/// Draws 256 bits of entropy input, then the 128-bit nonce `N`, and
/// instantiates the Ascon variant with associated data `A`.
pub fn instantiate_ascon(
    entropy: &mut dyn EntropySource,
    personalization: Option<&BitString>,
    associated_data: Vec<u8>,
    ctr_len: usize,
) -> Result<CtrDrbgState<AsconBlockEncrypt>, DrbgError> {
    check_ctr_len(ctr_len)?;
    let entropy_input = entropy.get_entropy(ENTROPY_BITS)?;
    let nonce = entropy.get_entropy(NONCE_BITS)?;
    let nonce = AeadNonce::new(nonce.as_bytes().try_into().unwrap());
    instantiate_with(
        AsconBlockEncrypt::new(nonce, associated_data),
        &entropy_input,
        personalization,
        ctr_len,
    )
}

/// `seed = entropy_input XOR pad(additional_input)`, then update. The cipher
/// context (`N`, `A`) is kept.
pub fn reseed_with<B: BlockCipher128 + Clone>(
    state: &CtrDrbgState<B>,
    entropy_input: &BitString,
    additional_input: Option<&BitString>,
) -> Result<CtrDrbgState<B>, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    let mut seed = seed_block(entropy_input)?;
    let add = padded("additional input", additional_input)?;
    seed.iter_mut().zip(add).for_each(|(s, a)| *s ^= a);
    let (key, v) = update_raw(&state.cipher, state.ctr_len, &seed, &state.key, state.v);
    Ok(CtrDrbgState {
        key,
        v,
        ctr_len: state.ctr_len,
        reseed_counter: 1,
        cipher: state.cipher.clone(),
    })
}

pub fn reseed<B: BlockCipher128 + Clone>(
    state: &CtrDrbgState<B>,
    entropy: &mut dyn EntropySource,
    additional_input: Option<&BitString>,
) -> Result<CtrDrbgState<B>, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    let entropy_input = entropy.get_entropy(ENTROPY_BITS)?;
    reseed_with(state, &entropy_input, additional_input)
}

pub struct CtrDrbg<B> {
    state: CtrDrbgState<B>,
}

pub type AsconCtrDrbg = CtrDrbg<AsconBlockEncrypt>;
pub type Aes128CtrDrbg = CtrDrbg<Aes128Block>;

impl<B: BlockCipher128 + Clone> CtrDrbg<B> {
    pub fn from_state(state: CtrDrbgState<B>) -> Self {
        Self { state }
    }

    pub fn state(&self) -> &CtrDrbgState<B> {
        &self.state
    }
}

impl AsconCtrDrbg {
    pub fn new(
        entropy: &mut dyn EntropySource,
        personalization: Option<&BitString>,
        associated_data: Vec<u8>,
        ctr_len: usize,
    ) -> Result<Self, DrbgError> {
        instantiate_ascon(entropy, personalization, associated_data, ctr_len).map(Self::from_state)
    }
}

impl Aes128CtrDrbg {
    pub fn new(
        entropy: &mut dyn EntropySource,
        personalization: Option<&BitString>,
        ctr_len: usize,
    ) -> Result<Self, DrbgError> {
        instantiate(Aes128Block, entropy, personalization, ctr_len).map(Self::from_state)
    }
}

impl<B: BlockCipher128 + Clone + Send> Drbg for CtrDrbg<B> {
    fn mechanism(&self) -> Mechanism {
        if B::NAME == AsconBlockEncrypt::NAME {
            Mechanism::AsconCtr
        } else {
            Mechanism::Aes128Ctr
        }
    }

    fn generate(
        &mut self,
        n_bits: usize,
        additional_input: Option<&BitString>,
    ) -> Result<BitString, DrbgError> {
        let out = generate(&self.state, n_bits, additional_input)?;
        match out.bits {
            Some(bits) => {
                self.state = out.state;
                Ok(bits)
            }
            None => Err(DrbgError::ReseedRequired),
        }
    }

    fn reseed(
        &mut self,
        entropy: &mut dyn EntropySource,
        additional_input: Option<&BitString>,
    ) -> Result<(), DrbgError> {
        self.state = reseed(&self.state, entropy, additional_input)?;
        Ok(())
    }

    fn reseed_counter(&self) -> u64 {
        self.state.reseed_counter
    }

    fn state_bytes(&self) -> usize {
        self.state.serialized_len()
    }
}
