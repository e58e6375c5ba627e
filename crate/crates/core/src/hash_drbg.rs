//! Hash DRBG over a 256-bit hash with a 440-bit seed length.
//!
//! With [`AsconHash256`] this is the Ascon-driven Hash DRBG; with SHA-256 it
//! is the classic SP 800-90A `Hash_DRBG`. Block counts in the derivation
//! function and in `hashgen` use `ceil(outputLength / 256)`.

use std::marker::PhantomData;

use crate::ascon::AsconHash256;
use crate::bitstring::{add_mod_pow2, int_encode, BitString};
use crate::drbg::{
    aligned, check_request, non_empty, Drbg, DrbgError, EntropySource, GenerateResult,
    HashFunction, Mechanism, RESEED_INTERVAL,
};

/// Width of `V` and `C` in bits.
pub const SEEDLEN: usize = 440;
pub const SEEDLEN_BYTES: usize = SEEDLEN / 8;
pub const OUTLEN: usize = 256;
/// Bits of entropy input drawn at instantiate and reseed.
pub const ENTROPY_BITS: usize = 256;
/// Bits of instantiation nonce (half the entropy input).
pub const NONCE_BITS: usize = ENTROPY_BITS / 2;
/// The derivation function counter is a single byte.
pub const MAX_DF_BITS: usize = 255 * OUTLEN;

#[derive(Clone, PartialEq, Eq)]
pub struct HashDrbgState {
    v: BitString,
    c: BitString,
    reseed_counter: u64,
}

impl std::fmt::Debug for HashDrbgState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HashDrbgState")
            .field("reseed_counter", &self.reseed_counter)
            .finish_non_exhaustive()
    }
}

fn check_width(what: &'static str, s: &BitString, expected: usize) -> Result<(), DrbgError> {
    if s.len() != expected {
        return Err(DrbgError::Width {
            what,
            expected,
            actual: s.len(),
        });
    }
    Ok(())
}

impl HashDrbgState {
    /// Assembles a state from raw parts. A reseed counter of zero marks an
    /// uninstantiated state.
    pub fn from_parts(v: BitString, c: BitString, reseed_counter: u64) -> Result<Self, DrbgError> {
        check_width("V", &v, SEEDLEN)?;
        check_width("C", &c, SEEDLEN)?;
        Ok(Self {
            v,
            c,
            reseed_counter,
        })
    }

    pub fn v(&self) -> &BitString {
        &self.v
    }

    pub fn c(&self) -> &BitString {
        &self.c
    }

    pub fn reseed_counter(&self) -> u64 {
        self.reseed_counter
    }

    /// Serialized size: V, C and a 64-bit counter.
    pub fn serialized_len(&self) -> usize {
        2 * SEEDLEN_BYTES + 8
    }
}

/// Hash-based derivation function: `leftmost` of the concatenated digests of
/// `counter || outputLength || input`, with a one-byte counter starting at 1
/// and `outputLength` as a 32-bit big-endian integer.
pub fn hash_df<H: HashFunction>(input: &BitString, output_len: usize) -> Result<BitString, DrbgError> {
    if output_len == 0 || output_len > MAX_DF_BITS {
        return Err(DrbgError::DerivationLength(output_len));
    }
    let input = aligned(input)?;
    let len_field = (output_len as u32).to_be_bytes();
    let blocks = output_len.div_ceil(OUTLEN);
    let mut temp = Vec::with_capacity(blocks * 32);
    for counter in 1..=blocks as u8 {
        temp.extend_from_slice(&H::digest(&[&[counter], &len_field, input]));
    }
    Ok(BitString::from(temp).leftmost(output_len)?)
}

/// Output expansion: digests of `V`, `V + 1`, ... (mod 2^440), truncated to
/// `output_len` bits. `v` itself is not modified.
pub fn hashgen<H: HashFunction>(output_len: usize, v: &BitString) -> Result<BitString, DrbgError> {
    check_width("V", v, SEEDLEN)?;
    let blocks = output_len.div_ceil(OUTLEN);
    let mut data = v.clone();
    let mut w = Vec::with_capacity(blocks * 32);
    for i in 0..blocks {
        if i > 0 {
            data.increment_by(1);
        }
        w.extend_from_slice(&H::digest(&[data.as_bytes()]));
    }
    Ok(BitString::from(w).leftmost(output_len)?)
}

/// One generate request. Refuses with `ReseedRequired` (state untouched)
/// once the counter exceeds the reseed interval.
pub fn generate<H: HashFunction>(
    state: &HashDrbgState,
    output_len: usize,
    additional_input: Option<&BitString>,
) -> Result<GenerateResult<HashDrbgState>, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    check_request(output_len)?;
    if state.reseed_counter > RESEED_INTERVAL {
        return Ok(GenerateResult::reseed_required(state.clone()));
    }

    let mut v = state.v.clone();
    if let Some(add) = non_empty(additional_input) {
        let w = H::digest(&[&[0x02], v.as_bytes(), aligned(add)?]);
        v = add_mod_pow2(&v, &BitString::from(w), SEEDLEN);
    }
    let bits = hashgen::<H>(output_len, &v)?;
    let h = H::digest(&[&[0x03], v.as_bytes()]);
    // 64-bit counter, zero-extended to seedlen by the modular sum
    let counter = int_encode(u128::from(state.reseed_counter), 64)?;
    v = add_mod_pow2(&v, &BitString::from(h), SEEDLEN);
    v = add_mod_pow2(&v, &state.c, SEEDLEN);
    v = add_mod_pow2(&v, &counter, SEEDLEN);

    Ok(GenerateResult::success(
        bits,
        HashDrbgState {
            v,
            c: state.c.clone(),
            reseed_counter: state.reseed_counter + 1,
        },
    ))
}

fn state_from_seed<H: HashFunction>(seed_material: &BitString) -> Result<HashDrbgState, DrbgError> {
    let v = hash_df::<H>(seed_material, SEEDLEN)?;
    let c = hash_df::<H>(&BitString::from([0x00]).concat(&v), SEEDLEN)?;
    Ok(HashDrbgState {
        v,
        c,
        reseed_counter: 1,
    })
}

/// Instantiate from explicit inputs: seed material is
/// `entropy || nonce || personalization`.
pub fn instantiate_with<H: HashFunction>(
    entropy_input: &BitString,
    nonce: &BitString,
    personalization: Option<&BitString>,
) -> Result<HashDrbgState, DrbgError> {
    let mut seed = entropy_input.concat(nonce);
    if let Some(p) = personalization {
        seed.append(p);
    }
    state_from_seed::<H>(&seed)
}

/// Draws 256 bits of entropy input followed by a 128-bit nonce.
pub fn instantiate<H: HashFunction>(
    entropy: &mut dyn EntropySource,
    personalization: Option<&BitString>,
) -> Result<HashDrbgState, DrbgError> {
    let entropy_input = entropy.get_entropy(ENTROPY_BITS)?;
    let nonce = entropy.get_entropy(NONCE_BITS)?;
    instantiate_with::<H>(&entropy_input, &nonce, personalization)
}

/// Reseed from explicit inputs: seed material is `0x01 || V || entropy || addInput`.
pub fn reseed_with<H: HashFunction>(
    state: &HashDrbgState,
    entropy_input: &BitString,
    additional_input: Option<&BitString>,
) -> Result<HashDrbgState, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    let mut seed = BitString::from([0x01]);
    seed.append(&state.v);
    seed.append(entropy_input);
    if let Some(add) = additional_input {
        seed.append(add);
    }
    state_from_seed::<H>(&seed)
}

pub fn reseed<H: HashFunction>(
    state: &HashDrbgState,
    entropy: &mut dyn EntropySource,
    additional_input: Option<&BitString>,
) -> Result<HashDrbgState, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    let entropy_input = entropy.get_entropy(ENTROPY_BITS)?;
    reseed_with::<H>(state, &entropy_input, additional_input)
}

/// Stateful wrapper implementing [`Drbg`].
pub struct HashDrbg<H> {
    state: HashDrbgState,
    _hash: PhantomData<fn() -> H>,
}

pub type AsconHashDrbg = HashDrbg<AsconHash256>;
pub type Sha256HashDrbg = HashDrbg<sha2::Sha256>;

impl<H: HashFunction> HashDrbg<H> {
    pub fn new(
        entropy: &mut dyn EntropySource,
        personalization: Option<&BitString>,
    ) -> Result<Self, DrbgError> {
        Ok(Self::from_state(instantiate::<H>(entropy, personalization)?))
    }

    pub fn from_state(state: HashDrbgState) -> Self {
        Self {
            state,
            _hash: PhantomData,
        }
    }

    pub fn state(&self) -> &HashDrbgState {
        &self.state
    }
}

impl<H: HashFunction> Drbg for HashDrbg<H> {
    fn mechanism(&self) -> Mechanism {
        if H::IS_ASCON {
            Mechanism::AsconHash
        } else {
            Mechanism::Sha256Hash
        }
    }

    fn generate(
        &mut self,
        n_bits: usize,
        additional_input: Option<&BitString>,
    ) -> Result<BitString, DrbgError> {
        let out = generate::<H>(&self.state, n_bits, additional_input)?;
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
        self.state = reseed::<H>(&self.state, entropy, additional_input)?;
        Ok(())
    }

    fn reseed_counter(&self) -> u64 {
        self.state.reseed_counter
    }

    fn state_bytes(&self) -> usize {
        self.state.serialized_len()
    }
}
