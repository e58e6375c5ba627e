//! HMAC DRBG over a 256-bit hash.
//!
//! With Ascon-Hash256 the MAC is [`crate::hmac::AsconHmac`]; with SHA-256 this
//! is the classic SP 800-90A `HMAC_DRBG`.

use crate::ascon::AsconHash256;
use crate::bitstring::BitString;
use crate::drbg::{
    aligned, check_request, non_empty, Drbg, DrbgError, EntropySource, GenerateResult,
    HashFunction, Mechanism, RESEED_INTERVAL,
};
use crate::hmac::Hmac;

pub const OUTLEN: usize = 256;
pub const ENTROPY_BITS: usize = 256;
pub const NONCE_BITS: usize = ENTROPY_BITS / 2;

#[derive(Clone, PartialEq, Eq)]
pub struct HmacDrbgState {
    key: [u8; 32],
    v: [u8; 32],
    reseed_counter: u64,
}

impl std::fmt::Debug for HmacDrbgState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HmacDrbgState")
            .field("reseed_counter", &self.reseed_counter)
            .finish_non_exhaustive()
    }
}

fn block256(what: &'static str, s: &BitString) -> Result<[u8; 32], DrbgError> {
    if s.len() != OUTLEN {
        return Err(DrbgError::Width {
            what,
            expected: OUTLEN,
            actual: s.len(),
        });
    }
    Ok(s.as_bytes().try_into().unwrap())
}

impl HmacDrbgState {
    pub fn from_parts(key: BitString, v: BitString, reseed_counter: u64) -> Result<Self, DrbgError> {
        Ok(Self {
            key: block256("K", &key)?,
            v: block256("V", &v)?,
            reseed_counter,
        })
    }

    pub fn key(&self) -> BitString {
        BitString::from(self.key)
    }

    pub fn v(&self) -> BitString {
        BitString::from(self.v)
    }

    pub fn reseed_counter(&self) -> u64 {
        self.reseed_counter
    }

    pub fn serialized_len(&self) -> usize {
        32 + 32 + 8
    }
}

fn update_raw<H: HashFunction>(
    mac: &Hmac<H>,
    provided: &[&[u8]],
    key: [u8; 32],
    v: [u8; 32],
) -> ([u8; 32], [u8; 32]) {
    let mut parts: Vec<&[u8]> = Vec::with_capacity(provided.len() + 2);
    parts.push(&v);
    parts.push(&[0x00]);
    parts.extend_from_slice(provided);
    let key = mac.mac_parts(&key, &parts);
    let v = mac.mac(&key, &v);
    if provided.iter().all(|p| p.is_empty()) {
        return (key, v);
    }
    parts[0] = &v;
    parts[1] = &[0x01];
    let key = mac.mac_parts(&key, &parts);
    let v = mac.mac(&key, &v);
    (key, v)
}

/// The update function. An absent (or empty) `provided_data` runs only the
/// first pass.
pub fn update<H: HashFunction>(
    mac: &Hmac<H>,
    provided_data: Option<&BitString>,
    key: &BitString,
    v: &BitString,
) -> Result<(BitString, BitString), DrbgError> {
    let provided = match non_empty(provided_data) {
        Some(p) => aligned(p)?,
        None => &[],
    };
    let (k, v) = update_raw(mac, &[provided], block256("K", key)?, block256("V", v)?);
    Ok((BitString::from(k), BitString::from(v)))
}

pub fn generate<H: HashFunction>(
    mac: &Hmac<H>,
    state: &HmacDrbgState,
    output_len: usize,
    additional_input: Option<&BitString>,
) -> Result<GenerateResult<HmacDrbgState>, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    check_request(output_len)?;
    if state.reseed_counter > RESEED_INTERVAL {
        return Ok(GenerateResult::reseed_required(state.clone()));
    }
    let add: &[u8] = match non_empty(additional_input) {
        Some(a) => aligned(a)?,
        None => &[],
    };

    let (mut key, mut v) = (state.key, state.v);
    if !add.is_empty() {
        (key, v) = update_raw(mac, &[add], key, v);
    }
    let mut temp = Vec::with_capacity(output_len.div_ceil(OUTLEN) * 32);
    while temp.len() * 8 < output_len {
        v = mac.mac(&key, &v);
        temp.extend_from_slice(&v);
    }
    let bits = BitString::from(temp).leftmost(output_len)?;
    (key, v) = update_raw(mac, &[add], key, v);

    Ok(GenerateResult::success(
        bits,
        HmacDrbgState {
            key,
            v,
            reseed_counter: state.reseed_counter + 1,
        },
    ))
}

/// `K = 0x00..00`, `V = 0x01..01`, then update with
/// `entropy || nonce || personalization`.
pub fn instantiate_with<H: HashFunction>(
    mac: &Hmac<H>,
    entropy_input: &BitString,
    nonce: &BitString,
    personalization: Option<&BitString>,
) -> Result<HmacDrbgState, DrbgError> {
    let pers: &[u8] = match personalization {
        Some(p) => aligned(p)?,
        None => &[],
    };
    let (key, v) = update_raw(
        mac,
        &[aligned(entropy_input)?, aligned(nonce)?, pers],
        [0x00; 32],
        [0x01; 32],
    );
    Ok(HmacDrbgState {
        key,
        v,
        reseed_counter: 1,
    })
}

pub fn instantiate<H: HashFunction>(
    mac: &Hmac<H>,
    entropy: &mut dyn EntropySource,
    personalization: Option<&BitString>,
) -> Result<HmacDrbgState, DrbgError> {
    let entropy_input = entropy.get_entropy(ENTROPY_BITS)?;
    let nonce = entropy.get_entropy(NONCE_BITS)?;
    instantiate_with(mac, &entropy_input, &nonce, personalization)
}

/// Update with `entropy || additional_input`; the counter restarts at 1.
pub fn reseed_with<H: HashFunction>(
    mac: &Hmac<H>,
    state: &HmacDrbgState,
    entropy_input: &BitString,
    additional_input: Option<&BitString>,
) -> Result<HmacDrbgState, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    let add: &[u8] = match additional_input {
        Some(a) => aligned(a)?,
        None => &[],
    };
    let (key, v) = update_raw(mac, &[aligned(entropy_input)?, add], state.key, state.v);
    Ok(HmacDrbgState {
        key,
        v,
        reseed_counter: 1,
    })
}

pub fn reseed<H: HashFunction>(
    mac: &Hmac<H>,
    state: &HmacDrbgState,
    entropy: &mut dyn EntropySource,
    additional_input: Option<&BitString>,
) -> Result<HmacDrbgState, DrbgError> {
    if state.reseed_counter == 0 {
        return Err(DrbgError::NotInstantiated);
    }
    let entropy_input = entropy.get_entropy(ENTROPY_BITS)?;
    reseed_with(mac, state, &entropy_input, additional_input)
}

pub struct HmacDrbg<H> {
    mac: Hmac<H>,
    state: HmacDrbgState,
}

pub type AsconHmacDrbg = HmacDrbg<AsconHash256>;
pub type Sha256HmacDrbg = HmacDrbg<sha2::Sha256>;

impl<H: HashFunction> HmacDrbg<H> {
    pub fn new(
        entropy: &mut dyn EntropySource,
        personalization: Option<&BitString>,
    ) -> Result<Self, DrbgError> {
        Self::with_mac(Hmac::default(), entropy, personalization)
    }

    pub fn with_mac(
        mac: Hmac<H>,
        entropy: &mut dyn EntropySource,
        personalization: Option<&BitString>,
    ) -> Result<Self, DrbgError> {
        let state = instantiate(&mac, entropy, personalization)?;
        Ok(Self { mac, state })
    }

    pub fn from_state(mac: Hmac<H>, state: HmacDrbgState) -> Self {
        Self { mac, state }
    }

    pub fn state(&self) -> &HmacDrbgState {
        &self.state
    }
}

impl<H: HashFunction> Drbg for HmacDrbg<H> {
    fn mechanism(&self) -> Mechanism {
        if H::IS_ASCON {
            Mechanism::AsconHmac
        } else {
            Mechanism::Sha256Hmac
        }
    }

    fn generate(
        &mut self,
        n_bits: usize,
        additional_input: Option<&BitString>,
    ) -> Result<BitString, DrbgError> {
        let out = generate(&self.mac, &self.state, n_bits, additional_input)?;
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
        self.state = reseed(&self.mac, &self.state, entropy, additional_input)?;
        Ok(())
    }

    fn reseed_counter(&self) -> u64 {
        self.state.reseed_counter
    }

    fn state_bytes(&self) -> usize {
        self.state.serialized_len()
    }
}
