#![allow(dead_code)]

pub mod oracle;

use ascon_drbg::ascon::{AeadNonce, AsconHash256};
use ascon_drbg::ctr_drbg::{self, AsconBlockEncrypt, CtrDrbgState};
use ascon_drbg::hash_drbg::{self, HashDrbgState};
use ascon_drbg::hmac::AsconHmac;
use ascon_drbg::hmac_drbg::{self, HmacDrbgState};
use ascon_drbg::{BitString, DrbgStatus, Mechanism, ScriptedEntropy, RESEED_INTERVAL};
use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};

use oracle::Bits;

pub const OUTPUT_LENGTHS: [usize; 6] = [8, 100, 256, 300, 512, 440];
pub const CTR_LENS: [usize; 3] = [8, 32, 128];
pub const EQUIVALENCE_CASES: usize = 120;

pub fn to_bs(bits: &[bool]) -> BitString {
    BitString::from_bits(bits.iter().copied())
}

pub fn to_bits(bs: &BitString) -> Bits {
    bs.bits().collect()
}

fn random_bytes(rng: &mut StdRng, len: usize) -> Vec<u8> {
    let mut out = vec![0u8; len];
    rng.fill(&mut out[..]);
    out
}

fn random_bits(rng: &mut StdRng, len: usize) -> Bits {
    (0..len).map(|_| rng.random()).collect()
}

/// Case `i` of a sweep: output length, whether additional input is present,
/// and counter width. Every 36 consecutive cases cover every combination.
pub fn case_shape(i: usize) -> (usize, bool, usize) {
    (
        OUTPUT_LENGTHS[i % 6],
        (i / 6) % 2 == 0,
        CTR_LENS[(i / 12) % 3],
    )
}

fn random_counter(rng: &mut StdRng) -> u64 {
    rng.random_range(1..=RESEED_INTERVAL)
}

fn check(algorithm: &str, case: usize, ok: bool) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(format!("{algorithm}: case {case} disagrees with the reference"))
    }
}

pub fn equivalence_hash_df(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..EQUIVALENCE_CASES {
        let (len, _, _) = case_shape(i);
        let input_len = rng.random_range(0..=96);
        let input = random_bytes(&mut rng, input_len);
        let lib = hash_drbg::hash_df::<AsconHash256>(&BitString::from(input.clone()), len)
            .map_err(|e| e.to_string())?;
        check("hash_df", i, to_bits(&lib) == oracle::hash_df(&oracle::bits_of(&input), len))?;
    }
    Ok(EQUIVALENCE_CASES)
}

pub fn equivalence_hashgen(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..EQUIVALENCE_CASES {
        let (len, _, _) = case_shape(i);
        let mut v = random_bits(&mut rng, 440);
        if i % 5 == 0 {
            // carry across the whole width
            v.iter_mut().for_each(|b| *b = true);
        }
        let lib = hash_drbg::hashgen::<AsconHash256>(len, &to_bs(&v)).map_err(|e| e.to_string())?;
        check("hashgen", i, to_bits(&lib) == oracle::hashgen(len, &v))?;
    }
    Ok(EQUIVALENCE_CASES)
}

pub fn equivalence_hash_generate(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..EQUIVALENCE_CASES {
        let (len, with_add, _) = case_shape(i);
        let state = oracle::HashState {
            v: random_bits(&mut rng, 440),
            c: random_bits(&mut rng, 440),
            reseed_counter: random_counter(&mut rng),
        };
        let add_len = rng.random_range(1..=48);
        let add = with_add.then(|| oracle::bits_of(&random_bytes(&mut rng, add_len)));

        let lib_state =
            HashDrbgState::from_parts(to_bs(&state.v), to_bs(&state.c), state.reseed_counter)
                .map_err(|e| e.to_string())?;
        let lib_add = add.as_deref().map(to_bs);
        let out = hash_drbg::generate::<AsconHash256>(&lib_state, len, lib_add.as_ref())
            .map_err(|e| e.to_string())?;
        let (bits, next) = oracle::hash_generate(&state, len, add.as_deref());
        check(
            "hash generate",
            i,
            out.status == DrbgStatus::Success
                && out.bits.as_ref().map(to_bits) == Some(bits)
                && to_bits(out.state.v()) == next.v
                && to_bits(out.state.c()) == next.c
                && out.state.reseed_counter() == next.reseed_counter,
        )?;
    }
    Ok(EQUIVALENCE_CASES)
}

pub fn equivalence_hmac_update(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mac = AsconHmac::default();
    for i in 0..EQUIVALENCE_CASES {
        let (_, with_data, _) = case_shape(i);
        let k = random_bits(&mut rng, 256);
        let v = random_bits(&mut rng, 256);
        let data_len = rng.random_range(1..=100);
        let data = with_data.then(|| oracle::bits_of(&random_bytes(&mut rng, data_len)));
        let lib_data = data.as_deref().map(to_bs);
        let (lk, lv) = hmac_drbg::update(&mac, lib_data.as_ref(), &to_bs(&k), &to_bs(&v))
            .map_err(|e| e.to_string())?;
        let (ok, ov) = oracle::hmac_update(data.as_deref(), &k, &v);
        check("hmac update", i, to_bits(&lk) == ok && to_bits(&lv) == ov)?;
    }
    Ok(EQUIVALENCE_CASES)
}

pub fn equivalence_hmac_generate(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mac = AsconHmac::default();
    for i in 0..EQUIVALENCE_CASES {
        let (len, with_add, _) = case_shape(i);
        let state = oracle::HmacState {
            k: random_bits(&mut rng, 256),
            v: random_bits(&mut rng, 256),
            reseed_counter: random_counter(&mut rng),
        };
        let add_len = rng.random_range(1..=80);
        let add = with_add.then(|| oracle::bits_of(&random_bytes(&mut rng, add_len)));

        let lib_state =
            HmacDrbgState::from_parts(to_bs(&state.k), to_bs(&state.v), state.reseed_counter)
                .map_err(|e| e.to_string())?;
        let lib_add = add.as_deref().map(to_bs);
        let out = hmac_drbg::generate(&mac, &lib_state, len, lib_add.as_ref())
            .map_err(|e| e.to_string())?;
        let (bits, next) = oracle::hmac_generate(&state, len, add.as_deref());
        check(
            "hmac generate",
            i,
            out.bits.as_ref().map(to_bits) == Some(bits)
                && to_bits(&out.state.key()) == next.k
                && to_bits(&out.state.v()) == next.v
                && out.state.reseed_counter() == next.reseed_counter,
        )?;
    }
    Ok(EQUIVALENCE_CASES)
}

fn random_ctr_v(rng: &mut StdRng, i: usize, ctr_len: usize) -> Bits {
    let mut v = random_bits(rng, 128);
    if i % 4 == 0 {
        // low counter bits all ones, so the first increment wraps
        v[128 - ctr_len..].iter_mut().for_each(|b| *b = true);
    }
    v
}

fn random_ctr_context(rng: &mut StdRng) -> ([u8; 16], Vec<u8>) {
    let nonce: [u8; 16] = random_bytes(rng, 16).try_into().unwrap();
    let ad_len = rng.random_range(0..=24);
    (nonce, random_bytes(rng, ad_len))
}

pub fn equivalence_ctr_update(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..EQUIVALENCE_CASES {
        let (_, zero_data, ctr_len) = case_shape(i);
        let k = random_bits(&mut rng, 128);
        let v = random_ctr_v(&mut rng, i, ctr_len);
        let (n, a) = random_ctr_context(&mut rng);
        let provided = if zero_data { vec![false; 256] } else { random_bits(&mut rng, 256) };

        let cipher = AsconBlockEncrypt::new(AeadNonce::new(n), a.clone());
        let (lk, lv) = ctr_drbg::update(&cipher, ctr_len, &to_bs(&provided), &to_bs(&k), &to_bs(&v))
            .map_err(|e| e.to_string())?;
        let (ok, ov) = oracle::ctr_update(&provided, &k, &v, &n, &a, ctr_len);
        check("ctr update", i, to_bits(&lk) == ok && to_bits(&lv) == ov)?;
    }
    Ok(EQUIVALENCE_CASES)
}

pub fn equivalence_ctr_generate(seed: u64) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(seed);
    for i in 0..EQUIVALENCE_CASES {
        let (len, with_add, ctr_len) = case_shape(i);
        let (n, a) = random_ctr_context(&mut rng);
        let state = oracle::CtrState {
            k: random_bits(&mut rng, 128),
            v: random_ctr_v(&mut rng, i, ctr_len),
            n,
            a: a.clone(),
            ctr_len,
            reseed_counter: random_counter(&mut rng),
        };
        // any bit length up to the seed length, not just whole bytes
        let add_len = rng.random_range(1..=256);
        let add = with_add.then(|| random_bits(&mut rng, add_len));

        let lib_state = CtrDrbgState::from_parts(
            AsconBlockEncrypt::new(AeadNonce::new(n), a),
            to_bs(&state.k),
            to_bs(&state.v),
            ctr_len,
            state.reseed_counter,
        )
        .map_err(|e| e.to_string())?;
        let lib_add = add.as_deref().map(to_bs);
        let out = ctr_drbg::generate(&lib_state, len, lib_add.as_ref()).map_err(|e| e.to_string())?;
        let (bits, next) = oracle::ctr_generate(&state, len, add.as_deref());
        check(
            "ctr generate",
            i,
            out.bits.as_ref().map(to_bits) == Some(bits)
                && to_bits(&out.state.key()) == next.k
                && to_bits(&out.state.v()) == next.v
                && out.state.reseed_counter() == next.reseed_counter,
        )?;
    }
    Ok(EQUIVALENCE_CASES)
}

pub type Equivalence = fn(u64) -> Result<usize, String>;

/// One entry per step: derivation function, hashgen, hash generate, HMAC
/// update, HMAC generate, counter update, counter generate.
pub const EQUIVALENCES: [(&str, Equivalence); 7] = [
    ("hash_df", equivalence_hash_df),
    ("hashgen", equivalence_hashgen),
    ("hash generate", equivalence_hash_generate),
    ("hmac update", equivalence_hmac_update),
    ("hmac generate", equivalence_hmac_generate),
    ("ctr update", equivalence_ctr_update),
    ("ctr generate", equivalence_ctr_generate),
];

// Deterministic streams

pub fn fixed_script(len: usize, salt: u8) -> Vec<u8> {
    (0..len).map(|i| (i as u8).wrapping_mul(31).wrapping_add(salt)).collect()
}

/// A mixed workload of generate and reseed calls under scripted entropy,
/// concatenated into one byte stream.
pub fn scripted_stream(mechanism: Mechanism) -> Vec<u8> {
    let mut entropy = ScriptedEntropy::new(fixed_script(4096, 0x5a));
    let pers = BitString::from(b"stream personalization".to_vec());
    let mut drbg = mechanism.instantiate(&mut entropy, Some(&pers)).unwrap();
    let add = BitString::from(vec![0xa7; 24]);
    let mut out = Vec::new();
    for (i, len) in [256usize, 8, 1024, 440, 4096, 512].into_iter().enumerate() {
        let add_input = (i % 2 == 1).then_some(&add);
        out.extend_from_slice(drbg.generate(len, add_input).unwrap().as_bytes());
        if i == 2 {
            drbg.reseed(&mut entropy, Some(&add)).unwrap();
        }
    }
    out
}

/// Fraction of one bits in `total_bits` drawn from `mechanism` under a fixed
/// script.
pub fn ones_fraction(mechanism: Mechanism, total_bits: usize) -> f64 {
    let mut entropy = ScriptedEntropy::new(fixed_script(64, 0x11));
    let mut drbg = mechanism.instantiate(&mut entropy, None).unwrap();
    let mut ones = 0usize;
    let mut drawn = 0usize;
    while drawn < total_bits {
        let n = (total_bits - drawn).min(1 << 14);
        ones += drbg.generate(n, None).unwrap().count_ones();
        drawn += n;
    }
    ones as f64 / total_bits as f64
}
