//! Seed derivation and random ordinal sampling.
//!
//! Per-trial seeds are `mix64(master ⊕ mix64(trial + 1))`, where `mix64` is
//! the SplitMix64 finalizer; every random stream in the crate is a ChaCha8
//! generator seeded this way.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ordinal::Ordinal;

/// SplitMix64 finalizer.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of stream `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index.wrapping_add(1)))
}

/// Deterministic generator for stream `index` under `master`.
pub fn rng_for(master: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, index))
}

/// Shape of random ordinals below `ω^ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrdinalShape {
    /// Largest finite exponent.
    pub max_exponent: u64,
    /// Largest coefficient.
    pub max_coefficient: u64,
    /// Chance that a given exponent appears.
    pub density: f64,
}

impl Default for OrdinalShape {
    fn default() -> Self {
        OrdinalShape {
            max_exponent: 5,
            max_coefficient: 5,
            density: 0.5,
        }
    }
}

/// A random ordinal below `ω^(max_exponent+1)`; may be zero.
pub fn random_ordinal<R: Rng + ?Sized>(rng: &mut R, shape: OrdinalShape) -> Ordinal {
    let mut terms = Vec::new();
    for e in (0..=shape.max_exponent).rev() {
        if rng.gen_bool(shape.density) {
            terms.push((Ordinal::nat(e), rng.gen_range(1..=shape.max_coefficient)));
        }
    }
    Ordinal::from_terms(terms).expect("decreasing exponents, positive coefficients")
}

/// A random limit ordinal below `ω^(max_exponent+1)`.
pub fn random_limit<R: Rng + ?Sized>(rng: &mut R, shape: OrdinalShape) -> Ordinal {
    let x = random_ordinal(rng, shape).infinite_part();
    if x.is_zero() {
        Ordinal::omega_pow(Ordinal::nat(rng.gen_range(1..=shape.max_exponent.max(1))))
    } else {
        x
    }
}

/// A random strictly increasing pair.
pub fn random_pair<R: Rng + ?Sized>(rng: &mut R, shape: OrdinalShape) -> (Ordinal, Ordinal) {
    loop {
        let a = random_ordinal(rng, shape);
        let b = random_ordinal(rng, shape);
        if a < b {
            return (a, b);
        }
        if b < a {
            return (b, a);
        }
    }
}

/// A random strictly increasing triple.
pub fn random_triple<R: Rng + ?Sized>(rng: &mut R, shape: OrdinalShape) -> (Ordinal, Ordinal, Ordinal) {
    loop {
        let mut v = [random_ordinal(rng, shape), random_ordinal(rng, shape), random_ordinal(rng, shape)];
        v.sort();
        if v[0] < v[1] && v[1] < v[2] {
            let [a, b, c] = v;
            return (a, b, c);
        }
    }
}

/// `count` distinct ordinals in increasing order.
pub fn random_increasing<R: Rng + ?Sized>(rng: &mut R, shape: OrdinalShape, count: usize) -> Vec<Ordinal> {
    let mut out = std::collections::BTreeSet::new();
    while out.len() < count {
        out.insert(random_ordinal(rng, shape));
    }
    out.into_iter().collect()
}
