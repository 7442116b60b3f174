//! Seeded random rationals for sampled checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `q` uniform in `1..=max_denom` and `p` uniform in `0..=q`.
pub fn unit_rational(rng: &mut impl Rng, max_denom: u64) -> Rational {
    let q = rng.gen_range(1..=max_denom);
    let p = rng.gen_range(0..=q);
    Rational::new(p, q).expect("q >= 1")
}

pub fn unit_rationals(seed: u64, count: usize, max_denom: u64) -> Vec<Rational> {
    let mut r = rng(seed);
    (0..count).map(|_| unit_rational(&mut r, max_denom)).collect()
}
