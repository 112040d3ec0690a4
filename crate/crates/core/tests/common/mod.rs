#![allow(dead_code)]

use deterrence_core::{Market, ModelParams};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Valid market with a differentiated entrant; one draw in ten has `phi = 0`.
pub fn differentiated<R: Rng>(rng: &mut R) -> Market {
    let alpha = rng.gen_range(4.0..20.0);
    let c = rng.gen_range(0.0..0.75 * alpha);
    let beta = rng.gen_range(0.5..3.0);
    let theta = rng.gen_range(0.05..1.95) * beta;
    let phi = if rng.gen_bool(0.1) {
        0.0
    } else {
        rng.gen_range(0.0..0.97) * theta
    };
    Market::new(ModelParams::new(alpha, beta, theta, phi, c)).expect("draw respects the assumptions")
}

pub fn draws(seed: u64, n: usize) -> Vec<Market> {
    let mut r = rng(seed);
    (0..n).map(|_| differentiated(&mut r)).collect()
}

pub fn differentiated_strategy() -> impl Strategy<Value = Market> {
    (
        4.0..20.0f64,
        0.0..0.75f64,
        0.5..3.0f64,
        0.05..1.95f64,
        0.0..0.97f64,
    )
        .prop_map(|(alpha, c_frac, beta, theta_frac, phi_frac)| {
            let theta = theta_frac * beta;
            Market::new(ModelParams::new(
                alpha,
                beta,
                theta,
                phi_frac * theta,
                c_frac * alpha,
            ))
            .unwrap()
        })
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |k| lo + (hi - lo) * (k as f64 / (n - 1) as f64))
}
