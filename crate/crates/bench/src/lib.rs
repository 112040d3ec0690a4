//! Parameter fixtures shared by the solver benchmarks.

use deterrence_core::{Market, ModelParams};

/// Lattice of valid markets over own- and cross-resistance.
pub fn market_lattice(n: usize) -> Vec<Market> {
    let (alpha, beta, c) = (10.0, 2.0, 2.0);
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        let theta = 2.0 * beta * i as f64 / (n + 1) as f64;
        for j in 0..n {
            let phi = theta * j as f64 / n as f64;
            let params = ModelParams::new(alpha, beta, theta, phi, c);
            out.push(Market::new(params).expect("lattice stays inside the assumptions"));
        }
    }
    out
}
