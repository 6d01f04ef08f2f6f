//! Shared helpers for unit tests.

use rand::{rngs::StdRng, Rng};

use crate::procmodel::{Ball, Network, Reaction, SpeciesIndex};

/// Random network over `n` species with up to `m` reactions of order ≤ 2.
pub(crate) fn random_network(rng: &mut StdRng, n: usize, m: usize) -> Network {
    let names: Vec<String> = (0..n).map(|i| format!("S{i}")).collect();
    let idx = SpeciesIndex::new(names).unwrap();
    let mut reactions = Vec::new();
    for _ in 0..rng.random_range(1..=m) {
        let side = |rng: &mut StdRng| -> Vec<(usize, u32)> {
            (0..rng.random_range(0..=2))
                .map(|_| (rng.random_range(0..n), rng.random_range(1..=2)))
                .collect()
        };
        let r = side(rng);
        let p = side(rng);
        if let Ok(rx) = Reaction::new(r, p, rng.random_range(0.1..2.0)) {
            reactions.push(rx);
        }
    }
    Network::new(idx, reactions).unwrap()
}

pub(crate) fn sample_in_ball(rng: &mut StdRng, b: &Ball) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..b.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
        if u.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return b
                .center
                .iter()
                .zip(&u)
                .map(|(c, v)| c + b.radius * v)
                .collect();
        }
    }
}
