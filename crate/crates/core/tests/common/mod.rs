#![allow(dead_code)]

use pencil_lab::PencilSpec;
use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;

pub fn rng(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

/// Poles uniform in [-10, 10], weights uniform in (0, 10], n uniform in 1..=n_max.
pub fn random_spec(rng: &mut Pcg64, n_max: usize) -> PencilSpec {
    loop {
        let n = rng.random_range(1..=n_max);
        let mu: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..=10.0)).collect();
        let alpha: Vec<f64> = (0..n)
            .map(|_| loop {
                let a: f64 = rng.random_range(0.0..=10.0);
                if a > 0.0 {
                    break a;
                }
            })
            .collect();
        if let Ok(spec) = PencilSpec::new(mu, alpha) {
            return spec;
        }
    }
}

pub fn e1() -> PencilSpec {
    PencilSpec::new(vec![0.0], vec![1.0]).unwrap()
}

pub fn e2() -> PencilSpec {
    PencilSpec::new(vec![1.0, -1.0], vec![1.0, 1.0]).unwrap()
}
