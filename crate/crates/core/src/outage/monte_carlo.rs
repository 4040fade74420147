//! Direct simulation of the cascaded Rayleigh amplitude.
//!
//! Samples are drawn in fixed-size shards; shard `j` uses a ChaCha8 stream
//! seeded with `seed` on stream index `j`, so the result does not depend on
//! how many worker threads run the shards.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::scenario::FadingParams;

pub const SHARD_SIZE: usize = 8192;

/// Rayleigh draw with scale `sigma` (density `x / sigma^2 exp(-x^2 / 2 sigma^2)`).
pub fn rayleigh<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    let u: f64 = rng.random();
    sigma * (-2.0 * (-u).ln_1p()).sqrt()
}

fn shard_rng(seed: u64, shard: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard as u64);
    rng
}

/// `samples` draws of `A = sum_i alpha_i beta_i` over `n_eff` products.
pub fn sample_amplitudes(
    n_eff: usize,
    fading: &FadingParams,
    samples: usize,
    seed: u64,
) -> Vec<f64> {
    let shards = samples.div_ceil(SHARD_SIZE);
    let parts: Vec<Vec<f64>> = (0..shards)
        .into_par_iter()
        .map(|j| {
            let len = SHARD_SIZE.min(samples - j * SHARD_SIZE);
            let mut rng = shard_rng(seed, j);
            (0..len)
                .map(|_| {
                    (0..n_eff)
                        .map(|_| {
                            rayleigh(&mut rng, fading.sigma1) * rayleigh(&mut rng, fading.sigma2)
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    parts.concat()
}

/// Empirical frequency of `A^2 rho_bar <= rho_th`.
pub fn monte_carlo_outage(
    n_eff: usize,
    fading: &FadingParams,
    mean_snr: f64,
    rho_th: f64,
    samples: usize,
    seed: u64,
) -> f64 {
    monte_carlo_outage_curve(n_eff, fading, mean_snr, &[rho_th], samples, seed)[0]
}

/// Empirical outage probability at each threshold, from one common sample set.
pub fn monte_carlo_outage_curve(
    n_eff: usize,
    fading: &FadingParams,
    mean_snr: f64,
    thresholds: &[f64],
    samples: usize,
    seed: u64,
) -> Vec<f64> {
    if samples == 0 {
        return vec![0.0; thresholds.len()];
    }
    let mut snr: Vec<f64> = sample_amplitudes(n_eff, fading, samples, seed)
        .into_iter()
        .map(|a| a * a * mean_snr)
        .collect();
    snr.sort_by(f64::total_cmp);
    thresholds
        .iter()
        .map(|&t| snr.partition_point(|&x| x <= t) as f64 / samples as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_threshold_never_outage() {
        for seed in [0, 1, 99] {
            let p = monte_carlo_outage(3, &FadingParams::default(), 1.0, 0.0, 10_000, seed);
            assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn product_mean_is_pi_over_two() {
        let a = sample_amplitudes(1, &FadingParams::default(), 1_000_000, 7);
        let mean = a.iter().sum::<f64>() / a.len() as f64;
        assert!((mean / (PI / 2.0) - 1.0).abs() < 0.01, "{mean}");
    }

    #[test]
    fn rayleigh_second_moment() {
        let mut rng = shard_rng(3, 0);
        let sigma = 1.7;
        let n = 400_000;
        let m2 = (0..n)
            .map(|_| rayleigh(&mut rng, sigma).powi(2))
            .sum::<f64>()
            / n as f64;
        assert!((m2 / (2.0 * sigma * sigma) - 1.0).abs() < 0.01, "{m2}");
    }

    #[test]
    fn deterministic_for_seed() {
        let f = FadingParams::default();
        let a = sample_amplitudes(4, &f, 20_000, 11);
        let b = sample_amplitudes(4, &f, 20_000, 11);
        assert_eq!(a, b);
        assert_ne!(a, sample_amplitudes(4, &f, 20_000, 12));
        // a shorter run is a prefix of a longer one
        let c = sample_amplitudes(4, &f, 5_000, 11);
        assert_eq!(&a[..5_000], &c[..]);
    }

    #[test]
    fn independent_of_thread_count() {
        let f = FadingParams::default();
        let a = sample_amplitudes(2, &f, 3 * SHARD_SIZE + 17, 5);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| sample_amplitudes(2, &f, 3 * SHARD_SIZE + 17, 5));
        assert_eq!(a, b);
    }
}
