//! Outage probability under cascaded Rayleigh fading.
//!
//! The amplitude `A = sum_i alpha_i beta_i` of `N_eff` Rayleigh products is
//! approximated by a Gamma law with shape `k N_eff` and rate `delta`, matched to
//! the first two moments of one product. The instantaneous SNR is `A^2` times
//! the mean SNR, so `P_out = P(k N_eff, delta sqrt(rho_th / rho_bar))`.

mod gamma;
mod monte_carlo;

use std::f64::consts::PI;

pub use gamma::{ln_gamma, reg_lower_incomplete_gamma};
pub use monte_carlo::{
    monte_carlo_outage, monte_carlo_outage_curve, rayleigh, sample_amplitudes, SHARD_SIZE,
};

use crate::error::{Error, Result};
use crate::scenario::FadingParams;

/// Shape `k` per Rayleigh product.
pub fn shape_per_product() -> f64 {
    PI * PI / (16.0 - PI * PI)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentMatch {
    pub k: f64,
    /// Rate parameter, `2 pi / ((16 - pi^2) sigma)`.
    pub delta: f64,
    /// `k N_eff`.
    pub shape_total: f64,
}

impl MomentMatch {
    pub fn new(fading: &FadingParams, n_eff: usize) -> Self {
        let k = shape_per_product();
        Self {
            k,
            delta: 2.0 * PI / ((16.0 - PI * PI) * fading.product()),
            shape_total: k * n_eff as f64,
        }
    }

    /// Mean of the matched Gamma law for one product, `k / delta`.
    pub fn product_mean(&self) -> f64 {
        self.k / self.delta
    }

    pub fn product_variance(&self) -> f64 {
        self.k / (self.delta * self.delta)
    }
}

/// Closed-form outage probability at threshold `rho_th` (linear SNR).
pub fn outage_probability(mm: &MomentMatch, mean_snr: f64, rho_th: f64) -> Result<f64> {
    if mean_snr.is_nan() || mean_snr <= 0.0 {
        return Err(Error::Domain {
            function: "outage_probability",
            detail: format!("mean SNR {mean_snr} must be > 0"),
        });
    }
    if rho_th.is_nan() || rho_th < 0.0 {
        return Err(Error::Domain {
            function: "outage_probability",
            detail: format!("threshold {rho_th} must be >= 0"),
        });
    }
    reg_lower_incomplete_gamma(mm.shape_total, mm.delta * (rho_th / mean_snr).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutageCurve {
    pub thresholds: Vec<f64>,
    pub probabilities: Vec<f64>,
}

pub fn outage_curve(mm: &MomentMatch, mean_snr: f64, thresholds: &[f64]) -> Result<OutageCurve> {
    let probabilities = thresholds
        .iter()
        .map(|&t| outage_probability(mm, mean_snr, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(OutageCurve {
        thresholds: thresholds.to_vec(),
        probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> FadingParams {
        FadingParams::default()
    }

    #[test]
    fn shape_constant() {
        let mm = MomentMatch::new(&unit(), 7);
        assert!((mm.k - PI * PI / (16.0 - PI * PI)).abs() < 1e-15);
        assert!((mm.k - 1.60998).abs() < 5e-5);
        assert!((mm.shape_total - 7.0 * mm.k).abs() < 1e-14);
        let f = FadingParams {
            sigma1: 0.7,
            sigma2: 2.3,
        };
        let mm = MomentMatch::new(&f, 1);
        assert!((mm.delta * f.product() - 2.0 * PI / (16.0 - PI * PI)).abs() < 1e-15);
    }

    #[test]
    fn moments_match_rayleigh_product() {
        for (s1, s2) in [(1.0, 1.0), (0.5, 3.0), (2.0, 0.25)] {
            let f = FadingParams {
                sigma1: s1,
                sigma2: s2,
            };
            let mm = MomentMatch::new(&f, 1);
            let sigma = s1 * s2;
            // E[alpha] = sigma_1 sqrt(pi / 2), E[alpha^2] = 2 sigma_1^2
            let mean = s1 * (PI / 2.0).sqrt() * s2 * (PI / 2.0).sqrt();
            let var = 4.0 * sigma * sigma - mean * mean;
            assert!((mm.product_mean() - sigma * PI / 2.0).abs() < 1e-12);
            assert!((mm.product_mean() - mean).abs() < 1e-12);
            assert!((mm.product_variance() - sigma * sigma * (16.0 - PI * PI) / 4.0).abs() < 1e-12);
            assert!((mm.product_variance() - var).abs() < 1e-12);
        }
    }

    #[test]
    fn outage_limits() {
        let mm = MomentMatch::new(&unit(), 16);
        assert_eq!(outage_probability(&mm, 3.0, 0.0).unwrap(), 0.0);
        let x = 10.0 * mm.shape_total;
        let rho = (x / mm.delta).powi(2);
        assert!(outage_probability(&mm, 1.0, rho).unwrap() >= 1.0 - 1e-9);
        assert!(outage_probability(&mm, 0.0, 1.0).is_err());
        assert!(outage_probability(&mm, -1.0, 1.0).is_err());
    }

    #[test]
    fn median_near_squared_mean() {
        let mm = MomentMatch::new(&unit(), 16);
        let rho = (16.0 * PI / 2.0f64).powi(2);
        let p = outage_probability(&mm, 1.0, rho).unwrap();
        assert!((p - 0.5).abs() < 0.05, "{p}");
    }

    #[test]
    fn curve_is_monotone() {
        let mm = MomentMatch::new(&unit(), 4);
        let th: Vec<f64> = (0..40).map(|i| 10f64.powf(i as f64 / 10.0 - 1.0)).collect();
        let c = outage_curve(&mm, 2.0, &th).unwrap();
        assert!(c.probabilities.windows(2).all(|w| w[0] <= w[1]));
    }
}
