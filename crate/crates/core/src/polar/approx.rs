use std::f64::consts::LN_2;

use super::channel::ChannelConfig;
use super::weights::WeightTable;
use crate::error::{Error, Result};
use crate::special::{gaussian_expectation, q_func};

/// Gauss–Hermite order for the binary-input AWGN moments.
const HERMITE_ORDER: usize = 96;

/// `Σ_{e≠0} Q(√(2 d_e / N₀))`, summed per weight class. May exceed 1.
pub fn ml_union_bound(wt: &WeightTable, ch: &ChannelConfig) -> f64 {
    wt.spectrum()
        .map(|(d, a)| a as f64 * q_func((2.0 * d as f64 / ch.n0()).sqrt()))
        .sum()
}

/// Capacity and dispersion (bits, bits²) of BPSK over real AWGN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiAwgnStats {
    pub capacity: f64,
    pub dispersion: f64,
}

fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

impl BiAwgnStats {
    pub fn new(ch: &ChannelConfig) -> Self {
        Self::with_order(ch, HERMITE_ORDER)
    }

    /// Moments of the information density `i = 1 - log₂(1 + e^{-2y/σ²})`
    /// with `y = 1 + σZ`, `σ² = N₀/2`.
    pub fn with_order(ch: &ChannelConfig, order: usize) -> Self {
        let s2 = ch.n0() / 2.0;
        let s = s2.sqrt();
        let density = |z: f64| 1.0 - softplus(-2.0 * (1.0 + s * z) / s2) / LN_2;
        let m1 = gaussian_expectation(order, density);
        let m2 = gaussian_expectation(order, |z| (density(z) - m1).powi(2));
        Self { capacity: m1, dispersion: m2.max(0.0) }
    }
}

/// `ε ≈ Q((N C − K + ½ log₂ N) / √(N V))` for the binary-input AWGN channel.
pub fn normal_approximation(n_code: usize, k_total: usize, ch: &ChannelConfig) -> Result<f64> {
    if k_total == 0 || k_total >= n_code {
        return Err(Error::Invalid(format!("normal approximation needs 0 < K < N, got K={k_total}, N={n_code}")));
    }
    let st = BiAwgnStats::new(ch);
    let n = n_code as f64;
    let num = n * st.capacity - k_total as f64 + 0.5 * n.log2();
    let den = (n * st.dispersion).sqrt();
    if den == 0.0 {
        return Ok(if num > 0.0 { 0.0 } else { 1.0 });
    }
    Ok(q_func(num / den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{construct_code, weight_table};

    #[test]
    fn union_bound_limits() {
        let wt = weight_table(&construct_code(8, 4, 0).unwrap()).unwrap();
        let noisy = ChannelConfig::from_n0(1e30).unwrap();
        assert!((ml_union_bound(&wt, &noisy) - 7.5).abs() < 1e-9);
        let single = weight_table(&construct_code(8, 1, 0).unwrap()).unwrap();
        let ch = ChannelConfig::from_n0(0.7).unwrap();
        let d = single.min_distance() as f64;
        assert_eq!(ml_union_bound(&single, &ch), q_func((2.0 * d / 0.7).sqrt()));
    }

    #[test]
    fn union_bound_direct_sum() {
        let code = construct_code(8, 4, 0).unwrap();
        let wt = weight_table(&code).unwrap();
        let ch = ChannelConfig::from_n0(0.25).unwrap();
        let direct: f64 = (1..16u64)
            .map(|e| {
                let d: u32 = code.encode_payload(e).iter().map(|w| w.count_ones()).sum();
                q_func((2.0 * d as f64 / 0.25).sqrt())
            })
            .sum();
        assert!((ml_union_bound(&wt, &ch) - direct).abs() < 1e-12);
    }

    #[test]
    fn capacity_limits() {
        let hi = BiAwgnStats::new(&ChannelConfig::from_snr_db(30.0).unwrap());
        assert!((hi.capacity - 1.0).abs() < 1e-12);
        let lo = BiAwgnStats::new(&ChannelConfig::from_snr_db(-30.0).unwrap());
        assert!(lo.capacity < 1e-2 && lo.capacity > 0.0);
        // At 0 dB (σ² = 1/2, Es/σ² = 2) the BI-AWGN capacity is about 0.7215 bits.
        let mid = BiAwgnStats::new(&ChannelConfig::from_n0(1.0).unwrap());
        let fine = BiAwgnStats::with_order(&ChannelConfig::from_n0(1.0).unwrap(), 200);
        assert!((mid.capacity - fine.capacity).abs() < 1e-10);
        assert!((mid.dispersion - fine.dispersion).abs() < 1e-9);
        assert!((mid.capacity - 0.7215).abs() < 5e-4, "{}", mid.capacity);
    }

    #[test]
    fn normal_approximation_monotone() {
        let mut prev = 1.0;
        for i in 0..60 {
            let snr = -15.0 + 0.5 * i as f64;
            let e = normal_approximation(64, 32, &ChannelConfig::from_snr_db(snr).unwrap()).unwrap();
            assert!(e <= prev + 1e-15, "snr {snr}: {e} > {prev}");
            prev = e;
        }
        assert!(prev < 1e-12);
        let low = normal_approximation(64, 32, &ChannelConfig::from_snr_db(-20.0).unwrap()).unwrap();
        assert!(low > 0.999);
        assert!(normal_approximation(64, 64, &ChannelConfig::from_n0(1.0).unwrap()).is_err());
    }
}
