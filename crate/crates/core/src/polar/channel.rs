use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// BPSK over real AWGN with per-dimension noise variance `N₀/2`; the SNR is
/// `10 log₁₀(1/N₀)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConfig {
    n0: f64,
}

impl ChannelConfig {
    pub fn from_n0(n0: f64) -> Result<Self> {
        if !(n0 > 0.0) || !n0.is_finite() {
            return Err(Error::Invalid(format!("N0 must be positive and finite, got {n0}")));
        }
        Ok(Self { n0 })
    }

    pub fn from_snr_db(snr_db: f64) -> Result<Self> {
        Self::from_n0(10f64.powf(-snr_db / 10.0))
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }

    pub fn snr_db(&self) -> f64 {
        -10.0 * self.n0.log10()
    }

    pub fn noise_std(&self) -> f64 {
        (self.n0 / 2.0).sqrt()
    }
}

/// `t = 1 - 2c`.
pub fn modulate(c: &[u8]) -> Vec<f64> {
    c.iter().map(|&b| if b & 1 == 1 { -1.0 } else { 1.0 }).collect()
}

/// `r = t + n`, `n ~ N(0, N₀/2)` i.i.d.
pub fn add_awgn<R: Rng + ?Sized>(t: &[f64], ch: &ChannelConfig, rng: &mut R) -> Vec<f64> {
    let s = ch.noise_std();
    t.iter().map(|&x| x + s * rng.sample::<f64, _>(StandardNormal)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bpsk_mapping() {
        assert_eq!(modulate(&[0, 0, 0]), vec![1.0; 3]);
        assert_eq!(modulate(&[1, 0]), vec![-1.0, 1.0]);
    }

    #[test]
    fn noiseless_limit_and_demap() {
        let ch = ChannelConfig::from_n0(1e-300).unwrap();
        let c = [1u8, 0, 1, 1, 0];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = add_awgn(&modulate(&c), &ch, &mut rng);
        let back: Vec<u8> = r.iter().map(|&v| (v < 0.0) as u8).collect();
        assert_eq!(back, c);
        assert!(r.iter().zip(modulate(&c)).all(|(a, b)| (a - b).abs() < 1e-140));
    }

    #[test]
    fn noise_variance() {
        let ch = ChannelConfig::from_snr_db(3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = vec![1.0; 1_000_000];
        let r = add_awgn(&t, &ch, &mut rng);
        let var = r.iter().map(|v| (v - 1.0).powi(2)).sum::<f64>() / r.len() as f64;
        assert!((var / (ch.n0() / 2.0) - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn snr_roundtrip() {
        let ch = ChannelConfig::from_snr_db(-2.5).unwrap();
        assert!((ch.snr_db() + 2.5).abs() < 1e-12);
        assert!(ChannelConfig::from_n0(0.0).is_err());
    }
}
