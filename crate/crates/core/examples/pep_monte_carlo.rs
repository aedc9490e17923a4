//! Pairwise error probability between two codewords at distance `d` with
//! unequal priors: closed form against a direct simulation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use wncs::bounds::pep;

fn main() -> wncs::Result<()> {
    let (d, n0) = (4usize, 1.0);
    let (p_t, p_e) = (0.8, 0.2);
    let closed = pep(d, n0, p_t, p_e)?;

    // Only the d differing positions matter: t = +1 there, the competitor -1.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trials = 1_000_000u32;
    let sd = (n0 / 2.0).sqrt();
    let threshold = n0 * (p_t / p_e).ln();
    let mut errors = 0u32;
    for _ in 0..trials {
        let corr: f64 = (0..d).map(|_| 1.0 + sd * rng.sample::<f64, _>(StandardNormal)).sum();
        // 2rᵀ(t - t_e) + N₀ ln(P_t/P_e) < 0 picks the competitor.
        if 4.0 * corr + threshold < 0.0 {
            errors += 1;
        }
    }
    let p_hat = errors as f64 / trials as f64;
    let se = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
    println!("closed form  {closed:.6e}");
    println!("monte carlo  {p_hat:.6e} +/- {se:.1e}");
    println!("equal priors {:.6e}", pep(d, n0, 0.5, 0.5)?);
    Ok(())
}
