use crate::error::{Error, Result};
use crate::special::q_func;

/// Pairwise error probability for codewords at distance `d` whose priors
/// satisfy `ln(P^{bt}/P^{be}) = ln_ratio`:
/// `Q(√(2d/N₀) + √(N₀/(8d)) ln_ratio)`.
pub fn pep_ln(d: usize, n0: f64, ln_ratio: f64) -> f64 {
    let d = d as f64;
    q_func((2.0 * d / n0).sqrt() + (n0 / (8.0 * d)).sqrt() * ln_ratio)
}

/// [`pep_ln`] from the two prior probabilities.
pub fn pep(d: usize, n0: f64, p_bt: f64, p_be: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::Invalid("pairwise error probability needs distance d >= 1".into()));
    }
    if !(n0 > 0.0) {
        return Err(Error::Invalid(format!("N0 must be positive, got {n0}")));
    }
    if !(p_bt > 0.0 && p_be > 0.0) {
        return Err(Error::Invalid(format!(
            "pairwise error probability needs positive priors, got {p_bt:e} and {p_be:e}"
        )));
    }
    Ok(pep_ln(d, n0, p_bt.ln() - p_be.ln()))
}
