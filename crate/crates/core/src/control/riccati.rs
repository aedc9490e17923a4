use super::linalg::{max_abs, Mat};
use super::maps::{op_gtilde, op_h};
use super::plant::PlantModel;
use crate::error::{Error, Result};

pub const RICCATI_TOL: f64 = 1e-12;
pub const RICCATI_MAX_ITER: usize = 1_000_000;
/// Extra iterations allowed after convergence while the residual keeps falling.
const POLISH_ITER: usize = 64;

#[derive(Debug, Clone)]
pub struct RiccatiSolution {
    /// Steady-state predicted covariance `P̂₋[∞]`, the fixed point of `h∘g̃`.
    pub p_pred_inf: Mat,
    /// `P∞ = g̃(P̂₋[∞])`.
    pub p_inf: Mat,
    pub iterations: usize,
    pub residual: f64,
}

/// Fixed-point iteration `P ← h(g̃(P))` started at `W`.
pub fn solve_riccati(model: &PlantModel, tol: f64, max_iter: usize) -> Result<RiccatiSolution> {
    solve_riccati_from(model, model.w_cov(), tol, max_iter)
}

pub fn solve_riccati_from(model: &PlantModel, start: &Mat, tol: f64, max_iter: usize) -> Result<RiccatiSolution> {
    if !(tol > 0.0) {
        return Err(Error::Invalid(format!("Riccati tolerance must be positive, got {tol}")));
    }
    let step = |p: &Mat| -> Result<Mat> { op_h(model, &op_gtilde(model, p)?) };
    let mut p = start.clone();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        let next = step(&p)?;
        residual = max_abs(&(&next - &p));
        p = next;
        iterations += 1;
        if !residual.is_finite() {
            break;
        }
        if residual < tol {
            break;
        }
    }
    if !(residual < tol) {
        return Err(Error::NotConverged { iterations, residual });
    }
    for _ in 0..POLISH_ITER {
        let next = step(&p)?;
        let r = max_abs(&(&next - &p));
        if r >= residual {
            break;
        }
        residual = r;
        p = next;
        iterations += 1;
    }
    let residual = max_abs(&(&p - &step(&p)?));
    let p_inf = op_gtilde(model, &p)?;
    Ok(RiccatiSolution { p_pred_inf: p, p_inf, iterations, residual })
}
