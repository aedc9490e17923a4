use super::quantizer::Interval;
use crate::control::{Mat, Vector};
use crate::error::{Error, Result};
use crate::special::{gauss_legendre, norm_interval, norm_pdf};

/// Gauss–Legendre order per dimension for correlated cell integrals.
pub const DEFAULT_QUAD_ORDER: usize = 32;

/// Predicted output distribution `N(μ, Σ)`.
#[derive(Debug, Clone)]
pub struct GaussianPrior {
    mu: Vector,
    sigma: Mat,
    chol: Mat,
    det: f64,
    diagonal: bool,
}

impl GaussianPrior {
    pub fn new(mu: Vector, sigma: Mat) -> Result<Self> {
        if sigma.shape() != (mu.len(), mu.len()) || mu.is_empty() {
            return Err(Error::dim("GaussianPrior sigma", format!("{0}x{0}", mu.len()), format!("{:?}", sigma.shape())));
        }
        let sigma = crate::control::linalg::ingest_symmetric(&sigma, "GaussianPrior sigma")?;
        let chol = sigma
            .clone()
            .cholesky()
            .ok_or(Error::NotPositiveDefinite { context: "GaussianPrior sigma" })?
            .l();
        let det = chol.diagonal().iter().map(|d| d * d).product::<f64>();
        if !(det > 0.0) {
            return Err(Error::NotPositiveDefinite { context: "GaussianPrior sigma" });
        }
        let n = mu.len();
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || sigma[(i, j)] == 0.0));
        Ok(Self { mu, sigma, chol, det, diagonal })
    }

    pub fn mu(&self) -> &Vector {
        &self.mu
    }
    pub fn sigma(&self) -> &Mat {
        &self.sigma
    }
    pub fn det(&self) -> f64 {
        self.det
    }
    pub fn dim(&self) -> usize {
        self.mu.len()
    }
    /// Same covariance, different mean.
    pub fn with_mean(&self, mu: Vector) -> Self {
        Self { mu, ..self.clone() }
    }
}

/// Gaussian probability of a rectangle.
pub fn cell_prob(prior: &GaussianPrior, rect: &[Interval]) -> Result<f64> {
    cell_prob_with_order(prior, rect, DEFAULT_QUAD_ORDER)
}

/// [`cell_prob`] with an explicit quadrature order for the correlated case.
pub fn cell_prob_with_order(prior: &GaussianPrior, rect: &[Interval], order: usize) -> Result<f64> {
    let n = prior.dim();
    if rect.len() != n {
        return Err(Error::dim("cell_prob rectangle", n, rect.len()));
    }
    if order == 0 {
        return Err(Error::Invalid("quadrature order must be positive".into()));
    }
    let lo: Vec<f64> = rect.iter().zip(prior.mu.iter()).map(|(r, m)| r.0 - m).collect();
    let hi: Vec<f64> = rect.iter().zip(prior.mu.iter()).map(|(r, m)| r.1 - m).collect();
    if prior.diagonal {
        let p = (0..n)
            .map(|j| {
                let s = prior.sigma[(j, j)].sqrt();
                norm_interval(lo[j] / s, hi[j] / s)
            })
            .product::<f64>();
        return Ok(p.clamp(0.0, 1.0));
    }
    let mut z = vec![0.0; n];
    Ok(sequential(&prior.chol, &lo, &hi, 0, &mut z, order).clamp(0.0, 1.0))
}

/// Integrates over whitened coordinates one dimension at a time: given
/// `z_0..z_{j-1}`, dimension `j` is restricted to an interval and the
/// innermost dimension is closed form.
fn sequential(l: &Mat, lo: &[f64], hi: &[f64], j: usize, z: &mut [f64], order: usize) -> f64 {
    let shift: f64 = (0..j).map(|k| l[(j, k)] * z[k]).sum();
    let d = l[(j, j)];
    let a = (lo[j] - shift) / d;
    let b = (hi[j] - shift) / d;
    if b <= a {
        return 0.0;
    }
    if j + 1 == lo.len() {
        return norm_interval(a, b);
    }
    integrate_phi(a, b, order, |x| {
        z[j] = x;
        sequential(l, lo, hi, j + 1, z, order)
    })
}

/// Whitened coordinates beyond this magnitude carry under 1e-19 of mass.
const Z_CLIP: f64 = 9.0;
/// Widest piece handed to a single Gauss–Legendre rule, in standard deviations.
const PIECE_WIDTH: f64 = 1.0;

/// `∫_a^b φ(x) f(x) dx`, clipped to `[-Z_CLIP, Z_CLIP]` and split into pieces
/// of at most `PIECE_WIDTH`, each integrated with a Gauss–Legendre rule.
fn integrate_phi(a: f64, b: f64, order: usize, mut f: impl FnMut(f64) -> f64) -> f64 {
    let a = a.max(-Z_CLIP);
    let b = b.min(Z_CLIP);
    if b <= a {
        return 0.0;
    }
    let pieces = ((b - a) / PIECE_WIDTH).ceil().max(1.0) as usize;
    let width = (b - a) / pieces as f64;
    let rule = gauss_legendre(order);
    let mut total = 0.0;
    for p in 0..pieces {
        let lo = a + p as f64 * width;
        let half = 0.5 * width;
        let mid = lo + half;
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let x = mid + half * t;
            total += w * half * norm_pdf(x) * f(x);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    fn prior2(rho: f64) -> GaussianPrior {
        let s = Mat::from_row_slice(2, 2, &[1.0, rho, rho, 2.0]);
        GaussianPrior::new(Vector::from_vec(vec![0.1, -0.2]), s).unwrap()
    }

    #[test]
    fn whole_space_has_unit_mass() {
        let p = GaussianPrior::new(Vector::zeros(1), Mat::identity(1, 1)).unwrap();
        assert_eq!(cell_prob(&p, &[(-INF, INF)]).unwrap(), 1.0);
        let v = cell_prob(&prior2(0.9), &[(-INF, INF), (-INF, INF)]).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn small_interval_closed_form() {
        let p = GaussianPrior::new(Vector::zeros(1), Mat::identity(1, 1)).unwrap();
        let v = cell_prob(&p, &[(-0.01, 0.01)]).unwrap();
        assert!((v - 0.007_978_712_629_263_2).abs() < 1e-15, "{v}");
    }

    #[test]
    fn correlated_quadrant_matches_orthant_formula() {
        // P(Z1 < 0, Z2 < 0) = 1/4 + asin(ρ)/(2π) for unit variances.
        for rho in [-0.8, -0.3, 0.2, 0.7, 0.95] {
            let s = Mat::from_row_slice(2, 2, &[1.0, rho, rho, 1.0]);
            let p = GaussianPrior::new(Vector::zeros(2), s).unwrap();
            let v = cell_prob(&p, &[(-INF, 0.0), (-INF, 0.0)]).unwrap();
            let exact = 0.25 + rho.asin() / (2.0 * std::f64::consts::PI);
            assert!((v - exact).abs() < 1e-9, "rho={rho}: {v} vs {exact}");
            let fine = cell_prob_with_order(&p, &[(-INF, 0.0), (-INF, 0.0)], 128).unwrap();
            assert!((fine - exact).abs() < 1e-11, "rho={rho}: {fine} vs {exact}");
        }
    }

    #[test]
    fn rejects_non_pd() {
        let s = Mat::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(GaussianPrior::new(Vector::zeros(2), s).is_err());
    }

    #[test]
    fn diagonal_product() {
        let s = Mat::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]);
        let p = GaussianPrior::new(Vector::zeros(2), s).unwrap();
        let v = cell_prob(&p, &[(0.0, INF), (-INF, 0.0)]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }
}
