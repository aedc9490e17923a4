use super::conditional::{check_layout, evaluate_support, SupportCell};
use super::interval::BoundInterval;
use super::pep::pep_ln;
use super::report::MarkovBoundConfig;
use crate::control::{compose_pow, loewner_leq, op_g, CovMap, Mat, PlantModel, RiccatiSolution, Vector};
use crate::error::{Error, Result};
use crate::polar::{ChannelConfig, WeightTable, EPS_FLOOR};
use crate::quant::{cell_prob, prior_table, CellIndex, GaussianPrior, Quantizer};

/// Output covariance range `Σ̲ ≤ Σ ≤ Σ̄`.
#[derive(Debug, Clone)]
pub struct SigmaRange {
    lo: Mat,
    hi: Mat,
    det_lo: f64,
    det_hi: f64,
}

impl SigmaRange {
    pub fn new(lo: Mat, hi: Mat) -> Result<Self> {
        let zero = Vector::zeros(lo.nrows());
        let det_lo = GaussianPrior::new(zero.clone(), lo.clone())?.det();
        let det_hi = GaussianPrior::new(zero, hi.clone())?.det();
        let scale = crate::control::linalg::max_abs(&hi);
        if !loewner_leq(&lo, &hi, 1e-10 * scale)? {
            return Err(Error::Invalid("covariance range violates lower <= upper in Loewner order".into()));
        }
        Ok(Self { lo, hi, det_lo, det_hi })
    }

    pub fn degenerate(sigma: Mat) -> Result<Self> {
        Self::new(sigma.clone(), sigma)
    }

    pub fn lo(&self) -> &Mat {
        &self.lo
    }
    pub fn hi(&self) -> &Mat {
        &self.hi
    }
    pub fn midpoint(&self) -> Mat {
        (&self.lo + &self.hi) * 0.5
    }
    /// `(det Σ̄ / det Σ̲)^{1/2}`.
    pub fn det_factor(&self) -> f64 {
        (self.det_hi / self.det_lo).sqrt()
    }

    fn priors(&self, mu: &Vector) -> Result<(GaussianPrior, GaussianPrior)> {
        Ok((
            GaussianPrior::new(mu.clone(), self.lo.clone())?,
            GaussianPrior::new(mu.clone(), self.hi.clone())?,
        ))
    }
}

/// Covariance range after `i` consecutive losses:
/// `Σ̲ = g∘h^{i+1}(P∞)`, `Σ̄ = g∘h^{i+1}(M)` with `M = C⁻¹VC⁻ᵀ`.
pub fn sigma_range_for_state(model: &PlantModel, riccati: &RiccatiSolution, i: usize) -> Result<SigmaRange> {
    let m = model.observation_bound()?;
    let lo = op_g(model, &compose_pow(model, CovMap::H, i + 1, &riccati.p_inf)?)?;
    let hi = op_g(model, &compose_pow(model, CovMap::H, i + 1, &m)?)?;
    SigmaRange::new(lo, hi)
}

fn cell_probs(quant: &Quantizer, lo: &GaussianPrior, hi: &GaussianPrior, cell: &CellIndex) -> Result<(f64, f64)> {
    let rect = quant.cell_rect(cell)?;
    Ok((cell_prob(lo, &rect)?, cell_prob(hi, &rect)?))
}

/// `(P̲, P̄)` for one cell: `(detΣ̲/detΣ̄)^{1/2} P_{μ,Σ̲}` and
/// `(detΣ̄/detΣ̲)^{1/2} P_{μ,Σ̄}`. The upper value is not clamped.
pub fn ranged_cell_prob_bounds(range: &SigmaRange, mu: &Vector, quant: &Quantizer, cell: &CellIndex) -> Result<(f64, f64)> {
    let (lo, hi) = range.priors(mu)?;
    let (p_lo, p_hi) = cell_probs(quant, &lo, &hi, cell)?;
    let f = range.det_factor();
    Ok((p_lo / f, p_hi * f))
}

/// Pairwise error probability bounds over the range for transmitted cell
/// `cell_t` and competitor `cell_e` at codeword distance `d`.
pub fn ranged_pep_bounds(
    range: &SigmaRange,
    mu: &Vector,
    quant: &Quantizer,
    d: usize,
    n0: f64,
    cell_t: &CellIndex,
    cell_e: &CellIndex,
) -> Result<(f64, f64)> {
    if d == 0 {
        return Err(Error::Invalid("pairwise error probability needs distance d >= 1".into()));
    }
    let (t_lo, t_hi) = ranged_cell_prob_bounds(range, mu, quant, cell_t)?;
    let (e_lo, e_hi) = ranged_cell_prob_bounds(range, mu, quant, cell_e)?;
    let ln = |p: f64| p.max(EPS_FLOOR).ln();
    Ok((pep_ln(d, n0, ln(t_hi) - ln(e_lo)), pep_ln(d, n0, ln(t_lo) - ln(e_hi))))
}

/// Union of the truncated tables under `Σ̲` and `Σ̄`, sorted by payload.
pub fn ranged_support(range: &SigmaRange, mu: &Vector, quant: &Quantizer, eps_mass: f64) -> Result<Vec<u64>> {
    let (lo, hi) = range.priors(mu)?;
    let mut support: Vec<u64> = prior_table(quant, &lo, eps_mass)?
        .entries
        .into_iter()
        .chain(prior_table(quant, &hi, eps_mass)?.entries)
        .map(|e| e.0)
        .collect();
    support.sort_unstable();
    support.dedup();
    Ok(support)
}

/// Bounds on the conditional lower/upper bounds that hold for every `Σ` in
/// the range, over the support of [`ranged_support`].
pub fn ranged_map_bounds(
    range: &SigmaRange,
    mu: &Vector,
    wt: &WeightTable,
    ch: &ChannelConfig,
    quant: &Quantizer,
    eps_mass: f64,
) -> Result<BoundInterval> {
    let support = ranged_support(range, mu, quant, eps_mass)?;
    ranged_map_bounds_on(range, mu, wt, ch, quant, &support)
}

/// [`ranged_map_bounds`] on an explicit support. Mass of `P̄` outside the
/// support is added to the upper bound.
pub fn ranged_map_bounds_on(
    range: &SigmaRange,
    mu: &Vector,
    wt: &WeightTable,
    ch: &ChannelConfig,
    quant: &Quantizer,
    support: &[u64],
) -> Result<BoundInterval> {
    check_layout(wt, quant)?;
    let (lo, hi) = range.priors(mu)?;
    let f = range.det_factor();
    let mut covered_hi = 0.0;
    let mut cells = Vec::with_capacity(support.len());
    for &b in support {
        let (p_lo, p_hi) = cell_probs(quant, &lo, &hi, &quant.cell_of_payload(b))?;
        covered_hi += p_hi;
        let (m_lo, m_hi) = (p_lo / f, p_hi * f);
        cells.push(SupportCell { payload: b, mass_lo: m_lo, mass_hi: m_hi, w_lo: m_lo, w_hi: m_hi });
    }
    evaluate_support(wt, ch.n0(), &cells, f * (1.0 - covered_hi).max(0.0))
}

/// `points` evenly spaced means per dimension over `[-Z, Z)`, at cell-width
/// `2Z/points` offsets `(p + ½)`.
pub fn mu_grid(quant: &Quantizer, points: usize) -> Vec<Vector> {
    let z = quant.z_range();
    let axis: Vec<f64> = (0..points).map(|p| -z + (p as f64 + 0.5) * 2.0 * z / points as f64).collect();
    let ny = quant.n_y();
    let total = points.pow(ny as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = Vector::zeros(ny);
            for j in (0..ny).rev() {
                v[j] = axis[idx % points];
                idx /= points;
            }
            v
        })
        .collect()
}

/// Transition bounds for state `S_i` with the means where the extremes occur.
#[derive(Debug, Clone)]
pub struct TransitionBounds {
    pub interval: BoundInterval,
    pub mu_at_min: Vector,
    pub mu_at_max: Vector,
}

/// `P̲ = min_μ` of the ranged lower bound and `P̄ = max_μ` of the ranged
/// upper bound, with `μ` scanned over [`mu_grid`].
pub fn transition_prob_bounds(
    model: &PlantModel,
    riccati: &RiccatiSolution,
    wt: &WeightTable,
    ch: &ChannelConfig,
    quant: &Quantizer,
    i: usize,
    cfg: &MarkovBoundConfig,
) -> Result<TransitionBounds> {
    if cfg.mu_points == 0 {
        return Err(Error::Invalid("mu_points must be positive".into()));
    }
    let range = sigma_range_for_state(model, riccati, i)?;
    let grid = mu_grid(quant, cfg.mu_points);
    let mut lo = (f64::INFINITY, grid[0].clone());
    let mut hi = (f64::NEG_INFINITY, grid[0].clone());
    for mu in grid {
        let b = ranged_map_bounds(&range, &mu, wt, ch, quant, cfg.eps_mass)?;
        if b.lo < lo.0 {
            lo = (b.lo, mu.clone());
        }
        if b.raw_hi > hi.0 {
            hi = (b.raw_hi, mu);
        }
    }
    Ok(TransitionBounds { interval: BoundInterval::new(lo.0, hi.0)?, mu_at_min: lo.1, mu_at_max: hi.1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::map_bounds_conditional;
    use crate::control::{solve_riccati, RICCATI_MAX_ITER, RICCATI_TOL};
    use crate::polar::{construct_code, weight_table};

    fn s(v: f64) -> Mat {
        Mat::from_element(1, 1, v)
    }

    #[test]
    fn degenerate_range_equals_conditional() {
        let code = construct_code(16, 8, 0).unwrap();
        let wt = weight_table(&code).unwrap();
        let q = Quantizer::new(5.0 / 256.0, 8, 1).unwrap();
        let ch = ChannelConfig::from_snr_db(0.0).unwrap();
        let sigma = s(2.8e-7);
        let range = SigmaRange::degenerate(sigma.clone()).unwrap();
        let mu = Vector::from_element(1, 1.3e-4);
        let a = ranged_map_bounds(&range, &mu, &wt, &ch, &q, 1e-10).unwrap();
        let b = map_bounds_conditional(&wt, &ch, &q, &GaussianPrior::new(mu.clone(), sigma).unwrap(), 1e-10).unwrap();
        assert!((a.lo - b.lo).abs() <= 1e-15 * b.lo.max(1.0));
        assert!((a.raw_hi - b.raw_hi).abs() <= 1e-13 * b.raw_hi.max(1e-3));
        let (pl, ph) = ranged_cell_prob_bounds(&range, &mu, &q, &CellIndex(vec![128])).unwrap();
        assert_eq!(pl, ph);
        let (el, eh) = ranged_pep_bounds(&range, &mu, &q, 3, 1.0, &CellIndex(vec![128]), &CellIndex(vec![128])).unwrap();
        assert_eq!(el, eh);
        assert_eq!(el, crate::special::q_func((6.0f64).sqrt()));
    }

    #[test]
    fn scalar_state_ranges() {
        let m = PlantModel::scalar_reference();
        let r = solve_riccati(&m, RICCATI_TOL, RICCATI_MAX_ITER).unwrap();
        let r0 = sigma_range_for_state(&m, &r, 0).unwrap();
        let p_inf = r.p_inf[(0, 0)];
        let a2 = 1.13f64 * 1.13;
        assert!((r0.lo()[(0, 0)] - (a2 * p_inf + 2e-7)).abs() < 1e-20);
        assert!((r0.hi()[(0, 0)] - (a2 * 1e-7 + 2e-7)).abs() < 1e-20);
        let mut prev = r0.hi()[(0, 0)];
        for i in 1..6 {
            let ri = sigma_range_for_state(&m, &r, i).unwrap();
            assert!(ri.hi()[(0, 0)] > prev);
            prev = ri.hi()[(0, 0)];
        }
    }

    #[test]
    fn non_square_output_rejected() {
        let m = PlantModel::new(
            Mat::identity(2, 2) * 0.5,
            Mat::from_element(2, 1, 1.0),
            Mat::from_row_slice(1, 2, &[1.0, 0.0]),
            Mat::identity(2, 2),
            s(1.0),
            Mat::zeros(1, 2),
            Vector::zeros(2),
        )
        .unwrap();
        let r = solve_riccati(&m, RICCATI_TOL, RICCATI_MAX_ITER).unwrap();
        assert!(sigma_range_for_state(&m, &r, 0).is_err());
    }

    #[test]
    fn grid_layout() {
        let q = Quantizer::new(1.0, 2, 2).unwrap();
        let g = mu_grid(&q, 4);
        assert_eq!(g.len(), 16);
        assert_eq!(g[0], Vector::from_vec(vec![-0.75, -0.75]));
        assert_eq!(g[1], Vector::from_vec(vec![-0.75, -0.25]));
        assert_eq!(g[15], Vector::from_vec(vec![0.75, 0.75]));
    }
}
