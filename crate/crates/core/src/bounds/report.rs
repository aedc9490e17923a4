use rayon::prelude::*;

use super::conditional::{check_layout, limiting_bounds};
use super::interval::BoundInterval;
use super::markov::{corollary_approx, markov_map_bounds, simplified_bounds};
use super::ranged::transition_prob_bounds;
use crate::control::{solve_riccati, PlantModel, RiccatiSolution, RICCATI_MAX_ITER, RICCATI_TOL};
use crate::error::{Error, Result};
use crate::polar::{ml_union_bound, normal_approximation, weight_table, ChannelConfig, PolarCode, WeightTable};
use crate::quant::{Quantizer, DEFAULT_EPS_MASS};

/// Settings for the transition and Markov-chain bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarkovBoundConfig {
    /// Number of explicit `η` terms.
    pub i_max: usize,
    /// Grid points per output dimension for the scan over `μ ∈ [-Z, Z)`.
    pub mu_points: usize,
    /// Prior-table truncation mass.
    pub eps_mass: f64,
}

impl Default for MarkovBoundConfig {
    fn default() -> Self {
        Self { i_max: 5, mu_points: 1024, eps_mass: DEFAULT_EPS_MASS }
    }
}

/// Everything the bound calculators share across SNR points.
#[derive(Debug, Clone)]
pub struct BoundContext {
    pub model: PlantModel,
    pub quant: Quantizer,
    pub code: PolarCode,
    pub weights: WeightTable,
    pub riccati: RiccatiSolution,
    pub cfg: MarkovBoundConfig,
}

impl BoundContext {
    pub fn new(model: PlantModel, quant: Quantizer, code: PolarCode, cfg: MarkovBoundConfig) -> Result<Self> {
        if cfg.i_max == 0 {
            return Err(Error::Invalid("i_max must be at least 1".into()));
        }
        let weights = weight_table(&code)?;
        check_layout(&weights, &quant)?;
        let riccati = solve_riccati(&model, RICCATI_TOL, RICCATI_MAX_ITER)?;
        Ok(Self { model, quant, code, weights, riccati, cfg })
    }
}

/// Every bound at one SNR. The Markov-chain bounds need a square output
/// matrix and are `None` otherwise.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub snr_db: f64,
    pub theorem1: BoundInterval,
    /// Transition bounds for `S_0 .. S_{i_max}`, capped at the union bound.
    pub transitions: Option<Vec<BoundInterval>>,
    pub theorem2: Option<BoundInterval>,
    pub theorem3: Option<BoundInterval>,
    pub corollary1: Option<BoundInterval>,
    /// ML union bound `P̄`; may exceed 1.
    pub union_bound: f64,
    pub normal_approx: f64,
    /// `P̄ ≥ 1`, so the simplified bound is `[0, 1]`.
    pub theorem3_vacuous: bool,
}

pub fn evaluate_bounds(ctx: &BoundContext, snr_db: f64) -> Result<BoundReport> {
    let ch = ChannelConfig::from_snr_db(snr_db)?;
    let theorem1 = limiting_bounds(&ctx.model, &ctx.riccati, &ctx.weights, &ch, &ctx.quant, ctx.cfg.eps_mass)?;
    let union_bound = ml_union_bound(&ctx.weights, &ch);
    let normal_approx = if ctx.code.k_info() < ctx.code.n_code() {
        normal_approximation(ctx.code.n_code(), ctx.code.k_info(), &ch)?
    } else {
        f64::NAN
    };
    let mut report = BoundReport {
        snr_db,
        theorem1,
        transitions: None,
        theorem2: None,
        theorem3: None,
        corollary1: None,
        union_bound,
        normal_approx,
        theorem3_vacuous: union_bound >= 1.0,
    };
    if ctx.model.c().nrows() != ctx.model.c().ncols() {
        return Ok(report);
    }
    let raw: Vec<BoundInterval> = (0..=ctx.cfg.i_max)
        .into_par_iter()
        .map(|i| {
            transition_prob_bounds(&ctx.model, &ctx.riccati, &ctx.weights, &ch, &ctx.quant, i, &ctx.cfg)
                .map(|t| t.interval)
        })
        .collect::<Result<_>>()?;
    // A correct-prior MAP decoder errs no more often than ML, so every
    // transition is also bounded by the ML union bound.
    let capped: Vec<BoundInterval> = raw
        .iter()
        .map(|b| {
            let hi = b.raw_hi.min(union_bound);
            BoundInterval::new(b.lo.min(hi), hi)
        })
        .collect::<Result<_>>()?;
    let tail = BoundInterval::new(0.0, union_bound)?;
    report.theorem2 = Some(markov_map_bounds(&capped, tail)?);
    report.theorem3 = Some(simplified_bounds(capped[0], union_bound));
    report.corollary1 = Some(corollary_approx(capped[0]));
    report.transitions = Some(capped);
    Ok(report)
}
