use super::closed_loop::{rmse, DecoderRule, LoopOptions, Simulator, TrialAccumulator};
use super::config::ExperimentConfig;
use crate::bounds::{evaluate_bounds, BoundContext, BoundReport};
use crate::error::Result;

/// Simulation and bound results at one SNR.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub snr_db: f64,
    pub map: Option<TrialAccumulator>,
    pub ml: Option<TrialAccumulator>,
    pub bounds: BoundReport,
}

impl SweepRow {
    pub fn bler_map(&self) -> f64 {
        self.map.as_ref().map_or(f64::NAN, |a| a.bler())
    }
    pub fn bler_ml(&self) -> f64 {
        self.ml.as_ref().map_or(f64::NAN, |a| a.bler())
    }
    pub fn rmse_map(&self) -> f64 {
        self.map.as_ref().and_then(|a| rmse(a).ok()).unwrap_or(f64::NAN)
    }
    pub fn rmse_ml(&self) -> f64 {
        self.ml.as_ref().and_then(|a| rmse(a).ok()).unwrap_or(f64::NAN)
    }
    /// Diverged trials summed over the decoders that ran.
    pub fn diverged(&self) -> u64 {
        self.map.as_ref().map_or(0, |a| a.diverged) + self.ml.as_ref().map_or(0, |a| a.diverged)
    }
    pub fn undetected(&self) -> u64 {
        self.map.as_ref().map_or(0, |a| a.undetected) + self.ml.as_ref().map_or(0, |a| a.undetected)
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub config: ExperimentConfig,
    pub rows: Vec<SweepRow>,
}

fn bound_context(cfg: &ExperimentConfig) -> Result<BoundContext> {
    BoundContext::new(cfg.plant.clone(), cfg.quant.clone(), cfg.code.clone(), cfg.bounds)
}

/// Bounds only, one report per SNR of the grid.
pub fn run_bounds(cfg: &ExperimentConfig) -> Result<Vec<BoundReport>> {
    let ctx = bound_context(cfg)?;
    cfg.sim.snr_db.iter().map(|&s| evaluate_bounds(&ctx, s)).collect()
}

/// Monte Carlo for each requested decoder plus the bounds, per SNR. MAP and ML
/// share noise realizations trial by trial.
pub fn sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    let sim = Simulator::new(cfg.clone())?;
    let ctx = bound_context(cfg)?;
    let mut rows = Vec::with_capacity(cfg.sim.snr_db.len());
    for &snr_db in &cfg.sim.snr_db {
        let run = |rule| sim.run(snr_db, &LoopOptions::new(rule, cfg.sim.gamma_mode));
        let map = cfg.sim.decoder.runs_map().then(|| run(DecoderRule::Map)).transpose()?;
        let ml = cfg.sim.decoder.runs_ml().then(|| run(DecoderRule::Ml)).transpose()?;
        let bounds = evaluate_bounds(&ctx, snr_db)?;
        rows.push(SweepRow { snr_db, map, ml, bounds });
    }
    Ok(SweepResult { config: cfg.clone(), rows })
}
