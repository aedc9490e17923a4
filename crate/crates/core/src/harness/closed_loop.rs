use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::config::{ExperimentConfig, GammaMode};
use super::rng::{stream_rng, Purpose};
use crate::control::{control_input, kf_predict, kf_update, op_g, KalmanState, PlantState, Vector};
use crate::error::{Error, Result};
use crate::polar::{ChannelConfig, Codebook, Decoder};
use crate::quant::{prior_table, GaussianPrior, PriorTable};

/// A trial whose state norm exceeds this is declared diverged.
pub const DIVERGENCE_LIMIT: f64 = 1e9;

/// Which decision feeds the estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderRule {
    Map,
    Ml,
    /// Error-free link; gives the `γ ≡ 1` estimation floor.
    Genie,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopOptions {
    pub rule: DecoderRule,
    pub gamma: GammaMode,
    /// Replace the Kalman prior by the uniform one (MAP then equals ML).
    pub flat_prior: bool,
    /// Keep the post-warmup trajectory.
    pub record: bool,
}

impl LoopOptions {
    pub fn new(rule: DecoderRule, gamma: GammaMode) -> Self {
        Self { rule, gamma, flat_prior: false, record: false }
    }
}

/// Pooled counters over post-warmup steps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialAccumulator {
    pub trials: u64,
    pub block_errors: u64,
    pub blocks: u64,
    /// `Σ ‖x − x̂‖²`.
    pub sum_sq_err: f64,
    pub samples: u64,
    /// Steps entered with the previous packet received (chain state `S_0`).
    pub s0_visits: u64,
    /// Of those, steps whose packet was lost.
    pub s0_to_s1: u64,
    /// Wrong decisions accepted with `γ = 1`.
    pub undetected: u64,
    pub diverged: u64,
}

impl TrialAccumulator {
    /// Folds `other` into `self`; merging in a fixed order keeps the float sum
    /// reproducible.
    pub fn merge(&mut self, other: &Self) {
        self.trials += other.trials;
        self.block_errors += other.block_errors;
        self.blocks += other.blocks;
        self.sum_sq_err += other.sum_sq_err;
        self.samples += other.samples;
        self.s0_visits += other.s0_visits;
        self.s0_to_s1 += other.s0_to_s1;
        self.undetected += other.undetected;
        self.diverged += other.diverged;
    }

    pub fn bler(&self) -> f64 {
        if self.blocks == 0 {
            f64::NAN
        } else {
            self.block_errors as f64 / self.blocks as f64
        }
    }

    /// Binomial standard error `√(p̂(1 − p̂)/blocks)`.
    pub fn bler_se(&self) -> f64 {
        let p = self.bler();
        (p * (1.0 - p) / self.blocks as f64).sqrt()
    }

    /// Empirical `S_0 → S_1` transition frequency.
    pub fn p01(&self) -> f64 {
        if self.s0_visits == 0 {
            f64::NAN
        } else {
            self.s0_to_s1 as f64 / self.s0_visits as f64
        }
    }
}

/// `√(sum_sq_err / samples)`.
pub fn rmse(acc: &TrialAccumulator) -> Result<f64> {
    if acc.samples == 0 {
        return Err(Error::Invalid("RMSE needs at least one sample".into()));
    }
    Ok((acc.sum_sq_err / acc.samples as f64).sqrt())
}

/// Post-warmup trajectory of one trial.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrialRecord {
    pub x: Vec<Vector>,
    pub x_hat: Vec<Vector>,
    pub sent: Vec<u64>,
    pub decoded: Vec<u64>,
    pub gamma: Vec<bool>,
}

/// Closed-loop Monte Carlo engine for one experiment.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: ExperimentConfig,
    book: Codebook,
    uniform: PriorTable,
}

impl Simulator {
    pub fn new(cfg: ExperimentConfig) -> Result<Self> {
        let book = Codebook::new(&cfg.code)?;
        let uniform = PriorTable::uniform(cfg.code.k_info());
        Ok(Self { cfg, book, uniform })
    }

    pub fn config(&self) -> &ExperimentConfig {
        &self.cfg
    }

    pub fn codebook(&self) -> &Codebook {
        &self.book
    }

    /// One trial. Plant and channel noise come from separate streams keyed by
    /// `(seed, snr, trial)`, so loops with different decoder rules see the
    /// same noise realizations.
    pub fn run_trial(&self, snr_db: f64, trial: u64, opts: &LoopOptions) -> Result<(TrialAccumulator, Option<TrialRecord>)> {
        let cfg = &self.cfg;
        let model = &cfg.plant;
        let quant = &cfg.quant;
        let code = &cfg.code;
        let ch = ChannelConfig::from_snr_db(snr_db)?;
        let noise_std = ch.noise_std();
        let n = code.n_code();
        let mut plant_rng = stream_rng(cfg.sim.seed, snr_db, trial, Purpose::Plant);
        let mut chan_rng = stream_rng(cfg.sim.seed, snr_db, trial, Purpose::Channel);
        let mut decoder = Decoder::new(&self.book);

        let mut acc = TrialAccumulator { trials: 1, ..Default::default() };
        let mut record = opts.record.then(TrialRecord::default);
        let mut r = vec![0.0; n];

        let mut state = PlantState::new(cfg.x0.clone());
        let mut kf = KalmanState::new(cfg.x0.clone(), cfg.p0.clone());
        let mut u = control_input(model, &kf.x_hat)?;
        state = model.advance(&state, &u, &mut plant_rng)?;
        let mut prev_gamma = true;

        for step in 0..cfg.sim.steps_per_trial {
            kf = kf_predict(model, &kf, &u)?;
            let y = model.measure(&state, &mut plant_rng);
            let cell = quant.cell_of(&y)?;
            let sent = quant.payload_of(&cell);

            let decoded = match opts.rule {
                DecoderRule::Genie => sent,
                rule => {
                    let cw = self.book.codeword(sent);
                    for (i, ri) in r.iter_mut().enumerate() {
                        let bit = (cw[i / 64] >> (i % 64)) & 1;
                        let t = if bit == 1 { -1.0 } else { 1.0 };
                        *ri = t + noise_std * chan_rng.sample::<f64, _>(StandardNormal);
                    }
                    match rule {
                        DecoderRule::Ml => decoder.ml(&r)?,
                        _ if opts.flat_prior => decoder.map(&r, &ch, &self.uniform)?,
                        _ => {
                            let mu = model.c() * &kf.x_pred;
                            let prior = GaussianPrior::new(mu, op_g(model, &kf.p_pred)?)?;
                            let table = prior_table(quant, &prior, cfg.sim.eps_mass)?;
                            decoder.map(&r, &ch, &table)?
                        }
                    }
                }
            };
            let error = decoded != sent;
            let gamma = match opts.gamma {
                GammaMode::Genie => !error,
                GammaMode::Crc => code.crc().check(&code.extended_bits(decoded))?,
            };
            let q_hat = quant.cell_midpoint(&quant.cell_of_payload(decoded));
            kf = kf_update(model, &kf, &q_hat, gamma)?;

            let x_norm = state.x.norm();
            if !x_norm.is_finite() || x_norm > DIVERGENCE_LIMIT || kf.x_hat.iter().any(|v| !v.is_finite()) {
                let acc = TrialAccumulator { trials: 1, diverged: 1, ..Default::default() };
                return Ok((acc, None));
            }
            if step >= cfg.sim.warmup_steps {
                acc.blocks += 1;
                acc.block_errors += error as u64;
                acc.undetected += (error && gamma) as u64;
                if prev_gamma {
                    acc.s0_visits += 1;
                    acc.s0_to_s1 += (!gamma) as u64;
                }
                acc.sum_sq_err += (&state.x - &kf.x_hat).norm_squared();
                acc.samples += 1;
                if let Some(rec) = record.as_mut() {
                    rec.x.push(state.x.clone());
                    rec.x_hat.push(kf.x_hat.clone());
                    rec.sent.push(sent);
                    rec.decoded.push(decoded);
                    rec.gamma.push(gamma);
                }
            }
            prev_gamma = gamma;

            u = control_input(model, &kf.x_hat)?;
            state = model.advance(&state, &u, &mut plant_rng)?;
        }
        Ok((acc, record))
    }

    /// All trials at one SNR, spread over the current rayon pool and merged in
    /// trial order.
    pub fn run(&self, snr_db: f64, opts: &LoopOptions) -> Result<TrialAccumulator> {
        let parts: Vec<TrialAccumulator> = (0..self.cfg.sim.trials as u64)
            .into_par_iter()
            .map(|t| self.run_trial(snr_db, t, &LoopOptions { record: false, ..*opts }).map(|r| r.0))
            .collect::<Result<_>>()?;
        let mut total = TrialAccumulator::default();
        for p in &parts {
            total.merge(p);
        }
        Ok(total)
    }
}
