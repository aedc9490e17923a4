use super::interval::BoundInterval;
use super::pep::pep_ln;
use crate::control::{op_g, op_h, PlantModel, RiccatiSolution};
use crate::error::{Error, Result};
use crate::polar::{ChannelConfig, WeightTable, EPS_FLOOR};
use crate::quant::{cell_prob, prior_table, GaussianPrior, Quantizer};

/// One transmitted-payload candidate in a bound sum. `mass_*` weight the
/// outer sum over `bt`; `w_*` bound the prior used inside the pairwise
/// likelihood ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportCell {
    pub payload: u64,
    pub mass_lo: f64,
    pub mass_hi: f64,
    pub w_lo: f64,
    pub w_hi: f64,
}

impl SupportCell {
    pub fn exact(payload: u64, p: f64) -> Self {
        Self { payload, mass_lo: p, mass_hi: p, w_lo: p, w_hi: p }
    }
}

pub(crate) fn check_layout(wt: &WeightTable, quant: &Quantizer) -> Result<()> {
    if wt.k_info() != quant.payload_bits() {
        return Err(Error::Invalid(format!(
            "code carries K = {} payload bits but the quantizer emits Ny*n = {}",
            wt.k_info(),
            quant.payload_bits()
        )));
    }
    Ok(())
}

/// Generic max/sum bound over a support set.
///
/// Lower: `Σ_{bt∈S} mass_lo(bt) · max_{be≠bt} PEP_lo(bt, be)`.
/// Upper: `Σ_{bt∈S} mass_hi(bt) · Σ_{be≠bt} PEP_hi(bt, be) + residual_hi`.
///
/// Payloads outside the support carry the decoder's floor prior. They only
/// enter through their weight class, so each `bt` costs `O(|S| + N)`.
pub(crate) fn evaluate_support(wt: &WeightTable, n0: f64, cells: &[SupportCell], residual_hi: f64) -> Result<BoundInterval> {
    let ln_floor = EPS_FLOOR.ln();
    let ln_lo: Vec<f64> = cells.iter().map(|c| c.w_lo.max(EPS_FLOOR).ln()).collect();
    let ln_hi: Vec<f64> = cells.iter().map(|c| c.w_hi.max(EPS_FLOOR).ln()).collect();
    let spectrum: Vec<(usize, u64)> = wt.spectrum().collect();
    let mut counts = vec![0u64; wt.n_code() + 1];
    let mut lb = 0.0;
    let mut ub = 0.0;
    for (t, ct) in cells.iter().enumerate() {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut max_pep = 0.0_f64;
        let mut sum_pep = 0.0;
        for (e, ce) in cells.iter().enumerate() {
            if e == t {
                continue;
            }
            let d = wt.weight(ct.payload ^ ce.payload);
            counts[d] += 1;
            max_pep = max_pep.max(pep_ln(d, n0, ln_hi[t] - ln_lo[e]));
            sum_pep += pep_ln(d, n0, ln_lo[t] - ln_hi[e]);
        }
        for &(d, a) in &spectrum {
            let rest = a.saturating_sub(counts[d]);
            if rest > 0 {
                max_pep = max_pep.max(pep_ln(d, n0, ln_hi[t] - ln_floor));
                sum_pep += rest as f64 * pep_ln(d, n0, ln_lo[t] - ln_floor);
            }
        }
        lb += ct.mass_lo * max_pep;
        ub += ct.mass_hi * sum_pep;
    }
    BoundInterval::new(lb, ub + residual_hi.max(0.0))
}

/// Conditional bounds for a known prior `N(μ, Σ)`, summing over the
/// truncated prior table. Untabled mass is added to the upper bound only.
pub fn map_bounds_conditional(
    wt: &WeightTable,
    ch: &ChannelConfig,
    quant: &Quantizer,
    prior: &GaussianPrior,
    eps_mass: f64,
) -> Result<BoundInterval> {
    check_layout(wt, quant)?;
    let table = prior_table(quant, prior, eps_mass)?;
    let cells: Vec<SupportCell> = table.entries.iter().map(|&(b, p)| SupportCell::exact(b, p)).collect();
    evaluate_support(wt, ch.n0(), &cells, 1.0 - table.covered_mass)
}

/// [`map_bounds_conditional`] on an explicit support, so that bounds for
/// different covariances can be compared term by term.
pub fn map_bounds_conditional_on(
    wt: &WeightTable,
    ch: &ChannelConfig,
    quant: &Quantizer,
    prior: &GaussianPrior,
    support: &[u64],
) -> Result<BoundInterval> {
    check_layout(wt, quant)?;
    let mut covered = 0.0;
    let mut cells = Vec::with_capacity(support.len());
    for &b in support {
        let p = cell_prob(prior, &quant.cell_rect(&quant.cell_of_payload(b))?)?;
        covered += p;
        cells.push(SupportCell::exact(b, p));
    }
    evaluate_support(wt, ch.n0(), &cells, 1.0 - covered)
}

/// Conditional bounds at the steady state `μ_ref = C x_ref`,
/// `Σ∞ = g(h(P∞))`.
pub fn limiting_bounds(
    model: &PlantModel,
    riccati: &RiccatiSolution,
    wt: &WeightTable,
    ch: &ChannelConfig,
    quant: &Quantizer,
    eps_mass: f64,
) -> Result<BoundInterval> {
    let sigma = op_g(model, &op_h(model, &riccati.p_inf)?)?;
    let prior = GaussianPrior::new(model.mu_ref(), sigma)?;
    map_bounds_conditional(wt, ch, quant, &prior, eps_mass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{Mat, Vector};
    use crate::polar::{construct_code, weight_table};
    use crate::special::q_func;

    #[test]
    fn concentrated_prior_collapses_to_single_cell() {
        let code = construct_code(16, 4, 0).unwrap();
        let wt = weight_table(&code).unwrap();
        let q = Quantizer::new(1.0, 4, 1).unwrap();
        let ch = ChannelConfig::from_n0(0.5).unwrap();
        let mu = q.midpoint(6);
        let prior = GaussianPrior::new(Vector::from_element(1, mu), Mat::from_element(1, 1, 1e-12)).unwrap();
        let b = map_bounds_conditional(&wt, &ch, &q, &prior, 1e-10).unwrap();
        // Every alternative carries the floor prior; the PEPs vanish.
        assert!(b.hi < 1e-9, "{b:?}");
    }

    #[test]
    fn equal_priors_give_union_bound() {
        let code = construct_code(16, 4, 0).unwrap();
        let wt = weight_table(&code).unwrap();
        let ch = ChannelConfig::from_n0(0.8).unwrap();
        let cells: Vec<SupportCell> = (0..16).map(|b| SupportCell::exact(b, 1.0 / 16.0)).collect();
        let b = evaluate_support(&wt, ch.n0(), &cells, 0.0).unwrap();
        let ub: f64 = wt.spectrum().map(|(d, a)| a as f64 * q_func((2.0 * d as f64 / 0.8).sqrt())).sum();
        assert!((b.raw_hi - ub).abs() < 1e-12);
        let dmin = wt.min_distance() as f64;
        assert!((b.lo - q_func((2.0 * dmin / 0.8).sqrt())).abs() < 1e-12);
    }

    #[test]
    fn direct_double_sum_oracle() {
        let code = construct_code(16, 4, 0).unwrap();
        let wt = weight_table(&code).unwrap();
        let q = Quantizer::new(1.0, 4, 1).unwrap();
        for n0 in [0.3, 3.0, 1e4] {
            let ch = ChannelConfig::from_n0(n0).unwrap();
            let prior = GaussianPrior::new(Vector::from_element(1, 0.07), Mat::from_element(1, 1, 0.04)).unwrap();
            let b = map_bounds_conditional(&wt, &ch, &q, &prior, 1e-12).unwrap();
            let probs: Vec<f64> = (0..16u64)
                .map(|l| crate::quant::cell_prob(&prior, &q.cell_rect(&q.cell_of_payload(l)).unwrap()).unwrap())
                .collect();
            let (mut lo, mut hi) = (0.0, 0.0);
            for t in 0..16usize {
                let mut mx = 0.0_f64;
                let mut sm = 0.0;
                for e in 0..16usize {
                    if e == t {
                        continue;
                    }
                    let d = wt.weight((t ^ e) as u64) as f64;
                    let pt = probs[t].max(EPS_FLOOR);
                    let pe = probs[e].max(EPS_FLOOR);
                    let v = q_func((2.0 * d / n0).sqrt() + (n0 / (8.0 * d)).sqrt() * (pt / pe).ln());
                    mx = mx.max(v);
                    sm += v;
                }
                lo += probs[t] * mx;
                hi += probs[t] * sm;
            }
            assert!((b.lo - lo).abs() < 1e-9 * lo.max(1e-12), "n0={n0}: {} vs {lo}", b.lo);
            assert!((b.raw_hi - hi).abs() < 1e-9 * hi.max(1e-3), "n0={n0}: {} vs {hi}", b.raw_hi);
        }
    }
}
