use super::interval::BoundInterval;
use crate::error::{Error, Result};

/// `1 + Σ_{i=1}^{m} Π_{j=1}^{i} p_j`, completed by a geometric tail in which
/// every later transition equals `tail`.
fn eta(p: &[f64], tail: f64) -> f64 {
    let mut sum = 1.0;
    let mut prod = 1.0;
    for &pj in p {
        prod *= pj;
        sum += prod;
    }
    if prod == 0.0 || tail == 0.0 {
        return sum;
    }
    if tail >= 1.0 {
        return f64::INFINITY;
    }
    sum + prod * tail / (1.0 - tail)
}

/// Bounds on the stationary loss probability `1 - π(S₀)` of the
/// consecutive-loss chain.
///
/// `transitions[0]` bounds `P(S₀→S₁)` and `transitions[i]` bounds
/// `P(S_i→S_{i+1})` for `i = 1..=i_max`; `tail` bounds every transition
/// beyond `i_max`. With `η̲, η̄` the truncated series completed by the tail,
/// the result is `[P̲₀₁η̲ / (1 + P̄₀₁η̄), P̄₀₁η̄ / (1 + P̲₀₁η̲)]`.
pub fn markov_map_bounds(transitions: &[BoundInterval], tail: BoundInterval) -> Result<BoundInterval> {
    let (first, rest) = transitions
        .split_first()
        .ok_or_else(|| Error::Invalid("markov_map_bounds needs at least the S0 -> S1 transition".into()))?;
    if tail.lo >= 1.0 {
        return Err(Error::Invalid("tail lower bound must be below 1".into()));
    }
    let lo_p: Vec<f64> = rest.iter().map(|b| b.lo).collect();
    let hi_p: Vec<f64> = rest.iter().map(|b| b.hi).collect();
    let eta_lo = eta(&lo_p, tail.lo);
    let eta_hi = eta(&hi_p, tail.hi);
    let (p_lo, p_hi) = (first.lo, first.hi);
    let lo = if p_lo == 0.0 || (eta_hi.is_infinite() && p_hi > 0.0) {
        0.0
    } else {
        p_lo * eta_lo / (1.0 + p_hi * eta_hi)
    };
    let hi = if p_hi == 0.0 {
        0.0
    } else if eta_hi.is_infinite() {
        f64::INFINITY
    } else {
        p_hi * eta_hi / (1.0 + p_lo * eta_lo)
    };
    BoundInterval::new(lo, hi)
}

/// `[(1 − P̄) P̲₀₁, P̄₀₁ / (1 − P̄)]` for a uniform transition bound `P̄`;
/// vacuous when `P̄ ≥ 1`.
pub fn simplified_bounds(p01: BoundInterval, p_bar: f64) -> BoundInterval {
    if !(p_bar < 1.0) {
        return BoundInterval::vacuous();
    }
    let p_bar = p_bar.max(0.0);
    let hi = p01.hi / (1.0 - p_bar);
    BoundInterval { lo: (1.0 - p_bar) * p01.lo, hi: hi.min(1.0), raw_hi: hi }
}

/// First-order approximation `P̲₀₁ ≲ P ≲ P̄₀₁`, valid when transitions are small.
pub fn corollary_approx(p01: BoundInterval) -> BoundInterval {
    p01
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(p: f64) -> BoundInterval {
        BoundInterval::exact(p).unwrap()
    }

    #[test]
    fn constant_chain_identity() {
        for p in [0.01, 0.05, 0.2] {
            let t = vec![ex(p); 6];
            let b = markov_map_bounds(&t, ex(p)).unwrap();
            assert!((b.lo - p).abs() < 1e-12 && (b.hi - p).abs() < 1e-12, "{b:?}");
        }
    }

    #[test]
    fn zero_transitions() {
        let b = markov_map_bounds(&[ex(0.0); 6], ex(0.0)).unwrap();
        assert_eq!((b.lo, b.hi), (0.0, 0.0));
        assert!(markov_map_bounds(&[], ex(0.0)).is_err());
    }

    #[test]
    fn simplified_examples() {
        let p01 = BoundInterval::new(0.01, 0.02).unwrap();
        assert_eq!(simplified_bounds(p01, 0.0), p01);
        let h = simplified_bounds(p01, 0.5);
        assert_eq!((h.lo, h.hi), (0.005, 0.04));
        assert_eq!(simplified_bounds(p01, 1.2), BoundInterval::vacuous());
        assert_eq!(corollary_approx(p01), p01);
    }

    #[test]
    fn nesting_with_capped_transitions() {
        let p_bar = 0.3;
        let t: Vec<BoundInterval> = [0.02, 0.1, 0.2, 0.25, 0.3, 0.28]
            .iter()
            .map(|&p| BoundInterval::new(p * 0.5, p).unwrap())
            .collect();
        let t2 = markov_map_bounds(&t, BoundInterval::new(0.0, p_bar).unwrap()).unwrap();
        let t3 = simplified_bounds(t[0], p_bar);
        assert!(t3.contains_interval(&t2, 1e-12), "{t3:?} vs {t2:?}");
    }
}
