use super::gaussian::{cell_prob, GaussianPrior};
use super::quantizer::{CellIndex, Quantizer};
use crate::error::{Error, Result};

pub const DEFAULT_EPS_MASS: f64 = 1e-10;

/// Truncated prior over payloads: the cells holding all but `eps_mass` of the
/// Gaussian mass, each with its exact cell probability.
#[derive(Debug, Clone, Default)]
pub struct PriorTable {
    /// `(payload, P^b)` in enumeration order.
    pub entries: Vec<(u64, f64)>,
    pub covered_mass: f64,
}

impl PriorTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Uniform prior over every payload of `k` bits.
    pub fn uniform(k: usize) -> Self {
        let n = 1u64 << k;
        let p = 1.0 / n as f64;
        Self { entries: (0..n).map(|b| (b, p)).collect(), covered_mass: 1.0 }
    }

    pub fn get(&self, payload: u64) -> Option<f64> {
        self.entries.iter().find(|e| e.0 == payload).map(|e| e.1)
    }

    /// Entries sorted by payload.
    pub fn sorted(&self) -> Vec<(u64, f64)> {
        let mut v = self.entries.clone();
        v.sort_by_key(|e| e.0);
        v
    }
}

/// Enumerates cells in Chebyshev rings around the cell containing `μ` until
/// the covered mass reaches `1 - eps_mass` or the grid is exhausted.
pub fn prior_table(q: &Quantizer, prior: &GaussianPrior, eps_mass: f64) -> Result<PriorTable> {
    if !(eps_mass > 0.0 && eps_mass < 1.0) {
        return Err(Error::Invalid(format!("eps_mass must lie in (0, 1), got {eps_mass}")));
    }
    if prior.dim() != q.n_y() {
        return Err(Error::dim("prior_table prior", q.n_y(), prior.dim()));
    }
    let centre = q.cell_of(prior.mu())?;
    let levels = q.levels() as i64;
    let max_radius = centre
        .0
        .iter()
        .map(|&c| (c as i64).max(levels - 1 - c as i64))
        .max()
        .unwrap_or(0);
    let mut table = PriorTable::default();
    let mut covered = 0.0;
    let ny = q.n_y();
    let mut offsets = vec![0i64; ny];
    for radius in 0..=max_radius {
        // Visit every offset with Chebyshev norm exactly `radius`.
        ring_offsets(ny, radius, &mut offsets, 0, false, &mut |off| {
            let mut idx = Vec::with_capacity(ny);
            for (c, o) in centre.0.iter().zip(off) {
                let l = *c as i64 + o;
                if l < 0 || l >= levels {
                    return Ok(());
                }
                idx.push(l as u32);
            }
            let cell = CellIndex(idx);
            let p = cell_prob(prior, &q.cell_rect(&cell)?)?;
            if p > 0.0 {
                table.entries.push((q.payload_of(&cell), p));
                covered += p;
            }
            Ok(())
        })?;
        if covered >= 1.0 - eps_mass {
            break;
        }
    }
    table.covered_mass = covered.min(1.0);
    Ok(table)
}

fn ring_offsets(
    ny: usize,
    radius: i64,
    off: &mut [i64],
    j: usize,
    on_ring: bool,
    visit: &mut impl FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    if j == ny {
        if on_ring || radius == 0 {
            visit(off)?;
        }
        return Ok(());
    }
    for o in -radius..=radius {
        // The last dimension must hit the ring if no earlier one did.
        if j + 1 == ny && !on_ring && o.abs() != radius {
            continue;
        }
        off[j] = o;
        ring_offsets(ny, radius, off, j + 1, on_ring || o.abs() == radius, visit)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{Mat, Vector};

    #[test]
    fn concentrated_prior_is_one_cell() {
        let q = Quantizer::new(1.0, 8, 1).unwrap();
        let mu = q.midpoint(77);
        let p = GaussianPrior::new(Vector::from_element(1, mu), Mat::from_element(1, 1, 1e-16)).unwrap();
        let t = prior_table(&q, &p, 1e-10).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.entries[0].0, 77);
        assert!((t.entries[0].1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sigma_equal_to_step() {
        let q = Quantizer::new(1.0, 8, 1).unwrap();
        let d = q.delta();
        let p = GaussianPrior::new(Vector::zeros(1), Mat::from_element(1, 1, d * d)).unwrap();
        let t = prior_table(&q, &p, 1e-6).unwrap();
        assert!(t.covered_mass >= 1.0 - 1e-6);
        assert!(t.covered_mass <= 1.0 + 1e-9);
        // ±5 cells reach beyond 4.89σ, which is where 1e-6 of mass remains.
        assert!((9..=13).contains(&t.len()), "{}", t.len());
    }

    #[test]
    fn ring_enumeration_two_dims() {
        let q = Quantizer::new(1.0, 4, 2).unwrap();
        let s = Mat::from_row_slice(2, 2, &[0.04, 0.01, 0.01, 0.03]);
        let p = GaussianPrior::new(Vector::from_vec(vec![0.05, -0.1]), s).unwrap();
        let t = prior_table(&q, &p, 1e-10).unwrap();
        let mut payloads: Vec<u64> = t.entries.iter().map(|e| e.0).collect();
        payloads.sort();
        payloads.dedup();
        assert_eq!(payloads.len(), t.len());
        assert!(t.covered_mass > 1.0 - 1e-9);
    }
}
