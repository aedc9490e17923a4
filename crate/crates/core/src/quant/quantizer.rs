use crate::control::Vector;
use crate::error::{Error, Result};

/// Half-open interval `[lo, hi)`; boundary cells use infinite ends.
pub type Interval = (f64, f64);

/// Per-dimension cell indices `β(y_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex(pub Vec<u32>);

/// `n`-bit uniform quantizer over `Ny` output dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct Quantizer {
    z_range: f64,
    n_bits: u32,
    n_y: usize,
    delta: f64,
    z0: f64,
}

impl Quantizer {
    pub fn new(z_range: f64, n_bits: u32, n_y: usize) -> Result<Self> {
        if !(z_range > 0.0) || !z_range.is_finite() {
            return Err(Error::Quantizer(format!("range Z must be positive and finite, got {z_range}")));
        }
        if !(1..=31).contains(&n_bits) {
            return Err(Error::Quantizer(format!("bit width must be in 1..=31, got {n_bits}")));
        }
        if n_y == 0 || n_y * n_bits as usize > 64 {
            return Err(Error::Quantizer(format!(
                "Ny * n must be in 1..=64 to fit a payload word, got {n_y} * {n_bits}"
            )));
        }
        let delta = z_range / (1u64 << (n_bits - 1)) as f64;
        Ok(Self { z_range, n_bits, n_y, delta, z0: -z_range - delta / 2.0 })
    }

    pub fn z_range(&self) -> f64 {
        self.z_range
    }
    pub fn n_bits(&self) -> u32 {
        self.n_bits
    }
    pub fn n_y(&self) -> usize {
        self.n_y
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn z0(&self) -> f64 {
        self.z0
    }
    /// Cells per dimension, `2^n`.
    pub fn levels(&self) -> u32 {
        1u32 << self.n_bits
    }
    /// Payload length `Ny n`.
    pub fn payload_bits(&self) -> usize {
        self.n_y * self.n_bits as usize
    }

    /// Edge `z_l = z₀ + l Δ`.
    pub fn edge(&self, l: u32) -> f64 {
        self.z0 + l as f64 * self.delta
    }

    pub fn midpoint(&self, l: u32) -> f64 {
        self.z0 + (l as f64 + 0.5) * self.delta
    }

    /// Cell index of `x`, saturating at the outer cells.
    pub fn beta(&self, x: f64) -> u32 {
        let top = self.levels() - 1;
        if x.is_nan() {
            return 0;
        }
        let t = ((x - self.z0) / self.delta).floor();
        if t <= 0.0 {
            return 0;
        }
        if t >= top as f64 {
            return top;
        }
        let mut l = t as u32;
        // Division rounding can land one cell off near an edge.
        if l > 0 && x < self.edge(l) {
            l -= 1;
        } else if l < top && x >= self.edge(l + 1) {
            l += 1;
        }
        l
    }

    /// Reproduction point `α(x) = z_{β(x)} + Δ/2`.
    pub fn alpha(&self, x: f64) -> f64 {
        self.midpoint(self.beta(x))
    }

    pub fn cell_of(&self, y: &Vector) -> Result<CellIndex> {
        if y.len() != self.n_y {
            return Err(Error::dim("quantizer input", self.n_y, y.len()));
        }
        Ok(CellIndex(y.iter().map(|&v| self.beta(v)).collect()))
    }

    /// `(α(y), b)` where `b` concatenates the MSB-first cell indices in
    /// dimension order.
    pub fn quantize_output(&self, y: &Vector) -> Result<(Vector, Vec<u8>)> {
        let cell = self.cell_of(y)?;
        let q = self.cell_midpoint(&cell);
        let bits = bits_of_index(self.payload_of(&cell), self.payload_bits())?;
        Ok((q, bits))
    }

    pub fn cell_midpoint(&self, cell: &CellIndex) -> Vector {
        Vector::from_iterator(cell.0.len(), cell.0.iter().map(|&l| self.midpoint(l)))
    }

    /// Payload integer of a cell: dimension-major concatenation, first
    /// dimension in the most significant bits.
    pub fn payload_of(&self, cell: &CellIndex) -> u64 {
        cell.0
            .iter()
            .fold(0u64, |acc, &l| (acc << self.n_bits) | l as u64)
    }

    pub fn cell_of_payload(&self, payload: u64) -> CellIndex {
        let mask = (self.levels() - 1) as u64;
        let n = self.n_bits as usize;
        CellIndex(
            (0..self.n_y)
                .map(|j| ((payload >> (n * (self.n_y - 1 - j))) & mask) as u32)
                .collect(),
        )
    }

    pub fn is_valid_cell(&self, cell: &CellIndex) -> bool {
        cell.0.len() == self.n_y && cell.0.iter().all(|&l| l < self.levels())
    }

    /// Integration rectangle of a cell; the outer cells extend to ±∞ so the
    /// cells partition the real line in every dimension.
    pub fn cell_rect(&self, cell: &CellIndex) -> Result<Vec<Interval>> {
        if !self.is_valid_cell(cell) {
            return Err(Error::Quantizer(format!("cell {:?} out of range", cell.0)));
        }
        let top = self.levels() - 1;
        Ok(cell
            .0
            .iter()
            .map(|&l| {
                let lo = if l == 0 { f64::NEG_INFINITY } else { self.edge(l) };
                let hi = if l == top { f64::INFINITY } else { self.edge(l + 1) };
                (lo, hi)
            })
            .collect())
    }
}

/// MSB-first binary expansion of `m` on `n` bits.
pub fn bits_of_index(m: u64, n: usize) -> Result<Vec<u8>> {
    if n > 64 || (n < 64 && m >> n != 0) {
        return Err(Error::Invalid(format!("index {m} does not fit in {n} bits")));
    }
    Ok((0..n).rev().map(|i| ((m >> i) & 1) as u8).collect())
}

/// Inverse of [`bits_of_index`].
pub fn index_of_bits(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | (b & 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn paper_scale_examples() {
        let q = Quantizer::new(5.0, 16, 1).unwrap();
        assert_eq!(q.beta(0.0), 32768);
        assert_eq!(q.alpha(0.0), 0.0);
        assert_eq!(q.beta(q.z0()), 0);
        assert_eq!(q.beta(q.z0() + 65536.0 * q.delta() + 1.0), 65535);
        assert_eq!(q.beta(-1e300), 0);
        let l = 1234;
        assert_eq!(q.beta(q.edge(l)), l);
        assert_eq!(q.alpha(q.edge(l)), q.edge(l) + q.delta() / 2.0);
    }

    #[test]
    fn bit_expansion() {
        assert_eq!(bits_of_index(0, 3).unwrap(), vec![0, 0, 0]);
        assert_eq!(bits_of_index(5, 4).unwrap(), vec![0, 1, 0, 1]);
        assert!(bits_of_index(16, 4).is_err());
        for n in 1..=12usize {
            for m in 0..(1u64 << n) {
                assert_eq!(index_of_bits(&bits_of_index(m, n).unwrap()), m);
            }
        }
    }

    #[test]
    fn zero_output_blocks() {
        let q = Quantizer::new(5.0, 8, 2).unwrap();
        let (qv, bits) = q.quantize_output(&Vector::zeros(2)).unwrap();
        assert_eq!(qv, Vector::zeros(2));
        assert_eq!(index_of_bits(&bits[..8]), 128);
        assert_eq!(index_of_bits(&bits[8..]), 128);
        let cell = CellIndex(vec![3, 200]);
        assert_eq!(q.cell_of_payload(q.payload_of(&cell)), cell);
    }

    #[test]
    fn rect_partition() {
        let q = Quantizer::new(1.0, 3, 1).unwrap();
        let rects: Vec<Interval> = (0..8).map(|l| q.cell_rect(&CellIndex(vec![l])).unwrap()[0]).collect();
        assert_eq!(rects[0].0, f64::NEG_INFINITY);
        assert_eq!(rects[7].1, f64::INFINITY);
        for w in rects.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        assert!((rects[3].1 - rects[3].0 - q.delta()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn midpoint_within_half_step(x in -5.0f64..5.0) {
            let q = Quantizer::new(5.0, 10, 1).unwrap();
            if x >= q.z0() && x < q.edge(q.levels()) {
                prop_assert!((q.alpha(x) - x).abs() <= q.delta() / 2.0 + 1e-12);
                let l = q.beta(x);
                prop_assert!(q.edge(l) <= x && x < q.edge(l + 1));
            }
            prop_assert_eq!(q.beta(q.alpha(x)), q.beta(x));
        }
    }
}
