use super::code::PolarCode;
use crate::error::{Error, Result};

/// Weight enumeration covers at most `2^WEIGHT_BUDGET_BITS` payload differences.
pub const WEIGHT_BUDGET_BITS: usize = 26;

/// Codeword weight of every payload difference. By linearity the distance
/// between the codewords of `b₁` and `b₂` is `weight(b₁ ⊕ b₂)`.
#[derive(Debug, Clone)]
pub struct WeightTable {
    n_code: usize,
    k_info: usize,
    weights: Vec<u16>,
    enumerator: Vec<u64>,
}

impl WeightTable {
    pub fn n_code(&self) -> usize {
        self.n_code
    }
    pub fn k_info(&self) -> usize {
        self.k_info
    }
    /// Hamming weight of the codeword of payload difference `e`.
    pub fn weight(&self, e: u64) -> usize {
        self.weights[e as usize] as usize
    }
    /// `A_d`: number of nonzero differences with weight `d`, for `d = 0..=N`.
    pub fn enumerator(&self) -> &[u64] {
        &self.enumerator
    }
    /// Smallest nonzero codeword weight.
    pub fn min_distance(&self) -> usize {
        self.enumerator.iter().position(|&a| a > 0).unwrap_or(0)
    }
    /// `(d, A_d)` for every weight that occurs.
    pub fn spectrum(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.enumerator.iter().enumerate().filter(|(_, &a)| a > 0).map(|(d, &a)| (d, a))
    }
}

/// Enumerates all payload differences in Gray-code order, updating the
/// codeword by one basis vector per step.
pub fn weight_table(code: &PolarCode) -> Result<WeightTable> {
    let k = code.k_info();
    if k > WEIGHT_BUDGET_BITS {
        return Err(Error::Budget { what: "weight enumeration", bits: k, limit: WEIGHT_BUDGET_BITS });
    }
    let words = code.words();
    let basis: Vec<Vec<u64>> = (0..k).map(|t| code.encode_payload(1u64 << t)).collect();
    let count = 1usize << k;
    let mut weights = vec![0u16; count];
    let mut enumerator = vec![0u64; code.n_code() + 1];
    let mut cw = vec![0u64; words];
    for i in 1..count {
        let flip = i.trailing_zeros() as usize;
        for w in 0..words {
            cw[w] ^= basis[flip][w];
        }
        let gray = i ^ (i >> 1);
        let d: u32 = cw.iter().map(|w| w.count_ones()).sum();
        weights[gray] = d as u16;
        enumerator[d as usize] += 1;
    }
    Ok(WeightTable { n_code: code.n_code(), k_info: k, weights, enumerator })
}
