use super::channel::ChannelConfig;
use super::code::{Codebook, PolarCode};
use crate::error::{Error, Result};
use crate::quant::PriorTable;

/// Prior assigned to payloads missing from a truncated table.
pub const EPS_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MapDecision {
    pub payload: u64,
    /// CRC check of the re-encoded decision (true when the code has no CRC).
    pub crc_ok: bool,
}

/// Exhaustive decoder with reusable scratch space. Correlations `rᵀt` for
/// every codeword are computed once per received vector through per-byte
/// lookup tables and shared by the ML and MAP rules.
#[derive(Debug, Clone)]
pub struct Decoder<'a> {
    book: &'a Codebook,
    corr: Vec<f64>,
    lut: Vec<f64>,
    sorted: Vec<(u64, f64)>,
}

impl<'a> Decoder<'a> {
    pub fn new(book: &'a Codebook) -> Self {
        let bytes = book.n_code().div_ceil(8);
        Self { book, corr: vec![0.0; book.len()], lut: vec![0.0; bytes * 256], sorted: Vec::new() }
    }

    /// Fills `corr[p] = rᵀ t(p)` with `t = 1 - 2c`.
    fn correlate(&mut self, r: &[f64]) -> Result<()> {
        let n = self.book.n_code();
        if r.len() != n {
            return Err(Error::BitLength { expected: n, got: r.len() });
        }
        let bytes = n.div_ceil(8);
        for j in 0..bytes {
            let table = &mut self.lut[j * 256..(j + 1) * 256];
            table[0] = 0.0;
            for v in 1..256usize {
                let bit = v.trailing_zeros() as usize;
                let idx = 8 * j + bit;
                let add = if idx < n { r[idx] } else { 0.0 };
                table[v] = table[v & (v - 1)] + add;
            }
        }
        let total: f64 = r.iter().sum();
        let words = self.book.words();
        for p in 0..self.book.len() {
            let cw = self.book.codeword(p as u64);
            let mut ones = 0.0;
            for (w, &word) in cw.iter().enumerate().take(words) {
                let mut x = word;
                let mut j = w * 8;
                while x != 0 {
                    ones += self.lut[j * 256 + (x & 0xFF) as usize];
                    x >>= 8;
                    j += 1;
                }
            }
            self.corr[p] = total - 2.0 * ones;
        }
        Ok(())
    }

    fn argmax_ml(&self) -> u64 {
        let mut best = 0usize;
        for p in 1..self.corr.len() {
            if self.corr[p] > self.corr[best] {
                best = p;
            }
        }
        best as u64
    }

    fn argmax_map(&mut self, n0: f64, prior: &PriorTable) -> Result<u64> {
        let count = self.corr.len() as u64;
        self.sorted.clear();
        for &(b, p) in &prior.entries {
            if b >= count {
                return Err(Error::Invalid(format!("prior payload {b} outside the {count}-payload space")));
            }
            self.sorted.push((b, p.max(EPS_FLOOR).ln()));
        }
        self.sorted.sort_by_key(|e| e.0);
        let floor = EPS_FLOOR.ln();
        let mut next = 0usize;
        let mut best = 0u64;
        let mut best_metric = f64::NEG_INFINITY;
        for p in 0..count {
            let ln_w = if next < self.sorted.len() && self.sorted[next].0 == p {
                let v = self.sorted[next].1;
                while next < self.sorted.len() && self.sorted[next].0 == p {
                    next += 1;
                }
                v
            } else {
                floor
            };
            let metric = 2.0 * self.corr[p as usize] + n0 * ln_w;
            if metric > best_metric {
                best_metric = metric;
                best = p;
            }
        }
        Ok(best)
    }

    /// `argmax rᵀt(b)`; ties go to the smallest payload.
    pub fn ml(&mut self, r: &[f64]) -> Result<u64> {
        self.correlate(r)?;
        Ok(self.argmax_ml())
    }

    /// `argmax 2rᵀt(b) + N₀ ln P^b`; ties go to the smallest payload.
    pub fn map(&mut self, r: &[f64], ch: &ChannelConfig, prior: &PriorTable) -> Result<u64> {
        self.correlate(r)?;
        self.argmax_map(ch.n0(), prior)
    }

    /// `(ML, MAP)` decisions for the same received vector.
    pub fn both(&mut self, r: &[f64], ch: &ChannelConfig, prior: &PriorTable) -> Result<(u64, u64)> {
        self.correlate(r)?;
        let ml = self.argmax_ml();
        Ok((ml, self.argmax_map(ch.n0(), prior)?))
    }

    /// Correlation of the last received vector with codeword `p`.
    pub fn correlation(&self, p: u64) -> f64 {
        self.corr[p as usize]
    }
}

pub fn decode_map(code: &PolarCode, book: &Codebook, ch: &ChannelConfig, r: &[f64], prior: &PriorTable) -> Result<MapDecision> {
    let payload = Decoder::new(book).map(r, ch, prior)?;
    let crc_ok = code.crc().check(&code.extended_bits(payload))?;
    Ok(MapDecision { payload, crc_ok })
}

pub fn decode_ml(book: &Codebook, r: &[f64]) -> Result<u64> {
    Decoder::new(book).ml(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{add_awgn, construct_code, modulate};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize, k: usize) -> (PolarCode, Codebook) {
        let code = construct_code(n, k, 0).unwrap();
        let book = Codebook::new(&code).unwrap();
        (code, book)
    }

    fn brute_map(book: &Codebook, r: &[f64], n0: f64, lnw: impl Fn(u64) -> f64) -> u64 {
        let mut best = (f64::NEG_INFINITY, 0);
        for p in 0..book.len() as u64 {
            let t = modulate(&book.codeword_bits(p));
            let dot: f64 = r.iter().zip(&t).map(|(a, b)| a * b).sum();
            let m = 2.0 * dot + n0 * lnw(p);
            if m > best.0 {
                best = (m, p);
            }
        }
        best.1
    }

    #[test]
    fn noiseless_recovery() {
        let (code, book) = setup(32, 8);
        let ch = ChannelConfig::from_n0(1.0).unwrap();
        for p in [0u64, 1, 77, 255] {
            let r = modulate(&book.codeword_bits(p));
            assert_eq!(decode_ml(&book, &r).unwrap(), p);
            let dec = decode_map(&code, &book, &ch, &r, &PriorTable::uniform(8)).unwrap();
            assert_eq!(dec, MapDecision { payload: p, crc_ok: true });
        }
    }

    #[test]
    fn degenerate_prior_wins() {
        let (code, book) = setup(16, 4);
        let ch = ChannelConfig::from_n0(0.5).unwrap();
        let prior = PriorTable { entries: vec![(9, 1.0)], covered_mass: 1.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let r: Vec<f64> = (0..16).map(|_| rng.random_range(-2.0..2.0)).collect();
            assert_eq!(decode_map(&code, &book, &ch, &r, &prior).unwrap().payload, 9);
        }
    }

    #[test]
    fn prior_ratio_flip_matches_metric_oracle() {
        let (_, book) = setup(4, 2);
        let ch = ChannelConfig::from_n0(1.0).unwrap();
        let prior = PriorTable { entries: vec![(1, 0.5 * (4f64).exp() / (1.0 + 4f64.exp())), (2, 0.5 / (1.0 + 4f64.exp()))], covered_mass: 0.5 };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut dec = Decoder::new(&book);
        let mut flips = 0;
        for _ in 0..2000 {
            let r: Vec<f64> = (0..4).map(|_| rng.random_range(-1.5..1.5)).collect();
            let ml = dec.ml(&r).unwrap();
            let map = dec.map(&r, &ch, &prior).unwrap();
            let lnw = |p: u64| prior.get(p).unwrap_or(EPS_FLOOR).ln();
            assert_eq!(map, brute_map(&book, &r, ch.n0(), lnw));
            assert_eq!(ml, brute_map(&book, &r, ch.n0(), |_| 0.0));
            flips += (ml != map) as usize;
        }
        assert!(flips > 0);
    }

    #[test]
    fn map_uniform_equals_ml() {
        let (_, book) = setup(8, 4);
        let ch = ChannelConfig::from_snr_db(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let uniform = PriorTable::uniform(4);
        let mut dec = Decoder::new(&book);
        for _ in 0..10_000 {
            let p = rng.random_range(0..16u64);
            let r = add_awgn(&modulate(&book.codeword_bits(p)), &ch, &mut rng);
            let (ml, map) = dec.both(&r, &ch, &uniform).unwrap();
            assert_eq!(ml, map);
        }
    }

    #[test]
    fn wrong_length_rejected() {
        let (_, book) = setup(8, 4);
        assert!(decode_ml(&book, &[0.0; 7]).is_err());
    }
}
