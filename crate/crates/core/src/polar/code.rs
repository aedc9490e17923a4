use std::sync::OnceLock;

use super::crc::{Crc, CRC16_5G_POLY};
use crate::error::{Error, Result};
use crate::quant::bits_of_index;

/// Exhaustive decoding enumerates at most `2^DECODE_BUDGET_BITS` payloads.
pub const DECODE_BUDGET_BITS: usize = 20;

const RELIABILITY_FILE: &str = include_str!("../../data/reliability_5g.txt");

/// The 1024-entry polar reliability sequence, most reliable index first.
pub fn reliability_sequence() -> &'static [usize] {
    static SEQ: OnceLock<Vec<usize>> = OnceLock::new();
    SEQ.get_or_init(|| {
        RELIABILITY_FILE
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| l.parse().expect("reliability file holds integers"))
            .collect()
    })
}

/// Polar code with optional CRC. Payload bits (MSB first) followed by the CRC
/// bits occupy the unfrozen positions in ascending index order.
#[derive(Debug, Clone)]
pub struct PolarCode {
    n_code: usize,
    k_info: usize,
    crc: Crc,
    unfrozen: Vec<usize>,
    reliability: Vec<usize>,
}

/// Code with the default CRC polynomial for the given CRC length.
pub fn construct_code(n_code: usize, k_info: usize, crc_len: usize) -> Result<PolarCode> {
    let crc = match crc_len {
        0 => Crc::none(),
        16 => Crc::new(16, CRC16_5G_POLY)?,
        other => return Err(Error::Code(format!("no default polynomial for a {other}-bit CRC"))),
    };
    PolarCode::new(n_code, k_info, crc)
}

impl PolarCode {
    pub fn new(n_code: usize, k_info: usize, crc: Crc) -> Result<Self> {
        if !n_code.is_power_of_two() || !(2..=1024).contains(&n_code) {
            return Err(Error::Code(format!("N must be a power of two in 2..=1024, got {n_code}")));
        }
        if k_info == 0 {
            return Err(Error::Code("payload length K must be at least 1".into()));
        }
        if k_info > 64 {
            return Err(Error::Code(format!("payload length K = {k_info} exceeds 64")));
        }
        if k_info + crc.len() > n_code {
            return Err(Error::Code(format!(
                "K + CRC = {} exceeds N = {n_code}",
                k_info + crc.len()
            )));
        }
        let reliability: Vec<usize> = reliability_sequence().iter().copied().filter(|&i| i < n_code).collect();
        let mut unfrozen: Vec<usize> = reliability[..k_info + crc.len()].to_vec();
        unfrozen.sort_unstable();
        Ok(Self { n_code, k_info, crc, unfrozen, reliability })
    }

    pub fn n_code(&self) -> usize {
        self.n_code
    }
    pub fn k_info(&self) -> usize {
        self.k_info
    }
    pub fn crc(&self) -> &Crc {
        &self.crc
    }
    pub fn crc_len(&self) -> usize {
        self.crc.len()
    }
    /// Payload plus CRC length.
    pub fn k_total(&self) -> usize {
        self.k_info + self.crc.len()
    }
    pub fn unfrozen_set(&self) -> &[usize] {
        &self.unfrozen
    }
    /// Reliability order restricted to indices below `N`.
    pub fn reliability(&self) -> &[usize] {
        &self.reliability
    }
    /// 64-bit words per packed codeword.
    pub fn words(&self) -> usize {
        self.n_code.div_ceil(64)
    }

    /// Codeword of a payload bit vector (CRC attached internally).
    pub fn encode(&self, b: &[u8]) -> Result<Vec<u8>> {
        if b.len() != self.k_info {
            return Err(Error::BitLength { expected: self.k_info, got: b.len() });
        }
        let ext = self.crc.attach(b);
        let mut words = vec![0u64; self.words()];
        for (&pos, &bit) in self.unfrozen.iter().zip(&ext) {
            if bit & 1 == 1 {
                words[pos / 64] |= 1 << (pos % 64);
            }
        }
        polar_transform(&mut words, self.n_code);
        Ok(self.unpack(&words))
    }

    /// Packed codeword of a payload integer.
    pub fn encode_payload(&self, payload: u64) -> Vec<u64> {
        let bits = bits_of_index(payload, self.k_info).expect("payload fits K bits");
        self.pack(&self.encode(&bits).expect("length checked"))
    }

    /// CRC-extended bit vector of a payload integer.
    pub fn extended_bits(&self, payload: u64) -> Vec<u8> {
        let bits = bits_of_index(payload, self.k_info).expect("payload fits K bits");
        self.crc.attach(&bits)
    }

    pub fn pack(&self, bits: &[u8]) -> Vec<u64> {
        let mut words = vec![0u64; self.words()];
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                words[i / 64] |= 1 << (i % 64);
            }
        }
        words
    }

    pub fn unpack(&self, words: &[u64]) -> Vec<u8> {
        (0..self.n_code).map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8).collect()
    }
}

const STAGE_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// In-place `x = u F^{⊗log₂N}` with `F = [[1,0],[1,1]]` on packed bits (bit
/// `i` of the vector is bit `i % 64` of word `i / 64`). Equivalently
/// `x_i = ⊕_{j ⊇ i} u_j`.
pub fn polar_transform(words: &mut [u64], n_code: usize) {
    let mut h = 1usize;
    let mut stage = 0;
    while h < n_code && h < 64 {
        let m = STAGE_MASKS[stage];
        for w in words.iter_mut() {
            *w ^= (*w >> h) & m;
        }
        h <<= 1;
        stage += 1;
    }
    while h < n_code {
        let step = h / 64;
        for i in 0..words.len() {
            if (i * 64) & h == 0 {
                words[i] ^= words[i + step];
            }
        }
        h <<= 1;
    }
}

/// All `2^K` packed codewords, indexed by payload integer.
#[derive(Debug, Clone)]
pub struct Codebook {
    n_code: usize,
    k_info: usize,
    words: usize,
    cw: Vec<u64>,
}

impl Codebook {
    pub fn new(code: &PolarCode) -> Result<Self> {
        let k = code.k_info();
        if k > DECODE_BUDGET_BITS {
            return Err(Error::Budget { what: "exhaustive decoding", bits: k, limit: DECODE_BUDGET_BITS });
        }
        let words = code.words();
        let basis: Vec<Vec<u64>> = (0..k).map(|t| code.encode_payload(1u64 << t)).collect();
        let count = 1usize << k;
        let mut cw = vec![0u64; count * words];
        // Linearity (the CRC has zero init and no final XOR): c(p) = c(p without
        // its lowest set bit) ⊕ c(lowest set bit).
        for p in 1..count {
            let low = p.trailing_zeros() as usize;
            let prev = p & (p - 1);
            for w in 0..words {
                cw[p * words + w] = cw[prev * words + w] ^ basis[low][w];
            }
        }
        Ok(Self { n_code: code.n_code(), k_info: k, words, cw })
    }

    pub fn n_code(&self) -> usize {
        self.n_code
    }
    pub fn k_info(&self) -> usize {
        self.k_info
    }
    pub fn words(&self) -> usize {
        self.words
    }
    pub fn len(&self) -> usize {
        1 << self.k_info
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn codeword(&self, payload: u64) -> &[u64] {
        let p = payload as usize;
        &self.cw[p * self.words..(p + 1) * self.words]
    }
    pub fn codeword_bits(&self, payload: u64) -> Vec<u8> {
        let w = self.codeword(payload);
        (0..self.n_code).map(|i| ((w[i / 64] >> (i % 64)) & 1) as u8).collect()
    }
}
