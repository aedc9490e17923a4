use crate::error::{Error, Result};

/// Generator `x¹⁶ + x¹² + x⁵ + 1` without the leading term.
pub const CRC16_5G_POLY: u32 = 0x1021;

/// Non-reflected CRC with zero initial state and no final XOR, processed
/// MSB-first. These choices keep the CRC linear over GF(2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crc {
    len: usize,
    poly: u32,
}

impl Crc {
    pub fn new(len: usize, poly: u32) -> Result<Self> {
        if len > 32 {
            return Err(Error::Code(format!("CRC length {len} exceeds 32")));
        }
        if len < 32 && len > 0 && poly >> len != 0 {
            return Err(Error::Code(format!("CRC polynomial {poly:#x} wider than {len} bits")));
        }
        Ok(Self { len, poly })
    }

    pub fn none() -> Self {
        Self { len: 0, poly: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn poly(&self) -> u32 {
        self.poly
    }

    /// Remainder of the bit sequence.
    pub fn remainder(&self, bits: &[u8]) -> u32 {
        if self.len == 0 {
            return 0;
        }
        let mask = if self.len == 32 { u32::MAX } else { (1u32 << self.len) - 1 };
        let top = self.len - 1;
        let mut reg = 0u32;
        for &b in bits {
            let fb = ((reg >> top) & 1) ^ (b as u32 & 1);
            reg = (reg << 1) & mask;
            if fb == 1 {
                reg ^= self.poly;
            }
        }
        reg
    }

    /// `b` followed by its parity bits, MSB first.
    pub fn attach(&self, bits: &[u8]) -> Vec<u8> {
        let r = self.remainder(bits);
        let mut out = bits.to_vec();
        out.extend((0..self.len).rev().map(|i| ((r >> i) & 1) as u8));
        out
    }

    /// True iff the extended word leaves a zero remainder.
    pub fn check(&self, bits_ext: &[u8]) -> Result<bool> {
        if bits_ext.len() < self.len {
            return Err(Error::BitLength { expected: self.len, got: bits_ext.len() });
        }
        Ok(self.remainder(bits_ext) == 0)
    }
}
