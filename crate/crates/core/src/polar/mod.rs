//! Polar codes from the 5G reliability sequence with CRC attachment, BPSK
//! over AWGN, exhaustive MAP/ML decoding, and weight-based error estimates.

mod approx;
mod channel;
mod code;
mod crc;
mod decode;
mod weights;

pub use approx::{ml_union_bound, normal_approximation, BiAwgnStats};
pub use channel::{add_awgn, modulate, ChannelConfig};
pub use code::{construct_code, polar_transform, reliability_sequence, Codebook, PolarCode, DECODE_BUDGET_BITS};
pub use crc::{Crc, CRC16_5G_POLY};
pub use decode::{decode_map, decode_ml, Decoder, MapDecision, EPS_FLOOR};
pub use weights::{weight_table, WeightTable, WEIGHT_BUDGET_BITS};

pub use crate::special::q_func;
