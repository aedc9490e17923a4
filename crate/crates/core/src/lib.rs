//! Simulation and analytic bounds for prior-aided MAP decoding in a wireless
//! networked control loop: an LTI plant observed through a uniform quantizer,
//! polar/CRC coding over BPSK-AWGN, and a Kalman filter that only updates when
//! a packet is accepted.

pub mod bounds;
pub mod control;
pub mod error;
pub mod harness;
pub mod polar;
pub mod quant;
pub mod special;

pub use error::{Error, Result};
