//! Uniform quantizer, bit mapping, and Gaussian cell priors.

mod gaussian;
mod quantizer;
mod table;

pub use gaussian::{cell_prob, cell_prob_with_order, GaussianPrior, DEFAULT_QUAD_ORDER};
pub use quantizer::{bits_of_index, index_of_bits, CellIndex, Interval, Quantizer};
pub use table::{prior_table, PriorTable, DEFAULT_EPS_MASS};
