//! Analytic bounds on the MAP block error rate: pairwise error
//! probabilities, conditional bounds for a known prior, bounds over a
//! covariance range, consecutive-loss transition bounds, and the Markov-chain
//! bounds built from them.

mod conditional;
mod interval;
mod markov;
mod pep;
mod ranged;
mod report;

pub use conditional::{limiting_bounds, map_bounds_conditional, map_bounds_conditional_on, SupportCell};
pub use interval::BoundInterval;
pub use markov::{corollary_approx, markov_map_bounds, simplified_bounds};
pub use pep::{pep, pep_ln};
pub use ranged::{
    mu_grid, ranged_cell_prob_bounds, ranged_map_bounds, ranged_map_bounds_on, ranged_pep_bounds, ranged_support,
    sigma_range_for_state, transition_prob_bounds, SigmaRange, TransitionBounds,
};
pub use report::{evaluate_bounds, BoundContext, BoundReport, MarkovBoundConfig};
