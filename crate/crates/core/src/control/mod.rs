//! LTI plant, state-feedback controller, Kalman filter with intermittent
//! observations and the covariance maps built on it.

mod kalman;
pub mod linalg;
mod maps;
mod plant;
mod riccati;

pub use kalman::{kf_predict, kf_update, KalmanState};
pub use linalg::{loewner_leq, Mat, Vector};
pub use maps::{compose_pow, op_g, op_gtilde, op_h, CovMap};
pub use plant::{control_input, step_plant, PlantModel, PlantState};
pub use riccati::{solve_riccati, solve_riccati_from, RiccatiSolution, RICCATI_MAX_ITER, RICCATI_TOL};
