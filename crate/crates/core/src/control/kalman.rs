use super::linalg::{inverse, symmetrize, Mat, Vector};
use super::maps::op_h;
use super::plant::PlantModel;
use crate::error::{Error, Result};

/// Kalman filter state with intermittent observations.
#[derive(Debug, Clone, PartialEq)]
pub struct KalmanState {
    pub x_hat: Vector,
    pub p_hat: Mat,
    pub x_pred: Vector,
    pub p_pred: Mat,
    pub gamma_last: bool,
}

impl KalmanState {
    /// Posterior `(x̂, P̂)` at time 0; the prediction fields mirror it until
    /// the first [`kf_predict`].
    pub fn new(x_hat: Vector, p_hat: Mat) -> Self {
        let p_hat = symmetrize(&p_hat);
        Self {
            x_pred: x_hat.clone(),
            p_pred: p_hat.clone(),
            x_hat,
            p_hat,
            gamma_last: true,
        }
    }
}

/// `x̂₋ = A x̂ + B u`, `P̂₋ = h(P̂)`.
pub fn kf_predict(model: &PlantModel, kf: &KalmanState, u_prev: &Vector) -> Result<KalmanState> {
    if kf.x_hat.len() != model.nx() {
        return Err(Error::dim("kf_predict x_hat", model.nx(), kf.x_hat.len()));
    }
    if u_prev.len() != model.nu() {
        return Err(Error::dim("kf_predict u_prev", model.nu(), u_prev.len()));
    }
    let x_pred = model.a() * &kf.x_hat + model.b() * u_prev;
    let p_pred = op_h(model, &kf.p_hat)?;
    Ok(KalmanState {
        x_hat: kf.x_hat.clone(),
        p_hat: kf.p_hat.clone(),
        x_pred,
        p_pred,
        gamma_last: kf.gamma_last,
    })
}

/// Measurement update gated by `gamma`. With `gamma == false` the posterior
/// is an exact copy of the prediction.
pub fn kf_update(model: &PlantModel, kf: &KalmanState, q_hat: &Vector, gamma: bool) -> Result<KalmanState> {
    if q_hat.len() != model.ny() {
        return Err(Error::dim("kf_update q_hat", model.ny(), q_hat.len()));
    }
    if !gamma {
        return Ok(KalmanState {
            x_hat: kf.x_pred.clone(),
            p_hat: kf.p_pred.clone(),
            x_pred: kf.x_pred.clone(),
            p_pred: kf.p_pred.clone(),
            gamma_last: false,
        });
    }
    let c = model.c();
    let s = symmetrize(&(c * &kf.p_pred * c.transpose() + model.v_cov()));
    let gain = &kf.p_pred * c.transpose() * inverse(&s, "innovation covariance")?;
    let x_hat = &kf.x_pred + &gain * (q_hat - c * &kf.x_pred);
    let i = Mat::identity(model.nx(), model.nx());
    let p_hat = symmetrize(&((i - &gain * c) * &kf.p_pred));
    Ok(KalmanState {
        x_hat,
        p_hat,
        x_pred: kf.x_pred.clone(),
        p_pred: kf.p_pred.clone(),
        gamma_last: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::{compose_pow, solve_riccati, CovMap, RICCATI_MAX_ITER, RICCATI_TOL};
    use crate::control::linalg::max_abs;

    fn s(v: f64) -> Mat {
        Mat::from_element(1, 1, v)
    }

    fn scalar(a: f64, w: f64, v: f64) -> PlantModel {
        PlantModel::new(s(a), s(1.0), s(1.0), s(w), s(v), s(0.0), Vector::zeros(1)).unwrap()
    }

    #[test]
    fn predict_examples() {
        let m = scalar(-1.13, 0.0, 1.0);
        let kf = KalmanState::new(Vector::zeros(1), s(0.0));
        assert_eq!(kf_predict(&m, &kf, &Vector::zeros(1)).unwrap().p_pred[(0, 0)], 0.0);

        let m = scalar(-1.13, 1e-7, 1.0);
        let kf = KalmanState::new(Vector::zeros(1), s(1.0));
        let p = kf_predict(&m, &kf, &Vector::zeros(1)).unwrap().p_pred[(0, 0)];
        assert!((p - (1.2769 + 1e-7)).abs() < 1e-14);

        let m = scalar(1.0, 0.0, 1.0);
        let kf = KalmanState::new(Vector::from_element(1, 0.7), s(1.0));
        assert_eq!(kf_predict(&m, &kf, &Vector::zeros(1)).unwrap().x_pred[0], 0.7);
    }

    #[test]
    fn update_examples() {
        let m = scalar(1.0, 0.0, 1.0);
        let kf = kf_predict(&m, &KalmanState::new(Vector::from_element(1, 0.2), s(1.0)), &Vector::zeros(1)).unwrap();
        let skipped = kf_update(&m, &kf, &Vector::from_element(1, 5.0), false).unwrap();
        assert_eq!(skipped.x_hat, kf.x_pred);
        assert_eq!(skipped.p_hat, kf.p_pred);
        assert!(!skipped.gamma_last);

        let m = scalar(1.0, 0.0, 1.0);
        let mut kf = KalmanState::new(Vector::zeros(1), s(1.0));
        kf.p_pred = s(1.0);
        let upd = kf_update(&m, &kf, &Vector::from_element(1, 1.0), true).unwrap();
        assert!((upd.p_hat[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((upd.x_hat[0] - 0.5).abs() < 1e-15);

        let m = scalar(1.0, 0.0, 1e12);
        let upd = kf_update(&m, &kf, &Vector::from_element(1, 1.0), true).unwrap();
        assert!((upd.x_hat[0] - kf.x_pred[0]).abs() < 1e-10);
        assert!((upd.p_hat[(0, 0)] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn full_arrival_converges_to_riccati() {
        let m = PlantModel::scalar_reference();
        let sol = solve_riccati(&m, RICCATI_TOL, RICCATI_MAX_ITER).unwrap();
        let mut kf = KalmanState::new(Vector::zeros(1), s(1e-7));
        for _ in 0..10_000 {
            kf = kf_predict(&m, &kf, &Vector::zeros(1)).unwrap();
            kf = kf_update(&m, &kf, &Vector::zeros(1), true).unwrap();
        }
        assert!(max_abs(&(&kf.p_hat - &sol.p_inf)) < 1e-9);
    }

    #[test]
    fn losses_follow_h_powers_exactly() {
        let m = PlantModel::scalar_reference();
        let sol = solve_riccati(&m, RICCATI_TOL, RICCATI_MAX_ITER).unwrap();
        for i in 0..6 {
            let mut kf = KalmanState::new(Vector::zeros(1), sol.p_inf.clone());
            kf = kf_predict(&m, &kf, &Vector::zeros(1)).unwrap();
            for _ in 0..i {
                kf = kf_update(&m, &kf, &Vector::zeros(1), false).unwrap();
                kf = kf_predict(&m, &kf, &Vector::zeros(1)).unwrap();
            }
            assert_eq!(kf.p_pred, compose_pow(&m, CovMap::H, i + 1, &sol.p_inf).unwrap());
        }
    }
}
