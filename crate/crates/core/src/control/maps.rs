//! The covariance maps `h(X) = A X Aᵀ + W`, `g(X) = C X Cᵀ + V` and
//! `g̃(X) = X - X Cᵀ (C X Cᵀ + V)⁻¹ C X`. Every result is symmetrized.

use super::linalg::{inverse, symmetrize, Mat};
use super::plant::PlantModel;
use crate::error::{Error, Result};

fn check_state_cov(model: &PlantModel, x: &Mat, context: &'static str) -> Result<()> {
    let nx = model.nx();
    if x.shape() != (nx, nx) {
        return Err(Error::dim(context, format!("{nx}x{nx}"), format!("{:?}", x.shape())));
    }
    Ok(())
}

pub fn op_h(model: &PlantModel, x: &Mat) -> Result<Mat> {
    check_state_cov(model, x, "op_h")?;
    Ok(symmetrize(&(model.a() * x * model.a().transpose() + model.w_cov())))
}

pub fn op_g(model: &PlantModel, x: &Mat) -> Result<Mat> {
    check_state_cov(model, x, "op_g")?;
    Ok(symmetrize(&(model.c() * x * model.c().transpose() + model.v_cov())))
}

pub fn op_gtilde(model: &PlantModel, x: &Mat) -> Result<Mat> {
    let s = op_g(model, x)?;
    let s_inv = inverse(&s, "g~ inner inverse")?;
    let xc = x * model.c().transpose();
    Ok(symmetrize(&(x - &xc * s_inv * xc.transpose())))
}

/// Maps that can be composed with [`compose_pow`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CovMap {
    H,
}

/// `f^k(X)`: `f` applied `k` times.
pub fn compose_pow(model: &PlantModel, f: CovMap, k: usize, x: &Mat) -> Result<Mat> {
    if k == 0 {
        return Err(Error::Invalid("compose_pow needs k >= 1".into()));
    }
    let mut out = x.clone();
    for _ in 0..k {
        out = match f {
            CovMap::H => op_h(model, &out)?,
        };
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::Vector;

    fn s(v: f64) -> Mat {
        Mat::from_element(1, 1, v)
    }

    #[test]
    fn h_of_zero_is_w() {
        let m = PlantModel::scalar_reference();
        assert_eq!(op_h(&m, &s(0.0)).unwrap(), *m.w_cov());
    }

    #[test]
    fn gtilde_values() {
        let m = PlantModel::scalar_reference();
        assert_eq!(op_gtilde(&m, &s(0.0)).unwrap()[(0, 0)], 0.0);
        let v = op_gtilde(&m, &s(1e-7)).unwrap()[(0, 0)];
        assert!((v - 5e-8).abs() < 1e-22, "{v}");
    }

    #[test]
    fn compose_values() {
        let m = PlantModel::scalar_reference();
        let x = s(0.0);
        assert_eq!(compose_pow(&m, CovMap::H, 1, &x).unwrap(), op_h(&m, &x).unwrap());
        let two = compose_pow(&m, CovMap::H, 2, &x).unwrap()[(0, 0)];
        assert!((two - (1.2769e-7 + 1e-7)).abs() < 1e-20);
        let ident = PlantModel::new(Mat::identity(2, 2), Mat::identity(2, 2), Mat::identity(2, 2), Mat::zeros(2, 2), Mat::identity(2, 2), Mat::zeros(2, 2), Vector::zeros(2)).unwrap();
        let x = Mat::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        assert_eq!(compose_pow(&ident, CovMap::H, 7, &x).unwrap(), x);
        assert!(compose_pow(&m, CovMap::H, 0, &s(0.0)).is_err());
    }
}
