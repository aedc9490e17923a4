use rand::Rng;
use rand_distr::StandardNormal;

use super::linalg::{self, ensure_psd, ingest_symmetric, psd_sqrt, Mat, Vector};
use crate::error::{Error, Result};

/// Discrete LTI plant `x+ = A x + B u + w`, `y = C x + v` with its
/// state-feedback gain and reference.
#[derive(Debug, Clone)]
pub struct PlantModel {
    a: Mat,
    b: Mat,
    c: Mat,
    w_cov: Mat,
    v_cov: Mat,
    k_con: Mat,
    x_ref: Vector,
    w_sqrt: Mat,
    v_sqrt: Mat,
}

impl PlantModel {
    pub fn new(a: Mat, b: Mat, c: Mat, w_cov: Mat, v_cov: Mat, k_con: Mat, x_ref: Vector) -> Result<Self> {
        linalg::ensure_square(&a, "plant.a")?;
        let nx = a.nrows();
        if b.nrows() != nx {
            return Err(Error::dim("plant.b rows", nx, b.nrows()));
        }
        let nu = b.ncols();
        if c.ncols() != nx {
            return Err(Error::dim("plant.c cols", nx, c.ncols()));
        }
        let ny = c.nrows();
        if w_cov.shape() != (nx, nx) {
            return Err(Error::dim("plant.w", format!("{nx}x{nx}"), format!("{:?}", w_cov.shape())));
        }
        if v_cov.shape() != (ny, ny) {
            return Err(Error::dim("plant.v", format!("{ny}x{ny}"), format!("{:?}", v_cov.shape())));
        }
        if k_con.shape() != (nu, nx) {
            return Err(Error::dim("plant.k_con", format!("{nu}x{nx}"), format!("{:?}", k_con.shape())));
        }
        if x_ref.len() != nx {
            return Err(Error::dim("plant.x_ref", nx, x_ref.len()));
        }
        let w_cov = ingest_symmetric(&w_cov, "plant.w")?;
        let v_cov = ingest_symmetric(&v_cov, "plant.v")?;
        ensure_psd(&w_cov, "plant.w")?;
        ensure_psd(&v_cov, "plant.v")?;
        // V must be invertible for g̃ and M = C⁻¹ V C⁻ᵀ.
        linalg::inverse(&v_cov, "plant.v")?;
        let w_sqrt = psd_sqrt(&w_cov);
        let v_sqrt = psd_sqrt(&v_cov);
        Ok(Self { a, b, c, w_cov, v_cov, k_con, x_ref, w_sqrt, v_sqrt })
    }

    /// The scalar plant used throughout the experiments: `A = -1.13`,
    /// `B = C = 1`, `W = V = 1e-7`, deadbeat gain `K_con = A/B`, `x_ref = 0`.
    pub fn scalar_reference() -> Self {
        let s = |v: f64| Mat::from_element(1, 1, v);
        Self::new(s(-1.13), s(1.0), s(1.0), s(1e-7), s(1e-7), s(-1.13), Vector::zeros(1))
            .expect("reference plant is valid")
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }
    pub fn b(&self) -> &Mat {
        &self.b
    }
    pub fn c(&self) -> &Mat {
        &self.c
    }
    pub fn w_cov(&self) -> &Mat {
        &self.w_cov
    }
    pub fn v_cov(&self) -> &Mat {
        &self.v_cov
    }
    pub fn k_con(&self) -> &Mat {
        &self.k_con
    }
    pub fn x_ref(&self) -> &Vector {
        &self.x_ref
    }
    pub fn nx(&self) -> usize {
        self.a.nrows()
    }
    pub fn nu(&self) -> usize {
        self.b.ncols()
    }
    pub fn ny(&self) -> usize {
        self.c.nrows()
    }

    /// `μ_ref = C x_ref`.
    pub fn mu_ref(&self) -> Vector {
        &self.c * &self.x_ref
    }

    /// `M = C⁻¹ V C⁻ᵀ`, the upper covariance bound under continuous arrivals.
    /// Only defined for square invertible `C`.
    pub fn observation_bound(&self) -> Result<Mat> {
        if self.c.nrows() != self.c.ncols() {
            return Err(Error::Invalid(format!(
                "M = C^-1 V C^-T needs a square output matrix, C is {}x{}",
                self.c.nrows(),
                self.c.ncols()
            )));
        }
        let c_inv = linalg::inverse(&self.c, "C^-1 for M")?;
        Ok(linalg::symmetrize(&(&c_inv * &self.v_cov * c_inv.transpose())))
    }

    /// Output `y = C x + v`.
    pub fn measure<R: Rng + ?Sized>(&self, state: &PlantState, rng: &mut R) -> Vector {
        let v = gaussian(&self.v_sqrt, rng);
        &self.c * &state.x + v
    }

    /// State update `x+ = A x + B u + w`.
    pub fn advance<R: Rng + ?Sized>(&self, state: &PlantState, u: &Vector, rng: &mut R) -> Result<PlantState> {
        if u.len() != self.nu() {
            return Err(Error::dim("plant input u", self.nu(), u.len()));
        }
        if state.x.len() != self.nx() {
            return Err(Error::dim("plant state x", self.nx(), state.x.len()));
        }
        let w = gaussian(&self.w_sqrt, rng);
        Ok(PlantState {
            x: &self.a * &state.x + &self.b * u + w,
            k: state.k + 1,
        })
    }
}

fn gaussian<R: Rng + ?Sized>(sqrt: &Mat, rng: &mut R) -> Vector {
    let z = Vector::from_fn(sqrt.ncols(), |_, _| rng.sample::<f64, _>(StandardNormal));
    sqrt * z
}

/// True plant state at time index `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantState {
    pub x: Vector,
    pub k: u64,
}

impl PlantState {
    pub fn new(x: Vector) -> Self {
        Self { x, k: 0 }
    }
}

/// One plant step: the output is taken at the pre-step state
/// (`y[k] = C x[k] + v[k]`), then the state advances.
pub fn step_plant<R: Rng + ?Sized>(
    model: &PlantModel,
    state: &PlantState,
    u: &Vector,
    rng: &mut R,
) -> Result<(PlantState, Vector)> {
    if state.x.len() != model.nx() {
        return Err(Error::dim("plant state x", model.nx(), state.x.len()));
    }
    let y = model.measure(state, rng);
    let next = model.advance(state, u, rng)?;
    Ok((next, y))
}

/// `u = K_con (x_ref - x̂)`.
pub fn control_input(model: &PlantModel, x_hat: &Vector) -> Result<Vector> {
    if x_hat.len() != model.nx() {
        return Err(Error::dim("control_input x_hat", model.nx(), x_hat.len()));
    }
    Ok(&model.k_con * (&model.x_ref - x_hat))
}
