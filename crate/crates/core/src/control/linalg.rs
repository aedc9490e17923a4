//! Small dense-matrix helpers over `nalgebra` dynamic matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub type Mat = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Symmetry tolerance applied when covariances are ingested.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Inverses fail above this condition estimate.
pub const MAX_CONDITION: f64 = 1e14;

pub fn symmetrize(m: &Mat) -> Mat {
    (m + m.transpose()) * 0.5
}

/// Largest absolute entry.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn ensure_square(m: &Mat, context: &'static str) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::dim(context, "non-empty square matrix", format!("{}x{}", m.nrows(), m.ncols())));
    }
    Ok(())
}

/// Checks symmetry within [`SYMMETRY_TOL`] (relative to the largest entry) and
/// returns the symmetrized copy.
pub fn ingest_symmetric(m: &Mat, context: &'static str) -> Result<Mat> {
    ensure_square(m, context)?;
    let scale = max_abs(m).max(1.0);
    if max_abs(&(m - m.transpose())) > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { context, tol: SYMMETRY_TOL });
    }
    Ok(symmetrize(m))
}

pub fn min_eigenvalue(m: &Mat) -> f64 {
    SymmetricEigen::new(symmetrize(m))
        .eigenvalues
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min)
}

/// Symmetric PSD check with a tolerance scaled to the matrix magnitude.
pub fn ensure_psd(m: &Mat, context: &'static str) -> Result<()> {
    let tol = 1e-12 * max_abs(m).max(f64::MIN_POSITIVE);
    if min_eigenvalue(m) < -tol {
        return Err(Error::NotPositiveDefinite { context });
    }
    Ok(())
}

/// Spectral condition number estimate from singular values.
pub fn condition(m: &Mat) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverse through an LU solve, refused when the condition estimate exceeds
/// [`MAX_CONDITION`].
pub fn inverse(m: &Mat, context: &'static str) -> Result<Mat> {
    ensure_square(m, context)?;
    let cond = condition(m);
    if !(cond <= MAX_CONDITION) {
        return Err(Error::Singular { context, condition: cond });
    }
    m.clone()
        .lu()
        .try_inverse()
        .ok_or(Error::Singular { context, condition: cond })
}

/// Matrix square root `L` of a PSD matrix with `L Lᵀ = m` (eigen-based, so
/// singular covariances such as `W = 0` are accepted).
pub fn psd_sqrt(m: &Mat) -> Mat {
    let eig = SymmetricEigen::new(symmetrize(m));
    let mut l = eig.eigenvectors.clone();
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        l.column_mut(j).scale_mut(s);
    }
    l
}

/// Loewner order test `x <= y`: true iff the smallest eigenvalue of `y - x`
/// is at least `-tol`.
pub fn loewner_leq(x: &Mat, y: &Mat, tol: f64) -> Result<bool> {
    if x.shape() != y.shape() {
        return Err(Error::dim("loewner_leq", format!("{:?}", x.shape()), format!("{:?}", y.shape())));
    }
    ensure_square(x, "loewner_leq")?;
    Ok(min_eigenvalue(&(y - x)) >= -tol)
}

pub fn from_rows(rows: &[Vec<f64>], context: &'static str) -> Result<Mat> {
    let r = rows.len();
    let c = rows.first().map(Vec::len).unwrap_or(0);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(Error::dim(context, "rectangular non-empty matrix", format!("{r} rows")));
    }
    Ok(Mat::from_fn(r, c, |i, j| rows[i][j]))
}

pub fn to_rows(m: &Mat) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().cloned().collect()).collect()
}
