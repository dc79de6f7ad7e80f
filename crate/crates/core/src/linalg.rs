//! Thin helpers over `nalgebra` dense types.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// `xᵀ G y`.
#[inline]
pub fn inner(gram: &Matrix, x: &Vector, y: &Vector) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    for i in 0..n {
        let xi = x[i];
        if xi == 0.0 {
            continue;
        }
        let mut row = 0.0;
        for j in 0..n {
            row += gram[(i, j)] * y[j];
        }
        acc += xi * row;
    }
    acc
}

pub fn basis(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}

pub fn check_len(v: &Vector, n: usize) -> Result<()> {
    if v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: v.len(),
        });
    }
    Ok(())
}

pub fn check_square(m: &Matrix, n: usize) -> Result<()> {
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if m.nrows() != n { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}

/// Max-abs asymmetry `max |a_ij − a_ji|`.
pub fn asymmetry(m: &Matrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Symmetric positive definiteness via Cholesky, with a relative symmetry check.
pub fn is_spd(m: &Matrix) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    if m.nrows() == 0 {
        return true;
    }
    let scale = m.amax().max(1.0);
    if asymmetry(m) > 1e-12 * scale {
        return false;
    }
    match m.clone().cholesky() {
        Some(ch) => {
            // Cholesky succeeds on numerically-singular matrices; reject those too.
            let l = ch.l();
            let min_diag = (0..l.nrows()).map(|i| l[(i, i)]).fold(f64::INFINITY, f64::min);
            min_diag * min_diag > 1e-14 * scale
        }
        None => false,
    }
}

pub fn max_abs(v: &Vector) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}
