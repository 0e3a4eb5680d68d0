//! 3x3 complex matrices and membership in SU(3).

use std::fmt;

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexMatrix3 = Matrix3<Complex64>;

/// Tolerance used by [`SU3Matrix::new`].
pub const SU3_TOL: f64 = 1e-8;

/// `max |M^H M - I|` entrywise.
pub fn unitarity_residual(m: &ComplexMatrix3) -> f64 {
    let d = m.adjoint() * m - ComplexMatrix3::identity();
    d.iter().map(|z| z.norm()).fold(0.0, nan_max)
}

/// `|det M - 1|`.
pub fn det_residual(m: &ComplexMatrix3) -> f64 {
    (det3(m) - Complex64::new(1.0, 0.0)).norm()
}

/// Cofactor expansion; avoids pivoting noise on the small fixed size.
pub fn det3(m: &ComplexMatrix3) -> Complex64 {
    m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
        - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
        + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
}

/// True iff `M` is unitary with determinant 1, both within `tol`.
pub fn su3_check(m: &ComplexMatrix3, tol: f64) -> bool {
    unitarity_residual(m) < tol && det_residual(m) < tol
}

/// Largest entrywise modulus of `a - b`.
pub fn max_entry_diff(a: &ComplexMatrix3, b: &ComplexMatrix3) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, nan_max)
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// A special unitary 3x3 matrix, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SU3Matrix(ComplexMatrix3);

impl SU3Matrix {
    pub fn identity() -> Self {
        SU3Matrix(ComplexMatrix3::identity())
    }

    /// Validates against [`SU3_TOL`].
    pub fn new(m: ComplexMatrix3) -> Result<Self> {
        Self::with_tol(m, SU3_TOL)
    }

    pub fn with_tol(m: ComplexMatrix3, tol: f64) -> Result<Self> {
        let unitarity = unitarity_residual(&m);
        let det = det_residual(&m);
        if !(unitarity < tol && det < tol) {
            return Err(Error::NonUnitary { unitarity, det });
        }
        Ok(SU3Matrix(m))
    }

    pub fn from_rows(rows: [[Complex64; 3]; 3]) -> Result<Self> {
        Self::new(ComplexMatrix3::from_fn(|r, c| rows[r][c]))
    }

    pub fn matrix(&self) -> &ComplexMatrix3 {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix3 {
        self.0
    }

    pub fn rows(&self) -> [[Complex64; 3]; 3] {
        std::array::from_fn(|r| std::array::from_fn(|c| self.0[(r, c)]))
    }

    pub fn column(&self, c: usize) -> [Complex64; 3] {
        std::array::from_fn(|r| self.0[(r, c)])
    }

    pub fn adjoint(&self) -> SU3Matrix {
        SU3Matrix(self.0.adjoint())
    }

    pub fn transpose(&self) -> SU3Matrix {
        SU3Matrix(self.0.transpose())
    }

    pub fn conj(&self) -> SU3Matrix {
        SU3Matrix(self.0.map(|z| z.conj()))
    }

    pub fn det(&self) -> Complex64 {
        det3(&self.0)
    }

    pub fn unitarity_residual(&self) -> f64 {
        unitarity_residual(&self.0)
    }

    pub fn det_residual(&self) -> f64 {
        det_residual(&self.0)
    }

    pub fn check(&self, tol: f64) -> bool {
        su3_check(&self.0, tol)
    }

    pub fn max_diff(&self, other: &SU3Matrix) -> f64 {
        max_entry_diff(&self.0, &other.0)
    }
}

impl std::ops::Mul for SU3Matrix {
    type Output = SU3Matrix;
    fn mul(self, rhs: SU3Matrix) -> SU3Matrix {
        SU3Matrix(self.0 * rhs.0)
    }
}

impl fmt::Display for SU3Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..3 {
            let cells: Vec<String> = (0..3)
                .map(|c| {
                    let z = self.0[(r, c)];
                    format!("{:>+.12}{:+.12}i", clean(z.re), clean(z.im))
                })
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Maps `-0.0` to `0.0` so printed matrices do not show signed zeros.
fn clean(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}
