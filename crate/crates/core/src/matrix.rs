//! Dense complex matrices and validated qubit-state representations.
//!
//! [`ComplexMatrix`] is a plain row-major square matrix of `Complex64`. The
//! validated wrappers [`DensityMatrix`] and [`BlochVector`] enforce the state
//! invariants once at construction so downstream code can rely on them.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entrywise tolerance for Hermiticity and unit trace.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Slack on the unit-ball constraint for Bloch vectors.
pub const BLOCH_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries; rejects non-square or non-finite input.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::NotSquare {
                dim,
                entries: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::NotSquare {
                    dim,
                    entries: row.len() * dim,
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    /// Real-valued rows; convenient for diagonal and real-symmetric operators.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    pub fn pauli_x() -> Self {
        Self {
            dim: 2,
            data: vec![ZERO, ONE, ONE, ZERO],
        }
    }

    pub fn pauli_y() -> Self {
        Self {
            dim: 2,
            data: vec![ZERO, -I, I, ZERO],
        }
    }

    pub fn pauli_z() -> Self {
        Self {
            dim: 2,
            data: vec![ONE, ZERO, ZERO, -ONE],
        }
    }

    /// `σ_0 = I, σ_1 = X, σ_2 = Y, σ_3 = Z`.
    pub fn pauli(index: usize) -> Self {
        match index {
            0 => Self::identity(2),
            1 => Self::pauli_x(),
            2 => Self::pauli_y(),
            3 => Self::pauli_z(),
            _ => panic!("Pauli index {index} out of range"),
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { dim: n, data }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise modulus of `self − self†`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (0..n).all(|j| i == j || self.data[i * n + j].norm() <= tol))
    }

    /// Eigenvalues of the Hermitian part, ascending.
    ///
    /// Dimension 2 uses the closed-form roots; larger matrices go through a
    /// Hermitian eigensolver.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        if self.dim == 1 {
            return vec![self.data[0].re];
        }
        if self.dim == 2 {
            let a = self.data[0].re;
            let d = self.data[3].re;
            let off = 0.5 * (self.data[1] + self.data[2].conj());
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt();
            return vec![mean - half_gap, mean + half_gap];
        }
        let n = self.dim;
        let m = DMatrix::from_fn(n, n, |i, j| {
            0.5 * (self.data[i * n + j] + self.data[j * n + i].conj())
        });
        let mut values: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        values.sort_by(f64::total_cmp);
        values
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Complex64]> = self.data.chunks(self.dim).collect();
        f.debug_struct("ComplexMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

/// `AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// Squared Hilbert-Schmidt norm `Tr(A†A)`, i.e. the sum of squared entry moduli.
pub fn hs_norm_sq(a: &ComplexMatrix) -> f64 {
    a.entries().iter().map(Complex64::norm_sqr).sum()
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let herm = mat.hermiticity_deviation();
        if herm > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        if (tr - ONE).norm() > HERMITIAN_TOL {
            return Err(Error::TraceNotUnit(tr.re));
        }
        let smallest = mat.hermitian_eigenvalues()[0];
        if smallest < EIGENVALUE_FLOOR {
            return Err(Error::NotPositive(smallest));
        }
        Ok(Self { mat })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_matrix_unchecked(mat: ComplexMatrix) -> Self {
        debug_assert!(Self::new(mat.clone()).is_ok());
        Self { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            mat: ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// `diag(p_0, …, p_{d-1})`; the weights must form a probability vector.
    pub fn diagonal(weights: &[f64]) -> Result<Self> {
        let n = weights.len();
        let mut data = vec![ZERO; n * n];
        for (i, &w) in weights.iter().enumerate() {
            data[i * n + i] = Complex64::new(w, 0.0);
        }
        Self::new(ComplexMatrix::new(n, data)?)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.dim()
    }
}

/// Bloch vector of a qubit state, `|v| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::NonFinite);
        }
        let v = Self { x, y, z };
        let norm = v.norm();
        if norm > 1.0 + BLOCH_TOL {
            return Err(Error::InvalidBlochVector(norm));
        }
        Ok(v)
    }

    pub fn origin() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            z: 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Raw cross product; the result may lie outside the unit ball in general
    /// but never does for two Bloch vectors.
    pub fn cross(&self, other: &Self) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// `½(I + v·σ)`.
pub fn from_bloch(v: &BlochVector) -> DensityMatrix {
    let half = 0.5;
    let mat = ComplexMatrix {
        dim: 2,
        data: vec![
            Complex64::new(half * (1.0 + v.z), 0.0),
            Complex64::new(half * v.x, -half * v.y),
            Complex64::new(half * v.x, half * v.y),
            Complex64::new(half * (1.0 - v.z), 0.0),
        ],
    };
    // |v| ≤ 1 guarantees the invariants.
    DensityMatrix { mat }
}

/// Inverse of [`from_bloch`] for qubit states.
pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::UnsupportedDimension(rho.dim()));
    }
    let m = rho.matrix();
    let off = m.get(0, 1);
    let mut v = BlochVector {
        x: 2.0 * off.re,
        y: -2.0 * off.im,
        z: m.get(0, 0).re - m.get(1, 1).re,
    };
    // States accepted at the eigenvalue floor can sit a hair outside the ball.
    let norm = v.norm();
    if norm > 1.0 {
        v.x /= norm;
        v.y /= norm;
        v.z /= norm;
    }
    Ok(v)
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ.
    hs_norm_sq(rho.matrix())
}
