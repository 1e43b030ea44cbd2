use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::{check_dims, ComplexMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// max_ij |(M^dag M - I)_ij|
pub fn unitarity_defect(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let prod = m.as_nalgebra().adjoint() * m.as_nalgebra();
    prod.iter()
        .enumerate()
        .map(|(k, z)| {
            let id = if k % n == k / n { 1.0 } else { 0.0 };
            (z - Complex64::new(id, 0.0)).norm()
        })
        .fold(0.0, f64::max)
}

pub fn validate_unitary(m: &ComplexMatrix, tol: f64) -> bool {
    unitarity_defect(m) <= tol
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let deviation = unitarity_defect(&m);
        if deviation > tol {
            return Err(Error::NotUnitary { deviation, tol });
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn compose(&self, after: &Self) -> Result<Self> {
        Ok(Self(after.0.mul(&self.0)?))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        self.0.apply(v)
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        Self(self.0.relabel(perm))
    }
}

/// 2x2 rotation `[[cos t, -sin t], [sin t, cos t]]`.
pub fn rotation(theta: f64) -> UnitaryMatrix {
    let (s, c) = theta.sin_cos();
    UnitaryMatrix(
        ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).expect("2x2 rotation is well formed"),
    )
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (eigenvalues >= -tol).
    pub fn new(m: ComplexMatrix, tol: f64) -> Result<Self> {
        let hermitian_defect = m.max_abs_diff(&m.adjoint());
        if hermitian_defect > tol {
            return Err(Error::NotHermitian {
                deviation: hermitian_defect,
                tol,
            });
        }
        let trace = m.trace();
        if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
            return Err(Error::BadTrace {
                trace: trace.re,
                tol,
            });
        }
        let min_eigenvalue = min_eigenvalue(&m);
        if min_eigenvalue < -tol {
            return Err(Error::NotPositive {
                min_eigenvalue,
                tol,
            });
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::BadTrace {
                trace: norm,
                tol: DEFAULT_TOL,
            });
        }
        Ok(Self(ComplexMatrix::outer(amplitudes)))
    }

    pub fn pure_real(amplitudes: &[f64]) -> Result<Self> {
        let v: Vec<Complex64> = amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::pure(&v)
    }

    /// Basis state |k> in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[k] = Complex64::new(1.0, 0.0);
        Self(ComplexMatrix::outer(&v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    /// Real part of the i-th diagonal entry, clamped at zero.
    pub fn population(&self, i: usize) -> f64 {
        self.0.get(i, i).re.max(0.0)
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.population(i)).collect()
    }

    pub fn relabel(&self, perm: &[usize]) -> Self {
        Self(self.0.relabel(perm))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }

    /// Convex combination `sum w_k rho_k`; weights must be nonnegative and sum to 1.
    pub fn mixture(parts: &[(f64, DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidParameter("empty mixture".into()));
        };
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::BadProbabilities { sum: total });
        }
        let mut acc = ComplexMatrix::zeros(first.dim());
        for (w, rho) in parts {
            acc = acc.add(&rho.0.scale(*w))?;
        }
        Ok(Self(acc))
    }

    /// Max-entry purity defect `|rho^2 - rho|`.
    pub fn purity_defect(&self) -> f64 {
        self.0.mul(&self.0).expect("square").max_abs_diff(&self.0)
    }
}

fn min_eigenvalue(m: &ComplexMatrix) -> f64 {
    let a = m.as_nalgebra();
    let herm: DMatrix<Complex64> = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    herm.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `U rho U^dag`.
pub fn evolve(rho: &DensityMatrix, u: &UnitaryMatrix) -> Result<DensityMatrix> {
    check_dims(rho.dim(), u.dim())?;
    let a = u.matrix().as_nalgebra();
    let out = a * rho.matrix().as_nalgebra() * a.adjoint();
    let herm = (&out + out.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(DensityMatrix(ComplexMatrix::from_nalgebra(herm)?))
}

/// Born probabilities of measuring `rho` in the fixed basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p < 0.0 || !p.is_finite()) || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::BadProbabilities { sum });
        }
        Ok(Self(probs))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

pub fn born_vector(rho: &DensityMatrix) -> ProbVector {
    ProbVector(rho.populations())
}

/// `(1 - eps) rho + eps I/N`.
pub fn regularize(rho: &DensityMatrix, eps: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!(
            "regularization weight {eps} outside [0, 1]"
        )));
    }
    let n = rho.dim();
    let floor = eps / n as f64;
    let m = ComplexMatrix::from_fn(n, |r, c| {
        if r == c {
            Complex64::new((1.0 - eps) * rho.population(r) + floor, 0.0)
        } else {
            rho.matrix().get(r, c) * (1.0 - eps)
        }
    });
    Ok(DensityMatrix(m))
}

/// Amplitudes of `cos(t)|0> + sin(t)|1>`.
pub fn phi(theta: f64) -> [Complex64; 2] {
    let (s, c) = theta.sin_cos();
    [Complex64::new(c, 0.0), Complex64::new(s, 0.0)]
}

pub fn phi_state(theta: f64) -> DensityMatrix {
    DensityMatrix(ComplexMatrix::outer(&phi(theta)))
}

pub fn plus_state() -> DensityMatrix {
    DensityMatrix::pure_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).expect("normalized")
}

pub fn minus_state() -> DensityMatrix {
    DensityMatrix::pure_real(&[FRAC_1_SQRT_2, -FRAC_1_SQRT_2]).expect("normalized")
}

/// (|00> + |11>)/sqrt(2)
pub fn bell_state() -> DensityMatrix {
    DensityMatrix::pure_real(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2]).expect("normalized")
}

/// Tensor product of two pure states given by amplitudes.
pub fn product_amplitudes(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}
