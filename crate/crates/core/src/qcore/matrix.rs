use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::MatrixDoc;

/// Dense square complex matrix stored in the usual (row, column) layout.
///
/// Transition-style quantities use the opposite naming: the entry "from
/// input `i` to output `j`" lives at row `j`, column `i`. Use
/// [`ComplexMatrix::transition`] when thinking in those terms.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            data: DMatrix::from_fn(dim, dim, f),
        }
    }

    /// Builds from row-major entries, rejecting non-square or non-finite input.
    pub fn from_row_major(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let m = Self {
            data: DMatrix::from_row_slice(dim, dim, entries),
        };
        m.check_finite()?;
        Ok(m)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    rows: dim,
                    cols: row.len(),
                });
            }
            entries.extend(row.iter().map(|&x| Complex64::new(x, 0.0)));
        }
        Self::from_row_major(dim, &entries)
    }

    pub fn from_nalgebra(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        let m = Self { data };
        m.check_finite()?;
        Ok(m)
    }

    /// Outer product |v><v|.
    pub fn outer(v: &[Complex64]) -> Self {
        Self::from_fn(v.len(), |r, c| v[r] * v[c].conj())
    }

    fn check_finite(&self) -> Result<()> {
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                let z = self.data[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    /// Amplitude for the transition `input -> output`.
    pub fn transition(&self, input: usize, output: usize) -> Complex64 {
        self.data[(output, input)]
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n * n).map(|k| self.data[(k / n, k % n)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self {
            data: self.data.adjoint(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            data: &self.data * &other.data,
        })
    }

    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_dims(self.dim(), v.len())?;
        let n = self.dim();
        Ok((0..n)
            .map(|r| (0..n).map(|c| self.data[(r, c)] * v[c]).sum())
            .collect())
    }

    /// Tensor product with index ordering `(a, b) -> a * dim(B) + b`.
    pub fn kron(&self, other: &Self) -> Self {
        Self {
            data: self.data.kronecker(&other.data),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: self.data.map(|z| z * s),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on unequal dims");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Entrywise modulus.
    pub fn abs(&self) -> RealMatrix {
        RealMatrix::from_fn(self.dim(), |r, c| self.data[(r, c)].norm())
    }

    /// Relabels basis states: entry `(r, c)` of the result is entry
    /// `(perm[r], perm[c])` of `self`. This is `Q^-1 M Q` for the permutation
    /// matrix `Q` sending basis state `a` to `perm[a]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim());
        Self::from_fn(self.dim(), |r, c| self.data[(perm[r], perm[c])])
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.data)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Dense square real matrix, (row, column) layout. Joint matrices, stochastic
/// matrices and flows all use it with rows indexing outputs and columns
/// indexing inputs.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct RealMatrix {
    data: DMatrix<f64>,
}

impl RealMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            data: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self {
            data: DMatrix::from_fn(dim, dim, f),
        }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "rows must be square");
        Self::from_fn(dim, |r, c| rows[r][c])
    }

    pub fn from_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self {
            data: DMatrix::from_row_slice(dim, dim, entries),
        })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[(row, col)] = value;
    }

    pub fn add_at(&mut self, row: usize, col: usize, value: f64) {
        self.data[(row, col)] += value;
    }

    /// Entry for the transition `input -> output`.
    pub fn transition(&self, input: usize, output: usize) -> f64 {
        self.data[(output, input)]
    }

    pub fn row_major(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n * n).map(|k| self.data[(k / n, k % n)]).collect()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim()).map(|r| self.data.row(r).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.dim()).map(|c| self.data.column(c).sum()).collect()
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        self.data.column(col).iter().copied().collect()
    }

    pub fn set_column(&mut self, col: usize, values: &[f64]) {
        for (r, &v) in values.iter().enumerate() {
            self.data[(r, col)] = v;
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            data: &self.data * &other.data,
        })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            data: self.data.kronecker(&other.data),
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            data: &self.data * s,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self {
            data: &self.data + &other.data,
        })
    }

    pub fn map(&self, f: impl FnMut(f64) -> f64) -> Self {
        Self {
            data: self.data.map(f),
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on unequal dims");
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// See [`ComplexMatrix::relabel`].
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim());
        Self::from_fn(self.dim(), |r, c| self.data[(perm[r], perm[c])])
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim(), |r, c| Complex64::new(self.data[(r, c)], 0.0))
    }
}

impl fmt::Debug for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RealMatrix{}", self.data)
    }
}

impl fmt::Display for RealMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = f.precision().unwrap_or(4);
        for r in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|c| format!("{:>w$.p$}", self.data[(r, c)], w = prec + 4, p = prec))
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
