//! Dense kernels for the small matrices that show up in game LPs: partial-pivot
//! LU solves, one-sided Jacobi singular values, and the augmented system
//! matrix whose nonsingularity certifies a candidate support.

use std::fmt;

use crate::error::{Error, Result};

/// Pivots smaller than this after row exchange are treated as zero.
pub const SINGULAR_PIVOT: f64 = 1e-12;

const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 64;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "non-finite entry at ({}, {})",
                pos / cols.max(1),
                pos % cols.max(1)
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from nested rows. Panics on ragged input; meant for
    /// literals in code and tests.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend_from_slice(r);
        }
        Self::new(rows.len(), cols, data).expect("finite entries")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "mul_vec dimension");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `selfᵀ v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows, "tr_mul_vec dimension");
        let mut out = vec![0.0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a * vi;
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "mul dimension");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Sub-matrix with the given rows and columns, in the order given.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self[(i, j)]);
            }
        }
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Spectral norm, i.e. the largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        singular_values(self).singular_values.first().copied().unwrap_or(0.0)
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting.
pub fn lu_solve(m: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: m.cols(),
        });
    }
    let n = m.rows();
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut a = m.data.clone();
    let mut x = b.to_vec();
    for k in 0..n {
        let (p, pivot) =
            (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pivot < SINGULAR_PIVOT {
            return Err(Error::SingularMatrix);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            x.swap(k, p);
        }
        let akk = a[k * n + k];
        for i in k + 1..n {
            let f = a[i * n + k] / akk;
            if f == 0.0 {
                continue;
            }
            a[i * n + k] = 0.0;
            for j in k + 1..n {
                a[i * n + j] -= f * a[k * n + j];
            }
            x[i] -= f * x[k];
        }
    }
    for k in (0..n).rev() {
        let mut s = x[k];
        for j in k + 1..n {
            s -= a[k * n + j] * x[j];
        }
        x[k] = s / a[k * n + k];
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// Descending.
    pub singular_values: Vec<f64>,
    pub smallest: f64,
    /// `largest / smallest`, or `f64::INFINITY` when the smallest is zero.
    pub condition_number: f64,
}

impl SpectrumReport {
    pub fn is_condition_infinite(&self) -> bool {
        self.condition_number.is_infinite()
    }
}

/// Full singular spectrum via one-sided (Hestenes) Jacobi rotations applied to
/// the columns of `m` or `mᵀ`, whichever has fewer columns.
pub fn singular_values(m: &Matrix) -> SpectrumReport {
    let work = if m.cols() > m.rows() { m.transpose() } else { m.clone() };
    let (rows, cols) = (work.rows(), work.cols());
    // Column-major copy so rotations touch contiguous memory.
    let mut colv: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| work[(i, j)]).collect()).collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) = {
                    let (cp, cq) = (&colv[p], &colv[q]);
                    let mut alpha = 0.0;
                    let mut beta = 0.0;
                    let mut gamma = 0.0;
                    for (a, b) in cp.iter().zip(cq) {
                        alpha += a * a;
                        beta += b * b;
                        gamma += a * b;
                    }
                    (alpha, beta, gamma)
                };
                if gamma.abs() <= JACOBI_TOL * (alpha * beta).sqrt() || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let sign = if zeta >= 0.0 { 1.0 } else { -1.0 };
                let t = sign / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (left, right) = colv.split_at_mut(q);
                let (cp, cq) = (&mut left[p], &mut right[0]);
                for (a, b) in cp.iter_mut().zip(cq.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut values: Vec<f64> = colv
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let largest = values.first().copied().unwrap_or(0.0);
    let smallest = values.last().copied().unwrap_or(0.0);
    let condition_number = if smallest > 0.0 {
        largest / smallest
    } else {
        f64::INFINITY
    };
    SpectrumReport {
        singular_values: values,
        smallest,
        condition_number,
    }
}

/// The `(|J|+1) × (|I|+1)` matrix `[[Aᵀ_{I,J}, −e], [eᵀ, 0]]`.
///
/// Its nonsingularity is what makes `(I, J)` a basis of the row player's LP;
/// the row-oriented variant `[[A_{I,J}, −e], [eᵀ, 0]]` differs only by a
/// transpose and sign flips of the last row and column, so both share the
/// same singular values.
pub fn augmented_game_matrix(a: &Matrix, rows: &[usize], cols: &[usize]) -> Result<Matrix> {
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::EmptyIndexSet);
    }
    for &i in rows {
        if i >= a.rows() {
            return Err(Error::IndexOutOfRange {
                index: i,
                bound: a.rows(),
            });
        }
    }
    for &j in cols {
        if j >= a.cols() {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: a.cols(),
            });
        }
    }
    let (ni, nj) = (rows.len(), cols.len());
    let mut m = Matrix::zeros(nj + 1, ni + 1);
    for (r, &j) in cols.iter().enumerate() {
        for (c, &i) in rows.iter().enumerate() {
            m[(r, c)] = a[(i, j)];
        }
        m[(r, ni)] = -1.0;
    }
    for c in 0..ni {
        m[(nj, c)] = 1.0;
    }
    Ok(m)
}

pub fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
