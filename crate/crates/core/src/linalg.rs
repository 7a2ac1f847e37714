//! Dense vectors and small matrices.
//!
//! Output spaces in this crate are low dimensional (a handful of outputs at
//! most), so plain `Vec<T>` vectors and a row-major [`Matrix`] are enough.
//! The only factorization needed is Cholesky, used both to certify positive
//! definiteness of weights and to form minimum-norm solutions.

use crate::error::{check_dim, invalid, Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    /// Builds a matrix from row-major data.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(invalid("matrix", "dimensions must be non-zero"));
        }
        check_dim(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            check_dim(cols, row.len())?;
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// A 1×1 matrix.
    pub fn scalar(value: T) -> Self {
        Self {
            rows: 1,
            cols: 1,
            data: vec![value],
        }
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self {
            rows: self.cols,
            cols: self.rows,
            data: vec![T::zero(); self.data.len()],
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>> {
        check_dim(self.cols, x.len())?;
        Ok((0..self.rows)
            .map(|r| {
                self.data[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }

    /// `self * selfᵀ`.
    pub fn gram(&self) -> Self {
        let n = self.rows;
        let mut out = Self {
            rows: n,
            cols: n,
            data: vec![T::zero(); n * n],
        };
        for i in 0..n {
            for j in 0..=i {
                let v = (0..self.cols).fold(T::zero(), |acc, k| acc + self.get(i, k) * self.get(j, k));
                out.set(i, j, v);
                out.set(j, i, v);
            }
        }
        out
    }

    pub fn is_symmetric(&self, tol: T) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..i).all(|j| (self.get(i, j) - self.get(j, i)).abs() <= tol)
            })
    }

    /// `xᵀ·self·x`.
    pub fn quadratic_form(&self, x: &[T]) -> Result<T> {
        let ax = self.mul_vec(x)?;
        Ok(dot(x, &ax))
    }

    /// Lower-triangular Cholesky factor, `None` unless the matrix is
    /// symmetric positive definite. Pivots below `rel_tol` times the largest
    /// diagonal entry count as zero.
    pub fn cholesky(&self, rel_tol: T) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let scale = (0..n)
            .map(|i| self.get(i, i).abs())
            .fold(T::zero(), T::max);
        if !(scale > T::zero()) {
            return None;
        }
        let floor = rel_tol * scale;
        let mut l = Self {
            rows: n,
            cols: n,
            data: vec![T::zero(); n * n],
        };
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d = d - l.get(j, k) * l.get(j, k);
            }
            if !(d > floor) {
                return None;
            }
            let ljj = d.sqrt();
            l.set(j, j, ljj);
            for i in (j + 1)..n {
                let mut v = self.get(i, j);
                for k in 0..j {
                    v = v - l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, v / ljj);
            }
        }
        Some(l)
    }
}

/// Solves `L·Lᵀ·x = b` given the Cholesky factor `L`.
pub fn cholesky_solve<T: Real>(l: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    let n = l.rows();
    check_dim(n, b.len())?;
    let mut y = vec![T::zero(); n];
    for i in 0..n {
        let mut v = b[i];
        for k in 0..i {
            v = v - l.get(i, k) * y[k];
        }
        y[i] = v / l.get(i, i);
    }
    let mut x = vec![T::zero(); n];
    for i in (0..n).rev() {
        let mut v = y[i];
        for k in (i + 1)..n {
            v = v - l.get(k, i) * x[k];
        }
        x[i] = v / l.get(i, i);
    }
    Ok(x)
}

/// Minimum-norm solution of `A·x = b` for a full-row-rank `A`.
pub fn min_norm_solve<T: Real>(a: &Matrix<T>, b: &[T]) -> Result<Vec<T>> {
    check_dim(a.rows(), b.len())?;
    let l = a
        .gram()
        .cholesky(T::epsilon() * T::lit(64.0))
        .ok_or(Error::RankDeficient)?;
    let w = cholesky_solve(&l, b)?;
    a.transpose().mul_vec(&w)
}

#[inline]
pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

#[inline]
pub fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn scale<T: Real>(k: T, a: &[T]) -> Vec<T> {
    a.iter().map(|&x| k * x).collect()
}

pub fn zeros<T: Real>(n: usize) -> Vec<T> {
    vec![T::zero(); n]
}
