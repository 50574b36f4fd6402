use alloc::vec::Vec;

use super::{QVec, Rat};
use crate::error::{check_dim, Error, Result};

/// Dense row-major rational matrix. The column count is stored explicitly so
/// that a matrix with no rows still knows its width.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    cols: usize,
    rows: Vec<QVec>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<QVec>, cols: usize) -> Result<Matrix> {
        for r in &rows {
            check_dim(cols, r.dim())?;
        }
        Ok(Matrix { cols, rows })
    }

    /// Width taken from the first row; panics on an empty list or ragged rows.
    pub fn from_int_rows(rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map(|r| r.len()).expect("at least one row");
        Matrix::from_rows(rows.iter().map(|r| QVec::from_ints(r)).collect(), cols)
            .expect("rectangular")
    }

    pub fn identity(n: usize) -> Matrix {
        Matrix {
            cols: n,
            rows: (0..n).map(|i| QVec::unit(n, i)).collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[QVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &QVec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.rows[i][j]
    }

    pub fn transpose(&self) -> Matrix {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Matrix {
            cols: self.rows.len(),
            rows,
        }
    }

    pub fn mul_vec(&self, x: &QVec) -> Result<QVec> {
        check_dim(self.cols, x.dim())?;
        Ok(self.rows.iter().map(|r| r.dot(x)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        check_dim(self.cols, other.nrows())?;
        let t = other.transpose();
        let rows = self
            .rows
            .iter()
            .map(|r| t.rows.iter().map(|c| r.dot(c)).collect())
            .collect();
        Ok(Matrix {
            cols: other.cols,
            rows,
        })
    }

    pub fn is_symmetric(&self) -> bool {
        self.nrows() == self.cols
            && (0..self.cols).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Symmetric positive definiteness via exact LDLᵀ: all pivots of
    /// elimination without row exchanges must be positive.
    pub fn is_positive_definite(&self) -> bool {
        if !self.is_symmetric() {
            return false;
        }
        let n = self.cols;
        let mut a: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.entries().to_vec()).collect();
        for k in 0..n {
            if !a[k][k].is_positive() {
                return false;
            }
            let (top, rest) = a.split_at_mut(k + 1);
            let pivot = &top[k];
            for row in rest {
                let f = &row[k] / &pivot[k];
                for (x, p) in row.iter_mut().zip(pivot).skip(k) {
                    *x -= &(&f * p);
                }
            }
        }
        true
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut rows: Vec<Vec<Rat>> = self.rows.iter().map(|r| r.entries().to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][c].recip().expect("nonzero pivot");
            for x in rows[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * p);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let m = Matrix {
            cols: self.cols,
            rows: rows.into_iter().map(QVec::new).collect(),
        };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A solution of `self · x = y` with every free variable set to zero, or
    /// `None` when the system is inconsistent.
    pub fn particular_solution(&self, y: &QVec) -> Result<Option<QVec>> {
        check_dim(self.nrows(), y.dim())?;
        let augmented = Matrix {
            cols: self.cols + 1,
            rows: self
                .rows
                .iter()
                .zip(y.iter())
                .map(|(r, yi)| r.iter().cloned().chain(core::iter::once(yi.clone())).collect())
                .collect(),
        };
        let (red, pivots) = augmented.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = QVec::zeros(self.cols).into_entries();
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = red.get(i, self.cols).clone();
        }
        Ok(Some(QVec::new(x)))
    }
}

/// Solves `a · x = y` exactly.
///
/// When the system is underdetermined the returned solution is the one
/// orthogonal (standard dot product) to the kernel of `a`, i.e. the unique
/// solution lying in the row space: `x = aᵀ z` with `a aᵀ z = y`.
pub fn lin_solve(a: &Matrix, y: &QVec) -> Result<Option<QVec>> {
    check_dim(a.nrows(), y.dim())?;
    if a.particular_solution(y)?.is_none() {
        return Ok(None);
    }
    let at = a.transpose();
    let gram = a.mul(&at)?;
    let z = gram
        .particular_solution(y)?
        .ok_or_else(|| Error::InvalidInput("normal equations inconsistent".into()))?;
    let x = at.mul_vec(&z)?;
    debug_assert_eq!(a.mul_vec(&x).ok().as_ref(), Some(y));
    Ok(Some(x))
}

/// A basis of `{x : a · x = 0}`, one vector per free column of the reduced
/// row echelon form. Empty exactly when `a` has full column rank.
pub fn kernel_basis(a: &Matrix) -> Vec<QVec> {
    let (red, pivots) = a.rref();
    let n = a.ncols();
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = QVec::zeros(n).into_entries();
            x[free] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -red.get(i, free);
            }
            QVec::new(x)
        })
        .collect()
}
