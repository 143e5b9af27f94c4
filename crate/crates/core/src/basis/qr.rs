//! Column-pivoted Householder QR for dense least squares.

use crate::error::{Error, Result};

/// Dense column-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[col * self.rows + row]
    }

    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[col * self.rows + row] = value;
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.data[col * self.rows..(col + 1) * self.rows]
    }

    pub fn column_mut(&mut self, col: usize) -> &mut [f64] {
        &mut self.data[col * self.rows..(col + 1) * self.rows]
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols, "matrix-vector length mismatch");
        let mut out = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == 0.0 {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.column(j)) {
                *o += a * xj;
            }
        }
        out
    }

    /// `self^T * v`.
    pub fn tr_mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.rows, "matrix-vector length mismatch");
        (0..self.cols)
            .map(|j| self.column(j).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_columns(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(a * self.rows + i, b * self.rows + i);
        }
    }
}

/// Factorization `A P = Q R` of a tall matrix with full column rank.
///
/// Householder vectors are stored below the diagonal of `factors`; `R`
/// occupies the upper triangle.
#[derive(Debug, Clone)]
pub struct QrFactorization {
    factors: Matrix,
    tau: Vec<f64>,
    perm: Vec<usize>,
    condition: f64,
}

impl QrFactorization {
    /// Factorizes `a`, rejecting it when a pivot falls below
    /// `rank_tol` (absolute). `None` selects `eps * sqrt(rows) * max column
    /// norm`, which admits condition numbers up to a few times 1e14.
    pub fn new(a: &Matrix, rank_tol: Option<f64>) -> Result<Self> {
        let (m, n) = (a.rows, a.cols);
        if n > m {
            return Err(Error::OverdeterminedBasis {
                params: n,
                points: m,
            });
        }
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut norms: Vec<f64> = (0..n).map(|j| sq_norm(f.column(j))).collect();
        let max_norm = norms.iter().copied().fold(0.0_f64, f64::max).sqrt();
        let tol = rank_tol.unwrap_or(f64::EPSILON * (m as f64).sqrt() * max_norm);
        let mut tau = vec![0.0; n];

        for k in 0..n {
            // Recompute trailing norms exactly; the downdating shortcut loses
            // accuracy on the ill-conditioned Chebyshev designs.
            for (j, norm) in norms.iter_mut().enumerate().skip(k) {
                *norm = sq_norm(&f.column(j)[k..]);
            }
            let pivot = (k..n)
                .max_by(|&i, &j| norms[i].total_cmp(&norms[j]).then(j.cmp(&i)))
                .expect("non-empty pivot range");
            f.swap_columns(k, pivot);
            norms.swap(k, pivot);
            perm.swap(k, pivot);

            let col = &mut f.column_mut(k)[k..];
            let alpha = sq_norm(col).sqrt();
            if alpha <= tol {
                let condition = condition_from_diag(&f, k, alpha);
                return Err(Error::SingularDesign { condition });
            }
            let beta = if col[0] > 0.0 { -alpha } else { alpha };
            let v0 = col[0] - beta;
            for v in col[1..].iter_mut() {
                *v /= v0;
            }
            col[0] = beta;
            tau[k] = -v0 / beta;

            for j in k + 1..n {
                let (head, tail) = f.data.split_at_mut(j * m);
                let v = &head[k * m + k..k * m + m];
                let c = &mut tail[k..m];
                let mut dot = c[0];
                for (ci, vi) in c[1..].iter().zip(&v[1..]) {
                    dot += ci * vi;
                }
                dot *= tau[k];
                c[0] -= dot;
                for (ci, vi) in c[1..].iter_mut().zip(&v[1..]) {
                    *ci -= dot * vi;
                }
            }
        }

        let condition = condition_from_diag(&f, n, f64::NAN);
        Ok(Self {
            factors: f,
            tau,
            perm,
            condition,
        })
    }

    /// Ratio of largest to smallest `|R_kk|`, a cheap lower bound on the
    /// 2-norm condition number.
    pub fn condition_estimate(&self) -> f64 {
        self.condition
    }

    pub fn rows(&self) -> usize {
        self.factors.rows
    }

    pub fn cols(&self) -> usize {
        self.factors.cols
    }

    /// Applies `Q^T` in place.
    fn apply_qt(&self, y: &mut [f64]) {
        let m = self.factors.rows;
        for k in 0..self.factors.cols {
            let v = &self.factors.column(k)[k..m];
            let tail = &mut y[k..m];
            let mut dot = tail[0];
            for (yi, vi) in tail[1..].iter().zip(&v[1..]) {
                dot += yi * vi;
            }
            dot *= self.tau[k];
            tail[0] -= dot;
            for (yi, vi) in tail[1..].iter_mut().zip(&v[1..]) {
                *yi -= dot * vi;
            }
        }
    }

    /// Applies `Q` in place.
    fn apply_q(&self, y: &mut [f64]) {
        let m = self.factors.rows;
        for k in (0..self.factors.cols).rev() {
            let v = &self.factors.column(k)[k..m];
            let tail = &mut y[k..m];
            let mut dot = tail[0];
            for (yi, vi) in tail[1..].iter().zip(&v[1..]) {
                dot += yi * vi;
            }
            dot *= self.tau[k];
            tail[0] -= dot;
            for (yi, vi) in tail[1..].iter_mut().zip(&v[1..]) {
                *yi -= dot * vi;
            }
        }
    }

    /// Least-squares coefficients and residuals `y - A x` for one right-hand
    /// side.
    ///
    /// Residuals are formed as `Q [0; (Q^T y)_tail]`, which keeps them
    /// orthogonal to the column space to working precision even when the
    /// coefficients themselves are poorly determined.
    pub fn solve(&self, y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (m, n) = (self.factors.rows, self.factors.cols);
        assert_eq!(y.len(), m, "right-hand side length mismatch");
        let mut qty = y.to_vec();
        self.apply_qt(&mut qty);

        let mut z = qty[..n].to_vec();
        for k in (0..n).rev() {
            let mut s = z[k];
            for (j, zj) in z.iter().enumerate().skip(k + 1) {
                s -= self.factors.get(k, j) * zj;
            }
            z[k] = s / self.factors.get(k, k);
        }
        let mut coef = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            coef[p] = z[k];
        }

        let mut resid = qty;
        resid[..n].iter_mut().for_each(|v| *v = 0.0);
        self.apply_q(&mut resid);
        (coef, resid)
    }
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

fn condition_from_diag(f: &Matrix, upto: usize, extra: f64) -> f64 {
    let mut max = 0.0_f64;
    let mut min = f64::INFINITY;
    for k in 0..upto {
        let d = f.get(k, k).abs();
        max = max.max(d);
        min = min.min(d);
    }
    if !extra.is_nan() {
        max = max.max(extra);
        min = min.min(extra);
    }
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[f64]]) -> Matrix {
        let mut a = Matrix::zeros(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                a.set(i, j, v);
            }
        }
        a
    }

    #[test]
    fn exact_line_fit() {
        let a = from_rows(&[&[1.0, 0.0], &[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
        let y = [1.0, 3.0, 5.0, 7.0];
        let qr = QrFactorization::new(&a, None).unwrap();
        let (coef, resid) = qr.solve(&y);
        assert!((coef[0] - 1.0).abs() < 1e-13);
        assert!((coef[1] - 2.0).abs() < 1e-13);
        assert!(resid.iter().all(|r| r.abs() < 1e-13));
    }

    #[test]
    fn residual_is_orthogonal() {
        let a = from_rows(&[
            &[1.0, 0.3],
            &[1.0, -1.0],
            &[1.0, 2.0],
            &[1.0, 0.5],
            &[1.0, 4.0],
        ]);
        let y = [0.2, -0.7, 1.9, 0.0, 3.3];
        let (coef, resid) = QrFactorization::new(&a, None).unwrap().solve(&y);
        for g in a.tr_mul_vec(&resid) {
            assert!(g.abs() < 1e-13);
        }
        let fitted = a.mul_vec(&coef);
        for i in 0..5 {
            assert!((y[i] - fitted[i] - resid[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let a = from_rows(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]]);
        let err = QrFactorization::new(&a, None).unwrap_err();
        assert!(matches!(err, Error::SingularDesign { .. }));
    }

    #[test]
    fn wide_matrix_is_rejected() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(
            QrFactorization::new(&a, None),
            Err(Error::OverdeterminedBasis {
                params: 3,
                points: 2
            })
        ));
    }
}
