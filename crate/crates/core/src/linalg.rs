//! Dense real matrices, a cyclic Jacobi eigensolver for symmetric matrices,
//! and the Euclidean logarithmic norm.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    a: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix { n, a: vec![0.0; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.a[i * n + j] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        Matrix::from_fn(n, |i, j| rows[i][j])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.n + j] += v;
    }

    /// (A + A^t) / 2.
    pub fn symmetric_part(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            out[i] = row.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Eigenvalues (and optionally the orthogonal eigenbasis) of a symmetric
/// matrix by cyclic Jacobi rotations.
pub fn jacobi_eigen(sym: &Matrix, want_vectors: bool) -> (Vec<f64>, Option<Matrix>) {
    let n = sym.n();
    let mut a = sym.clone();
    let mut v = if want_vectors {
        Some(Matrix::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 }))
    } else {
        None
    };
    if n == 0 {
        return (Vec::new(), v);
    }
    let scale = a.frobenius_norm().max(1e-300);
    for _sweep in 0..60 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a.get(i, j) * a.get(i, j);
            }
        }
        if off.sqrt() <= 1e-14 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a.get(i, p);
                    let aiq = a.get(i, q);
                    a.set(i, p, c * aip - s * aiq);
                    a.set(i, q, s * aip + c * aiq);
                }
                for j in 0..n {
                    let apj = a.get(p, j);
                    let aqj = a.get(q, j);
                    a.set(p, j, c * apj - s * aqj);
                    a.set(q, j, s * apj + c * aqj);
                }
                if let Some(vm) = v.as_mut() {
                    for i in 0..n {
                        let vip = vm.get(i, p);
                        let viq = vm.get(i, q);
                        vm.set(i, p, c * vip - s * viq);
                        vm.set(i, q, s * vip + c * viq);
                    }
                }
            }
        }
    }
    let vals = (0..n).map(|i| a.get(i, i)).collect();
    (vals, v)
}

/// Euclidean logarithmic norm: the largest eigenvalue of (A + A^t)/2.
pub fn log_norm_euclidean(a: &Matrix) -> f64 {
    let (vals, _) = jacobi_eigen(&a.symmetric_part(), false);
    vals.into_iter().fold(f64::NEG_INFINITY, f64::max)
}

/// Gershgorin upper bound for the logarithmic norm:
/// max_i ( Sym(A)_ii + sum_{j != i} |Sym(A)_ij| ). Always >= the exact value.
pub fn gershgorin_log_norm(a: &Matrix) -> f64 {
    let s = a.symmetric_part();
    let n = s.n();
    let mut worst = f64::NEG_INFINITY;
    for i in 0..n {
        let mut row = s.get(i, i);
        for j in 0..n {
            if j != i {
                row += s.get(i, j).abs();
            }
        }
        worst = worst.max(row);
    }
    worst
}
