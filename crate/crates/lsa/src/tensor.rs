//! Dense rank-3 complex tensor for structure constants at small dimension.

use nalgebra::DVector;

use crate::{error::LsaError, C64};

/// Cubic `n×n×n` tensor stored row-major: entry `(i,j,k)` at `i*n*n + j*n + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 { n, data: vec![C64::new(0.0, 0.0); n * n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut t = Tensor3::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C64) {
        self.data[(i * self.n + j) * self.n + k] = v;
    }

    pub fn check_finite(&self) -> Result<(), LsaError> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    if !v.re.is_finite() || !v.im.is_finite() {
                        return Err(LsaError::NonFiniteEntry(vec![i, j, k]));
                    }
                }
            }
        }
        Ok(())
    }

    /// Bilinear extension: coefficients of `x·y` where the tensor gives the
    /// products of basis vectors, `e_i·e_j = Σ_k t[i][j][k] e_k`.
    pub fn apply(&self, x: &DVector<C64>, y: &DVector<C64>) -> DVector<C64> {
        let n = self.n;
        let mut out = DVector::from_element(n, C64::new(0.0, 0.0));
        for i in 0..n {
            if x[i] == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                let s = x[i] * y[j];
                for k in 0..n {
                    out[k] += s * self.get(i, j, k);
                }
            }
        }
        out
    }

    /// Product of basis vectors `e_i·e_j` as a coefficient vector.
    pub fn basis_product(&self, i: usize, j: usize) -> DVector<C64> {
        DVector::from_fn(self.n, |k, _| self.get(i, j, k))
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Entry of largest magnitude, as `((i,j,k), |value|)`.
    pub fn worst_entry(&self) -> ((usize, usize, usize), f64) {
        let mut worst = ((0, 0, 0), 0.0);
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let a = self.get(i, j, k).norm();
                    if a > worst.1 {
                        worst = ((i, j, k), a);
                    }
                }
            }
        }
        worst
    }
}

/// Unit coefficient vector for basis index `i`.
pub fn basis_vector(n: usize, i: usize) -> DVector<C64> {
    let mut v = DVector::from_element(n, C64::new(0.0, 0.0));
    v[i] = C64::new(1.0, 0.0);
    v
}

/// Max-norm of a coefficient vector.
pub fn vec_max_norm(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
