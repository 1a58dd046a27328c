//! Eigenvalues of real symmetric tridiagonal matrices by Sturm-sequence
//! bisection.
//!
//! The eigenvalue count below a shift depends only on the diagonal and on the
//! squared off-diagonal, so flipping the sign of every off-diagonal entry
//! reproduces the spectrum bit for bit.

use crate::error::{check_dims, Error, Result};

/// Symmetric tridiagonal matrix with `diag.len() = n` and `off.len() = n - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off_sq: Vec<f64>,
    bound: f64,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::config("empty tridiagonal matrix"));
        }
        check_dims(diag.len() - 1, off.len())?;
        if diag.iter().chain(off).any(|v| !v.is_finite()) {
            return Err(Error::numerical("non-finite tridiagonal entry"));
        }
        let n = diag.len();
        // Gershgorin radius
        let bound = (0..n)
            .map(|i| {
                let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
                let right = if i + 1 < n { off[i].abs() } else { 0.0 };
                diag[i].abs() + left + right
            })
            .fold(0.0, f64::max);
        Ok(SymTridiagonal {
            off_sq: off.iter().map(|b| b * b).collect(),
            diag,
            bound,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64) -> usize {
        let pivmin = f64::MIN_POSITIVE.max(f64::EPSILON * f64::EPSILON * self.bound * self.bound);
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.diag.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off_sq[i - 1] / q;
            }
            if q == 0.0 {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k`-th smallest eigenvalue (zero-based): the smallest float at
    /// which the Sturm count exceeds `k`.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let pad = self.bound * f64::EPSILON * 4.0 + f64::MIN_POSITIVE;
        let (mut lo, mut hi) = (-self.bound - pad, self.bound + pad);
        for _ in 0..2100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        (0..count.min(self.len()))
            .map(|k| self.eigenvalue(k))
            .collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.lowest(self.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};

    fn dense(diag: &[f64], off: &[f64]) -> DMatrix<f64> {
        let n = diag.len();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                diag[i]
            } else if i + 1 == j {
                off[i]
            } else if j + 1 == i {
                off[j]
            } else {
                0.0
            }
        })
    }

    #[test]
    fn matches_dense_solver() {
        let diag: Vec<f64> = (0..17)
            .map(|i| ((i * 37 % 11) as f64 - 5.0) * 0.7)
            .collect();
        let off: Vec<f64> = (0..16).map(|i| ((i * 13 % 7) as f64 - 3.0) * 0.4).collect();
        let t = SymTridiagonal::new(diag.clone(), &off).unwrap();
        let mut want: Vec<f64> = SymmetricEigen::new(dense(&diag, &off))
            .eigenvalues
            .iter()
            .copied()
            .collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in t.eigenvalues().iter().zip(&want) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn sign_of_off_diagonal_is_irrelevant() {
        let diag = vec![1.0, -2.0, 0.5, 3.0];
        let off = [0.3, -1.7, 2.2];
        let neg: Vec<f64> = off.iter().map(|b| -b).collect();
        let a = SymTridiagonal::new(diag.clone(), &off)
            .unwrap()
            .eigenvalues();
        let b = SymTridiagonal::new(diag, &neg).unwrap().eigenvalues();
        assert_eq!(a, b);
    }

    #[test]
    fn diagonal_degeneracies_are_exact() {
        let t = SymTridiagonal::new(vec![0.25, 0.25, 2.25, 2.25, 0.0], &[0.0; 4]).unwrap();
        assert_eq!(t.eigenvalues(), vec![0.0, 0.25, 0.25, 2.25, 2.25]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(SymTridiagonal::new(vec![], &[]).is_err());
        assert!(SymTridiagonal::new(vec![1.0, 2.0], &[]).is_err());
    }
}
