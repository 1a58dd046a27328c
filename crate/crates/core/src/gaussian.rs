//! Closed-form expectation values of the pair-exponential state
//! `|Psi> ∝ exp(sum_ij Psi_ij c†_{i↑} c†_{j↓}) |0>`.
//!
//! Conventions used throughout the crate:
//!
//! * pair matrix `F_ij = <c_{j↓} c_{i↑}> = [Psi (1 + Psi† Psi)^{-1}]_ij`
//! * one-body matrices `rho^σ_ij = <c†_{iσ} c_{jσ}>`
//! * a site-resolved phase profile enters as `Psi -> D Psi D` with
//!   `D = diag(exp(i phi_i / 2))`, which is the same state as
//!   `exp(i sum_i phi_i n_i / 2) |Psi>`.
//!
//! For a real symmetric amplitude matrix the formulas reduce to
//! `F = Psi (1 + Psi^2)^{-1}` and `rho^↑ = rho^↓ = Psi^2 (1 + Psi^2)^{-1}`;
//! those are evaluated through the eigendecomposition of `Psi`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{check_dims, Error, Result};
use crate::linalg::{self, CMatrix};

/// Tolerated asymmetry of a real amplitude matrix, relative to its largest
/// entry.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    psi: CMatrix,
}

impl GaussianState {
    pub fn new(psi: CMatrix) -> Result<Self> {
        if !psi.is_square() {
            return Err(Error::DimensionMismatch {
                expected: psi.nrows(),
                actual: psi.ncols(),
            });
        }
        if linalg::has_nan(&psi) {
            return Err(Error::numerical("non-finite pair amplitude"));
        }
        Ok(GaussianState { psi })
    }

    pub fn vacuum(n: usize) -> Self {
        GaussianState {
            psi: CMatrix::zeros(n, n),
        }
    }

    /// `exp(i phase) * amplitude`.
    pub fn from_real(amplitude: &DMatrix<f64>, phase: f64) -> Result<Self> {
        let rot = Complex64::from_polar(1.0, phase);
        Self::new(linalg::to_complex(amplitude) * rot)
    }

    /// `D amplitude D` with `D = diag(exp(i phases_i / 2))`.
    pub fn with_site_phases(amplitude: &DMatrix<f64>, phases: &[f64]) -> Result<Self> {
        check_dims(amplitude.nrows(), phases.len())?;
        let d: Vec<Complex64> = phases
            .iter()
            .map(|p| Complex64::from_polar(1.0, 0.5 * p))
            .collect();
        let psi = CMatrix::from_fn(amplitude.nrows(), amplitude.ncols(), |i, j| {
            d[i] * amplitude[(i, j)] * d[j]
        });
        Self::new(psi)
    }

    /// Applies `exp(i sum_i phases_i n_i / 2)` to this state.
    pub fn twisted(&self, phases: &[f64]) -> Result<Self> {
        check_dims(self.n_sites(), phases.len())?;
        let d: Vec<Complex64> = phases
            .iter()
            .map(|p| Complex64::from_polar(1.0, 0.5 * p))
            .collect();
        let psi = CMatrix::from_fn(self.n_sites(), self.n_sites(), |i, j| {
            d[i] * self.psi[(i, j)] * d[j]
        });
        Self::new(psi)
    }

    pub fn n_sites(&self) -> usize {
        self.psi.nrows()
    }

    pub fn amplitudes(&self) -> &CMatrix {
        &self.psi
    }

    /// `F = Psi (1 + Psi† Psi)^{-1}`, with `F_ij = <c_{j↓} c_{i↑}>`.
    pub fn pair_matrix(&self) -> Result<CMatrix> {
        let n = self.n_sites();
        let gram = linalg::identity(n) + self.psi.adjoint() * &self.psi;
        linalg::solve_right(&self.psi, &gram)
    }

    /// `rho^↑_ij = <c†_{i↑} c_{j↑}> = [Psi Psi† (1 + Psi Psi†)^{-1}]_ji`.
    pub fn one_body_up(&self) -> Result<CMatrix> {
        let n = self.n_sites();
        let p = &self.psi * self.psi.adjoint();
        let occ = linalg::solve_right(&p, &(linalg::identity(n) + &p))?;
        Ok(occ.transpose())
    }

    /// `rho^↓_ij = <c†_{i↓} c_{j↓}> = [Psi^T Psi* (1 + Psi^T Psi*)^{-1}]_ji`.
    pub fn one_body_down(&self) -> Result<CMatrix> {
        let n = self.n_sites();
        let p = self.psi.transpose() * self.psi.conjugate();
        let occ = linalg::solve_right(&p, &(linalg::identity(n) + &p))?;
        Ok(occ.transpose())
    }

    /// `ln <Psi|Psi>` of the unnormalized pair exponential,
    /// `ln det(1 + Psi† Psi)`.
    pub fn log_norm_sq(&self) -> Result<f64> {
        let n = self.n_sites();
        Ok(linalg::log_det(&(linalg::identity(n) + self.psi.adjoint() * &self.psi))?.re)
    }

    /// Overlap of the normalized states,
    /// `det(1 + Psi_a† Psi_b) / sqrt(det(1 + Psi_a† Psi_a) det(1 + Psi_b† Psi_b))`.
    pub fn overlap(&self, other: &GaussianState) -> Result<Complex64> {
        Ok(self.log_overlap(other)?.exp())
    }

    /// Complex logarithm of [`GaussianState::overlap`]; its real part stays
    /// finite when the overlap underflows.
    pub fn log_overlap(&self, other: &GaussianState) -> Result<Complex64> {
        check_dims(self.n_sites(), other.n_sites())?;
        let n = self.n_sites();
        let cross = linalg::log_det(&(linalg::identity(n) + self.psi.adjoint() * &other.psi))?;
        Ok(cross - 0.5 * (self.log_norm_sq()? + other.log_norm_sq()?))
    }

    /// `<H>` of the Hubbard model with single-particle matrix `h` and on-site
    /// attraction `interaction`, via Wick's theorem:
    /// `sum_ij h_ij (rho^↑_ij + rho^↓_ij) - U sum_i (n_i↑ n_i↓ + |F_ii|^2)`.
    pub fn energy(&self, h: &DMatrix<f64>, interaction: f64) -> Result<f64> {
        check_dims(self.n_sites(), h.nrows())?;
        let up = self.one_body_up()?;
        let down = self.one_body_down()?;
        let pair = self.pair_matrix()?;
        let n = self.n_sites();
        let mut kinetic = 0.0;
        for i in 0..n {
            for j in 0..n {
                kinetic += h[(i, j)] * (up[(i, j)] + down[(i, j)]).re;
            }
        }
        let double_occ: f64 = (0..n)
            .map(|i| up[(i, i)].re * down[(i, i)].re + pair[(i, i)].norm_sqr())
            .sum();
        Ok(kinetic - interaction * double_occ)
    }
}

/// Pair correlator of a real symmetric amplitude matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PairCorrelator {
    /// `Psi (1 + Psi^2)^{-1}`.
    pub matrix: DMatrix<f64>,
    /// Diagonal `<c_{i↓} c_{i↑}>` before the global phase is applied.
    pub on_site: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    /// `Psi^2 (1 + Psi^2)^{-1}`, identical for both spin species.
    pub one_body: DMatrix<f64>,
    pub n_up: Vec<f64>,
    pub n_down: Vec<f64>,
}

struct Spectral {
    vectors: DMatrix<f64>,
    values: Vec<f64>,
}

impl Spectral {
    fn of(psi_bar: &DMatrix<f64>) -> Result<Self> {
        check_symmetric(psi_bar)?;
        let eig = SymmetricEigen::new(psi_bar.clone());
        let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        let s = Spectral {
            vectors: eig.eigenvectors,
            values,
        };
        let recon = s.apply(|x| x);
        let err = linalg::max_abs_real(&(recon - psi_bar));
        if !err.is_finite() || err > 1e-10 * (1.0 + linalg::max_abs_real(psi_bar)) {
            return Err(Error::numerical(format!(
                "eigendecomposition residual {err:.3e}"
            )));
        }
        Ok(s)
    }

    fn apply(&self, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for k in 0..n {
            let fk = f(self.values[k]);
            scaled.column_mut(k).scale_mut(fk);
        }
        linalg::symmetrize(&(scaled * self.vectors.transpose()))
    }
}

pub(crate) fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::numerical("non-finite pair amplitude"));
    }
    let asym = linalg::max_abs_real(&(m - m.transpose()));
    if asym > SYMMETRY_TOL * linalg::max_abs_real(m).max(1.0) {
        return Err(Error::config(format!(
            "amplitude matrix is not symmetric (max asymmetry {asym:.3e})"
        )));
    }
    Ok(())
}

pub fn gaussian_pair_correlator(psi_bar: &DMatrix<f64>) -> Result<PairCorrelator> {
    let matrix = Spectral::of(psi_bar)?.apply(|s| s / (1.0 + s * s));
    let on_site = matrix.diagonal().iter().copied().collect();
    Ok(PairCorrelator { matrix, on_site })
}

pub fn gaussian_density(psi_bar: &DMatrix<f64>) -> Result<Density> {
    let one_body = Spectral::of(psi_bar)?.apply(|s| s * s / (1.0 + s * s));
    let n_up: Vec<f64> = one_body.diagonal().iter().copied().collect();
    Ok(Density {
        n_down: n_up.clone(),
        n_up,
        one_body,
    })
}

/// Overlap of two phase-dressed real amplitude matrices, each site phase
/// entering as `D Psi D`.
pub fn gaussian_overlap(
    psi_a: &DMatrix<f64>,
    phases_a: &[f64],
    psi_b: &DMatrix<f64>,
    phases_b: &[f64],
) -> Result<Complex64> {
    check_dims(psi_a.nrows(), psi_b.nrows())?;
    let a = GaussianState::with_site_phases(psi_a, phases_a)?;
    let b = GaussianState::with_site_phases(psi_b, phases_b)?;
    a.overlap(&b)
}
