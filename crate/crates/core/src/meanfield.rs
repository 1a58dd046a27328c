//! Self-consistent Gaussian ground states of the attractive Hubbard model.
//!
//! The solver iterates Bogoliubov-de Gennes diagonalizations of the
//! mean-field Hamiltonian (pairing field `Delta_i`, Hartree shifts
//! `U n_{iσ}`), reads the pair amplitude matrix back out of the
//! quasiparticle vacuum and mixes it linearly with the previous iterate.
//! Convergence is certified by the stationarity residual
//!
//! ```text
//! R = h'_↑ Psi + Psi h'_↓ + Delta - Psi Delta* Psi,   h'_σ = h - U diag(n_{-σ})
//! ```
//!
//! which vanishes exactly at stationary points of `<GS|H|GS>`.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::gaussian::{check_symmetric, gaussian_density, gaussian_pair_correlator, GaussianState};
use crate::lattice::{build_lattice, hamiltonian_matrix, LatticeSpec};
use crate::linalg::{self, CMatrix};

/// Largest occupation used when a normal-state Fermi sea has to be written
/// as a finite amplitude matrix.
const NORMAL_OCCUPATION_CAP: f64 = 1.0 - 1e-12;

/// Gap magnitude (units of t) below which a fixed point is reported as the
/// normal branch.
const NORMAL_GAP_THRESHOLD: f64 = 1e-8;

/// Real amplitude matrix `Psi_bar` and the common phase `phi`, so that the
/// pair amplitudes are `exp(i phi) Psi_bar`.
///
/// Signs of individual amplitudes live in `Psi_bar`; the phase carries only
/// the global U(1) direction.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingState {
    pub amplitude: DMatrix<f64>,
    pub phase: f64,
}

impl PairingState {
    pub fn new(amplitude: DMatrix<f64>, phase: f64) -> Result<Self> {
        check_symmetric(&amplitude)?;
        if !phase.is_finite() {
            return Err(Error::config("phase must be finite"));
        }
        Ok(PairingState {
            amplitude,
            phase: phase.rem_euclid(TAU),
        })
    }

    /// `amplitude * I`, the default symmetry-breaking seed.
    pub fn uniform_diagonal(n_sites: usize, amplitude: f64, phase: f64) -> Self {
        PairingState {
            amplitude: DMatrix::identity(n_sites, n_sites) * amplitude,
            phase: phase.rem_euclid(TAU),
        }
    }

    pub fn n_sites(&self) -> usize {
        self.amplitude.nrows()
    }

    pub fn to_gaussian(&self) -> Result<GaussianState> {
        GaussianState::from_real(&self.amplitude, self.phase)
    }

    /// The same amplitudes under a global rotation `phi -> phi + theta`.
    pub fn rotated(&self, theta: f64) -> Self {
        PairingState {
            amplitude: self.amplitude.clone(),
            phase: (self.phase + theta).rem_euclid(TAU),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Nonzero gap.
    Superconducting,
    /// `Delta = 0`: either the vacuum fixed point or a Fermi sea that has no
    /// finite pair amplitude.
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    #[serde(default = "SolverOptions::default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "SolverOptions::default_max_iter")]
    pub max_iter: usize,
    #[serde(default = "SolverOptions::default_mixing")]
    pub mixing: f64,
}

impl SolverOptions {
    fn default_tolerance() -> f64 {
        1e-8
    }
    fn default_max_iter() -> usize {
        2000
    }
    fn default_mixing() -> f64 {
        0.5
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::config("solver tolerance must be > 0"));
        }
        if !(self.mixing > 0.0 && self.mixing <= 1.0) {
            return Err(Error::config("mixing must lie in (0, 1]"));
        }
        Ok(())
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: Self::default_tolerance(),
            max_iter: Self::default_max_iter(),
            mixing: Self::default_mixing(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanFieldSolution {
    pub pairing: PairingState,
    /// `Delta_i = -U <c_{i↓} c_{i↑}>`, including the global phase.
    pub gap: Vec<Complex64>,
    pub n_up: Vec<f64>,
    pub n_down: Vec<f64>,
    /// Spin-summed one-body matrix `sum_σ <c†_{iσ} c_{jσ}>`.
    pub rho: DMatrix<f64>,
    pub energy: f64,
    /// Max-abs entry of the stationarity residual.
    pub residual_norm: f64,
    /// Amplitude-weighted departure from a common phase,
    /// `max_ij |Psi_ij| |sin(phi_ij - phi)| / max_ij |Psi_ij|`.
    pub phase_deviation: f64,
    pub iterations: usize,
    pub converged: bool,
    pub branch: Branch,
}

impl MeanFieldSolution {
    pub fn n_sites(&self) -> usize {
        self.pairing.n_sites()
    }

    pub fn max_gap(&self) -> f64 {
        self.gap.iter().map(|d| d.norm()).fold(0.0, f64::max)
    }
}

struct Observables {
    n_up: Vec<f64>,
    n_down: Vec<f64>,
    gap: Vec<Complex64>,
}

fn observables(state: &GaussianState, interaction: f64) -> Result<Observables> {
    let pair = state.pair_matrix()?;
    let up = state.one_body_up()?;
    let down = state.one_body_down()?;
    let n = state.n_sites();
    let gap = (0..n).map(|i| -interaction * pair[(i, i)]).collect();
    Ok(Observables {
        n_up: (0..n).map(|i| up[(i, i)].re).collect(),
        n_down: (0..n).map(|i| down[(i, i)].re).collect(),
        gap,
    })
}

fn shifted(h: &DMatrix<f64>, interaction: f64, density: &[f64]) -> DMatrix<f64> {
    let mut out = h.clone();
    for (i, n) in density.iter().enumerate() {
        out[(i, i)] -= interaction * n;
    }
    out
}

/// Stationarity residual of a (possibly complex) pair amplitude matrix, with
/// densities and gaps recomputed from the amplitudes themselves.
pub fn stationarity_residual(
    state: &GaussianState,
    h: &DMatrix<f64>,
    interaction: f64,
) -> Result<CMatrix> {
    check_dims(state.n_sites(), h.nrows())?;
    let obs = observables(state, interaction)?;
    Ok(residual_from(state.amplitudes(), h, interaction, &obs))
}

fn residual_from(psi: &CMatrix, h: &DMatrix<f64>, interaction: f64, obs: &Observables) -> CMatrix {
    let n = psi.nrows();
    let h_up = linalg::to_complex(&shifted(h, interaction, &obs.n_down));
    let h_down = linalg::to_complex(&shifted(h, interaction, &obs.n_up));
    let mut r = &h_up * psi + psi * h_down.transpose();
    let mut psi_gap = psi.clone();
    for m in 0..n {
        let g = obs.gap[m].conj();
        psi_gap.column_mut(m).iter_mut().for_each(|z| *z *= g);
    }
    r -= psi_gap * psi;
    for i in 0..n {
        r[(i, i)] += obs.gap[i];
    }
    r
}

/// Stationarity residual of a real amplitude matrix (the global phase only
/// rotates the residual, so it is evaluated at `phi = 0`).
pub fn residual(pairing: &PairingState, spec: &LatticeSpec) -> Result<DMatrix<f64>> {
    check_dims(spec.num_sites(), pairing.n_sites())?;
    let graph = build_lattice(spec)?;
    let h = hamiltonian_matrix(&graph, spec)?;
    let state = GaussianState::from_real(&pairing.amplitude, 0.0)?;
    Ok(stationarity_residual(&state, &h, spec.interaction)?.map(|z| z.re))
}

/// `<GS|H|GS>` in units of t, evaluated on the phase-dressed state.
pub fn free_energy(pairing: &PairingState, spec: &LatticeSpec) -> Result<f64> {
    check_dims(spec.num_sites(), pairing.n_sites())?;
    let graph = build_lattice(spec)?;
    let h = hamiltonian_matrix(&graph, spec)?;
    pairing.to_gaussian()?.energy(&h, spec.interaction)
}

/// Quasiparticle vacuum of the BdG Hamiltonian, returned as its pair
/// amplitude matrix. `None` when the vacuum contains fully occupied orbitals
/// (a normal Fermi sea with no finite pair amplitude).
fn bdg_ground_state(h: &DMatrix<f64>, interaction: f64, obs: &Observables) -> Result<BdgOutcome> {
    let n = h.nrows();
    let h_up = shifted(h, interaction, &obs.n_down);
    let h_down = shifted(h, interaction, &obs.n_up);
    let mut m = CMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = Complex64::new(h_up[(i, j)], 0.0);
            m[(n + i, n + j)] = Complex64::new(-h_down[(j, i)], 0.0);
        }
        m[(i, n + i)] = obs.gap[i];
        m[(n + i, i)] = obs.gap[i].conj();
    }
    let eig = SymmetricEigen::new(m);
    let occupied: Vec<usize> = (0..2 * n).filter(|&k| eig.eigenvalues[k] < 0.0).collect();
    // <d†_a d_b> over the filled negative-energy modes, d = (c_↑, c†_↓)
    let w = eig.eigenvectors.select_columns(&occupied);
    let corr = w.conjugate() * w.transpose();
    let rho_up = corr.view((0, 0), (n, n)).into_owned();
    let pair = corr.view((0, n), (n, n)).map(|z| z.conj());
    let hole = linalg::identity(n) - rho_up.transpose();

    let hole_min = SymmetricEigen::new(hole.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if hole_min < 1.0 - NORMAL_OCCUPATION_CAP {
        return Ok(BdgOutcome::FermiSea(rho_up.map(|z| z.re)));
    }
    Ok(BdgOutcome::Paired(linalg::solve(&hole, &pair)?))
}

enum BdgOutcome {
    Paired(CMatrix),
    FermiSea(DMatrix<f64>),
}

/// Amplitude matrix whose occupations match `rho` with every orbital capped
/// just below full occupation.
fn fermi_sea_amplitude(rho: &DMatrix<f64>) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(linalg::symmetrize(rho));
    let mut v = eig.eigenvectors.clone();
    for k in 0..rho.nrows() {
        let occ = eig.eigenvalues[k].clamp(0.0, NORMAL_OCCUPATION_CAP);
        v.column_mut(k).scale_mut((occ / (1.0 - occ)).sqrt());
    }
    linalg::symmetrize(&(v * eig.eigenvectors.transpose()))
}

/// Global phase of a complex amplitude matrix: the phase of its trace, or of
/// its largest entry when the trace vanishes.
fn global_phase(psi: &CMatrix) -> f64 {
    let scale = linalg::max_abs(psi);
    if scale == 0.0 {
        return 0.0;
    }
    let trace = psi.trace();
    let z = if trace.norm() > 1e-8 * scale {
        trace
    } else {
        *psi.iter()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap()
    };
    z.arg().rem_euclid(TAU)
}

fn phase_deviation(psi: &CMatrix, phase: f64) -> f64 {
    let scale = linalg::max_abs(psi);
    if scale == 0.0 {
        return 0.0;
    }
    let rot = Complex64::from_polar(1.0, -phase);
    psi.iter().map(|z| (z * rot).im.abs()).fold(0.0, f64::max) / scale
}

/// Assembles the reported solution from the final complex iterate. All
/// observables are recomputed from the real amplitude matrix.
fn finish(
    psi: &CMatrix,
    spec: &LatticeSpec,
    h: &DMatrix<f64>,
    iterations: usize,
    residual_norm: f64,
    tolerance: f64,
    fermi_sea: Option<DMatrix<f64>>,
) -> Result<MeanFieldSolution> {
    let (phase, amplitude, deviation) = match &fermi_sea {
        Some(rho) => (0.0, fermi_sea_amplitude(rho), 0.0),
        None => {
            let phase = global_phase(psi);
            let rot = Complex64::from_polar(1.0, -phase);
            let real = psi.map(|z| (z * rot).re);
            (
                phase,
                linalg::symmetrize(&real),
                phase_deviation(psi, phase),
            )
        }
    };
    let pairing = PairingState::new(amplitude, phase)?;
    let pair = gaussian_pair_correlator(&pairing.amplitude)?;
    let density = gaussian_density(&pairing.amplitude)?;
    let rot = Complex64::from_polar(1.0, pairing.phase);
    let gap: Vec<Complex64> = pair
        .on_site
        .iter()
        .map(|f| rot * (-spec.interaction * f))
        .collect();
    let energy = pairing.to_gaussian()?.energy(h, spec.interaction)?;
    let max_gap = gap.iter().map(|d| d.norm()).fold(0.0, f64::max);
    let branch = if fermi_sea.is_some() || max_gap <= NORMAL_GAP_THRESHOLD {
        Branch::Normal
    } else {
        Branch::Superconducting
    };
    Ok(MeanFieldSolution {
        gap,
        rho: density.one_body * 2.0,
        n_up: density.n_up,
        n_down: density.n_down,
        energy,
        residual_norm,
        phase_deviation: deviation,
        iterations,
        converged: fermi_sea.is_none() && residual_norm <= tolerance,
        branch,
        pairing,
    })
}

/// Iterates to a stationary Gaussian state starting from `initial`.
///
/// Hitting `max_iter` is not an error: the last iterate is returned with
/// `converged == false`. A vanishing initial guess is already the (vacuum)
/// normal fixed point and is returned unchanged.
pub fn solve_self_consistent(
    spec: &LatticeSpec,
    initial: &GaussianState,
    options: &SolverOptions,
) -> Result<MeanFieldSolution> {
    options.validate()?;
    let graph = build_lattice(spec)?;
    check_dims(graph.num_sites(), initial.n_sites())?;
    let h = hamiltonian_matrix(&graph, spec)?;
    let u = spec.interaction;

    let mut psi = initial.amplitudes().clone();
    let mut iterations = 0;
    loop {
        let state = GaussianState::new(psi.clone())?;
        let obs = observables(&state, u)?;
        let r = residual_from(&psi, &h, u, &obs);
        let rn = linalg::max_abs(&r);
        if !rn.is_finite() {
            return Err(Error::numerical(format!(
                "non-finite residual at iteration {iterations}"
            )));
        }
        let max_gap = obs.gap.iter().map(|d| d.norm()).fold(0.0, f64::max);
        log::debug!("iteration {iterations}: residual {rn:.3e}, max |gap| {max_gap:.6e}");
        if rn <= options.tolerance || iterations >= options.max_iter {
            return finish(&psi, spec, &h, iterations, rn, options.tolerance, None);
        }
        let next = match bdg_ground_state(&h, u, &obs)? {
            BdgOutcome::Paired(next) => next,
            BdgOutcome::FermiSea(rho) => {
                log::debug!("iteration {iterations}: pairing collapsed to a Fermi sea");
                return finish(&psi, spec, &h, iterations, rn, options.tolerance, Some(rho));
            }
        };
        psi = psi * Complex64::new(1.0 - options.mixing, 0.0)
            + next * Complex64::new(options.mixing, 0.0);
        if linalg::has_nan(&psi) {
            return Err(Error::numerical(format!(
                "NaN in pair amplitudes at iteration {iterations}"
            )));
        }
        iterations += 1;
    }
}
