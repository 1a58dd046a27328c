//! Phase-twisted low-energy states of a converged pairing solution.
//!
//! A profile `phi_x` along the wire axis dresses the ground state as
//! `exp(i sum_i phi_{x(i)} n_i / 2) |GS>`. Only the hopping term feels the
//! twist, so the excitation energy is a sum over bonds:
//!
//! ```text
//! dE = t sum_<ij> rho_ij [1 - cos((phi_j - phi_i) / 2)]
//!    ≈ (t / 8) sum_<ij> rho_ij (phi_j - phi_i)^2
//! ```
//!
//! where `<ij>` runs over ordered neighbor pairs, i.e. every undirected bond
//! is counted once per hopping direction.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::gaussian::GaussianState;
use crate::lattice::{build_lattice, LatticeGraph, LatticeSpec};
use crate::meanfield::MeanFieldSolution;

/// Site-resolved phases along the wire axis (radians).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    values: Vec<f64>,
}

impl PhaseProfile {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::config("phase profile is empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("phase profile contains non-finite values"));
        }
        Ok(PhaseProfile { values })
    }

    pub fn uniform(len: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; len])
    }

    /// `phi_x = slope * x`.
    pub fn linear(len: usize, slope: f64) -> Result<Self> {
        Self::new((0..len).map(|x| slope * x as f64).collect())
    }

    /// Rises by `step` per site over the first half and falls back over the
    /// second, so every bond of a ring carries a twist of magnitude `step`
    /// (for even `len`).
    pub fn triangle(len: usize, step: f64) -> Result<Self> {
        Self::new((0..len).map(|x| step * x.min(len - x) as f64).collect())
    }

    /// `amplitude * sin(2 pi periods x / len)`.
    pub fn sine(len: usize, amplitude: f64, periods: f64) -> Result<Self> {
        let k = std::f64::consts::TAU * periods / len as f64;
        Self::new((0..len).map(|x| amplitude * (k * x as f64).sin()).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        PhaseProfile {
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// Expands the wire-axis profile to every lattice site.
    pub fn site_phases(&self, graph: &LatticeGraph) -> Result<Vec<f64>> {
        check_dims(graph.dims()[0], self.len())?;
        Ok((0..graph.num_sites())
            .map(|s| self.values[graph.wire_coordinate(s)])
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BondContribution {
    pub i: usize,
    pub j: usize,
    /// Spin-summed `rho_ij` on the bond, times the bond multiplicity.
    pub rho: f64,
    pub dphi: f64,
    pub exact: f64,
    pub quadratic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StiffnessReport {
    pub exact: f64,
    pub quadratic: f64,
    /// `exact / quadratic`; `NaN` when both vanish.
    pub ratio: f64,
    pub bonds: Vec<BondContribution>,
}

fn require_converged(solution: &MeanFieldSolution) -> Result<()> {
    if solution.converged {
        Ok(())
    } else {
        Err(Error::config("phase twists need a converged ground state"))
    }
}

/// Per-bond twist energies computed from a spin-summed one-body matrix.
pub fn bond_contributions(
    rho: &DMatrix<f64>,
    graph: &LatticeGraph,
    hopping: f64,
    site_phases: &[f64],
) -> Result<Vec<BondContribution>> {
    check_dims(graph.num_sites(), rho.nrows())?;
    check_dims(graph.num_sites(), site_phases.len())?;
    Ok(graph
        .bonds()
        .iter()
        .map(|b| {
            let r = rho[(b.i, b.j)] * b.multiplicity as f64;
            let dphi = site_phases[b.j] - site_phases[b.i];
            // both hopping directions
            BondContribution {
                i: b.i,
                j: b.j,
                rho: r,
                dphi,
                exact: 2.0 * hopping * r * (1.0 - (0.5 * dphi).cos()),
                quadratic: 2.0 * hopping / 8.0 * r * dphi * dphi,
            }
        })
        .collect())
}

pub fn stiffness_report(
    solution: &MeanFieldSolution,
    spec: &LatticeSpec,
    profile: &PhaseProfile,
) -> Result<StiffnessReport> {
    require_converged(solution)?;
    let graph = build_lattice(spec)?;
    check_dims(graph.num_sites(), solution.n_sites())?;
    let phases = profile.site_phases(&graph)?;
    let bonds = bond_contributions(&solution.rho, &graph, spec.hopping, &phases)?;
    let exact: f64 = bonds.iter().map(|b| b.exact).sum();
    let quadratic: f64 = bonds.iter().map(|b| b.quadratic).sum();
    Ok(StiffnessReport {
        exact,
        quadratic,
        ratio: exact / quadratic,
        bonds,
    })
}

/// Exact energy of the twisted state relative to the ground state.
pub fn twist_energy_exact(
    solution: &MeanFieldSolution,
    spec: &LatticeSpec,
    profile: &PhaseProfile,
) -> Result<f64> {
    Ok(stiffness_report(solution, spec, profile)?.exact)
}

/// Leading quadratic approximation of [`twist_energy_exact`].
pub fn twist_energy_quadratic(
    solution: &MeanFieldSolution,
    spec: &LatticeSpec,
    profile: &PhaseProfile,
) -> Result<f64> {
    Ok(stiffness_report(solution, spec, profile)?.quadratic)
}

/// Matrix `S` on the wire axis with `phi^T S phi / 2` equal to the quadratic
/// twist energy. Rows sum to zero.
pub fn stiffness_matrix(solution: &MeanFieldSolution, spec: &LatticeSpec) -> Result<DMatrix<f64>> {
    require_converged(solution)?;
    let graph = build_lattice(spec)?;
    check_dims(graph.num_sites(), solution.n_sites())?;
    let nx = graph.dims()[0];
    let mut s = DMatrix::zeros(nx, nx);
    for b in graph.bonds() {
        let (a, c) = (graph.wire_coordinate(b.i), graph.wire_coordinate(b.j));
        if a == c {
            continue;
        }
        let w = 0.5 * spec.hopping * solution.rho[(b.i, b.j)] * b.multiplicity as f64;
        s[(a, a)] += w;
        s[(c, c)] += w;
        s[(a, c)] -= w;
        s[(c, a)] -= w;
    }
    Ok(s)
}

/// Per-transverse-mode one-dimensional ground states.
#[derive(Debug, Clone, Copy)]
pub enum TransverseModes<'a> {
    /// Every transverse mode carries the same 1D state.
    Uniform(&'a MeanFieldSolution),
    /// One state per mode; at least as many as requested modes.
    PerMode(&'a [MeanFieldSolution]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityCurve {
    /// `|o_k|` for each included mode.
    pub per_mode: Vec<f64>,
    /// Mode counts `M = 1..=max_modes`.
    pub modes: Vec<usize>,
    pub abs_overlap: Vec<f64>,
    pub log10_abs_overlap: Vec<f64>,
    /// Least-squares slope of `log10 |O(M)|` against `M`.
    pub log_slope: f64,
    /// Smallest `M` with `|O(M)| < 1e-10`, if it exists among the available
    /// modes (unbounded for uniform modes).
    pub m_star: Option<usize>,
}

/// Orthogonality threshold used to report `M*`.
pub const ORTHOGONALITY_THRESHOLD_LOG10: f64 = -10.0;

fn mode_overlap_log10(
    solution: &MeanFieldSolution,
    a: &PhaseProfile,
    b: &PhaseProfile,
) -> Result<f64> {
    let n = solution.n_sites();
    check_dims(n, a.len())?;
    check_dims(n, b.len())?;
    let base = solution.pairing.to_gaussian()?;
    let sa: GaussianState = base.twisted(a.values())?;
    let sb = base.twisted(b.values())?;
    Ok(sa.log_overlap(&sb)?.re / std::f64::consts::LN_10)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return ys
            .first()
            .zip(xs.first())
            .map(|(y, x)| y / x)
            .unwrap_or(0.0);
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Overlap between the two twisted many-mode states as a function of the
/// number of transverse modes.
pub fn overlap_decay(
    modes: TransverseModes<'_>,
    profile_a: &PhaseProfile,
    profile_b: &PhaseProfile,
    max_modes: usize,
) -> Result<OrthogonalityCurve> {
    if max_modes < 1 {
        return Err(Error::config(
            "overlap decay needs at least one transverse mode",
        ));
    }
    let per_mode_log10: Vec<f64> = match modes {
        TransverseModes::Uniform(sol) => {
            vec![mode_overlap_log10(sol, profile_a, profile_b)?; max_modes]
        }
        TransverseModes::PerMode(sols) => {
            if sols.len() < max_modes {
                return Err(Error::config(format!(
                    "{max_modes} modes requested but only {} per-mode states supplied",
                    sols.len()
                )));
            }
            sols[..max_modes]
                .par_iter()
                .map(|s| mode_overlap_log10(s, profile_a, profile_b))
                .collect::<Result<Vec<_>>>()?
        }
    };
    let per_mode_log10: Vec<f64> = per_mode_log10.into_iter().map(|l| l.min(0.0)).collect();

    let log10_abs_overlap: Vec<f64> = match modes {
        // product of identical factors
        TransverseModes::Uniform(_) => (1..=max_modes)
            .map(|m| m as f64 * per_mode_log10[0])
            .collect(),
        TransverseModes::PerMode(_) => per_mode_log10
            .iter()
            .scan(0.0, |acc, l| {
                *acc += l;
                Some(*acc)
            })
            .collect(),
    };
    let modes_axis: Vec<usize> = (1..=max_modes).collect();
    let xs: Vec<f64> = modes_axis.iter().map(|&m| m as f64).collect();
    let log_slope = least_squares_slope(&xs, &log10_abs_overlap);

    let m_star = match modes {
        TransverseModes::Uniform(_) => {
            let l = per_mode_log10[0];
            if l < 0.0 {
                let mut m = (ORTHOGONALITY_THRESHOLD_LOG10 / l).ceil().max(1.0) as usize;
                while (m as f64) * l >= ORTHOGONALITY_THRESHOLD_LOG10 {
                    m += 1;
                }
                while m > 1 && ((m - 1) as f64) * l < ORTHOGONALITY_THRESHOLD_LOG10 {
                    m -= 1;
                }
                Some(m)
            } else {
                None
            }
        }
        TransverseModes::PerMode(_) => log10_abs_overlap
            .iter()
            .position(|&v| v < ORTHOGONALITY_THRESHOLD_LOG10)
            .map(|p| p + 1),
    };

    Ok(OrthogonalityCurve {
        per_mode: per_mode_log10.iter().map(|l| 10f64.powf(*l)).collect(),
        abs_overlap: log10_abs_overlap.iter().map(|l| 10f64.powf(*l)).collect(),
        modes: modes_axis,
        log10_abs_overlap,
        log_slope,
        m_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::meanfield::{solve_self_consistent, PairingState, SolverOptions};

    fn solved(spec: &LatticeSpec) -> MeanFieldSolution {
        let init = PairingState::uniform_diagonal(spec.num_sites(), 0.1, 0.0)
            .to_gaussian()
            .unwrap();
        let sol = solve_self_consistent(spec, &init, &SolverOptions::default()).unwrap();
        assert!(sol.converged);
        sol
    }

    #[test]
    fn profile_generators() {
        let tri = PhaseProfile::triangle(8, 0.01).unwrap();
        for x in 0..8 {
            let d = tri.values()[(x + 1) % 8] - tri.values()[x];
            assert!((d.abs() - 0.01).abs() < 1e-15);
        }
        assert!(PhaseProfile::new(vec![f64::NAN]).is_err());
        assert!(PhaseProfile::new(vec![]).is_err());
    }

    #[test]
    fn single_bond_quadratic_arithmetic() {
        // rho = 1 on one bond, dphi = 0.2: each hopping direction carries
        // (t/8)(0.2)^2 = 0.005 t.
        let spec = LatticeSpec::chain(2, Boundary::Open, 0.0, 0.0);
        let graph = build_lattice(&spec).unwrap();
        let rho = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        let b = bond_contributions(&rho, &graph, 1.0, &[0.0, 0.2]).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b[0].quadratic - 2.0 * 0.005).abs() < 1e-16);
    }

    #[test]
    fn uniform_twist_costs_nothing() {
        let spec = LatticeSpec::chain(6, Boundary::Periodic, 4.0, -2.0);
        let sol = solved(&spec);
        let p = PhaseProfile::uniform(6, 1.234).unwrap();
        let r = stiffness_report(&sol, &spec, &p).unwrap();
        assert_eq!(r.exact, 0.0);
        assert_eq!(r.quadratic, 0.0);
    }

    #[test]
    fn stiffness_matrix_two_sites() {
        let spec = LatticeSpec::chain(2, Boundary::Open, 4.0, -2.0);
        let sol = solved(&spec);
        let s = stiffness_matrix(&sol, &spec).unwrap();
        let r = sol.rho[(0, 1)];
        let w = 0.5 * r;
        let expected = DMatrix::from_row_slice(2, 2, &[w, -w, -w, w]);
        assert!((s - expected).abs().max() < 1e-15);
    }

    #[test]
    fn exact_energy_is_even_in_the_profile() {
        let spec = LatticeSpec::chain(6, Boundary::Open, 4.0, -1.6);
        let sol = solved(&spec);
        let p = PhaseProfile::new(vec![0.1, -0.4, 0.9, 0.3, 1.7, -0.2]).unwrap();
        let a = twist_energy_exact(&sol, &spec, &p).unwrap();
        let b = twist_energy_exact(&sol, &spec, &p.scaled(-1.0)).unwrap();
        assert_eq!(a, b);
        assert!(a > 0.0);
    }

    #[test]
    fn unconverged_solution_is_rejected() {
        let spec = LatticeSpec::chain(4, Boundary::Open, 2.0, -1.0);
        let init = PairingState::uniform_diagonal(4, 0.1, 0.0)
            .to_gaussian()
            .unwrap();
        let opts = SolverOptions {
            max_iter: 1,
            ..SolverOptions::default()
        };
        let sol = solve_self_consistent(&spec, &init, &opts).unwrap();
        let p = PhaseProfile::uniform(4, 0.0).unwrap();
        assert!(twist_energy_exact(&sol, &spec, &p).is_err());
    }

    #[test]
    fn overlap_decay_edge_cases() {
        let spec = LatticeSpec::chain(6, Boundary::Periodic, 4.0, -2.0);
        let sol = solved(&spec);
        let a = PhaseProfile::uniform(6, 0.0).unwrap();
        assert!(overlap_decay(TransverseModes::Uniform(&sol), &a, &a, 0).is_err());
        let same = overlap_decay(TransverseModes::Uniform(&sol), &a, &a, 5).unwrap();
        assert!(same.abs_overlap.iter().all(|&o| (o - 1.0).abs() < 1e-12));
        assert_eq!(same.m_star, None);
        let too_few = [sol.clone()];
        assert!(overlap_decay(TransverseModes::PerMode(&too_few), &a, &a, 2).is_err());
    }
}
