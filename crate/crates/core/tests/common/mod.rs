//! Independent reference values shared by the integration tests.

#![allow(dead_code)]

use opq_core::lattice::{Boundary, LatticeSpec};
use opq_core::meanfield::{solve_self_consistent, MeanFieldSolution, PairingState, SolverOptions};

/// Uniform gap of a periodic ring from the momentum-space BCS equation
///
/// `1 = (U / N) sum_k 1 / (2 sqrt(xi_k^2 + Delta^2))`, `xi_k = -2t cos k - mu_eff`,
///
/// solved by bisection. `mu_eff` already contains the Hartree shift.
pub fn bcs_gap(n: usize, t: f64, u: f64, mu_eff: f64) -> f64 {
    let xi: Vec<f64> = (0..n)
        .map(|k| -2.0 * t * (std::f64::consts::TAU * k as f64 / n as f64).cos() - mu_eff)
        .collect();
    let g =
        |d: f64| u / n as f64 * xi.iter().map(|x| 0.5 / (x * x + d * d).sqrt()).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (1e-12, 10.0 * (t + u));
    assert!(g(lo) > 0.0 && g(hi) < 0.0, "no paired solution");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Ring at half filling: the bare chemical potential `-U/2` cancels the
/// Hartree shift `-U n_σ = -U/2`.
pub fn half_filled_ring(n: usize, u: f64) -> LatticeSpec {
    LatticeSpec::chain(n, Boundary::Periodic, u, -0.5 * u)
}

pub fn solve(spec: &LatticeSpec, tolerance: f64, phase: f64) -> MeanFieldSolution {
    let init = PairingState::uniform_diagonal(spec.num_sites(), 0.1, phase)
        .to_gaussian()
        .unwrap();
    let opts = SolverOptions {
        tolerance,
        ..SolverOptions::default()
    };
    let sol = solve_self_consistent(spec, &init, &opts).unwrap();
    assert!(
        sol.converged,
        "solver did not converge: residual {}",
        sol.residual_norm
    );
    sol
}
