mod common;

use common::{half_filled_ring, solve};
use nalgebra::{DMatrix, SymmetricEigen};
use opq_core::fock::{FockState, Observable};
use opq_core::lattice::{build_lattice, hamiltonian_matrix, Boundary, LatticeSpec};
use opq_core::phase::{
    overlap_decay, stiffness_matrix, stiffness_report, twist_energy_exact, twist_energy_quadratic,
    PhaseProfile, TransverseModes,
};

fn fock_twist_energy(spec: &LatticeSpec, amplitude: &DMatrix<f64>, phases: &[f64]) -> f64 {
    let graph = build_lattice(spec).unwrap();
    let h = hamiltonian_matrix(&graph, spec).unwrap();
    let energy = |p: &[f64]| {
        FockState::from_real(amplitude, p)
            .unwrap()
            .expectation(&Observable::Hubbard {
                h: h.clone(),
                interaction: spec.interaction,
            })
            .unwrap()
            .re
    };
    energy(phases) - energy(&vec![0.0; phases.len()])
}

#[test]
fn small_clusters_match_fock_oracle() {
    for (n, boundary) in [
        (2, Boundary::Open),
        (3, Boundary::Open),
        (3, Boundary::Periodic),
    ] {
        let spec = LatticeSpec::chain(n, boundary, 4.0, -2.0);
        let sol = solve(&spec, 1e-10, 0.3);
        for dphi in [0.05, 0.7, 2.0, -3.0] {
            let values: Vec<f64> = (0..n)
                .map(|x| dphi * x as f64 * (1.0 + 0.3 * x as f64))
                .collect();
            let profile = PhaseProfile::new(values.clone()).unwrap();
            let exact = twist_energy_exact(&sol, &spec, &profile).unwrap();
            let oracle = fock_twist_energy(&spec, &sol.pairing.amplitude, &values);
            assert!(
                (exact - oracle).abs() < 1e-10,
                "n={n} dphi={dphi}: {exact} vs {oracle}"
            );
        }
    }
}

#[test]
fn stiffness_on_the_ring() {
    let spec = half_filled_ring(64, 2.0);
    let sol = solve(&spec, 1e-10, 0.0);

    let uniform = PhaseProfile::uniform(64, 0.37).unwrap();
    assert!(twist_energy_exact(&sol, &spec, &uniform).unwrap().abs() <= 1e-12);

    let profile = PhaseProfile::triangle(64, 0.01).unwrap();
    let full = stiffness_report(&sol, &spec, &profile).unwrap();
    assert!(full.exact > 0.0);
    assert!((full.ratio - 1.0).abs() <= 1e-3, "ratio {}", full.ratio);

    let half = stiffness_report(&sol, &spec, &profile.scaled(0.5)).unwrap();
    let reduction = (full.quadratic - full.exact) / (half.quadratic - half.exact);
    assert!(
        (reduction / 16.0 - 1.0).abs() <= 0.2,
        "reduction {reduction}"
    );

    let rough = PhaseProfile::sine(64, 1.3, 3.0).unwrap();
    let a = twist_energy_exact(&sol, &spec, &rough).unwrap();
    assert_eq!(
        a,
        twist_energy_exact(&sol, &spec, &rough.scaled(-1.0)).unwrap()
    );
    assert!(a >= 0.0);
}

#[test]
fn stiffness_matrix_is_the_quadratic_form() {
    let spec = LatticeSpec::chain(12, Boundary::Open, 4.0, -1.5);
    let sol = solve(&spec, 1e-10, 0.0);
    let s = stiffness_matrix(&sol, &spec).unwrap();
    assert_eq!(s, s.transpose());
    for r in 0..12 {
        assert!(s.row(r).sum().abs() < 1e-14);
    }
    let eig = SymmetricEigen::new(s.clone()).eigenvalues;
    assert!(eig.iter().all(|&e| e >= -1e-12));

    let values: Vec<f64> = (0..12)
        .map(|x| ((x * 7 + 3) % 11) as f64 * 0.13 - 0.6)
        .collect();
    let phi = nalgebra::DVector::from_vec(values.clone());
    let profile = PhaseProfile::new(values).unwrap();
    let q = twist_energy_quadratic(&sol, &spec, &profile).unwrap();
    let form = 0.5 * (phi.transpose() * &s * &phi)[(0, 0)];
    assert!((q - form).abs() < 1e-12 * q.abs().max(1.0));
}

#[test]
fn transverse_modes_orthogonalize() {
    let spec = half_filled_ring(64, 2.0);
    let sol = solve(&spec, 1e-10, 0.0);
    let a = PhaseProfile::uniform(64, 0.0).unwrap();
    let b = PhaseProfile::uniform(64, 0.1).unwrap();
    let curve = overlap_decay(TransverseModes::Uniform(&sol), &a, &b, 40).unwrap();
    let o1 = curve.per_mode[0];
    assert!(o1 < 1.0);
    let l1 = curve.log10_abs_overlap[0];
    for (m, l) in curve.modes.iter().zip(&curve.log10_abs_overlap) {
        assert!((l - *m as f64 * l1).abs() <= 1e-12 * (1.0 + l.abs()));
    }
    assert!(curve.abs_overlap.windows(2).all(|w| w[1] < w[0]));
    let m_star = curve.m_star.unwrap();
    assert_eq!(m_star as f64, (-10.0 / l1).ceil());
    assert!(m_star as f64 * l1 < -10.0);

    let per_mode = vec![sol.clone(); 3];
    let listed = overlap_decay(TransverseModes::PerMode(&per_mode), &a, &b, 3).unwrap();
    for (x, y) in listed
        .log10_abs_overlap
        .iter()
        .zip(&curve.log10_abs_overlap)
    {
        assert!((x - y).abs() < 1e-12);
    }

    // A 2 pi global shift leaves every paired state invariant.
    let c = PhaseProfile::uniform(64, std::f64::consts::TAU).unwrap();
    let same = overlap_decay(TransverseModes::Uniform(&sol), &a, &c, 10).unwrap();
    assert!(same.abs_overlap.iter().all(|o| (o - 1.0).abs() < 1e-10));
}
