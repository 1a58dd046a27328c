use nalgebra::{DMatrix, SymmetricEigen};
use opq_core::qubit::{cpb_spectrum, transmon_splitting, ChargeCounting, JunctionSpec};

fn dense_levels(spec: &JunctionSpec, n_levels: usize) -> Vec<f64> {
    let q = match spec.charge_counting {
        ChargeCounting::Pairs => 1.0,
        ChargeCounting::Electrons => 4.0,
    };
    let dim = spec.dimension();
    let h = DMatrix::from_fn(dim, dim, |a, b| {
        let n = a as f64 - spec.n_cut as f64;
        if a == b {
            q * spec.e_c * (n - spec.n_offset).powi(2)
        } else if a.abs_diff(b) == 1 {
            0.5 * spec.e_j
        } else {
            0.0
        }
    });
    let mut e: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e.truncate(n_levels);
    e
}

#[test]
fn matches_dense_diagonalization() {
    for counting in [ChargeCounting::Pairs, ChargeCounting::Electrons] {
        let spec = JunctionSpec {
            n_offset: 0.3,
            charge_counting: counting,
            ..JunctionSpec::new(1.0, 50.0, 60)
        };
        let s = cpb_spectrum(&spec, 6).unwrap();
        assert!(s.converged);
        for (a, b) in s.levels.iter().zip(dense_levels(&spec, 6)) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert!(s.levels.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn josephson_sign_does_not_matter() {
    for n_offset in [0.0, 0.25, 0.5] {
        let plus = JunctionSpec {
            n_offset,
            ..JunctionSpec::new(1.0, 7.3, 20)
        };
        let minus = JunctionSpec { e_j: -7.3, ..plus };
        let a = cpb_spectrum(&plus, 10).unwrap().levels;
        let b = cpb_spectrum(&minus, 10).unwrap().levels;
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= 1e-12));
    }
}

#[test]
fn integer_gate_shift_is_invisible() {
    let a = JunctionSpec {
        n_offset: 0.37,
        ..JunctionSpec::new(1.0, 3.0, 30)
    };
    let b = JunctionSpec {
        n_offset: 1.37,
        ..a
    };
    let la = cpb_spectrum(&a, 5).unwrap().levels;
    let lb = cpb_spectrum(&b, 5).unwrap().levels;
    assert!(la.iter().zip(&lb).all(|(x, y)| (x - y).abs() <= 1e-8));
}

#[test]
fn transmon_regime() {
    let e_c = 1.0;
    let e_j = 50.0;
    let electrons = JunctionSpec {
        charge_counting: ChargeCounting::Electrons,
        ..JunctionSpec::new(e_c, e_j, 60)
    };
    let s = cpb_spectrum(&electrons, 3).unwrap();
    assert!(s.converged);
    let split = s.levels[1] - s.levels[0];
    let asymptote = transmon_splitting(e_c, e_j);
    assert!(
        (split / asymptote - 1.0).abs() <= 0.02,
        "{split} vs {asymptote}"
    );
    assert!((s.levels[2] - s.levels[1]) - split < 0.0);

    // n counting pairs is the same problem with E_C / 4.
    let pairs = cpb_spectrum(&JunctionSpec::new(e_c, e_j, 60), 3).unwrap();
    let split = pairs.levels[1] - pairs.levels[0];
    let asymptote = transmon_splitting(0.25 * e_c, e_j);
    assert!(
        (split / asymptote - 1.0).abs() <= 0.02,
        "{split} vs {asymptote}"
    );
    assert!((pairs.levels[2] - pairs.levels[1]) - split < 0.0);
}
