use opq_core::circuit::*;
use opq_core::lattice::PhysicalConstants;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rounded_constants() -> PhysicalConstants {
    PhysicalConstants::new(1.6e-19, 1.054_571_817e-34, 9e-31).unwrap()
}

fn reference_geometry() -> ResonatorGeometry {
    ResonatorGeometry {
        length: 1e-2,
        width: 1e-7,
        thickness_eff: 1e-8,
        spacing: 1e-6,
        permittivity: 8e-11,
        electron_density: 1e28,
    }
}

#[test]
fn constant_density_is_local() {
    let geo = reference_geometry();
    let k = rounded_constants();
    let grid = Grid::periodic(geo.length, 1000).unwrap();
    let n = Sampled::constant(grid, 3.0e6).unwrap();
    let c = capacitance_per_length(&geo).unwrap();
    let exact = capacitive_energy_exact(&n, &geo, &k).unwrap();
    let local = capacitive_energy_local(&n, c, &k).unwrap();
    let closed = (k.elementary_charge * 3.0e6).powi(2) * geo.length / (2.0 * c);
    assert!((exact / local - 1.0).abs() <= 1e-12);
    assert!((local / closed - 1.0).abs() <= 1e-12);
}

#[test]
fn exact_never_exceeds_local() {
    let geo = reference_geometry();
    let k = rounded_constants();
    let c = capacitance_per_length(&geo).unwrap();
    let grid = Grid::periodic(geo.length, 512).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = Sampled::new(grid, (0..512).map(|_| rng.random_range(0.0..1e7)).collect()).unwrap();
        let exact = capacitive_energy_exact(&n, &geo, &k).unwrap();
        let local = capacitive_energy_local(&n, c, &k).unwrap();
        assert!(exact >= 0.0);
        assert!(exact <= local * (1.0 + 1e-12));
    }
}

#[test]
fn local_error_shrinks_linearly_with_width() {
    let geo = reference_geometry();
    let k = rounded_constants();
    let grid = Grid::periodic(geo.length, 1 << 15).unwrap();
    let ratios = [10.0, 30.0, 100.0, 300.0];
    let errors: Vec<f64> = ratios
        .iter()
        .map(|r| {
            let n = Sampled::gaussian(grid, 0.0, 1e7, 0.5 * geo.length, r * geo.spacing).unwrap();
            local_capacitance_error(&n, &geo, &k).unwrap()
        })
        .collect();
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
    assert!(errors[2] <= 0.02);
    // log-log slope against d / sigma
    let xs: Vec<f64> = ratios.iter().map(|r| (1.0 / r).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let slope = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mx) * (y - my))
        .sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    assert!((0.5..=2.0).contains(&slope), "slope {slope}");
    // leading term of the kernel expansion: d / (sigma sqrt(pi))
    let lead = 1.0 / (300.0 * std::f64::consts::PI.sqrt());
    assert!(
        (errors[3] / lead - 1.0).abs() < 0.02,
        "{} vs {lead}",
        errors[3]
    );
}

#[test]
fn period_must_match_the_wire() {
    let geo = reference_geometry();
    let grid = Grid::periodic(2.0 * geo.length, 64).unwrap();
    let n = Sampled::constant(grid, 1.0).unwrap();
    assert!(capacitive_energy_exact(&n, &geo, &rounded_constants()).is_err());
}

#[test]
fn closed_forms_agree_on_random_geometries() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let geo = ResonatorGeometry {
            length: 10f64.powf(rng.random_range(-4.0..-1.0)),
            width: 10f64.powf(rng.random_range(-8.0..-5.0)),
            thickness_eff: 10f64.powf(rng.random_range(-9.0..-7.0)),
            spacing: 10f64.powf(rng.random_range(-7.0..-5.0)),
            permittivity: 10f64.powf(rng.random_range(-11.5..-10.0)),
            electron_density: 10f64.powf(rng.random_range(26.0..29.0)),
        };
        let k = PhysicalConstants::default();
        let p = mode_frequencies(&geo, &k, 3).unwrap();
        let w = fundamental_closed_form(&geo, &k).unwrap();
        assert!((p.omega[0] / w - 1.0).abs() <= 1e-12);
        assert!((p.omega[2] - 3.0 * p.omega[0]).abs() <= 1e-15 * p.omega[2]);
        let short = ResonatorGeometry {
            length: 0.5 * geo.length,
            ..geo
        };
        let q = mode_frequencies(&short, &k, 3).unwrap();
        assert!((q.omega[1] / p.omega[1] - 2.0).abs() < 1e-14);
    }
}

#[test]
fn reference_parameters_give_tens_of_gigahertz() {
    let geo = reference_geometry();
    let k = rounded_constants();
    assert!((geo.line_density() / 1e13 - 1.0).abs() < 1e-12);
    let p = mode_frequencies(&geo, &k, 1).unwrap();
    let l: f64 = 9e-31 / (1e13 * 1.6e-19 * 1.6e-19);
    let c = 1e-7 * 8e-11 / 2e-6;
    let w = std::f64::consts::PI / (1e-2 * (l * c).sqrt());
    assert!((p.omega[0] / w - 1.0).abs() < 1e-14);
    assert!(p.omega[0] > 4.5e9 && p.omega[0] < 4.5e11, "{}", p.omega[0]);
    assert!(mode_frequencies(&geo, &k, 0).is_err());
}

#[test]
fn ladder_converges_quadratically() {
    let (l, c, len) = (3.5e-6, 4e-12, 1e-2);
    let w1 = fundamental_from_lc(l, c, len);
    let errs: Vec<Vec<f64>> = [64, 128, 256]
        .iter()
        .map(|&n| {
            let w = lc_chain_normal_modes(l, c, len, n, ModeBoundary::Open).unwrap();
            assert!(w.windows(2).all(|p| p[0] <= p[1]) && w[0] > 0.0);
            (1..=4).map(|j| (w[j - 1] - j as f64 * w1).abs()).collect()
        })
        .collect();
    for j in 0..4 {
        for pair in errs.windows(2) {
            let order = (pair[0][j] / pair[1][j]).log2();
            assert!(order >= 1.8, "mode {} order {order}", j + 1);
        }
        let fourfold = errs[0][j] / errs[1][j];
        assert!((fourfold / 4.0 - 1.0).abs() <= 0.15);
    }
    let grounded = lc_chain_normal_modes(l, c, len, 256, ModeBoundary::Grounded).unwrap();
    assert!((grounded[0] / w1 - 1.0).abs() < 1e-4);
}

#[test]
fn current_and_voltage_maps() {
    let k = PhysicalConstants::default();
    let grid = Grid::new(0.0, 1e-5, 50).unwrap();
    let g = 120.0;
    let phi = Sampled::linear(grid, 0.3, g).unwrap();
    let i = current_profile(&phi, &k, 1e13).unwrap();
    let want = k.elementary_charge * k.hbar * 1e13 * g / (2.0 * k.electron_mass);
    assert!(i.values.iter().all(|v| (v / want - 1.0).abs() < 1e-9));
    let i2 = current_profile(&phi, &k, 2e13).unwrap();
    assert!(i
        .values
        .iter()
        .zip(&i2.values)
        .all(|(a, b)| (b / a - 2.0).abs() < 1e-14));
    let single = Sampled::new(Grid::new(0.0, 1.0, 1).unwrap(), vec![0.0]).unwrap();
    assert!(current_profile(&single, &k, 1e13).is_err());

    let n = Sampled::constant(grid, 5e6).unwrap();
    let c = 4e-12;
    let v = voltage_profile(&n, c, &k).unwrap();
    assert!(v
        .values
        .iter()
        .all(|x| *x == -k.elementary_charge * 5e6 / c));
    let v2 = voltage_profile(&n, 0.5 * c, &k).unwrap();
    assert!((v2.values[0] / v.values[0] - 2.0).abs() < 1e-15);
}

#[test]
fn kinetic_energy_bookkeeping() {
    let k = PhysicalConstants::default();
    let grid = Grid::new(0.0, 2e-6, 400).unwrap();
    let phi = Sampled::linear(grid, 0.0, 3.0e3).unwrap();
    let nx = 1e13;
    let l = inductance_per_length(&k, nx).unwrap();
    let from_current =
        inductive_energy_from_current(&current_profile(&phi, &k, nx).unwrap(), l).unwrap();
    let from_phase = inductive_energy_from_phase(&phi, l, &k).unwrap();
    assert!((from_current / from_phase - 1.0).abs() <= 1e-12);

    let flat = Sampled::constant(grid, nx).unwrap();
    assert_eq!(density_fluctuation_ratio(&phi, &flat).unwrap(), 0.0);
    let bumpy = Sampled::gaussian(grid, nx, 0.1 * nx, 4e-4, 5e-5).unwrap();
    let r = density_fluctuation_ratio(&phi, &bumpy).unwrap();
    assert!(r.abs() < 0.1);
}

#[test]
fn gauge_shift_and_charge() {
    let k = PhysicalConstants::default();
    let grid = Grid::new(0.0, 1e-6, 101).unwrap();
    let phi = Sampled::linear(grid, 0.2, 50.0).unwrap();
    let zero = Sampled::constant(grid, 0.0).unwrap();
    assert_eq!(
        gauge_invariant_phase(&phi, &zero, &k).unwrap().values,
        phi.values
    );
    let a0 = 3e-16;
    let shifted = gauge_invariant_phase(&phi, &Sampled::constant(grid, a0).unwrap(), &k).unwrap();
    let s = 2.0 * k.elementary_charge / k.hbar * a0;
    assert!(shifted
        .values
        .iter()
        .zip(&phi.values)
        .all(|(a, b)| (b - a - s).abs() < 1e-12));
    let slope = 1e-12;
    let lin = gauge_invariant_phase(&phi, &Sampled::linear(grid, 0.0, slope).unwrap(), &k).unwrap();
    for (idx, v) in lin.values.iter().enumerate() {
        let x = grid.x(idx);
        let want = 0.2 + 50.0 * x - 2.0 * k.elementary_charge / k.hbar * slope * x;
        assert!((v - want).abs() < 1e-12);
    }
    let other = Sampled::constant(Grid::new(0.0, 2e-6, 101).unwrap(), 0.0).unwrap();
    assert!(gauge_invariant_phase(&phi, &other, &k).is_err());

    let n0 = 4e6;
    let q = macroscopic_charge(&Sampled::constant(grid, n0).unwrap(), &k).unwrap();
    assert_eq!(q.values[0], 0.0);
    for (idx, v) in q.values.iter().enumerate() {
        assert!(
            (v + k.elementary_charge * n0 * grid.x(idx)).abs()
                <= 1e-12 * k.elementary_charge * n0 * 1e-4
        );
    }
    let bump = Sampled::gaussian(grid, 0.0, n0, 5e-5, 1e-5).unwrap();
    let qb = macroscopic_charge(&bump, &k).unwrap();
    assert!(qb.values.windows(2).all(|w| w[1] <= w[0]));
    let total = -k.elementary_charge * bump.integral();
    assert!((qb.values[100] / total - 1.0).abs() < 1e-12);
}
