use std::path::Path;

use opq_core::circuit::{
    capacitance_per_length, capacitive_energy_exact, capacitive_energy_local, current_profile,
    density_fluctuation_ratio, fundamental_closed_form, gauge_invariant_phase,
    inductance_per_length, inductive_energy_from_current, inductive_energy_from_phase,
    lc_chain_normal_modes, macroscopic_charge, mode_frequencies, voltage_profile, Grid,
    ModeBoundary, Sampled,
};
use opq_core::gaussian::GaussianState;
use opq_core::lattice::LatticeSpec;
use opq_core::meanfield::{
    solve_self_consistent, Branch, MeanFieldSolution, PairingState, SolverOptions,
};
use opq_core::phase::{
    overlap_decay, stiffness_matrix, stiffness_report, PhaseProfile, TransverseModes,
};
use opq_core::qubit::{cpb_spectrum, transmon_splitting, ChargeCounting};
use opq_core::verify::{verify_oracles, OracleReport};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::*;
use crate::report::{complex_pair, Cell, Header, MatrixJson, Report, Table};
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Ok,
    NotConverged(String),
    Failed(String),
}

pub struct Outcome {
    pub report: Report,
    pub status: Status,
}

pub fn execute(cfg: &RunConfig, seed: u64) -> Result<Outcome, CliError> {
    let mut report = Report::new(Header::new(cfg.hash.clone(), cfg.command.name(), seed));
    let status = match &cfg.params {
        Params::GroundState(p) => ground_state(p, &mut report)?,
        Params::Stiffness(p) => stiffness(p, &mut report)?,
        Params::Overlap(p) => overlap(p, &mut report)?,
        Params::Circuit(p) => circuit_params(p, &mut report)?,
        Params::Capacitance(p) => capacitance(p, &cfg.base_dir, &mut report)?,
        Params::Modes(p) => modes(p, &mut report)?,
        Params::Qubit(p) => qubit(p, &mut report)?,
        Params::Oracles(p) => oracles(p, seed, &mut report)?,
    };
    Ok(Outcome { report, status })
}

#[derive(Serialize)]
struct GroundStateSummary {
    converged: bool,
    branch: Branch,
    iterations: usize,
    residual_norm: f64,
    phase_deviation: f64,
    phase: f64,
    energy: f64,
    max_gap: f64,
    electrons: f64,
}

impl From<&MeanFieldSolution> for GroundStateSummary {
    fn from(s: &MeanFieldSolution) -> Self {
        GroundStateSummary {
            converged: s.converged,
            branch: s.branch,
            iterations: s.iterations,
            residual_norm: s.residual_norm,
            phase_deviation: s.phase_deviation,
            phase: s.pairing.phase,
            energy: s.energy,
            max_gap: s.max_gap(),
            electrons: s.n_up.iter().chain(&s.n_down).sum(),
        }
    }
}

fn solve(
    lattice: &LatticeSpec,
    solver: &SolverOptions,
    initial: &InitialGuess,
) -> Result<MeanFieldSolution, CliError> {
    lattice.validate()?;
    let seed: GaussianState =
        PairingState::uniform_diagonal(lattice.num_sites(), initial.amplitude, initial.phase)
            .to_gaussian()?;
    Ok(solve_self_consistent(lattice, &seed, solver)?)
}

fn not_converged(s: &MeanFieldSolution) -> Status {
    Status::NotConverged(format!(
        "self-consistency not reached after {} iterations (residual {:e})",
        s.iterations, s.residual_norm
    ))
}

fn ground_state(p: &GroundStateParams, report: &mut Report) -> Result<Status, CliError> {
    #[derive(Serialize)]
    struct Body {
        ground_state: GroundStateSummary,
        gap: Vec<[f64; 2]>,
        n_up: Vec<f64>,
        n_down: Vec<f64>,
        amplitude: MatrixJson,
        rho: MatrixJson,
    }
    let s = solve(&p.lattice, &p.solver, &p.initial)?;
    report.json(
        "solution.json",
        &Body {
            ground_state: (&s).into(),
            gap: s.gap.iter().map(|z| complex_pair(*z)).collect(),
            n_up: s.n_up.clone(),
            n_down: s.n_down.clone(),
            amplitude: (&s.pairing.amplitude).into(),
            rho: (&s.rho).into(),
        },
    )?;
    let mut t = Table::new(&["site", "abs_gap", "arg_gap", "n_up", "n_down"]);
    for (i, g) in s.gap.iter().enumerate() {
        t.push(vec![
            i.into(),
            g.norm().into(),
            g.arg().into(),
            s.n_up[i].into(),
            s.n_down[i].into(),
        ]);
    }
    report.csv("gap.csv", &t);
    Ok(if s.converged {
        Status::Ok
    } else {
        not_converged(&s)
    })
}

fn build_phase_profile(spec: &PhaseProfileSpec, len: usize) -> Result<PhaseProfile, CliError> {
    Ok(match spec {
        PhaseProfileSpec::Uniform { value } => PhaseProfile::uniform(len, *value)?,
        PhaseProfileSpec::Linear { slope } => PhaseProfile::linear(len, *slope)?,
        PhaseProfileSpec::Triangle { step } => PhaseProfile::triangle(len, *step)?,
        PhaseProfileSpec::Sine { amplitude, periods } => {
            PhaseProfile::sine(len, *amplitude, *periods)?
        }
        PhaseProfileSpec::Values { values } => {
            if values.len() != len {
                return Err(CliError::Config(format!(
                    "profile has {} values but the wire has {len} sites",
                    values.len()
                )));
            }
            PhaseProfile::new(values.clone())?
        }
    })
}

fn stiffness(p: &StiffnessParams, report: &mut Report) -> Result<Status, CliError> {
    #[derive(Serialize)]
    struct Entry {
        scale: f64,
        exact: f64,
        quadratic: f64,
        ratio: f64,
        quadratic_minus_exact: f64,
    }
    #[derive(Serialize)]
    struct Body {
        ground_state: GroundStateSummary,
        #[serde(skip_serializing_if = "Vec::is_empty")]
        reports: Vec<Entry>,
        /// Ratio of consecutive `quadratic - exact` residuals.
        #[serde(skip_serializing_if = "Vec::is_empty")]
        residual_reductions: Vec<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        stiffness_matrix: Option<MatrixJson>,
    }
    if p.scales.is_empty() {
        return Err(CliError::Config(
            "params.scales: need at least one scale".into(),
        ));
    }
    p.lattice.validate()?;
    let profile = build_phase_profile(&p.profile, p.lattice.wire_length())?;
    let s = solve(&p.lattice, &p.solver, &p.initial)?;
    if !s.converged {
        report.json(
            "stiffness.json",
            &Body {
                ground_state: (&s).into(),
                reports: vec![],
                residual_reductions: vec![],
                stiffness_matrix: None,
            },
        )?;
        return Ok(not_converged(&s));
    }
    let mut entries = Vec::new();
    let mut bonds = None;
    for &scale in &p.scales {
        let r = stiffness_report(&s, &p.lattice, &profile.scaled(scale))?;
        entries.push(Entry {
            scale,
            exact: r.exact,
            quadratic: r.quadratic,
            ratio: r.ratio,
            quadratic_minus_exact: r.quadratic - r.exact,
        });
        if bonds.is_none() {
            bonds = Some(r.bonds);
        }
    }
    let residual_reductions = entries
        .windows(2)
        .map(|w| w[0].quadratic_minus_exact / w[1].quadratic_minus_exact)
        .collect();
    let matrix = stiffness_matrix(&s, &p.lattice)?;
    report.json(
        "stiffness.json",
        &Body {
            ground_state: (&s).into(),
            reports: entries,
            residual_reductions,
            stiffness_matrix: Some((&matrix).into()),
        },
    )?;
    let mut t = Table::new(&["i", "j", "rho", "dphi", "exact", "quadratic"]);
    for b in bonds.unwrap_or_default() {
        t.push(vec![
            b.i.into(),
            b.j.into(),
            b.rho.into(),
            b.dphi.into(),
            b.exact.into(),
            b.quadratic.into(),
        ]);
    }
    report.csv("bonds.csv", &t);
    Ok(Status::Ok)
}

fn overlap(p: &OverlapParams, report: &mut Report) -> Result<Status, CliError> {
    #[derive(Serialize)]
    struct Body {
        ground_states: Vec<GroundStateSummary>,
        #[serde(skip_serializing_if = "Option::is_none")]
        curve: Option<CurveSummary>,
    }
    #[derive(Serialize)]
    struct CurveSummary {
        max_modes: usize,
        per_mode_abs_overlap: Vec<f64>,
        log_slope: f64,
        m_star: Option<usize>,
        final_abs_overlap: f64,
        final_log10_abs_overlap: f64,
    }
    if p.lattice.dims.len() != 1 {
        return Err(CliError::Config(
            "params.lattice: overlap decay takes a one-dimensional lattice".into(),
        ));
    }
    if p.max_modes < 1 {
        return Err(CliError::Config(
            "params.max_modes: must be at least 1".into(),
        ));
    }
    p.lattice.validate()?;
    let len = p.lattice.wire_length();
    let a = build_phase_profile(&p.profile_a, len)?;
    let b = build_phase_profile(&p.profile_b, len)?;
    let solutions: Vec<MeanFieldSolution> = match &p.mode_chemical_potentials {
        None => vec![solve(&p.lattice, &p.solver, &p.initial)?],
        Some(mus) => {
            if mus.len() < p.max_modes {
                return Err(CliError::Config(format!(
                    "params.mode_chemical_potentials: {} entries for {} modes",
                    mus.len(),
                    p.max_modes
                )));
            }
            mus[..p.max_modes]
                .par_iter()
                .map(|&mu| {
                    solve(
                        &LatticeSpec {
                            chemical_potential: mu,
                            ..p.lattice.clone()
                        },
                        &p.solver,
                        &p.initial,
                    )
                })
                .collect::<Result<_, _>>()?
        }
    };
    let summaries: Vec<GroundStateSummary> = solutions.iter().map(Into::into).collect();
    if let Some(bad) = solutions.iter().find(|s| !s.converged) {
        let status = not_converged(bad);
        report.json(
            "overlap.json",
            &Body {
                ground_states: summaries,
                curve: None,
            },
        )?;
        return Ok(status);
    }
    let modes = match p.mode_chemical_potentials {
        None => TransverseModes::Uniform(&solutions[0]),
        Some(_) => TransverseModes::PerMode(&solutions),
    };
    let curve = overlap_decay(modes, &a, &b, p.max_modes)?;
    let mut t = Table::new(&["M", "abs_overlap", "log10_abs_overlap"]);
    for ((m, o), l) in curve
        .modes
        .iter()
        .zip(&curve.abs_overlap)
        .zip(&curve.log10_abs_overlap)
    {
        t.push(vec![(*m).into(), (*o).into(), (*l).into()]);
    }
    report.csv("overlap.csv", &t);
    let last = curve.modes.len() - 1;
    report.json(
        "overlap.json",
        &Body {
            ground_states: summaries,
            curve: Some(CurveSummary {
                max_modes: p.max_modes,
                per_mode_abs_overlap: match modes {
                    TransverseModes::Uniform(_) => vec![curve.per_mode[0]],
                    TransverseModes::PerMode(_) => curve.per_mode.clone(),
                },
                log_slope: curve.log_slope,
                m_star: curve.m_star,
                final_abs_overlap: curve.abs_overlap[last],
                final_log10_abs_overlap: curve.log10_abs_overlap[last],
            }),
        },
    )?;
    Ok(Status::Ok)
}

fn circuit_params(p: &CircuitParamsParams, report: &mut Report) -> Result<Status, CliError> {
    #[derive(Serialize)]
    struct Body {
        line_density: f64,
        l: f64,
        c: f64,
        v: f64,
        omega_1: f64,
        omega_1_closed_form: f64,
        relative_difference: f64,
    }
    let params = mode_frequencies(&p.geometry, &p.constants, 1)?;
    let closed = fundamental_closed_form(&p.geometry, &p.constants)?;
    report.json(
        "circuit.json",
        &Body {
            line_density: p.geometry.line_density(),
            l: params.l,
            c: params.c,
            v: params.v,
            omega_1: params.omega[0],
            omega_1_closed_form: closed,
            relative_difference: (params.omega[0] - closed).abs() / closed,
        },
    )?;
    Ok(Status::Ok)
}

fn read_csv_profile(path: &Path) -> Result<Sampled, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Config(format!("cannot read profile {}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        .clone();
    if headers.len() != 2 || &headers[0] != "x" || &headers[1] != "value" {
        return Err(CliError::Config(format!(
            "{}: expected columns x,value",
            path.display()
        )));
    }
    let (mut xs, mut vs) = (Vec::new(), Vec::new());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let parse = |s: &str| {
            s.parse::<f64>().map_err(|e| {
                CliError::Config(format!("{} record {}: {e}", path.display(), line + 1))
            })
        };
        xs.push(parse(&record[0])?);
        vs.push(parse(&record[1])?);
    }
    Ok(Sampled::from_points(&xs, vs)?)
}

fn build_field(
    spec: &FieldProfileSpec,
    grid: Grid,
    length: f64,
    base: &Path,
) -> Result<Sampled, CliError> {
    Ok(match spec {
        FieldProfileSpec::Constant { value } => Sampled::constant(grid, *value)?,
        FieldProfileSpec::Linear { offset, slope } => Sampled::linear(grid, *offset, *slope)?,
        FieldProfileSpec::Gaussian {
            background,
            amplitude,
            center,
            sigma,
        } => Sampled::gaussian(
            grid,
            *background,
            *amplitude,
            center.unwrap_or(0.5 * length),
            *sigma,
        )?,
        FieldProfileSpec::Csv { path } => read_csv_profile(&base.join(path))?,
    })
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn capacitance(
    p: &CapacitanceParams,
    base: &Path,
    report: &mut Report,
) -> Result<Status, CliError> {
    #[derive(Serialize)]
    struct EnergyPair {
        exact: f64,
        local: f64,
        relative_error: f64,
    }
    #[derive(Serialize)]
    struct SweepPoint {
        sigma_over_d: f64,
        exact: f64,
        local: f64,
        relative_error: f64,
    }
    #[derive(Serialize)]
    struct Sweep {
        points: Vec<SweepPoint>,
        /// Slope of `ln(relative_error)` against `ln(d / sigma)`.
        fitted_slope: f64,
        monotone: bool,
    }
    #[derive(Serialize)]
    struct Kinetic {
        from_current: f64,
        from_phase: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        density_fluctuation_ratio: Option<f64>,
    }
    #[derive(Serialize)]
    struct Body {
        c: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        density: Option<EnergyPair>,
        #[serde(skip_serializing_if = "Option::is_none")]
        total_charge: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        kinetic: Option<Kinetic>,
        #[serde(skip_serializing_if = "Option::is_none")]
        sweep: Option<Sweep>,
    }
    let geo = &p.geometry;
    let k = &p.constants;
    geo.validate()?;
    let c = capacitance_per_length(geo)?;
    let grid = Grid::periodic(geo.length, p.grid_points)?;
    let field = |s: &Option<FieldProfileSpec>| -> Result<Option<Sampled>, CliError> {
        s.as_ref()
            .map(|s| build_field(s, grid, geo.length, base))
            .transpose()
    };
    let density = field(&p.density)?;
    let phase = field(&p.phase)?;
    let a_integral = field(&p.vector_potential_integral)?;
    if a_integral.is_some() && phase.is_none() {
        return Err(CliError::Config(
            "params.vector_potential_integral needs params.phase".into(),
        ));
    }

    let mut body = Body {
        c,
        density: None,
        total_charge: None,
        kinetic: None,
        sweep: None,
    };
    let mut columns: Vec<&'static str> = vec!["x"];
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut x_axis: Option<Vec<f64>> = None;

    if let Some(n) = &density {
        let exact = capacitive_energy_exact(n, geo, k)?;
        let local = capacitive_energy_local(n, c, k)?;
        body.density = Some(EnergyPair {
            exact,
            local,
            relative_error: ((exact - local) / local).abs(),
        });
        let q = macroscopic_charge(n, k)?;
        body.total_charge = q.values.last().copied();
        columns.extend(["n", "voltage", "charge"]);
        x_axis = Some(n.grid.points());
        cols.push(n.values.clone());
        cols.push(voltage_profile(n, c, k)?.values);
        cols.push(q.values);
    }
    if let Some(phi) = &phase {
        let n_x = geo.line_density();
        let l = inductance_per_length(k, n_x)?;
        let current = current_profile(phi, k, n_x)?;
        body.kinetic = Some(Kinetic {
            from_current: inductive_energy_from_current(&current, l)?,
            from_phase: inductive_energy_from_phase(phi, l, k)?,
            density_fluctuation_ratio: density
                .as_ref()
                .map(|n| density_fluctuation_ratio(phi, n))
                .transpose()?,
        });
        if let Some(x) = &x_axis {
            if x.len() != phi.len() {
                return Err(CliError::Config(
                    "params.phase and params.density use different grids".into(),
                ));
            }
        }
        x_axis.get_or_insert_with(|| phi.grid.points());
        columns.extend(["phi", "current"]);
        cols.push(phi.values.clone());
        cols.push(current.values);
        if let Some(a) = &a_integral {
            columns.push("phi_gauge_invariant");
            cols.push(gauge_invariant_phase(phi, a, k)?.values);
        }
    }
    if let Some(x) = x_axis {
        let mut t = Table::new(&columns);
        for (i, xi) in x.iter().enumerate() {
            let mut row = vec![Cell::Float(*xi)];
            row.extend(cols.iter().map(|c| Cell::Float(c[i])));
            t.push(row);
        }
        report.csv("fields.csv", &t);
    }

    if let Some(sweep) = &p.gaussian_sweep {
        if sweep.sigma_over_d.is_empty() {
            return Err(CliError::Config(
                "params.gaussian_sweep.sigma_over_d is empty".into(),
            ));
        }
        let points = sweep
            .sigma_over_d
            .par_iter()
            .map(|&r| {
                let n = Sampled::gaussian(
                    grid,
                    sweep.background,
                    sweep.amplitude,
                    0.5 * geo.length,
                    r * geo.spacing,
                )?;
                let exact = capacitive_energy_exact(&n, geo, k)?;
                let local = capacitive_energy_local(&n, c, k)?;
                Ok(SweepPoint {
                    sigma_over_d: r,
                    exact,
                    local,
                    relative_error: ((exact - local) / local).abs(),
                })
            })
            .collect::<Result<Vec<_>, opq_core::Error>>()?;
        let xs: Vec<f64> = points.iter().map(|q| (1.0 / q.sigma_over_d).ln()).collect();
        let ys: Vec<f64> = points.iter().map(|q| q.relative_error.ln()).collect();
        let mut order: Vec<&SweepPoint> = points.iter().collect();
        order.sort_by(|a, b| a.sigma_over_d.total_cmp(&b.sigma_over_d));
        let monotone = order
            .windows(2)
            .all(|w| w[1].relative_error < w[0].relative_error);
        let mut t = Table::new(&["sigma_over_d", "exact", "local", "relative_error"]);
        for q in &points {
            t.push(vec![
                q.sigma_over_d.into(),
                q.exact.into(),
                q.local.into(),
                q.relative_error.into(),
            ]);
        }
        report.csv("capacitance_sweep.csv", &t);
        let fitted_slope = if points.len() > 1 {
            least_squares_slope(&xs, &ys)
        } else {
            f64::NAN
        };
        body.sweep = Some(Sweep {
            points,
            fitted_slope,
            monotone,
        });
    }
    report.json("capacitance.json", &body)?;
    Ok(Status::Ok)
}

fn modes(p: &ModesParams, report: &mut Report) -> Result<Status, CliError> {
    #[derive(Serialize)]
    struct LadderRun {
        segments: usize,
        omega: Vec<f64>,
        relative_error: Vec<f64>,
    }
    #[derive(Serialize)]
    struct Ladder {
        boundary: ModeBoundary,
        runs: Vec<LadderRun>,
        /// `log2(err_N / err_2N)` per mode for consecutive segment counts.
        empirical_order: Vec<Vec<f64>>,
    }
    #[derive(Serialize)]
    struct Body {
        l: f64,
        c: f64,
        v: f64,
        omega: Vec<f64>,
        omega_1_closed_form: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        ladder: Option<Ladder>,
    }
    let params = mode_frequencies(&p.geometry, &p.constants, p.j_max)?;
    let closed = fundamental_closed_form(&p.geometry, &p.constants)?;
    let ladder = match &p.ladder {
        None => None,
        Some(spec) => {
            let runs = spec
                .segments
                .par_iter()
                .map(|&n| {
                    let w = lc_chain_normal_modes(
                        params.l,
                        params.c,
                        p.geometry.length,
                        n,
                        spec.boundary,
                    )?;
                    let omega: Vec<f64> = w.into_iter().take(p.j_max).collect();
                    let relative_error = omega
                        .iter()
                        .zip(&params.omega)
                        .map(|(a, b)| (a - b).abs() / b)
                        .collect();
                    Ok(LadderRun {
                        segments: n,
                        omega,
                        relative_error,
                    })
                })
                .collect::<Result<Vec<_>, opq_core::Error>>()?;
            let empirical_order = runs
                .windows(2)
                .map(|w| {
                    let steps = (w[1].segments as f64 / w[0].segments as f64).log2();
                    w[0].relative_error
                        .iter()
                        .zip(&w[1].relative_error)
                        .map(|(a, b)| (a / b).log2() / steps)
                        .collect()
                })
                .collect();
            Some(Ladder {
                boundary: spec.boundary,
                runs,
                empirical_order,
            })
        }
    };
    let mut t = Table::new(&["j", "omega"]);
    for (j, w) in params.omega.iter().enumerate() {
        t.push(vec![(j + 1).into(), (*w).into()]);
    }
    report.csv("modes.csv", &t);
    report.json(
        "modes.json",
        &Body {
            l: params.l,
            c: params.c,
            v: params.v,
            omega: params.omega,
            omega_1_closed_form: closed,
            ladder,
        },
    )?;
    Ok(Status::Ok)
}

fn qubit(p: &QubitParams, report: &mut Report) -> Result<Status, CliError> {
    #[derive(Serialize)]
    struct Body {
        levels: Vec<f64>,
        converged: bool,
        truncation_change: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        e01: Option<f64>,
        #[serde(skip_serializing_if = "Option::is_none")]
        anharmonicity: Option<f64>,
        /// Large-`E_J` limit of `E_1 - E_0` in the configured charge units.
        transmon_asymptote: f64,
    }
    let s = cpb_spectrum(&p.junction, p.n_levels)?;
    let effective_e_c = match p.junction.charge_counting {
        ChargeCounting::Electrons => p.junction.e_c,
        ChargeCounting::Pairs => 0.25 * p.junction.e_c,
    };
    let l = &s.levels;
    let mut t = Table::new(&["level", "energy"]);
    for (i, e) in l.iter().enumerate() {
        t.push(vec![i.into(), (*e).into()]);
    }
    report.csv("spectrum.csv", &t);
    report.json(
        "spectrum.json",
        &Body {
            levels: l.clone(),
            converged: s.converged,
            truncation_change: s.truncation_change,
            e01: (l.len() > 1).then(|| l[1] - l[0]),
            anharmonicity: (l.len() > 2).then(|| (l[2] - l[1]) - (l[1] - l[0])),
            transmon_asymptote: transmon_splitting(effective_e_c, p.junction.e_j),
        },
    )?;
    Ok(if s.converged {
        Status::Ok
    } else {
        Status::NotConverged(format!(
            "charge truncation n_cut = {} not converged (levels move by {:e})",
            p.junction.n_cut, s.truncation_change
        ))
    })
}

fn oracles(p: &OracleParams, seed: u64, report: &mut Report) -> Result<Status, CliError> {
    let r: OracleReport = verify_oracles(seed, p.trials)?;
    report.json("oracles.json", &r)?;
    Ok(if r.passed {
        Status::Ok
    } else {
        Status::Failed(format!(
            "oracle deviation {:e} exceeds {:e}",
            r.max_deviation(),
            r.tolerance
        ))
    })
}
