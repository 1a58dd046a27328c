//! Run configuration files.
//!
//! A config is a JSON object `{command, params, output_dir?, seed?}`. Every
//! object may carry a `"_note"` string, which is dropped before parsing;
//! any other unknown key is an error naming its path.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use opq_core::circuit::{ModeBoundary, ResonatorGeometry};
use opq_core::lattice::{LatticeSpec, PhysicalConstants};
use opq_core::meanfield::SolverOptions;
use opq_core::qubit::JunctionSpec;
use schemars::JsonSchema;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const NOTE_KEY: &str = "_note";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    SolveGroundstate,
    PhaseStiffness,
    OverlapDecay,
    CircuitParams,
    CapacitanceCheck,
    Modes,
    QubitSpectrum,
    VerifyOracles,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SolveGroundstate => "solve-groundstate",
            Command::PhaseStiffness => "phase-stiffness",
            Command::OverlapDecay => "overlap-decay",
            Command::CircuitParams => "circuit-params",
            Command::CapacitanceCheck => "capacitance-check",
            Command::Modes => "modes",
            Command::QubitSpectrum => "qubit-spectrum",
            Command::VerifyOracles => "verify-oracles",
        }
    }

    /// JSON schema of the command's `params` block.
    pub fn schema(self) -> schemars::schema::RootSchema {
        match self {
            Command::SolveGroundstate => schemars::schema_for!(GroundStateParams),
            Command::PhaseStiffness => schemars::schema_for!(StiffnessParams),
            Command::OverlapDecay => schemars::schema_for!(OverlapParams),
            Command::CircuitParams => schemars::schema_for!(CircuitParamsParams),
            Command::CapacitanceCheck => schemars::schema_for!(CapacitanceParams),
            Command::Modes => schemars::schema_for!(ModesParams),
            Command::QubitSpectrum => schemars::schema_for!(QubitParams),
            Command::VerifyOracles => schemars::schema_for!(OracleParams),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Command,
    #[serde(default)]
    params: Value,
    output_dir: Option<PathBuf>,
    seed: Option<u64>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub params: Params,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    /// Directory of the config file; relative data paths resolve against it.
    pub base_dir: PathBuf,
    /// SHA-256 of the raw config bytes, hex encoded.
    pub hash: String,
}

#[derive(Debug, Clone)]
pub enum Params {
    GroundState(GroundStateParams),
    Stiffness(StiffnessParams),
    Overlap(OverlapParams),
    Circuit(CircuitParamsParams),
    Capacitance(CapacitanceParams),
    Modes(ModesParams),
    Qubit(QubitParams),
    Oracles(OracleParams),
}

fn strip_notes(value: &mut Value) {
    match value {
        Value::Object(map) => {
            map.remove(NOTE_KEY);
            map.values_mut().for_each(strip_notes);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_notes),
        _ => {}
    }
}

fn parse_params<T: DeserializeOwned>(value: Value) -> Result<T, CliError> {
    let value = if value.is_null() {
        Value::Object(Default::default())
    } else {
        value
    };
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        let at = if path == "." {
            "params".to_string()
        } else {
            format!("params.{path}")
        };
        CliError::Config(format!("{at}: {}", e.into_inner()))
    })
}

pub fn parse_config(bytes: &[u8], base_dir: &Path) -> Result<RunConfig, CliError> {
    use sha2::{Digest, Sha256};

    let mut value: Value = serde_json::from_slice(bytes)
        .map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
    strip_notes(&mut value);
    let raw: RawConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::Config(format!("{path}: {}", e.into_inner()))
    })?;
    let params = match raw.command {
        Command::SolveGroundstate => Params::GroundState(parse_params(raw.params)?),
        Command::PhaseStiffness => Params::Stiffness(parse_params(raw.params)?),
        Command::OverlapDecay => Params::Overlap(parse_params(raw.params)?),
        Command::CircuitParams => Params::Circuit(parse_params(raw.params)?),
        Command::CapacitanceCheck => Params::Capacitance(parse_params(raw.params)?),
        Command::Modes => Params::Modes(parse_params(raw.params)?),
        Command::QubitSpectrum => Params::Qubit(parse_params(raw.params)?),
        Command::VerifyOracles => Params::Oracles(parse_params(raw.params)?),
    };
    Ok(RunConfig {
        command: raw.command,
        params,
        output_dir: raw.output_dir,
        seed: raw.seed,
        base_dir: base_dir.to_path_buf(),
        hash: hex::encode(Sha256::digest(bytes)),
    })
}

/// Symmetry-breaking seed `amplitude * exp(i phase) * I` for the solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct InitialGuess {
    #[serde(default = "InitialGuess::default_amplitude")]
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

impl InitialGuess {
    fn default_amplitude() -> f64 {
        0.1
    }
}

impl Default for InitialGuess {
    fn default() -> Self {
        InitialGuess {
            amplitude: Self::default_amplitude(),
            phase: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GroundStateParams {
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub initial: InitialGuess,
}

/// Phase profile along the wire axis; its length is the wire length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhaseProfileSpec {
    Uniform {
        value: f64,
    },
    Linear {
        slope: f64,
    },
    /// Rises by `step` per site to the middle of the wire, then falls back.
    Triangle {
        step: f64,
    },
    Sine {
        amplitude: f64,
        periods: f64,
    },
    Values {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct StiffnessParams {
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub initial: InitialGuess,
    pub profile: PhaseProfileSpec,
    /// Amplitude multipliers applied to `profile`; one report per entry.
    #[serde(default = "default_scales")]
    pub scales: Vec<f64>,
}

fn default_scales() -> Vec<f64> {
    vec![1.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct OverlapParams {
    /// One-dimensional lattice of a single transverse mode.
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub solver: SolverOptions,
    #[serde(default)]
    pub initial: InitialGuess,
    pub profile_a: PhaseProfileSpec,
    pub profile_b: PhaseProfileSpec,
    pub max_modes: usize,
    /// Per-mode chemical potentials. When absent every mode carries the
    /// same ground state.
    #[serde(default)]
    pub mode_chemical_potentials: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CircuitParamsParams {
    pub geometry: ResonatorGeometry,
    #[serde(default)]
    pub constants: PhysicalConstants,
}

/// Field sampled along the wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldProfileSpec {
    Constant {
        value: f64,
    },
    Linear {
        #[serde(default)]
        offset: f64,
        slope: f64,
    },
    Gaussian {
        #[serde(default)]
        background: f64,
        amplitude: f64,
        /// Defaults to the middle of the wire.
        #[serde(default)]
        center: Option<f64>,
        sigma: f64,
    },
    /// CSV file with header `x,value`; relative paths resolve against the
    /// config file's directory.
    Csv {
        path: PathBuf,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct GaussianSweep {
    /// Widths in units of the ground-plane spacing.
    pub sigma_over_d: Vec<f64>,
    pub amplitude: f64,
    #[serde(default)]
    pub background: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct CapacitanceParams {
    pub geometry: ResonatorGeometry,
    #[serde(default)]
    pub constants: PhysicalConstants,
    /// Samples over one wire length for generated profiles.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    /// Line density `n(x)` (m^-1).
    #[serde(default)]
    pub density: Option<FieldProfileSpec>,
    /// Phase `phi(x)` for the current map.
    #[serde(default)]
    pub phase: Option<FieldProfileSpec>,
    /// Line integral of the vector potential from the first sample (T m^2 / m).
    #[serde(default)]
    pub vector_potential_integral: Option<FieldProfileSpec>,
    #[serde(default)]
    pub gaussian_sweep: Option<GaussianSweep>,
}

fn default_grid_points() -> usize {
    4096
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct LadderSpec {
    pub segments: Vec<usize>,
    #[serde(default)]
    pub boundary: ModeBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ModesParams {
    pub geometry: ResonatorGeometry,
    #[serde(default)]
    pub constants: PhysicalConstants,
    pub j_max: usize,
    #[serde(default)]
    pub ladder: Option<LadderSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct QubitParams {
    pub junction: JunctionSpec,
    pub n_levels: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct OracleParams {
    #[serde(default = "default_trials")]
    pub trials: usize,
}

fn default_trials() -> usize {
    200
}
