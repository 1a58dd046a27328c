//! Transmission-line description of a superconducting wire above a ground
//! plane: kinetic inductance and geometric capacitance per unit length,
//! the electrostatic kernel, current and voltage maps and the mode spectrum.
//!
//! All quantities are SI. Sampled profiles live on a uniform grid covering
//! `[x0, x0 + len * dx)`; the capacitive energy treats that interval as one
//! period.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::lattice::PhysicalConstants;
use crate::tridiag::SymTridiagonal;

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::config(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(deny_unknown_fields)]
pub struct ResonatorGeometry {
    /// Wire length `L_x` (m).
    pub length: f64,
    /// Transverse width `L_y` (m).
    pub width: f64,
    /// Effective surface-current thickness `L_z` (m).
    pub thickness_eff: f64,
    /// Distance `d` to the ground plane (m).
    pub spacing: f64,
    /// Dielectric constant `epsilon` (F/m).
    pub permittivity: f64,
    /// Electron volume density (m^-3).
    pub electron_density: f64,
}

impl ResonatorGeometry {
    pub fn validate(&self) -> Result<()> {
        positive("length", self.length)?;
        positive("width", self.width)?;
        positive("thickness_eff", self.thickness_eff)?;
        positive("spacing", self.spacing)?;
        positive("permittivity", self.permittivity)?;
        positive("electron_density", self.electron_density)?;
        positive("line density", self.line_density())
    }

    /// Electrons per unit length, `n_x = n L_y L_z`.
    pub fn line_density(&self) -> f64 {
        self.electron_density * self.width * self.thickness_eff
    }
}

/// Inductance per unit length `l = m / (n_x e^2)`.
pub fn inductance_per_length(constants: &PhysicalConstants, line_density: f64) -> Result<f64> {
    constants.validate()?;
    positive("line density", line_density)?;
    Ok(constants.electron_mass / (line_density * constants.elementary_charge.powi(2)))
}

/// Capacitance per unit length `c = L_y epsilon / (2 d)`.
pub fn capacitance_per_length(geometry: &ResonatorGeometry) -> Result<f64> {
    geometry.validate()?;
    Ok(geometry.width * geometry.permittivity / (2.0 * geometry.spacing))
}

/// Fourier-space kernel `G(k) = (1 - exp(-2|k| d)) / (2 epsilon |k|)` with
/// `G(0) = d / epsilon`. Requires `d, epsilon > 0`.
pub fn greens_fourier(k: f64, spacing: f64, permittivity: f64) -> f64 {
    let k = k.abs();
    if k == 0.0 {
        spacing / permittivity
    } else {
        -(-2.0 * k * spacing).exp_m1() / (2.0 * permittivity * k)
    }
}

/// Uniform sampling grid `x_i = x0 + i dx`, `i < len`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub x0: f64,
    pub dx: f64,
    pub len: usize,
}

/// Relative tolerance on spacing when accepting sampled abscissae.
pub const GRID_TOLERANCE: f64 = 1e-9;

impl Grid {
    pub fn new(x0: f64, dx: f64, len: usize) -> Result<Self> {
        positive("grid spacing", dx)?;
        if !x0.is_finite() || len == 0 {
            return Err(Error::config(
                "grid needs a finite origin and at least one point",
            ));
        }
        Ok(Grid { x0, dx, len })
    }

    /// `len` points covering one period `[0, length)`.
    pub fn periodic(length: f64, len: usize) -> Result<Self> {
        positive("length", length)?;
        Self::new(0.0, length / len.max(1) as f64, len)
    }

    /// Reconstructs the grid from explicit abscissae, rejecting non-uniform
    /// spacing.
    pub fn from_points(xs: &[f64]) -> Result<Self> {
        if xs.len() < 2 {
            return Err(Error::config("need at least two grid points"));
        }
        let dx = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
        for (i, x) in xs.iter().enumerate() {
            let expect = xs[0] + i as f64 * dx;
            if !((x - expect).abs() <= GRID_TOLERANCE * dx) {
                return Err(Error::config(format!(
                    "non-uniform grid at point {i}: {x} vs {expect}"
                )));
            }
        }
        Self::new(xs[0], dx, xs.len())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.dx
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len).map(|i| self.x(i)).collect()
    }

    pub fn period(&self) -> f64 {
        self.dx * self.len as f64
    }
}

/// Samples of a scalar field on a uniform grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sampled {
    pub grid: Grid,
    pub values: Vec<f64>,
}

impl Sampled {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        check_dims(grid.len, values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("profile contains non-finite samples"));
        }
        Ok(Sampled { grid, values })
    }

    pub fn from_points(xs: &[f64], values: Vec<f64>) -> Result<Self> {
        Self::new(Grid::from_points(xs)?, values)
    }

    pub fn constant(grid: Grid, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len])
    }

    /// `offset + slope * x`.
    pub fn linear(grid: Grid, offset: f64, slope: f64) -> Result<Self> {
        Self::new(
            grid,
            grid.points().iter().map(|x| offset + slope * x).collect(),
        )
    }

    /// `background + amplitude * exp(-(x - center)^2 / (2 sigma^2))`.
    pub fn gaussian(
        grid: Grid,
        background: f64,
        amplitude: f64,
        center: f64,
        sigma: f64,
    ) -> Result<Self> {
        positive("sigma", sigma)?;
        let values = grid
            .points()
            .iter()
            .map(|x| background + amplitude * (-(x - center).powi(2) / (2.0 * sigma * sigma)).exp())
            .collect();
        Self::new(grid, values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn aligned(&self, other: &Sampled) -> Result<()> {
        check_dims(self.len(), other.len())?;
        let g = (&self.grid, &other.grid);
        let tol = GRID_TOLERANCE * g.0.dx;
        if (g.0.x0 - g.1.x0).abs() > tol || (g.0.dx - g.1.dx).abs() > GRID_TOLERANCE * g.0.dx {
            return Err(Error::config("profiles are sampled on different grids"));
        }
        Ok(())
    }

    /// Derivative by central differences, one-sided at both ends.
    pub fn gradient(&self) -> Result<Vec<f64>> {
        let n = self.len();
        if n < 2 {
            return Err(Error::config("derivative needs at least two samples"));
        }
        let (v, h) = (&self.values, self.grid.dx);
        Ok((0..n)
            .map(|i| match i {
                0 => (v[1] - v[0]) / h,
                _ if i == n - 1 => (v[n - 1] - v[n - 2]) / h,
                _ => (v[i + 1] - v[i - 1]) / (2.0 * h),
            })
            .collect())
    }

    /// Trapezoidal integral over the sampled interval.
    pub fn integral(&self) -> f64 {
        trapezoid(&self.values, self.grid.dx)
    }

    /// Running trapezoidal integral from the first sample.
    pub fn cumulative_integral(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.len());
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                acc += 0.5 * self.grid.dx * (self.values[i - 1] + v);
            }
            out.push(acc);
        }
        out
    }
}

/// Compensated (Neumaier) summation.
fn accurate_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

fn trapezoid(values: &[f64], dx: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => dx * (accurate_sum(values.iter().copied()) - 0.5 * (values[0] + values[n - 1])),
    }
}

fn check_domain(n: &Sampled, geometry: &ResonatorGeometry) -> Result<()> {
    let period = n.grid.period();
    if (period - geometry.length).abs() > GRID_TOLERANCE * geometry.length {
        return Err(Error::config(format!(
            "profile period {period} does not match wire length {}",
            geometry.length
        )));
    }
    Ok(())
}

/// `H_2 = e^2 / (L_y L_x) sum_m |n(k_m)|^2 G(k_m)` with
/// `n(k) = sum_j dx exp(-i k x_j) n(x_j)` and `k_m = 2 pi m / L_x` over the
/// discrete periodic spectrum.
pub fn capacitive_energy_exact(
    n: &Sampled,
    geometry: &ResonatorGeometry,
    constants: &PhysicalConstants,
) -> Result<f64> {
    geometry.validate()?;
    constants.validate()?;
    check_domain(n, geometry)?;
    let len = n.len();
    let mut buf: Vec<Complex64> = n.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let period = n.grid.period();
    let sum = accurate_sum(buf.iter().enumerate().map(|(m, z)| {
        // aliased index: m and m - len are the same grid frequency
        let signed = if m <= len / 2 {
            m as f64
        } else {
            m as f64 - len as f64
        };
        let k = std::f64::consts::TAU * signed / period;
        z.norm_sqr() * greens_fourier(k, geometry.spacing, geometry.permittivity)
    }));
    let e = constants.elementary_charge;
    Ok(e * e * n.grid.dx * n.grid.dx * sum / (geometry.width * period))
}

/// Local approximation `H_2 = int dx (e n)^2 / (2c)` by the periodic
/// trapezoid rule.
pub fn capacitive_energy_local(n: &Sampled, c: f64, constants: &PhysicalConstants) -> Result<f64> {
    positive("capacitance", c)?;
    constants.validate()?;
    let e = constants.elementary_charge;
    Ok(n.grid.dx * accurate_sum(n.values.iter().map(|v| (e * v).powi(2))) / (2.0 * c))
}

/// `|exact - local| / local`.
pub fn local_capacitance_error(
    n: &Sampled,
    geometry: &ResonatorGeometry,
    constants: &PhysicalConstants,
) -> Result<f64> {
    let exact = capacitive_energy_exact(n, geometry, constants)?;
    let local = capacitive_energy_local(n, capacitance_per_length(geometry)?, constants)?;
    Ok(((exact - local) / local).abs())
}

/// Supercurrent `I = e hbar n_x / (2m) d(phi)/dx`.
pub fn current_profile(
    phi: &Sampled,
    constants: &PhysicalConstants,
    line_density: f64,
) -> Result<Sampled> {
    constants.validate()?;
    positive("line density", line_density)?;
    let factor = constants.elementary_charge * constants.hbar * line_density
        / (2.0 * constants.electron_mass);
    Sampled::new(
        phi.grid,
        phi.gradient()?.into_iter().map(|g| factor * g).collect(),
    )
}

/// `V = -e n / c`.
pub fn voltage_profile(n: &Sampled, c: f64, constants: &PhysicalConstants) -> Result<Sampled> {
    positive("capacitance", c)?;
    constants.validate()?;
    let e = constants.elementary_charge;
    Sampled::new(n.grid, n.values.iter().map(|v| -e * v / c).collect())
}

/// `phi~(x) = phi(x) - (2e / hbar) int_0^x A dl`, given the line integral
/// sampled on the same grid.
pub fn gauge_invariant_phase(
    phi: &Sampled,
    a_integral: &Sampled,
    constants: &PhysicalConstants,
) -> Result<Sampled> {
    constants.validate()?;
    phi.aligned(a_integral)?;
    let k = 2.0 * constants.elementary_charge / constants.hbar;
    Sampled::new(
        phi.grid,
        phi.values
            .iter()
            .zip(&a_integral.values)
            .map(|(p, a)| p - k * a)
            .collect(),
    )
}

/// `Q(x) = -e int_{x0}^x n dx'` by the cumulative trapezoid rule.
pub fn macroscopic_charge(n: &Sampled, constants: &PhysicalConstants) -> Result<Sampled> {
    constants.validate()?;
    let e = constants.elementary_charge;
    Sampled::new(
        n.grid,
        n.cumulative_integral()
            .into_iter()
            .map(|q| -e * q)
            .collect(),
    )
}

/// `int dx l I^2 / 2`.
pub fn inductive_energy_from_current(current: &Sampled, l: f64) -> Result<f64> {
    positive("inductance", l)?;
    Ok(0.5
        * l
        * trapezoid(
            &current.values.iter().map(|i| i * i).collect::<Vec<_>>(),
            current.grid.dx,
        ))
}

/// Leading-order kinetic energy `int dx (1 / 2l) (hbar phi' / 2e)^2`.
pub fn inductive_energy_from_phase(
    phi: &Sampled,
    l: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    positive("inductance", l)?;
    constants.validate()?;
    let k = constants.hbar / (2.0 * constants.elementary_charge);
    let sq: Vec<f64> = phi.gradient()?.iter().map(|g| (k * g).powi(2)).collect();
    Ok(trapezoid(&sq, phi.grid.dx) / (2.0 * l))
}

/// Size of the density-fluctuation correction to the kinetic energy
/// relative to the retained term: `int (n - n_x) phi'^2 / int n_x phi'^2`,
/// with `n_x` the mean line density.
pub fn density_fluctuation_ratio(phi: &Sampled, n: &Sampled) -> Result<f64> {
    phi.aligned(n)?;
    let mean = n.values.iter().sum::<f64>() / n.len() as f64;
    positive("mean line density", mean)?;
    let g2: Vec<f64> = phi.gradient()?.iter().map(|g| g * g).collect();
    let fluct: Vec<f64> = g2
        .iter()
        .zip(&n.values)
        .map(|(g, v)| g * (v - mean))
        .collect();
    let lead = mean * trapezoid(&g2, phi.grid.dx);
    if lead == 0.0 {
        return Ok(0.0);
    }
    Ok(trapezoid(&fluct, phi.grid.dx) / lead)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// Inductance per unit length (H/m).
    pub l: f64,
    /// Capacitance per unit length (F/m).
    pub c: f64,
    /// Mode velocity `1 / sqrt(l c)` (m/s).
    pub v: f64,
    /// Angular frequencies `omega_1..omega_jmax` (rad/s).
    pub omega: Vec<f64>,
}

/// `omega_1 = pi / (L_x sqrt(l c))`.
pub fn fundamental_from_lc(l: f64, c: f64, length: f64) -> f64 {
    std::f64::consts::PI / (length * (l * c).sqrt())
}

/// `omega_1 = (e pi / L_x) (2 d n_x / (L_y epsilon m))^(1/2)`.
pub fn fundamental_closed_form(
    geometry: &ResonatorGeometry,
    constants: &PhysicalConstants,
) -> Result<f64> {
    geometry.validate()?;
    constants.validate()?;
    let g = geometry;
    let inner =
        2.0 * g.spacing * g.line_density() / (g.width * g.permittivity * constants.electron_mass);
    Ok(constants.elementary_charge * std::f64::consts::PI / g.length * inner.sqrt())
}

pub fn mode_frequencies(
    geometry: &ResonatorGeometry,
    constants: &PhysicalConstants,
    j_max: usize,
) -> Result<CircuitParams> {
    if j_max < 1 {
        return Err(Error::config("j_max must be at least 1"));
    }
    let l = inductance_per_length(constants, geometry.line_density())?;
    let c = capacitance_per_length(geometry)?;
    let w1 = fundamental_from_lc(l, c, geometry.length);
    Ok(CircuitParams {
        l,
        c,
        v: 1.0 / (l * c).sqrt(),
        omega: (1..=j_max).map(|j| j as f64 * w1).collect(),
    })
}

/// End condition of the discretized line.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "snake_case")]
pub enum ModeBoundary {
    /// Zero current through both ends.
    #[default]
    Open,
    /// Both ends held at zero voltage (experimental).
    Grounded,
}

/// Normal-mode angular frequencies of an LC ladder with `segments` cells of
/// inductance `l dx` and capacitance `c dx`, `dx = L_x / segments`, in
/// ascending order. The zero mode of the open line is dropped.
pub fn lc_chain_normal_modes(
    l: f64,
    c: f64,
    length: f64,
    segments: usize,
    boundary: ModeBoundary,
) -> Result<Vec<f64>> {
    positive("inductance", l)?;
    positive("capacitance", c)?;
    positive("length", length)?;
    if segments < 2 {
        return Err(Error::config("LC chain needs at least two segments"));
    }
    let dx = length / segments as f64;
    let scale = 1.0 / (l * dx * c * dx);
    let (diag, skip) = match boundary {
        ModeBoundary::Open => {
            let mut d = vec![2.0 * scale; segments];
            d[0] = scale;
            d[segments - 1] = scale;
            (d, 1)
        }
        ModeBoundary::Grounded => (vec![2.0 * scale; segments - 1], 0),
    };
    let off = vec![-scale; diag.len() - 1];
    let eig = SymTridiagonal::new(diag, &off)?.eigenvalues();
    Ok(eig
        .into_iter()
        .skip(skip)
        .map(|w2| w2.max(0.0).sqrt())
        .collect())
}
