//! Charge-basis spectrum of a Josephson junction,
//! `H = E_C dN^2 + E_J cos(dphi)`.
//!
//! `cos(dphi)` shifts the charge quantum number by one, so the Hamiltonian is
//! tridiagonal in the charge basis `n = -n_cut..=n_cut`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tridiag::SymTridiagonal;

/// Smallest supported charge-basis truncation.
pub const MIN_N_CUT: usize = 5;

/// Relative change (in units of `E_C`) below which doubling `n_cut` counts
/// as converged.
pub const TRUNCATION_TOLERANCE: f64 = 1e-10;

/// What the charge quantum number `n` counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "snake_case")]
pub enum ChargeCounting {
    /// `dN = n`: diagonal `E_C (n - n_offset)^2`.
    #[default]
    Pairs,
    /// `dN = 2n` electrons per pair: diagonal `4 E_C (n - n_offset)^2`.
    Electrons,
}

impl ChargeCounting {
    fn factor(self) -> f64 {
        match self {
            ChargeCounting::Pairs => 1.0,
            ChargeCounting::Electrons => 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(deny_unknown_fields)]
pub struct JunctionSpec {
    pub e_c: f64,
    pub e_j: f64,
    pub n_cut: usize,
    #[serde(default)]
    pub n_offset: f64,
    #[serde(default)]
    pub charge_counting: ChargeCounting,
}

impl JunctionSpec {
    pub fn new(e_c: f64, e_j: f64, n_cut: usize) -> Self {
        JunctionSpec {
            e_c,
            e_j,
            n_cut,
            n_offset: 0.0,
            charge_counting: ChargeCounting::Pairs,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_c.is_finite() && self.e_c > 0.0) {
            return Err(Error::config(format!(
                "e_c must be finite and > 0, got {}",
                self.e_c
            )));
        }
        if !self.e_j.is_finite() || !self.n_offset.is_finite() {
            return Err(Error::config("e_j and n_offset must be finite"));
        }
        if self.n_cut < MIN_N_CUT {
            return Err(Error::config(format!(
                "n_cut must be at least {MIN_N_CUT}, got {}",
                self.n_cut
            )));
        }
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        2 * self.n_cut + 1
    }

    fn matrix(&self, n_cut: usize) -> Result<SymTridiagonal> {
        let q = self.charge_counting.factor();
        let diag = (-(n_cut as i64)..=n_cut as i64)
            .map(|n| q * self.e_c * (n as f64 - self.n_offset).powi(2))
            .collect();
        SymTridiagonal::new(diag, &vec![0.5 * self.e_j; 2 * n_cut])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpbSpectrum {
    /// Lowest eigenvalues at the requested truncation, ascending.
    pub levels: Vec<f64>,
    /// Largest change of any returned level when `n_cut` is doubled.
    pub truncation_change: f64,
    /// `truncation_change < 1e-10 E_C`.
    pub converged: bool,
}

pub fn cpb_spectrum(spec: &JunctionSpec, n_levels: usize) -> Result<CpbSpectrum> {
    spec.validate()?;
    if n_levels == 0 || n_levels > spec.dimension() {
        return Err(Error::config(format!(
            "n_levels must be in 1..={}, got {n_levels}",
            spec.dimension()
        )));
    }
    let levels = spec.matrix(spec.n_cut)?.lowest(n_levels);
    let refined = spec.matrix(2 * spec.n_cut)?.lowest(n_levels);
    let truncation_change = levels
        .iter()
        .zip(&refined)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(CpbSpectrum {
        levels,
        truncation_change,
        converged: truncation_change < TRUNCATION_TOLERANCE * spec.e_c,
    })
}

/// `sqrt(8 E_C E_J) - E_C`, the large-`E_J` limit of `E_1 - E_0` when `n`
/// counts electrons.
pub fn transmon_splitting(e_c: f64, e_j: f64) -> f64 {
    (8.0 * e_c * e_j.abs()).sqrt() - e_c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_charge_levels() {
        let s = cpb_spectrum(&JunctionSpec::new(1.5, 0.0, 6), 7).unwrap();
        assert_eq!(s.levels, vec![0.0, 1.5, 1.5, 6.0, 6.0, 13.5, 13.5]);
        assert!(s.converged);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(cpb_spectrum(&JunctionSpec::new(0.0, 1.0, 6), 1).is_err());
        assert!(cpb_spectrum(&JunctionSpec::new(1.0, 1.0, 4), 1).is_err());
        assert!(cpb_spectrum(&JunctionSpec::new(1.0, f64::NAN, 6), 1).is_err());
        assert!(cpb_spectrum(&JunctionSpec::new(1.0, 1.0, 5), 12).is_err());
        assert!(cpb_spectrum(&JunctionSpec::new(1.0, 1.0, 5), 0).is_err());
    }

    #[test]
    fn poor_truncation_is_flagged() {
        let s = cpb_spectrum(&JunctionSpec::new(1.0, 400.0, 5), 3).unwrap();
        assert!(!s.converged);
    }
}
