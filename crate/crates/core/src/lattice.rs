//! Lattice geometry, model parameters and physical constants.
//!
//! Energies are measured in units of the hopping `t` and lengths in units of
//! the lattice constant. SI quantities only appear in [`crate::circuit`].

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported number of lattice sites. The mean-field solver
/// diagonalizes a dense `2N x 2N` Hermitian matrix every iteration.
pub const MAX_SITES: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    Open,
}

/// Parameters of the attractive Hubbard model on a hypercubic lattice.
///
/// Axis 0 is the wire axis; phase profiles are indexed along it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub dims: Vec<usize>,
    pub boundary: Vec<Boundary>,
    #[serde(default = "default_hopping")]
    pub hopping: f64,
    pub interaction: f64,
    pub chemical_potential: f64,
    /// Per-site potential energy `eV_i`, stored as a single energy value.
    /// An empty vector means zero everywhere.
    #[serde(default)]
    pub external_potential: Vec<f64>,
    /// Lattice constant in metres; only used when converting to circuit
    /// quantities.
    #[serde(default = "default_lattice_constant")]
    pub lattice_constant: f64,
}

fn default_hopping() -> f64 {
    1.0
}

fn default_lattice_constant() -> f64 {
    1e-9
}

impl LatticeSpec {
    /// One-dimensional chain or ring with zero external potential.
    pub fn chain(
        sites: usize,
        boundary: Boundary,
        interaction: f64,
        chemical_potential: f64,
    ) -> Self {
        LatticeSpec {
            dims: vec![sites],
            boundary: vec![boundary],
            hopping: 1.0,
            interaction,
            chemical_potential,
            external_potential: vec![0.0; sites],
            lattice_constant: default_lattice_constant(),
        }
    }

    pub fn num_sites(&self) -> usize {
        self.dims.iter().product()
    }

    /// Number of sites along the wire axis.
    pub fn wire_length(&self) -> usize {
        self.dims.first().copied().unwrap_or(0)
    }

    pub fn potential(&self, site: usize) -> f64 {
        self.external_potential.get(site).copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.len() > 3 {
            return Err(Error::config(format!(
                "lattice must have 1 to 3 axes, got {}",
                self.dims.len()
            )));
        }
        if self.boundary.len() != self.dims.len() {
            return Err(Error::config(format!(
                "boundary has {} entries but lattice has {} axes",
                self.boundary.len(),
                self.dims.len()
            )));
        }
        if self.dims.contains(&0) {
            return Err(Error::config("every axis needs at least one site"));
        }
        let n = self.num_sites();
        if n > MAX_SITES {
            return Err(Error::Capacity {
                what: "lattice sites",
                requested: n,
                limit: MAX_SITES,
            });
        }
        if !self.external_potential.is_empty() && self.external_potential.len() != n {
            return Err(Error::config(format!(
                "external_potential has {} entries, expected {n}",
                self.external_potential.len()
            )));
        }
        if !(self.interaction >= 0.0) || !self.interaction.is_finite() {
            return Err(Error::config("interaction U must be finite and >= 0"));
        }
        if !self.hopping.is_finite() || !self.chemical_potential.is_finite() {
            return Err(Error::config(
                "hopping and chemical_potential must be finite",
            ));
        }
        if self.external_potential.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("external_potential must be finite"));
        }
        if !(self.lattice_constant > 0.0) {
            return Err(Error::config("lattice_constant must be > 0"));
        }
        Ok(())
    }
}

/// A nearest-neighbor bond `i < j`.
///
/// `multiplicity` is 2 when a periodic axis of length 2 wraps back onto the
/// same neighbor, so the pair is connected by two distinct hops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bond {
    pub i: usize,
    pub j: usize,
    pub axis: usize,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeGraph {
    dims: Vec<usize>,
    bonds: Vec<Bond>,
}

impl LatticeGraph {
    pub fn num_sites(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    /// Number of hops, counting multiplicities.
    pub fn num_bonds(&self) -> usize {
        self.bonds.iter().map(|b| b.multiplicity as usize).sum()
    }

    /// Site index of a coordinate; axis 0 varies fastest.
    pub fn index(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(&self.dims)
            .rev()
            .fold(0, |acc, (&c, &d)| acc * d + c)
    }

    pub fn coords(&self, mut site: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|&d| {
                let c = site % d;
                site /= d;
                c
            })
            .collect()
    }

    /// Position of a site along the wire axis.
    pub fn wire_coordinate(&self, site: usize) -> usize {
        site % self.dims[0]
    }
}

pub fn build_lattice(spec: &LatticeSpec) -> Result<LatticeGraph> {
    spec.validate()?;
    let dims = spec.dims.clone();
    let n: usize = dims.iter().product();
    let mut graph = LatticeGraph {
        dims,
        bonds: Vec::new(),
    };

    for site in 0..n {
        let coords = graph.coords(site);
        for (axis, &len) in graph.dims.iter().enumerate() {
            let c = coords[axis];
            let next = if c + 1 < len {
                c + 1
            } else if spec.boundary[axis] == Boundary::Periodic && len > 1 {
                0
            } else {
                continue;
            };
            let mut other = coords.clone();
            other[axis] = next;
            let neighbor = graph.index(&other);
            let (i, j) = if site < neighbor {
                (site, neighbor)
            } else {
                (neighbor, site)
            };
            match graph.bonds.iter_mut().find(|b| b.i == i && b.j == j) {
                Some(bond) => bond.multiplicity += 1,
                None => graph.bonds.push(Bond {
                    i,
                    j,
                    axis,
                    multiplicity: 1,
                }),
            }
        }
    }
    graph.bonds.sort_by_key(|b| (b.i, b.j));
    Ok(graph)
}

/// Single-particle matrix `h` with `h_ij = -t` per hop and
/// `h_ii = -(eV_i + mu)`.
pub fn hamiltonian_matrix(graph: &LatticeGraph, spec: &LatticeSpec) -> Result<DMatrix<f64>> {
    spec.validate()?;
    let n = graph.num_sites();
    if n != spec.num_sites() || graph.dims() != spec.dims.as_slice() {
        return Err(Error::config(
            "lattice graph does not match the lattice spec",
        ));
    }
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        h[(i, i)] = -(spec.potential(i) + spec.chemical_potential);
    }
    for b in graph.bonds() {
        let value = -spec.hopping * b.multiplicity as f64;
        h[(b.i, b.j)] = value;
        h[(b.j, b.i)] = value;
    }
    Ok(h)
}

/// Elementary charge, reduced Planck constant and electron mass in SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[cfg_attr(feature = "schema", derive(schemars::JsonSchema))]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    pub elementary_charge: f64,
    pub hbar: f64,
    pub electron_mass: f64,
}

impl Default for PhysicalConstants {
    /// CODATA 2018 values.
    fn default() -> Self {
        PhysicalConstants {
            elementary_charge: 1.602_176_634e-19,
            hbar: 1.054_571_817e-34,
            electron_mass: 9.109_383_701_5e-31,
        }
    }
}

impl PhysicalConstants {
    pub fn new(elementary_charge: f64, hbar: f64, electron_mass: f64) -> Result<Self> {
        let c = PhysicalConstants {
            elementary_charge,
            hbar,
            electron_mass,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.elementary_charge, self.hbar, self.electron_mass];
        if all.iter().all(|v| v.is_finite() && *v > 0.0) {
            Ok(())
        } else {
            Err(Error::config("physical constants must be finite and > 0"))
        }
    }
}
