//! Brute-force occupation-basis oracle for clusters of at most four sites.
//!
//! Mode `i` is the spin-up orbital of site `i`, mode `N + i` the spin-down
//! orbital. Fermionic signs follow the usual Jordan-Wigner ordering.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dims, Error, Result};
use crate::linalg::CMatrix;

pub const MAX_FOCK_SITES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spin {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Create(usize),
    Annihilate(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Observable {
    /// `<c†_{iσ} c_{jσ}>`
    OneBody { i: usize, j: usize, spin: Spin },
    /// `<c_{j↓} c_{i↑}>`
    Pair { i: usize, j: usize },
    /// `<n_{i↑} n_{i↓}>`
    DoubleOccupancy(usize),
    /// Total electron number.
    Number,
    /// `<H>` for single-particle matrix `h` and on-site attraction `U`.
    Hubbard { h: DMatrix<f64>, interaction: f64 },
    /// Overlap with another normalized pair state `D psi D`.
    Overlap { psi: DMatrix<f64>, phases: Vec<f64> },
    /// Arbitrary operator string, leftmost operator applied last.
    String(Vec<Op>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    n_sites: usize,
    amps: Vec<Complex64>,
}

fn create(mode: usize, basis: u32) -> Option<(u32, f64)> {
    let bit = 1u32 << mode;
    if basis & bit != 0 {
        return None;
    }
    let sign = if (basis & (bit - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Some((basis | bit, sign))
}

fn annihilate(mode: usize, basis: u32) -> Option<(u32, f64)> {
    let bit = 1u32 << mode;
    if basis & bit == 0 {
        return None;
    }
    let sign = if (basis & (bit - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Some((basis & !bit, sign))
}

impl FockState {
    pub fn vacuum(n_sites: usize) -> Result<Self> {
        if n_sites > MAX_FOCK_SITES {
            return Err(Error::Capacity {
                what: "Fock oracle sites",
                requested: n_sites,
                limit: MAX_FOCK_SITES,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (2 * n_sites)];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(FockState { n_sites, amps })
    }

    /// Normalized `exp(sum_ij psi_ij c†_{i↑} c†_{j↓}) |0>`, built by summing
    /// the (terminating) power series of the pair operator.
    pub fn from_pair_amplitudes(psi: &CMatrix) -> Result<Self> {
        let n = psi.nrows();
        check_dims(n, psi.ncols())?;
        let vac = Self::vacuum(n)?;
        let mut total = vac.clone();
        let mut term = vac;
        for k in 1..=n {
            let mut next = term.zeroed();
            for i in 0..n {
                for j in 0..n {
                    let a = psi[(i, j)];
                    if a == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let moved = term.apply(&[Op::Create(i), Op::Create(n + j)]);
                    next.add_scaled(&moved, a);
                }
            }
            next.scale(Complex64::new(1.0 / k as f64, 0.0));
            total.add_scaled(&next, Complex64::new(1.0, 0.0));
            term = next;
        }
        total.normalize()?;
        Ok(total)
    }

    pub fn from_real(psi: &DMatrix<f64>, phases: &[f64]) -> Result<Self> {
        let mut state = Self::from_pair_amplitudes(&psi.map(|x| Complex64::new(x, 0.0)))?;
        state.apply_site_phases(phases)?;
        Ok(state)
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    fn zeroed(&self) -> Self {
        FockState {
            n_sites: self.n_sites,
            amps: vec![Complex64::new(0.0, 0.0); self.amps.len()],
        }
    }

    fn add_scaled(&mut self, other: &FockState, factor: Complex64) {
        for (a, b) in self.amps.iter_mut().zip(&other.amps) {
            *a += factor * b;
        }
    }

    fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sq().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::numerical("cannot normalize Fock state"));
        }
        self.scale(Complex64::new(1.0 / norm, 0.0));
        Ok(())
    }

    /// Multiplies by `exp(i sum_i phases_i n_i / 2)`.
    pub fn apply_site_phases(&mut self, phases: &[f64]) -> Result<()> {
        check_dims(self.n_sites, phases.len())?;
        let n = self.n_sites;
        for (basis, amp) in self.amps.iter_mut().enumerate() {
            let mut angle = 0.0;
            for (i, p) in phases.iter().enumerate() {
                let occ = ((basis >> i) & 1) + ((basis >> (n + i)) & 1);
                angle += 0.5 * p * occ as f64;
            }
            *amp *= Complex64::from_polar(1.0, angle);
        }
        Ok(())
    }

    /// Applies an operator string; the rightmost operator acts first.
    pub fn apply(&self, ops: &[Op]) -> FockState {
        let mut out = self.clone();
        for op in ops.iter().rev() {
            let mut next = out.zeroed();
            for (basis, amp) in out.amps.iter().enumerate() {
                if amp.norm_sqr() == 0.0 {
                    continue;
                }
                let moved = match *op {
                    Op::Create(m) => create(m, basis as u32),
                    Op::Annihilate(m) => annihilate(m, basis as u32),
                };
                if let Some((b, sign)) = moved {
                    next.amps[b as usize] += amp * sign;
                }
            }
            out = next;
        }
        out
    }

    pub fn inner(&self, other: &FockState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn expect_ops(&self, ops: &[Op]) -> Complex64 {
        self.inner(&self.apply(ops))
    }

    fn mode(&self, site: usize, spin: Spin) -> usize {
        match spin {
            Spin::Up => site,
            Spin::Down => self.n_sites + site,
        }
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site < self.n_sites {
            Ok(())
        } else {
            Err(Error::config(format!(
                "site {site} outside cluster of {} sites",
                self.n_sites
            )))
        }
    }

    pub fn expectation(&self, observable: &Observable) -> Result<Complex64> {
        let n = self.n_sites;
        Ok(match observable {
            Observable::OneBody { i, j, spin } => {
                self.check_site(*i)?;
                self.check_site(*j)?;
                self.expect_ops(&[
                    Op::Create(self.mode(*i, *spin)),
                    Op::Annihilate(self.mode(*j, *spin)),
                ])
            }
            Observable::Pair { i, j } => {
                self.check_site(*i)?;
                self.check_site(*j)?;
                self.expect_ops(&[Op::Annihilate(n + j), Op::Annihilate(*i)])
            }
            Observable::DoubleOccupancy(i) => {
                self.check_site(*i)?;
                self.expect_ops(&[
                    Op::Create(*i),
                    Op::Annihilate(*i),
                    Op::Create(n + i),
                    Op::Annihilate(n + i),
                ])
            }
            Observable::Number => (0..2 * n)
                .map(|m| self.expect_ops(&[Op::Create(m), Op::Annihilate(m)]))
                .sum(),
            Observable::Hubbard { h, interaction } => {
                check_dims(n, h.nrows())?;
                check_dims(n, h.ncols())?;
                let mut e = Complex64::new(0.0, 0.0);
                for spin in [Spin::Up, Spin::Down] {
                    for i in 0..n {
                        for j in 0..n {
                            if h[(i, j)] != 0.0 {
                                let ops = [
                                    Op::Create(self.mode(i, spin)),
                                    Op::Annihilate(self.mode(j, spin)),
                                ];
                                e += h[(i, j)] * self.expect_ops(&ops);
                            }
                        }
                    }
                }
                for i in 0..n {
                    e -= *interaction * self.expectation(&Observable::DoubleOccupancy(i))?;
                }
                e
            }
            Observable::Overlap { psi, phases } => {
                let other = FockState::from_real(psi, phases)?;
                check_dims(n, other.n_sites)?;
                self.inner(&other)
            }
            Observable::String(ops) => {
                for op in ops {
                    let (Op::Create(m) | Op::Annihilate(m)) = *op;
                    if m >= 2 * n {
                        return Err(Error::config(format!("mode {m} outside cluster")));
                    }
                }
                self.expect_ops(ops)
            }
        })
    }
}

/// Exact expectation value of `observable` in the normalized state
/// `D psi D` (site phases `phases`) on a cluster of at most four sites.
pub fn fock_oracle(
    psi: &DMatrix<f64>,
    phases: &[f64],
    observable: &Observable,
) -> Result<Complex64> {
    FockState::from_real(psi, phases)?.expectation(observable)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_number_is_zero() {
        let z = DMatrix::zeros(2, 2);
        let v = fock_oracle(&z, &[0.0, 0.0], &Observable::Number).unwrap();
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn single_site_pair_amplitude() {
        // (|0> + c†↑ c†↓ |0>) / sqrt(2)
        let psi = DMatrix::from_element(1, 1, 1.0);
        let v = fock_oracle(&psi, &[0.0], &Observable::Pair { i: 0, j: 0 }).unwrap();
        assert!((v - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let d = fock_oracle(&psi, &[0.0], &Observable::DoubleOccupancy(0)).unwrap();
        assert!((d.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn anticommutation_signs() {
        // c_0 c†_0 + c†_0 c_0 = 1 and c_0 c_1 = -c_1 c_0 on a populated state.
        let psi = DMatrix::from_row_slice(2, 2, &[0.3, 0.7, 0.7, -0.4]);
        let s = FockState::from_real(&psi, &[0.0, 0.0]).unwrap();
        let a = s
            .expectation(&Observable::String(vec![Op::Annihilate(0), Op::Create(0)]))
            .unwrap();
        let b = s
            .expectation(&Observable::String(vec![Op::Create(0), Op::Annihilate(0)]))
            .unwrap();
        assert!((a + b - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        let x = s
            .expectation(&Observable::String(vec![
                Op::Annihilate(2),
                Op::Annihilate(0),
            ]))
            .unwrap();
        let y = s
            .expectation(&Observable::String(vec![
                Op::Annihilate(0),
                Op::Annihilate(2),
            ]))
            .unwrap();
        assert!((x + y).norm() < 1e-14);
    }

    #[test]
    fn capacity_limit() {
        let psi = DMatrix::zeros(5, 5);
        assert!(matches!(
            fock_oracle(&psi, &[0.0; 5], &Observable::Number),
            Err(Error::Capacity { .. })
        ));
    }
}
