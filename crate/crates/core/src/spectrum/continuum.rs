use serde::Serialize;

use super::{hamiltonian, RadialGrid, Result, SpectrumError};
use crate::fluctuation::FluctuationPotential;
use crate::numerics::{least_squares, sturm_count, tridiag_eigenvalues};

/// Grid spacing used for every box of a continuum probe.
pub const DEFAULT_BOX_SPACING: f64 = 0.01;
const BOX_RHO_MIN: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxLevel {
    pub rho_max: f64,
    pub lambda_min: f64,
    /// Eigenvalues below zero; 0 when there is no bound state.
    pub negative: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuumProbe {
    pub l: u32,
    pub spacing: f64,
    pub levels: Vec<BoxLevel>,
    /// Slope of `ln lambda_min` against `ln rho_max`; `None` unless all
    /// levels are positive and there are at least two boxes.
    pub power: Option<f64>,
}

/// Lowest level of the radial problem in boxes `[1e-5, L]` at fixed spacing.
///
/// Without bound states the lowest level is a box state, `lambda_min ~ L^-2`;
/// a bound state would show up as a negative, `L`-independent level.
pub fn continuum_probe(
    v: &FluctuationPotential,
    l: u32,
    boxes: &[f64],
    spacing: f64,
    r0: f64,
) -> Result<ContinuumProbe> {
    if v.m() == Some(1) {
        return Err(SpectrumError::Unsupported {
            m: 1,
            what: "the potential is confining; use bound_states",
        });
    }
    if boxes.is_empty() || !(spacing > 0.0 && spacing.is_finite()) {
        return Err(SpectrumError::BadParameter(format!(
            "need at least one box and a positive spacing, got {} boxes and {spacing}",
            boxes.len()
        )));
    }
    let levels = boxes
        .iter()
        .map(|&rho_max| {
            let n_points = ((rho_max - BOX_RHO_MIN) / spacing).round() as usize + 1;
            let grid = RadialGrid::new(BOX_RHO_MIN, rho_max, n_points)?;
            let h = hamiltonian(v, l, &grid, r0)?;
            Ok(BoxLevel {
                rho_max,
                lambda_min: tridiag_eigenvalues(&h.diag, &h.offdiag, 1)?[0],
                negative: sturm_count(&h.diag, &h.offdiag, 0.0),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let power = if levels.len() >= 2 && levels.iter().all(|b| b.lambda_min > 0.0) {
        let (rows, y): (Vec<[f64; 2]>, Vec<f64>) = levels
            .iter()
            .map(|b| ([1.0, b.rho_max.ln()], b.lambda_min.ln()))
            .unzip();
        Some(least_squares(&rows, &y)?[1])
    } else {
        None
    };
    Ok(ContinuumProbe {
        l,
        spacing,
        levels,
        power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::analytic_profile;

    #[test]
    fn free_particle_box() {
        let p = continuum_probe(&FluctuationPotential::free(), 0, &[10.0, 20.0], DEFAULT_BOX_SPACING, 1.0).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 200.0;
        assert!((p.levels[0].lambda_min / exact - 1.0).abs() < 1e-4);
        let ratio = p.levels[1].lambda_min / p.levels[0].lambda_min;
        assert!((ratio / 0.25 - 1.0).abs() < 0.1);
        assert!((p.power.unwrap() + 2.0).abs() < 1e-3);
    }

    #[test]
    fn m3_has_only_box_states() {
        let v = FluctuationPotential::bracket(analytic_profile(3).unwrap());
        let p = continuum_probe(&v, 0, &[20.0, 40.0, 80.0], DEFAULT_BOX_SPACING, 1.0).unwrap();
        assert!(p.levels.iter().all(|b| b.lambda_min > 0.0 && b.negative == 0));
        let power = p.power.unwrap();
        assert!((-2.2..=-1.8).contains(&power), "{power}");
    }

    #[test]
    fn input_checks() {
        let v = FluctuationPotential::free();
        assert!(continuum_probe(&v, 0, &[], 0.01, 1.0).is_err());
        assert!(continuum_probe(&v, 0, &[10.0], 0.0, 1.0).is_err());
    }
}
