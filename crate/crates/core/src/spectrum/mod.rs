//! Radial normal modes of the hedgehog.
//!
//! A mode `eta = R(rho)/rho * Y_lm` with frequency `Omega` solves
//!
//! ```text
//! -1/2 R'' + [ l(l+1) / (2 rho^2) + v(rho) ] R = Omega^2 R
//! ```
//!
//! discretized with three-point differences on a uniform grid and Dirichlet
//! walls at both ends. Every level is `2l + 1` times degenerate in the
//! magnetic quantum number, which is never enumerated.

mod asymptotics;
mod continuum;

pub use asymptotics::{
    fit_origin_exponent, gaussian_tail_check, origin_exponent, oscillator_reference, GaussianTail,
};
pub use continuum::{continuum_probe, BoxLevel, ContinuumProbe, DEFAULT_BOX_SPACING};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fluctuation::{FluctuationError, FluctuationPotential};
use crate::numerics::{tridiag_eigenvalues, tridiag_eigs, NumericsError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectrumError {
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("m = {m}: {what}")]
    Unsupported { m: u32, what: &'static str },
    #[error(
        "mode (n = {n}, l = {l}) still has relative amplitude {amplitude:.3e} at rho_max = {rho_max}; \
         increase rho_max"
    )]
    GridTooSmall {
        n: u32,
        l: u32,
        rho_max: f64,
        amplitude: f64,
    },
    #[error("no usable tail: {0}")]
    InsufficientDecay(String),
    #[error(transparent)]
    Fluctuation(#[from] FluctuationError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

pub type Result<T> = std::result::Result<T, SpectrumError>;

/// Mode amplitude at `rho_max`, relative to its maximum, above which the
/// box wall is considered to distort the mode.
pub const WALL_AMPLITUDE_LIMIT: f64 = 1e-6;

/// Uniform grid `rho_i = rho_min + i h`, `i = 0..n_points`, in units of `r0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadialGrid {
    rho_min: f64,
    rho_max: f64,
    n_points: usize,
}

impl RadialGrid {
    pub fn new(rho_min: f64, rho_max: f64, n_points: usize) -> Result<Self> {
        if !(rho_min > 0.0 && rho_min < rho_max && rho_max.is_finite()) {
            return Err(SpectrumError::BadGrid(format!(
                "need 0 < rho_min < rho_max, got [{rho_min}, {rho_max}]"
            )));
        }
        if n_points < 100 {
            return Err(SpectrumError::BadGrid(format!(
                "need at least 100 points, got {n_points}"
            )));
        }
        Ok(Self {
            rho_min,
            rho_max,
            n_points,
        })
    }

    /// `[1e-5, 12]` with 4000 points.
    pub fn default_bound() -> Self {
        Self::new(1e-5, 12.0, 4000).expect("static grid")
    }

    pub fn rho_min(&self) -> f64 {
        self.rho_min
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn h(&self) -> f64 {
        (self.rho_max - self.rho_min) / (self.n_points - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.rho_max
        } else {
            self.rho_min + i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Nodes strictly inside the Dirichlet walls.
    pub fn interior(&self) -> Vec<f64> {
        (1..self.n_points - 1).map(|i| self.node(i)).collect()
    }

    /// Same range with half the spacing.
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * self.n_points - 1,
            ..*self
        }
    }
}

/// Symmetric tridiagonal discretization of the radial operator on the
/// interior nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
    /// Interior nodes, in units of `r0`.
    pub rho: Vec<f64>,
}

/// Builds `-1/2 d^2/dr^2 + l(l+1)/(2 r^2) + v(r/r0)/r0^2` in physical units,
/// so eigenvalues are `Omega^2` in units of `1/length^2`. With `r0 = 1` the
/// diagonal is `1/h^2 + l(l+1)/(2 rho^2) + v(rho)` and the off-diagonal
/// `-1/(2 h^2)`.
pub fn hamiltonian(v: &FluctuationPotential, l: u32, grid: &RadialGrid, r0: f64) -> Result<Hamiltonian> {
    check_r0(r0)?;
    let rho = grid.interior();
    let h = r0 * grid.h();
    let centrifugal = 0.5 * f64::from(l) * f64::from(l + 1);
    let scale = 1.0 / (r0 * r0);
    let diag = rho
        .iter()
        .map(|&x| {
            let r = r0 * x;
            Ok(1.0 / (h * h) + centrifugal / (r * r) + scale * v.value(x)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let offdiag = vec![-0.5 / (h * h); rho.len() - 1];
    Ok(Hamiltonian { diag, offdiag, rho })
}

fn check_r0(r0: f64) -> Result<()> {
    if r0 > 0.0 && r0.is_finite() {
        Ok(())
    } else {
        Err(SpectrumError::BadParameter(format!("r0 must be positive, got {r0}")))
    }
}

/// One radial mode.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenMode {
    /// Radial quantum number, 1 for the lowest mode of each `l`.
    pub n: u32,
    pub l: u32,
    /// Richardson-extrapolated `Omega^2` in units of `1/r0^2`.
    pub omega2: f64,
    /// `Omega^2` on the requested grid, before extrapolation.
    pub omega2_raw: f64,
    /// Estimated discretization error of `omega2`.
    pub error_estimate: f64,
    /// Interior sign changes of `R`.
    pub nodes: u32,
    /// `(rho, R)` on the interior nodes, normalized to `sum R^2 h = 1`.
    #[serde(skip)]
    pub samples: Vec<(f64, f64)>,
}

impl EigenMode {
    /// `|R(rho_last)| / max |R|` at the last interior node.
    pub fn wall_amplitude(&self) -> f64 {
        let peak = self.samples.iter().map(|s| s.1.abs()).fold(0.0, f64::max);
        self.samples.last().map_or(0.0, |s| s.1.abs() / peak)
    }
}

fn count_nodes(r: &[f64]) -> u32 {
    let peak = r.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let floor = 1e-9 * peak;
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in r.iter().filter(|v| v.abs() > floor) {
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

/// The `n_max` lowest bound states at angular momentum `l`.
///
/// Eigenvalues are computed on `grid` and on the grid with half the
/// spacing and combined by Richardson extrapolation; `error_estimate` is a
/// third of the difference between the two grids. Eigenvectors come from the
/// requested grid.
pub fn bound_states(
    v: &FluctuationPotential,
    l: u32,
    n_max: u32,
    grid: &RadialGrid,
    r0: f64,
) -> Result<Vec<EigenMode>> {
    if let Some(m) = v.m().filter(|&m| m >= 2) {
        return Err(SpectrumError::Unsupported {
            m,
            what: "the potential is repulsive and has no bound states; use continuum_probe",
        });
    }
    if n_max == 0 {
        return Err(SpectrumError::BadParameter("n_max must be at least 1".into()));
    }
    let count = n_max as usize;
    let coarse = hamiltonian(v, l, grid, r0)?;
    let eig = tridiag_eigs(&coarse.diag, &coarse.offdiag, count)?;
    let fine = hamiltonian(v, l, &grid.refined(), r0)?;
    let fine_values = tridiag_eigenvalues(&fine.diag, &fine.offdiag, count)?;

    let norm = grid.h().sqrt();
    let modes: Vec<EigenMode> = eig
        .values
        .iter()
        .zip(&fine_values)
        .zip(&eig.vectors)
        .enumerate()
        .map(|(k, ((&raw, &refined), vec))| {
            let samples = coarse.rho.iter().zip(vec).map(|(&x, &r)| (x, r / norm)).collect();
            EigenMode {
                n: k as u32 + 1,
                l,
                omega2: (4.0 * refined - raw) / 3.0,
                omega2_raw: raw,
                error_estimate: (refined - raw).abs() / 3.0,
                nodes: count_nodes(vec),
                samples,
            }
        })
        .collect();

    let top = modes.last().expect("n_max >= 1");
    let amplitude = top.wall_amplitude();
    if amplitude >= WALL_AMPLITUDE_LIMIT {
        return Err(SpectrumError::GridTooSmall {
            n: top.n,
            l,
            rho_max: grid.rho_max(),
            amplitude,
        });
    }
    Ok(modes)
}

/// Bound states for a range of `l`, sorted by `(l, n)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub m: Option<u32>,
    pub r0: f64,
    pub grid: RadialGrid,
    pub potential: String,
    pub modes: Vec<EigenMode>,
}

/// Solves [`bound_states`] for every `l` in `ls`, in parallel over `l`.
pub fn spectrum_table(
    v: &FluctuationPotential,
    ls: &[u32],
    n_max: u32,
    grid: &RadialGrid,
    r0: f64,
) -> Result<SpectrumTable> {
    let mut ls = ls.to_vec();
    ls.sort_unstable();
    ls.dedup();
    let per_l = ls
        .par_iter()
        .map(|&l| bound_states(v, l, n_max, grid, r0))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumTable {
        m: v.m(),
        r0,
        grid: *grid,
        potential: v.source_label(),
        modes: per_l.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{trial_profile, KAPPA0_REFERENCE};

    fn m1_potential() -> FluctuationPotential {
        FluctuationPotential::bracket(trial_profile(1, KAPPA0_REFERENCE).unwrap())
    }

    #[test]
    fn grid_validation() {
        assert!(RadialGrid::new(0.0, 1.0, 200).is_err());
        assert!(RadialGrid::new(1.0, 0.5, 200).is_err());
        assert!(RadialGrid::new(0.1, 1.0, 99).is_err());
        let g = RadialGrid::new(1.0, 2.0, 101).unwrap();
        assert!((g.h() - 0.01).abs() < 1e-15);
        assert_eq!(g.nodes().len(), 101);
        assert_eq!(g.interior().len(), 99);
        assert_eq!(g.refined().n_points(), 201);
        assert_eq!(g.node(100), 2.0);
    }

    #[test]
    fn centrifugal_entry() {
        let g = RadialGrid::new(0.5, 1.5, 101).unwrap();
        let free = FluctuationPotential::free();
        let h0 = hamiltonian(&free, 0, &g, 1.0).unwrap();
        let h2 = hamiltonian(&free, 2, &g, 1.0).unwrap();
        let i = h0.rho.iter().position(|r| (r - 1.0).abs() < 1e-12).unwrap();
        assert!((h2.diag[i] - h0.diag[i] - 3.0).abs() < 1e-9);
        assert!((h0.offdiag[0] + 0.5 / (g.h() * g.h())).abs() < 1e-9);
    }

    #[test]
    fn free_box_ground_state() {
        let g = RadialGrid::new(1e-5, 10.0, 2001).unwrap();
        let h = hamiltonian(&FluctuationPotential::free(), 0, &g, 1.0).unwrap();
        let e = tridiag_eigenvalues(&h.diag, &h.offdiag, 1).unwrap()[0];
        let exact = std::f64::consts::PI.powi(2) / (2.0 * 100.0);
        assert!((e / exact - 1.0).abs() < 1e-4, "{e}");
    }

    #[test]
    fn oscillator_levels() {
        let modes = bound_states(&FluctuationPotential::oscillator(), 0, 4, &RadialGrid::default_bound(), 1.0).unwrap();
        for (k, m) in modes.iter().enumerate() {
            let exact = oscillator_reference(k as u32 + 1, 0, 1.0);
            assert!((m.omega2 / exact - 1.0).abs() < 1e-4, "{m:?}");
            assert_eq!(m.nodes, k as u32);
        }
        for l in [1, 3] {
            let modes = bound_states(&FluctuationPotential::oscillator(), l, 3, &RadialGrid::default_bound(), 1.0).unwrap();
            for m in modes {
                assert!((m.omega2 / oscillator_reference(m.n, l, 1.0) - 1.0).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn modes_are_orthonormal() {
        let grid = RadialGrid::default_bound();
        let modes = bound_states(&m1_potential(), 1, 4, &grid, 1.0).unwrap();
        let h = grid.h();
        for a in &modes {
            for b in &modes {
                let dot: f64 = a.samples.iter().zip(&b.samples).map(|(x, y)| x.1 * y.1 * h).sum();
                let expect = if a.n == b.n { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-8, "{} {} {dot}", a.n, b.n);
            }
        }
    }

    #[test]
    fn m1_ground_state_matches_oracle() {
        // scipy eigh_tridiagonal on the same discretization, Richardson across 4000/7999 points
        let modes = bound_states(&m1_potential(), 0, 2, &RadialGrid::default_bound(), 1.0).unwrap();
        assert!((modes[0].omega2 - 1.792_361_372).abs() < 1e-8, "{}", modes[0].omega2);
        assert!((modes[1].omega2 - 3.956_445_303).abs() < 1e-8);
        assert!(modes.iter().all(|m| m.omega2 > 0.0));
    }

    #[test]
    fn r0_rescales_eigenvalues() {
        let grid = RadialGrid::default_bound();
        let a = bound_states(&m1_potential(), 2, 3, &grid, 1.0).unwrap();
        let b = bound_states(&m1_potential(), 2, 3, &grid, 2.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((y.omega2 * 4.0 / x.omega2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn small_box_is_reported() {
        let grid = RadialGrid::new(1e-5, 3.0, 400).unwrap();
        assert!(matches!(
            bound_states(&m1_potential(), 0, 5, &grid, 1.0),
            Err(SpectrumError::GridTooSmall { n: 5, .. })
        ));
    }

    #[test]
    fn repulsive_potentials_are_rejected() {
        let v = FluctuationPotential::closed_form(3).unwrap();
        assert!(matches!(
            bound_states(&v, 0, 1, &RadialGrid::default_bound(), 1.0),
            Err(SpectrumError::Unsupported { m: 3, .. })
        ));
    }

    #[test]
    fn table_is_sorted() {
        let t = spectrum_table(&m1_potential(), &[2, 0, 1], 3, &RadialGrid::default_bound(), 1.0).unwrap();
        let keys: Vec<(u32, u32)> = t.modes.iter().map(|m| (m.l, m.n)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        assert_eq!(keys.len(), 9);
        for w in t.modes.windows(2).filter(|w| w[0].l == w[1].l) {
            assert!(w[1].omega2 > w[0].omega2);
        }
    }
}
