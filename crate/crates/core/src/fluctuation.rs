//! Potential `v(rho)` for radial shape vibrations of the hedgehog.
//!
//! The general form follows from the quadratic fluctuation Lagrangian,
//!
//! ```text
//! v(rho) = (1 + 3 cos 2alpha) / (4 rho^2) + m (2m - 1) / 2 * rho^2 q0^(2m-2)
//! ```
//!
//! with `cos 2alpha = 2 q0^2 - 1`. In physical units `V(r) = v(r / r0) / r0^2`.
//! For `m = 2, 3` rational closed forms are also provided; they are kept
//! under their own [`Convention`] tag because they do not coincide with the
//! general form (for `m = 3` they are exactly twice it).

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::profile::{m2_scale, tail_params, ProfileError, ProfileFunction};
use crate::spectrum::RadialGrid;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FluctuationError {
    #[error("potential undefined at rho = {rho}")]
    DomainError { rho: f64 },
    #[error("m = {m}: {what}")]
    Unsupported { m: u32, what: &'static str },
    #[error("rho = {rho} outside the available range [{lo}, {hi}]")]
    RangeError { rho: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

pub type Result<T> = std::result::Result<T, FluctuationError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    Bracket,
    ClosedForm,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::Bracket => "bracket",
            Convention::ClosedForm => "closed-form",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailDirection {
    Growth,
    Decay,
}

/// Large-`rho` behaviour `v ~ coefficient * rho^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailBehavior {
    pub direction: TailDirection,
    pub power: f64,
    pub coefficient: f64,
}

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(FluctuationError::DomainError { rho })
    }
}

/// General (bracket) form of the potential for profile `p`.
pub fn potential_bracket(p: &ProfileFunction, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(bracket_value(p.m(), p.q0(rho), rho))
}

fn bracket_value(m: u32, q: f64, rho: f64) -> f64 {
    let cos2a = 2.0 * q * q - 1.0;
    let mf = f64::from(m);
    (1.0 + 3.0 * cos2a) / (4.0 * rho * rho)
        + 0.5 * mf * (2.0 * mf - 1.0) * rho * rho * q.powi(2 * m as i32 - 2)
}

/// Rational closed forms for the exact `m = 2` and `m = 3` profiles.
pub fn potential_closed_form(m: u32, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    match m {
        2 => {
            let c = m2_scale();
            let t2 = c * rho * rho;
            let u = 1.0 + t2;
            Ok(c * (2.0 - 2.0 * t2 + 10.0 * t2 * t2) / (t2 * u * u))
        }
        3 => {
            let r2 = rho * rho;
            let u = 1.0 + r2;
            Ok((2.0 + r2 + 14.0 * r2 * r2) / (r2 * u * u))
        }
        _ => Err(FluctuationError::Unsupported {
            m,
            what: "closed-form potential exists only for m = 2, 3",
        }),
    }
}

/// Leading large-`rho` term of the bracket potential on the soliton tail.
pub fn tail_coefficient(m: u32) -> TailBehavior {
    match tail_params(m) {
        Ok(t) => {
            let mf = f64::from(m);
            TailBehavior {
                direction: TailDirection::Decay,
                power: -2.0,
                coefficient: 0.5 * mf * (2.0 * mf - 1.0) * t.amplitude.powi(2 * m as i32 - 2) - 0.5,
            }
        }
        Err(_) => TailBehavior {
            direction: TailDirection::Growth,
            power: 2.0,
            coefficient: 0.5,
        },
    }
}

#[derive(Debug, Clone)]
enum Source {
    Profile(Arc<ProfileFunction>),
    ClosedForm,
    Sampled { rho: Vec<f64>, rho2v: Vec<f64> },
    Oscillator,
    Free,
}

/// A potential the radial eigenproblem can be built from.
///
/// Besides the soliton potentials this also covers the two reference
/// problems used to validate the eigensolver: the isotropic oscillator
/// `rho^2 / 2` and the free particle `0`.
#[derive(Debug, Clone)]
pub struct FluctuationPotential {
    m: Option<u32>,
    convention: Convention,
    source: Source,
}

impl FluctuationPotential {
    pub fn bracket(p: ProfileFunction) -> Self {
        Self::from_shared(Arc::new(p))
    }

    pub fn from_shared(p: Arc<ProfileFunction>) -> Self {
        Self {
            m: Some(p.m()),
            convention: Convention::Bracket,
            source: Source::Profile(p),
        }
    }

    pub fn closed_form(m: u32) -> Result<Self> {
        potential_closed_form(m, 1.0)?;
        Ok(Self {
            m: Some(m),
            convention: Convention::ClosedForm,
            source: Source::ClosedForm,
        })
    }

    /// `v = rho^2 / 2`, whose radial levels are `2n + l - 1/2`.
    pub fn oscillator() -> Self {
        Self {
            m: None,
            convention: Convention::Bracket,
            source: Source::Oscillator,
        }
    }

    pub fn free() -> Self {
        Self {
            m: None,
            convention: Convention::Bracket,
            source: Source::Free,
        }
    }

    /// Soliton power, `None` for the reference potentials.
    pub fn m(&self) -> Option<u32> {
        self.m
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn profile(&self) -> Option<&ProfileFunction> {
        match &self.source {
            Source::Profile(p) => Some(p),
            _ => None,
        }
    }

    /// Short label of where the values come from.
    pub fn source_label(&self) -> String {
        match &self.source {
            Source::Profile(p) => format!("profile:{}", p.kind()),
            Source::ClosedForm => "closed-form".into(),
            Source::Sampled { .. } => "table".into(),
            Source::Oscillator => "oscillator".into(),
            Source::Free => "free".into(),
        }
    }

    pub fn tail(&self) -> Option<TailBehavior> {
        match self.source {
            Source::Oscillator => Some(tail_coefficient(1)),
            Source::Free => None,
            _ => self.m.map(tail_coefficient),
        }
    }

    /// Range on which the potential is defined.
    pub fn range(&self) -> (f64, f64) {
        match &self.source {
            Source::Sampled { rho, .. } => (rho[0], rho[rho.len() - 1]),
            Source::Profile(p) => (0.0, p.support_end().unwrap_or(f64::INFINITY)),
            _ => (0.0, f64::INFINITY),
        }
    }

    pub fn value(&self, rho: f64) -> Result<f64> {
        check_rho(rho)?;
        let (lo, hi) = self.range();
        if rho < lo || rho > hi {
            return Err(FluctuationError::RangeError { rho, lo, hi });
        }
        Ok(match &self.source {
            Source::Profile(p) => bracket_value(p.m(), p.q0(rho), rho),
            Source::ClosedForm => potential_closed_form(self.m.expect("closed form has m"), rho)?,
            Source::Sampled { rho: xs, rho2v } => {
                let i = xs.partition_point(|&x| x <= rho).clamp(1, xs.len() - 1);
                let t = (rho - xs[i - 1]) / (xs[i] - xs[i - 1]);
                ((1.0 - t) * rho2v[i - 1] + t * rho2v[i]) / (rho * rho)
            }
            Source::Oscillator => 0.5 * rho * rho,
            Source::Free => 0.0,
        })
    }

    /// Nodes and values of a sampled potential.
    pub fn samples(&self) -> Option<Vec<(f64, f64)>> {
        match &self.source {
            Source::Sampled { rho, rho2v } => {
                Some(rho.iter().zip(rho2v).map(|(&r, &w)| (r, w / (r * r))).collect())
            }
            _ => None,
        }
    }
}

/// Samples the bracket potential of `p` on every node of `grid`.
///
/// Between nodes the table interpolates `rho^2 v` linearly, which is
/// bounded at both ends of the radial range.
pub fn potential_table(p: &ProfileFunction, grid: &RadialGrid) -> Result<FluctuationPotential> {
    let rho = grid.nodes();
    if let Some(end) = p.support_end() {
        if grid.rho_max() > end {
            return Err(FluctuationError::RangeError {
                rho: grid.rho_max(),
                lo: 0.0,
                hi: end,
            });
        }
    }
    let rho2v = rho
        .iter()
        .map(|&r| potential_bracket(p, r).map(|v| v * r * r))
        .collect::<Result<Vec<_>>>()?;
    Ok(FluctuationPotential {
        m: Some(p.m()),
        convention: Convention::Bracket,
        source: Source::Sampled { rho, rho2v },
    })
}

/// Spread of `closed_form / bracket` over a set of radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioSummary {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `(max - min) / |mean|`
    pub relative_spread: f64,
}

/// Measures the ratio of the closed form to the bracket potential of the
/// exact profile `p` at the radii `rhos`.
pub fn closed_form_ratio(p: &ProfileFunction, rhos: &[f64]) -> Result<RatioSummary> {
    if rhos.is_empty() {
        return Err(FluctuationError::DomainError { rho: f64::NAN });
    }
    let ratios = rhos
        .iter()
        .map(|&r| Ok(potential_closed_form(p.m(), r)? / potential_bracket(p, r)?))
        .collect::<Result<Vec<_>>>()?;
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RatioSummary {
        mean,
        min,
        max,
        relative_spread: (max - min) / mean.abs(),
    })
}
