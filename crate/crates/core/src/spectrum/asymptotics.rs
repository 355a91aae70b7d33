use serde::Serialize;

use super::{EigenMode, Result, SpectrumError};
use crate::numerics::least_squares;

/// Exponent of `R ~ rho^xi` at the origin, `1/2 + sqrt(1/4 + l(l+1) + 2)`.
///
/// The extra `2` comes from the `1/rho^2` limit of the potential.
pub fn origin_exponent(l: u32) -> f64 {
    let l = f64::from(l);
    0.5 + (0.25 + l * (l + 1.0) + 2.0).sqrt()
}

/// Oscillator level `(2n + l - 1/2) / r0^2`, `n >= 1`.
pub fn oscillator_reference(n: u32, l: u32, r0: f64) -> f64 {
    (2.0 * f64::from(n) + f64::from(l) - 0.5) / (r0 * r0)
}

/// Fits `ln|R| = xi ln(rho) + b + c rho^2` over the first decade of samples
/// and returns `xi`.
pub fn fit_origin_exponent(mode: &EigenMode) -> Result<f64> {
    let first = mode
        .samples
        .first()
        .map(|s| s.0)
        .ok_or_else(|| SpectrumError::BadParameter("mode has no samples".into()))?;
    let (rows, y): (Vec<[f64; 3]>, Vec<f64>) = mode
        .samples
        .iter()
        .take_while(|s| s.0 <= 10.0 * first)
        .filter(|s| s.1 != 0.0)
        .map(|&(r, v)| ([r.ln(), 1.0, r * r], v.abs().ln()))
        .unzip();
    if rows.len() < 4 {
        return Err(SpectrumError::BadParameter(format!(
            "only {} samples in the first decade; refine the grid",
            rows.len()
        )));
    }
    Ok(least_squares(&rows, &y)?[0])
}

/// Fit of `-d ln R / d rho = g rho - sigma / rho` on the outer tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianTail {
    /// Gaussian slope, 1 for `R ~ rho^sigma exp(-rho^2 / 2)`.
    pub g: f64,
    pub sigma: f64,
    pub window: (f64, f64),
}

/// Smallest relative amplitude that still counts as part of the mode.
const SUPPORT_FLOOR: f64 = 1e-12;

/// Fits the Gaussian decay of a bound mode over the outer quarter of its
/// support (the range where `|R| >= 1e-12 max|R|`).
pub fn gaussian_tail_check(mode: &EigenMode) -> Result<GaussianTail> {
    let s = &mode.samples;
    let peak = s.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    if peak == 0.0 || peak.is_nan() {
        return Err(SpectrumError::InsufficientDecay("mode vanishes identically".into()));
    }
    let end = s
        .iter()
        .rposition(|p| p.1.abs() >= SUPPORT_FLOOR * peak)
        .expect("peak sample is in the support");
    let (rho_first, rho_end) = (s[0].0, s[end].0);
    let rho_start = rho_end - 0.25 * (rho_end - rho_first);
    let begin = s.partition_point(|p| p.0 < rho_start);

    let start_amp = s[begin].1.abs() / peak;
    if start_amp < SUPPORT_FLOOR || end < begin + 8 {
        return Err(SpectrumError::InsufficientDecay(format!(
            "window [{rho_start}, {rho_end}] has {} samples, start amplitude {start_amp:.3e}",
            end.saturating_sub(begin) + 1
        )));
    }
    let (rows, y): (Vec<[f64; 2]>, Vec<f64>) = (begin.max(1)..end.min(s.len() - 2) + 1)
        .map(|i| {
            let (r0, r1, r2) = (s[i - 1].0, s[i].0, s[i + 1].0);
            let slope = (s[i + 1].1.abs().ln() - s[i - 1].1.abs().ln()) / (r2 - r0);
            ([r1, -1.0 / r1], -slope)
        })
        .unzip();
    let [g, sigma] = least_squares(&rows, &y)?;
    Ok(GaussianTail {
        g,
        sigma,
        window: (rho_start, rho_end),
    })
}
