use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{Interval, NumericsError, Result, ToleranceSpec};

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::DomainError { x })
        }
    };

    let fc = eval(center)?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = eval(center - dx)? + eval(center + dx)?;
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of `f` over `iv`.
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate drops below `max(abs_tol, rel_tol * |result|)`. `max_iter`
/// bounds the number of bisections.
pub fn integrate<F: Fn(f64) -> f64>(f: F, iv: Interval, tol: ToleranceSpec) -> Result<f64> {
    let first = kronrod15(&f, iv.lo(), iv.hi())?;
    let mut total = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    let mut splits = 0;
    while error > tol.abs_tol.max(tol.rel_tol * total.abs()) {
        if splits >= tol.max_iter {
            return Err(NumericsError::NonConvergence {
                what: "adaptive quadrature",
                iterations: splits,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.lo + worst.hi);
        let left = kronrod15(&f, worst.lo, mid)?;
        let right = kronrod15(&f, mid, worst.hi)?;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
    }
    // re-sum to shed the drift of the running updates
    Ok(heap.iter().map(|s| s.value).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceSpec {
        ToleranceSpec::new(1e-13, 1e-13, 1000).unwrap()
    }

    #[test]
    fn polynomial() {
        let v = integrate(|x| x * x, Interval::new(0.0, 1.0).unwrap(), tol()).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn half_gaussian() {
        let v = integrate(|x| (-x * x).exp(), Interval::new(0.0, 8.0).unwrap(), tol()).unwrap();
        assert!((v - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn non_finite_integrand_is_a_domain_error() {
        let err = integrate(|x| 1.0 / (x - 0.5), Interval::new(0.0, 1.0).unwrap(), tol());
        assert!(matches!(err, Err(NumericsError::DomainError { .. })));
    }

    #[test]
    fn subdivision_budget_exhausted() {
        let tight = ToleranceSpec::new(1e-15, 1e-15, 3).unwrap();
        let err = integrate(|x: f64| x.abs().sqrt(), Interval::new(-1.0, 1.0).unwrap(), tight);
        assert!(matches!(err, Err(NumericsError::NonConvergence { .. })));
    }
}
