use super::{Interval, NumericsError, Result, ToleranceSpec};

/// Brent-Dekker root finding on a sign-changing bracket.
///
/// Bisection guarantees convergence; inverse quadratic / secant steps are
/// taken only when they stay inside the current bracket and shrink it fast
/// enough. An exact zero, at an endpoint or an iterate, is returned as is.
/// The result always lies inside `bracket`.
pub fn find_root<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Interval,
    tol: ToleranceSpec,
) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo(), bracket.hi());
    let mut fa = f(a);
    let mut fb = f(b);
    if !fa.is_finite() {
        return Err(NumericsError::DomainError { x: a });
    }
    if !fb.is_finite() {
        return Err(NumericsError::DomainError { x: b });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(NumericsError::BadBracket {
            lo: a,
            hi: b,
            flo: fa,
            fhi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.abs_tol.max(tol.rel_tol * b.abs());
        let half = 0.5 * (c - b);
        if half.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * half * s, 1.0 - s)
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0)),
                    (qa - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * half * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(half) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(NumericsError::DomainError { x: b });
        }
    }
    Err(NumericsError::NonConvergence {
        what: "root finding",
        iterations: tol.max_iter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceSpec {
        ToleranceSpec::new(1e-14, 1e-14, 200).unwrap()
    }

    #[test]
    fn sqrt_two() {
        let x = find_root(|x| x * x - 2.0, Interval::new(1.0, 2.0).unwrap(), tol()).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn half_pi() {
        let x = find_root(f64::cos, Interval::new(1.0, 2.0).unwrap(), tol()).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-13);
    }

    #[test]
    fn exact_zero_at_endpoint() {
        let x = find_root(|x| x - 1.0, Interval::new(1.0, 3.0).unwrap(), tol()).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn rejects_non_straddling_bracket() {
        let err = find_root(|x| x * x + 1.0, Interval::new(-1.0, 1.0).unwrap(), tol());
        assert!(matches!(err, Err(NumericsError::BadBracket { .. })));
    }

    #[test]
    fn step_function_converges_by_bisection() {
        let x = find_root(
            |x| if x < 0.3 { -1.0 } else { 1.0 },
            Interval::new(0.0, 1.0).unwrap(),
            tol(),
        )
        .unwrap();
        assert!((x - 0.3).abs() < 1e-12);
    }
}
