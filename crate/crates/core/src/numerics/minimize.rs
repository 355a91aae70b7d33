use super::{Interval, NumericsError, Result, ToleranceSpec};

const GOLDEN: f64 = 0.381_966_011_250_105_1; // (3 - sqrt 5) / 2

/// Brent's method (golden section with parabolic interpolation) for a
/// minimum of `f` on `bracket`.
///
/// `f` is assumed unimodal on the bracket; for other functions a local
/// minimum is returned. The endpoints are evaluated too, so the returned
/// value never exceeds `f(lo)` or `f(hi)`.
pub fn minimize_scalar<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Interval,
    tol: ToleranceSpec,
) -> Result<(f64, f64)> {
    let eval = |f: &mut F, x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_nan() {
            Err(NumericsError::DomainError { x })
        } else {
            Ok(y)
        }
    };

    let (mut a, mut b) = (bracket.lo(), bracket.hi());
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = eval(&mut f, x)?;
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    let mut converged = false;
    for _ in 0..tol.max_iter {
        let mid = 0.5 * (a + b);
        let tol1 = tol.rel_tol * x.abs() + tol.abs_tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            converged = true;
            break;
        }

        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(mid - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= mid { a - x } else { b - x };
            d = GOLDEN * e;
        }

        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = eval(&mut f, u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    if !converged {
        return Err(NumericsError::NonConvergence {
            what: "scalar minimization",
            iterations: tol.max_iter,
        });
    }

    let flo = eval(&mut f, bracket.lo())?;
    let fhi = eval(&mut f, bracket.hi())?;
    let mut best = (x, fx);
    if flo < best.1 {
        best = (bracket.lo(), flo);
    }
    if fhi < best.1 {
        best = (bracket.hi(), fhi);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> ToleranceSpec {
        ToleranceSpec::new(1e-10, 1e-10, 200).unwrap()
    }

    #[test]
    fn shifted_parabola() {
        let (x, fx) =
            minimize_scalar(|x| (x - 2.0).powi(2), Interval::new(0.0, 5.0).unwrap(), tol()).unwrap();
        assert!((x - 2.0).abs() < 1e-9);
        assert!(fx.abs() < 1e-18);
    }

    #[test]
    fn quartic_double_well() {
        let (x, fx) = minimize_scalar(
            |x| x.powi(4) - x * x,
            Interval::new(0.1, 2.0).unwrap(),
            tol(),
        )
        .unwrap();
        assert!((x - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-8);
        assert!((fx + 0.25).abs() < 1e-15);
    }

    #[test]
    fn monotone_function_returns_endpoint() {
        let (x, _) = minimize_scalar(|x| x, Interval::new(1.0, 2.0).unwrap(), tol()).unwrap();
        assert_eq!(x, 1.0);
    }

    #[test]
    fn iteration_budget() {
        let tight = ToleranceSpec::new(1e-10, 1e-10, 2).unwrap();
        let res = minimize_scalar(|x| (x - 2.0).powi(2), Interval::new(0.0, 5.0).unwrap(), tight);
        assert!(matches!(res, Err(NumericsError::NonConvergence { .. })));
    }
}
