use super::{Interval, NumericsError, Result, ToleranceSpec};

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// b - b_hat
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
// Continuous extension: weight of stage j at fraction s is sum_p P[j][p] s^(p+1).
const P: [[f64; 4]; 7] = [
    [
        1.0,
        -8048581381.0 / 2820520608.0,
        8663915743.0 / 2820520608.0,
        -12715105075.0 / 11282082432.0,
    ],
    [0.0, 0.0, 0.0, 0.0],
    [
        0.0,
        131558114200.0 / 32700410799.0,
        -68118460800.0 / 10900136933.0,
        87487479700.0 / 32700410799.0,
    ],
    [
        0.0,
        -1754552775.0 / 470086768.0,
        14199869525.0 / 1410260304.0,
        -10690763975.0 / 1880347072.0,
    ],
    [
        0.0,
        127303824393.0 / 49829197408.0,
        -318862633887.0 / 49829197408.0,
        701980252875.0 / 199316789632.0,
    ],
    [
        0.0,
        -282668133.0 / 205662961.0,
        2019193451.0 / 616988883.0,
        -1453857185.0 / 822651844.0,
    ],
    [
        0.0,
        40617522.0 / 29380423.0,
        -110615467.0 / 29380423.0,
        69997945.0 / 29380423.0,
    ],
];

#[derive(Debug, Clone)]
struct Step {
    t: f64,
    h: f64,
    y: Vec<f64>,
    k: [Vec<f64>; 7],
}

/// Accepted steps of an adaptive Dormand-Prince integration, queryable at
/// any point of the covered span through the 4th-order continuous extension.
#[derive(Debug, Clone)]
pub struct Trajectory {
    steps: Vec<Step>,
    t_end: f64,
    y_end: Vec<f64>,
    dy_end: Vec<f64>,
    stopped: bool,
}

impl Trajectory {
    /// Step nodes including both ends.
    pub fn times(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.steps.iter().map(|s| s.t).collect();
        t.push(self.t_end);
        t
    }

    /// States at the step nodes, aligned with [`Trajectory::times`].
    pub fn states(&self) -> Vec<Vec<f64>> {
        let mut y: Vec<Vec<f64>> = self.steps.iter().map(|s| s.y.clone()).collect();
        y.push(self.y_end.clone());
        y
    }

    /// Derivatives at the step nodes (first stage of each step, FSAL at the end).
    pub fn derivatives(&self) -> Vec<Vec<f64>> {
        let mut d: Vec<Vec<f64>> = self.steps.iter().map(|s| s.k[0].clone()).collect();
        d.push(self.dy_end.clone());
        d
    }

    pub fn t_start(&self) -> f64 {
        self.steps.first().map_or(self.t_end, |s| s.t)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn y_end(&self) -> &[f64] {
        &self.y_end
    }

    /// True when the stop condition of [`solve_ivp_until`] fired before the
    /// end of the span.
    pub fn stopped(&self) -> bool {
        self.stopped
    }

    pub fn n_steps(&self) -> usize {
        self.steps.len()
    }

    /// Dense output at `t`, clamped to the covered span.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        if self.steps.is_empty() || t >= self.t_end {
            return self.y_end.clone();
        }
        let idx = self
            .steps
            .partition_point(|s| s.t <= t)
            .saturating_sub(1);
        let step = &self.steps[idx];
        let s = ((t - step.t) / step.h).clamp(0.0, 1.0);
        let mut weights = [0.0; 7];
        for (w, row) in weights.iter_mut().zip(P.iter()) {
            let mut pow = s;
            for &coef in row {
                *w += coef * pow;
                pow *= s;
            }
        }
        let mut y = step.y.clone();
        for (j, w) in weights.iter().enumerate() {
            if *w != 0.0 {
                for (yi, ki) in y.iter_mut().zip(step.k[j].iter()) {
                    *yi += step.h * w * ki;
                }
            }
        }
        y
    }
}

/// Integrates `y' = rhs(t, y)` across `span` with the adaptive Dormand-Prince
/// 5(4) pair. `abs_tol`/`rel_tol` bound the local error per step and
/// `max_iter` caps the number of attempted steps.
pub fn solve_ivp<F>(rhs: F, y0: &[f64], span: Interval, tol: ToleranceSpec) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    solve_ivp_until(rhs, y0, span, tol, |_, _| false)
}

/// Like [`solve_ivp`], but stops after the first accepted step whose end
/// state satisfies `stop(t, y)`.
///
/// A non-finite right-hand side rejects the step; a step size that collapses
/// below the floating-point resolution of `t` is reported as
/// [`NumericsError::StepUnderflow`].
pub fn solve_ivp_until<F, S>(
    mut rhs: F,
    y0: &[f64],
    span: Interval,
    tol: ToleranceSpec,
    mut stop: S,
) -> Result<Trajectory>
where
    F: FnMut(f64, &[f64], &mut [f64]),
    S: FnMut(f64, &[f64]) -> bool,
{
    let n = y0.len();
    if n == 0 {
        return Err(NumericsError::DimensionMismatch("empty state vector".into()));
    }
    let (t0, t1) = (span.lo(), span.hi());
    let atol = tol.abs_tol;
    let rtol = tol.rel_tol;

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut f0 = vec![0.0; n];
    rhs(t, &y, &mut f0);
    if f0.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::DomainError { x: t });
    }

    let norm = |v: &[f64], scale: &[f64]| -> f64 {
        (v.iter()
            .zip(scale)
            .map(|(a, s)| (a / s).powi(2))
            .sum::<f64>()
            / n as f64)
            .sqrt()
    };

    // Hairer's starting step heuristic
    let mut h = {
        let scale: Vec<f64> = y.iter().map(|v| atol + rtol * v.abs()).collect();
        let d0 = norm(&y, &scale);
        let d1 = norm(&f0, &scale);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(t1 - t0);
        let y1: Vec<f64> = y.iter().zip(&f0).map(|(a, b)| a + h0 * b).collect();
        let mut f1 = vec![0.0; n];
        rhs(t0 + h0, &y1, &mut f1);
        let diff: Vec<f64> = f1.iter().zip(&f0).map(|(a, b)| a - b).collect();
        let d2 = norm(&diff, &scale) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        if h1.is_finite() {
            (100.0 * h0).min(h1).min(t1 - t0)
        } else {
            h0
        }
    };

    let mut steps: Vec<Step> = Vec::new();
    let mut k: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; n]);
    k[0].copy_from_slice(&f0);
    let mut stage = vec![0.0; n];
    let mut y_new = vec![0.0; n];
    let mut attempts = 0usize;
    let mut stopped = false;

    while t < t1 {
        attempts += 1;
        if attempts > tol.max_iter {
            return Err(NumericsError::NonConvergence {
                what: "ODE integration",
                iterations: tol.max_iter,
            });
        }
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        if h <= 16.0 * f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) {
            return Err(NumericsError::StepUnderflow { t, h });
        }

        for s in 1..7 {
            stage.copy_from_slice(&y);
            for (j, a) in A[s].iter().enumerate().take(s) {
                if *a != 0.0 {
                    for (st, kj) in stage.iter_mut().zip(k[j].iter()) {
                        *st += h * a * kj;
                    }
                }
            }
            rhs(t + C[s] * h, &stage, &mut k[s]);
            if s == 6 {
                y_new.copy_from_slice(&stage);
            }
        }

        let err = {
            let mut acc = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, ej) in E.iter().enumerate() {
                    e += ej * k[j][i];
                }
                let sc = atol + rtol * y[i].abs().max(y_new[i].abs());
                acc += (h * e / sc).powi(2);
            }
            (acc / n as f64).sqrt()
        };

        if !err.is_finite() || y_new.iter().any(|v| !v.is_finite()) {
            h *= 0.2;
            continue;
        }

        if err <= 1.0 {
            let t_new = if last { t1 } else { t + h };
            steps.push(Step {
                t,
                h,
                y: y.clone(),
                k: k.clone(),
            });
            t = t_new;
            y.copy_from_slice(&y_new);
            let fsal = k[6].clone();
            k[0].copy_from_slice(&fsal);
            if stop(t, &y) {
                stopped = t < t1;
                break;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= factor;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
        }
    }

    Ok(Trajectory {
        steps,
        t_end: t,
        dy_end: k[0].clone(),
        y_end: y,
        stopped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(eps: f64) -> ToleranceSpec {
        ToleranceSpec::new(eps, eps, 100_000).unwrap()
    }

    #[test]
    fn exponential_growth() {
        let traj = solve_ivp(
            |_, y, dy| dy[0] = y[0],
            &[1.0],
            Interval::new(0.0, 1.0).unwrap(),
            tol(1e-12),
        )
        .unwrap();
        assert!((traj.y_end()[0] - std::f64::consts::E).abs() < 1e-10);
        assert!(!traj.stopped());
    }

    #[test]
    fn harmonic_oscillator_quarter_period() {
        let traj = solve_ivp(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[0.0, 1.0],
            Interval::new(0.0, std::f64::consts::FRAC_PI_2).unwrap(),
            tol(1e-12),
        )
        .unwrap();
        assert!((traj.y_end()[0] - 1.0).abs() < 1e-10);
        assert!(traj.y_end()[1].abs() < 1e-10);
    }

    #[test]
    fn dense_output_between_nodes() {
        let traj = solve_ivp(
            |_, y, dy| {
                dy[0] = y[1];
                dy[1] = -y[0];
            },
            &[0.0, 1.0],
            Interval::new(0.0, 10.0).unwrap(),
            tol(1e-11),
        )
        .unwrap();
        for i in 0..200 {
            let t = 0.05 * i as f64 + 0.0123;
            let y = traj.eval(t);
            assert!((y[0] - t.sin()).abs() < 1e-8, "t = {t}");
            assert!((y[1] - t.cos()).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn stop_condition_fires() {
        let traj = solve_ivp_until(
            |_, y, dy| dy[0] = y[0],
            &[1.0],
            Interval::new(0.0, 10.0).unwrap(),
            tol(1e-10),
            |_, y| y[0] > 100.0,
        )
        .unwrap();
        assert!(traj.stopped());
        assert!(traj.t_end() < 10.0 && traj.y_end()[0] > 100.0);
    }

    #[test]
    fn finite_time_blow_up_underflows() {
        // y' = y^2, y(0) = 1 blows up at t = 1
        let res = solve_ivp(
            |_, y, dy| dy[0] = y[0] * y[0],
            &[1.0],
            Interval::new(0.0, 2.0).unwrap(),
            tol(1e-10),
        );
        assert!(matches!(
            res,
            Err(NumericsError::StepUnderflow { .. }) | Err(NumericsError::NonConvergence { .. })
        ));
    }
}
