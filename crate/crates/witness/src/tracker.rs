//! Adaptive predictor–corrector path tracking.
//!
//! A homotopy `H(x, t)` is followed from a regular zero at `t = 1` down to
//! `t = 0`. Each step predicts with classical fourth-order Runge–Kutta on the
//! Davidenko equation `H_x ẋ = −H_t` and corrects with a few Newton
//! iterations at the new `t`. A step that fails to correct is halved; three
//! accepted steps in a row double it.

use nalgebra::{DMatrix, DVector};

use crate::{Error, C64};

/// A square homotopy in `nvars` unknowns.
pub trait Homotopy: Sync {
    fn nvars(&self) -> usize;

    /// Writes `H(x,t)` into `value`, `∂H/∂x` into `jac` and `∂H/∂t` into `dt`.
    fn evaluate(
        &self,
        x: &[C64],
        t: f64,
        value: &mut [C64],
        jac: &mut DMatrix<C64>,
        dt: &mut [C64],
    );
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerSettings {
    pub initial_step: f64,
    pub min_step: f64,
    pub max_step: f64,
    /// Newton converges once `‖Δx‖∞ ≤ corrector_tolerance · (1 + ‖x‖∞)`.
    pub corrector_tolerance: f64,
    pub max_corrector_iterations: usize,
    /// A path whose iterate exceeds this max-norm is declared divergent.
    pub divergence_threshold: f64,
    /// Largest allowed `‖H(x, 0)‖∞` at an accepted endpoint.
    pub endpoint_tolerance: f64,
    /// Endpoints closer than this in max-norm are the same point.
    pub separation_tolerance: f64,
    pub max_steps: usize,
    pub seed: u64,
}

impl Default for TrackerSettings {
    fn default() -> Self {
        TrackerSettings {
            initial_step: 0.02,
            min_step: 1e-14,
            max_step: 0.1,
            corrector_tolerance: 1e-8,
            max_corrector_iterations: 3,
            divergence_threshold: 1e8,
            endpoint_tolerance: 1e-9,
            separation_tolerance: 1e-6,
            max_steps: 50_000,
            seed: 0,
        }
    }
}

impl TrackerSettings {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), Error> {
        let positive = [
            self.initial_step,
            self.min_step,
            self.max_step,
            self.corrector_tolerance,
            self.divergence_threshold,
            self.endpoint_tolerance,
            self.separation_tolerance,
        ];
        if positive.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::Settings("tolerances and step sizes must be positive"));
        }
        if self.min_step >= self.initial_step {
            return Err(Error::Settings("min_step must be below initial_step"));
        }
        if self.max_corrector_iterations == 0 {
            return Err(Error::Settings("need at least one corrector iteration"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathStatus {
    Converged,
    DivergedToInfinity,
    TrackingFailed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathResult {
    pub status: PathStatus,
    /// Set only for converged paths.
    pub endpoint: Option<Vec<C64>>,
    pub steps: usize,
    /// Smallest `t` reached.
    pub t: f64,
    /// Newton iterations spent refining at `t = 0`.
    pub endpoint_iterations: usize,
}

impl PathResult {
    pub fn is_converged(&self) -> bool {
        self.status == PathStatus::Converged
    }
}

pub fn max_norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

struct Workspace {
    value: Vec<C64>,
    dt: Vec<C64>,
    jac: DMatrix<C64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            value: vec![C64::default(); n],
            dt: vec![C64::default(); n],
            jac: DMatrix::zeros(n, n),
        }
    }

    /// `dx/dt = −H_x⁻¹ H_t`.
    fn velocity<H: Homotopy + ?Sized>(&mut self, h: &H, x: &[C64], t: f64) -> Option<Vec<C64>> {
        h.evaluate(x, t, &mut self.value, &mut self.jac, &mut self.dt);
        let rhs = DVector::from_iterator(self.dt.len(), self.dt.iter().map(|v| -v));
        let sol = self.jac.clone().lu().solve(&rhs)?;
        finite(sol.iter().copied().collect())
    }

    /// Newton update `−H_x⁻¹ H` at `(x, t)`.
    fn newton_step<H: Homotopy + ?Sized>(&mut self, h: &H, x: &[C64], t: f64) -> Option<Vec<C64>> {
        h.evaluate(x, t, &mut self.value, &mut self.jac, &mut self.dt);
        let rhs = DVector::from_iterator(self.value.len(), self.value.iter().map(|v| -v));
        let sol = self.jac.clone().lu().solve(&rhs)?;
        finite(sol.iter().copied().collect())
    }

    fn residual<H: Homotopy + ?Sized>(&mut self, h: &H, x: &[C64], t: f64) -> f64 {
        h.evaluate(x, t, &mut self.value, &mut self.jac, &mut self.dt);
        max_norm(&self.value)
    }

    /// RK4 prediction of `x(t − dt)`.
    fn predict<H: Homotopy + ?Sized>(&mut self, h: &H, x: &[C64], t: f64, dt: f64) -> Option<Vec<C64>> {
        let shifted = |k: &[C64], a: f64| -> Vec<C64> {
            x.iter().zip(k).map(|(xi, ki)| xi - ki * a).collect()
        };
        let k1 = self.velocity(h, x, t)?;
        let k2 = self.velocity(h, &shifted(&k1, dt / 2.0), t - dt / 2.0)?;
        let k3 = self.velocity(h, &shifted(&k2, dt / 2.0), t - dt / 2.0)?;
        let k4 = self.velocity(h, &shifted(&k3, dt), t - dt)?;
        finite(
            (0..x.len())
                .map(|i| x[i] - (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0))
                .collect(),
        )
    }

    /// Newton at fixed `t`; `None` if it does not converge quickly.
    fn correct<H: Homotopy + ?Sized>(
        &mut self,
        h: &H,
        mut x: Vec<C64>,
        t: f64,
        s: &TrackerSettings,
    ) -> Option<Vec<C64>> {
        let mut previous = f64::INFINITY;
        for _ in 0..s.max_corrector_iterations {
            let delta = self.newton_step(h, &x, t)?;
            for (xi, d) in x.iter_mut().zip(&delta) {
                *xi += d;
            }
            let size = max_norm(&delta);
            let scale = 1.0 + max_norm(&x);
            if size <= s.corrector_tolerance * scale {
                return Some(x);
            }
            // Newton must contract from a good prediction
            if size > 0.5 * previous {
                return self.at_noise_floor(h, &x, t).then_some(x);
            }
            previous = size;
        }
        self.at_noise_floor(h, &x, t).then_some(x)
    }

    /// Whether `x` solves `H(·, t)` to within rounding, measured by the
    /// backward error `‖H‖ / (‖H_x‖·‖x‖ + 1)`.
    fn at_noise_floor<H: Homotopy + ?Sized>(&mut self, h: &H, x: &[C64], t: f64) -> bool {
        h.evaluate(x, t, &mut self.value, &mut self.jac, &mut self.dt);
        let jac_norm = self
            .jac
            .row_iter()
            .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        max_norm(&self.value) <= NOISE_FLOOR * (jac_norm * max_norm(x) + 1.0)
    }
}

/// Whether a path that stalled at small `t` is escaping to infinity.
///
/// Compares the norm now with the norm at the last accepted point where `t`
/// was at least a hundred times larger. Finite endpoints flatten out, while
/// escaping paths keep growing like a power of `1/t`.
fn escaping(history: &[(f64, f64)], t: f64, norm: f64, exponent: f64) -> bool {
    if t > ESCAPE_WINDOW {
        return false;
    }
    history
        .iter()
        .rev()
        .find(|(tp, _)| *tp >= 100.0 * t)
        .is_some_and(|(tp, np)| norm / np > (tp / t).powf(exponent))
}

/// Backward error treated as exact, in units of the double epsilon.
const NOISE_FLOOR: f64 = 64.0 * f64::EPSILON;

/// Paths below this `t` may be classified as divergent before reaching the
/// divergence threshold.
const ESCAPE_WINDOW: f64 = 1e-3;
/// Growth rate `‖x‖ ~ t^(−e)` that marks a stalled path as escaping.
const STALL_EXPONENT: f64 = 0.25;
/// Stricter rate and norm floor for stopping a path that is still moving.
const EARLY_EXPONENT: f64 = 0.4;
const EARLY_NORM: f64 = 1e3;

fn finite(v: Vec<C64>) -> Option<Vec<C64>> {
    v.iter().all(|c| c.re.is_finite() && c.im.is_finite()).then_some(v)
}

/// Follows `h` from `start` at `t = 1` to `t = 0`.
pub fn track<H: Homotopy + ?Sized>(h: &H, start: &[C64], s: &TrackerSettings) -> PathResult {
    let mut ws = Workspace::new(h.nvars());
    let mut x = start.to_vec();
    let mut t = 1.0f64;
    let mut step = s.initial_step;
    let mut streak = 0;
    let mut steps = 0;
    let mut history = vec![(t, max_norm(&x))];
    let result = |status, endpoint, steps, t, endpoint_iterations| PathResult {
        status,
        endpoint,
        steps,
        t,
        endpoint_iterations,
    };

    while t > 0.0 {
        if steps >= s.max_steps {
            let status = if escaping(&history, t, max_norm(&x), STALL_EXPONENT) {
                PathStatus::DivergedToInfinity
            } else {
                PathStatus::TrackingFailed
            };
            return result(status, None, steps, t, 0);
        }
        let t1 = if step >= t { 0.0 } else { t - step };
        let dt = t - t1;
        let next = ws
            .predict(h, &x, t, dt)
            .and_then(|xp| ws.correct(h, xp, t1, s));
        match next {
            Some(xc) => {
                x = xc;
                t = t1;
                steps += 1;
                streak += 1;
                if streak >= 3 {
                    step = (step * 2.0).min(s.max_step);
                    streak = 0;
                }
                let norm = max_norm(&x);
                if norm > s.divergence_threshold {
                    return result(PathStatus::DivergedToInfinity, None, steps, t, 0);
                }
                if norm > EARLY_NORM && escaping(&history, t, norm, EARLY_EXPONENT) {
                    return result(PathStatus::DivergedToInfinity, None, steps, t, 0);
                }
                history.push((t, norm));
            }
            None => {
                step *= 0.5;
                streak = 0;
                if step < s.min_step {
                    let status = if escaping(&history, t, max_norm(&x), STALL_EXPONENT) {
                        PathStatus::DivergedToInfinity
                    } else {
                        PathStatus::TrackingFailed
                    };
                    return result(status, None, steps, t, 0);
                }
            }
        }
    }

    // sharpen the endpoint on the target system
    let mut iterations = 0;
    for _ in 0..8 {
        let Some(delta) = ws.newton_step(h, &x, 0.0) else {
            break;
        };
        iterations += 1;
        for (xi, d) in x.iter_mut().zip(&delta) {
            *xi += d;
        }
        if max_norm(&delta) <= 1e-14 * (1.0 + max_norm(&x)) {
            break;
        }
    }
    if ws.residual(h, &x, 0.0) <= s.endpoint_tolerance && x.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
        result(PathStatus::Converged, Some(x), steps, 0.0, iterations)
    } else {
        result(PathStatus::TrackingFailed, None, steps, 0.0, iterations)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `x² − (1 + t·c)` in one variable: the root follows √(1 + t c).
    struct Sqrt {
        c: C64,
    }

    impl Homotopy for Sqrt {
        fn nvars(&self) -> usize {
            1
        }

        fn evaluate(&self, x: &[C64], t: f64, value: &mut [C64], jac: &mut DMatrix<C64>, dt: &mut [C64]) {
            value[0] = x[0] * x[0] - (C64::new(1.0, 0.0) + self.c * t);
            jac[(0, 0)] = x[0] * 2.0;
            dt[0] = -self.c;
        }
    }

    #[test]
    fn follows_square_root() {
        let h = Sqrt { c: C64::new(3.0, 1.0) };
        let start = [(C64::new(4.0, 1.0)).sqrt()];
        let r = track(&h, &start, &TrackerSettings::default());
        assert!(r.is_converged());
        let end = r.endpoint.unwrap()[0];
        assert!((end - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    /// `t·x − 1`: the root 1/t escapes to infinity.
    struct Escape;

    impl Homotopy for Escape {
        fn nvars(&self) -> usize {
            1
        }

        fn evaluate(&self, x: &[C64], t: f64, value: &mut [C64], jac: &mut DMatrix<C64>, dt: &mut [C64]) {
            value[0] = x[0] * t - 1.0;
            jac[(0, 0)] = C64::new(t, 0.0);
            dt[0] = x[0];
        }
    }

    #[test]
    fn classifies_divergence() {
        let r = track(&Escape, &[C64::new(1.0, 0.0)], &TrackerSettings::default());
        assert_eq!(r.status, PathStatus::DivergedToInfinity);
        assert!(r.endpoint.is_none());
    }

    /// `t·x² − 1`: the roots grow like `t^(−1/2)`.
    struct SlowEscape;

    impl Homotopy for SlowEscape {
        fn nvars(&self) -> usize {
            1
        }

        fn evaluate(&self, x: &[C64], t: f64, value: &mut [C64], jac: &mut DMatrix<C64>, dt: &mut [C64]) {
            value[0] = x[0] * x[0] * t - 1.0;
            jac[(0, 0)] = x[0] * (2.0 * t);
            dt[0] = x[0] * x[0];
        }
    }

    #[test]
    fn classifies_slow_divergence() {
        let r = track(&SlowEscape, &[C64::new(1.0, 0.0)], &TrackerSettings::default());
        assert_eq!(r.status, PathStatus::DivergedToInfinity);
    }

    #[test]
    fn settings_validation() {
        assert!(TrackerSettings::default().validate().is_ok());
        let bad = TrackerSettings {
            min_step: 1.0,
            ..TrackerSettings::default()
        };
        assert!(bad.validate().is_err());
        let bad = TrackerSettings {
            endpoint_tolerance: 0.0,
            ..TrackerSettings::default()
        };
        assert!(bad.validate().is_err());
    }
}
