//! Adaptive Dormand–Prince 5(4) integration with output on a fixed sample grid.
//!
//! Steps are clipped so that every sample time is hit exactly by a step
//! endpoint; no interpolation is involved. The local error estimate is the
//! difference between the embedded 5th- and 4th-order solutions, measured in the
//! RMS norm scaled by `abs_tol + rel_tol·max(|yₙ|, |yₙ₊₁|)` per component.

use thiserror::Error;

use crate::attitude::{attitude_error, body_accel, mrp_rate, BodyState, InertiaTensor, MrpAttitude};
use crate::mathcore::Vector3;
use crate::real::Real;
use crate::smc::{ControlLaw, SlidingModeController, SmcGains};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("invalid integrator configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
    #[error("step size underflow at t = {t}: h = {h:e} below h_min")]
    StepUnderflow { t: f64, h: f64 },
    #[error("exceeded {steps} steps at t = {t}")]
    MaxStepsExceeded { t: f64, steps: usize },
    #[error("state became non-finite at t = {t}")]
    NonFinite { t: f64 },
}

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;
// A step that would stop this close (relative to h) short of a sample is
// stretched onto it rather than leaving a sliver.
const SLIVER: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub h_init: T,
    pub h_min: T,
    pub h_max: T,
    pub max_steps: usize,
}

impl<T: Real> Default for IntegratorConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-10),
            abs_tol: T::lit(1e-12),
            h_init: T::lit(1e-3),
            h_min: T::lit(1e-12),
            h_max: T::one(),
            max_steps: 10_000_000,
        }
    }
}

impl<T: Real> IntegratorConfig<T> {
    pub fn validate(&self) -> Result<(), OdeError> {
        let bad = |msg: String| Err(OdeError::InvalidConfig(msg));
        let tol_cap = T::lit(0.1);
        for (name, tol) in [("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)] {
            if !(tol > T::zero() && tol <= tol_cap) {
                return bad(format!("{name} = {tol} must lie in (0, 0.1]"));
            }
        }
        for (name, h) in [("h_init", self.h_init), ("h_min", self.h_min), ("h_max", self.h_max)] {
            if !(h > T::zero() && h.is_finite()) {
                return bad(format!("{name} = {h} must be positive"));
            }
        }
        if !(self.h_min <= self.h_init && self.h_init <= self.h_max) {
            return bad(format!(
                "require h_min <= h_init <= h_max, got {} / {} / {}",
                self.h_min, self.h_init, self.h_max
            ));
        }
        if self.max_steps == 0 {
            return bad("max_steps must be positive".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T, const N: usize> {
    pub t: T,
    pub y: [T; N],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample<T> {
    pub t: T,
    pub state: BodyState<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Sample times `0, dt, 2dt, …` ending exactly at `t_final`.
///
/// Each time is computed as `k·dt` (never by accumulation). When `t_final` is within
/// a relative `1e-9` of a grid point, that point is replaced by `t_final` itself.
pub fn sample_grid<T: Real>(t_final: T, sample_dt: T) -> Result<Vec<T>, OdeError> {
    if !(t_final > T::zero() && t_final.is_finite()) {
        return Err(OdeError::InvalidArgument("t_final must be positive and finite"));
    }
    if !(sample_dt > T::zero() && sample_dt.is_finite()) {
        return Err(OdeError::InvalidArgument("sample_dt must be positive and finite"));
    }
    let ratio = t_final / sample_dt;
    let nearest = ratio.round();
    let snap = T::lit(1e-9) * ratio.max(T::one());
    let full = if (ratio - nearest).abs() <= snap {
        nearest
    } else {
        ratio.floor()
    };
    let count = full.to_usize().ok_or(OdeError::InvalidArgument("too many samples"))?;
    let mut grid: Vec<T> = (0..=count)
        .map(|k| T::from_usize(k).expect("sample index") * sample_dt)
        .filter(|&t| t < t_final)
        .collect();
    // Drop a trailing point that would sit within rounding of t_final.
    if let Some(&last) = grid.last() {
        if grid.len() > 1 && t_final - last <= snap * sample_dt {
            grid.pop();
        }
    }
    grid.push(t_final);
    Ok(grid)
}

// Dormand–Prince 5(4) tableau.
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
// 5th-order weights minus embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand–Prince step of size `h` from `(t, y)` with `k1 = f(t, y)` supplied.
///
/// Returns the 5th-order solution, the local error vector (5th minus 4th order)
/// and `f(t + h, y_new)`, which is the next step's `k1`.
pub fn dp54_step<T: Real, const N: usize, F>(f: &mut F, t: T, y: &[T; N], h: T, k1: &[T; N]) -> ([T; N], [T; N], [T; N])
where
    F: FnMut(T, &[T; N]) -> [T; N],
{
    let mut k = [[T::zero(); N]; 7];
    k[0] = *k1;
    for stage in 1..7 {
        let ys: [T; N] = std::array::from_fn(|i| {
            let incr = (0..stage).fold(T::zero(), |acc, j| acc + T::lit(A[stage][j]) * k[j][i]);
            y[i] + h * incr
        });
        k[stage] = f(t + T::lit(C[stage]) * h, &ys);
    }
    // Stage 7 is evaluated at the 5th-order solution (FSAL).
    let y_new: [T; N] = std::array::from_fn(|i| {
        let incr = (0..6).fold(T::zero(), |acc, j| acc + T::lit(A[6][j]) * k[j][i]);
        y[i] + h * incr
    });
    let err: [T; N] = std::array::from_fn(|i| h * (0..7).fold(T::zero(), |acc, j| acc + T::lit(E[j]) * k[j][i]));
    (y_new, err, k[6])
}

fn error_norm<T: Real, const N: usize>(err: &[T; N], y: &[T; N], y_new: &[T; N], cfg: &IntegratorConfig<T>) -> T {
    let sum = (0..N).fold(T::zero(), |acc, i| {
        let scale = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
        let r = err[i] / scale;
        acc + r * r
    });
    (sum / T::from_usize(N.max(1)).expect("dimension")).sqrt()
}

fn all_finite<T: Real, const N: usize>(y: &[T; N]) -> bool {
    y.iter().all(|x| x.is_finite())
}

fn as_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Integrates `ẏ = f(t, y)` from `t = 0`, returning the state on [`sample_grid`].
pub fn integrate<T: Real, const N: usize, F>(
    f: F,
    y0: [T; N],
    t_final: T,
    cfg: &IntegratorConfig<T>,
    sample_dt: T,
) -> Result<Vec<Sample<T, N>>, OdeError>
where
    F: FnMut(T, &[T; N]) -> [T; N],
{
    integrate_with_stats(f, y0, t_final, cfg, sample_dt).map(|(samples, _)| samples)
}

pub fn integrate_with_stats<T: Real, const N: usize, F>(
    mut f: F,
    y0: [T; N],
    t_final: T,
    cfg: &IntegratorConfig<T>,
    sample_dt: T,
) -> Result<(Vec<Sample<T, N>>, StepStats), OdeError>
where
    F: FnMut(T, &[T; N]) -> [T; N],
{
    cfg.validate()?;
    let grid = sample_grid(t_final, sample_dt)?;
    if !all_finite(&y0) {
        return Err(OdeError::NonFinite { t: 0.0 });
    }

    let mut stats = StepStats::default();
    let mut t = T::zero();
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.evaluations += 1;
    if !all_finite(&k1) {
        return Err(OdeError::NonFinite { t: 0.0 });
    }
    let mut h = cfg.h_init.min(cfg.h_max);
    let mut samples = Vec::with_capacity(grid.len());
    samples.push(Sample { t, y });

    let exponent = T::lit(-0.2);
    let safety = T::lit(SAFETY);
    let min_factor = T::lit(MIN_FACTOR);
    let max_factor = T::lit(MAX_FACTOR);

    for &target in &grid[1..] {
        while t < target {
            if stats.accepted + stats.rejected >= cfg.max_steps {
                return Err(OdeError::MaxStepsExceeded {
                    t: as_f64(t),
                    steps: cfg.max_steps,
                });
            }
            let remaining = target - t;
            let lands = h >= remaining || remaining - h <= T::lit(SLIVER) * h;
            let h_try = if lands { remaining } else { h };

            let (y_new, err, k_next) = dp54_step(&mut f, t, &y, h_try, &k1);
            stats.evaluations += 6;
            let err_norm = error_norm(&err, &y, &y_new, cfg);

            if err_norm.is_finite() && err_norm <= T::one() && all_finite(&k_next) {
                stats.accepted += 1;
                t = if lands { target } else { t + h_try };
                y = y_new;
                k1 = k_next;
                let factor = if err_norm == T::zero() {
                    max_factor
                } else {
                    (safety * err_norm.powf(exponent)).max(min_factor).min(max_factor)
                };
                let proposal = h_try * factor;
                // A step shortened to hit a sample says nothing against the old size.
                h = if lands && h_try < h { proposal.max(h) } else { proposal };
                h = h.min(cfg.h_max);
            } else {
                stats.rejected += 1;
                let factor = if err_norm.is_finite() {
                    (safety * err_norm.powf(exponent)).max(min_factor).min(T::one())
                } else {
                    min_factor
                };
                h = h_try * factor;
                if h < cfg.h_min {
                    return Err(if err_norm.is_finite() {
                        OdeError::StepUnderflow {
                            t: as_f64(t),
                            h: as_f64(h),
                        }
                    } else {
                        OdeError::NonFinite { t: as_f64(t) }
                    });
                }
            }
        }
        samples.push(Sample { t, y });
    }
    Ok((samples, stats))
}

/// [`integrate`] specialized to the six-component attitude state.
pub fn integrate_body<T: Real, F>(
    mut deriv: F,
    y0: BodyState<T>,
    t_final: T,
    cfg: &IntegratorConfig<T>,
    sample_dt: T,
) -> Result<Vec<SolutionSample<T>>, OdeError>
where
    F: FnMut(T, &BodyState<T>) -> BodyState<T>,
{
    let flat = |t: T, y: &[T; 6]| deriv(t, &BodyState::from_array(y)).to_array();
    let samples = integrate(flat, y0.to_array(), t_final, cfg, sample_dt)?;
    Ok(samples
        .into_iter()
        .map(|s| SolutionSample {
            t: s.t,
            state: BodyState::from_array(&s.y),
        })
        .collect())
}

/// Closed-loop field `(ω̇, σ̇_lb)` under an arbitrary torque law.
///
/// The returned `BodyState` holds derivatives, not a state.
pub fn closed_loop_derivative_with<T: Real, C: ControlLaw<T>>(
    inertia: InertiaTensor<T>,
    law: C,
    sigma_ld: Vector3<T>,
) -> impl Fn(T, &BodyState<T>) -> BodyState<T> {
    move |_t, state| {
        let omega = state.omega;
        let sigma_db = attitude_error(&state.sigma_lb.sigma, &sigma_ld);
        let tau = law.control(&omega, &sigma_db).tau;
        BodyState {
            omega: body_accel(&inertia, &omega, &tau),
            // σ_ld is constant, so σ̇_lb = σ̇_db.
            sigma_lb: MrpAttitude::new(mrp_rate(&sigma_db, &omega)),
        }
    }
}

/// Closed-loop field under the sliding-mode law `τ = u_eq + u_N`.
pub fn closed_loop_derivative<T: Real>(
    inertia: InertiaTensor<T>,
    gains: SmcGains<T>,
    sigma_ld: Vector3<T>,
) -> impl Fn(T, &BodyState<T>) -> BodyState<T> {
    closed_loop_derivative_with(inertia, SlidingModeController::new(inertia, gains), sigma_ld)
}

/// Torque-free Euler equation `ω̇ = −J⁻¹(ω × Jω)` on the body rate alone.
///
/// Attitude is left out: a free tumble sweeps through the MRP singularity at a
/// full revolution, which the unswitched parameterization cannot follow.
pub fn torque_free_rate<T: Real>(inertia: InertiaTensor<T>) -> impl Fn(T, &[T; 3]) -> [T; 3] {
    move |_t, omega| body_accel(&inertia, &Vector3(*omega), &Vector3::zeros()).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathcore::Matrix3;
    use crate::smc::sliding_variable;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type V = Vector3<f64>;

    fn reference_inertia() -> InertiaTensor<f64> {
        InertiaTensor::new(Matrix3::from_rows([
            [1.49, 0.054, 0.0442],
            [0.054, 1.51, 0.0],
            [0.0442, 0.0, 1.56],
        ]))
        .unwrap()
    }

    #[test]
    fn config_validation() {
        let ok = IntegratorConfig::<f64>::default();
        assert!(ok.validate().is_ok());
        assert!(IntegratorConfig { rel_tol: 0.0, ..ok }.validate().is_err());
        assert!(IntegratorConfig { abs_tol: 0.5, ..ok }.validate().is_err());
        assert!(IntegratorConfig { h_init: 2.0, ..ok }.validate().is_err());
        assert!(IntegratorConfig {
            h_min: 1e-2,
            h_init: 1e-3,
            ..ok
        }
        .validate()
        .is_err());
        assert!(IntegratorConfig { max_steps: 0, ..ok }.validate().is_err());
    }

    #[test]
    fn grid_shapes() {
        let g = sample_grid(1.0, 0.1).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[3], 3.0 * 0.1);
        assert_eq!(*g.last().unwrap(), 1.0);

        let g = sample_grid(1.05, 0.1).unwrap();
        assert_eq!(g.len(), 12);
        assert_eq!(*g.last().unwrap(), 1.05);

        let g = sample_grid(300.0, 0.1).unwrap();
        assert_eq!(g.len(), 3001);
        assert!(g.windows(2).all(|w| w[0] < w[1]));

        let g = sample_grid(0.05, 0.1).unwrap();
        assert_eq!(g, vec![0.0, 0.05]);

        assert!(sample_grid(0.0, 0.1).is_err());
        assert!(sample_grid(1.0, -0.1).is_err());
    }

    #[test]
    fn zero_field_is_constant() {
        let y0 = [1.5, -2.0, 0.25];
        let out = integrate(|_, _| [0.0; 3], y0, 2.0, &IntegratorConfig::default(), 0.5).unwrap();
        assert_eq!(out.len(), 5);
        assert!(out.iter().all(|s| s.y == y0));
    }

    #[test]
    fn exponential_decay() {
        let cfg = IntegratorConfig::default();
        let out = integrate(|_, y: &[f64; 3]| y.map(|v| -v), [1.0, 2.0, -3.0], 1.0, &cfg, 0.25).unwrap();
        let last = out.last().unwrap();
        assert_eq!(last.t, 1.0);
        let e = (-1.0f64).exp();
        for (i, y0) in [1.0, 2.0, -3.0].iter().enumerate() {
            let exact = y0 * e;
            assert!((last.y[i] - exact).abs() <= cfg.abs_tol + cfg.rel_tol * exact.abs() * 10.0);
        }
    }

    #[test]
    fn sample_times_are_exact_grid() {
        let cfg = IntegratorConfig::default();
        let out = integrate(|t, _: &[f64; 1]| [t.cos()], [0.0], 3.0, &cfg, 0.1).unwrap();
        let grid = sample_grid(3.0, 0.1).unwrap();
        assert_eq!(out.iter().map(|s| s.t).collect::<Vec<_>>(), grid);
        for s in &out {
            assert_abs_diff_eq!(s.y[0], s.t.sin(), epsilon = 1e-9);
        }
    }

    #[test]
    fn fixed_step_order_is_five() {
        // y' = -y, y(0) = 1 over [0, 1] with uniform steps.
        let run = |n: usize| {
            let h = 1.0 / n as f64;
            let mut f = |_t: f64, y: &[f64; 1]| [-y[0]];
            let mut y = [1.0];
            let mut t = 0.0;
            for _ in 0..n {
                let k1 = f(t, &y);
                y = dp54_step(&mut f, t, &y, h, &k1).0;
                t += h;
            }
            (y[0] - (-1.0f64).exp()).abs()
        };
        let e1 = run(4);
        let e2 = run(8);
        let e3 = run(16);
        let order1 = (e1 / e2).log2();
        let order2 = (e2 / e3).log2();
        assert!((4.6..5.6).contains(&order1), "observed order {order1}");
        assert!((4.6..5.6).contains(&order2), "observed order {order2}");
    }

    #[test]
    fn adaptive_step_count_scales_like_fifth_order() {
        // Tightening tolerance 32x should roughly double the step count.
        let count = |tol: f64| {
            let cfg = IntegratorConfig {
                rel_tol: tol,
                abs_tol: tol,
                h_init: 1e-3,
                h_min: 1e-14,
                h_max: 10.0,
                max_steps: 1_000_000,
            };
            let (out, stats) = integrate_with_stats(|_, y: &[f64; 1]| [-y[0]], [1.0], 10.0, &cfg, 10.0).unwrap();
            let err = (out.last().unwrap().y[0] - (-10.0f64).exp()).abs();
            (stats.accepted as f64, err)
        };
        let (n1, e1) = count(1e-6);
        let (n2, e2) = count(1e-6 / 32.0);
        let (n3, e3) = count(1e-6 / 1024.0);
        let r1 = n2 / n1;
        let r2 = n3 / n2;
        assert!((1.5..2.7).contains(&r1), "step ratio {r1}");
        assert!((1.5..2.7).contains(&r2), "step ratio {r2}");
        assert!(e2 < e1 && e3 < e2);
    }

    #[test]
    fn error_paths() {
        let cfg = IntegratorConfig {
            max_steps: 5,
            ..IntegratorConfig::default()
        };
        assert!(matches!(
            integrate(|_, y: &[f64; 1]| [-y[0]], [1.0], 100.0, &cfg, 100.0),
            Err(OdeError::MaxStepsExceeded { .. })
        ));

        // Finite-time blow-up: y' = y², y(0) = 1 reaches infinity at t = 1.
        let cfg = IntegratorConfig {
            h_min: 1e-6,
            ..IntegratorConfig::default()
        };
        let blowup = integrate(|_, y: &[f64; 1]| [y[0] * y[0]], [1.0], 2.0, &cfg, 0.5);
        assert!(
            matches!(
                blowup,
                Err(OdeError::StepUnderflow { .. }) | Err(OdeError::NonFinite { .. })
            ),
            "{blowup:?}"
        );

        assert!(matches!(
            integrate(
                |_, _: &[f64; 1]| [f64::NAN],
                [1.0],
                1.0,
                &IntegratorConfig::default(),
                0.5
            ),
            Err(OdeError::NonFinite { .. })
        ));
        assert!(matches!(
            integrate(
                |_, y: &[f64; 1]| *y,
                [f64::INFINITY],
                1.0,
                &IntegratorConfig::default(),
                0.5
            ),
            Err(OdeError::NonFinite { .. })
        ));
        assert!(integrate(|_, y: &[f64; 1]| *y, [1.0], -1.0, &IntegratorConfig::default(), 0.5).is_err());
    }

    #[test]
    fn deterministic_bitwise() {
        let j = reference_inertia();
        let g = SmcGains::with_scalar_l(0.04, 0.04, 0.04).unwrap();
        let ld = V::new(0.3333, -0.3333, -0.3333);
        let y0 = BodyState::new(V::new(0.0, -0.1, 0.0), V::zeros());
        let cfg = IntegratorConfig::default();
        let a = integrate_body(closed_loop_derivative(j, g, ld), y0, 20.0, &cfg, 0.1).unwrap();
        let b = integrate_body(closed_loop_derivative(j, g, ld), y0, 20.0, &cfg, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn closed_loop_equilibrium() {
        let j = reference_inertia();
        let g = SmcGains::with_scalar_l(0.04, 0.04, 0.04).unwrap();
        let ld = V::new(0.3333, -0.3333, -0.3333);
        let f = closed_loop_derivative(j, g, ld);
        let d = f(0.0, &BodyState::new(V::zeros(), ld));
        assert_eq!(d.to_array(), [0.0; 6]);
    }

    #[test]
    fn closed_loop_initial_attitude_rate() {
        let j = reference_inertia();
        let g = SmcGains::with_scalar_l(0.04, 0.04, 0.04).unwrap();
        let ld = V::new(0.3333, -0.3333, -0.3333);
        let f = closed_loop_derivative(j, g, ld);
        let omega = V::new(0.0, -0.1, 0.0);
        let d = f(0.0, &BodyState::new(omega, V::zeros()));
        // Column 2 of G(σ_db) times -0.1, σ_db = (-a, a, a).
        let a = 0.3333;
        let expect = V::new(
            0.5 * (a - a * a),
            0.5 * ((1.0 - 3.0 * a * a) / 2.0 + a * a),
            0.5 * (a + a * a),
        )
        .scale(-0.1);
        for i in 0..3 {
            assert_abs_diff_eq!(d.sigma_lb.sigma[i], expect[i], epsilon = 1e-16);
        }
    }

    #[test]
    fn closed_loop_field_drives_xi_at_minus_l_xi() {
        let j = reference_inertia();
        let l = Matrix3::from_diagonal(&V::new(0.04, 0.09, 0.5));
        let g = SmcGains::new(0.3, 0.8, l).unwrap();
        let ld = V::new(0.1, 0.2, -0.4);
        let f = closed_loop_derivative(j, g, ld);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let omega = V::from_fn(|_| rng.gen_range(-1.0..1.0));
            let sigma = V::from_fn(|_| rng.gen_range(-1.0..1.0));
            let d = f(0.0, &BodyState::new(omega, sigma));
            let xi = sliding_variable(&g, &omega, &(sigma - ld));
            let xi_dot = d.omega * g.k1() + d.sigma_lb.sigma * g.k2();
            assert!((xi_dot + l * xi).norm() < 1e-10);
        }
    }

    #[test]
    fn torque_free_conserves_energy_and_momentum() {
        let j = reference_inertia();
        let w0 = V::new(0.0, -0.1, 0.0);
        let out = integrate(torque_free_rate(j), w0.0, 100.0, &IntegratorConfig::default(), 1.0).unwrap();
        let e0 = j.kinetic_energy(&w0);
        let h0 = j.momentum(&w0).norm();
        for s in &out {
            let w = Vector3(s.y);
            assert!((j.kinetic_energy(&w) - e0).abs() / e0 < 1e-8);
            assert!((j.momentum(&w).norm() - h0).abs() / h0 < 1e-8);
        }
    }

    #[test]
    fn single_precision_integration() {
        let cfg = IntegratorConfig::<f32> {
            rel_tol: 1e-5,
            abs_tol: 1e-6,
            ..IntegratorConfig::default()
        };
        let out = integrate(|_, y: &[f32; 1]| [-y[0]], [1.0f32], 1.0, &cfg, 0.5).unwrap();
        assert!((out.last().unwrap().y[0] - (-1.0f32).exp()).abs() < 1e-4);
    }
}
