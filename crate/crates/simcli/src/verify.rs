//! Executable stability checks over a scenario.
//!
//! Each check reports the worst measured residual next to its tolerance. A
//! failing check is a report entry, never a panic; simulation errors become a
//! failed `simulation` entry.

use std::fmt;

use mrp_smc::{
    attitude_error, integrate, mrp_identity_residual, sliding_rate, torque_free_rate, ControlLaw, Controller, Vec3,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scenario::Scenario;
use crate::telemetry::{run_simulation_with, TelemetryRecord};

pub const IDENTITY_SAMPLES: usize = 1000;
pub const IDENTITY_RANGE: f64 = 2.0;
pub const IDENTITY_TOL: f64 = 1e-12;
pub const ALGEBRA_SAMPLES: usize = 100;
pub const ALGEBRA_TOL: f64 = 1e-10;
/// `|‖ξ(t)‖ − ‖ξ(0)‖e^(−λt)| ≤ XI_DECAY_REL_TOL·‖ξ(0)‖` (plus [`XI_DECAY_ABS_FLOOR`]).
pub const XI_DECAY_REL_TOL: f64 = 1e-6;
pub const XI_DECAY_ABS_FLOOR: f64 = 1e-15;
/// Largest tolerated per-sample increase of sampled `V̄` and `‖ξ‖`.
pub const MONOTONE_TOL: f64 = 1e-9;
/// Below this `‖ξ‖` the state counts as on the surface and `V` need not decrease.
pub const XI_ZERO: f64 = 1e-10;
pub const CONSERVATION_HORIZON: f64 = 100.0;
pub const CONSERVATION_TOL: f64 = 1e-8;
pub const RECORD_CONSISTENCY_TOL: f64 = 1e-15;
/// Relative tolerance of the finite-difference `V̇` against the analytic value.
pub const VDOT_REL_TOL: f64 = 1e-3;

pub const VERIFY_SEED: u64 = 0x5eed_2020;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    pub worst: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn measured(name: &'static str, worst: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        let status = if worst.is_finite() && worst <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name,
            status,
            worst,
            tolerance,
            detail: detail.into(),
        }
    }

    fn skipped(name: &'static str, detail: impl Into<String>) -> Self {
        Self {
            name,
            status: Status::Skipped,
            worst: f64::NAN,
            tolerance: f64::NAN,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.status {
            Status::Skipped => write!(f, "[{}] {:<26} {}", self.status, self.name, self.detail),
            _ => write!(
                f,
                "[{}] {:<26} worst {:.3e} (tol {:.1e})  {}",
                self.status, self.name, self.worst, self.tolerance, self.detail
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

pub fn verify(s: &Scenario) -> VerificationReport {
    verify_with(s, &Controller::new(s.inertia, s.gains))
}

/// Runs every check with `law` closing the loop around the scenario's plant.
pub fn verify_with<C: ControlLaw<f64> + Clone>(s: &Scenario, law: &C) -> VerificationReport {
    let mut checks = vec![check_mrp_identity(), check_closed_loop_algebra(s, law)];
    match run_simulation_with(s, law) {
        Ok(records) => {
            checks.push(check_record_consistency(s, &records));
            checks.push(check_xi_decay(s, &records));
            checks.push(check_xi_monotone(&records));
            checks.push(check_v_decreasing(&records));
            checks.push(check_vdot_consistency(&records));
            checks.push(check_vbar_monotone(s, &records));
            checks.push(check_final_convergence(s, &records));
        }
        Err(e) => checks.push(CheckResult {
            name: "simulation",
            status: Status::Fail,
            worst: f64::NAN,
            tolerance: f64::NAN,
            detail: e.to_string(),
        }),
    }
    checks.push(check_torque_free_conservation(s));
    VerificationReport { checks }
}

pub fn check_mrp_identity() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    let worst = (0..IDENTITY_SAMPLES)
        .map(|_| {
            let sigma = Vec3::from_fn(|_| rng.gen_range(-IDENTITY_RANGE..=IDENTITY_RANGE));
            mrp_identity_residual(&sigma)
        })
        .fold(0.0, f64::max);
    CheckResult::measured(
        "mrp_identity",
        worst,
        IDENTITY_TOL,
        format!("{IDENTITY_SAMPLES} random sigma in [-2,2]^3"),
    )
}

pub fn check_closed_loop_algebra<C: ControlLaw<f64>>(s: &Scenario, law: &C) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED ^ 0xa1);
    let worst = (0..ALGEBRA_SAMPLES)
        .map(|_| {
            let omega = Vec3::from_fn(|_| rng.gen_range(-1.0..=1.0));
            let sigma_lb = Vec3::from_fn(|_| rng.gen_range(-1.0..=1.0));
            let sigma_db = attitude_error(&sigma_lb, &s.sigma_ld);
            let xi = mrp_smc::sliding_variable(&s.gains, &omega, &sigma_db);
            let rate = sliding_rate(law, &s.inertia, &s.gains, &omega, &sigma_db);
            (rate + *s.gains.l() * xi).norm()
        })
        .fold(0.0, f64::max);
    CheckResult::measured(
        "closed_loop_algebra",
        worst,
        ALGEBRA_TOL,
        format!("xi' + L xi at {ALGEBRA_SAMPLES} random states"),
    )
}

pub fn check_record_consistency(s: &Scenario, records: &[TelemetryRecord]) -> CheckResult {
    let worst = records
        .iter()
        .map(|r| {
            let tau = (r.tau - (r.u_eq + r.u_n)).max_abs() / r.tau.max_abs().max(f64::MIN_POSITIVE);
            let xi_expect = r.omega * s.gains.k1() + r.sigma_db * s.gains.k2();
            let xi = (r.xi - xi_expect).max_abs() / r.xi.max_abs().max(f64::MIN_POSITIVE);
            tau.max(xi)
        })
        .fold(0.0, f64::max);
    CheckResult::measured(
        "record_consistency",
        worst,
        RECORD_CONSISTENCY_TOL,
        "tau = u_eq + u_N, xi = k1 omega + k2 sigma_db",
    )
}

/// Reference `‖ξ(t)‖` on the record grid: closed form for `L = λI`, otherwise an
/// independent integration of `ξ̇ = −Lξ`.
fn reference_xi_norms(s: &Scenario, records: &[TelemetryRecord]) -> Result<(Vec<f64>, &'static str), String> {
    let xi0 = records[0].xi;
    if let Some(lambda) = s.gains.scalar_l() {
        let n0 = xi0.norm();
        return Ok((
            records.iter().map(|r| n0 * (-lambda * r.t).exp()).collect(),
            "closed form e^(-lambda t)",
        ));
    }
    let l = *s.gains.l();
    let linear = move |_t: f64, xi: &[f64; 3]| (-(l * Vec3::from(*xi))).0;
    let out = integrate(linear, xi0.0, s.t_final, &s.integrator, s.sample_dt).map_err(|e| e.to_string())?;
    if out.len() != records.len() {
        return Err("reference grid mismatch".into());
    }
    Ok((
        out.iter().map(|x| Vec3::from(x.y).norm()).collect(),
        "integrated xi' = -L xi",
    ))
}

pub fn check_xi_decay(s: &Scenario, records: &[TelemetryRecord]) -> CheckResult {
    let name = "xi_decay";
    let (expect, how) = match reference_xi_norms(s, records) {
        Ok(v) => v,
        Err(e) => {
            return CheckResult {
                name,
                status: Status::Fail,
                worst: f64::NAN,
                tolerance: XI_DECAY_REL_TOL,
                detail: e,
            }
        }
    };
    let n0 = records[0].xi.norm();
    // Reported relative to ‖ξ(0)‖ so the tolerance reads directly.
    let scale = n0.max(XI_DECAY_ABS_FLOOR / XI_DECAY_REL_TOL);
    let worst = records
        .iter()
        .zip(&expect)
        .map(|(r, e)| (r.xi.norm() - e).abs() / scale)
        .fold(0.0, f64::max);
    CheckResult::measured(name, worst, XI_DECAY_REL_TOL, format!("relative to |xi(0)|, {how}"))
}

pub fn check_xi_monotone(records: &[TelemetryRecord]) -> CheckResult {
    let worst = records
        .windows(2)
        .map(|w| w[1].xi.norm() - w[0].xi.norm())
        .fold(0.0, f64::max);
    CheckResult::measured(
        "xi_norm_nonincreasing",
        worst,
        MONOTONE_TOL,
        "largest per-sample increase",
    )
}

pub fn check_v_decreasing(records: &[TelemetryRecord]) -> CheckResult {
    // Worst value of V(t+h) − V(t) over samples with ξ ≠ 0; must be negative.
    let mut worst = f64::NEG_INFINITY;
    let mut counted = 0usize;
    for w in records.windows(2) {
        if w[0].xi.norm() > XI_ZERO {
            worst = worst.max(w[1].v - w[0].v);
            counted += 1;
        }
    }
    if counted == 0 {
        return CheckResult::skipped("v_strictly_decreasing", "xi = 0 throughout");
    }
    let status = if worst < 0.0 { Status::Pass } else { Status::Fail };
    CheckResult {
        name: "v_strictly_decreasing",
        status,
        worst,
        tolerance: 0.0,
        detail: format!("max V(t+h)-V(t) over {counted} steps with |xi| > {XI_ZERO:e}"),
    }
}

/// Finite-difference slope of `V` against the trapezoidal mean of `−ξᵀLξ`.
pub fn check_vdot_consistency(records: &[TelemetryRecord]) -> CheckResult {
    let scale = records.iter().map(|r| r.vdot.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return CheckResult::skipped("vdot_consistency", "V identically zero");
    }
    let worst = records
        .windows(2)
        .map(|w| {
            let h = w[1].t - w[0].t;
            let fd = (w[1].v - w[0].v) / h;
            (fd - 0.5 * (w[0].vdot + w[1].vdot)).abs() / scale
        })
        .fold(0.0, f64::max);
    CheckResult::measured(
        "vdot_consistency",
        worst,
        VDOT_REL_TOL,
        "finite-difference dV/dt vs -xi^T L xi, relative to max |Vdot|",
    )
}

pub fn check_vbar_monotone(s: &Scenario, records: &[TelemetryRecord]) -> CheckResult {
    let name = "vbar_nonincreasing";
    let Some(kbar) = s.gains.kbar() else {
        return CheckResult::skipped(name, "L is not a scalar multiple of I");
    };
    let vbars: Option<Vec<f64>> = records.iter().map(|r| r.vbar).collect();
    let Some(vbars) = vbars else {
        return CheckResult::skipped(name, "Vbar missing from telemetry");
    };
    let worst = vbars.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    CheckResult::measured(
        name,
        worst,
        MONOTONE_TOL,
        format!("kbar = {kbar:e}, largest per-sample increase"),
    )
}

pub fn check_final_convergence(s: &Scenario, records: &[TelemetryRecord]) -> CheckResult {
    let last = records.last().expect("nonempty telemetry");
    let worst = last.sigma_db.norm().max(last.omega.norm());
    CheckResult::measured(
        "final_convergence",
        worst,
        s.convergence_tol,
        format!("max(|sigma_db|, |omega|) at t = {}", last.t),
    )
}

/// Torque-free run from the scenario's `ω0` (or a fixed probe if it is zero).
pub fn check_torque_free_conservation(s: &Scenario) -> CheckResult {
    let name = "torque_free_conservation";
    let omega0 = if s.omega0.norm() > 0.0 {
        s.omega0
    } else {
        Vec3::new(0.05, -0.1, 0.02)
    };
    let j = s.inertia;
    let out = match integrate(torque_free_rate(j), omega0.0, CONSERVATION_HORIZON, &s.integrator, 1.0) {
        Ok(out) => out,
        Err(e) => {
            return CheckResult {
                name,
                status: Status::Fail,
                worst: f64::NAN,
                tolerance: CONSERVATION_TOL,
                detail: e.to_string(),
            }
        }
    };
    let e0 = j.kinetic_energy(&omega0);
    let h0 = j.momentum(&omega0).norm();
    let worst = out
        .iter()
        .map(|x| {
            let w = Vec3::from(x.y);
            let de = (j.kinetic_energy(&w) - e0).abs() / e0;
            let dh = (j.momentum(&w).norm() - h0).abs() / h0;
            de.max(dh)
        })
        .fold(0.0, f64::max);
    CheckResult::measured(
        name,
        worst,
        CONSERVATION_TOL,
        format!("relative drift of energy and |J omega| over {CONSERVATION_HORIZON} s"),
    )
}
