//! Linear continuous sliding-mode attitude control law and its Lyapunov diagnostics.
//!
//! Sliding variable `ξ = k₁ω + k₂σ_db`, torque `τ = u_eq + u_N` with
//!
//! ```text
//! u_eq = ω × Jω − (k₂/k₁)·J·G(σ_db)·ω
//! u_N  = −(1/k₁)·J·L·ξ
//! ```
//!
//! Substituted into the rigid-body dynamics this gives `ξ̇ = −Lξ` at every state,
//! so `V = ½ξᵀξ` decays with `V̇ = −ξᵀLξ`. `u_eq` is applied everywhere, not only
//! on the surface `ξ = 0`; the cancellation above depends on it.
//!
//! When `L = λI` the augmented function `V̄ = V + 2k̄·ln(1 + σᵀσ)` with
//! `k̄ = 2k₁k₂λ` is also nonincreasing, which certifies convergence of the state
//! itself rather than just of `ξ`.

use thiserror::Error;

use crate::attitude::{body_accel, mrp_g_matrix, mrp_rate, InertiaTensor, SPD_TOL};
use crate::mathcore::{is_symmetric_positive_definite, Matrix3, Vector3};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GainsError {
    #[error("k1 must be nonzero (equivalent control divides by k1)")]
    ZeroK1,
    #[error("k2 must be nonzero")]
    ZeroK2,
    #[error("k1*k2 must be positive")]
    GainSignMismatch,
    #[error("gains must be finite")]
    NonFinite,
    #[error("L is not positive definite")]
    LNotPositiveDefinite,
}

/// Surface weights `k₁`, `k₂` and reaching gain matrix `L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmcGains<T> {
    k1: T,
    k2: T,
    l: Matrix3<T>,
}

impl<T: Real> SmcGains<T> {
    pub fn new(k1: T, k2: T, l: Matrix3<T>) -> Result<Self, GainsError> {
        if !k1.is_finite() || !k2.is_finite() || !l.is_finite() {
            return Err(GainsError::NonFinite);
        }
        if k1 == T::zero() {
            return Err(GainsError::ZeroK1);
        }
        if k2 == T::zero() {
            return Err(GainsError::ZeroK2);
        }
        if k1 * k2 <= T::zero() {
            return Err(GainsError::GainSignMismatch);
        }
        if !is_symmetric_positive_definite(&l, T::lit(SPD_TOL)) {
            return Err(GainsError::LNotPositiveDefinite);
        }
        Ok(Self { k1, k2, l })
    }

    /// Gains with `L = λI`.
    pub fn with_scalar_l(k1: T, k2: T, lambda: T) -> Result<Self, GainsError> {
        Self::new(k1, k2, Matrix3::identity().scale(lambda))
    }

    #[inline]
    pub fn k1(&self) -> T {
        self.k1
    }

    #[inline]
    pub fn k2(&self) -> T {
        self.k2
    }

    #[inline]
    pub fn l(&self) -> &Matrix3<T> {
        &self.l
    }

    /// `λ` when `L = λI` (within the SPD tolerance).
    pub fn scalar_l(&self) -> Option<T> {
        self.l.as_positive_scalar_identity(T::lit(SPD_TOL))
    }

    /// `k̄ = 2k₁k₂λ`, the weight making `2k₁k₂L = k̄I` hold; only defined for scalar `L`.
    pub fn kbar(&self) -> Option<T> {
        self.scalar_l().map(|lambda| T::two() * self.k1 * self.k2 * lambda)
    }
}

/// `ξ = k₁ω + k₂σ_db`.
pub fn sliding_variable<T: Real>(g: &SmcGains<T>, omega: &Vector3<T>, sigma_db: &Vector3<T>) -> Vector3<T> {
    *omega * g.k1 + *sigma_db * g.k2
}

/// `u_eq = ω × Jω − (k₂/k₁)·J·G(σ_db)·ω`.
pub fn equivalent_control<T: Real>(
    j: &InertiaTensor<T>,
    g: &SmcGains<T>,
    omega: &Vector3<T>,
    sigma_db: &Vector3<T>,
) -> Vector3<T> {
    let gyroscopic = omega.cross(&j.momentum(omega));
    let kinematic = j.momentum(&(mrp_g_matrix(sigma_db) * *omega));
    gyroscopic - kinematic.scale(g.k2 / g.k1)
}

/// `u_N = −(1/k₁)·J·L·ξ`; exactly zero on the surface.
pub fn reaching_control<T: Real>(j: &InertiaTensor<T>, g: &SmcGains<T>, xi: &Vector3<T>) -> Vector3<T> {
    -j.momentum(&(g.l * *xi)).scale(T::one() / g.k1)
}

/// One evaluation of the control law with its internals kept for telemetry.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlOutput<T> {
    pub tau: Vector3<T>,
    pub u_eq: Vector3<T>,
    pub u_n: Vector3<T>,
    pub xi: Vector3<T>,
}

/// `τ = u_eq + u_N`.
pub fn total_torque<T: Real>(
    j: &InertiaTensor<T>,
    g: &SmcGains<T>,
    omega: &Vector3<T>,
    sigma_db: &Vector3<T>,
) -> ControlOutput<T> {
    let xi = sliding_variable(g, omega, sigma_db);
    let u_eq = equivalent_control(j, g, omega, sigma_db);
    let u_n = reaching_control(j, g, &xi);
    ControlOutput {
        tau: u_eq + u_n,
        u_eq,
        u_n,
        xi,
    }
}

/// A torque law closing the attitude loop from `(ω, σ_db)`.
pub trait ControlLaw<T: Real> {
    fn control(&self, omega: &Vector3<T>, sigma_db: &Vector3<T>) -> ControlOutput<T>;
}

/// The sliding-mode controller bound to a plant inertia.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlidingModeController<T> {
    pub inertia: InertiaTensor<T>,
    pub gains: SmcGains<T>,
}

impl<T: Real> SlidingModeController<T> {
    pub fn new(inertia: InertiaTensor<T>, gains: SmcGains<T>) -> Self {
        Self { inertia, gains }
    }
}

impl<T: Real> ControlLaw<T> for SlidingModeController<T> {
    fn control(&self, omega: &Vector3<T>, sigma_db: &Vector3<T>) -> ControlOutput<T> {
        total_torque(&self.inertia, &self.gains, omega, sigma_db)
    }
}

/// Lyapunov values at one state.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LyapunovSample<T> {
    /// `½ξᵀξ`
    pub v: T,
    /// `−ξᵀLξ`
    pub vdot: T,
    /// `V + 2k̄·ln(1 + σᵀσ)`, scalar `L` only.
    pub vbar: Option<T>,
    pub kbar: Option<T>,
}

pub fn lyapunov_sample<T: Real>(g: &SmcGains<T>, xi: &Vector3<T>, sigma_db: &Vector3<T>) -> LyapunovSample<T> {
    let v = T::half() * xi.norm_squared();
    let vdot = -xi.dot(&(g.l * *xi));
    let kbar = g.kbar();
    let vbar = kbar.map(|kb| v + T::two() * kb * sigma_db.norm_squared().ln_1p());
    LyapunovSample { v, vdot, vbar, kbar }
}

/// `k₁ω̇ + k₂σ̇_db` under `law`, i.e. the closed-loop `ξ̇`.
pub fn sliding_rate<T: Real, C: ControlLaw<T>>(
    law: &C,
    j: &InertiaTensor<T>,
    g: &SmcGains<T>,
    omega: &Vector3<T>,
    sigma_db: &Vector3<T>,
) -> Vector3<T> {
    let tau = law.control(omega, sigma_db).tau;
    body_accel(j, omega, &tau) * g.k1 + mrp_rate(sigma_db, omega) * g.k2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    type V = Vector3<f64>;
    type M = Matrix3<f64>;

    fn reference_inertia() -> InertiaTensor<f64> {
        InertiaTensor::new(M::from_rows([
            [1.49, 0.054, 0.0442],
            [0.054, 1.51, 0.0],
            [0.0442, 0.0, 1.56],
        ]))
        .unwrap()
    }

    fn reference_gains() -> SmcGains<f64> {
        SmcGains::with_scalar_l(0.04, 0.04, 0.04).unwrap()
    }

    fn omega0() -> V {
        V::new(0.0, -0.1, 0.0)
    }

    fn sigma_db0() -> V {
        V::new(-0.3333, 0.3333, 0.3333)
    }

    #[test]
    fn gains_validation() {
        let l = M::identity();
        assert_eq!(SmcGains::new(0.0, 1.0, l), Err(GainsError::ZeroK1));
        assert_eq!(SmcGains::new(1.0, 0.0, l), Err(GainsError::ZeroK2));
        assert_eq!(SmcGains::new(1.0, -1.0, l), Err(GainsError::GainSignMismatch));
        assert_eq!(
            SmcGains::new(1.0, 1.0, M::from_diagonal(&V::new(1.0, -1.0, 1.0))),
            Err(GainsError::LNotPositiveDefinite)
        );
        assert_eq!(SmcGains::new(f64::NAN, 1.0, l), Err(GainsError::NonFinite));
        // Both negative satisfies k1*k2 > 0.
        assert!(SmcGains::new(-0.5, -0.2, l).is_ok());
    }

    #[test]
    fn sliding_variable_examples() {
        let g = reference_gains();
        assert_eq!(sliding_variable(&g, &V::zeros(), &V::zeros()), V::zeros());

        // 0.04·(0, −0.1, 0) + 0.04·(−0.3333, 0.3333, 0.3333)
        //   = (−0.013332, −0.004 + 0.013332, 0.013332) = (−0.013332, 0.009332, 0.013332)
        let xi = sliding_variable(&g, &omega0(), &sigma_db0());
        assert_abs_diff_eq!(xi[0], -0.013332, epsilon = 1e-15);
        assert_abs_diff_eq!(xi[1], 0.009332, epsilon = 1e-15);
        assert_abs_diff_eq!(xi[2], 0.013332, epsilon = 1e-15);

        let g = SmcGains::with_scalar_l(0.5, 2.0, 1.0).unwrap();
        let s = V::new(0.3, -0.1, 0.25);
        let on_surface = s.scale(-g.k2() / g.k1());
        assert_eq!(sliding_variable(&g, &on_surface, &s), V::zeros());
    }

    #[test]
    fn equivalent_control_examples() {
        let g = reference_gains();
        let j = reference_inertia();
        assert_eq!(
            equivalent_control(&j, &g, &V::zeros(), &V::new(0.4, 0.1, -2.0)),
            V::zeros()
        );

        let sphere = InertiaTensor::new(M::identity()).unwrap();
        let g1 = SmcGains::with_scalar_l(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            equivalent_control(&sphere, &g1, &V::new(4.0, 0.0, 0.0), &V::zeros()),
            V::new(-1.0, 0.0, 0.0)
        );
    }

    /// Hand evaluation of u_eq at the reference initial state.
    ///
    /// σ = (−a, a, a), a = 0.3333; σᵀσ = 3a² = 0.33326667.
    /// G(σ)·ω with ω = (0, −0.1, 0) only needs column 2 of G:
    ///   G₁₂ = ½(−(−σ₃) + σ₁σ₂) = ½(a − a²)
    ///   G₂₂ = ½((1 − 3a²)/2 + a²)
    ///   G₃₂ = ½(−σ₁ + σ₃σ₂) = ½(a + a²)
    /// u_eq = ω×Jω − (k₂/k₁)·J·(G ω), with ω×Jω = (0, 0, −0.00054) and k₂/k₁ = 1.
    #[test]
    fn equivalent_control_reference_initial_state() {
        let a: f64 = 0.3333;
        let gw = V::new(
            0.5 * (a - a * a),
            0.5 * ((1.0 - 3.0 * a * a) / 2.0 + a * a),
            0.5 * (a + a * a),
        )
        .scale(-0.1);
        let jgw = V::new(
            1.49 * gw[0] + 0.054 * gw[1] + 0.0442 * gw[2],
            0.054 * gw[0] + 1.51 * gw[1],
            0.0442 * gw[0] + 1.56 * gw[2],
        );
        let expect = V::new(0.0, 0.0, -0.00054) - jgw;

        let got = equivalent_control(&reference_inertia(), &reference_gains(), &omega0(), &sigma_db0());
        for i in 0..3 {
            assert_abs_diff_eq!(got[i], expect[i], epsilon = 1e-15);
        }
        // Frozen values of the hand evaluation above.
        assert_abs_diff_eq!(got[0], 0.0187368571, epsilon = 1e-9);
        assert_abs_diff_eq!(got[1], 0.0341563644, epsilon = 1e-9);
        assert_abs_diff_eq!(got[2], 0.0346134200, epsilon = 1e-9);
    }

    #[test]
    fn reaching_control_examples() {
        let j = reference_inertia();
        let g = reference_gains();
        assert_eq!(reaching_control(&j, &g, &V::zeros()), V::zeros());

        // (1/0.04)·0.04 = 1 so u_N = −J·ξ. Row by row with ξ = (−0.013332, 0.009332, 0.013332):
        //   1.49·(−0.013332) + 0.054·0.009332 + 0.0442·0.013332 = −0.0187714776
        //   0.054·(−0.013332) + 1.51·0.009332                   =  0.0133713920
        //   0.0442·(−0.013332) + 1.56·0.013332                  =  0.0202086456
        let xi = sliding_variable(&g, &omega0(), &sigma_db0());
        let u_n = reaching_control(&j, &g, &xi);
        assert_abs_diff_eq!(u_n[0], 0.0187714776, epsilon = 1e-12);
        assert_abs_diff_eq!(u_n[1], -0.0133713920, epsilon = 1e-12);
        assert_abs_diff_eq!(u_n[2], -0.0202086456, epsilon = 1e-12);

        let sphere = InertiaTensor::new(M::identity()).unwrap();
        let g1 = SmcGains::with_scalar_l(1.0, 1.0, 1.0).unwrap();
        assert_eq!(
            reaching_control(&sphere, &g1, &V::new(1.0, 2.0, 3.0)),
            V::new(-1.0, -2.0, -3.0)
        );
    }

    #[test]
    fn total_torque_examples() {
        let j = reference_inertia();
        let g = reference_gains();
        assert_eq!(total_torque(&j, &g, &V::zeros(), &V::zeros()).tau, V::zeros());

        let out = total_torque(&j, &g, &omega0(), &sigma_db0());
        assert_eq!(out.tau, out.u_eq + out.u_n);
        let expect = V::new(
            0.0187368571 + 0.0187714776,
            0.0341563644 - 0.0133713920,
            0.0346134200 - 0.0202086456,
        );
        for i in 0..3 {
            assert_abs_diff_eq!(out.tau[i], expect[i], epsilon = 1e-9);
        }

        let s = V::new(0.1, -0.2, 0.05);
        let on_surface = s.scale(-g.k2() / g.k1());
        let out = total_torque(&j, &g, &on_surface, &s);
        assert_eq!(out.u_n, V::zeros());
        assert_eq!(out.tau, out.u_eq);
    }

    #[test]
    fn lyapunov_examples() {
        let g = reference_gains();
        let zero = lyapunov_sample(&g, &V::zeros(), &V::zeros());
        assert_eq!((zero.v, zero.vdot, zero.vbar), (0.0, 0.0, Some(0.0)));
        assert_abs_diff_eq!(g.kbar().unwrap(), 1.28e-4, epsilon = 1e-18);

        let unit = SmcGains::with_scalar_l(1.0, 1.0, 1.0).unwrap();
        let s = lyapunov_sample(&unit, &V::new(1.0, 0.0, 0.0), &V::zeros());
        assert_eq!((s.v, s.vdot), (0.5, -1.0));

        let sigma = V::new(0.5, 0.0, 0.0);
        let s = lyapunov_sample(&unit, &V::new(1.0, 0.0, 0.0), &sigma);
        assert_abs_diff_eq!(s.vbar.unwrap(), 0.5 + 2.0 * 2.0 * 1.25f64.ln(), epsilon = 1e-15);

        let diag = SmcGains::new(0.04, 0.04, M::from_diagonal(&V::new(0.04, 0.05, 0.06))).unwrap();
        let s = lyapunov_sample(&diag, &V::new(1.0, 1.0, 1.0), &V::zeros());
        assert_eq!(s.vbar, None);
        assert_eq!(s.kbar, None);
        assert_abs_diff_eq!(s.vdot, -0.15, epsilon = 1e-15);
    }

    fn vec3(r: f64) -> impl Strategy<Value = V> {
        prop::array::uniform3(-r..r).prop_map(Vector3)
    }

    proptest! {
        #[test]
        fn closed_loop_sliding_rate_is_minus_l_xi(
            w in vec3(1.0),
            s in vec3(1.0),
            l_diag in prop::array::uniform3(0.01f64..2.0),
            k1 in 0.01f64..2.0,
            k2 in 0.01f64..2.0,
        ) {
            let j = reference_inertia();
            let g = SmcGains::new(k1, k2, M::from_diagonal(&Vector3(l_diag))).unwrap();
            let law = SlidingModeController::new(j, g);
            let xi = sliding_variable(&g, &w, &s);
            let rate = sliding_rate(&law, &j, &g, &w, &s);
            prop_assert!((rate + g.l().mul_vec(&xi)).norm() < 1e-10);
        }

        #[test]
        fn gain_scaling(w in vec3(1.0), s in vec3(1.0), c in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0]) {
            let j = reference_inertia();
            let g = SmcGains::with_scalar_l(0.04, 0.07, 0.3).unwrap();
            let gc = SmcGains::new(c * 0.04, c * 0.07, *g.l()).unwrap();
            let base = total_torque(&j, &g, &w, &s);
            let scaled = total_torque(&j, &gc, &w, &s);
            prop_assert!((base.u_eq - scaled.u_eq).norm() < 1e-13);
            prop_assert!((base.u_n - scaled.u_n).norm() < 1e-13);
            prop_assert!((base.xi.scale(c) - scaled.xi).norm() < 1e-13);
        }
    }
}
