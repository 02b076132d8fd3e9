//! Rigid-body rotational dynamics and modified Rodrigues parameter (MRP) kinematics.
//!
//! Frames: `b` is the spacecraft body frame, `l` the inertial reference frame and
//! `d` the desired (target) frame. `ω` is always the body rate relative to the
//! inertial frame expressed in body axes, and the desired angular velocity is zero
//! throughout, so `ω_db = ω_lb`.
//!
//! The attitude error is the plain difference `σ_db = σ_lb − σ_ld`. That is not the
//! multiplicative MRP composition used in much of the attitude literature; the two
//! agree to first order near the target. No shadow-set switching is performed, so
//! attitudes are treated as points of R³.

use thiserror::Error;

use crate::mathcore::{cross, is_symmetric_positive_definite, skew, Lu3, Matrix3, Vector3};
use crate::real::Real;

/// Symmetry / definiteness tolerance applied to inertia and gain matrices.
pub const SPD_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AttitudeError {
    #[error("inertia tensor must be finite")]
    NonFiniteInertia,
    #[error("inertia tensor is not symmetric positive definite")]
    InertiaNotPositiveDefinite,
}

/// Body inertia about the center of mass, kg·m². Symmetric positive definite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaTensor<T> {
    matrix: Matrix3<T>,
    lu: Lu3<T>,
}

impl<T: Real> InertiaTensor<T> {
    pub fn new(matrix: Matrix3<T>) -> Result<Self, AttitudeError> {
        if !matrix.is_finite() {
            return Err(AttitudeError::NonFiniteInertia);
        }
        if !is_symmetric_positive_definite(&matrix, T::lit(SPD_TOL)) {
            return Err(AttitudeError::InertiaNotPositiveDefinite);
        }
        let lu = Lu3::factor(&matrix).map_err(|_| AttitudeError::InertiaNotPositiveDefinite)?;
        Ok(Self { matrix, lu })
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix3<T> {
        &self.matrix
    }

    /// Angular momentum `J·ω`.
    #[inline]
    pub fn momentum(&self, omega: &Vector3<T>) -> Vector3<T> {
        self.matrix * *omega
    }

    /// Applies `J⁻¹` through the stored factorization.
    #[inline]
    pub fn solve(&self, rhs: &Vector3<T>) -> Vector3<T> {
        self.lu.solve(rhs)
    }

    /// Rotational kinetic energy `½ ωᵀJω`.
    pub fn kinetic_energy(&self, omega: &Vector3<T>) -> T {
        T::half() * omega.dot(&self.momentum(omega))
    }
}

/// Attitude as modified Rodrigues parameters (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MrpAttitude<T> {
    pub sigma: Vector3<T>,
}

impl<T: Real> MrpAttitude<T> {
    pub fn new(sigma: Vector3<T>) -> Self {
        Self { sigma }
    }

    /// Error of this (inertial) attitude relative to `desired`.
    pub fn error_to(&self, desired: &Self) -> Vector3<T> {
        attitude_error(&self.sigma, &desired.sigma)
    }
}

impl<T> From<Vector3<T>> for MrpAttitude<T> {
    fn from(sigma: Vector3<T>) -> Self {
        Self { sigma }
    }
}

/// The integrated state: body rate `ω` (rad/s) and inertial attitude `σ_lb`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyState<T> {
    pub omega: Vector3<T>,
    pub sigma_lb: MrpAttitude<T>,
}

impl<T: Real> BodyState<T> {
    pub fn new(omega: Vector3<T>, sigma_lb: Vector3<T>) -> Self {
        Self {
            omega,
            sigma_lb: MrpAttitude::new(sigma_lb),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.omega.is_finite() && self.sigma_lb.sigma.is_finite()
    }

    /// Flattened as `[ω₁, ω₂, ω₃, σ₁, σ₂, σ₃]`.
    pub fn to_array(&self) -> [T; 6] {
        let w = self.omega;
        let s = self.sigma_lb.sigma;
        [w[0], w[1], w[2], s[0], s[1], s[2]]
    }

    pub fn from_array(y: &[T; 6]) -> Self {
        Self::new(Vector3::new(y[0], y[1], y[2]), Vector3::new(y[3], y[4], y[5]))
    }
}

/// MRP kinematic matrix `G(σ) = ½(((1 − σᵀσ)/2)·I − [σ]× + σσᵀ)`, so that `σ̇ = G(σ)·ω`.
pub fn mrp_g_matrix<T: Real>(sigma: &Vector3<T>) -> Matrix3<T> {
    let diag = (T::one() - sigma.norm_squared()) * T::half();
    let inner = Matrix3::identity().scale(diag) - skew(sigma) + sigma.outer(sigma);
    inner.scale(T::half())
}

/// `σ̇_db = G(σ_db)·ω`, valid because the desired frame does not rotate.
pub fn mrp_rate<T: Real>(sigma_db: &Vector3<T>, omega: &Vector3<T>) -> Vector3<T> {
    mrp_g_matrix(sigma_db) * *omega
}

/// Euler's rotational equation solved for `ω̇`: `J ω̇ = −ω × Jω + τ`.
pub fn body_accel<T: Real>(inertia: &InertiaTensor<T>, omega: &Vector3<T>, tau: &Vector3<T>) -> Vector3<T> {
    let gyroscopic = cross(omega, &inertia.momentum(omega));
    inertia.solve(&(*tau - gyroscopic))
}

/// `σ_db = σ_lb − σ_ld`.
#[inline]
pub fn attitude_error<T: Real>(sigma_lb: &Vector3<T>, sigma_ld: &Vector3<T>) -> Vector3<T> {
    *sigma_lb - *sigma_ld
}

/// `‖σᵀG(σ) − ¼(1 + σᵀσ)σᵀ‖`; zero in exact arithmetic for every σ.
pub fn mrp_identity_residual<T: Real>(sigma: &Vector3<T>) -> T {
    let g = mrp_g_matrix(sigma);
    let lhs = g.transpose() * *sigma;
    let rhs = sigma.scale(T::quarter() * (T::one() + sigma.norm_squared()));
    (lhs - rhs).norm()
}
