//! Rigid-body attitude control with a linear continuous sliding-mode law on
//! modified Rodrigues parameters.
//!
//! Numeric code is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the scalar to `f64`, which is what the simulation front end uses.

pub mod attitude;
pub mod mathcore;
pub mod odeint;
pub mod real;
pub mod smc;

pub use attitude::{
    attitude_error, body_accel, mrp_g_matrix, mrp_identity_residual, mrp_rate, AttitudeError, BodyState, InertiaTensor,
    MrpAttitude,
};
pub use mathcore::{cross, is_symmetric_positive_definite, skew, solve3, Lu3, MathError, Matrix3, Vector3};
pub use odeint::{
    closed_loop_derivative, closed_loop_derivative_with, integrate, integrate_body, integrate_with_stats, sample_grid,
    torque_free_rate, IntegratorConfig, OdeError, Sample, SolutionSample, StepStats,
};
pub use real::Real;
pub use smc::{
    equivalent_control, lyapunov_sample, reaching_control, sliding_rate, sliding_variable, total_torque, ControlLaw,
    ControlOutput, GainsError, LyapunovSample, SlidingModeController, SmcGains,
};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;
pub type Vec3f = Vector3<f32>;
pub type Mat3f = Matrix3<f32>;
pub type Inertia = InertiaTensor<f64>;
pub type Gains = SmcGains<f64>;
pub type State = BodyState<f64>;
pub type Controller = SlidingModeController<f64>;
pub type Lyapunov = LyapunovSample<f64>;
pub type Config = IntegratorConfig<f64>;
