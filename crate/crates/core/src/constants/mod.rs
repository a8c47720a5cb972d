//! Parameters, the objective `k`, and the case tables for the three sharp
//! constants.

mod kfun;
mod params;
mod tables;

pub use kfun::{k_at_theta, k_limit_alpha_minus_inf, k_limit_beta_inf, k_value};
pub(crate) use kfun::{k_gradient, k_raw, signed_pow};
pub use params::{theta, FunctionClass, PowerWeightParams};
pub use tables::{
    a_tangent_threshold, bounds_d, constant_a, constant_b, constant_c, constant_for, CaseTag,
    ConstantResult, DBounds, Method,
};
