//! Sharp constants for weighted `L^p` bounds of the Hardy operator minus
//! identity, `∫|Hf − f|^p t^a dt ≤ K^p ∫|f|^p t^a dt`, over three function
//! classes (general, positive, positive decreasing), together with the
//! numerical machinery used to check them independently: suprema of the
//! two-parameter ratio `k_{p,a}`, exact piecewise integration of extremal
//! families, randomized testing and pointwise majorization.

// `!(x > y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod constants;
pub mod error;
pub mod hardy;
pub mod majorization;
pub mod optimize;
pub mod roots;
pub mod verify;

pub use constants::{
    bounds_d, constant_a, constant_b, constant_c, constant_for, k_limit_beta_inf, k_value, theta,
    CaseTag, ConstantResult, DBounds, FunctionClass, Method, PowerWeightParams,
};
pub use error::{End, Error, Result};
