//! The two-parameter objective whose suprema give the sharp constants.

use super::params::PowerWeightParams;
use crate::error::{Error, Result};

/// Numerator and denominator of `k` without the positivity check.
#[inline]
pub(crate) fn k_parts(params: &PowerWeightParams, alpha: f64, beta: f64) -> (f64, f64) {
    let p = params.p();
    let theta = params.theta();
    let wa = beta - theta;
    let wb = theta - alpha;
    let num = wa * (alpha - 1.0).abs().powf(p) + wb * (beta - 1.0).abs().powf(p);
    let den = wa * alpha.abs().powf(p) + wb * beta.abs().powf(p);
    (num, den)
}

/// Unchecked ratio, for hot loops over points known to be admissible.
#[inline]
pub(crate) fn k_raw(params: &PowerWeightParams, alpha: f64, beta: f64) -> f64 {
    let (num, den) = k_parts(params, alpha, beta);
    num / den
}

/// `k(α, β)`, defined wherever its denominator is strictly positive.
///
/// Inside the admissible region `α < θ < β` the denominator is always
/// positive. The region may be extended (e.g. to `α = 0, β ∈ (0, θ]`) as
/// long as the denominator stays positive; otherwise the point is
/// rejected.
pub fn k_value(params: &PowerWeightParams, alpha: f64, beta: f64) -> Result<f64> {
    let (num, den) = k_parts(params, alpha, beta);
    if !(den > 0.0) || !num.is_finite() || !den.is_finite() {
        return Err(Error::NonpositiveDenominator(alpha, beta, den));
    }
    Ok(num / den)
}

/// `lim_{β→∞} k(α, β)`.
pub fn k_limit_beta_inf(params: &PowerWeightParams, alpha: f64) -> f64 {
    if params.p() > 1.0 {
        return 1.0;
    }
    let theta = params.theta();
    ((alpha - 1.0).abs() + theta - alpha) / (alpha.abs() + theta - alpha)
}

/// `lim_{α→−∞} k(α, β)`.
pub fn k_limit_alpha_minus_inf(params: &PowerWeightParams, beta: f64) -> f64 {
    if params.p() > 1.0 {
        return 1.0;
    }
    let theta = params.theta();
    ((beta - theta) + (beta - 1.0).abs()) / ((beta - theta) + beta.abs())
}

/// The value of `k` on the whole line `α = θ`, which does not depend on `β`.
pub fn k_at_theta(params: &PowerWeightParams) -> f64 {
    ((1.0 + params.a()).abs() / params.gap()).powf(params.p())
}

/// `sign(x) |x|^q`.
#[inline]
pub(crate) fn signed_pow(x: f64, q: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(q)
    }
}

/// Gradient of `k` with respect to `(α, β)`.
pub(crate) fn k_gradient(params: &PowerWeightParams, alpha: f64, beta: f64) -> (f64, f64) {
    let p = params.p();
    let theta = params.theta();
    let (num, den) = k_parts(params, alpha, beta);
    let k = num / den;
    let wa = beta - theta;
    let wb = theta - alpha;
    let dnum_da = wa * p * signed_pow(alpha - 1.0, p - 1.0) - (beta - 1.0).abs().powf(p);
    let dden_da = wa * p * signed_pow(alpha, p - 1.0) - beta.abs().powf(p);
    let dnum_db = (alpha - 1.0).abs().powf(p) + wb * p * signed_pow(beta - 1.0, p - 1.0);
    let dden_db = alpha.abs().powf(p) + wb * p * signed_pow(beta, p - 1.0);
    ((dnum_da - k * dden_da) / den, (dnum_db - k * dden_db) / den)
}
