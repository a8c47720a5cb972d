use super::piecewise::{PiecewiseLogPower, Term};
use crate::constants::PowerWeightParams;
use crate::error::{Error, Result};

fn check_region(params: &PowerWeightParams, alpha: f64, beta: f64) -> Result<()> {
    let theta = params.theta();
    if !(alpha < theta && theta < beta) || !beta.is_finite() || !alpha.is_finite() {
        return Err(Error::Region {
            alpha,
            beta,
            reason: format!("need alpha < theta = {theta} < beta"),
        });
    }
    Ok(())
}

/// `β t^{β−1}` on `[0, 1)` and `α t^{α−1}` on `[1, ∞)`, whose average is
/// `t^{β−1}` then `t^{α−1}`.
pub fn extremal_f(params: &PowerWeightParams, alpha: f64, beta: f64) -> Result<PiecewiseLogPower> {
    check_region(params, alpha, beta)?;
    PiecewiseLogPower::from_breaks(
        &[0.0, 1.0, f64::INFINITY],
        vec![vec![Term::new(beta, beta - 1.0)], vec![Term::new(alpha, alpha - 1.0)]],
    )
}

/// The family comparing `H` with `H*`: the derivative of `t·f_{α,β}`-type
/// profiles with a spike of height `n(α − β)` on `[1 − 1/n, 1]`.
pub fn fn_family(params: &PowerWeightParams, alpha: f64, beta: f64, n: u64) -> Result<PiecewiseLogPower> {
    check_region(params, alpha, beta)?;
    if n < 2 {
        return Err(Error::Domain(format!("family index n = {n} must be at least 2")));
    }
    let n = n as f64;
    let left = Term::new(beta * (beta - 1.0), beta - 1.0);
    PiecewiseLogPower::from_breaks(
        &[0.0, 1.0 - 1.0 / n, 1.0, f64::INFINITY],
        vec![
            vec![left],
            vec![left, Term::new(n * (alpha - beta), 0.0)],
            vec![Term::new(alpha * (alpha - 1.0), alpha - 1.0)],
        ],
    )
}

/// Indicator of `[1, 1 + ε]`.
pub fn bump(eps: f64) -> Result<PiecewiseLogPower> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("bump width {eps} must be positive")));
    }
    PiecewiseLogPower::indicator(1.0, 1.0 + eps)
}

/// `β t^{β−1}` on `[0, 1)`, the family approaching equality in the weighted
/// Hardy inequality as `β → θ`.
pub fn hardy_probe(params: &PowerWeightParams, beta: f64) -> Result<PiecewiseLogPower> {
    if !(beta > params.theta()) {
        return Err(Error::Region { alpha: 0.0, beta, reason: "need beta > theta".into() });
    }
    PiecewiseLogPower::monomial_on(0.0, 1.0, beta, beta - 1.0)
}
