//! Bracketed root finding for the transcendental equations that pin down
//! the case-table constants.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{signed_pow, PowerWeightParams};
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 200;

const EXPANSION_LIMIT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootName {
    Alpha0,
    Beta0,
    Beta1,
    AlphaP,
    BetaStar,
}

impl RootName {
    pub const ALL: [RootName; 5] = [
        RootName::Alpha0,
        RootName::Beta0,
        RootName::Beta1,
        RootName::AlphaP,
        RootName::BetaStar,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RootName::Alpha0 => "alpha0",
            RootName::Beta0 => "beta0",
            RootName::Beta1 => "beta1",
            RootName::AlphaP => "alpha_p",
            RootName::BetaStar => "beta_star",
        }
    }
}

impl fmt::Display for RootName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RootName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RootName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown root name {s:?}")))
    }
}

/// One of the case equations together with a bracket known to contain its
/// root.
#[derive(Debug, Clone, Copy)]
pub struct RootSpec {
    pub name: RootName,
    pub params: PowerWeightParams,
    pub bracket: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootOutcome {
    pub root: f64,
    pub residual: f64,
    pub iterations: usize,
    /// Final bracket.
    pub bracket: (f64, f64),
}

impl RootSpec {
    /// The root problem with its natural bracket. Brackets that are unbounded in
    /// theory are expanded geometrically until the residual changes sign.
    pub fn with_default_bracket(name: RootName, params: PowerWeightParams) -> Result<Self> {
        let theta = params.theta();
        let bracket = match name {
            RootName::Alpha0 => (0.0, theta),
            RootName::Beta0 => (theta, 1.0),
            RootName::BetaStar => (0.5, 1.0),
            RootName::Beta1 => {
                let spec = RootSpec { name, params, bracket: (1.0, 2.0) };
                let f_lo = spec.residual(1.0);
                let mut hi = 2.0;
                let mut n = 0;
                while spec.residual(hi).signum() == f_lo.signum() {
                    n += 1;
                    if n > EXPANSION_LIMIT {
                        return Err(Error::NoSignChange {
                            name: name.to_string(),
                            lo: 1.0,
                            hi,
                            f_lo,
                            f_hi: spec.residual(hi),
                        });
                    }
                    hi *= 2.0;
                }
                (1.0, hi)
            }
            RootName::AlphaP => {
                let spec = RootSpec { name, params, bracket: (-1.0, 0.0) };
                let f_hi = spec.residual(0.0);
                let mut lo = -1.0;
                let mut n = 0;
                while spec.residual(lo).signum() == f_hi.signum() {
                    n += 1;
                    if n > EXPANSION_LIMIT {
                        return Err(Error::NoSignChange {
                            name: name.to_string(),
                            lo,
                            hi: 0.0,
                            f_lo: spec.residual(lo),
                            f_hi,
                        });
                    }
                    lo *= 2.0;
                }
                (lo, 0.0)
            }
        };
        Ok(RootSpec { name, params, bracket })
    }

    pub fn residual(&self, x: f64) -> f64 {
        let p = self.params.p();
        let a = self.params.a();
        let c = self.params.gap();
        match self.name {
            RootName::Alpha0 => -(p - 1.0) * (1.0 - x) + 1.0 + a - (1.0 + a) * x.powf(p - 1.0),
            RootName::Beta0 => -c * (1.0 - x).powf(p - 1.0) - (p - 1.0) * x + c,
            // Zero of the derivative factor of k(0, ·) on (1, ∞).
            RootName::Beta1 => c - (p - 1.0) * x + c * signed_pow(x - 1.0, p - 1.0),
            RootName::AlphaP => (p - 1.0) * x + 2.0 - p - signed_pow(x, p - 1.0),
            RootName::BetaStar => {
                let w = 1.0 - x;
                -(p - 1.0) * w.powf(p) + p * w.powf(p - 1.0) + (p - 1.0) * x.powf(p) - 1.0
            }
        }
    }

    /// Magnitude of the individual terms of the residual at `x`, used to
    /// judge whether a residual is small.
    pub fn residual_scale(&self, x: f64) -> f64 {
        let p = self.params.p();
        let a = self.params.a();
        let c = self.params.gap();
        match self.name {
            RootName::Alpha0 => {
                (p - 1.0) * (1.0 - x).abs() + (1.0 + a).abs() * (1.0 + x.abs().powf(p - 1.0))
            }
            RootName::Beta0 => c * (1.0 + (1.0 - x).abs().powf(p - 1.0)) + (p - 1.0) * x.abs(),
            RootName::Beta1 => c * (1.0 + (x - 1.0).abs().powf(p - 1.0)) + (p - 1.0) * x.abs(),
            RootName::AlphaP => (p - 1.0) * x.abs() + (p - 2.0).abs() + x.abs().powf(p - 1.0),
            RootName::BetaStar => {
                let w = (1.0 - x).abs();
                (p - 1.0) * w.powf(p) + p * w.powf(p - 1.0) + (p - 1.0) * x.abs().powf(p) + 1.0
            }
        }
    }

    pub fn solve(&self, tol: f64) -> Result<RootOutcome> {
        let name = self.name.to_string();
        solve_bracketed(&name, |x| self.residual(x), self.bracket, tol, DEFAULT_MAX_ITER)
    }
}

/// Illinois-modified regula falsi with a bisection safeguard.
///
/// The bracket always contains a sign change and its width shrinks on every
/// iteration. Stops once the width is at most `tol` or an exact zero is hit.
pub fn solve_bracketed<F>(
    name: &str,
    f: F,
    bracket: (f64, f64),
    tol: f64,
    max_iter: usize,
) -> Result<RootOutcome>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = if bracket.0 <= bracket.1 {
        bracket
    } else {
        (bracket.1, bracket.0)
    };
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(RootOutcome { root: lo, residual: 0.0, iterations: 0, bracket: (lo, hi) });
    }
    if f_hi == 0.0 {
        return Ok(RootOutcome { root: hi, residual: 0.0, iterations: 0, bracket: (lo, hi) });
    }
    if !(f_lo.signum() != f_hi.signum()) || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { name: name.to_string(), lo, hi, f_lo, f_hi });
    }
    // Scaled copies used for the Illinois step; the true values decide signs.
    let (mut g_lo, mut g_hi) = (f_lo, f_hi);
    let mut last_side = 0i8;
    let mut width_two_ago = f64::INFINITY;
    let mut width_prev = hi - lo;

    for iteration in 1..=max_iter {
        let width = hi - lo;
        if width <= tol {
            return Ok(finish(lo, hi, f_lo, f_hi, iteration - 1));
        }
        let mid = 0.5 * (lo + hi);
        let force_bisect = width > 0.5 * width_two_ago;
        let mut x = if force_bisect {
            mid
        } else {
            (lo * g_hi - hi * g_lo) / (g_hi - g_lo)
        };
        if !(x > lo && x < hi) {
            x = mid;
        }
        if !(x > lo && x < hi) {
            // lo and hi are adjacent floats
            return Ok(finish(lo, hi, f_lo, f_hi, iteration - 1));
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(RootOutcome { root: x, residual: 0.0, iterations: iteration, bracket: (x, x) });
        }
        if fx.is_nan() {
            return Err(Error::NoSignChange { name: name.to_string(), lo, hi: x, f_lo, f_hi: fx });
        }
        if fx.signum() == f_hi.signum() {
            hi = x;
            f_hi = fx;
            g_hi = fx;
            if last_side == 1 {
                g_lo *= 0.5;
            }
            last_side = 1;
        } else {
            lo = x;
            f_lo = fx;
            g_lo = fx;
            if last_side == -1 {
                g_hi *= 0.5;
            }
            last_side = -1;
        }
        if force_bisect {
            g_lo = f_lo;
            g_hi = f_hi;
        }
        width_two_ago = width_prev;
        width_prev = hi - lo;
    }
    if hi - lo <= tol {
        return Ok(finish(lo, hi, f_lo, f_hi, max_iter));
    }
    Err(Error::MaxIterations { name: name.to_string(), iterations: max_iter, lo, hi })
}

fn finish(lo: f64, hi: f64, f_lo: f64, f_hi: f64, iterations: usize) -> RootOutcome {
    let (root, residual) = if f_lo.abs() <= f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    RootOutcome { root, residual, iterations, bracket: (lo, hi) }
}

/// Solve the named equation on its default bracket with default tolerance.
pub fn find_root(name: RootName, params: PowerWeightParams) -> Result<RootOutcome> {
    RootSpec::with_default_bracket(name, params)?.solve(DEFAULT_TOL)
}

/// The transition pair `(β*, a*)` for `p > 2`, where the positive-class
/// constant switches from 1 to the decreasing-class constant.
pub fn transition_params(p: f64) -> Result<(f64, f64)> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(Error::Domain(format!("transition parameters need p > 2 (got p = {p})")));
    }
    let params = PowerWeightParams::new(p, 0.0)?;
    let beta_star = find_root(RootName::BetaStar, params)?.root;
    let a_star = p - 1.0 - 1.0 / ((1.0 - beta_star).powf(p - 1.0) + beta_star.powf(p - 1.0));
    Ok((beta_star, a_star))
}

/// `a*(p)`, extended by `a*(2) = 0`.
pub fn a_star(p: f64) -> Result<f64> {
    if p == 2.0 {
        return Ok(0.0);
    }
    transition_params(p).map(|(_, a)| a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(p: f64, a: f64) -> PowerWeightParams {
        PowerWeightParams::new(p, a).unwrap()
    }

    fn check_residual(out: &RootOutcome, spec: &RootSpec) {
        assert!(out.residual.abs() < 1e-12 * spec.residual_scale(out.root).max(1.0));
        assert!(out.bracket.1 - out.bracket.0 <= DEFAULT_TOL);
    }

    #[test]
    fn alpha0_example() {
        let pr = params(1.5, -0.3);
        let spec = RootSpec::with_default_bracket(RootName::Alpha0, pr).unwrap();
        let out = spec.solve(DEFAULT_TOL).unwrap();
        assert_relative_eq!(out.root, 0.16, epsilon = 1e-12);
        check_residual(&out, &spec);
    }

    #[test]
    fn beta0_example() {
        let pr = params(3.0, 0.5);
        let out = find_root(RootName::Beta0, pr).unwrap();
        assert_relative_eq!(out.root, 2.0 / 3.0, epsilon = 1e-12);
    }

    #[test]
    fn beta1_example() {
        // Squaring the derivative condition gives β² − 15β + 18 = 0; the sign
        // condition keeps the larger root.
        let pr = params(1.5, -1.0);
        let spec = RootSpec::with_default_bracket(RootName::Beta1, pr).unwrap();
        let out = spec.solve(DEFAULT_TOL).unwrap();
        let expected = (15.0 + 153f64.sqrt()) / 2.0;
        assert_relative_eq!(out.root, expected, epsilon = 1e-11);
        check_residual(&out, &spec);
        // the other root of the squared equation is not a root here
        let spurious = (15.0 - 153f64.sqrt()) / 2.0;
        assert!(spec.residual(spurious).abs() > 0.1);
    }

    #[test]
    fn alpha_p_example() {
        let pr = params(4.0, 0.0);
        let spec = RootSpec { name: RootName::AlphaP, params: pr, bracket: (-10.0, 0.0) };
        let out = spec.solve(DEFAULT_TOL).unwrap();
        assert_relative_eq!(out.root, -2.0, epsilon = 1e-12);
        let out = find_root(RootName::AlphaP, pr).unwrap();
        assert_relative_eq!(out.root, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn transition_at_three() {
        let (beta_star, a_star) = transition_params(3.0).unwrap();
        assert_relative_eq!(beta_star, 0.75, epsilon = 1e-12);
        assert_relative_eq!(a_star, 0.4, epsilon = 1e-12);
    }

    #[test]
    fn transition_at_four_in_range() {
        let (beta_star, a_star) = transition_params(4.0).unwrap();
        assert!(beta_star > 0.5 && beta_star < 1.0);
        assert!(a_star > 0.0 && a_star < 4f64.powf(2.0 / 3.0) - 1.0);
    }

    #[test]
    fn transition_rejects_low_p() {
        assert!(matches!(transition_params(2.0), Err(Error::Domain(_))));
        assert!(matches!(transition_params(1.5), Err(Error::Domain(_))));
        assert_eq!(a_star(2.0).unwrap(), 0.0);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = solve_bracketed("sq", |x| x * x + 1.0, (-1.0, 1.0), 1e-12, 50).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn max_iterations_reports_bracket() {
        let err = solve_bracketed("slow", |x| x * x * x - 0.3, (0.0, 1.0), 0.0, 3).unwrap_err();
        match err {
            Error::MaxIterations { lo, hi, .. } => assert!(lo.powi(3) < 0.3 && hi.powi(3) > 0.3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn steep_endpoint_derivative() {
        // |x|^{0.2} has an unbounded derivative at its root
        let out = solve_bracketed("steep", |x| x.signum() * x.abs().powf(0.2) - 0.5, (-1.0, 1.0), 1e-13, 200)
            .unwrap();
        assert_relative_eq!(out.root, 0.5f64.powf(5.0), epsilon = 1e-12);
    }

    #[test]
    fn name_roundtrip() {
        for n in RootName::ALL {
            assert_eq!(n.as_str().parse::<RootName>().unwrap(), n);
        }
    }
}
