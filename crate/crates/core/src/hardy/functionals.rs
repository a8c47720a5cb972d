use serde::Serialize;

use super::ops::hardy_h;
use super::piecewise::{Piece, PiecewiseLogPower, Term};
use super::quadrature::{Factor, LogIntegrand};
use crate::constants::PowerWeightParams;
use crate::error::{End, Error, Result};

/// How a weighted integral is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Integration {
    /// Closed form on single-monomial pieces, quadrature elsewhere.
    #[default]
    Auto,
    /// Quadrature on every piece.
    Quadrature,
}

/// `∫_lo^hi t^σ dt`.
fn power_integral(lo: f64, hi: f64, sigma: f64) -> Result<f64> {
    let s = sigma + 1.0;
    if lo == 0.0 && !(s > 0.0) {
        return Err(Error::DivergentIntegral {
            end: End::Zero,
            detail: format!("t^{sigma} is not integrable near 0"),
        });
    }
    if hi == f64::INFINITY && !(s < 0.0) {
        return Err(Error::DivergentIntegral {
            end: End::Infinity,
            detail: format!("t^{sigma} is not integrable at infinity"),
        });
    }
    Ok(if lo == 0.0 {
        hi.powf(s) / s
    } else if hi == f64::INFINITY {
        -lo.powf(s) / s
    } else if s == 0.0 {
        (hi / lo).ln()
    } else {
        lo.powf(s) * (s * (hi / lo).ln()).exp_m1() / s
    })
}

fn to_u(t: f64) -> f64 {
    if t == 0.0 {
        f64::NEG_INFINITY
    } else {
        t.ln()
    }
}

fn piece_lp(piece: &Piece, params: &PowerWeightParams, mode: Integration) -> Result<f64> {
    let p = params.p();
    let a = params.a();
    match (piece.terms.as_slice(), mode) {
        ([], _) => Ok(0.0),
        ([Term { c, e, m: 0 }], Integration::Auto) => {
            Ok(c.abs().powf(p) * power_integral(piece.lo, piece.hi, p * e + a)?)
        }
        (terms, _) => LogIntegrand {
            factors: vec![Factor { terms, power: p, signed: false }],
            weight: a + 1.0,
        }
        .integrate(to_u(piece.lo), to_u(piece.hi)),
    }
}

/// `∫₀^∞ |f(t)|^p t^a dt`.
pub fn weighted_lp(f: &PiecewiseLogPower, params: &PowerWeightParams) -> Result<f64> {
    weighted_lp_with(f, params, Integration::Auto)
}

pub fn weighted_lp_with(f: &PiecewiseLogPower, params: &PowerWeightParams, mode: Integration) -> Result<f64> {
    f.pieces().iter().map(|piece| piece_lp(piece, params, mode)).sum()
}

/// `∫₀^∞ |g|^{p−2} g · f · t^a dt`, the pairing in the integration by parts
/// identity for `g = Hf`.
pub fn weighted_pairing(g: &PiecewiseLogPower, f: &PiecewiseLogPower, params: &PowerWeightParams) -> Result<f64> {
    let p = params.p();
    let mut breaks = g.breaks();
    breaks.extend(f.breaks());
    let g = g.refine(&breaks);
    let f = f.refine(&breaks);
    let mut total = 0.0;
    for (pg, pf) in g.pieces().iter().zip(f.pieces()) {
        if pg.terms.is_empty() || pf.terms.is_empty() {
            continue;
        }
        let integrand = LogIntegrand {
            factors: vec![
                Factor { terms: &pg.terms, power: p - 1.0, signed: true },
                Factor { terms: &pf.terms, power: 1.0, signed: true },
            ],
            weight: params.a() + 1.0,
        };
        total += integrand.integrate(to_u(pg.lo), to_u(pg.hi))?;
    }
    Ok(total)
}

/// Outcome of one evaluation of the ratio `∫|Hf − f|^p t^a / ∫|f|^p t^a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioReport {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
    pub bound: f64,
    pub slack: f64,
}

impl RatioReport {
    pub fn new(numerator: f64, denominator: f64, bound: f64) -> Self {
        let ratio = numerator / denominator;
        RatioReport { numerator, denominator, ratio, bound, slack: bound - ratio }
    }

    /// `ratio ≤ bound·(1 + rel)`.
    pub fn within(&self, rel: f64) -> bool {
        self.ratio <= self.bound * (1.0 + rel)
    }
}

pub fn ratio_h_minus_i(f: &PiecewiseLogPower, params: &PowerWeightParams, bound: f64) -> Result<RatioReport> {
    let denominator = weighted_lp(f, params)?;
    if !(denominator > 0.0) {
        return Err(Error::Domain("ratio of the zero function".into()));
    }
    let diff = hardy_h(f)?.sub(f);
    let numerator = weighted_lp(&diff, params)?;
    Ok(RatioReport::new(numerator, denominator, bound))
}
