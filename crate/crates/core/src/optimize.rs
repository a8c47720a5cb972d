//! Numerical suprema of `k` over the admissible region of each function
//! class.
//!
//! Two independent searches are available. The structured search scans the
//! edges `β = 1` and `α = 0`, where the extremal points of the closed-form
//! rows live, using the sign of the derivative factor along each edge. The
//! generic search compactifies the region onto the unit square, evaluates a
//! dense grid, and refines the best local maxima.

use rayon::prelude::*;
use serde::Serialize;

use crate::constants::{
    k_at_theta, k_gradient, k_limit_alpha_minus_inf, k_limit_beta_inf, k_raw, signed_pow,
    FunctionClass, PowerWeightParams,
};
use crate::error::{Error, Result};
use crate::roots::solve_bracketed;

/// Relative margin within which a maximum is identified with the value on
/// the line `α = θ`.
const THETA_TIE: f64 = 1e-10;

/// Where a supremum is attained, or along which limit it is approached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Argmax {
    Point { alpha: f64, beta: f64 },
    BetaToInf { alpha: f64 },
    AlphaToTheta { beta: f64 },
    BetaToTheta { alpha: f64 },
    AlphaToMinusInf { beta: f64 },
}

impl Argmax {
    /// The finite `α` coordinate, if there is one.
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            Argmax::Point { alpha, .. } | Argmax::BetaToInf { alpha } | Argmax::BetaToTheta { alpha } => {
                Some(alpha).filter(|a| a.is_finite())
            }
            _ => None,
        }
    }

    pub fn beta(&self) -> Option<f64> {
        match *self {
            Argmax::Point { beta, .. } | Argmax::AlphaToTheta { beta } | Argmax::AlphaToMinusInf { beta } => {
                Some(beta).filter(|b| b.is_finite())
            }
            _ => None,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Argmax::Point { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Argmax::Point { .. } => "point",
            Argmax::BetaToInf { .. } => "beta_to_inf",
            Argmax::AlphaToTheta { .. } => "alpha_to_theta",
            Argmax::BetaToTheta { .. } => "beta_to_theta",
            Argmax::AlphaToMinusInf { .. } => "alpha_to_minus_inf",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupMethod {
    Structured1d,
    Generic2d,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupResult {
    pub value: f64,
    pub argmax: Argmax,
    pub method: SupMethod,
}

#[derive(Debug, Clone, Copy)]
pub struct SupOptions {
    /// Points per axis of the compactified grid.
    pub grid: usize,
    /// Number of grid local maxima refined.
    pub starts: usize,
    /// Maximum allowed disagreement between the two searches.
    pub agreement_tol: f64,
    /// Run the structured search where it applies.
    pub structured: bool,
}

impl Default for SupOptions {
    fn default() -> Self {
        SupOptions { grid: 256, starts: 5, agreement_tol: 1e-7, structured: true }
    }
}

/// A segment of one of the two distinguished edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Edge {
    /// `β = 1` with `α ∈ [lo, hi]`; `lo` may be `−∞`.
    AlphaAxis { lo: f64, hi: f64 },
    /// `α = 0` with `β ∈ [lo, hi]`; `hi` may be `+∞`.
    BetaAxis { lo: f64, hi: f64 },
}

impl Edge {
    /// `β = 1`, `α ∈ [lo, θ]`.
    pub fn alpha_axis(params: &PowerWeightParams, lo: f64) -> Edge {
        Edge::AlphaAxis { lo, hi: params.theta() }
    }

    /// `α = 0`, `β ∈ [θ, hi]`.
    pub fn beta_axis(params: &PowerWeightParams, hi: f64) -> Edge {
        Edge::BetaAxis { lo: params.theta(), hi }
    }

    fn range(&self) -> (f64, f64) {
        match *self {
            Edge::AlphaAxis { lo, hi } | Edge::BetaAxis { lo, hi } => (lo, hi),
        }
    }
}

fn edge_value(params: &PowerWeightParams, edge: &Edge, x: f64) -> f64 {
    let theta = params.theta();
    match edge {
        Edge::AlphaAxis { .. } => {
            if x == f64::NEG_INFINITY {
                k_limit_alpha_minus_inf(params, 1.0)
            } else if x >= theta {
                k_at_theta(params)
            } else {
                k_raw(params, x, 1.0)
            }
        }
        Edge::BetaAxis { .. } => {
            if x == f64::INFINITY {
                k_limit_beta_inf(params, 0.0)
            } else if x == theta {
                k_at_theta(params)
            } else {
                k_raw(params, 0.0, x)
            }
        }
    }
}

/// Factor with the sign of the derivative of `k` along the edge.
fn edge_slope_sign(params: &PowerWeightParams, edge: &Edge, x: f64) -> f64 {
    let p = params.p();
    let a = params.a();
    let c = params.gap();
    match edge {
        Edge::AlphaAxis { .. } => {
            (1.0 + a) * (-(1.0 + a) * signed_pow(x, p - 1.0) + (1.0 + a) + (p - 1.0) * (x - 1.0))
        }
        Edge::BetaAxis { .. } => c - (p - 1.0) * x + c * signed_pow(x - 1.0, p - 1.0),
    }
}

fn edge_argmax(params: &PowerWeightParams, edge: &Edge, x: f64) -> Argmax {
    let theta = params.theta();
    match edge {
        Edge::AlphaAxis { .. } => {
            if x == f64::NEG_INFINITY {
                Argmax::AlphaToMinusInf { beta: 1.0 }
            } else if x >= theta {
                Argmax::AlphaToTheta { beta: 1.0 }
            } else {
                Argmax::Point { alpha: x, beta: 1.0 }
            }
        }
        Edge::BetaAxis { .. } => {
            if x == f64::INFINITY {
                Argmax::BetaToInf { alpha: 0.0 }
            } else if x == theta {
                Argmax::BetaToTheta { alpha: 0.0 }
            } else {
                Argmax::Point { alpha: 0.0, beta: x }
            }
        }
    }
}

/// Parameter `t ∈ [0, 1]` to a point of `[lo, hi]`, compactifying an
/// infinite end.
fn edge_point(lo: f64, hi: f64, t: f64) -> f64 {
    if lo == f64::NEG_INFINITY {
        if t <= 0.0 {
            f64::NEG_INFINITY
        } else {
            hi - (1.0 - t) / t
        }
    } else if hi == f64::INFINITY {
        if t >= 1.0 {
            f64::INFINITY
        } else {
            lo + t / (1.0 - t)
        }
    } else {
        lo + t * (hi - lo)
    }
}

const EDGE_SAMPLES: usize = 512;
const TAIL_DOUBLINGS: usize = 60;

/// Maximize `k` along one edge from the sign changes of its derivative
/// factor, the endpoints, and the limits at infinite ends.
pub fn sup_k_boundary_scan(params: &PowerWeightParams, edge: Edge) -> Result<SupResult> {
    let (lo, hi) = edge.range();
    if !(lo < hi) {
        return Err(Error::Domain(format!("empty edge range [{lo}, {hi}]")));
    }
    if let Edge::AlphaAxis { hi, .. } = edge {
        if hi > params.theta() || params.theta() >= 1.0 {
            return Err(Error::Region {
                alpha: hi,
                beta: 1.0,
                reason: "alpha axis needs alpha <= theta < 1".into(),
            });
        }
    }
    if let Edge::BetaAxis { lo, .. } = edge {
        if lo <= 0.0 {
            return Err(Error::Region { alpha: 0.0, beta: lo, reason: "beta axis needs beta > 0".into() });
        }
    }
    let mut xs: Vec<f64> = (0..=EDGE_SAMPLES)
        .map(|i| edge_point(lo, hi, i as f64 / EDGE_SAMPLES as f64))
        .collect();
    // geometric extension towards an infinite end, far past the uniform samples
    if hi == f64::INFINITY {
        let last = xs[EDGE_SAMPLES - 1];
        let tail: Vec<f64> = (1..=TAIL_DOUBLINGS).map(|k| last * 2f64.powi(k as i32)).collect();
        xs.splice(EDGE_SAMPLES..EDGE_SAMPLES, tail);
    }
    if lo == f64::NEG_INFINITY {
        let first = xs[1];
        let mut tail: Vec<f64> = (1..=TAIL_DOUBLINGS).map(|k| first * 2f64.powi(k as i32)).collect();
        tail.reverse();
        xs.splice(1..1, tail);
    }
    let mut candidates: Vec<f64> = xs.clone();
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if !x0.is_finite() || !x1.is_finite() {
            continue;
        }
        let s0 = edge_slope_sign(params, &edge, x0);
        let s1 = edge_slope_sign(params, &edge, x1);
        if s0 > 0.0 && s1 < 0.0 {
            let out = solve_bracketed("edge slope", |x| edge_slope_sign(params, &edge, x), (x0, x1), 1e-15, 300)?;
            candidates.extend([out.root, out.bracket.0, out.bracket.1]);
        }
    }
    let mut best = (f64::NEG_INFINITY, lo);
    for x in candidates {
        let v = edge_value(params, &edge, x);
        // ties with a limit value go to the limit
        if v > best.0 || (v == best.0 && !x.is_finite()) {
            best = (v, x);
        }
    }
    Ok(SupResult {
        value: best.0,
        argmax: edge_argmax(params, &edge, best.1),
        method: SupMethod::Structured1d,
    })
}

/// Whether the structured edge search covers the supremum for this class.
pub fn structured_applies(params: &PowerWeightParams, class: FunctionClass) -> bool {
    let p = params.p();
    let a = params.a();
    match class {
        FunctionClass::DecreasingA => true,
        FunctionClass::PositiveB => p == 1.0 || p >= 2.0 || a <= p - 2.0,
        FunctionClass::GeneralC => p == 1.0 || a == 0.0,
    }
}

fn structured_sup(params: &PowerWeightParams, class: FunctionClass) -> Result<SupResult> {
    let theta = params.theta();
    let mut edges = Vec::new();
    match class {
        FunctionClass::DecreasingA => {
            edges.push(Edge::alpha_axis(params, 0.0));
            edges.push(Edge::beta_axis(params, 1.0));
        }
        FunctionClass::PositiveB => {
            if theta < 1.0 {
                edges.push(Edge::alpha_axis(params, 0.0));
            }
            edges.push(Edge::beta_axis(params, f64::INFINITY));
        }
        FunctionClass::GeneralC => {
            if theta < 1.0 {
                edges.push(Edge::alpha_axis(params, f64::NEG_INFINITY));
            }
            edges.push(Edge::beta_axis(params, f64::INFINITY));
        }
    }
    let mut best: Option<SupResult> = None;
    for edge in edges {
        let r = sup_k_boundary_scan(params, edge)?;
        if best.is_none_or(|b| r.value > b.value) {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one edge"))
}

/// `(s / (1 − s))²`: fine near `s = 0`, reaching `~n²` on an `n`-point grid.
fn stretch(s: f64) -> f64 {
    let r = s / (1.0 - s);
    r * r
}

/// Compactification of a class region onto `[0, 1]²`.
///
/// `u = 0` is the line `α = θ`, `v = 0` the line `β = θ`. `u = 1` is
/// `α = 0` for the nonnegative classes and `α = −∞` otherwise; `v = 1` is
/// `β = 1` for the decreasing class and `β = +∞` otherwise.
#[derive(Debug, Clone, Copy)]
struct Chart {
    params: PowerWeightParams,
    class: FunctionClass,
}

impl Chart {
    fn alpha(&self, u: f64) -> f64 {
        let theta = self.params.theta();
        match self.class {
            FunctionClass::GeneralC => {
                if u >= 1.0 {
                    f64::NEG_INFINITY
                } else {
                    theta - stretch(u)
                }
            }
            _ => theta * (1.0 - u),
        }
    }

    fn beta(&self, v: f64) -> f64 {
        let theta = self.params.theta();
        match self.class {
            FunctionClass::DecreasingA => theta + (1.0 - theta) * v,
            _ => {
                if v >= 1.0 {
                    f64::INFINITY
                } else {
                    theta + stretch(v)
                }
            }
        }
    }

    fn value(&self, u: f64, v: f64) -> f64 {
        if u <= 0.0 || v <= 0.0 {
            return k_at_theta(&self.params);
        }
        let alpha = self.alpha(u);
        let beta = self.beta(v);
        match (alpha.is_finite(), beta.is_finite()) {
            (true, true) => k_raw(&self.params, alpha, beta),
            (true, false) => k_limit_beta_inf(&self.params, alpha),
            (false, true) => k_limit_alpha_minus_inf(&self.params, beta),
            (false, false) => 1.0,
        }
    }

    fn argmax(&self, u: f64, v: f64) -> Argmax {
        let alpha = self.alpha(u);
        let beta = self.beta(v);
        if u <= 0.0 {
            Argmax::AlphaToTheta { beta }
        } else if v <= 0.0 {
            Argmax::BetaToTheta { alpha }
        } else if !beta.is_finite() {
            Argmax::BetaToInf { alpha }
        } else if !alpha.is_finite() {
            Argmax::AlphaToMinusInf { beta }
        } else {
            Argmax::Point { alpha, beta }
        }
    }
}

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Maximize a unimodal-ish function on `[lo, hi]`; endpoints are candidates.
fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = a + GOLDEN * (b - a);
    let mut x2 = b - GOLDEN * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut guard = 0;
    while b - a > tol && guard < 200 {
        guard += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

fn refine(chart: &Chart, u0: f64, v0: f64, h: f64) -> (f64, f64, f64) {
    let (mut u, mut v) = (u0, v0);
    let mut fval = chart.value(u, v);
    let mut hu = h;
    let mut hv = h;
    for _ in 0..60 {
        let (nu, fu) = golden_max(|x| chart.value(x, v), (u - hu).max(0.0), (u + hu).min(1.0), 1e-15);
        let mu = (nu - u).abs();
        if fu >= fval {
            u = nu;
            fval = fu;
        }
        let (nv, fv) = golden_max(|y| chart.value(u, y), (v - hv).max(0.0), (v + hv).min(1.0), 1e-15);
        let mv = (nv - v).abs();
        if fv >= fval {
            v = nv;
            fval = fv;
        }
        hu = (4.0 * mu).max(1e-9).min(h);
        hv = (4.0 * mv).max(1e-9).min(h);
        if mu < 1e-15 && mv < 1e-15 {
            break;
        }
    }
    (u, v, fval)
}

/// Projected Newton steps on `k` in `(α, β)` for a finite maximizer.
///
/// Coordinates sitting on a finite region boundary stay fixed.
fn newton_polish(
    params: &PowerWeightParams,
    class: FunctionClass,
    alpha: f64,
    beta: f64,
) -> (f64, f64, f64) {
    let theta = params.theta();
    let alpha_min = match class {
        FunctionClass::GeneralC => f64::NEG_INFINITY,
        _ => 0.0,
    };
    let beta_max = match class {
        FunctionClass::DecreasingA => 1.0,
        _ => f64::INFINITY,
    };
    let free_alpha = alpha > alpha_min && alpha < theta;
    let free_beta = beta < beta_max && beta > theta;
    let (mut x, mut y) = (alpha, beta);
    let mut best = k_raw(params, x, y);
    if !free_alpha && !free_beta {
        return (x, y, best);
    }
    for _ in 0..30 {
        let (ga, gb) = k_gradient(params, x, y);
        let hx = 1e-6 * x.abs().max(1e-3);
        let hy = 1e-6 * y.abs().max(1e-3);
        let (gxa, gxb) = {
            let (p1, q1) = k_gradient(params, x + hx, y);
            let (p0, q0) = k_gradient(params, x - hx, y);
            ((p1 - p0) / (2.0 * hx), (q1 - q0) / (2.0 * hx))
        };
        let (gya, gyb) = {
            let (p1, q1) = k_gradient(params, x, y + hy);
            let (p0, q0) = k_gradient(params, x, y - hy);
            ((p1 - p0) / (2.0 * hy), (q1 - q0) / (2.0 * hy))
        };
        let haa = gxa;
        let hbb = gyb;
        let hab = 0.5 * (gxb + gya);
        let (dx, dy) = if free_alpha && free_beta {
            let det = haa * hbb - hab * hab;
            if !(haa < 0.0 && det > 0.0) {
                break;
            }
            ((-hbb * ga + hab * gb) / det, (hab * ga - haa * gb) / det)
        } else if free_alpha {
            if !(haa < 0.0) {
                break;
            }
            (-ga / haa, 0.0)
        } else {
            if !(hbb < 0.0) {
                break;
            }
            (0.0, -gb / hbb)
        };
        let nx = x + dx;
        let ny = y + dy;
        if !(nx < theta && nx > alpha_min && ny > theta && ny < beta_max) {
            break;
        }
        let nv = k_raw(params, nx, ny);
        let (na, nb) = k_gradient(params, nx, ny);
        let grad_now = ga.abs() * free_alpha as u8 as f64 + gb.abs() * free_beta as u8 as f64;
        let grad_next = na.abs() * free_alpha as u8 as f64 + nb.abs() * free_beta as u8 as f64;
        if !(nv >= best || (nv >= best - 4.0 * f64::EPSILON * best.abs() && grad_next < grad_now)) {
            break;
        }
        let moved = (dx.abs() + dy.abs()) / (x.abs() + y.abs() + 1.0);
        x = nx;
        y = ny;
        best = nv;
        if moved < 1e-15 {
            break;
        }
    }
    (x, y, best)
}

fn generic_sup(params: &PowerWeightParams, class: FunctionClass, opts: &SupOptions) -> SupResult {
    let chart = Chart { params: *params, class };
    let n = opts.grid.max(8);
    let step = 1.0 / (n - 1) as f64;
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            chart.value(i as f64 * step, j as f64 * step)
        })
        .collect();
    let at = |i: usize, j: usize| values[i * n + j];
    let mut maxima: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let v = at(i, j);
            if !v.is_finite() {
                continue;
            }
            let mut is_max = true;
            'nb: for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (ni, nj) = (i as i64 + di, j as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                        continue;
                    }
                    if at(ni as usize, nj as usize) > v {
                        is_max = false;
                        break 'nb;
                    }
                }
            }
            if is_max {
                maxima.push((v, i, j));
            }
        }
    }
    maxima.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    maxima.truncate(opts.starts.max(1));

    let mut best: Option<(f64, Argmax)> = None;
    let mut consider = |value: f64, argmax: Argmax| {
        if value.is_finite() && best.is_none_or(|b| value > b.0) {
            best = Some((value, argmax));
        }
    };
    for &(v, i, j) in &maxima {
        consider(v, chart.argmax(i as f64 * step, j as f64 * step));
        let (u, w, fv) = refine(&chart, i as f64 * step, j as f64 * step, step);
        let argmax = chart.argmax(u, w);
        if let Argmax::Point { alpha, beta } = argmax {
            let (pa, pb, pv) = newton_polish(params, class, alpha, beta);
            if pv >= fv - 4.0 * f64::EPSILON * fv.abs() {
                consider(pv.max(fv), Argmax::Point { alpha: pa, beta: pb });
            } else {
                consider(fv, argmax);
            }
        } else {
            consider(fv, argmax);
        }
    }
    // Limit candidates that are not attained on the grid interior.
    let (value, argmax) = best.expect("grid has finite values");
    // A best value matching the constant on α = θ is the θ-limit, even if
    // the refinement stopped at a nearby point.
    let on_theta = k_at_theta(params);
    if value <= on_theta * (1.0 + THETA_TIE) {
        let beta = argmax.beta().filter(|b| *b > params.theta()).unwrap_or(chart.beta(0.5));
        return SupResult { value: on_theta, argmax: Argmax::AlphaToTheta { beta }, method: SupMethod::Generic2d };
    }
    SupResult { value, argmax, method: SupMethod::Generic2d }
}

/// Supremum of `k` over the region of `class`.
///
/// Where the structured edge search applies, both searches run and must
/// agree to `opts.agreement_tol` relative; the structured result is
/// returned.
pub fn sup_k(params: &PowerWeightParams, class: FunctionClass, opts: &SupOptions) -> Result<SupResult> {
    class.check(params)?;
    let generic = generic_sup(params, class, opts);
    if !(opts.structured && structured_applies(params, class)) {
        return Ok(generic);
    }
    let structured = structured_sup(params, class)?;
    let scale = structured.value.abs().max(1.0);
    if (structured.value - generic.value).abs() > opts.agreement_tol * scale {
        return Err(Error::SupremumNotResolved { structured: structured.value, generic: generic.value });
    }
    Ok(structured)
}

/// The generic grid search alone.
pub fn sup_k_generic(params: &PowerWeightParams, class: FunctionClass, opts: &SupOptions) -> Result<SupResult> {
    class.check(params)?;
    Ok(generic_sup(params, class, opts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::k_value;
    use approx::assert_relative_eq;

    fn params(p: f64, a: f64) -> PowerWeightParams {
        PowerWeightParams::new(p, a).unwrap()
    }

    #[test]
    fn decreasing_p3_a0() {
        let r = sup_k(&params(3.0, 0.0), FunctionClass::DecreasingA, &SupOptions::default()).unwrap();
        assert_relative_eq!(r.value, 0.5, max_relative = 1e-12);
        assert_eq!(r.argmax, Argmax::Point { alpha: 0.0, beta: 1.0 });
    }

    #[test]
    fn decreasing_p3_a_half() {
        let r = sup_k(&params(3.0, 0.5), FunctionClass::DecreasingA, &SupOptions::default()).unwrap();
        assert_relative_eq!(r.value, 1.25, max_relative = 1e-12);
        match r.argmax {
            Argmax::Point { alpha, beta } => {
                assert_eq!(alpha, 0.0);
                assert_relative_eq!(beta, 2.0 / 3.0, epsilon = 1e-9);
            }
            other => panic!("unexpected argmax {other:?}"),
        }
    }

    #[test]
    fn general_p2_a0() {
        let r = sup_k(&params(2.0, 0.0), FunctionClass::GeneralC, &SupOptions::default()).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn positive_p3_a0_is_a_limit() {
        let r = sup_k(&params(3.0, 0.0), FunctionClass::PositiveB, &SupOptions::default()).unwrap();
        assert_relative_eq!(r.value, 1.0, max_relative = 1e-12);
        assert!(matches!(r.argmax, Argmax::BetaToInf { .. }));
    }

    #[test]
    fn alpha_axis_scan() {
        let pr = params(1.5, -0.3);
        let r = sup_k_boundary_scan(&pr, Edge::alpha_axis(&pr, 0.0)).unwrap();
        assert_relative_eq!(r.value, 0.891056, epsilon = 1e-5);
        assert_relative_eq!(r.argmax.alpha().unwrap(), 0.16, epsilon = 1e-9);
    }

    #[test]
    fn beta_axis_scans() {
        let pr = params(3.0, 0.5);
        let r = sup_k_boundary_scan(&pr, Edge::BetaAxis { lo: 1e-3, hi: 1.0 }).unwrap();
        assert_relative_eq!(r.value, 1.25, epsilon = 1e-12);
        assert_relative_eq!(r.argmax.beta().unwrap(), 2.0 / 3.0, epsilon = 1e-9);

        let pr = params(1.5, -1.0);
        let r = sup_k_boundary_scan(&pr, Edge::beta_axis(&pr, f64::INFINITY)).unwrap();
        assert_relative_eq!(r.argmax.beta().unwrap(), (15.0 + 153f64.sqrt()) / 2.0, epsilon = 1e-8);
        assert_relative_eq!(r.value, 1.1429850280746376, max_relative = 1e-12);
    }

    #[test]
    fn finite_argmax_reproduces_value() {
        let pr = params(1.5, -0.4);
        let r = sup_k(&pr, FunctionClass::GeneralC, &SupOptions::default()).unwrap();
        if let Argmax::Point { alpha, beta } = r.argmax {
            assert!((k_value(&pr, alpha, beta).unwrap() - r.value).abs() < 1e-10);
        }
        assert!(r.value >= k_value(&pr, 0.0, 5.7).unwrap());
    }

    #[test]
    fn interior_maximizer_is_stationary() {
        let pr = params(1.5, -0.4);
        let r = sup_k(&pr, FunctionClass::PositiveB, &SupOptions::default()).unwrap();
        let Argmax::Point { alpha, beta } = r.argmax else {
            panic!("expected an interior point, got {:?}", r.argmax)
        };
        assert!(alpha > 0.0 && beta > 1.0);
        let (ga, gb) = k_gradient(&pr, alpha, beta);
        assert!(ga.abs() < 1e-9 && gb.abs() < 1e-9, "gradient ({ga}, {gb})");
        assert_relative_eq!(r.value, 1.373593224, epsilon = 1e-8);
    }

    #[test]
    fn deterministic() {
        let pr = params(1.3, 0.1);
        let a = sup_k(&pr, FunctionClass::GeneralC, &SupOptions::default()).unwrap();
        let b = sup_k(&pr, FunctionClass::GeneralC, &SupOptions::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn class_a_domain() {
        let err = sup_k(&params(2.0, -1.5), FunctionClass::DecreasingA, &SupOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ClassDomain(_)));
    }
}
