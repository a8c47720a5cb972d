//! Pointwise majorization `v ≤ u`, where `v(x) = |1 − x|^p − K^p |x|^p` and
//! `u(x) = D (θ − x)` is affine and vanishes at `θ`.
//!
//! Each row of the case tables comes with the pair `(K^p, D)` used in its
//! upper-bound argument. Checking `v ≤ u` on the domain attached to the
//! function class (whole line, half-line, unit interval) replays that
//! argument numerically.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::constants::{constant_for, signed_pow, CaseTag, ConstantResult, FunctionClass, PowerWeightParams};
use crate::error::{Error, Result};
use crate::optimize::Argmax;

/// Default tolerance on the scaled violation.
pub const MAJORIZATION_TOL: f64 = 1e-12;

/// Tolerance of [`double_tangent_check`].
pub const TANGENCY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    WholeLine,
    HalfLine,
    UnitInterval,
}

impl Domain {
    pub fn for_class(class: FunctionClass) -> Domain {
        match class {
            FunctionClass::GeneralC => Domain::WholeLine,
            FunctionClass::PositiveB => Domain::HalfLine,
            FunctionClass::DecreasingA => Domain::UnitInterval,
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            Domain::WholeLine => x.is_finite(),
            Domain::HalfLine => x >= 0.0 && x.is_finite(),
            Domain::UnitInterval => (0.0..=1.0).contains(&x),
        }
    }

    /// Maps `s ∈ [0, 1]` (or `[−1, 1]` for the whole line) onto the domain.
    fn point_at(&self, s: f64) -> f64 {
        match self {
            Domain::UnitInterval => s,
            Domain::HalfLine => s / (1.0 - s),
            Domain::WholeLine => s / (1.0 - s.abs()),
        }
    }

    fn unit_range(&self) -> (f64, f64) {
        match self {
            Domain::WholeLine => (-1.0, 1.0),
            _ => (0.0, 1.0),
        }
    }
}

/// `v(x) = |1 − x|^p − K^p |x|^p`.
pub fn v_eval(x: f64, k_to_p: f64, p: f64) -> f64 {
    (1.0 - x).abs().powf(p) - k_to_p * x.abs().powf(p)
}

/// `v'(x)`; at the kinks of the `p = 1` profile this is the right derivative.
pub fn v_derivative(x: f64, k_to_p: f64, p: f64) -> f64 {
    if p == 1.0 {
        let left = if x < 1.0 { -1.0 } else { 1.0 };
        let right = if x >= 0.0 { 1.0 } else { -1.0 };
        return left - k_to_p * right;
    }
    -p * signed_pow(1.0 - x, p - 1.0) - k_to_p * p * signed_pow(x, p - 1.0)
}

/// `v''(x)` away from `0` and `1`.
pub fn v_second(x: f64, k_to_p: f64, p: f64) -> f64 {
    p * (p - 1.0) * ((1.0 - x).abs().powf(p - 2.0) - k_to_p * x.abs().powf(p - 2.0))
}

/// `v(x) / max(1, |x|)^p`, evaluated without cancellation for large `|x|`.
fn v_scaled(x: f64, k_to_p: f64, p: f64) -> f64 {
    if x.abs() <= 1.0 {
        return v_eval(x, k_to_p, p);
    }
    // |1 − x| = |x| (1 − 1/x) for |x| > 1
    (p * (-1.0 / x).ln_1p()).exp_m1() + (1.0 - k_to_p)
}

/// The `(K^p, D)` pair of one case-table row and the domain it is checked on.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorizationCase {
    pub params: PowerWeightParams,
    pub class: FunctionClass,
    pub case_tag: Option<CaseTag>,
    pub k_to_p: f64,
    /// Slope coefficient of `u(x) = D (θ − x)`.
    pub d: f64,
    pub domain: Domain,
    /// Points where `u` touches `v` by construction.
    pub contacts: Vec<f64>,
}

impl MajorizationCase {
    /// A case with explicit `K^p` and `D`, not tied to any table row.
    pub fn custom(params: PowerWeightParams, class: FunctionClass, k_to_p: f64, d: f64) -> Self {
        MajorizationCase {
            params,
            class,
            case_tag: None,
            k_to_p,
            d,
            domain: Domain::for_class(class),
            contacts: Vec::new(),
        }
    }

    pub fn v(&self, x: f64) -> f64 {
        v_eval(x, self.k_to_p, self.params.p())
    }

    pub fn u(&self, x: f64) -> f64 {
        self.d * (self.params.theta() - x)
    }

    /// `v − u`.
    pub fn gap(&self, x: f64) -> f64 {
        self.v(x) - self.u(x)
    }

    /// `v' − u'`.
    pub fn gap_derivative(&self, x: f64) -> f64 {
        v_derivative(x, self.k_to_p, self.params.p()) + self.d
    }

    /// `(v − u) / max(1, |x|)^p`.
    pub fn scaled_gap(&self, x: f64) -> f64 {
        let p = self.params.p();
        let scale = x.abs().max(1.0).powf(p);
        v_scaled(x, self.k_to_p, p) - self.u(x) / scale
    }
}

impl Serialize for MajorizationCase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MajorizationCase", 8)?;
        s.serialize_field("class", &self.class)?;
        s.serialize_field("p", &self.params.p())?;
        s.serialize_field("a", &self.params.a())?;
        s.serialize_field("case", &self.case_tag)?;
        s.serialize_field("Kp", &self.k_to_p)?;
        s.serialize_field("D", &self.d)?;
        s.serialize_field("domain", &self.domain)?;
        s.serialize_field("contacts", &self.contacts)?;
        s.end()
    }
}

fn tangent_slope(params: &PowerWeightParams) -> f64 {
    let p = params.p();
    (1.0 + params.a()).powf(p - 1.0) / (p.powf(p - 3.0) * params.gap())
}

/// `D` of the affine function through `(θ, 0)` and `(x, v(x))`, or the
/// tangent slope when the contact is `θ` itself.
fn slope_from_contact(params: &PowerWeightParams, k_to_p: f64, contact: Option<f64>) -> f64 {
    let theta = params.theta();
    match contact {
        Some(x) if x != theta => v_eval(x, k_to_p, params.p()) / (theta - x),
        _ => -v_derivative(theta, k_to_p, params.p()),
    }
}

fn from_argmax(params: &PowerWeightParams, k_to_p: f64, argmax: &Argmax) -> (f64, Vec<f64>) {
    let theta = params.theta();
    match *argmax {
        Argmax::Point { alpha, beta } => {
            (slope_from_contact(params, k_to_p, Some(alpha)), vec![alpha, beta])
        }
        Argmax::BetaToInf { alpha } => (slope_from_contact(params, k_to_p, Some(alpha)), vec![alpha]),
        Argmax::AlphaToMinusInf { beta } => (slope_from_contact(params, k_to_p, Some(beta)), vec![beta]),
        Argmax::AlphaToTheta { .. } | Argmax::BetaToTheta { .. } => {
            (slope_from_contact(params, k_to_p, None), vec![theta])
        }
    }
}

fn root(result: &ConstantResult, name: &str) -> f64 {
    result.roots_used[name]
}

fn case_slope(result: &ConstantResult) -> (f64, Vec<f64>) {
    let params = &result.params;
    let p = params.p();
    let a = params.a();
    let c = params.gap();
    let theta = params.theta();
    let kp = result.k_to_p;
    match result.case_tag {
        CaseTag::CP1 | CaseTag::AP1 | CaseTag::BP1 => (1.0 / (-a), vec![0.0, 1.0]),
        CaseTag::CA0LowP | CaseTag::AThetaTangentLow | CaseTag::AThetaTangentHigh => {
            (tangent_slope(params), vec![theta])
        }
        CaseTag::CA0HighP => (p * kp / (1.0 + a), vec![root(result, "alpha_p"), 1.0]),
        CaseTag::AAlpha0 => (p * kp / (1.0 + a), vec![root(result, "alpha0"), 1.0]),
        CaseTag::ALinearLow | CaseTag::ALinearHigh => (p / c, vec![0.0, 1.0]),
        CaseTag::ABeta0 => (p / c, vec![0.0, root(result, "beta0")]),
        CaseTag::BBeta1 => (p / c, vec![0.0, root(result, "beta1")]),
        CaseTag::BOne => (p / c, vec![0.0]),
        CaseTag::BEqualsC => match crate::constants::constant_c(params) {
            Ok(c) => case_slope(&c),
            Err(_) => (slope_from_contact(params, kp, None), vec![theta]),
        },
        CaseTag::CNumeric => match &result.argmax {
            Some(argmax) => from_argmax(params, kp, argmax),
            None => (slope_from_contact(params, kp, None), vec![theta]),
        },
        CaseTag::BEqualsA => {
            // same construction as the decreasing class, checked on x ≥ 0
            let inner = crate::constants::constant_a(params).map(|r| case_slope(&r));
            inner.unwrap_or_else(|_| (slope_from_contact(params, kp, None), vec![theta]))
        }
    }
}

/// The `(K^p, D, domain)` triple of the upper-bound argument for the row
/// selected by `(params, class)`.
pub fn build_case(params: &PowerWeightParams, class: FunctionClass) -> Result<MajorizationCase> {
    let result = constant_for(class, params)?;
    Ok(case_from_result(&result))
}

pub fn case_from_result(result: &ConstantResult) -> MajorizationCase {
    let (d, contacts) = case_slope(result);
    MajorizationCase {
        params: result.params,
        class: result.class,
        case_tag: Some(result.case_tag),
        k_to_p: result.k_to_p,
        d,
        domain: Domain::for_class(result.class),
        contacts,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MajorizationReport {
    /// Largest `(v − u) / max(1, |x|)^p` over the probe set; `+∞` when the
    /// tail analysis fails.
    pub max_violation: f64,
    pub argmax: f64,
    pub grid_size: usize,
    pub pass: bool,
}

fn serialize_extended<S: serde::ser::SerializeStruct>(s: &mut S, key: &'static str, x: f64) -> std::result::Result<(), S::Error> {
    if x.is_finite() {
        s.serialize_field(key, &x)
    } else {
        s.serialize_field(key, if x > 0.0 { "inf" } else { "-inf" })
    }
}

impl Serialize for MajorizationReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("MajorizationReport", 4)?;
        serialize_extended(&mut s, "max_violation", self.max_violation)?;
        serialize_extended(&mut s, "argmax", self.argmax)?;
        s.serialize_field("grid_size", &self.grid_size)?;
        s.serialize_field("pass", &self.pass)?;
        s.end()
    }
}

/// Whether `v − u ≤ 0` eventually as `x → +∞` (`positive`) or `x → −∞`.
fn tail_holds(case: &MajorizationCase, positive: bool) -> bool {
    let p = case.params.p();
    let kp = case.k_to_p;
    let d = case.d;
    let theta = case.params.theta();
    if p == 1.0 {
        // exactly affine beyond the kinks
        let (slope, constant) = if positive {
            (1.0 - kp + d, -1.0 - d * theta)
        } else {
            (1.0 - kp - d, 1.0 - d * theta)
        };
        // slopes cancel exactly in several rows; allow for rounding in K
        let zero = 1e-12 * (1.0 + kp.abs() + d.abs());
        return slope < -zero || (slope.abs() <= zero && constant <= 0.0);
    }
    let lead = 1.0 - kp;
    if lead != 0.0 {
        return lead < 0.0;
    }
    // K^p = 1: |1 − x|^p − |x|^p ≈ ∓p |x|^{p−1}, against the affine part
    if p == 2.0 {
        let (slope, constant) = if positive { (d - 2.0, 1.0 - d * theta) } else { (2.0 - d, 1.0 - d * theta) };
        return slope < 0.0 || (slope == 0.0 && constant <= 0.0);
    }
    if positive {
        p > 2.0 || d < 0.0
    } else {
        p < 2.0 && d > 0.0
    }
}

/// Golden-section maximization of `f` on `[lo, hi]`.
fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const R: f64 = 0.618_033_988_749_894_9;
    let mut x1 = hi - R * (hi - lo);
    let mut x2 = lo + R * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..100 {
        if hi - lo <= 1e-15 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + R * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - R * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Number of grid local maxima refined by golden-section search.
const REFINED_CELLS: usize = 16;

/// Checks `v ≤ u` on the case's domain.
///
/// The probe set is a uniform grid of `grid` cells on the compactified
/// domain, the points `0, 1/2, θ, 1`, the inflection points of `v`, the
/// construction contacts and powers of ten out to `10^12`; the best grid
/// cells are then refined locally. Unbounded tails are decided from their
/// leading coefficients.
pub fn check_majorization(case: &MajorizationCase, grid: usize) -> Result<MajorizationReport> {
    if grid < 1000 {
        return Err(Error::Domain(format!("majorization grid must have at least 1000 cells (got {grid})")));
    }
    let domain = case.domain;
    let (s_lo, s_hi) = domain.unit_range();
    let g = |x: f64| case.scaled_gap(x);

    let xs: Vec<f64> = (0..=grid)
        .map(|i| s_lo + (s_hi - s_lo) * i as f64 / grid as f64)
        .filter(|s| domain == Domain::UnitInterval || s.abs() < 1.0)
        .map(|s| domain.point_at(s))
        .collect();
    let values: Vec<f64> = xs.iter().map(|&x| g(x)).collect();

    let mut best_x = xs[0];
    let mut best = values[0];
    let mut consider = |x: f64, val: f64| {
        if val > best || best.is_nan() {
            best = val;
            best_x = x;
        }
    };
    for (&x, &val) in xs.iter().zip(&values) {
        consider(x, val);
    }

    let mut special = vec![0.0, 0.5, case.params.theta(), 1.0];
    special.extend(case.contacts.iter().copied());
    if let Ok((x1, x2)) = inflection_points(case.k_to_p, case.params.p()) {
        special.extend([x1, x2]);
    }
    if domain != Domain::UnitInterval {
        for k in 1..=12 {
            special.push(10f64.powi(k));
            if domain == Domain::WholeLine {
                special.push(-(10f64.powi(k)));
            }
        }
    }
    for x in special.into_iter().filter(|&x| domain.contains(x)) {
        consider(x, g(x));
    }

    let mut cells: Vec<usize> = (0..values.len())
        .filter(|&i| {
            let left = i == 0 || values[i] >= values[i - 1];
            let right = i + 1 == values.len() || values[i] >= values[i + 1];
            left && right
        })
        .collect();
    cells.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    for &i in cells.iter().take(REFINED_CELLS) {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(xs.len() - 1)];
        let (x, val) = golden_max(&g, lo, hi);
        consider(x, val);
    }

    let tails_ok = match domain {
        Domain::UnitInterval => true,
        Domain::HalfLine => tail_holds(case, true),
        Domain::WholeLine => tail_holds(case, true) && tail_holds(case, false),
    };
    if !tails_ok {
        best = f64::INFINITY;
        best_x = if domain == Domain::WholeLine && !tail_holds(case, false) {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    Ok(MajorizationReport {
        max_violation: best,
        argmax: best_x,
        grid_size: grid,
        pass: best <= MAJORIZATION_TOL,
    })
}

/// Curvature of `v` on one interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Convex,
    Concave,
}

/// The two points where `v''` changes sign: `1/(1 + r)` and `1/(1 − r)`
/// with `r = K^{p/(p−2)}`.
pub fn inflection_points(k_to_p: f64, p: f64) -> Result<(f64, f64)> {
    if !(p > 1.0) || p == 2.0 {
        return Err(Error::Domain(format!("inflection points need p > 1, p != 2 (got p = {p})")));
    }
    if !(k_to_p > 0.0) || k_to_p == 1.0 {
        return Err(Error::Domain(format!("inflection points need K > 0, K != 1 (got K^p = {k_to_p})")));
    }
    let r = k_to_p.powf(1.0 / (p - 2.0));
    Ok((1.0 / (1.0 + r), 1.0 / (1.0 - r)))
}

/// The ordered break points and the curvature of `v` on the three
/// intervals they cut the line into.
pub fn convexity_pattern(k_to_p: f64, p: f64) -> Result<([f64; 2], [Curvature; 3])> {
    let (x1, x2) = inflection_points(k_to_p, p)?;
    let breaks = if x1 < x2 { [x1, x2] } else { [x2, x1] };
    let outer = if k_to_p > 1.0 { Curvature::Concave } else { Curvature::Convex };
    let inner = match outer {
        Curvature::Concave => Curvature::Convex,
        Curvature::Convex => Curvature::Concave,
    };
    Ok((breaks, [outer, inner, outer]))
}

/// Whether `u` is tangent to `v` at both `x_a` and `x_b`.
pub fn double_tangent_check(case: &MajorizationCase, x_a: f64, x_b: f64) -> bool {
    let p = case.params.p();
    [x_a, x_b].iter().all(|&x| {
        let scale = x.abs().max(1.0);
        case.gap(x).abs() <= TANGENCY_TOL * scale.powf(p)
            && case.gap_derivative(x).abs() <= TANGENCY_TOL * scale.powf(p - 1.0)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(p: f64, a: f64) -> PowerWeightParams {
        PowerWeightParams::new(p, a).unwrap()
    }

    #[test]
    fn v_examples() {
        assert_eq!(v_eval(0.0, 7.0, 3.3), 1.0);
        assert_eq!(v_eval(1.0, 0.5, 3.0), -0.5);
        assert_eq!(v_eval(0.5, 1.0, 2.0), 0.0);
    }

    #[test]
    fn derivatives_match_differences() {
        for &(x, kp, p) in &[(0.3, 1.7, 3.0), (-2.0, 0.4, 1.5), (4.0, 2.0, 2.5), (0.7, 1.2, 1.2)] {
            let h = 1e-6;
            let fd = (v_eval(x + h, kp, p) - v_eval(x - h, kp, p)) / (2.0 * h);
            assert_relative_eq!(v_derivative(x, kp, p), fd, max_relative = 1e-7);
            let fd2 = (v_derivative(x + h, kp, p) - v_derivative(x - h, kp, p)) / (2.0 * h);
            assert_relative_eq!(v_second(x, kp, p), fd2, max_relative = 1e-6);
        }
    }

    #[test]
    fn scaled_matches_direct() {
        for &x in &[-30.0, -1.5, 2.0, 17.0] {
            let kp = 1.3;
            let p = 2.7;
            let direct = v_eval(x, kp, p) / f64::abs(x).powf(p);
            assert_relative_eq!(v_scaled(x, kp, p), direct, max_relative = 1e-12);
        }
    }

    #[test]
    fn build_case_examples() {
        let a = build_case(&params(3.0, 0.0), FunctionClass::DecreasingA).unwrap();
        assert_relative_eq!(a.k_to_p, 0.5, max_relative = 1e-14);
        assert_relative_eq!(a.d, 1.5, max_relative = 1e-14);
        assert_eq!(a.domain, Domain::UnitInterval);

        let b = build_case(&params(3.0, 0.0), FunctionClass::PositiveB).unwrap();
        assert_eq!(b.k_to_p, 1.0);
        assert_relative_eq!(b.d, 1.5, max_relative = 1e-14);
        assert_eq!(b.domain, Domain::HalfLine);

        let c = build_case(&params(2.0, 0.0), FunctionClass::GeneralC).unwrap();
        assert_relative_eq!(c.k_to_p, 1.0, max_relative = 1e-14);
        assert_relative_eq!(c.d, 2.0, max_relative = 1e-14);
        assert_eq!(c.domain, Domain::WholeLine);
        for &x in &[-5.0, 0.0, 0.3, 9.0] {
            assert!(c.gap(x).abs() < 1e-12);
        }
    }

    #[test]
    fn check_examples() {
        let a = build_case(&params(3.0, 0.0), FunctionClass::DecreasingA).unwrap();
        let r = check_majorization(&a, 100_000).unwrap();
        assert!(r.pass && r.max_violation <= 1e-15, "{r:?}");

        let bad = MajorizationCase::custom(params(3.0, 0.0), FunctionClass::DecreasingA, 0.0, 1.5);
        let r = check_majorization(&bad, 1000).unwrap();
        assert!(!r.pass);
        assert_relative_eq!(r.max_violation, 0.5, max_relative = 1e-12);
        assert_eq!(r.argmax, 1.0);

        assert!(check_majorization(&a, 999).is_err());
    }

    #[test]
    fn alpha0_tangency() {
        let case = build_case(&params(1.5, -0.3), FunctionClass::DecreasingA).unwrap();
        assert_eq!(case.case_tag, Some(CaseTag::AAlpha0));
        assert_relative_eq!(case.contacts[0], 0.16, max_relative = 1e-10);
        assert!(case.gap(0.16).abs() < 1e-12);
        assert!(case.gap_derivative(0.16).abs() < 1e-10);
        assert!(check_majorization(&case, 10_000).unwrap().pass);
    }

    #[test]
    fn closed_form_slopes_agree_with_secants() {
        // closed-form D against the secant through a contact point
        for &(p, a, class) in &[
            (3.0, 0.5, FunctionClass::DecreasingA),
            (1.5, -0.3, FunctionClass::DecreasingA),
            (4.0, 0.0, FunctionClass::GeneralC),
            (1.5, -1.0, FunctionClass::PositiveB),
            (3.0, -0.5, FunctionClass::DecreasingA),
        ] {
            let case = build_case(&params(p, a), class).unwrap();
            let theta = case.params.theta();
            for &x in case.contacts.iter().filter(|&&x| x != theta) {
                let secant = case.v(x) / (theta - x);
                assert_relative_eq!(case.d, secant, max_relative = 1e-9);
            }
        }
        let t = build_case(&params(3.0, 1.5), FunctionClass::DecreasingA).unwrap();
        assert_eq!(t.case_tag, Some(CaseTag::AThetaTangentHigh));
        let theta = t.params.theta();
        assert!(t.gap(theta).abs() < 1e-14);
        assert!(t.gap_derivative(theta).abs() < 1e-12);
    }

    #[test]
    fn tails() {
        // K^p = 1, p = 2: equality case needs 1 − Dθ ≤ 0
        let b = build_case(&params(2.0, 0.0), FunctionClass::PositiveB).unwrap();
        assert!(tail_holds(&b, true));
        let b = build_case(&params(2.0, -0.5), FunctionClass::PositiveB).unwrap();
        assert!(tail_holds(&b, true));
        // K^p = 1 with p < 2 fails on x → +∞ for D > 0
        let weak = MajorizationCase::custom(params(1.5, 0.0), FunctionClass::PositiveB, 1.0, 3.0);
        assert!(!tail_holds(&weak, true));
        let r = check_majorization(&weak, 1000).unwrap();
        assert!(!r.pass && r.max_violation.is_infinite());
        let c = build_case(&params(1.0, -0.5), FunctionClass::GeneralC).unwrap();
        assert!(tail_holds(&c, true) && tail_holds(&c, false));
        assert!(check_majorization(&c, 1000).unwrap().pass);
    }

    #[test]
    fn inflection_examples() {
        let kp = 2f64.powf(4.0);
        let (x1, x2) = inflection_points(kp, 4.0).unwrap();
        assert_relative_eq!(x1, 0.2, max_relative = 1e-14);
        assert_relative_eq!(x2, -1.0 / 3.0, max_relative = 1e-14);
        assert!(v_second(0.5, kp, 4.0) < 0.0);
        assert!(inflection_points(kp, 2.0).is_err());
        assert!(inflection_points(1.0, 3.0).is_err());
    }

    #[test]
    fn convexity_sign_flips_only_at_breaks() {
        for &(kp, p) in &[(16.0, 4.0), (0.3, 4.0), (2.0, 1.5), (0.5, 1.5), (3.0, 6.0), (1.2, 1.2)] {
            let (breaks, pattern) = convexity_pattern(kp, p).unwrap();
            let probes = [breaks[0] - 1.0, 0.5 * (breaks[0] + breaks[1]), breaks[1] + 1.0];
            for (x, want) in probes.iter().zip(pattern) {
                let s = v_second(*x, kp, p);
                let got = if s > 0.0 { Curvature::Convex } else { Curvature::Concave };
                assert_eq!(got, want, "kp={kp} p={p} x={x}");
            }
            let xs: Vec<f64> = (0..4001).map(|i| -20.0 + 40.0 * i as f64 / 4000.0).collect();
            for w in xs.windows(2) {
                let (s0, s1) = (v_second(w[0], kp, p), v_second(w[1], kp, p));
                if w[0] * w[1] <= 0.0 || (w[0] - 1.0) * (w[1] - 1.0) <= 0.0 {
                    continue;
                }
                if s0 * s1 < 0.0 {
                    assert!(breaks.iter().any(|&b| w[0] <= b && b <= w[1]), "kp={kp} p={p} {w:?}");
                }
            }
        }
    }

    #[test]
    fn double_tangent() {
        let c = build_case(&params(2.0, 0.0), FunctionClass::GeneralC).unwrap();
        assert!(double_tangent_check(&c, -3.0, 5.0));
        let sub = build_case(&params(1.5, -0.4), FunctionClass::PositiveB).unwrap();
        assert_eq!(sub.case_tag, Some(CaseTag::BEqualsC));
        assert_eq!(sub.contacts.len(), 2);
        let (xa, xb) = (sub.contacts[0], sub.contacts[1]);
        assert!(double_tangent_check(&sub, xa, xb));
        assert!(!double_tangent_check(&sub, xa + 0.01, xb));
        assert!(check_majorization(&sub, 10_000).unwrap().pass);
    }
}
