use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use statrs::function::gamma::gamma;

use super::kfun::{k_at_theta, k_value};
use super::params::{FunctionClass, PowerWeightParams};
use crate::error::{Error, Result};
use crate::optimize::{sup_k, Argmax, SupOptions};
use crate::roots::{find_root, transition_params, RootName};

/// Which row of the relevant case table produced a constant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseTag {
    CP1,
    CA0LowP,
    CA0HighP,
    CNumeric,
    AP1,
    AThetaTangentLow,
    AAlpha0,
    ALinearLow,
    AThetaTangentHigh,
    ABeta0,
    ALinearHigh,
    BP1,
    BEqualsC,
    BBeta1,
    BEqualsA,
    BOne,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::CP1 => "c_p1",
            CaseTag::CA0LowP => "c_a0_low_p",
            CaseTag::CA0HighP => "c_a0_high_p",
            CaseTag::CNumeric => "c_numeric",
            CaseTag::AP1 => "a_p1",
            CaseTag::AThetaTangentLow => "a_theta_tangent_low_p",
            CaseTag::AAlpha0 => "a_alpha0",
            CaseTag::ALinearLow => "a_linear_low_p",
            CaseTag::AThetaTangentHigh => "a_theta_tangent_high_p",
            CaseTag::ABeta0 => "a_beta0",
            CaseTag::ALinearHigh => "a_linear_high_p",
            CaseTag::BP1 => "b_p1",
            CaseTag::BEqualsC => "b_equals_c",
            CaseTag::BBeta1 => "b_beta1",
            CaseTag::BEqualsA => "b_equals_a",
            CaseTag::BOne => "b_one",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CaseTag {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    NumericSup,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstantResult {
    pub class: FunctionClass,
    pub params: PowerWeightParams,
    /// `K^p`; for `p = 1` this is `K` itself.
    pub k_to_p: f64,
    pub case_tag: CaseTag,
    pub roots_used: BTreeMap<String, f64>,
    pub method: Method,
    /// Maximizer of `k` for rows resolved numerically.
    pub argmax: Option<Argmax>,
}

impl ConstantResult {
    fn closed(
        class: FunctionClass,
        params: PowerWeightParams,
        k_to_p: f64,
        case_tag: CaseTag,
        roots: &[(&str, f64)],
    ) -> Self {
        ConstantResult {
            class,
            params,
            k_to_p,
            case_tag,
            roots_used: roots.iter().map(|(n, v)| (n.to_string(), *v)).collect(),
            method: Method::ClosedForm,
            argmax: None,
        }
    }

    /// The constant `K`.
    pub fn k(&self) -> f64 {
        self.k_to_p.powf(1.0 / self.params.p())
    }
}

impl Serialize for ConstantResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(7))?;
        map.serialize_entry("class", &self.class)?;
        map.serialize_entry("p", &self.params.p())?;
        map.serialize_entry("a", &self.params.a())?;
        map.serialize_entry("Kp", &self.k_to_p)?;
        map.serialize_entry("case", &self.case_tag)?;
        map.serialize_entry("roots", &self.roots_used)?;
        map.serialize_entry("method", &self.method)?;
        map.end()
    }
}

/// Lower end of the tangent row of the decreasing-class table.
pub fn a_tangent_threshold(p: f64) -> f64 {
    let q = p.powf((p - 2.0) / (p - 1.0));
    if p <= 2.0 {
        p - 1.0 - q
    } else {
        q - 1.0
    }
}

fn linear_ratio(params: &PowerWeightParams) -> f64 {
    (1.0 + params.a()) / params.gap()
}

/// Sharp constant for general real-valued functions.
pub fn constant_c(params: &PowerWeightParams) -> Result<ConstantResult> {
    let p = params.p();
    let a = params.a();
    let class = FunctionClass::GeneralC;
    if p == 1.0 {
        return Ok(ConstantResult::closed(class, *params, (1.0 - a) / (-a), CaseTag::CP1, &[]));
    }
    if a == 0.0 {
        if p <= 2.0 {
            let kp = 1.0 / (p - 1.0).powf(p);
            return Ok(ConstantResult::closed(class, *params, kp, CaseTag::CA0LowP, &[]));
        }
        let alpha_p = find_root(RootName::AlphaP, *params)?.root;
        let kp = (1.0 + alpha_p.abs()).powf(p - 2.0) / (p - 1.0);
        return Ok(ConstantResult::closed(
            class,
            *params,
            kp,
            CaseTag::CA0HighP,
            &[("alpha_p", alpha_p)],
        ));
    }
    let sup = sup_k(params, class, &SupOptions::default())?;
    let mut roots = BTreeMap::new();
    if let Some(alpha) = sup.argmax.alpha() {
        roots.insert("alpha_hat".to_string(), alpha);
    }
    if let Some(beta) = sup.argmax.beta() {
        roots.insert("beta_hat".to_string(), beta);
    }
    Ok(ConstantResult {
        class,
        params: *params,
        k_to_p: sup.value,
        case_tag: CaseTag::CNumeric,
        roots_used: roots,
        method: Method::NumericSup,
        argmax: Some(sup.argmax),
    })
}

/// Sharp constant for nonnegative nonincreasing functions.
pub fn constant_a(params: &PowerWeightParams) -> Result<ConstantResult> {
    let class = FunctionClass::DecreasingA;
    class.check(params)?;
    let p = params.p();
    let a = params.a();
    if p == 1.0 {
        return Ok(ConstantResult::closed(class, *params, (1.0 + a) / (-a), CaseTag::AP1, &[]));
    }
    let tangent = a_tangent_threshold(p);
    let result = if p <= 2.0 {
        if tangent <= a {
            ConstantResult::closed(class, *params, k_at_theta(params), CaseTag::AThetaTangentLow, &[])
        } else if p - 2.0 < a {
            let alpha0 = find_root(RootName::Alpha0, *params)?.root;
            let kp = k_value(params, alpha0, 1.0)?;
            ConstantResult::closed(class, *params, kp, CaseTag::AAlpha0, &[("alpha0", alpha0)])
        } else {
            ConstantResult::closed(class, *params, linear_ratio(params), CaseTag::ALinearLow, &[])
        }
    } else if tangent <= a {
        ConstantResult::closed(class, *params, k_at_theta(params), CaseTag::AThetaTangentHigh, &[])
    } else if 0.0 < a {
        let beta0 = find_root(RootName::Beta0, *params)?.root;
        let kp = k_value(params, 0.0, beta0)?;
        ConstantResult::closed(class, *params, kp, CaseTag::ABeta0, &[("beta0", beta0)])
    } else {
        ConstantResult::closed(class, *params, linear_ratio(params), CaseTag::ALinearHigh, &[])
    };
    Ok(result)
}

/// Sharp constant for nonnegative functions.
pub fn constant_b(params: &PowerWeightParams) -> Result<ConstantResult> {
    let class = FunctionClass::PositiveB;
    let p = params.p();
    let a = params.a();
    if p == 1.0 {
        return Ok(ConstantResult::closed(class, *params, (1.0 - a) / (-a), CaseTag::BP1, &[]));
    }
    if p < 2.0 {
        if p - 2.0 < a {
            let c = constant_c(params)?;
            return Ok(ConstantResult { class, case_tag: CaseTag::BEqualsC, ..c });
        }
        let beta1 = find_root(RootName::Beta1, *params)?.root;
        let kp = k_value(params, 0.0, beta1)?;
        return Ok(ConstantResult::closed(class, *params, kp, CaseTag::BBeta1, &[("beta1", beta1)]));
    }
    let (beta_star, a_star) = if p == 2.0 {
        (None, 0.0)
    } else {
        let (b, a) = transition_params(p)?;
        (Some(b), a)
    };
    let mut roots = vec![("a_star", a_star)];
    if let Some(b) = beta_star {
        roots.push(("beta_star", b));
    }
    if a > a_star {
        let inner = constant_a(params)?;
        roots.extend(inner.roots_used.iter().map(|(k, v)| (k.as_str(), *v)));
        Ok(ConstantResult::closed(class, *params, inner.k_to_p, CaseTag::BEqualsA, &roots))
    } else {
        Ok(ConstantResult::closed(class, *params, 1.0, CaseTag::BOne, &roots))
    }
}

pub fn constant_for(class: FunctionClass, params: &PowerWeightParams) -> Result<ConstantResult> {
    match class {
        FunctionClass::GeneralC => constant_c(params),
        FunctionClass::PositiveB => constant_b(params),
        FunctionClass::DecreasingA => constant_a(params),
    }
}

/// Known bounds for the constant comparing `H` with `H*` on decreasing
/// functions, unweighted case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DBounds {
    pub p: f64,
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
}

pub fn bounds_d(p: f64) -> Result<DBounds> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("D bounds need p > 1 (got p = {p})")));
    }
    if p <= 2.0 {
        let exact = 1.0 / (p - 1.0);
        return Ok(DBounds { p, lower: exact, upper: exact, exact: Some(exact) });
    }
    let lower = (p / ((p - 1.0) * gamma(p + 1.0))).powf(1.0 / p);
    if p.fract() == 0.0 {
        return Ok(DBounds { p, lower, upper: lower, exact: Some(lower) });
    }
    let upper = (std::f64::consts::E / (p - 1.0)).min(1.0 / (p - 1.0).powf(1.0 / p));
    Ok(DBounds { p, lower, upper, exact: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params(p: f64, a: f64) -> PowerWeightParams {
        PowerWeightParams::new(p, a).unwrap()
    }

    #[test]
    fn constant_c_examples() {
        let r = constant_c(&params(1.5, 0.0)).unwrap();
        assert_relative_eq!(r.k_to_p, 2f64.powf(1.5), max_relative = 1e-14);
        assert_eq!(r.case_tag, CaseTag::CA0LowP);
        let r = constant_c(&params(4.0, 0.0)).unwrap();
        assert_relative_eq!(r.k_to_p, 3.0, max_relative = 1e-12);
        assert_relative_eq!(r.roots_used["alpha_p"], -2.0, epsilon = 1e-12);
        let r = constant_c(&params(1.0, -0.5)).unwrap();
        assert_relative_eq!(r.k_to_p, 3.0, max_relative = 1e-15);
        assert_eq!(r.method, Method::ClosedForm);
    }

    #[test]
    fn constant_a_examples() {
        assert_relative_eq!(constant_a(&params(3.0, 0.0)).unwrap().k_to_p, 0.5, epsilon = 1e-15);
        let r = constant_a(&params(3.0, 0.5)).unwrap();
        assert_eq!(r.case_tag, CaseTag::ABeta0);
        assert_relative_eq!(r.k_to_p, 1.25, epsilon = 1e-12);
        assert_relative_eq!(r.roots_used["beta0"], 2.0 / 3.0, epsilon = 1e-12);
        let r = constant_a(&params(1.5, -0.75)).unwrap();
        assert_eq!(r.case_tag, CaseTag::ALinearLow);
        assert_relative_eq!(r.k_to_p, 0.2, epsilon = 1e-15);
        assert_relative_eq!(constant_a(&params(1.0, -0.5)).unwrap().k_to_p, 1.0, epsilon = 1e-15);
        let r = constant_a(&params(1.5, -0.3)).unwrap();
        assert_eq!(r.case_tag, CaseTag::AAlpha0);
        assert_relative_eq!(r.k_to_p, 0.891056, epsilon = 1e-5);
    }

    #[test]
    fn constant_a_rejects_low_weight() {
        let err = constant_a(&params(2.0, -1.0)).unwrap_err();
        assert!(matches!(err, Error::ClassDomain(_)));
    }

    #[test]
    fn constant_b_examples() {
        let r = constant_b(&params(3.0, 0.0)).unwrap();
        assert_eq!(r.case_tag, CaseTag::BOne);
        assert_eq!(r.k_to_p, 1.0);
        assert_relative_eq!(constant_b(&params(1.0, -0.5)).unwrap().k_to_p, 3.0, epsilon = 1e-15);
        let r = constant_b(&params(2.0, 0.5)).unwrap();
        assert_eq!(r.case_tag, CaseTag::BEqualsA);
        assert_relative_eq!(r.k_to_p, 9.0, max_relative = 1e-14);
    }

    #[test]
    fn constant_b_beta1_row() {
        let r = constant_b(&params(1.5, -1.0)).unwrap();
        assert_eq!(r.case_tag, CaseTag::BBeta1);
        assert_relative_eq!(r.roots_used["beta1"], (15.0 + 153f64.sqrt()) / 2.0, epsilon = 1e-10);
        assert_relative_eq!(r.k_to_p, 1.1429850280746376, max_relative = 1e-10);
    }

    #[test]
    fn transition_cross_check() {
        let r = constant_a(&params(3.0, 0.4)).unwrap();
        assert_relative_eq!(r.k_to_p, 1.0, epsilon = 1e-12);
        assert_relative_eq!(r.roots_used["beta0"], 0.75, epsilon = 1e-12);
    }

    #[test]
    fn p_two_rows_meet_at_zero() {
        let r = constant_a(&params(2.0, 0.0)).unwrap();
        assert_eq!(r.case_tag, CaseTag::AThetaTangentLow);
        assert_eq!(r.k_to_p, 1.0);
        let lin = constant_a(&params(2.0, -1e-12)).unwrap();
        assert_eq!(lin.case_tag, CaseTag::ALinearLow);
        assert_relative_eq!(lin.k_to_p, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn row_boundaries_are_continuous() {
        for p in [1.2, 1.5, 1.8, 2.5, 3.0, 4.0, 6.0] {
            let mut edges = vec![a_tangent_threshold(p)];
            edges.push(if p < 2.0 { p - 2.0 } else { 0.0 });
            for edge in edges {
                let left = constant_a(&params(p, edge - 1e-12)).unwrap().k_to_p;
                let right = constant_a(&params(p, edge + 1e-12)).unwrap().k_to_p;
                let scale = left.abs().max(1.0);
                assert!((left - right).abs() < 1e-9 * scale, "p={p} edge={edge}: {left} vs {right}");
            }
        }
        for p in [1.2, 1.5, 1.8] {
            let edge = p - 2.0;
            let left = constant_b(&params(p, edge)).unwrap().k_to_p;
            let right = constant_b(&params(p, edge + 1e-9)).unwrap().k_to_p;
            assert!((left - right).abs() < 1e-6, "p={p}: {left} vs {right}");
        }
    }

    #[test]
    fn serializes_fixed_keys() {
        let r = constant_a(&params(3.0, 0.5)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        for key in ["class", "p", "a", "Kp", "case", "roots", "method"] {
            assert!(keys.contains(&key), "missing {key}");
        }
        assert_eq!(v["class"], "A");
        assert_eq!(v["method"], "closed_form");
        assert_eq!(v["case"], "a_beta0");
    }

    #[test]
    fn d_bounds() {
        let b = bounds_d(1.5).unwrap();
        assert_relative_eq!(b.exact.unwrap(), 2.0, epsilon = 1e-15);
        let b = bounds_d(3.0).unwrap();
        assert_relative_eq!(b.exact.unwrap(), 0.25f64.powf(1.0 / 3.0), max_relative = 1e-12);
        let b = bounds_d(2.5).unwrap();
        assert!(b.exact.is_none());
        let gamma_35 = 15.0 * std::f64::consts::PI.sqrt() / 8.0;
        assert_relative_eq!(b.lower, (2.5 / (1.5 * gamma_35)).powf(0.4), max_relative = 1e-12);
        assert_relative_eq!(
            b.upper,
            (std::f64::consts::E / 1.5).min(1.5f64.powf(-0.4)),
            max_relative = 1e-15
        );
        assert!(b.lower <= b.upper);
        assert!(matches!(bounds_d(1.0), Err(Error::Domain(_))));
    }
}
