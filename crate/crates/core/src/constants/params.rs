use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integrability exponent `p` and power-weight exponent `a` of `t^a dt`.
///
/// Construction enforces `p ≥ 1` and `a < p − 1`, so the threshold
/// `θ = (p − 1 − a)/p` is strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerWeightParams {
    p: f64,
    a: f64,
    theta: f64,
}

impl PowerWeightParams {
    pub fn new(p: f64, a: f64) -> Result<Self> {
        if !p.is_finite() || !a.is_finite() {
            return Err(Error::InvalidParams(format!("p = {p}, a = {a} must be finite")));
        }
        if p < 1.0 {
            return Err(Error::InvalidParams(format!("p = {p} must satisfy p >= 1")));
        }
        if a >= p - 1.0 {
            return Err(Error::InvalidParams(format!(
                "a = {a} must satisfy a < p - 1 = {}",
                p - 1.0
            )));
        }
        Ok(Self {
            p,
            a,
            theta: (p - 1.0 - a) / p,
        })
    }

    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// `p − 1 − a`, positive by construction.
    #[inline]
    pub fn gap(&self) -> f64 {
        self.p - 1.0 - self.a
    }

    /// The parameters of the reflected problem, `a ↦ p − 2 − a`.
    pub fn reflected(&self) -> Result<Self> {
        Self::new(self.p, self.p - 2.0 - self.a)
    }
}

impl<'de> Deserialize<'de> for PowerWeightParams {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            p: f64,
            a: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        PowerWeightParams::new(raw.p, raw.a).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PowerWeightParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(p = {}, a = {})", self.p, self.a)
    }
}

/// `θ = (p − 1 − a)/p`.
pub fn theta(params: &PowerWeightParams) -> f64 {
    params.theta()
}

/// The class of functions an inequality ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionClass {
    /// All real-valued functions (constant `C`).
    #[serde(rename = "C")]
    GeneralC,
    /// Nonnegative functions (constant `B`).
    #[serde(rename = "B")]
    PositiveB,
    /// Nonnegative nonincreasing functions (constant `A`).
    #[serde(rename = "A")]
    DecreasingA,
}

impl FunctionClass {
    pub const ALL: [FunctionClass; 3] = [
        FunctionClass::DecreasingA,
        FunctionClass::PositiveB,
        FunctionClass::GeneralC,
    ];

    pub fn letter(&self) -> char {
        match self {
            FunctionClass::GeneralC => 'C',
            FunctionClass::PositiveB => 'B',
            FunctionClass::DecreasingA => 'A',
        }
    }

    /// Decreasing functions need `a > −1`, otherwise every nontrivial one has
    /// infinite weighted norm.
    pub fn check(&self, params: &PowerWeightParams) -> Result<()> {
        if *self == FunctionClass::DecreasingA && params.a() <= -1.0 {
            return Err(Error::ClassDomain(format!(
                "class A requires a > -1 (got a = {})",
                params.a()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for FunctionClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" | "decreasing" => Ok(FunctionClass::DecreasingA),
            "B" | "b" | "positive" => Ok(FunctionClass::PositiveB),
            "C" | "c" | "general" => Ok(FunctionClass::GeneralC),
            other => Err(Error::InvalidParams(format!("unknown function class {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_values() {
        let cases = [(2.0, 0.0, 0.5), (1.0, -1.0, 1.0), (4.0, 1.0, 0.5)];
        for (p, a, want) in cases {
            let params = PowerWeightParams::new(p, a).unwrap();
            assert_eq!(theta(&params), want);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(PowerWeightParams::new(0.5, -1.0).is_err());
        assert!(PowerWeightParams::new(2.0, 1.0).is_err());
        assert!(PowerWeightParams::new(1.0, 0.0).is_err());
        assert!(PowerWeightParams::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn class_a_needs_a_above_minus_one() {
        let params = PowerWeightParams::new(2.0, -1.0).unwrap();
        let err = FunctionClass::DecreasingA.check(&params).unwrap_err();
        assert!(err.to_string().contains("class A requires a > -1"));
        assert!(FunctionClass::PositiveB.check(&params).is_ok());
    }

    #[test]
    fn deserialize_validates() {
        let ok: PowerWeightParams = serde_json::from_str(r#"{"p":3,"a":0.5}"#).unwrap();
        assert_eq!(ok.theta(), 0.5);
        assert!(serde_json::from_str::<PowerWeightParams>(r#"{"p":3,"a":2}"#).is_err());
    }
}
