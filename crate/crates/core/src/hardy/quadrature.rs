//! Adaptive Gauss–Kronrod quadrature in logarithmic coordinates `t = e^u`.
//!
//! Integrands are products of powers of term sums times a power weight,
//! which become exponentials in `u`. Products are evaluated in log space so
//! that far tails neither overflow nor lose relative precision.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::piecewise::Term;
use crate::error::{End, Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

pub const REL_TOL: f64 = 1e-12;
const MAX_INTERVALS: usize = 4000;
const TAIL_BLOCKS: usize = 120;
const TAIL_FRACTION: f64 = 1e-15;
const SIGN_SAMPLES: usize = 32;

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Cell {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive GK15 on a finite interval.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let (value, err) = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Cell { a, b, value, err });
    let mut total = value;
    let mut total_err = err;
    while total_err > abs_tol.max(rel_tol * total.abs()) && heap.len() < MAX_INTERVALS {
        let cell = heap.pop().expect("nonempty");
        let mid = 0.5 * (cell.a + cell.b);
        if !(mid > cell.a && mid < cell.b) {
            heap.push(Cell { err: 0.0, ..cell });
            continue;
        }
        let (v1, e1) = gk15(f, cell.a, mid);
        let (v2, e2) = gk15(f, mid, cell.b);
        total += v1 + v2 - cell.value;
        total_err += e1 + e2 - cell.err;
        heap.push(Cell { a: cell.a, b: mid, value: v1, err: e1 });
        heap.push(Cell { a: mid, b: cell.b, value: v2, err: e2 });
    }
    // re-sum to shed accumulated update error
    heap.iter().map(|c| c.value).sum()
}

/// One factor `|F(u)|^power` (times `sign F(u)` when `signed`) of a
/// log-coordinate integrand, where `F(e^u)` is a term sum.
#[derive(Debug, Clone, Copy)]
pub struct Factor<'a> {
    pub terms: &'a [Term],
    pub power: f64,
    pub signed: bool,
}

/// `∏ factors · e^{weight·u}`, the pullback of `∏ … · t^a dt` with
/// `weight = a + 1`.
#[derive(Debug, Clone)]
pub struct LogIntegrand<'a> {
    pub factors: Vec<Factor<'a>>,
    pub weight: f64,
}

/// `(sign, ln|Σ terms|)` at `t = e^u`.
pub(crate) fn log_sum(terms: &[Term], u: f64) -> (f64, f64) {
    match terms {
        [] => (0.0, f64::NEG_INFINITY),
        [t] => t.log_eval(u),
        _ => {
            let mut parts = [(0.0, 0.0); 8];
            let mut heap_parts = Vec::new();
            let parts: &mut [(f64, f64)] = if terms.len() <= 8 {
                for (slot, t) in parts.iter_mut().zip(terms) {
                    *slot = t.log_eval(u);
                }
                &mut parts[..terms.len()]
            } else {
                heap_parts.extend(terms.iter().map(|t| t.log_eval(u)));
                &mut heap_parts
            };
            let top = parts.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max);
            if top == f64::NEG_INFINITY {
                return (0.0, f64::NEG_INFINITY);
            }
            let s: f64 = parts.iter().map(|(sg, m)| sg * (m - top).exp()).sum();
            if s == 0.0 {
                (0.0, f64::NEG_INFINITY)
            } else {
                (s.signum(), top + s.abs().ln())
            }
        }
    }
}

impl LogIntegrand<'_> {
    pub fn eval(&self, u: f64) -> f64 {
        let mut sign = 1.0;
        let mut log_mag = self.weight * u;
        for factor in &self.factors {
            let (s, m) = log_sum(factor.terms, u);
            if s == 0.0 {
                return 0.0;
            }
            if factor.signed {
                sign *= s;
            }
            log_mag += factor.power * m;
        }
        sign * log_mag.exp()
    }

    /// Exponential rate of the integrand as `u → +∞` (`toward_zero = false`)
    /// or `u → −∞`.
    fn rate(&self, toward_zero: bool) -> f64 {
        let mut rate = self.weight;
        for factor in &self.factors {
            let exps = factor.terms.iter().map(|t| t.e);
            let e = if toward_zero {
                exps.fold(f64::INFINITY, f64::min)
            } else {
                exps.fold(f64::NEG_INFINITY, f64::max)
            };
            rate += factor.power * e;
        }
        rate
    }

    fn has_sign_changes(&self) -> bool {
        self.factors.iter().any(|f| f.terms.len() > 1)
    }

    /// Points in `[a, b]` where some multi-term factor changes sign.
    fn sign_breaks(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if !self.has_sign_changes() {
            return out;
        }
        for factor in self.factors.iter().filter(|f| f.terms.len() > 1) {
            let sign_at = |u: f64| log_sum(factor.terms, u).0;
            let mut prev_u = a;
            let mut prev_s = sign_at(a);
            for i in 1..=SIGN_SAMPLES {
                let u = a + (b - a) * i as f64 / SIGN_SAMPLES as f64;
                let s = sign_at(u);
                if s != 0.0 && prev_s != 0.0 && s != prev_s {
                    let (mut lo, mut hi) = (prev_u, u);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if !(mid > lo && mid < hi) {
                            break;
                        }
                        if sign_at(mid) == prev_s {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    out.push(0.5 * (lo + hi));
                }
                if s != 0.0 {
                    prev_s = s;
                }
                prev_u = u;
            }
        }
        out.sort_by(f64::total_cmp);
        out
    }

    fn block(&self, a: f64, b: f64, abs_tol: f64) -> f64 {
        let f = |u: f64| self.eval(u);
        let mut cuts = vec![a];
        cuts.extend(self.sign_breaks(a, b));
        cuts.push(b);
        cuts.windows(2)
            .map(|w| integrate_finite(&f, w[0], w[1], REL_TOL, abs_tol))
            .sum()
    }

    /// Integral over `[u_lo, u_hi]`, either end possibly infinite.
    pub fn integrate(&self, u_lo: f64, u_hi: f64) -> Result<f64> {
        if self.factors.iter().any(|f| f.terms.is_empty()) || !(u_hi > u_lo) {
            return Ok(0.0);
        }
        if u_lo == f64::NEG_INFINITY && self.rate(true) <= 0.0 {
            return Err(Error::DivergentIntegral {
                end: End::Zero,
                detail: format!("integrand grows like t^{} near 0", self.rate(true) - 1.0),
            });
        }
        if u_hi == f64::INFINITY && self.rate(false) >= 0.0 {
            return Err(Error::DivergentIntegral {
                end: End::Infinity,
                detail: format!("integrand decays like t^{} at infinity", self.rate(false) - 1.0),
            });
        }
        let (a, b) = match (u_lo.is_finite(), u_hi.is_finite()) {
            (true, true) => (u_lo, u_hi),
            (true, false) => (u_lo, u_lo + 1.0),
            (false, true) => (u_hi - 1.0, u_hi),
            (false, false) => (-1.0, 1.0),
        };
        let scale_probe = integrate_finite(&|u| self.eval(u), a, b, 1e-6, 0.0).abs();
        let abs_floor = |total: f64| 1e-16 * total.abs().max(scale_probe);
        let mut total = self.block(a, b, abs_floor(0.0));
        if u_hi == f64::INFINITY {
            total += self.tail(b, 1.0, self.rate(false).abs(), total, &abs_floor);
        }
        if u_lo == f64::NEG_INFINITY {
            total += self.tail(a, -1.0, self.rate(true).abs(), total, &abs_floor);
        }
        Ok(total)
    }

    fn tail(&self, start: f64, dir: f64, decay: f64, base: f64, abs_floor: &dyn Fn(f64) -> f64) -> f64 {
        let mut sum = 0.0;
        let mut from = start;
        let mut width = (1.0 / decay).clamp(0.25, 8.0);
        for _ in 0..TAIL_BLOCKS {
            let to = from + dir * width;
            let (lo, hi) = if dir > 0.0 { (from, to) } else { (to, from) };
            let part = self.block(lo, hi, abs_floor(base + sum));
            sum += part;
            let edge = self.eval(to).abs();
            let poly = 1.0 + self.poly_degree() * (1.0 + to.abs()).ln().max(0.0);
            let remaining = edge / decay * poly.exp().min(1e6);
            let running = (base + sum).abs();
            if remaining <= TAIL_FRACTION * running || (running == 0.0 && edge == 0.0) {
                break;
            }
            from = to;
            width *= 2.0;
        }
        sum
    }

    fn poly_degree(&self) -> f64 {
        self.factors
            .iter()
            .map(|f| f.power * f.terms.iter().map(|t| t.m as f64).fold(0.0, f64::max))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gk_polynomial_exact() {
        let v = integrate_finite(&|x: f64| x.powi(5) - 3.0 * x, 0.0, 2.0, 1e-14, 0.0);
        assert_relative_eq!(v, 64.0 / 6.0 - 6.0, max_relative = 1e-14);
    }

    #[test]
    fn log_squared_on_unit_interval() {
        // ∫₀¹ ln² t dt = 2, as ∫ |−ln t|² over t ∈ (0, 1)
        let terms = [Term::with_log(-1.0, 0.0)];
        let g = LogIntegrand { factors: vec![Factor { terms: &terms, power: 2.0, signed: false }], weight: 1.0 };
        let v = g.integrate(f64::NEG_INFINITY, 0.0).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn gamma_tail() {
        // ∫₀¹ |ln t|^{2.5} dt = Γ(3.5)
        let terms = [Term::with_log(1.0, 0.0)];
        let g = LogIntegrand { factors: vec![Factor { terms: &terms, power: 2.5, signed: false }], weight: 1.0 };
        let v = g.integrate(f64::NEG_INFINITY, 0.0).unwrap();
        assert_relative_eq!(v, 15.0 * std::f64::consts::PI.sqrt() / 8.0, max_relative = 1e-11);
    }

    #[test]
    fn sign_change_is_isolated() {
        // ∫₀^∞ |1 − t| e^{−t}… use t^a weight: ∫₁^4 |t − 2| dt = 1/2 + 2 = 2.5
        let terms = [Term::new(1.0, 1.0), Term::new(-2.0, 0.0)];
        let g = LogIntegrand { factors: vec![Factor { terms: &terms, power: 1.0, signed: false }], weight: 1.0 };
        let v = g.integrate(0.0, 4f64.ln()).unwrap();
        assert_relative_eq!(v, 2.5, max_relative = 1e-12);
    }

    #[test]
    fn divergence_is_reported() {
        let terms = [Term::new(1.0, 0.0)];
        let g = LogIntegrand { factors: vec![Factor { terms: &terms, power: 2.0, signed: false }], weight: 1.0 };
        match g.integrate(0.0, f64::INFINITY) {
            Err(Error::DivergentIntegral { end: End::Infinity, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        let terms = [Term::new(1.0, -1.0)];
        let g = LogIntegrand { factors: vec![Factor { terms: &terms, power: 1.0, signed: false }], weight: 1.0 };
        assert!(matches!(
            g.integrate(f64::NEG_INFINITY, 0.0),
            Err(Error::DivergentIntegral { end: End::Zero, .. })
        ));
    }

    #[test]
    fn slow_power_tail() {
        // ∫₁^∞ t^{-1.01} dt = 100
        let terms = [Term::new(1.0, -1.01)];
        let g = LogIntegrand { factors: vec![Factor { terms: &terms, power: 1.0, signed: false }], weight: 1.0 };
        let v = g.integrate(0.0, f64::INFINITY).unwrap();
        assert_relative_eq!(v, 100.0, max_relative = 1e-10);
    }

    #[test]
    fn log_sum_extreme_arguments() {
        let terms = [Term::new(1.0, 2.0), Term::new(-1.0, 1.0)];
        let (s, m) = log_sum(&terms, 800.0);
        assert_eq!(s, 1.0);
        assert_relative_eq!(m, 1600.0, max_relative = 1e-12);
    }
}
