use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::piecewise::{PiecewiseLogPower, Term};
use crate::constants::{FunctionClass, PowerWeightParams};

/// Exponent margin keeping sampled functions away from the integrability
/// thresholds.
const MARGIN: f64 = 0.05;

/// Random breakpoints `0 < t_1 < … < t_n` spread over a few decades.
fn log_breaks(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut us: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
    us.sort_by(f64::total_cmp);
    us.dedup();
    us.into_iter().map(f64::exp).collect()
}

fn decreasing_steps(rng: &mut ChaCha8Rng, complexity: usize) -> PiecewiseLogPower {
    let inner = log_breaks(rng, complexity.max(1));
    let mut breaks = vec![0.0];
    breaks.extend(&inner);
    breaks.push(f64::INFINITY);
    let steps: Vec<f64> = (0..inner.len()).map(|_| rng.gen_range(0.05..1.0)).collect();
    let mut terms = Vec::with_capacity(inner.len() + 1);
    for j in 0..inner.len() {
        let height: f64 = steps[j..].iter().sum();
        terms.push(vec![Term::new(height, 0.0)]);
    }
    terms.push(Vec::new());
    PiecewiseLogPower::from_breaks(&breaks, terms).expect("valid partition")
}

fn positive_monomials(rng: &mut ChaCha8Rng, params: &PowerWeightParams, complexity: usize, signed: bool) -> PiecewiseLogPower {
    let inner = log_breaks(rng, complexity.max(1));
    let mut breaks = vec![0.0];
    breaks.extend(&inner);
    breaks.push(f64::INFINITY);
    let pieces = inner.len() + 1;
    let near_zero = params.theta() - 1.0 + MARGIN;
    let near_inf = (params.theta() - 1.0).min(0.0) - MARGIN;
    let mut terms = Vec::with_capacity(pieces);
    for j in 0..pieces {
        let mut c = rng.gen_range(-1.0f64..1.0).exp();
        if signed && rng.gen_bool(0.5) {
            c = -c;
        }
        let e = if j == 0 {
            near_zero + rng.gen_range(0.0..1.5)
        } else if j + 1 == pieces {
            if rng.gen_bool(0.5) {
                terms.push(Vec::new());
                continue;
            }
            near_inf - rng.gen_range(0.0..1.5)
        } else {
            rng.gen_range(-2.0..2.0)
        };
        terms.push(vec![Term::new(c, e)]);
    }
    PiecewiseLogPower::from_breaks(&breaks, terms).expect("valid partition")
}

/// A random member of `class` whose weighted norm is finite for `params`.
///
/// Decreasing samples are nonincreasing step functions with compact support.
/// Positive samples are positive monomials on random intervals, with the
/// first and last exponents chosen so that both the function and its dual
/// transform are integrable. General samples flip the sign of each piece at
/// random. `complexity` is the number of breakpoints.
pub fn random_function(
    class: FunctionClass,
    params: &PowerWeightParams,
    seed: u64,
    complexity: usize,
) -> PiecewiseLogPower {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match class {
        FunctionClass::DecreasingA => decreasing_steps(&mut rng, complexity),
        FunctionClass::PositiveB => positive_monomials(&mut rng, params, complexity, false),
        FunctionClass::GeneralC => positive_monomials(&mut rng, params, complexity, true),
    }
}
