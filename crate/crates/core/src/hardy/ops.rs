//! Closed-form Hardy averaging operator and its dual on piecewise log-power
//! functions.

use super::piecewise::{Piece, PiecewiseLogPower, Term};
use crate::error::{Error, Result};

/// Antiderivative of `c s^e (ln s)^m` as terms, for `e ≠ −1`.
fn antiderivative(term: &Term) -> Result<Vec<Term>> {
    let Term { c, e, m } = *term;
    if e == -1.0 {
        return if m == 0 {
            Ok(vec![Term::with_log(c, 0.0)])
        } else {
            Err(Error::LogPowerOverflow("integral of ln(t)/t".into()))
        };
    }
    let q = e + 1.0;
    Ok(if m == 0 {
        vec![Term::new(c / q, q)]
    } else {
        vec![Term::with_log(c / q, q), Term::new(-c / (q * q), q)]
    })
}

fn eval_terms(terms: &[Term], t: f64) -> f64 {
    terms.iter().map(|x| x.eval(t)).sum()
}

fn abs_terms(terms: &[Term], t: f64) -> f64 {
    terms.iter().map(|x| x.eval(t).abs()).sum()
}

/// Combine two scalars, zeroing results that are pure rounding noise.
fn cancel(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.abs() <= 16.0 * f64::EPSILON * (a.abs() + b.abs()) {
        0.0
    } else {
        s
    }
}

/// `Hf(t) = (1/t) ∫₀ᵗ f(s) ds`.
pub fn hardy_h(f: &PiecewiseLogPower) -> Result<PiecewiseLogPower> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(f.pieces().len());
    for (i, piece) in f.pieces().iter().enumerate() {
        let mut anti = Vec::new();
        for term in &piece.terms {
            if piece.lo == 0.0 && !(term.e > -1.0) {
                return Err(Error::NotIntegrableAtZero(format!(
                    "term {}·t^{} on [0, {})",
                    term.c, term.e, piece.hi
                )));
            }
            anti.extend(antiderivative(term)?);
        }
        // G(lo); at lo = 0 every antiderivative vanishes.
        let g_lo = if piece.lo == 0.0 { 0.0 } else { eval_terms(&anti, piece.lo) };
        let constant = cancel(acc, -g_lo);
        let mut terms: Vec<Term> = anti.iter().map(|t| Term { e: t.e - 1.0, ..*t }).collect();
        if constant != 0.0 {
            terms.push(Term::new(constant, -1.0));
        }
        out.push(Piece::new(piece.lo, piece.hi, terms));
        if i + 1 < f.pieces().len() {
            let g_hi = eval_terms(&anti, piece.hi);
            let scale = acc.abs() + abs_terms(&anti, piece.hi) + g_lo.abs();
            let next = acc + g_hi - g_lo;
            acc = if next.abs() <= 16.0 * f64::EPSILON * scale { 0.0 } else { next };
        }
    }
    Ok(PiecewiseLogPower::from_pieces_unchecked(out))
}

/// Antiderivative of `c s^{e−1} (ln s)^m`, i.e. of the dual integrand.
fn dual_antiderivative(term: &Term) -> Result<Vec<Term>> {
    antiderivative(&Term { e: term.e - 1.0, ..*term })
}

/// `H*g(t) = ∫ₜ^∞ g(s)/s ds`.
pub fn hardy_dual(f: &PiecewiseLogPower) -> Result<PiecewiseLogPower> {
    let n = f.pieces().len();
    let mut tail = 0.0;
    let mut out = vec![Piece::new(0.0, 0.0, Vec::new()); n];
    for (i, piece) in f.pieces().iter().enumerate().rev() {
        let mut anti = Vec::new();
        for term in &piece.terms {
            if piece.hi == f64::INFINITY && !(term.e < 0.0) {
                return Err(Error::NotIntegrableAtInfinity(format!(
                    "term {}·t^{} on [{}, ∞)",
                    term.c, term.e, piece.lo
                )));
            }
            anti.extend(dual_antiderivative(term)?);
        }
        let g_hi = if piece.hi == f64::INFINITY { 0.0 } else { eval_terms(&anti, piece.hi) };
        let constant = cancel(tail, g_hi);
        let mut terms: Vec<Term> = anti.iter().map(|t| Term { c: -t.c, ..*t }).collect();
        if constant != 0.0 {
            terms.push(Term::new(constant, 0.0));
        }
        out[i] = Piece::new(piece.lo, piece.hi, terms);
        if i > 0 {
            let g_lo = eval_terms(&anti, piece.lo);
            let scale = tail.abs() + g_hi.abs() + abs_terms(&anti, piece.lo);
            let next = tail + g_hi - g_lo;
            tail = if next.abs() <= 16.0 * f64::EPSILON * scale { 0.0 } else { next };
        }
    }
    Ok(PiecewiseLogPower::from_pieces_unchecked(out))
}
