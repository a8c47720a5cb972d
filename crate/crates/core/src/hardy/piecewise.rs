use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// `c · t^e · (ln t)^m` with `m ∈ {0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub c: f64,
    pub e: f64,
    #[serde(default)]
    pub m: u8,
}

impl Term {
    pub fn new(c: f64, e: f64) -> Self {
        Term { c, e, m: 0 }
    }

    pub fn with_log(c: f64, e: f64) -> Self {
        Term { c, e, m: 1 }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let base = self.c * t.powf(self.e);
        if self.m == 0 {
            base
        } else {
            base * t.ln()
        }
    }

    /// `(sign, ln|value|)` at `t = e^u`, finite even where the value itself
    /// would overflow.
    #[inline]
    pub(crate) fn log_eval(&self, u: f64) -> (f64, f64) {
        let mut sign = self.c.signum();
        let mut mag = self.c.abs().ln() + self.e * u;
        if self.m == 1 {
            if u == 0.0 {
                return (0.0, f64::NEG_INFINITY);
            }
            sign *= u.signum();
            mag += u.abs().ln();
        }
        (sign, mag)
    }
}

/// One interval `[lo, hi)` of a piecewise function; `hi` may be `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<Term>,
}

impl Piece {
    pub fn new(lo: f64, hi: f64, terms: Vec<Term>) -> Self {
        Piece { lo, hi, terms }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|term| term.eval(t)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct RawPiece {
    lo: f64,
    hi: Option<f64>,
    terms: Vec<Term>,
}

impl Serialize for Piece {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawPiece {
            lo: self.lo,
            hi: self.hi.is_finite().then_some(self.hi),
            terms: self.terms.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Piece {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPiece::deserialize(d)?;
        Ok(Piece { lo: raw.lo, hi: raw.hi.unwrap_or(f64::INFINITY), terms: raw.terms })
    }
}

/// A function on `(0, ∞)` given exactly as a sum of log-power monomials on
/// each interval of a partition.
///
/// The pieces are sorted, contiguous, and cover `[0, ∞)`. The zero function
/// is a single piece with no terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseLogPower {
    pieces: Vec<Piece>,
}

impl<'de> Deserialize<'de> for PiecewiseLogPower {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            pieces: Vec<Piece>,
        }
        let raw = Raw::deserialize(d)?;
        PiecewiseLogPower::new(raw.pieces).map_err(serde::de::Error::custom)
    }
}

/// Sum of `|c|` below which a merged coefficient is treated as an exact
/// cancellation.
const CANCEL_ULPS: f64 = 16.0 * f64::EPSILON;

fn merge_terms(terms: impl IntoIterator<Item = Term>) -> Vec<Term> {
    let mut acc: Vec<(Term, f64)> = Vec::new();
    for term in terms {
        if term.c == 0.0 {
            continue;
        }
        match acc.iter_mut().find(|(t, _)| t.e == term.e && t.m == term.m) {
            Some((t, scale)) => {
                t.c += term.c;
                *scale += term.c.abs();
            }
            None => acc.push((term, term.c.abs())),
        }
    }
    let mut out: Vec<Term> = acc
        .into_iter()
        .filter(|(t, scale)| t.c.abs() > CANCEL_ULPS * scale)
        .map(|(t, _)| t)
        .collect();
    out.sort_by(|x, y| x.e.total_cmp(&y.e).then(x.m.cmp(&y.m)));
    out
}

impl PiecewiseLogPower {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::MalformedFunction("no pieces".into()));
        }
        if pieces[0].lo != 0.0 {
            return Err(Error::MalformedFunction(format!(
                "first piece starts at {} instead of 0",
                pieces[0].lo
            )));
        }
        if pieces.last().map(|p| p.hi) != Some(f64::INFINITY) {
            return Err(Error::MalformedFunction("last piece must extend to infinity".into()));
        }
        for (i, piece) in pieces.iter().enumerate() {
            if !(piece.lo < piece.hi) || piece.lo.is_nan() {
                return Err(Error::MalformedFunction(format!(
                    "piece {i} has empty interval [{}, {})",
                    piece.lo, piece.hi
                )));
            }
            if i + 1 < pieces.len() && piece.hi != pieces[i + 1].lo {
                return Err(Error::MalformedFunction(format!(
                    "pieces {i} and {} are not contiguous ({} vs {})",
                    i + 1,
                    piece.hi,
                    pieces[i + 1].lo
                )));
            }
            for term in &piece.terms {
                if term.m > 1 {
                    return Err(Error::LogPowerOverflow(format!("term with log power {}", term.m)));
                }
                if !term.c.is_finite() || !term.e.is_finite() {
                    return Err(Error::MalformedFunction(format!("non-finite term {term:?}")));
                }
            }
        }
        let pieces = pieces
            .into_iter()
            .map(|p| Piece { terms: merge_terms(p.terms), ..p })
            .collect();
        Ok(PiecewiseLogPower { pieces })
    }

    pub(crate) fn from_pieces_unchecked(pieces: Vec<Piece>) -> Self {
        let pieces = pieces
            .into_iter()
            .map(|p| Piece { terms: merge_terms(p.terms), ..p })
            .collect();
        PiecewiseLogPower { pieces }
    }

    pub fn zero() -> Self {
        PiecewiseLogPower { pieces: vec![Piece::new(0.0, f64::INFINITY, Vec::new())] }
    }

    /// Partition `0 = b_0 < b_1 < … < b_n = ∞` with the given terms on each
    /// interval.
    pub fn from_breaks(breaks: &[f64], terms: Vec<Vec<Term>>) -> Result<Self> {
        if breaks.len() != terms.len() + 1 {
            return Err(Error::MalformedFunction(format!(
                "{} breakpoints for {} pieces",
                breaks.len(),
                terms.len()
            )));
        }
        let pieces = terms
            .into_iter()
            .enumerate()
            .map(|(i, t)| Piece::new(breaks[i], breaks[i + 1], t))
            .collect();
        Self::new(pieces)
    }

    /// `c · t^e` on `[lo, hi)`, zero elsewhere.
    pub fn monomial_on(lo: f64, hi: f64, c: f64, e: f64) -> Result<Self> {
        let mut breaks = vec![0.0];
        let mut terms = Vec::new();
        if lo > 0.0 {
            breaks.push(lo);
            terms.push(Vec::new());
        }
        terms.push(vec![Term::new(c, e)]);
        if hi.is_finite() {
            breaks.push(hi);
            terms.push(Vec::new());
        }
        breaks.push(f64::INFINITY);
        Self::from_breaks(&breaks, terms)
    }

    pub fn indicator(lo: f64, hi: f64) -> Result<Self> {
        Self::monomial_on(lo, hi, 1.0, 0.0)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Interior breakpoints.
    pub fn breaks(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.lo).collect()
    }

    fn piece_index(&self, t: f64) -> usize {
        // first piece whose hi exceeds t
        self.pieces
            .partition_point(|p| p.hi <= t)
            .min(self.pieces.len() - 1)
    }

    /// Value at `t > 0`; at a breakpoint the right-hand piece is used.
    pub fn eval(&self, t: f64) -> f64 {
        self.pieces[self.piece_index(t)].eval(t)
    }

    /// Split pieces at the given points.
    pub fn refine(&self, points: &[f64]) -> Self {
        let mut cuts: Vec<f64> = points
            .iter()
            .copied()
            .filter(|x| *x > 0.0 && x.is_finite())
            .collect();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut out = Vec::new();
        for piece in &self.pieces {
            let mut lo = piece.lo;
            for &x in cuts.iter().filter(|&&x| x > piece.lo && x < piece.hi) {
                out.push(Piece::new(lo, x, piece.terms.clone()));
                lo = x;
            }
            out.push(Piece::new(lo, piece.hi, piece.terms.clone()));
        }
        PiecewiseLogPower { pieces: out }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&[Term], &[Term]) -> Vec<Term>) -> Self {
        let mut all = self.breaks();
        all.extend(other.breaks());
        let a = self.refine(&all);
        let b = other.refine(&all);
        debug_assert_eq!(a.pieces.len(), b.pieces.len());
        let pieces = a
            .pieces
            .iter()
            .zip(&b.pieces)
            .map(|(pa, pb)| Piece::new(pa.lo, pa.hi, f(&pa.terms, &pb.terms)))
            .collect();
        Self::from_pieces_unchecked(pieces)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |x, y| x.iter().chain(y).copied().collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, factor: f64) -> Self {
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let terms = p.terms.iter().map(|t| Term { c: t.c * factor, ..*t }).collect();
                Piece::new(p.lo, p.hi, terms)
            })
            .collect();
        Self::from_pieces_unchecked(pieces)
    }

    /// `t ↦ f(λ t)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("dilation factor {lambda} must be positive")));
        }
        let ln_l = lambda.ln();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let mut terms = Vec::with_capacity(p.terms.len() * 2);
                for t in &p.terms {
                    let c = t.c * lambda.powf(t.e);
                    if t.m == 0 {
                        terms.push(Term::new(c, t.e));
                    } else {
                        terms.push(Term::with_log(c, t.e));
                        terms.push(Term::new(c * ln_l, t.e));
                    }
                }
                Piece::new(p.lo / lambda, p.hi / lambda, terms)
            })
            .collect();
        Ok(Self::from_pieces_unchecked(pieces))
    }

    /// Merge adjacent pieces with identical terms.
    pub fn simplify(&self) -> Self {
        let mut out: Vec<Piece> = Vec::new();
        for piece in &self.pieces {
            match out.last_mut() {
                Some(last) if last.terms == piece.terms => last.hi = piece.hi,
                _ => out.push(piece.clone()),
            }
        }
        PiecewiseLogPower { pieces: out }
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Piece::is_zero)
    }
}

impl fmt::Display for PiecewiseLogPower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, piece) in self.pieces.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[{}, {}): ", piece.lo, piece.hi)?;
            if piece.terms.is_empty() {
                f.write_str("0")?;
            }
            for (j, t) in piece.terms.iter().enumerate() {
                if j > 0 {
                    f.write_str(" + ")?;
                }
                write!(f, "{}·t^{}", t.c, t.e)?;
                if t.m == 1 {
                    f.write_str("·ln t")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(PiecewiseLogPower::new(vec![]).is_err());
        assert!(PiecewiseLogPower::new(vec![Piece::new(1.0, f64::INFINITY, vec![])]).is_err());
        assert!(PiecewiseLogPower::new(vec![Piece::new(0.0, 1.0, vec![])]).is_err());
        let gap = vec![Piece::new(0.0, 1.0, vec![]), Piece::new(2.0, f64::INFINITY, vec![])];
        assert!(PiecewiseLogPower::new(gap).is_err());
        let bad_log = vec![Piece::new(0.0, f64::INFINITY, vec![Term { c: 1.0, e: 0.0, m: 2 }])];
        assert!(matches!(PiecewiseLogPower::new(bad_log), Err(Error::LogPowerOverflow(_))));
    }

    #[test]
    fn eval_and_breakpoints() {
        let f = PiecewiseLogPower::indicator(1.0, 2.0).unwrap();
        assert_eq!(f.eval(0.5), 0.0);
        assert_eq!(f.eval(1.0), 1.0);
        assert_eq!(f.eval(1.999), 1.0);
        assert_eq!(f.eval(2.0), 0.0);
        assert_eq!(f.breaks(), vec![1.0, 2.0]);
    }

    #[test]
    fn merge_cancels_exactly() {
        let f = PiecewiseLogPower::indicator(0.0, 1.0).unwrap();
        assert!(f.sub(&f).is_zero());
        let g = f.add(&f).scale(0.5);
        assert_eq!(g.simplify(), f.simplify());
    }

    #[test]
    fn dilation() {
        let f = PiecewiseLogPower::new(vec![
            Piece::new(0.0, 1.0, vec![Term::with_log(2.0, 1.5), Term::new(1.0, -0.3)]),
            Piece::new(1.0, f64::INFINITY, vec![Term::new(-1.0, -2.0)]),
        ])
        .unwrap();
        let g = f.dilate(3.0).unwrap();
        for t in [0.01, 0.2, 0.33, 0.34, 5.0] {
            let want = f.eval(3.0 * t);
            assert!((g.eval(t) - want).abs() < 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn json_null_is_infinity() {
        let f = PiecewiseLogPower::monomial_on(0.0, 1.0, 2.0, 1.0).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"hi\":null"));
        let back: PiecewiseLogPower = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
        let parsed: PiecewiseLogPower = serde_json::from_str(
            r#"{"pieces":[{"lo":0,"hi":1,"terms":[{"c":2,"e":1}]},{"lo":1,"hi":null,"terms":[]}]}"#,
        )
        .unwrap();
        assert_eq!(parsed, f);
    }
}
