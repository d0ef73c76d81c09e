//! Periods, fractional powers, critical exponents, and (e,n)-freeness.
//!
//! All exponent arithmetic is exact rational; no floating point is involved
//! in any freeness decision.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::word::Word;

/// An exact rational exponent `|u| / p`, serialized as `"p/q"` (or `"n"`
/// when integral).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent(Ratio<u64>);

impl Exponent {
    pub fn new(numerator: u64, denominator: u64) -> Self {
        Exponent(Ratio::new(numerator, denominator))
    }

    pub fn integer(n: u64) -> Self {
        Exponent(Ratio::from_integer(n))
    }

    pub fn zero() -> Self {
        Exponent(Ratio::zero())
    }

    pub fn numerator(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> u64 {
        *self.0.denom()
    }

    fn ratio(&self) -> Ratio<u64> {
        self.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Exponent> {
        let parse = |t: &str| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("invalid exponent `{s}`")))
        };
        match s.split_once('/') {
            Some((num, den)) => {
                let d = parse(den)?;
                if d == 0 {
                    return Err(Error::Parse("exponent with zero denominator".into()));
                }
                Ok(Exponent::new(parse(num)?, d))
            }
            None => Ok(Exponent::integer(parse(s)?)),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Freeness requirement: no factor `x^f` with `|x| >= min_period` and
/// `f > bound` (strict, the `e⁺` reading) or `f >= bound` (non-strict).
///
/// The period quantifies over all periods of the factor, not only the
/// smallest, since the `x` of `x^f` need not be primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FreenessSpec {
    pub bound: Exponent,
    pub strict: bool,
    pub min_period: usize,
}

impl FreenessSpec {
    /// `e⁺`-freeness: forbids exponents strictly greater than `bound`.
    pub fn strict(bound: Exponent, min_period: usize) -> Self {
        FreenessSpec {
            bound,
            strict: true,
            min_period,
        }
    }

    /// Forbids exponents greater than or equal to `bound`.
    pub fn at_most(bound: Exponent, min_period: usize) -> Self {
        FreenessSpec {
            bound,
            strict: false,
            min_period,
        }
    }

    /// True iff a factor of length `len` with period `p` violates the spec.
    #[inline]
    pub(crate) fn violated_by(&self, len: usize, p: usize) -> bool {
        let exp = Ratio::new(len as u64, p as u64);
        if self.strict {
            exp > self.bound.ratio()
        } else {
            exp >= self.bound.ratio()
        }
    }

    /// Smallest factor length that violates the spec at period `p`.
    pub(crate) fn violation_length(&self, p: usize) -> usize {
        // smallest L with L/p > bound (strict) or >= bound (non-strict)
        let num = self.bound.numerator() as u128 * p as u128;
        let den = self.bound.denominator() as u128;
        let mut l = (num / den) as usize;
        if self.strict || num % den != 0 {
            l += 1;
        }
        l
    }
}

/// Least `p >= 1` with `u[i] = u[i+p]` for all valid `i`.
///
/// Computed from the longest border: the smallest period of a word equals
/// its length minus the length of its longest proper border.
pub fn smallest_period(u: &Word) -> Result<usize> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    let pi = prefix_function(u.symbols());
    Ok(u.len() - pi[u.len() - 1])
}

fn prefix_function(s: &[u8]) -> Vec<usize> {
    let n = s.len();
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && s[i] != s[k] {
            k = pi[k - 1];
        }
        if s[i] == s[k] {
            k += 1;
        }
        pi[i] = k;
    }
    pi
}

/// Max over nonempty factors `u` of `|u| / smallest_period(u)`.
pub fn critical_exponent(w: &Word) -> Result<Exponent> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let sym = w.symbols();
    let n = sym.len();
    let mut best = Ratio::from_integer(1u64);
    // prefix function of every suffix gives the smallest period of every factor
    for i in 0..n {
        let s = &sym[i..];
        let m = s.len();
        let mut pi = vec![0usize; m];
        for j in 1..m {
            let mut k = pi[j - 1];
            while k > 0 && s[j] != s[k] {
                k = pi[k - 1];
            }
            if s[j] == s[k] {
                k += 1;
            }
            pi[j] = k;
            let len = j + 1;
            let p = len - k;
            let exp = Ratio::new(len as u64, p as u64);
            if exp > best {
                best = exp;
            }
        }
    }
    Ok(Exponent(best))
}

/// True iff no factor of `w` has a period `p >= spec.min_period` with
/// exponent violating the spec.
pub fn is_en_free(w: &Word, spec: &FreenessSpec) -> bool {
    let sym = w.symbols();
    let n = sym.len();
    if n == 0 {
        return true;
    }
    for p in spec.min_period..n {
        // longest factor with period p is p plus the longest run of matches
        let mut run = 0usize;
        for k in 0..n - p {
            if sym[k] == sym[k + p] {
                run += 1;
                if spec.violated_by(run + p, p) {
                    return false;
                }
            } else {
                run = 0;
            }
        }
    }
    true
}

/// True iff some factor ending at the last position of `w` violates the
/// spec. Sound for incremental maintenance: any violation in `w` has an end
/// position, and is caught when that position is appended.
pub(crate) fn en_free_violation_at_end(sym: &[u8], spec: &FreenessSpec) -> bool {
    let n = sym.len();
    for p in spec.min_period..n {
        let need = spec.violation_length(p);
        if need > n {
            // longer periods need even longer factors
            break;
        }
        let need_matches = need - p;
        let max_matches = n - p;
        if need_matches > max_matches {
            continue;
        }
        let mut ok = true;
        for j in 0..need_matches {
            if sym[n - 1 - j] != sym[n - 1 - p - j] {
                ok = false;
                break;
            }
        }
        if ok {
            return true;
        }
    }
    false
}

/// Largest rational `e` such that `x^e` (full repetitions of `x` possibly
/// followed by a proper prefix of `x`) occurs as a factor of `w`; zero if
/// `x` itself does not occur.
pub fn max_fractional_power(w: &Word, x: &Word) -> Result<Exponent> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    let sym = w.symbols();
    let pat = x.symbols();
    let n = sym.len();
    let m = pat.len();
    let mut best_len = 0usize;
    for i in 0..n {
        let mut l = 0usize;
        while i + l < n && sym[i + l] == pat[l % m] {
            l += 1;
        }
        if l > best_len {
            best_len = l;
        }
    }
    if best_len < m {
        return Ok(Exponent::zero());
    }
    Ok(Exponent::new(best_len as u64, m as u64))
}
