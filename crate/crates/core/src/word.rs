//! Words over small integer alphabets and their square/antisquare inventories.
//!
//! A square is a nonempty factor of the form `xx`; an antisquare is a binary
//! factor of the form `x·x̄` where `x̄` flips every bit. Inventories are sets
//! of distinct factors, not occurrence counts.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over the alphabet `{0, ..., alphabet_size-1}`.
///
/// Equality, ordering, and hashing look at the symbols only; `alphabet_size`
/// is carried metadata. Ordering is by length first, then lexicographic,
/// which is the order inventories are reported in.
#[derive(Clone, Debug)]
pub struct Word {
    symbols: Vec<u8>,
    alphabet_size: u8,
}

impl Word {
    pub fn new(symbols: Vec<u8>, alphabet_size: u8) -> Result<Self> {
        if let Some(&s) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet_size,
            });
        }
        Ok(Word {
            symbols,
            alphabet_size,
        })
    }

    /// A binary word; every symbol must be 0 or 1.
    pub fn binary(symbols: Vec<u8>) -> Result<Self> {
        Word::new(symbols, 2)
    }

    pub fn empty(alphabet_size: u8) -> Self {
        Word {
            symbols: Vec::new(),
            alphabet_size,
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_size(&self) -> u8 {
        self.alphabet_size
    }

    pub fn is_binary(&self) -> bool {
        self.alphabet_size <= 2
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    /// The factor `self[start..end]`, keeping the alphabet.
    pub fn factor(&self, start: usize, end: usize) -> Word {
        Word {
            symbols: self.symbols[start..end].to_vec(),
            alphabet_size: self.alphabet_size,
        }
    }

    pub fn reverse(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word {
            symbols,
            alphabet_size: self.alphabet_size,
        }
    }

    /// Widen the declared alphabet without changing the symbols.
    pub fn with_alphabet(mut self, alphabet_size: u8) -> Result<Word> {
        if let Some(&s) = self.symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(Error::SymbolOutOfRange {
                symbol: s,
                alphabet_size,
            });
        }
        self.alphabet_size = alphabet_size;
        Ok(self)
    }
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Word {}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.symbols.hash(state);
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.symbols
            .len()
            .cmp(&other.symbols.len())
            .then_with(|| self.symbols.cmp(&other.symbols))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const SYMBOL_CHARS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

pub(crate) fn symbol_to_char(s: u8) -> char {
    if (s as usize) < SYMBOL_CHARS.len() {
        SYMBOL_CHARS[s as usize] as char
    } else {
        '?'
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            write!(f, "{}", symbol_to_char(s))?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Symbols are `0`-`9` then `a`-`z`. The alphabet size is inferred as
    /// the largest symbol plus one, but at least 2 so that parsed unary
    /// words still admit binary operations.
    fn from_str(s: &str) -> Result<Word> {
        let mut symbols = Vec::with_capacity(s.len());
        for c in s.chars() {
            let v = match c {
                '0'..='9' => c as u8 - b'0',
                'a'..='z' => c as u8 - b'a' + 10,
                _ => return Err(Error::Parse(format!("invalid symbol character `{c}`"))),
            };
            symbols.push(v);
        }
        let k = symbols.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        Ok(Word {
            symbols,
            alphabet_size: k,
        })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Symbolwise 0↔1 complement of a binary word. An involution.
pub fn complement(w: &Word) -> Result<Word> {
    if !w.is_binary() {
        return Err(Error::NonBinary(w.alphabet_size));
    }
    Ok(Word {
        symbols: w.symbols.iter().map(|&s| 1 - s).collect(),
        alphabet_size: 2,
    })
}

/// True iff `u` is a square, i.e. nonempty and of the form `xx`.
pub fn is_square(u: &Word) -> bool {
    let n = u.len();
    n > 0 && n % 2 == 0 && u.symbols[..n / 2] == u.symbols[n / 2..]
}

/// True iff `u` is an antisquare, i.e. a nonempty binary word `x·x̄`.
pub fn is_antisquare(u: &Word) -> bool {
    let n = u.len();
    n > 0
        && n % 2 == 0
        && u.symbols.iter().all(|&s| s < 2)
        && (0..n / 2).all(|i| u.symbols[i] != u.symbols[i + n / 2])
}

/// Calls `f(start, period)` for every square occurrence `w[start..start+2p]`
/// with period `p <= max_period`.
///
/// Runs in O(n) per period: for fixed `p`, a square of period `p` starts at
/// `s` iff `w[k] == w[k+p]` for `p` consecutive `k` from `s`.
pub(crate) fn for_each_square_occurrence(
    w: &[u8],
    max_period: usize,
    mut f: impl FnMut(usize, usize),
) {
    let n = w.len();
    for p in 1..=max_period.min(n / 2) {
        let mut run = 0usize;
        for k in 0..n - p {
            if w[k] == w[k + p] {
                run += 1;
                if run >= p {
                    f(k + 1 - p, p);
                }
            } else {
                run = 0;
            }
        }
    }
}

/// Antisquare analogue of [`for_each_square_occurrence`]; caller guarantees
/// the word is binary.
pub(crate) fn for_each_antisquare_occurrence(
    w: &[u8],
    max_half: usize,
    mut f: impl FnMut(usize, usize),
) {
    let n = w.len();
    for p in 1..=max_half.min(n / 2) {
        let mut run = 0usize;
        for k in 0..n - p {
            if w[k] != w[k + p] {
                run += 1;
                if run >= p {
                    f(k + 1 - p, p);
                }
            } else {
                run = 0;
            }
        }
    }
}

/// The set of distinct square factors of `w`.
pub fn distinct_squares(w: &Word) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for_each_square_occurrence(w.symbols(), w.len() / 2, |s, p| {
        out.insert(w.factor(s, s + 2 * p));
    });
    out
}

/// The set of distinct antisquare factors of a binary word.
pub fn distinct_antisquares(w: &Word) -> Result<BTreeSet<Word>> {
    if !w.is_binary() {
        return Err(Error::NonBinary(w.alphabet_size));
    }
    let mut out = BTreeSet::new();
    for_each_antisquare_occurrence(w.symbols(), w.len() / 2, |s, p| {
        out.insert(w.factor(s, s + 2 * p));
    });
    Ok(out)
}

pub fn is_squarefree(w: &Word) -> bool {
    let mut found = false;
    let sym = w.symbols();
    let n = sym.len();
    'outer: for p in 1..=n / 2 {
        let mut run = 0usize;
        for k in 0..n - p {
            if sym[k] == sym[k + p] {
                run += 1;
                if run >= p {
                    found = true;
                    break 'outer;
                }
            } else {
                run = 0;
            }
        }
    }
    !found
}

/// Distinct squares and antisquares of a scanned word.
///
/// Antisquares are only defined over the binary alphabet; for larger
/// alphabets the antisquare set is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorInventory {
    pub squares: BTreeSet<Word>,
    pub antisquares: BTreeSet<Word>,
    #[serde(skip)]
    pub source_length: usize,
}

impl FactorInventory {
    pub fn scan(w: &Word) -> FactorInventory {
        FactorInventory {
            squares: distinct_squares(w),
            antisquares: distinct_antisquares(w).unwrap_or_default(),
            source_length: w.len(),
        }
    }

    pub fn combined_count(&self) -> usize {
        self.squares.len() + self.antisquares.len()
    }
}
