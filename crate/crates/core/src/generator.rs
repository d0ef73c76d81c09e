//! Backtracking enumerators for constrained word families.
//!
//! The enumeration tree is sound only for prefix-closed predicates: every
//! prefix of an accepted word must be accepted, so a rejected node prunes
//! its whole subtree.

use crate::repetition::{en_free_violation_at_end, Exponent, FreenessSpec};
use crate::word::Word;

/// A prefix-closed acceptance test, evaluated incrementally: `admits` is
/// called with the whole word but may assume every proper prefix was
/// already admitted, so implementations only need to examine violations
/// ending at the last position.
pub trait PrefixPredicate {
    fn admits(&self, word: &[u8]) -> bool;
}

/// Admits every word.
pub struct AllWords;

impl PrefixPredicate for AllWords {
    fn admits(&self, _: &[u8]) -> bool {
        true
    }
}

/// Admits squarefree words.
pub struct Squarefree;

impl PrefixPredicate for Squarefree {
    fn admits(&self, word: &[u8]) -> bool {
        // a new square must end at the last position
        let n = word.len();
        for p in 1..=n / 2 {
            if word[n - 2 * p..n - p] == word[n - p..] {
                return false;
            }
        }
        true
    }
}

/// Admits `(e,n)`-free words per the given spec.
pub struct EnFree(pub FreenessSpec);

impl EnFree {
    /// The ternary repetition threshold: `(7/4⁺, 1)`-freeness.
    pub fn dejean() -> Self {
        EnFree(FreenessSpec::strict(Exponent::new(7, 4), 1))
    }
}

impl PrefixPredicate for EnFree {
    fn admits(&self, word: &[u8]) -> bool {
        !en_free_violation_at_end(word, &self.0)
    }
}

/// An arbitrary prefix-closed closure over the whole word.
pub struct Closure<F: Fn(&[u8]) -> bool>(pub F);

impl<F: Fn(&[u8]) -> bool> PrefixPredicate for Closure<F> {
    fn admits(&self, word: &[u8]) -> bool {
        (self.0)(word)
    }
}

pub struct EnumerationSpec<P> {
    pub alphabet_size: u8,
    pub max_length: usize,
    pub predicate: P,
}

/// Depth-first lexicographic enumeration of all words of length at most
/// `max_length` accepted by the predicate, the empty word included.
pub fn enumerate<P: PrefixPredicate>(spec: EnumerationSpec<P>) -> Enumerator<P> {
    Enumerator {
        word: Vec::with_capacity(spec.max_length),
        root_emitted: false,
        done: false,
        spec,
    }
}

pub struct Enumerator<P> {
    spec: EnumerationSpec<P>,
    word: Vec<u8>,
    root_emitted: bool,
    done: bool,
}

impl<P: PrefixPredicate> Enumerator<P> {
    fn current(&self) -> Word {
        Word::new(self.word.clone(), self.spec.alphabet_size).unwrap()
    }

    /// Advance to the next accepted word in DFS preorder, starting the
    /// descent at symbol `from` on the current depth.
    fn advance(&mut self, mut from: u8) -> bool {
        loop {
            if self.word.len() < self.spec.max_length {
                let mut sym = from;
                while sym < self.spec.alphabet_size {
                    self.word.push(sym);
                    if self.spec.predicate.admits(&self.word) {
                        return true;
                    }
                    self.word.pop();
                    sym += 1;
                }
            }
            // exhausted this depth: backtrack and try the next sibling
            match self.word.pop() {
                Some(last) => from = last + 1,
                None => return false,
            }
        }
    }
}

impl<P: PrefixPredicate> Iterator for Enumerator<P> {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        if !self.root_emitted {
            self.root_emitted = true;
            return Some(self.current());
        }
        if self.advance(0) {
            Some(self.current())
        } else {
            self.done = true;
            None
        }
    }
}

/// All ternary squarefree words of length exactly `n`.
pub fn squarefree_ternary(n: usize) -> impl Iterator<Item = Word> {
    enumerate(EnumerationSpec {
        alphabet_size: 3,
        max_length: n,
        predicate: Squarefree,
    })
    .filter(move |w| w.len() == n)
}

/// All ternary `(7/4⁺)`-free words of length exactly `n`.
pub fn dejean_free_ternary(n: usize) -> impl Iterator<Item = Word> {
    enumerate(EnumerationSpec {
        alphabet_size: 3,
        max_length: n,
        predicate: EnFree::dejean(),
    })
    .filter(move |w| w.len() == n)
}
