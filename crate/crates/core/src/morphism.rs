//! Morphisms on words: per-letter image tables extended by concatenation.
//!
//! Codings (letter-to-letter maps) are the 1-uniform special case. The text
//! format is one line per letter, `i -> image`, with images in the word
//! text format.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::Word;

/// A morphism determined by the images of the letters `0..domain_size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Morphism {
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(images: Vec<Word>) -> Result<Self> {
        if images.is_empty() || images.len() > 255 {
            return Err(Error::InvalidParameter(format!(
                "morphism domain must have 1..=255 letters, got {}",
                images.len()
            )));
        }
        Ok(Morphism { images })
    }

    pub fn identity(alphabet_size: u8) -> Self {
        let images = (0..alphabet_size)
            .map(|s| Word::new(vec![s], alphabet_size).unwrap())
            .collect();
        Morphism { images }
    }

    pub fn domain_size(&self) -> u8 {
        self.images.len() as u8
    }

    /// Smallest alphabet containing every image symbol.
    pub fn target_size(&self) -> u8 {
        self.images
            .iter()
            .flat_map(|w| w.symbols().iter().copied())
            .max()
            .map_or(0, |m| m + 1)
    }

    pub fn image(&self, letter: u8) -> &Word {
        &self.images[letter as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn is_nonerasing(&self) -> bool {
        self.images.iter().all(|w| !w.is_empty())
    }

    /// `Some(q)` iff every image has length `q`.
    pub fn uniform_length(&self) -> Option<usize> {
        let q = self.images[0].len();
        self.images.iter().all(|w| w.len() == q).then_some(q)
    }

    pub fn is_coding(&self) -> bool {
        self.uniform_length() == Some(1)
    }

    pub fn max_image_len(&self) -> usize {
        self.images.iter().map(Word::len).max().unwrap_or(0)
    }

    pub fn min_image_len(&self) -> usize {
        self.images.iter().map(Word::len).min().unwrap_or(0)
    }

    /// `h(w)`: concatenation of the images of the symbols of `w`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Vec::with_capacity(w.len() * self.max_image_len());
        for &s in w.symbols() {
            if s >= self.domain_size() {
                return Err(Error::SymbolOutOfRange {
                    symbol: s,
                    alphabet_size: self.domain_size(),
                });
            }
            out.extend_from_slice(self.images[s as usize].symbols());
        }
        Word::new(out, self.target_size().max(1))
    }

    pub(crate) fn apply_symbols_into(&self, w: &[u8], out: &mut Vec<u8>) {
        for &s in w {
            out.extend_from_slice(self.images[s as usize].symbols());
        }
    }

    /// `(self ∘ inner)(a) = self(inner(a))` for every letter `a`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.target_size() > self.domain_size() {
            return Err(Error::AlphabetMismatch {
                expected: self.domain_size(),
                found: inner.target_size(),
            });
        }
        let images = inner
            .images
            .iter()
            .map(|w| self.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Morphism::new(images)
    }

    /// First `n` symbols of the fixed point `h^ω(seed)`.
    ///
    /// Requires `h(seed)` to start with `seed` and have length at least 2,
    /// and `h` to be nonerasing, so that iteration grows without bound.
    pub fn fixed_point_prefix(&self, seed: u8, n: usize) -> Result<Word> {
        if seed >= self.domain_size() {
            return Err(Error::SymbolOutOfRange {
                symbol: seed,
                alphabet_size: self.domain_size(),
            });
        }
        if self.target_size() > self.domain_size() {
            return Err(Error::AlphabetMismatch {
                expected: self.domain_size(),
                found: self.target_size(),
            });
        }
        let seed_image = self.image(seed);
        if !self.is_nonerasing() || seed_image.len() < 2 || seed_image.symbols()[0] != seed {
            return Err(Error::NotProlongable(seed));
        }
        let mut buf = vec![seed];
        while buf.len() < n {
            let mut next = Vec::with_capacity(buf.len() * self.max_image_len());
            self.apply_symbols_into(&buf, &mut next);
            next.truncate(n.max(1));
            buf = next;
        }
        buf.truncate(n);
        Word::new(buf, self.domain_size())
    }
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, img) in self.images.iter().enumerate() {
            writeln!(f, "{} -> {}", crate::word::symbol_to_char(i as u8), img)?;
        }
        Ok(())
    }
}

impl FromStr for Morphism {
    type Err = Error;

    /// Parses the `i -> image` line format. Letters must appear in order
    /// `0, 1, 2, ...` with no gaps.
    fn from_str(s: &str) -> Result<Morphism> {
        let mut images = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::Parse(format!("expected `i -> image`, got `{line}`")))?;
            let letter: Word = lhs.trim().parse()?;
            if letter.len() != 1 || letter.symbols()[0] as usize != images.len() {
                return Err(Error::Parse(format!(
                    "letter lines must be 0, 1, 2, ... in order; got `{}`",
                    lhs.trim()
                )));
            }
            images.push(rhs.trim().parse()?);
        }
        if images.is_empty() {
            return Err(Error::Parse("empty morphism".into()));
        }
        Morphism::new(images)
    }
}

/// Checks that for every letter `i`, every occurrence of `h(i)` in `h(w)`
/// is aligned with an image boundary and arises from the letter `i` itself.
///
/// An occurrence of `h(i)` spans at most `⌈max|h|/min|h|⌉ + 1` consecutive
/// images, so scanning all domain words one letter longer than that is
/// exhaustive; the derived span is returned alongside the verdict.
pub fn synchronization_check(h: &Morphism) -> Result<(bool, usize)> {
    if !h.is_nonerasing() {
        return Err(Error::InvalidParameter(
            "synchronization check requires a nonerasing morphism".into(),
        ));
    }
    let k = h.domain_size();
    let span = h.max_image_len().div_ceil(h.min_image_len()) + 2;
    let mut word = vec![0u8; span];
    let mut image = Vec::new();
    loop {
        image.clear();
        h.apply_symbols_into(&word, &mut image);
        // image boundaries of this domain word
        let mut boundaries = Vec::with_capacity(span + 1);
        let mut pos = 0usize;
        for &a in &word {
            boundaries.push((pos, a));
            pos += h.image(a).len();
        }
        for i in 0..k {
            let pat = h.image(i).symbols();
            for start in 0..=image.len().saturating_sub(pat.len()) {
                if &image[start..start + pat.len()] == pat
                    && !boundaries.contains(&(start, i))
                {
                    return Ok((false, span));
                }
            }
        }
        // next word in lexicographic order
        let mut idx = span;
        loop {
            if idx == 0 {
                return Ok((true, span));
            }
            idx -= 1;
            if word[idx] + 1 < k {
                word[idx] += 1;
                word[idx + 1..].fill(0);
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn m(lines: &[&str]) -> Morphism {
        lines.join("\n").parse().unwrap()
    }

    fn thue_morse() -> Morphism {
        m(&["0 -> 01", "1 -> 10"])
    }

    #[test]
    fn apply_identity() {
        let id = Morphism::identity(3);
        assert_eq!(id.apply(&w("0120")).unwrap(), w("0120"));
    }

    #[test]
    fn apply_thue_morse_step() {
        assert_eq!(thue_morse().apply(&w("01")).unwrap(), w("0110"));
    }

    #[test]
    fn apply_rejects_out_of_alphabet() {
        assert!(thue_morse().apply(&w("012")).is_err());
    }

    #[test]
    fn compose_identity() {
        let h = thue_morse();
        let id = Morphism::identity(2);
        assert_eq!(id.compose(&h).unwrap(), h);
        assert_eq!(h.compose(&id).unwrap(), h);
    }

    #[test]
    fn compose_alphabet_mismatch() {
        let tern = Morphism::identity(3);
        assert!(thue_morse().compose(&tern).is_err());
    }

    #[test]
    fn fixed_point_thue_morse() {
        let h = thue_morse();
        assert_eq!(h.fixed_point_prefix(0, 8).unwrap(), w("01101001"));
        assert_eq!(h.fixed_point_prefix(0, 0).unwrap(), Word::empty(2));
    }

    #[test]
    fn fixed_point_prefix_nesting() {
        let h = thue_morse();
        let long = h.fixed_point_prefix(0, 33).unwrap();
        for n in 0..=33 {
            let short = h.fixed_point_prefix(0, n).unwrap();
            assert_eq!(short.symbols(), &long.symbols()[..n]);
        }
    }

    #[test]
    fn fixed_point_rejects_non_prolongable() {
        let h = m(&["0 -> 0"]);
        assert_eq!(h.fixed_point_prefix(0, 4).unwrap_err(), Error::NotProlongable(0));
        let h = m(&["0 -> 10", "1 -> 01"]);
        assert!(h.fixed_point_prefix(0, 4).is_err());
    }

    #[test]
    fn apply_is_a_monoid_morphism() {
        let h = thue_morse();
        let (u, v) = (w("0110"), w("10"));
        let mut uv = u.symbols().to_vec();
        uv.extend_from_slice(v.symbols());
        let uv = Word::binary(uv).unwrap();
        let mut cat = h.apply(&u).unwrap().into_symbols();
        cat.extend_from_slice(h.apply(&v).unwrap().symbols());
        assert_eq!(h.apply(&uv).unwrap().symbols(), &cat[..]);
    }

    #[test]
    fn parse_display_roundtrip() {
        let h = m(&["0 -> 0010110011100011", "1 -> 001011000111", "2 -> 00101110"]);
        assert_eq!(h.image(0), &w("0010110011100011"));
        assert_eq!(h.uniform_length(), None);
        let text = h.to_string();
        assert_eq!(text.parse::<Morphism>().unwrap(), h);
        assert!("1 -> 01".parse::<Morphism>().is_err());
        assert!("0 => 01".parse::<Morphism>().is_err());
    }

    #[test]
    fn synchronization_counterexamples() {
        // h(0) = 00 occurs inside h(1) = 000 off the image boundary
        let h = m(&["0 -> 00", "1 -> 000"]);
        assert!(!synchronization_check(&h).unwrap().0);
        // Thue-Morse: h(10) = 1001 contains 01 unaligned
        assert!(!synchronization_check(&thue_morse()).unwrap().0);
        assert!(synchronization_check(&Morphism::identity(1)).unwrap().0);
        assert!(synchronization_check(&Morphism::identity(3)).unwrap().0);
    }

    proptest::proptest! {
        #[test]
        fn compose_associates(
            f_imgs in proptest::collection::vec(proptest::collection::vec(0u8..2, 1..4), 2),
            g_imgs in proptest::collection::vec(proptest::collection::vec(0u8..2, 1..4), 2),
            h_imgs in proptest::collection::vec(proptest::collection::vec(0u8..2, 1..4), 2),
        ) {
            let mk = |imgs: Vec<Vec<u8>>| {
                Morphism::new(imgs.into_iter().map(|v| Word::binary(v).unwrap()).collect()).unwrap()
            };
            let (f, g, h) = (mk(f_imgs), mk(g_imgs), mk(h_imgs));
            let left = f.compose(&g).unwrap().compose(&h).unwrap();
            let right = f.compose(&g.compose(&h).unwrap()).unwrap();
            proptest::prop_assert_eq!(left, right);
        }
    }
}
