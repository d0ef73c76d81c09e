//! Pseudosquare detection: factors `x·x'` where `x'` is the image of `x`
//! under a permutation of the alphabet, an arbitrary transformation
//! (coding), or a nonerasing morphism.
//!
//! Morphism matching — deciding whether `y = h(x)` for some morphism `h` —
//! is NP-complete in general; the backtracking here fixes image lengths
//! letter by letter, pins each image at its first occurrence, and verifies
//! later occurrences. Budgets keep the instances used by the scans small.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PseudosquareKind {
    Permutation,
    Transformation,
    Morphic,
}

/// Which side of the factor is the plain `x`: `x·witness(x)` or
/// `witness(x)·x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    XThenImage,
    ImageThenX,
}

/// Caps on the morphisms considered by a morphic scan: the total image
/// length `Σ|h(a)|` over all domain letters, and whether empty images are
/// allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MatchBudget {
    pub max_total_image: Option<usize>,
    pub require_nonerasing: bool,
}

impl MatchBudget {
    pub fn nonerasing() -> Self {
        MatchBudget {
            max_total_image: None,
            require_nonerasing: true,
        }
    }

    pub fn nonerasing_capped(max_total_image: usize) -> Self {
        MatchBudget {
            max_total_image: Some(max_total_image),
            require_nonerasing: true,
        }
    }
}

/// A located pseudosquare: the factor at `position` equals `x·witness(x)`
/// (or `witness(x)·x` for the flipped orientation).
#[derive(Clone, Debug, Serialize)]
pub struct PseudosquareHit {
    pub position: usize,
    pub x: Word,
    pub witness: Morphism,
    pub kind: PseudosquareKind,
    pub orientation: Orientation,
}

impl PseudosquareHit {
    /// Identity check: recompute `witness(x)` and compare against the
    /// factor of `w` at the recorded position.
    pub fn verify(&self, w: &Word) -> Result<bool> {
        let image = self.witness.apply(&self.x)?;
        let total = self.x.len() + image.len();
        if self.position + total > w.len() {
            return Ok(false);
        }
        let factor = &w.symbols()[self.position..self.position + total];
        let ok = match self.orientation {
            Orientation::XThenImage => {
                factor[..self.x.len()] == *self.x.symbols()
                    && factor[self.x.len()..] == *image.symbols()
            }
            Orientation::ImageThenX => {
                factor[..image.len()] == *image.symbols()
                    && factor[image.len()..] == *self.x.symbols()
            }
        };
        Ok(ok)
    }
}

/// Pointwise letter map sending `x` to `y`, if one exists. `injective`
/// additionally requires distinct letters to map to distinct letters,
/// which is exactly extendability to a permutation of any finite alphabet
/// containing the letters involved.
pub(crate) fn coding_map(x: &[u8], y: &[u8], injective: bool) -> Option<Vec<Option<u8>>> {
    debug_assert_eq!(x.len(), y.len());
    let k = x
        .iter()
        .chain(y.iter())
        .copied()
        .max()
        .map_or(1, |m| m as usize + 1);
    let mut map: Vec<Option<u8>> = vec![None; k];
    for (&a, &b) in x.iter().zip(y) {
        match map[a as usize] {
            Some(prev) if prev != b => return None,
            Some(_) => {}
            None => map[a as usize] = Some(b),
        }
    }
    if injective {
        let mut used = vec![false; k];
        for m in map.iter().flatten() {
            if used[*m as usize] {
                return None;
            }
            used[*m as usize] = true;
        }
    }
    Some(map)
}

/// Complete a partial letter map to a total coding on `alphabet_size`
/// letters. Unmapped letters go to themselves for transformations; for
/// permutations they take the unused targets in increasing order, which
/// keeps the completion a bijection.
fn complete_coding(map: &[Option<u8>], alphabet_size: u8, injective: bool) -> Morphism {
    let k = alphabet_size as usize;
    let mut images: Vec<Option<u8>> = (0..k).map(|a| map.get(a).copied().flatten()).collect();
    if injective {
        let mut used = vec![false; k];
        for m in images.iter().flatten() {
            used[*m as usize] = true;
        }
        let mut free = (0..k as u8).filter(|&t| !used[t as usize]);
        for img in images.iter_mut() {
            if img.is_none() {
                *img = free.next();
            }
        }
    }
    let words = images
        .into_iter()
        .enumerate()
        .map(|(a, img)| Word::new(vec![img.unwrap_or(a as u8)], alphabet_size).unwrap())
        .collect();
    Morphism::new(words).unwrap()
}

fn find_coding_pseudosquare(
    w: &Word,
    min_len: usize,
    injective: bool,
    bidirectional: bool,
) -> Option<PseudosquareHit> {
    let sym = w.symbols();
    let n = sym.len();
    let kind = if injective {
        PseudosquareKind::Permutation
    } else {
        PseudosquareKind::Transformation
    };
    for i in 0..n {
        for len in min_len..=(n - i) / 2 {
            let (x, y) = (&sym[i..i + len], &sym[i + len..i + 2 * len]);
            if let Some(map) = coding_map(x, y, injective) {
                return Some(PseudosquareHit {
                    position: i,
                    x: w.factor(i, i + len),
                    witness: complete_coding(&map, w.alphabet_size(), injective),
                    kind,
                    orientation: Orientation::XThenImage,
                });
            }
            if bidirectional {
                if let Some(map) = coding_map(y, x, injective) {
                    return Some(PseudosquareHit {
                        position: i,
                        x: w.factor(i + len, i + 2 * len),
                        witness: complete_coding(&map, w.alphabet_size(), injective),
                        kind,
                        orientation: Orientation::ImageThenX,
                    });
                }
            }
        }
    }
    None
}

/// Leftmost, then shortest, factor `x·p(x)` with `|x| >= min_len` and `p`
/// extendable to a permutation of the alphabet.
pub fn find_permutation_pseudosquare(w: &Word, min_len: usize) -> Option<PseudosquareHit> {
    find_coding_pseudosquare(w, min_len.max(1), true, false)
}

/// Like the permutation case but for arbitrary transformations; with
/// `bidirectional`, factors `x·x'` with `x = t(x')` count as well.
pub fn find_transformation_pseudosquare(
    w: &Word,
    min_len: usize,
    bidirectional: bool,
) -> Option<PseudosquareHit> {
    find_coding_pseudosquare(w, min_len.max(1), false, bidirectional)
}

/// True iff some coding pseudosquare factor ends at the last position.
/// Used by searches: a new violation in an extended word must end at the
/// appended symbol.
pub(crate) fn coding_hit_at_end(
    sym: &[u8],
    min_len: usize,
    injective: bool,
    bidirectional: bool,
) -> bool {
    let n = sym.len();
    for len in min_len..=n / 2 {
        let (x, y) = (&sym[n - 2 * len..n - len], &sym[n - len..]);
        if coding_map(x, y, injective).is_some() {
            return true;
        }
        if bidirectional && coding_map(y, x, injective).is_some() {
            return true;
        }
    }
    false
}

/// Backtracks over image-length assignments for the distinct letters of
/// `x` (in increasing letter order, lengths increasing), pinning images at
/// first use. Calls `emit` with each morphism `h` such that `h(x)` equals
/// the prefix of `region` of the corresponding length; stops early when
/// `emit` returns true. `exact` forces `|h(x)| == region.len()`.
fn match_assignments(
    x: &[u8],
    region: &[u8],
    alphabet_size: u8,
    budget: &MatchBudget,
    exact: bool,
    emit: &mut impl FnMut(Morphism, usize) -> bool,
) -> bool {
    let k = alphabet_size as usize;
    let mut counts = vec![0usize; k];
    for &a in x {
        counts[a as usize] += 1;
    }
    let letters: Vec<usize> = (0..k).filter(|&a| counts[a] > 0).collect();
    let absent_count = k - letters.len();
    let min_image = usize::from(budget.require_nonerasing);
    // budget consumed by letters not occurring in x, assigned minimal images
    let absent_cost = absent_count * min_image;
    let mut lens = vec![0usize; letters.len()];

    fn rec(
        x: &[u8],
        region: &[u8],
        letters: &[usize],
        counts: &[usize],
        lens: &mut [usize],
        idx: usize,
        committed: usize,
        used_budget: usize,
        budget: &MatchBudget,
        absent_cost: usize,
        min_image: usize,
        alphabet_size: u8,
        exact: bool,
        emit: &mut impl FnMut(Morphism, usize) -> bool,
    ) -> bool {
        if idx == letters.len() {
            let total = committed;
            if exact && total != region.len() {
                return false;
            }
            // verify: walk x, pinning each image at its first occurrence
            let k = alphabet_size as usize;
            let mut slices: Vec<Option<&[u8]>> = vec![None; k];
            let mut pos = 0usize;
            for &a in x {
                let l = lens[letters.iter().position(|&b| b == a as usize).unwrap()];
                let piece = &region[pos..pos + l];
                match slices[a as usize] {
                    Some(prev) => {
                        if prev != piece {
                            return false;
                        }
                    }
                    None => slices[a as usize] = Some(piece),
                }
                pos += l;
            }
            let target = region.iter().copied().max().map_or(2, |m| (m + 1).max(2));
            let images: Vec<Word> = (0..k)
                .map(|a| match slices[a] {
                    Some(s) => Word::new(s.to_vec(), target).unwrap(),
                    None if min_image == 1 => Word::new(vec![0], target).unwrap(),
                    None => Word::empty(target),
                })
                .collect();
            return emit(Morphism::new(images).unwrap(), total);
        }
        let a = letters[idx];
        let c = counts[a];
        // remaining letters need at least their minimal images
        let tail_min: usize = letters[idx + 1..].iter().map(|&b| counts[b] * min_image).sum();
        let mut l = min_image;
        loop {
            let committed2 = committed + c * l;
            if committed2 + tail_min > region.len() {
                return false;
            }
            if let Some(cap) = budget.max_total_image {
                let tail_budget = (letters.len() - idx - 1) * min_image;
                if used_budget + l + tail_budget + absent_cost > cap {
                    return false;
                }
            }
            lens[idx] = l;
            if rec(
                x,
                region,
                letters,
                counts,
                lens,
                idx + 1,
                committed2,
                used_budget + l,
                budget,
                absent_cost,
                min_image,
                alphabet_size,
                exact,
                emit,
            ) {
                return true;
            }
            l += 1;
        }
    }

    rec(
        x,
        region,
        &letters,
        &counts,
        &mut lens,
        0,
        0,
        0,
        budget,
        absent_cost,
        min_image,
        alphabet_size,
        exact,
        emit,
    )
}

/// A morphism `h` on `x`'s alphabet with `h(x) = y` and `Σ|h(a)|` within
/// budget, or `None`. Letters absent from `x` get the minimal image (`0`,
/// or empty when erasing is allowed). Deterministic: the image-length
/// tuple returned is the lexicographically least feasible one.
pub fn morphism_match(x: &Word, y: &Word, budget: &MatchBudget) -> Result<Option<Morphism>> {
    if x.is_empty() {
        return Err(Error::EmptyWord);
    }
    let mut found = None;
    match_assignments(
        x.symbols(),
        y.symbols(),
        x.alphabet_size(),
        budget,
        true,
        &mut |h, _| {
            found = Some(h);
            true
        },
    );
    Ok(found)
}

/// Leftmost factor occurrence `x·h(x)` with `min_len <= |x| <= max_len`
/// and `h` within budget. Ties broken by smaller `|x|`, then by the
/// image-length order of [`morphism_match`].
pub fn find_morphic_pseudosquare(
    w: &Word,
    min_len: usize,
    max_len: usize,
    budget: &MatchBudget,
) -> Result<Option<PseudosquareHit>> {
    if min_len == 0 || min_len > max_len {
        return Err(Error::InvalidParameter(
            "need 1 <= min_len <= max_len".into(),
        ));
    }
    let sym = w.symbols();
    let n = sym.len();
    for i in 0..n {
        for len in min_len..=max_len.min((n - i).saturating_sub(1)) {
            let x = &sym[i..i + len];
            let region = &sym[i + len..];
            let mut hit = None;
            match_assignments(x, region, w.alphabet_size(), budget, false, &mut |h, total| {
                if total == 0 {
                    // an empty image side makes every factor a trivial hit
                    return false;
                }
                hit = Some(h);
                true
            });
            if let Some(witness) = hit {
                return Ok(Some(PseudosquareHit {
                    position: i,
                    x: w.factor(i, i + len),
                    witness,
                    kind: PseudosquareKind::Morphic,
                    orientation: Orientation::XThenImage,
                }));
            }
        }
    }
    Ok(None)
}

/// True iff a factor `x·h(x)` with `|x| >= min_len` and `h` within budget
/// ends exactly at the last position.
pub(crate) fn morphic_hit_at_end(sym: &[u8], min_len: usize, budget: &MatchBudget) -> bool {
    let n = sym.len();
    let alphabet = sym.iter().copied().max().map_or(2, |m| (m + 1).max(2));
    // h(x) = sym[j..n], x = sym[i..j]
    for j in (1..n).rev() {
        let region = &sym[j..];
        for i in (0..j).rev() {
            if j - i < min_len {
                continue;
            }
            let mut found = false;
            match_assignments(&sym[i..j], region, alphabet, budget, true, &mut |_, total| {
                if total == 0 {
                    return false;
                }
                found = true;
                true
            });
            if found {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn square_is_a_permutation_pseudosquare() {
        let hit = find_permutation_pseudosquare(&w("0101"), 2).unwrap();
        assert_eq!(hit.position, 0);
        assert_eq!(hit.x, w("01"));
        assert_eq!(hit.witness, Morphism::identity(2));
        assert!(hit.verify(&w("0101")).unwrap());
    }

    #[test]
    fn antisquare_is_a_permutation_pseudosquare() {
        let hit = find_permutation_pseudosquare(&w("0110"), 2).unwrap();
        assert_eq!(hit.x, w("01"));
        assert_eq!(hit.witness.image(0).symbols(), &[1]);
        assert_eq!(hit.witness.image(1).symbols(), &[0]);
    }

    #[test]
    fn every_length_two_word_is_a_pseudosquare() {
        let hit = find_permutation_pseudosquare(&w("012"), 1).unwrap();
        assert_eq!(hit.position, 0);
        assert_eq!(hit.x, w("0"));
        assert_eq!(hit.witness.image(0).symbols(), &[1]);
        assert!(hit.verify(&w("012")).unwrap());
    }

    #[test]
    fn transformation_examples() {
        let hit = find_transformation_pseudosquare(&w("000000"), 3, false).unwrap();
        assert_eq!(hit.x, w("000"));
        assert_eq!(hit.witness, Morphism::identity(2));

        let hit = find_transformation_pseudosquare(&w("010111"), 3, false).unwrap();
        assert_eq!(hit.position, 0);
        assert_eq!(hit.x, w("010"));
        assert_eq!(hit.witness.image(0).symbols(), &[1]);
        assert_eq!(hit.witness.image(1).symbols(), &[1]);
        assert!(hit.verify(&w("010111")).unwrap());
    }

    #[test]
    fn bidirectional_transformation() {
        // 0001 = x'·x with x = 01, t(0) = t(1) = 0
        assert!(find_transformation_pseudosquare(&w("0001"), 2, false).is_none());
        let hit = find_transformation_pseudosquare(&w("0001"), 2, true).unwrap();
        assert_eq!(hit.orientation, Orientation::ImageThenX);
        assert_eq!(hit.x, w("01"));
        assert!(hit.verify(&w("0001")).unwrap());
    }

    #[test]
    fn match_unique_length_split() {
        let h = morphism_match(&w("00"), &w("0101"), &MatchBudget::nonerasing())
            .unwrap()
            .unwrap();
        assert_eq!(h.image(0), &w("01"));
    }

    #[test]
    fn match_inconsistent() {
        assert!(morphism_match(&w("010"), &w("011"), &MatchBudget::nonerasing())
            .unwrap()
            .is_none());
    }

    #[test]
    fn match_constant_images() {
        let h = morphism_match(&w("01"), &w("11"), &MatchBudget::nonerasing())
            .unwrap()
            .unwrap();
        assert_eq!(h.image(0), &w("1"));
        assert_eq!(h.image(1), &w("1"));
    }

    #[test]
    fn match_respects_budget() {
        let budget = MatchBudget::nonerasing_capped(3);
        assert!(morphism_match(&w("01"), &w("000111"), &budget).unwrap().is_none());
        let budget = MatchBudget::nonerasing_capped(6);
        let h = morphism_match(&w("01"), &w("000111"), &budget).unwrap().unwrap();
        assert_eq!(h.apply(&w("01")).unwrap(), w("000111"));
    }

    #[test]
    fn match_none_when_target_too_short() {
        assert!(morphism_match(&w("0101"), &w("011"), &MatchBudget::nonerasing())
            .unwrap()
            .is_none());
    }

    #[test]
    fn morphic_scan_finds_repetition() {
        let hit = find_morphic_pseudosquare(&w("000100"), 1, 3, &MatchBudget::nonerasing())
            .unwrap()
            .unwrap();
        assert_eq!(hit.position, 0);
        assert_eq!(hit.x, w("0"));
        assert_eq!(hit.witness.image(0), &w("0"));
        assert!(hit.verify(&w("000100")).unwrap());
    }

    #[test]
    fn morphic_scan_uniformly_recurrent_pattern() {
        // 1000u000 with u = 11: x = 000 maps by h(0) = 0... wait, the hit is
        // x = 000 with h(0) such that h(x) = the second 000 block.
        let v = w("100011000");
        let hit = find_morphic_pseudosquare(&v, 3, 4, &MatchBudget::nonerasing())
            .unwrap()
            .unwrap();
        assert!(hit.verify(&v).unwrap());
    }

    #[test]
    fn morphic_scan_no_room() {
        assert!(
            find_morphic_pseudosquare(&w("0110"), 3, 4, &MatchBudget::nonerasing())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn end_anchored_checks() {
        assert!(coding_hit_at_end(&[0, 1, 0, 1], 2, true, false));
        assert!(!coding_hit_at_end(&[0, 1, 0], 2, true, false));
        // 010·(010 under h(0)=0, h(1)=1) ends at the last position
        assert!(morphic_hit_at_end(&[0, 1, 0, 0, 1, 0], 3, &MatchBudget::nonerasing()));
        // no factor x·h(x) with |x| >= 3 ends at the last position here
        assert!(!morphic_hit_at_end(&[0, 0, 0, 1, 0, 0], 3, &MatchBudget::nonerasing()));
    }

    // brute force: every assignment of images up to a length bound
    fn brute_match(x: &Word, y: &Word, budget: &MatchBudget) -> bool {
        fn rec(
            x: &[u8],
            y: &[u8],
            images: &mut Vec<Vec<u8>>,
            k: usize,
            budget: &MatchBudget,
        ) -> bool {
            if images.len() == k {
                let total: usize = images.iter().map(Vec::len).sum();
                if let Some(cap) = budget.max_total_image {
                    if total > cap {
                        return false;
                    }
                }
                let mut built = Vec::new();
                for &a in x {
                    built.extend_from_slice(&images[a as usize]);
                }
                return built == y;
            }
            let min = usize::from(budget.require_nonerasing);
            for len in min..=y.len() {
                for mask in 0..(1usize << len) {
                    let img: Vec<u8> = (0..len).map(|i| ((mask >> i) & 1) as u8).collect();
                    images.push(img);
                    if rec(x, y, images, k, budget) {
                        return true;
                    }
                    images.pop();
                }
            }
            false
        }
        let k = x.alphabet_size() as usize;
        rec(x.symbols(), y.symbols(), &mut Vec::new(), k, budget)
    }

    #[test]
    fn match_agrees_with_brute_force_on_small_binary_pairs() {
        let budget = MatchBudget::nonerasing();
        for xl in 1..=3usize {
            for xv in 0..(1u32 << xl) {
                let xs: Vec<u8> = (0..xl).map(|i| ((xv >> i) & 1) as u8).collect();
                let x = Word::binary(xs).unwrap();
                for yl in 1..=5usize {
                    for yv in 0..(1u32 << yl) {
                        let ys: Vec<u8> = (0..yl).map(|i| ((yv >> i) & 1) as u8).collect();
                        let y = Word::binary(ys).unwrap();
                        let got = morphism_match(&x, &y, &budget).unwrap();
                        assert_eq!(got.is_some(), brute_match(&x, &y, &budget), "x={x} y={y}");
                        if let Some(h) = got {
                            assert_eq!(h.apply(&x).unwrap(), y, "certificate for x={x} y={y}");
                        }
                    }
                }
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn permutation_hits_are_transformation_hits(
            sym in proptest::collection::vec(0u8..3, 2..14),
            min_len in 1usize..3,
        ) {
            let v = Word::new(sym, 3).unwrap();
            if find_permutation_pseudosquare(&v, min_len).is_some() {
                proptest::prop_assert!(
                    find_transformation_pseudosquare(&v, min_len, false).is_some()
                );
            }
        }

        #[test]
        fn hits_verify(sym in proptest::collection::vec(0u8..3, 2..14)) {
            let v = Word::new(sym, 3).unwrap();
            for hit in [
                find_permutation_pseudosquare(&v, 1),
                find_transformation_pseudosquare(&v, 1, true),
            ].into_iter().flatten() {
                proptest::prop_assert!(hit.verify(&v).unwrap());
            }
        }

        #[test]
        fn binary_permutation_hits_are_squares_or_antisquares(
            sym in proptest::collection::vec(0u8..2, 0..14),
            min_len in 1usize..4,
        ) {
            use crate::word::{distinct_squares, distinct_antisquares};
            let v = Word::binary(sym).unwrap();
            let has_hit = find_permutation_pseudosquare(&v, min_len).is_some();
            let order_ge = |u: &Word| u.len() >= 2 * min_len;
            let any_large = distinct_squares(&v).iter().any(order_ge)
                || distinct_antisquares(&v).unwrap().iter().any(order_ge);
            proptest::prop_assert_eq!(has_hit, any_large);
        }
    }
}
