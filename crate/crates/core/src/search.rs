//! Exhaustive longest-word searches under avoidance constraints, the
//! square/antisquare table, canonical searches over all alphabets at once,
//! and backtracking discovery of uniform morphisms.
//!
//! All constraints are prefix-closed, so the search tree prunes at the
//! first violation, and a violation of an extended word must end at the
//! appended symbol: each node only re-examines suffix-anchored factors.
//! Node inventories are maintained incrementally with undo on backtrack.
//!
//! Parallelism splits the tree at a fixed frontier depth and combines
//! per-subtree results in lexicographic prefix order, so output is
//! byte-identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::pseudosquare::{coding_hit_at_end, morphic_hit_at_end, MatchBudget, PseudosquareKind};
use crate::repetition::{en_free_violation_at_end, FreenessSpec};
use crate::word::Word;

/// One avoidance ban on pseudosquare factors of a given kind.
#[derive(Clone, Debug, Serialize)]
pub struct PseudosquareBan {
    pub kind: PseudosquareKind,
    pub min_len: usize,
    pub bidirectional: bool,
    /// Only meaningful for morphic bans.
    pub budget: MatchBudget,
}

impl PseudosquareBan {
    pub fn new(kind: PseudosquareKind, min_len: usize, bidirectional: bool) -> Self {
        PseudosquareBan {
            kind,
            min_len,
            bidirectional,
            budget: MatchBudget::nonerasing(),
        }
    }
}

/// A bundle of prefix-closed avoidance predicates. At least one bound must
/// be present.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchConstraint {
    pub max_squares: Option<usize>,
    pub max_antisquares: Option<usize>,
    pub max_combined: Option<usize>,
    pub forbidden_factors: Vec<Word>,
    pub exponent_cap: Option<FreenessSpec>,
    pub pseudosquare_bans: Vec<PseudosquareBan>,
}

impl SearchConstraint {
    /// At most `a` distinct squares and `b` distinct antisquares.
    pub fn squares_antisquares(a: usize, b: usize) -> Self {
        SearchConstraint {
            max_squares: Some(a),
            max_antisquares: Some(b),
            ..Default::default()
        }
    }

    /// At most `c` distinct squares and antisquares combined.
    pub fn combined(c: usize) -> Self {
        SearchConstraint {
            max_combined: Some(c),
            ..Default::default()
        }
    }

    pub fn with_forbidden(mut self, factors: Vec<Word>) -> Self {
        self.forbidden_factors = factors;
        self
    }

    pub fn with_exponent_cap(mut self, spec: FreenessSpec) -> Self {
        self.exponent_cap = Some(spec);
        self
    }

    pub fn with_ban(mut self, ban: PseudosquareBan) -> Self {
        self.pseudosquare_bans.push(ban);
        self
    }

    fn validate(&self, alphabet_size: u8) -> Result<()> {
        let any = self.max_squares.is_some()
            || self.max_antisquares.is_some()
            || self.max_combined.is_some()
            || !self.forbidden_factors.is_empty()
            || self.exponent_cap.is_some()
            || !self.pseudosquare_bans.is_empty();
        if !any {
            return Err(Error::InvalidParameter(
                "search constraint is empty".into(),
            ));
        }
        if self.forbidden_factors.iter().any(|f| f.is_empty()) {
            return Err(Error::InvalidParameter(
                "forbidden factors must be nonempty".into(),
            ));
        }
        if (self.max_antisquares.is_some() || self.max_combined.is_some()) && alphabet_size > 2 {
            return Err(Error::NonBinary(alphabet_size));
        }
        Ok(())
    }

    /// Whether the constraint is invariant under the binary 0↔1 complement,
    /// in which case the search may fix the first letter to 0.
    fn complement_closed(&self) -> bool {
        // square/antisquare budgets, exponent caps, and pseudosquare bans
        // are complement-invariant; forbidden factor sets must be checked.
        self.forbidden_factors.iter().all(|f| {
            crate::word::complement(f)
                .map(|c| self.forbidden_factors.contains(&c))
                .unwrap_or(false)
        })
    }
}

/// Result of a longest-word search.
///
/// When `exhausted`, the tree was fully explored and `max_length_found` is
/// exact: every word of the next length violates the constraint. Otherwise
/// a word of cutoff length exists and `witness` is the lexicographically
/// least one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub max_length_found: usize,
    pub witness: Word,
    pub exhausted: bool,
    pub nodes_visited: u64,
}

/// Symbol range policy at each node.
#[derive(Clone, Copy)]
enum Branching {
    /// All symbols of a fixed alphabet.
    Fixed(u8),
    /// Fixed alphabet, first letter pinned to 0 (complement symmetry).
    FixedFirstZero(u8),
    /// Restricted growth: a new symbol may exceed the maximum used so far
    /// by at most one, giving one canonical word per relabeling class.
    Growth,
}

impl Branching {
    fn range(&self, word: &[u8]) -> std::ops::RangeInclusive<u8> {
        match *self {
            Branching::Fixed(k) => 0..=k - 1,
            Branching::FixedFirstZero(k) => {
                if word.is_empty() {
                    0..=0
                } else {
                    0..=k - 1
                }
            }
            Branching::Growth => {
                let max = word.iter().copied().max();
                0..=max.map_or(0, |m| (m + 1).min(250))
            }
        }
    }

    fn alphabet_for(&self, word: &[u8]) -> u8 {
        match *self {
            Branching::Fixed(k) | Branching::FixedFirstZero(k) => k,
            Branching::Growth => word.iter().copied().max().map_or(2, |m| (m + 1).max(2)),
        }
    }
}

/// Incremental constraint state along one search path.
struct NodeState<'c> {
    constraint: &'c SearchConstraint,
    binary: bool,
    word: Vec<u8>,
    squares: Vec<Vec<u8>>,
    antisquares: Vec<Vec<u8>>,
    /// Per successful push: how many inventory entries it added.
    adds: Vec<(u32, u32)>,
}

impl<'c> NodeState<'c> {
    fn new(constraint: &'c SearchConstraint, alphabet_size: u8) -> Self {
        NodeState {
            constraint,
            binary: alphabet_size <= 2,
            word: Vec::new(),
            squares: Vec::new(),
            antisquares: Vec::new(),
            adds: Vec::new(),
        }
    }

    fn track_squares(&self) -> bool {
        self.constraint.max_squares.is_some() || self.constraint.max_combined.is_some()
    }

    fn track_antisquares(&self) -> bool {
        self.binary
            && (self.constraint.max_antisquares.is_some()
                || self.constraint.max_combined.is_some())
    }

    /// Append `sym` and re-check everything that can newly fail. On
    /// violation the state is fully rolled back and `false` returned.
    fn push(&mut self, sym: u8) -> bool {
        self.word.push(sym);
        let (mut sq_added, mut asq_added) = (0u32, 0u32);
        if self.check_suffix(&mut sq_added, &mut asq_added) {
            self.adds.push((sq_added, asq_added));
            true
        } else {
            self.squares.truncate(self.squares.len() - sq_added as usize);
            self.antisquares
                .truncate(self.antisquares.len() - asq_added as usize);
            self.word.pop();
            false
        }
    }

    fn pop(&mut self) {
        let (sq, asq) = self.adds.pop().expect("pop without push");
        self.squares.truncate(self.squares.len() - sq as usize);
        self.antisquares
            .truncate(self.antisquares.len() - asq as usize);
        self.word.pop();
    }

    fn check_suffix(&mut self, sq_added: &mut u32, asq_added: &mut u32) -> bool {
        let c = self.constraint;
        let n = self.word.len();

        for f in &c.forbidden_factors {
            let m = f.len();
            if m <= n && self.word[n - m..] == *f.symbols() {
                return false;
            }
        }

        let track_sq = self.track_squares();
        let track_asq = self.track_antisquares();
        if track_sq || track_asq {
            let sq_cap = match (c.max_squares, c.max_combined) {
                (Some(a), Some(cc)) => Some(a.min(cc)),
                (Some(a), None) => Some(a),
                (None, Some(cc)) => Some(cc),
                (None, None) => None,
            };
            let asq_cap = match (c.max_antisquares, c.max_combined) {
                (Some(b), Some(cc)) => Some(b.min(cc)),
                (Some(b), None) => Some(b),
                (None, Some(cc)) => Some(cc),
                (None, None) => None,
            };
            for p in 1..=n / 2 {
                let mut eq = track_sq;
                let mut neq = track_asq;
                let (head, tail) = self.word.split_at(n - p);
                let head = &head[n - 2 * p..];
                for j in 0..p {
                    if head[j] == tail[j] {
                        neq = false;
                    } else {
                        eq = false;
                    }
                    if !eq && !neq {
                        break;
                    }
                }
                if eq && !self.note_inventory(p, false, sq_cap, sq_added) {
                    return false;
                }
                if neq && !self.note_inventory(p, true, asq_cap, asq_added) {
                    return false;
                }
                if let Some(cc) = c.max_combined {
                    if self.squares.len() + self.antisquares.len() > cc {
                        return false;
                    }
                }
            }
        }

        if let Some(spec) = &c.exponent_cap {
            if en_free_violation_at_end(&self.word, spec) {
                return false;
            }
        }

        for ban in &c.pseudosquare_bans {
            let hit = match ban.kind {
                PseudosquareKind::Permutation => {
                    coding_hit_at_end(&self.word, ban.min_len, true, ban.bidirectional)
                }
                PseudosquareKind::Transformation => {
                    coding_hit_at_end(&self.word, ban.min_len, false, ban.bidirectional)
                }
                PseudosquareKind::Morphic => {
                    morphic_hit_at_end(&self.word, ban.min_len, &ban.budget)
                }
            };
            if hit {
                return false;
            }
        }

        true
    }

    /// Record the square/antisquare `word[n-2p..n]` if new; false iff the
    /// relevant cap is now exceeded.
    fn note_inventory(
        &mut self,
        p: usize,
        antisquare: bool,
        cap: Option<usize>,
        added: &mut u32,
    ) -> bool {
        let n = self.word.len();
        let factor = &self.word[n - 2 * p..];
        let inv = if antisquare {
            &mut self.antisquares
        } else {
            &mut self.squares
        };
        if inv.iter().any(|u| u == factor) {
            return true;
        }
        inv.push(factor.to_vec());
        *added += 1;
        match cap {
            Some(cap) => inv.len() <= cap,
            None => true,
        }
    }

    /// Replay a full word from scratch; true iff every prefix is admitted.
    fn replay(&mut self, word: &[u8]) -> bool {
        for &s in word {
            if !self.push(s) {
                return false;
            }
        }
        true
    }
}

struct SubtreeResult {
    best_len: usize,
    best_witness: Vec<u8>,
    nodes: u64,
    cutoff_hit: bool,
}

fn dfs(
    state: &mut NodeState,
    branching: Branching,
    cutoff: usize,
    best: &mut (usize, Vec<u8>),
    nodes: &mut u64,
) -> bool {
    if state.word.len() >= cutoff {
        best.0 = state.word.len();
        best.1 = state.word.clone();
        return true;
    }
    for sym in branching.range(&state.word) {
        if state.push(sym) {
            *nodes += 1;
            if state.word.len() > best.0 {
                best.0 = state.word.len();
                best.1 = state.word.clone();
            }
            let hit = dfs(state, branching, cutoff, best, nodes);
            state.pop();
            if hit {
                return true;
            }
        }
    }
    false
}

/// Split depth policy: expand breadth-first until the frontier is at least
/// this wide (or this deep), then hand subtrees to workers.
const SPLIT_TARGET: usize = 512;
const MAX_SPLIT_DEPTH: usize = 20;

fn run_search(
    constraint: &SearchConstraint,
    branching: Branching,
    cutoff: usize,
) -> SearchOutcome {
    let mut nodes: u64 = 1; // the empty word
    let mut best: (usize, Vec<u8>) = (0, Vec::new());
    let mut level: Vec<Vec<u8>> = vec![Vec::new()];
    let mut depth = 0usize;

    // breadth-first prefix stage, in lexicographic order per level
    while depth < cutoff && level.len() < SPLIT_TARGET && depth < MAX_SPLIT_DEPTH {
        let mut next: Vec<Vec<u8>> = Vec::new();
        for w in &level {
            for sym in branching.range(w) {
                let mut cand = w.clone();
                cand.push(sym);
                let mut st = NodeState::new(constraint, branching.alphabet_for(&cand));
                if st.replay(&cand) {
                    nodes += 1;
                    if cand.len() > best.0 {
                        best = (cand.len(), cand.clone());
                    }
                    next.push(cand);
                }
            }
        }
        if next.is_empty() {
            return outcome(best, nodes, true, branching);
        }
        depth += 1;
        level = next;
    }

    if depth >= cutoff {
        // the frontier itself reached the cutoff
        let witness = level[0].clone();
        return outcome((witness.len(), witness), nodes, false, branching);
    }

    // parallel subtree stage; results are folded in prefix order, so the
    // outcome does not depend on the worker count
    let results: Vec<SubtreeResult> = level
        .par_iter()
        .map(|prefix| {
            let mut st = NodeState::new(constraint, branching.alphabet_for(prefix));
            let ok = st.replay(prefix);
            debug_assert!(ok, "frontier word must replay cleanly");
            let mut best = (prefix.len(), prefix.clone());
            let mut nodes = 0u64;
            let cutoff_hit = dfs(&mut st, branching, cutoff, &mut best, &mut nodes);
            SubtreeResult {
                best_len: best.0,
                best_witness: best.1,
                nodes,
                cutoff_hit,
            }
        })
        .collect();

    let mut exhausted = true;
    for r in results {
        nodes += r.nodes;
        if r.cutoff_hit {
            exhausted = false;
        }
        if r.best_len > best.0 {
            best = (r.best_len, r.best_witness);
        }
    }
    outcome(best, nodes, exhausted, branching)
}

fn outcome(
    best: (usize, Vec<u8>),
    nodes: u64,
    exhausted: bool,
    branching: Branching,
) -> SearchOutcome {
    let alphabet = branching.alphabet_for(&best.1);
    SearchOutcome {
        max_length_found: best.0,
        witness: Word::new(best.1, alphabet).unwrap(),
        exhausted,
        nodes_visited: nodes,
    }
}

/// Longest word over a fixed alphabet satisfying the constraint, exact when
/// the tree exhausts below `cutoff`.
pub fn longest_word(
    constraint: &SearchConstraint,
    alphabet_size: u8,
    cutoff: usize,
) -> Result<SearchOutcome> {
    if alphabet_size == 0 || cutoff == 0 {
        return Err(Error::InvalidParameter(
            "alphabet_size and cutoff must be positive".into(),
        ));
    }
    constraint.validate(alphabet_size)?;
    let branching = if alphabet_size == 2 && constraint.complement_closed() {
        Branching::FixedFirstZero(2)
    } else {
        Branching::Fixed(alphabet_size)
    };
    Ok(run_search(constraint, branching, cutoff))
}

/// The table of longest lengths for at most `a` squares and `b`
/// antisquares, `a <= a_max`, `b <= b_max`, over the binary alphabet.
pub fn build_table(a_max: usize, b_max: usize, cutoff: usize) -> Result<Vec<Vec<SearchOutcome>>> {
    (0..=a_max)
        .map(|a| {
            (0..=b_max)
                .map(|b| longest_word(&SearchConstraint::squares_antisquares(a, b), 2, cutoff))
                .collect()
        })
        .collect()
}

/// Longest word over ANY finite alphabet avoiding the given pseudosquare
/// kind at threshold `min_len`.
///
/// Words are enumerated in restricted-growth (canonical) form — each new
/// symbol exceeds the maximum used so far by at most one — which loses
/// nothing: the three pseudosquare classes are closed under relabeling, so
/// every word maps to a canonical word with the same avoidance status.
pub fn longest_word_any_alphabet(
    kind: PseudosquareKind,
    min_len: usize,
    bidirectional: bool,
    cutoff: usize,
) -> Result<SearchOutcome> {
    if min_len == 0 || cutoff == 0 {
        return Err(Error::InvalidParameter(
            "min_len and cutoff must be positive".into(),
        ));
    }
    let constraint =
        SearchConstraint::default().with_ban(PseudosquareBan::new(kind, min_len, bidirectional));
    Ok(run_search(&constraint, Branching::Growth, cutoff))
}

/// The square/antisquare inventories of `w` as maintained by the search
/// engine itself: the word is replayed symbol by symbol and only
/// suffix-anchored factors are examined at each step. Exposed so the
/// incremental bookkeeping can be cross-validated against the from-scratch
/// scan.
pub fn incremental_inventory(w: &Word) -> crate::word::FactorInventory {
    let mut state = NodeState::new(&TRACK_EVERYTHING, w.alphabet_size());
    let ok = state.replay(w.symbols());
    debug_assert!(ok, "uncapped replay cannot fail");
    crate::word::FactorInventory {
        squares: state
            .squares
            .iter()
            .map(|s| Word::new(s.clone(), w.alphabet_size()).unwrap())
            .collect(),
        antisquares: state
            .antisquares
            .iter()
            .map(|s| Word::new(s.clone(), w.alphabet_size()).unwrap())
            .collect(),
        source_length: w.len(),
    }
}

/// True iff `h(w)` has at most `a` distinct squares and `b` distinct
/// antisquares for every squarefree word `w` over `h`'s domain with
/// `|w| <= check_len`. This is the acceptance test applied to candidates
/// during morphism discovery.
pub fn image_inventory_within(h: &Morphism, a: usize, b: usize, check_len: usize) -> bool {
    let q_budget = SearchConstraint::squares_antisquares(a, b);
    let mut image_state = NodeState::new(&q_budget, 2);
    let mut word: Vec<u8> = Vec::new();
    rec_image_check(h, check_len, &mut word, &mut image_state)
}

fn rec_image_check(
    h: &Morphism,
    check_len: usize,
    word: &mut Vec<u8>,
    image_state: &mut NodeState,
) -> bool {
    if word.len() >= check_len {
        return true;
    }
    let k = h.domain_size();
    for sym in 0..k {
        // squarefree extension of the domain word only
        word.push(sym);
        let n = word.len();
        let sf = (1..=n / 2).all(|p| word[n - 2 * p..n - p] != word[n - p..]);
        if !sf {
            word.pop();
            continue;
        }
        let img = h.image(sym);
        let mut pushed = 0usize;
        let mut ok = true;
        for &s in img.symbols() {
            if image_state.push(s) {
                pushed += 1;
            } else {
                ok = false;
                break;
            }
        }
        if !ok {
            // budget violated somewhere in h(word): candidate rejected
            for _ in 0..pushed {
                image_state.pop();
            }
            word.pop();
            return false;
        }
        let clean = rec_image_check(h, check_len, word, image_state);
        for _ in 0..img.len() {
            image_state.pop();
        }
        word.pop();
        if !clean {
            return false;
        }
    }
    true
}

/// Backtracking discovery of `q`-uniform morphisms from `h`'s ternary
/// domain to the binary alphabet whose images of squarefree words stay
/// within an `(a, b)` square/antisquare budget.
///
/// The search enumerates binary words of length `3q` — candidates for the
/// image `h(012)` — pruning with the same incremental inventory used by
/// the longest-word search (012 is squarefree, so its image must itself
/// respect the budget). Each full-length candidate is split into the three
/// images and kept iff [`image_inventory_within`] holds up to `check_len`.
pub fn discover_uniform_morphisms(
    a: usize,
    b: usize,
    q: usize,
    check_len: usize,
) -> DiscoverIter {
    DiscoverIter {
        a,
        b,
        q,
        check_len,
        state: NodeState::new(&TRACK_EVERYTHING, 2),
        started: false,
        done: q == 0,
    }
}

// Keeps inventory tracking on without binding caps; the iterator enforces
// its own (a, b) budget after each push.
static TRACK_EVERYTHING: SearchConstraint = SearchConstraint {
    max_squares: Some(usize::MAX),
    max_antisquares: Some(usize::MAX),
    max_combined: None,
    forbidden_factors: Vec::new(),
    exponent_cap: None,
    pseudosquare_bans: Vec::new(),
};

pub struct DiscoverIter {
    a: usize,
    b: usize,
    q: usize,
    check_len: usize,
    state: NodeState<'static>,
    started: bool,
    done: bool,
}

impl Iterator for DiscoverIter {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        if self.done {
            return None;
        }
        let total = 3 * self.q;
        loop {
            // advance the backtracking enumeration of candidate image words
            let from = if !self.started {
                self.started = true;
                0u8
            } else {
                match self.state.word.last().copied() {
                    Some(last) => {
                        self.state.pop();
                        last + 1
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            };
            let mut sym = from;
            'descend: loop {
                while sym < 2 {
                    if self.state.word.len() < total && self.push_within_budget(sym) {
                        if self.state.word.len() == total {
                            if let Some(h) = self.candidate() {
                                return Some(h);
                            }
                            // keep walking: treat as a leaf to backtrack from
                            break 'descend;
                        }
                        sym = 0;
                        continue 'descend;
                    }
                    sym += 1;
                }
                match self.state.word.last().copied() {
                    Some(last) => {
                        self.state.pop();
                        sym = last + 1;
                    }
                    None => {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}

impl DiscoverIter {
    fn push_within_budget(&mut self, sym: u8) -> bool {
        if !self.state.push(sym) {
            return false;
        }
        if self.state.squares.len() > self.a || self.state.antisquares.len() > self.b {
            self.state.pop();
            return false;
        }
        true
    }

    fn candidate(&self) -> Option<Morphism> {
        let q = self.q;
        let images: Vec<Word> = (0..3)
            .map(|i| Word::binary(self.state.word[i * q..(i + 1) * q].to_vec()).unwrap())
            .collect();
        let h = Morphism::new(images).unwrap();
        image_inventory_within(&h, self.a, self.b, self.check_len).then_some(h)
    }
}
