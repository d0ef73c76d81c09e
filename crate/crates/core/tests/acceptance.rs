//! Acceptance suite: every recorded result the library is built around is
//! re-derived here at its stated tolerance, one criterion per test, with a
//! PASS/FAIL line each. Run with `cargo test --test acceptance`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use sqav_core::catalog::{catalog_lookup, INVENTORY_MORPHISMS};
use sqav_core::pseudosquare::{morphism_match, MatchBudget, PseudosquareKind};
use sqav_core::search::{
    build_table, incremental_inventory, longest_word, longest_word_any_alphabet, SearchConstraint,
};
use sqav_core::verifier::{
    self, AutomaticWord, Theorem10Stage, Theorem9Mode, VerificationReport,
};
use sqav_core::word::{FactorInventory, Word};
use sqav_core::Morphism;

fn verdict(criterion: &str, failures: &[String]) {
    if failures.is_empty() {
        println!("ACCEPTANCE {criterion}: PASS");
    } else {
        println!("ACCEPTANCE {criterion}: FAIL ({} problems)", failures.len());
        for f in failures {
            println!("  - {f}");
        }
    }
    assert!(failures.is_empty(), "{criterion}: {failures:?}");
}

fn expect_cell(a: usize, b: usize, expected: usize, budget: Duration, failures: &mut Vec<String>) {
    let t = Instant::now();
    let out = longest_word(
        &SearchConstraint::squares_antisquares(a, b),
        2,
        expected + 20,
    )
    .unwrap();
    let elapsed = t.elapsed();
    if !out.exhausted || out.max_length_found != expected {
        failures.push(format!(
            "cell ({a},{b}): got {} (exhausted={}), expected {expected}",
            out.max_length_found, out.exhausted
        ));
    }
    let inv = FactorInventory::scan(&out.witness);
    if inv.squares.len() > a || inv.antisquares.len() > b {
        failures.push(format!("cell ({a},{b}): witness violates the budget"));
    }
    if elapsed > budget {
        failures.push(format!("cell ({a},{b}): took {elapsed:?}, budget {budget:?}"));
    }
}

#[test]
fn criterion_01_figure1_fast_tier() {
    let mut failures = Vec::new();
    let budget = Duration::from_secs(60);
    let row0 = [1, 2, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3, 3];
    let row1 = [3, 4, 7, 7, 7, 7, 7, 7, 7, 7, 7, 7, 7, 7];
    let row2 = [5, 6, 11, 11, 11, 11, 12, 12, 12, 13, 15, 18, 18, 18];
    for (a, row) in [row0, row1, row2].iter().enumerate() {
        for (b, &expected) in row.iter().enumerate() {
            expect_cell(a, b, expected, budget, &mut failures);
        }
    }
    for a in 0..=10usize {
        expect_cell(a, 0, 2 * a + 1, budget, &mut failures);
        expect_cell(a, 1, 2 * a + 2, budget, &mut failures);
    }
    for (a, b, expected) in [
        (3, 5, 20),
        (3, 8, 24),
        (3, 9, 29),
        (3, 10, 34),
        (3, 11, 53),
        (4, 4, 27),
        (4, 5, 31),
        (4, 6, 45),
        (4, 7, 56),
        (5, 4, 40),
        (6, 2, 35),
        (6, 3, 38),
        (7, 2, 45),
    ] {
        expect_cell(a, b, expected, budget, &mut failures);
    }
    verdict("1 (table, fast tier)", &failures);
}

#[test]
fn criterion_02_figure1_extended_tier() {
    // budgeted for minutes to hours; the incremental engine finishes these
    // in seconds, so they run in the default suite rather than behind a flag
    let mut failures = Vec::new();
    let budget = Duration::from_secs(3 * 60 * 60);
    for (a, b, expected) in [(3, 12, 98), (8, 2, 147), (4, 8, 233), (6, 4, 313)] {
        expect_cell(a, b, expected, budget, &mut failures);
    }
    verdict("2 (table, extended tier)", &failures);
}

#[test]
fn criterion_03_proposition1() {
    let mut failures = Vec::new();
    let t = Instant::now();
    let report = verifier::verify_proposition1(10);
    collect_report(&report, &mut failures);
    if t.elapsed() > Duration::from_secs(10) {
        failures.push(format!("took {:?}, budget 10s", t.elapsed()));
    }
    verdict("3 (proposition 1)", &failures);
}

fn collect_report(report: &VerificationReport, failures: &mut Vec<String>) {
    for c in &report.checks {
        if !c.passed {
            failures.push(format!("{}: {} — {}", report.claim_id, c.name, c.evidence));
        }
    }
}

#[test]
fn criterion_04_morphism_inventories() {
    let mut failures = Vec::new();
    for name in INVENTORY_MORPHISMS {
        let t = Instant::now();
        let report = verifier::verify_morphism_claim(name).unwrap();
        collect_report(&report, &mut failures);
        if t.elapsed() > Duration::from_secs(300) {
            failures.push(format!("{name}: took {:?}, budget 5min", t.elapsed()));
        }
    }
    // spot-check the exact sets the criterion names for h_5_5
    let entry = catalog_lookup("h_5_5").unwrap();
    let squares: BTreeSet<String> = entry.claimed_squares.iter().map(Word::to_string).collect();
    let anti: BTreeSet<String> = entry
        .claimed_antisquares
        .iter()
        .map(Word::to_string)
        .collect();
    if squares != ["00", "11", "0000", "0101", "1010"].iter().map(|s| s.to_string()).collect() {
        failures.push("h_5_5 squares are not the documented five".into());
    }
    if anti != ["01", "10", "0011", "0110", "1100"].iter().map(|s| s.to_string()).collect() {
        failures.push("h_5_5 antisquares are not the documented five".into());
    }
    verdict("4 (seven morphism inventories)", &failures);
}

#[test]
fn criterion_05_composition_cross_check() {
    let mut failures = Vec::new();
    let t = Instant::now();
    let outer = &catalog_lookup("h_3_13_prime").unwrap().morphism;
    let inner = &catalog_lookup("m_18").unwrap().morphism;
    let composed = outer.compose(inner).unwrap();
    let target = &catalog_lookup("h_3_13").unwrap().morphism;
    if &composed != target {
        failures.push("h_3_13_prime ∘ m_18 differs from h_3_13".into());
    }
    if t.elapsed() > Duration::from_secs(1) {
        failures.push(format!("took {:?}, budget 1s", t.elapsed()));
    }
    verdict("5 (composition cross-check)", &failures);
}

#[test]
fn criterion_06_corollaries() {
    let mut failures = Vec::new();
    let report = verifier::verify_corollaries();
    collect_report(&report, &mut failures);
    verdict("6 (corollary words and power maxima)", &failures);
}

#[test]
fn criterion_07_any_alphabet_thresholds() {
    let mut failures = Vec::new();
    let budget = Duration::from_secs(600);
    for (kind, min_len, bidirectional, expected) in [
        (PseudosquareKind::Permutation, 2usize, false, 9usize),
        (PseudosquareKind::Transformation, 3, false, 30),
        (PseudosquareKind::Transformation, 3, true, 15),
    ] {
        let t = Instant::now();
        let out = longest_word_any_alphabet(kind, min_len, bidirectional, expected + 20).unwrap();
        if !out.exhausted || out.max_length_found != expected {
            failures.push(format!(
                "{kind:?} min {min_len} bidir {bidirectional}: got {} (exhausted={}), expected {expected}",
                out.max_length_found, out.exhausted
            ));
        }
        if t.elapsed() > budget {
            failures.push(format!("{kind:?}: took {:?}, budget 10min", t.elapsed()));
        }
    }
    verdict("7 (pseudosquare thresholds over all alphabets)", &failures);
}

#[test]
fn criterion_08_coded_fixed_points() {
    let mut failures = Vec::new();
    let r4 = verifier::verify_automatic_word(AutomaticWord::Thm4, 20000).unwrap();
    collect_report(&r4, &mut failures);
    let r7 = verifier::verify_automatic_word(AutomaticWord::Thm7, 20000).unwrap();
    collect_report(&r7, &mut failures);
    verdict("8 (coded fixed points, 20000 symbols)", &failures);
}

#[test]
fn criterion_09_theorem9_searches() {
    let mut failures = Vec::new();
    let t = Instant::now();
    let direct = verifier::verify_theorem9(Theorem9Mode::Direct);
    let direct_elapsed = t.elapsed();
    collect_report(&direct, &mut failures);
    if direct_elapsed > Duration::from_secs(10) {
        failures.push(format!("direct search took {direct_elapsed:?}, budget 10s"));
    }
    let reduction = verifier::verify_theorem9(Theorem9Mode::Reduction);
    collect_report(&reduction, &mut failures);
    verdict("9 (threshold-4 impossibility)", &failures);
}

#[test]
fn criterion_10_theorem10_battery() {
    let mut failures = Vec::new();
    let t = Instant::now();
    let report = verifier::verify_theorem10(Theorem10Stage::All);
    collect_report(&report, &mut failures);
    if t.elapsed() > Duration::from_secs(2 * 60 * 60) {
        failures.push(format!("battery took {:?}, budget 2h", t.elapsed()));
    }
    verdict("10 (threshold-5 construction battery)", &failures);
}

#[test]
fn criterion_11_oracle_equivalence() {
    let mut failures = Vec::new();

    // incremental inventories vs from-scratch scan, every binary word of
    // length <= 12
    'words: for n in 0..=12usize {
        for v in 0..(1u64 << n) {
            let sym: Vec<u8> = (0..n).map(|i| ((v >> i) & 1) as u8).collect();
            let w = Word::binary(sym).unwrap();
            let incremental = incremental_inventory(&w);
            let scratch = FactorInventory::scan(&w);
            if incremental != scratch {
                failures.push(format!("inventory mismatch on {w}"));
                break 'words;
            }
        }
    }

    // morphism_match vs brute force over all image assignments
    let budget = MatchBudget::nonerasing();
    let erasing = MatchBudget {
        max_total_image: None,
        require_nonerasing: false,
    };
    'pairs: for xl in 1..=4usize {
        for xv in 0..(1u32 << xl) {
            let xs: Vec<u8> = (0..xl).map(|i| ((xv >> i) & 1) as u8).collect();
            let x = Word::binary(xs).unwrap();
            for yl in 0..=8usize {
                for yv in 0..(1u32 << yl) {
                    let ys: Vec<u8> = (0..yl).map(|i| ((yv >> i) & 1) as u8).collect();
                    let y = Word::binary(ys).unwrap();
                    for (label, b) in [("nonerasing", &budget), ("erasing", &erasing)] {
                        let got = morphism_match(&x, &y, b).unwrap();
                        if let Some(h) = &got {
                            if h.apply(&x).unwrap() != y {
                                failures.push(format!("bad certificate x={x} y={y} ({label})"));
                                break 'pairs;
                            }
                        }
                        if got.is_some() != brute_force_match(&x, &y, b) {
                            failures.push(format!(
                                "match disagreement x={x} y={y} ({label}): got {}",
                                got.is_some()
                            ));
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }
    verdict("11 (oracle equivalence)", &failures);
}

/// Independent oracle: enumerate every image-content assignment whose
/// lengths satisfy the match equation and test `h(x) = y` directly.
fn brute_force_match(x: &Word, y: &Word, budget: &MatchBudget) -> bool {
    let xs = x.symbols();
    let ys = y.symbols();
    let c0 = xs.iter().filter(|&&s| s == 0).count();
    let c1 = xs.len() - c0;
    let min = usize::from(budget.require_nonerasing);
    for l0 in min..=ys.len().max(1) {
        for l1 in min..=ys.len().max(1) {
            if c0 * l0 + c1 * l1 != ys.len() {
                continue;
            }
            if c0 == 0 && l0 > min {
                continue; // unused letter: one canonical length suffices
            }
            if c1 == 0 && l1 > min {
                continue;
            }
            for v0 in 0..(1u32 << l0) {
                let img0: Vec<u8> = (0..l0).map(|i| ((v0 >> i) & 1) as u8).collect();
                for v1 in 0..(1u32 << l1) {
                    let img1: Vec<u8> = (0..l1).map(|i| ((v1 >> i) & 1) as u8).collect();
                    let mut built = Vec::new();
                    for &s in xs {
                        built.extend_from_slice(if s == 0 { &img0 } else { &img1 });
                    }
                    if built == ys {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[test]
fn criterion_12_worker_determinism() {
    let mut failures = Vec::new();
    let mut outputs: Vec<String> = Vec::new();
    for workers in [1usize, 2, 8] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .unwrap();
        let rendered = pool.install(|| {
            let mut buf = String::new();
            let table = build_table(2, 3, 60).unwrap();
            buf.push_str(&serde_json::to_string(&table).unwrap());
            let cell = longest_word(&SearchConstraint::squares_antisquares(4, 4), 2, 60).unwrap();
            buf.push_str(&serde_json::to_string(&cell).unwrap());
            let any =
                longest_word_any_alphabet(PseudosquareKind::Permutation, 2, false, 40).unwrap();
            buf.push_str(&serde_json::to_string(&any).unwrap());
            let report = verifier::verify_morphism_claim("h_5_5").unwrap();
            buf.push_str(&serde_json::to_string(&report).unwrap());
            let props = verifier::verify_theorem10(Theorem10Stage::Props);
            buf.push_str(&serde_json::to_string(&props).unwrap());
            buf
        });
        outputs.push(rendered);
    }
    if outputs[0] != outputs[1] || outputs[1] != outputs[2] {
        failures.push("outputs differ across 1/2/8 workers".into());
    }
    verdict("12 (worker-count determinism)", &failures);
}

// Slow opt-in check: the backtracking discovery at q = 36 re-finds the
// catalog morphism with the (5,5) inventory (or its bitwise complement,
// which it reaches first in lexicographic order).
#[test]
#[ignore = "long-running discovery sweep; run with --ignored"]
fn discovery_refinds_the_five_five_morphism() {
    let target = &catalog_lookup("h_5_5").unwrap().morphism;
    let complemented: Vec<Word> = target
        .images()
        .iter()
        .map(|w| sqav_core::word::complement(w).unwrap())
        .collect();
    let target_complement = Morphism::new(complemented).unwrap();
    let found = sqav_core::search::discover_uniform_morphisms(5, 5, 36, 20)
        .find(|h| h == target || h == &target_complement);
    assert!(found.is_some());
}
