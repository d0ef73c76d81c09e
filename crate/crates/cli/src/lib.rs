//! Command-line interface: analysis, enumeration, search, discovery, and
//! verification, with machine-readable output.
//!
//! Outputs are deterministic: identical arguments produce identical bytes,
//! regardless of the worker count.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sqav_core::catalog::{catalog_lookup, catalog_names, INVENTORY_MORPHISMS};
use sqav_core::generator::{enumerate, AllWords, EnFree, EnumerationSpec, Squarefree};
use sqav_core::morphism::{synchronization_check, Morphism};
use sqav_core::pseudosquare::{
    find_morphic_pseudosquare, find_permutation_pseudosquare, find_transformation_pseudosquare,
    morphism_match, MatchBudget, PseudosquareKind,
};
use sqav_core::repetition::{critical_exponent, Exponent, FreenessSpec};
use sqav_core::search::{
    build_table, discover_uniform_morphisms, longest_word, longest_word_any_alphabet,
    PseudosquareBan, SearchConstraint, SearchOutcome,
};
use sqav_core::verifier::{self, AutomaticWord, Theorem10Stage, Theorem9Mode, VerificationReport};
use sqav_core::word::{FactorInventory, Word};

#[derive(Parser)]
#[command(
    name = "sqav",
    about = "Squares, antisquares, and pseudosquares: count, search, avoid, verify",
    version
)]
pub struct Cli {
    /// Worker threads for searches (default: SQAV_WORKERS or all cores).
    /// The worker count never affects output bytes.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScanKind {
    Perm,
    Trans,
    Morphic,
}

#[derive(Subcommand)]
enum Command {
    /// Count distinct squares and antisquares of words.
    Count {
        /// Words in text form; reads stdin (one per line) when absent.
        words: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Critical exponent of words (max fractional power over all factors).
    Exponent {
        words: Vec<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Apply a morphism to a word.
    Apply {
        #[command(flatten)]
        morphism: MorphismSource,
        word: String,
    },
    /// Prefix of the fixed point of a prolongable morphism.
    Fixpoint {
        #[command(flatten)]
        morphism: MorphismSource,
        #[arg(long, default_value_t = 0)]
        seed: u8,
        #[arg(long)]
        length: usize,
        /// Apply the catalog coding after expansion, when the entry has one.
        #[arg(long)]
        coded: bool,
    },
    /// Enumerate constrained words.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        alphabet: u8,
        #[arg(long)]
        length: usize,
        /// squarefree | dejean | all
        #[arg(long, default_value = "squarefree")]
        family: String,
        /// Only words of exactly the given length.
        #[arg(long)]
        exact: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// Longest word under avoidance constraints.
    Longest {
        #[arg(long)]
        squares: Option<usize>,
        #[arg(long)]
        antisquares: Option<usize>,
        #[arg(long)]
        combined: Option<usize>,
        /// Forbidden factors, comma separated.
        #[arg(long, value_delimiter = ',')]
        forbid: Vec<String>,
        /// Exponent cap "p/q" (strict unless --non-strict).
        #[arg(long)]
        exponent_cap: Option<String>,
        #[arg(long)]
        non_strict: bool,
        #[arg(long, default_value_t = 1)]
        min_period: usize,
        /// Pseudosquare bans "kind:minlen[:bidir][:budget]", comma separated.
        #[arg(long, value_delimiter = ',')]
        ban: Vec<String>,
        #[arg(long, default_value_t = 2)]
        alphabet: u8,
        #[arg(long, default_value_t = 500)]
        cutoff: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// The longest-length table over square/antisquare budgets (TSV).
    Table {
        #[arg(long)]
        amax: usize,
        #[arg(long)]
        bmax: usize,
        #[arg(long, default_value_t = 500)]
        cutoff: usize,
        /// Write the TSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Longest word over all alphabets avoiding a pseudosquare kind.
    Anyalpha {
        #[arg(long, value_enum)]
        kind: ScanKind,
        #[arg(long)]
        min: usize,
        #[arg(long)]
        bidirectional: bool,
        #[arg(long, default_value_t = 100)]
        cutoff: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide whether y = h(x) for some morphism h.
    Match {
        x: String,
        y: String,
        #[arg(long)]
        max_image: Option<usize>,
        /// Allow empty images.
        #[arg(long)]
        erasing: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Scan a word for pseudosquare factors.
    Scan {
        word: String,
        #[arg(long, value_enum)]
        kind: ScanKind,
        #[arg(long)]
        min: usize,
        #[arg(long)]
        max: Option<usize>,
        #[arg(long)]
        bidirectional: bool,
        #[arg(long)]
        max_image: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Backtracking discovery of q-uniform budget-respecting morphisms.
    Discover {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        q: usize,
        #[arg(long, default_value_t = 24)]
        check_len: usize,
        /// Stop after this many morphisms.
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Re-derive a recorded claim; exit 0 iff it passes.
    Verify {
        /// prop1 | thm2:<name> | thm2:all | cor3 | thm4 | thm7 |
        /// thm9:direct | thm9:reduction | thm10:<stage>
        #[arg(long)]
        claim: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Prefix length for the coded fixed-point checks.
        #[arg(long, default_value_t = 20000)]
        prefix_len: usize,
    },
    /// List catalog morphisms.
    Catalog,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MorphismSource {
    /// A catalog entry name.
    #[arg(long)]
    name: Option<String>,
    /// A morphism file in the `i -> image` line format.
    #[arg(long)]
    morphism: Option<PathBuf>,
}

impl MorphismSource {
    fn load(&self) -> Result<Morphism> {
        if let Some(name) = &self.name {
            return Ok(catalog_lookup(name)?.morphism.clone());
        }
        let path = self.morphism.as_ref().expect("clap group guarantees one");
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        Ok(Morphism::from_str(&text)?)
    }
}

/// Run with OS args, printing to stdout/stderr; returns the exit code:
/// 0 success / verification passed, 1 verification failed, 2 usage error.
pub fn main_entry() -> i32 {
    let args: Vec<String> = std::env::args().collect();
    let mut stdout = std::io::stdout();
    match run(&args, &mut stdout) {
        Ok(code) => code,
        Err(e) => {
            if let Some(ce) = e.downcast_ref::<clap::Error>() {
                let _ = ce.print();
                2
            } else {
                eprintln!("error: {e:#}");
                2
            }
        }
    }
}

/// Parse `argv` (including the program name) and execute, writing output to
/// `out`. Library entry point used by tests.
pub fn run<W: Write + Send>(argv: &[String], out: &mut W) -> Result<i32> {
    let cli = Cli::try_parse_from(argv)?;
    let workers = cli
        .workers
        .or_else(|| std::env::var("SQAV_WORKERS").ok()?.parse().ok());
    match workers {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .context("building worker pool")?;
            pool.install(|| dispatch(cli.command, out))
        }
        _ => dispatch(cli.command, out),
    }
}

fn parse_words(words: &[String]) -> Result<Vec<Word>> {
    if !words.is_empty() {
        return words
            .iter()
            .map(|s| Ok(s.parse::<Word>()?))
            .collect::<Result<Vec<_>>>();
    }
    let mut parsed = Vec::new();
    for line in std::io::read_to_string(std::io::stdin())?.lines() {
        let line = line.trim();
        if !line.is_empty() {
            parsed.push(line.parse::<Word>()?);
        }
    }
    Ok(parsed)
}

fn dispatch<W: Write>(cmd: Command, out: &mut W) -> Result<i32> {
    match cmd {
        Command::Count { words, format } => {
            for w in parse_words(&words)? {
                let inv = FactorInventory::scan(&w);
                match format {
                    Format::Text => writeln!(
                        out,
                        "{w}: squares={} antisquares={}",
                        inv.squares.len(),
                        inv.antisquares.len()
                    )?,
                    Format::Json => writeln!(out, "{}", serde_json::to_string(&inv)?)?,
                }
            }
            Ok(0)
        }
        Command::Exponent { words, format } => {
            for w in parse_words(&words)? {
                let e = critical_exponent(&w)?;
                match format {
                    Format::Text => writeln!(out, "{w}: {e}")?,
                    Format::Json => writeln!(
                        out,
                        "{}",
                        serde_json::json!({ "word": w.to_string(), "critical_exponent": e })
                    )?,
                }
            }
            Ok(0)
        }
        Command::Apply { morphism, word } => {
            let h = morphism.load()?;
            let w: Word = word.parse()?;
            writeln!(out, "{}", h.apply(&w)?)?;
            Ok(0)
        }
        Command::Fixpoint {
            morphism,
            seed,
            length,
            coded,
        } => {
            let name = morphism.name.clone();
            let h = morphism.load()?;
            let mut w = h.fixed_point_prefix(seed, length)?;
            if coded {
                let name = name.context("--coded requires --name")?;
                let coding = catalog_lookup(&name)?
                    .coding
                    .as_ref()
                    .context("catalog entry has no coding")?;
                w = coding.apply(&w)?;
            }
            writeln!(out, "{w}")?;
            Ok(0)
        }
        Command::Enumerate {
            alphabet,
            length,
            family,
            exact,
            count_only,
        } => {
            let words: Box<dyn Iterator<Item = Word>> = match family.as_str() {
                "squarefree" => Box::new(enumerate(EnumerationSpec {
                    alphabet_size: alphabet,
                    max_length: length,
                    predicate: Squarefree,
                })),
                "dejean" => Box::new(enumerate(EnumerationSpec {
                    alphabet_size: alphabet,
                    max_length: length,
                    predicate: EnFree::dejean(),
                })),
                "all" => Box::new(enumerate(EnumerationSpec {
                    alphabet_size: alphabet,
                    max_length: length,
                    predicate: AllWords,
                })),
                other => bail!("unknown family `{other}` (squarefree | dejean | all)"),
            };
            let words = words.filter(move |w| !exact || w.len() == length);
            if count_only {
                writeln!(out, "{}", words.count())?;
            } else {
                for w in words {
                    writeln!(out, "{w}")?;
                }
            }
            Ok(0)
        }
        Command::Longest {
            squares,
            antisquares,
            combined,
            forbid,
            exponent_cap,
            non_strict,
            min_period,
            ban,
            alphabet,
            cutoff,
            format,
        } => {
            let mut c = SearchConstraint {
                max_squares: squares,
                max_antisquares: antisquares,
                max_combined: combined,
                ..Default::default()
            };
            for f in &forbid {
                c.forbidden_factors.push(f.parse()?);
            }
            if let Some(cap) = &exponent_cap {
                let bound: Exponent = cap.parse()?;
                c.exponent_cap = Some(FreenessSpec {
                    bound,
                    strict: !non_strict,
                    min_period,
                });
            }
            for spec in &ban {
                c.pseudosquare_bans.push(parse_ban(spec)?);
            }
            let outcome = longest_word(&c, alphabet, cutoff)?;
            print_outcome(out, &outcome, format, &[("cutoff", cutoff.to_string())])?;
            Ok(0)
        }
        Command::Table {
            amax,
            bmax,
            cutoff,
            out: path,
        } => {
            let table = build_table(amax, bmax, cutoff)?;
            let mut text = String::new();
            text.push_str("a\\b");
            for b in 0..=bmax {
                text.push_str(&format!("\t{b}"));
            }
            text.push('\n');
            for (a, row) in table.iter().enumerate() {
                text.push_str(&a.to_string());
                for outcome in row {
                    if outcome.exhausted {
                        text.push_str(&format!("\t{}", outcome.max_length_found));
                    } else {
                        text.push_str("\tinf");
                    }
                }
                text.push('\n');
            }
            match path {
                Some(p) => std::fs::write(&p, text)
                    .with_context(|| format!("writing {}", p.display()))?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(0)
        }
        Command::Anyalpha {
            kind,
            min,
            bidirectional,
            cutoff,
            format,
        } => {
            let outcome = longest_word_any_alphabet(kind.into(), min, bidirectional, cutoff)?;
            print_outcome(out, &outcome, format, &[("cutoff", cutoff.to_string())])?;
            Ok(0)
        }
        Command::Match {
            x,
            y,
            max_image,
            erasing,
            format,
        } => {
            let x: Word = x.parse()?;
            let y: Word = y.parse()?;
            let budget = MatchBudget {
                max_total_image: max_image,
                require_nonerasing: !erasing,
            };
            match morphism_match(&x, &y, &budget)? {
                Some(h) => {
                    match format {
                        Format::Text => write!(out, "{h}")?,
                        Format::Json => writeln!(out, "{}", serde_json::to_string(&h)?)?,
                    }
                    Ok(0)
                }
                None => {
                    writeln!(out, "no morphism")?;
                    Ok(1)
                }
            }
        }
        Command::Scan {
            word,
            kind,
            min,
            max,
            bidirectional,
            max_image,
            format,
        } => {
            let w: Word = word.parse()?;
            let hit = match kind {
                ScanKind::Perm => find_permutation_pseudosquare(&w, min),
                ScanKind::Trans => find_transformation_pseudosquare(&w, min, bidirectional),
                ScanKind::Morphic => {
                    let budget = MatchBudget {
                        max_total_image: max_image,
                        require_nonerasing: true,
                    };
                    find_morphic_pseudosquare(&w, min, max.unwrap_or(w.len() / 2), &budget)?
                }
            };
            match &hit {
                Some(h) => {
                    match format {
                        Format::Json => writeln!(out, "{}", serde_json::to_string(h)?)?,
                        Format::Text => writeln!(
                            out,
                            "hit at {}: x={} ({:?}, {:?})",
                            h.position, h.x, h.kind, h.orientation
                        )?,
                    }
                    Ok(0)
                }
                None => {
                    match format {
                        Format::Json => writeln!(out, "null")?,
                        Format::Text => writeln!(out, "no hit")?,
                    }
                    Ok(0)
                }
            }
        }
        Command::Discover {
            a,
            b,
            q,
            check_len,
            limit,
        } => {
            let mut n = 0usize;
            for h in discover_uniform_morphisms(a, b, q, check_len).take(limit) {
                write!(out, "{h}")?;
                writeln!(out)?;
                n += 1;
            }
            if n == 0 {
                writeln!(out, "none found")?;
            }
            Ok(0)
        }
        Command::Verify {
            claim,
            format,
            prefix_len,
        } => {
            let reports = run_claim(&claim, prefix_len)?;
            let mut all_passed = true;
            for report in &reports {
                all_passed &= report.passed;
                match format {
                    Format::Json => writeln!(out, "{}", serde_json::to_string(report)?)?,
                    Format::Text => {
                        writeln!(out, "{}: {}", report.claim_id, pass_str(report.passed))?;
                        for c in &report.checks {
                            writeln!(out, "  {} {}: {}", pass_str(c.passed), c.name, c.evidence)?;
                        }
                        if !report.parameters.is_empty() {
                            let params: Vec<String> = report
                                .parameters
                                .iter()
                                .map(|(k, v)| format!("{k}={v}"))
                                .collect();
                            writeln!(out, "  parameters: {}", params.join(" "))?;
                        }
                    }
                }
            }
            Ok(if all_passed { 0 } else { 1 })
        }
        Command::Catalog => {
            for name in catalog_names() {
                let e = catalog_lookup(name)?;
                let h = &e.morphism;
                let uniform = match h.uniform_length() {
                    Some(q) => format!("{q}-uniform"),
                    None => {
                        let lens: Vec<String> =
                            h.images().iter().map(|w| w.len().to_string()).collect();
                        format!("lengths {}", lens.join(","))
                    }
                };
                let sync = synchronization_check(h).map(|(ok, _)| ok).unwrap_or(false);
                writeln!(
                    out,
                    "{name}: domain {} -> target {}, {uniform}, coding={}, synchronizing={}",
                    h.domain_size(),
                    h.target_size(),
                    e.coding.is_some(),
                    sync,
                )?;
            }
            Ok(0)
        }
    }
}

fn pass_str(b: bool) -> &'static str {
    if b {
        "PASS"
    } else {
        "FAIL"
    }
}

impl From<ScanKind> for PseudosquareKind {
    fn from(k: ScanKind) -> Self {
        match k {
            ScanKind::Perm => PseudosquareKind::Permutation,
            ScanKind::Trans => PseudosquareKind::Transformation,
            ScanKind::Morphic => PseudosquareKind::Morphic,
        }
    }
}

fn parse_ban(spec: &str) -> Result<PseudosquareBan> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() < 2 {
        bail!("ban spec must be kind:minlen[:bidir][:budget], got `{spec}`");
    }
    let kind = match parts[0] {
        "perm" => PseudosquareKind::Permutation,
        "trans" => PseudosquareKind::Transformation,
        "morphic" => PseudosquareKind::Morphic,
        other => bail!("unknown ban kind `{other}`"),
    };
    let min_len: usize = parts[1].parse().context("ban minlen")?;
    let mut ban = PseudosquareBan::new(kind, min_len, false);
    for part in &parts[2..] {
        if *part == "bidir" {
            ban.bidirectional = true;
        } else {
            ban.budget = MatchBudget::nonerasing_capped(part.parse().context("ban budget")?);
        }
    }
    Ok(ban)
}

fn print_outcome<W: Write>(
    out: &mut W,
    outcome: &SearchOutcome,
    format: Format,
    params: &[(&str, String)],
) -> Result<()> {
    match format {
        Format::Text => {
            let len = if outcome.exhausted {
                outcome.max_length_found.to_string()
            } else {
                format!("inf (cutoff {} reached)", outcome.max_length_found)
            };
            writeln!(out, "longest: {len}")?;
            writeln!(out, "witness: {}", outcome.witness)?;
            writeln!(out, "nodes: {}", outcome.nodes_visited)?;
        }
        Format::Json => {
            let params: BTreeMap<&str, &String> = params.iter().map(|(k, v)| (*k, v)).collect();
            writeln!(
                out,
                "{}",
                serde_json::json!({
                    "max_length_found": outcome.max_length_found,
                    "witness": outcome.witness.to_string(),
                    "exhausted": outcome.exhausted,
                    "nodes_visited": outcome.nodes_visited,
                    "parameters": params,
                })
            )?;
        }
    }
    Ok(())
}

fn run_claim(claim: &str, prefix_len: usize) -> Result<Vec<VerificationReport>> {
    let reports = match claim {
        "prop1" => vec![verifier::verify_proposition1(10)],
        "cor3" => vec![verifier::verify_corollaries()],
        "thm4" => vec![verifier::verify_automatic_word(AutomaticWord::Thm4, prefix_len)?],
        "thm7" => vec![verifier::verify_automatic_word(AutomaticWord::Thm7, prefix_len)?],
        "thm9:direct" => vec![verifier::verify_theorem9(Theorem9Mode::Direct)],
        "thm9:reduction" => vec![verifier::verify_theorem9(Theorem9Mode::Reduction)],
        "thm2:all" => INVENTORY_MORPHISMS
            .iter()
            .map(|name| verifier::verify_morphism_claim(name))
            .collect::<sqav_core::Result<Vec<_>>>()?,
        other => {
            if let Some(name) = other.strip_prefix("thm2:") {
                vec![verifier::verify_morphism_claim(name)?]
            } else if let Some(stage) = other.strip_prefix("thm10:") {
                let stage = match stage {
                    "props" => Theorem10Stage::Props,
                    "ochem44" => Theorem10Stage::Ochem44,
                    "antisquare_scan" => Theorem10Stage::AntisquareScan,
                    "morphic_scan" => Theorem10Stage::MorphicScan,
                    "all" => Theorem10Stage::All,
                    s => bail!("unknown thm10 stage `{s}`"),
                };
                vec![verifier::verify_theorem10(stage)]
            } else {
                bail!("unknown claim `{other}`");
            }
        }
    };
    Ok(reports)
}
