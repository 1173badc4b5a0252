//! Harness for corpus-driven checks: case discovery, execution, and report
//! rendering shared by the command line binary and the test suite.
//!
//! An inference case directory holds `lexicon.lex`, `kb.lbn`, and
//! `queries.txt` with lines of the form `QUERY <literal> EXPECT <verdict>`.
//! A parse case directory holds `lexicon.lex`, `document.txt`, and
//! `gold.lbn`; the document must parse sentence by sentence into exactly
//! the statements of the gold file.
//!
//! Reports render deterministically; the generation timestamp is the only
//! varying line and can be suppressed, which is how byte-for-byte report
//! comparison is done.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use lbn_core::bp::{self, BpConfig};
use lbn_core::grammar::parse_document;
use lbn_core::graph::{build_graph, FactorGraph};
use lbn_core::ground::{ground_kb, GroundedClause};
use lbn_core::logic::{
    parse_document_literal, parse_logic, serialize, KnowledgeBase, Lexicon, Literal,
};
use lbn_core::oracle::exact_posterior;

/// Allowed gap between message passing and enumeration on forest graphs.
pub const TREE_TOLERANCE: f64 = 1e-9;
/// Allowed gap on graphs with cycles.
pub const LOOPY_TOLERANCE: f64 = 0.05;

/// Default sweep budget, overridable through `LBN_MAX_ITERS`.
pub fn bp_config_from_env() -> Result<BpConfig> {
    let mut config = BpConfig::default();
    if let Ok(raw) = std::env::var("LBN_MAX_ITERS") {
        let n: u32 = raw
            .parse()
            .with_context(|| format!("LBN_MAX_ITERS must be a positive integer, got `{raw}`"))?;
        if n == 0 {
            bail!("LBN_MAX_ITERS must be a positive integer, got `0`");
        }
        config.max_iterations = n;
    }
    Ok(config)
}

pub struct LoadedKb {
    pub lexicon: Lexicon,
    pub kb: KnowledgeBase,
    pub clauses: Vec<GroundedClause>,
}

pub fn load_kb(lexicon_path: &Path, kb_path: &Path) -> Result<LoadedKb> {
    let lex_text = fs::read_to_string(lexicon_path)
        .with_context(|| format!("reading {}", lexicon_path.display()))?;
    let lexicon = Lexicon::parse(&lex_text)
        .with_context(|| format!("parsing {}", lexicon_path.display()))?;
    let kb_text =
        fs::read_to_string(kb_path).with_context(|| format!("reading {}", kb_path.display()))?;
    let kb = KnowledgeBase::parse(&lexicon, &kb_text)
        .with_context(|| format!("parsing {}", kb_path.display()))?;
    let clauses = ground_kb(&kb).with_context(|| format!("grounding {}", kb_path.display()))?;
    Ok(LoadedKb {
        lexicon,
        kb,
        clauses,
    })
}

/// Render a grounded clause the way `--dump-grounding` prints it.
pub fn render_clause(clause: &GroundedClause) -> String {
    let premises: Vec<String> = clause.premises.iter().map(|p| p.to_string()).collect();
    format!(
        "{} -> {} [weight={}]",
        premises.join(" & "),
        clause.conclusion,
        clause.weight
    )
}

/// One expected answer from a `queries.txt` line.
#[derive(Debug, Clone)]
pub struct QuerySpec {
    pub literal: String,
    pub expected: String,
}

pub fn parse_query_lines(text: &str) -> Result<Vec<QuerySpec>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let rest = line
            .strip_prefix("QUERY ")
            .with_context(|| format!("line {}: expected `QUERY <literal> EXPECT <verdict>`", i + 1))?;
        let (literal, expected) = rest
            .rsplit_once(" EXPECT ")
            .with_context(|| format!("line {}: missing ` EXPECT <verdict>`", i + 1))?;
        let expected = expected.trim();
        if !matches!(expected, "yes" | "no" | "unknown") {
            bail!("line {}: verdict must be yes, no, or unknown", i + 1);
        }
        out.push(QuerySpec {
            literal: literal.trim().to_string(),
            expected: expected.to_string(),
        });
    }
    if out.is_empty() {
        bail!("no queries found");
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryReport {
    pub query: String,
    pub expected: String,
    pub verdict: String,
    pub probability: f64,
    pub converged: bool,
    pub iterations: u32,
    pub singly_connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub case: String,
    pub pass: bool,
    pub queries: Vec<QueryReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SentenceReport {
    pub sentence: String,
    pub rule: String,
    pub statement: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ParseCaseReport {
    pub case: String,
    pub pass: bool,
    pub sentences: Vec<SentenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport<C: Serialize> {
    pub kind: String,
    pub root: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
    pub cases: Vec<C>,
    pub passed: usize,
    pub failed: usize,
}

pub fn unix_timestamp() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Find `root/<category>/<case>/` directories containing `marker`, sorted
/// by case name.
pub fn discover_cases(root: &Path, marker: &str) -> Result<Vec<(String, PathBuf)>> {
    let mut out = Vec::new();
    let categories =
        fs::read_dir(root).with_context(|| format!("reading corpus root {}", root.display()))?;
    let mut category_dirs: Vec<PathBuf> = categories
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    category_dirs.sort();
    for category in category_dirs {
        let mut case_dirs: Vec<PathBuf> = fs::read_dir(&category)
            .with_context(|| format!("reading {}", category.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_dir() && p.join(marker).is_file())
            .collect();
        case_dirs.sort();
        for case in case_dirs {
            let name = format!(
                "{}/{}",
                category.file_name().unwrap_or_default().to_string_lossy(),
                case.file_name().unwrap_or_default().to_string_lossy()
            );
            out.push((name, case));
        }
    }
    if out.is_empty() {
        bail!("no cases with {} under {}", marker, root.display());
    }
    Ok(out)
}

/// Answer one ground query literal against a loaded knowledge base.
pub struct Answer {
    pub graph: FactorGraph,
    pub outcome: bp::BpOutcome,
}

pub fn answer_query(loaded: &LoadedKb, literal: &Literal, config: &BpConfig) -> Result<Answer> {
    let graph = build_graph(&loaded.clauses, &loaded.kb.facts, literal)?;
    let outcome = bp::run(&graph, config);
    Ok(Answer { graph, outcome })
}

fn run_inference_queries(
    dir: &Path,
    with_oracle: bool,
    config: &BpConfig,
) -> Result<Vec<QueryReport>> {
    let loaded = load_kb(&dir.join("lexicon.lex"), &dir.join("kb.lbn"))?;
    let specs = parse_query_lines(
        &fs::read_to_string(dir.join("queries.txt"))
            .with_context(|| format!("reading {}", dir.join("queries.txt").display()))?,
    )?;
    let mut out = Vec::new();
    for spec in specs {
        let literal = parse_document_literal(&spec.literal, &loaded.kb.lexicon)
            .with_context(|| format!("parsing query `{}`", spec.literal))?;
        let answer = answer_query(&loaded, &literal, config)?;
        let probability = answer.outcome.query_probability(&answer.graph);
        let verdict = answer.outcome.query_verdict(&answer.graph).to_string();
        let singly_connected = answer.graph.is_singly_connected();
        let mut failure = None;
        if verdict != spec.expected {
            failure = Some(format!(
                "expected {}, got {} (p={probability:.4})",
                spec.expected, verdict
            ));
        } else if !answer.outcome.converged {
            failure = Some(format!(
                "did not converge in {} iterations",
                answer.outcome.iterations
            ));
        }
        let mut oracle = None;
        if with_oracle && failure.is_none() {
            match exact_posterior(&answer.graph, answer.graph.query) {
                Ok(exact) => {
                    oracle = Some(exact);
                    let tolerance = if singly_connected {
                        TREE_TOLERANCE
                    } else {
                        LOOPY_TOLERANCE
                    };
                    let delta = (probability - exact).abs();
                    if delta > tolerance {
                        failure = Some(format!(
                            "bp {probability:.6} vs oracle {exact:.6} differs by {delta:.2e} (tolerance {tolerance:.0e})"
                        ));
                    }
                }
                Err(e) => failure = Some(format!("oracle: {e}")),
            }
        }
        out.push(QueryReport {
            query: spec.literal,
            expected: spec.expected,
            verdict,
            probability,
            converged: answer.outcome.converged,
            iterations: answer.outcome.iterations,
            singly_connected,
            oracle,
            pass: failure.is_none(),
            failure,
        });
    }
    Ok(out)
}

pub fn run_inference_case(
    name: &str,
    dir: &Path,
    with_oracle: bool,
    config: &BpConfig,
) -> CaseReport {
    match run_inference_queries(dir, with_oracle, config) {
        Ok(queries) => CaseReport {
            case: name.to_string(),
            pass: queries.iter().all(|q| q.pass),
            queries,
            error: None,
        },
        Err(e) => CaseReport {
            case: name.to_string(),
            pass: false,
            queries: Vec::new(),
            error: Some(format!("{e:#}")),
        },
    }
}

fn run_parse_sentences(dir: &Path) -> Result<(Vec<SentenceReport>, Option<String>)> {
    let lex_text = fs::read_to_string(dir.join("lexicon.lex"))
        .with_context(|| format!("reading {}", dir.join("lexicon.lex").display()))?;
    let lexicon = Lexicon::parse(&lex_text)?;
    let doc = fs::read_to_string(dir.join("document.txt"))
        .with_context(|| format!("reading {}", dir.join("document.txt").display()))?;
    let gold_text = fs::read_to_string(dir.join("gold.lbn"))
        .with_context(|| format!("reading {}", dir.join("gold.lbn").display()))?;
    let gold = parse_logic(&gold_text, &lexicon)?;
    let parses = parse_document(&doc, &lexicon)?;
    let sentences: Vec<SentenceReport> = parses
        .iter()
        .map(|(sentence, p)| SentenceReport {
            sentence: sentence.clone(),
            rule: p.rule.to_string(),
            statement: serialize(&p.statement),
        })
        .collect();
    let got: Vec<_> = parses.into_iter().map(|(_, p)| p.statement).collect();
    let mismatch = if got.len() != gold.len() {
        Some(format!(
            "parsed {} statements, gold has {}",
            got.len(),
            gold.len()
        ))
    } else {
        got.iter()
            .zip(gold.iter())
            .position(|(a, b)| a != b)
            .map(|i| {
                format!(
                    "statement {} differs: got `{}`, gold `{}`",
                    i + 1,
                    serialize(&got[i]),
                    serialize(&gold[i])
                )
            })
    };
    Ok((sentences, mismatch))
}

pub fn run_parse_case(name: &str, dir: &Path) -> ParseCaseReport {
    match run_parse_sentences(dir) {
        Ok((sentences, mismatch)) => ParseCaseReport {
            case: name.to_string(),
            pass: mismatch.is_none(),
            sentences,
            error: mismatch,
        },
        Err(e) => ParseCaseReport {
            case: name.to_string(),
            pass: false,
            sentences: Vec::new(),
            error: Some(format!("{e:#}")),
        },
    }
}

pub fn run_inference_coverage(
    root: &Path,
    with_oracle: bool,
    config: &BpConfig,
    timestamp: bool,
) -> Result<CoverageReport<CaseReport>> {
    let cases = discover_cases(root, "queries.txt")?;
    let reports: Vec<CaseReport> = cases
        .iter()
        .map(|(name, dir)| run_inference_case(name, dir, with_oracle, config))
        .collect();
    let passed = reports.iter().filter(|c| c.pass).count();
    Ok(CoverageReport {
        kind: "inference".to_string(),
        root: root.display().to_string(),
        generated_at_unix: timestamp.then(unix_timestamp),
        failed: reports.len() - passed,
        passed,
        cases: reports,
    })
}

pub fn run_parse_coverage(
    root: &Path,
    timestamp: bool,
) -> Result<CoverageReport<ParseCaseReport>> {
    let cases = discover_cases(root, "document.txt")?;
    let reports: Vec<ParseCaseReport> = cases
        .iter()
        .map(|(name, dir)| run_parse_case(name, dir))
        .collect();
    let passed = reports.iter().filter(|c| c.pass).count();
    Ok(CoverageReport {
        kind: "parse".to_string(),
        root: root.display().to_string(),
        generated_at_unix: timestamp.then(unix_timestamp),
        failed: reports.len() - passed,
        passed,
        cases: reports,
    })
}

pub fn render_inference_text(report: &CoverageReport<CaseReport>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} coverage for {}", report.kind, report.root);
    if let Some(t) = report.generated_at_unix {
        let _ = writeln!(out, "generated_at_unix {t}");
    }
    for case in &report.cases {
        if case.pass {
            let n = case.queries.len();
            let plural = if n == 1 { "query" } else { "queries" };
            let _ = writeln!(out, "PASS {} ({n} {plural})", case.case);
        } else {
            let _ = writeln!(out, "FAIL {}", case.case);
            if let Some(e) = &case.error {
                let _ = writeln!(out, "  {e}");
            }
            for q in case.queries.iter().filter(|q| !q.pass) {
                let _ = writeln!(
                    out,
                    "  query {}: {}",
                    q.query,
                    q.failure.as_deref().unwrap_or("failed")
                );
            }
        }
    }
    let total = report.cases.len();
    let _ = writeln!(out, "{}/{} cases passed", report.passed, total);
    out
}

pub fn render_parse_text(report: &CoverageReport<ParseCaseReport>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} coverage for {}", report.kind, report.root);
    if let Some(t) = report.generated_at_unix {
        let _ = writeln!(out, "generated_at_unix {t}");
    }
    for case in &report.cases {
        if case.pass {
            let n = case.sentences.len();
            let plural = if n == 1 { "sentence" } else { "sentences" };
            let _ = writeln!(out, "PASS {} ({n} {plural})", case.case);
        } else {
            let _ = writeln!(out, "FAIL {}", case.case);
            if let Some(e) = &case.error {
                let _ = writeln!(out, "  {e}");
            }
        }
    }
    let total = report.cases.len();
    let _ = writeln!(out, "{}/{} cases passed", report.passed, total);
    out
}

pub fn render_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}
