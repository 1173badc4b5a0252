use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use lbn_cli::{
    answer_query, bp_config_from_env, load_kb, render_clause, render_inference_text,
    render_json, render_parse_text, run_inference_coverage, run_parse_coverage,
};
use lbn_core::grammar::parse_document;
use lbn_core::logic::{parse_document_literal, serialize, Lexicon};
use lbn_core::oracle::exact_posterior;

#[derive(Parser)]
#[command(
    name = "lbn",
    version,
    about = "Answer queries over weighted Horn clause knowledge bases"
)]
struct Cli {
    /// Emit JSON instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    /// Leave the generation timestamp out of coverage reports.
    #[arg(long, global = true)]
    no_timestamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Answer one query literal against a knowledge base.
    Query {
        /// Lexicon file with type, entity, and predicate declarations.
        #[arg(long)]
        lexicon: PathBuf,
        /// Knowledge base file with facts and quantified rules.
        #[arg(long)]
        kb: PathBuf,
        /// Ground literal to answer, e.g. `mortal(theme: socrates)`.
        #[arg(long)]
        query: String,
        /// Also compute the exact posterior by enumeration.
        #[arg(long)]
        oracle: bool,
        /// Print per-sweep belief updates.
        #[arg(long)]
        trace: bool,
        /// Print the factor graph before answering.
        #[arg(long)]
        dump_graph: bool,
        /// Print the grounded clauses before answering.
        #[arg(long)]
        dump_grounding: bool,
    },
    /// Parse a controlled English document into logical statements.
    Parse {
        /// Lexicon file with declarations and surface forms.
        #[arg(long)]
        lexicon: PathBuf,
        /// Document with one sentence per line.
        #[arg(long)]
        doc: PathBuf,
    },
    /// Run corpus directories and report pass/fail per case.
    Coverage {
        #[command(subcommand)]
        command: CoverageCommand,
    },
}

#[derive(Subcommand)]
enum CoverageCommand {
    /// Inference cases: answer queries.txt and check each verdict.
    Verify {
        /// Corpus root containing <category>/<case> directories.
        root: PathBuf,
        /// Also check every answer against exact enumeration.
        #[arg(long)]
        with_oracle: bool,
    },
    /// Parse cases: check document.txt against gold.lbn.
    Parse {
        /// Corpus root containing <category>/<case> directories.
        root: PathBuf,
    },
}

#[derive(Serialize)]
struct QueryOutput {
    query: String,
    verdict: String,
    probability: f64,
    converged: bool,
    iterations: u32,
    singly_connected: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grounding: Option<Vec<String>>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_query(
    json: bool,
    lexicon: &PathBuf,
    kb: &PathBuf,
    query: &str,
    oracle: bool,
    trace: bool,
    dump_graph: bool,
    dump_grounding: bool,
) -> Result<()> {
    let loaded = load_kb(lexicon, kb)?;
    let literal = parse_document_literal(query, &loaded.kb.lexicon)
        .with_context(|| format!("parsing query `{query}`"))?;
    let config = bp_config_from_env()?;
    let answer = answer_query(&loaded, &literal, &config)?;
    let exact = if oracle {
        Some(exact_posterior(&answer.graph, answer.graph.query)?)
    } else {
        None
    };
    let probability = answer.outcome.query_probability(&answer.graph);
    let verdict = answer.outcome.query_verdict(&answer.graph);
    if json {
        let output = QueryOutput {
            query: query.to_string(),
            verdict: verdict.to_string(),
            probability,
            converged: answer.outcome.converged,
            iterations: answer.outcome.iterations,
            singly_connected: answer.graph.is_singly_connected(),
            oracle: exact,
            trace: trace.then(|| answer.outcome.trace.clone()),
            graph: dump_graph.then(|| answer.graph.dump()),
            grounding: dump_grounding
                .then(|| loaded.clauses.iter().map(render_clause).collect()),
        };
        print!("{}", render_json(&output)?);
        return Ok(());
    }
    if dump_grounding {
        for clause in &loaded.clauses {
            println!("{}", render_clause(clause));
        }
    }
    if dump_graph {
        print!("{}", answer.graph.dump());
    }
    if trace {
        for line in &answer.outcome.trace {
            println!("{line}");
        }
    }
    println!("{verdict} {probability:.4}");
    if answer.outcome.converged {
        println!("converged in {} iterations", answer.outcome.iterations);
    } else {
        println!("no convergence after {} iterations", answer.outcome.iterations);
    }
    if let Some(exact) = exact {
        println!("oracle {exact:.4}");
    }
    Ok(())
}

fn cmd_parse(json: bool, lexicon: &PathBuf, doc: &PathBuf) -> Result<()> {
    let lex_text = std::fs::read_to_string(lexicon)
        .with_context(|| format!("reading {}", lexicon.display()))?;
    let lex = Lexicon::parse(&lex_text).with_context(|| format!("parsing {}", lexicon.display()))?;
    let doc_text =
        std::fs::read_to_string(doc).with_context(|| format!("reading {}", doc.display()))?;
    let parses = parse_document(&doc_text, &lex)?;
    if json {
        #[derive(Serialize)]
        struct Line {
            sentence: String,
            rule: String,
            statement: String,
        }
        let lines: Vec<Line> = parses
            .iter()
            .map(|(sentence, p)| Line {
                sentence: sentence.clone(),
                rule: p.rule.to_string(),
                statement: serialize(&p.statement),
            })
            .collect();
        print!("{}", render_json(&lines)?);
    } else {
        for (_, p) in &parses {
            println!("{}: {}", p.rule, serialize(&p.statement));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Query {
            lexicon,
            kb,
            query,
            oracle,
            trace,
            dump_graph,
            dump_grounding,
        } => {
            cmd_query(
                cli.json,
                lexicon,
                kb,
                query,
                *oracle,
                *trace,
                *dump_graph,
                *dump_grounding,
            )?;
            Ok(true)
        }
        Command::Parse { lexicon, doc } => {
            cmd_parse(cli.json, lexicon, doc)?;
            Ok(true)
        }
        Command::Coverage { command } => {
            let config = bp_config_from_env()?;
            let timestamp = !cli.no_timestamp;
            match command {
                CoverageCommand::Verify { root, with_oracle } => {
                    let report = run_inference_coverage(root, *with_oracle, &config, timestamp)?;
                    if cli.json {
                        print!("{}", render_json(&report)?);
                    } else {
                        print!("{}", render_inference_text(&report));
                    }
                    Ok(report.failed == 0)
                }
                CoverageCommand::Parse { root } => {
                    let report = run_parse_coverage(root, timestamp)?;
                    if cli.json {
                        print!("{}", render_json(&report)?);
                    } else {
                        print!("{}", render_parse_text(&report));
                    }
                    Ok(report.failed == 0)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
