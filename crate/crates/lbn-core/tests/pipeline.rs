//! End-to-end runs through the public pipeline: text to lexicon to grounded
//! clauses to factor graph, answered by both message passing and exact
//! enumeration. Expected numbers are worked out by hand from the factor
//! semantics and frozen here.

use lbn_core::bp::{self, BpConfig, Verdict};
use lbn_core::grammar::parse_document;
use lbn_core::graph::{build_graph, FactorGraph, GroupNode, NodeId, PropositionNode};
use lbn_core::ground::ground_kb;
use lbn_core::logic::{parse_literal, serialize, KnowledgeBase, Lexicon};
use lbn_core::oracle::exact_posterior;

fn answer(lex: &str, kb_text: &str, query: &str) -> (FactorGraph, bp::BpOutcome, f64) {
    let lexicon = Lexicon::parse(lex).unwrap();
    let kb = KnowledgeBase::parse(&lexicon, kb_text).unwrap();
    let clauses = ground_kb(&kb).unwrap();
    let q = parse_literal(query, &kb.lexicon).unwrap();
    let graph = build_graph(&clauses, &kb.facts, &q).unwrap();
    let run = bp::run(&graph, &BpConfig::default());
    let exact = exact_posterior(&graph, graph.query).unwrap();
    (graph, run, exact)
}

#[test]
fn chain_inference_matches_oracle_exactly() {
    let (graph, run, exact) = answer(
        "entity socrates : e\npredicate man {theme: e}\npredicate mortal {theme: e}\n",
        "man(theme: socrates)\nalways [x:e]: man(theme: x) -> mortal(theme: x)\n",
        "mortal(theme: socrates)",
    );
    assert!(graph.is_singly_connected());
    assert!(run.converged && run.iterations <= 3);
    let p = run.query_probability(&graph);
    assert!((p - 0.99).abs() < 1e-12);
    assert!((p - exact).abs() < 1e-9);
    assert_eq!(run.query_verdict(&graph), Verdict::Yes);
}

#[test]
fn contrapositive_reasoning_matches_oracle_exactly() {
    let (graph, run, exact) = answer(
        "entity zeus : e\npredicate man {theme: e}\npredicate mortal {theme: e}\n",
        "not mortal(theme: zeus)\nalways [x:e]: man(theme: x) -> mortal(theme: x)\n",
        "man(theme: zeus)",
    );
    assert!(graph.is_singly_connected());
    assert!(run.converged);
    let p = run.query_probability(&graph);
    assert!((p - 0.01 / 1.01).abs() < 1e-12);
    assert!((p - exact).abs() < 1e-9);
    assert_eq!(run.query_verdict(&graph), Verdict::No);
}

#[test]
fn blocking_rule_and_negative_query() {
    let lex = "entity zeus : e\npredicate god {theme: e}\npredicate mortal {theme: e}\n";
    let kb = "god(theme: zeus)\nnever [x:e]: god(theme: x) -> mortal(theme: x)\n";
    let (graph, run, exact) = answer(lex, kb, "mortal(theme: zeus)");
    assert!((run.query_probability(&graph) - 0.01).abs() < 1e-12);
    assert!((run.query_probability(&graph) - exact).abs() < 1e-9);
    assert_eq!(run.query_verdict(&graph), Verdict::No);

    let (graph, run, exact) = answer(lex, kb, "not mortal(theme: zeus)");
    assert!((run.query_probability(&graph) - 0.99).abs() < 1e-12);
    assert!((run.query_probability(&graph) - exact).abs() < 1e-9);
    assert_eq!(run.query_verdict(&graph), Verdict::Yes);
}

#[test]
fn conjunction_of_observed_premises() {
    let (graph, run, exact) = answer(
        "entity jack : e\nentity jill : e\npredicate trust {agent: e, patient: e}\npredicate ally_with {agent: e, patient: e}\n",
        "trust(agent: jack, patient: jill)\ntrust(agent: jill, patient: jack)\nalways [x:e, y:e]: trust(agent: x, patient: y) & trust(agent: y, patient: x) -> ally_with(agent: x, patient: y)\n",
        "ally_with(agent: jack, patient: jill)",
    );
    assert!(run.converged);
    let p = run.query_probability(&graph);
    assert!((p - 0.99).abs() < 1e-12);
    assert!((p - exact).abs() < 1e-9);
}

#[test]
fn two_certain_supporters_yield_certainty() {
    // Weight 1.0 is outside the quantifier map, so this graph is built
    // directly: two observed causes each sufficient on their own.
    let props = vec![
        PropositionNode {
            key: "effect".into(),
            evidence: None,
            supporters: vec![lbn_core::graph::GroupId(0), lbn_core::graph::GroupId(1)],
            partner: None,
        },
        PropositionNode {
            key: "cause_a".into(),
            evidence: Some(true),
            supporters: vec![],
            partner: None,
        },
        PropositionNode {
            key: "cause_b".into(),
            evidence: Some(true),
            supporters: vec![],
            partner: None,
        },
    ];
    let groups = vec![
        GroupNode {
            premises: vec![NodeId(1)],
            conclusion: NodeId(0),
            weight: 1.0,
            clause_index: 0,
        },
        GroupNode {
            premises: vec![NodeId(2)],
            conclusion: NodeId(0),
            weight: 1.0,
            clause_index: 1,
        },
    ];
    let graph = FactorGraph::from_parts(props, groups, NodeId(0));
    let run = bp::run(&graph, &BpConfig::default());
    assert!(run.converged);
    assert_eq!(run.query_probability(&graph), 1.0);
    assert_eq!(exact_posterior(&graph, graph.query).unwrap(), 1.0);
}

#[test]
fn unconnected_query_reports_unknown() {
    let (graph, run, exact) = answer(
        "entity jack : e\nentity jill : e\npredicate trust {agent: e, patient: e}\n",
        "trust(agent: jack, patient: jill)\n",
        "trust(agent: jill, patient: jack)",
    );
    assert_eq!(run.query_probability(&graph), 0.5);
    assert_eq!(exact, 0.5);
    assert_eq!(run.query_verdict(&graph), Verdict::Unknown);
    assert_eq!(run.iterations, 1);
}

#[test]
fn evidence_through_a_symmetry_loop_stays_exact() {
    let (graph, run, exact) = answer(
        "entity john : e\nentity mary : e\npredicate married_to {theme: e, reference: e}\n",
        "married_to(theme: john, reference: mary)\nalways [x:e, y:e]: married_to(theme: x, reference: y) -> married_to(theme: y, reference: x)\n",
        "married_to(theme: mary, reference: john)",
    );
    assert!(!graph.is_singly_connected());
    assert!(run.converged);
    assert_eq!(run.query_probability(&graph), 1.0);
    assert_eq!(exact, 1.0);
}

#[test]
fn english_document_feeds_the_same_pipeline() {
    let lex_text = "\
entity socrates : e
predicate man {theme: e}
predicate mortal {theme: e}
surface \"socrates\" = entity socrates
surface \"man\" = noun man
surface \"men\" = noun man
surface \"mortal\" = adjective mortal
";
    let lexicon = Lexicon::parse(lex_text).unwrap();
    let doc = "Socrates is a man.\nAll men are mortal.\n";
    let parses = parse_document(doc, &lexicon).unwrap();
    let kb_text: String = parses
        .iter()
        .map(|(_, p)| serialize(&p.statement))
        .collect::<Vec<_>>()
        .join("\n");
    let kb = KnowledgeBase::parse(&lexicon, &kb_text).unwrap();
    let clauses = ground_kb(&kb).unwrap();
    let q = parse_literal("mortal(theme: socrates)", &kb.lexicon).unwrap();
    let graph = build_graph(&clauses, &kb.facts, &q).unwrap();
    let run = bp::run(&graph, &BpConfig::default());
    assert!((run.query_probability(&graph) - 0.99).abs() < 1e-12);
}
