//! Query-directed factor graph construction.
//!
//! Starting from the query proposition, the builder expands backward through
//! every grounded clause that concludes a node already in the graph, and
//! forward through every clause that uses one as a premise, until no new
//! nodes appear. Each clause reachable this way becomes a conjunction group
//! (an AND factor over its premises); a proposition with one or more
//! supporting groups combines them through a noisy-OR factor.
//!
//! Negation is explicit: a proposition that is negatively queried, negatively
//! evidenced, or concluded negatively by some clause gets a partner node for
//! its negation, tied to it by a NEG factor that enforces
//! `P(x) + P(not x) = 1`. Nothing else materializes partner nodes, so graphs
//! stay small on negation-free inputs.
//!
//! Construction order is deterministic: nodes are numbered in the order the
//! expansion first reaches them, with clauses always visited in grounding
//! order, so identical inputs produce identical graphs.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::ground::GroundedClause;
use crate::logic::{canonical_key, Literal, LogicError};

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("query is not ground: {0}")]
    UngroundedQuery(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(pub u32);

/// Toggle the negation marker on a canonical key. Involutive.
pub fn negation_key(key: &str) -> String {
    match key.strip_prefix('!') {
        Some(positive) => positive.to_string(),
        None => format!("!{key}"),
    }
}

/// One boolean variable of the graph: a ground proposition or the negation
/// of one (keys of negations carry a `!` prefix).
#[derive(Debug, Clone, PartialEq)]
pub struct PropositionNode {
    pub key: String,
    /// Clamped observation, when a ground fact matches this key.
    pub evidence: Option<bool>,
    /// Conjunction groups supporting this node, in clause order.
    pub supporters: Vec<GroupId>,
    /// NEG-factor partner holding the complementary belief.
    pub partner: Option<NodeId>,
}

impl PropositionNode {
    pub fn is_negation(&self) -> bool {
        self.key.starts_with('!')
    }
}

/// The conjunction of one grounded clause's premises, feeding its conclusion
/// with the clause weight. Premises are deduplicated.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupNode {
    pub premises: Vec<NodeId>,
    pub conclusion: NodeId,
    pub weight: f64,
    pub clause_index: usize,
}

#[derive(Debug, Clone)]
pub struct FactorGraph {
    pub props: Vec<PropositionNode>,
    pub groups: Vec<GroupNode>,
    pub query: NodeId,
    key_index: HashMap<String, NodeId>,
}

impl FactorGraph {
    /// Assemble a graph from explicit parts, rebuilding the key index from
    /// the node keys. Useful for programmatic graphs whose weights fall
    /// outside what the rule language can express.
    pub fn from_parts(
        props: Vec<PropositionNode>,
        groups: Vec<GroupNode>,
        query: NodeId,
    ) -> FactorGraph {
        let key_index = props
            .iter()
            .enumerate()
            .map(|(i, p)| (p.key.clone(), NodeId(i as u32)))
            .collect();
        FactorGraph {
            props,
            groups,
            query,
            key_index,
        }
    }

    pub fn node(&self, id: NodeId) -> &PropositionNode {
        &self.props[id.0 as usize]
    }

    pub fn group(&self, id: GroupId) -> &GroupNode {
        &self.groups[id.0 as usize]
    }

    pub fn lookup(&self, key: &str) -> Option<NodeId> {
        self.key_index.get(key).copied()
    }

    /// NEG-linked pairs as (positive node, negation node), ordered by the
    /// positive node's id.
    pub fn neg_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out = Vec::new();
        for (i, p) in self.props.iter().enumerate() {
            if !p.is_negation() {
                if let Some(partner) = p.partner {
                    out.push((NodeId(i as u32), partner));
                }
            }
        }
        out
    }

    /// Groups listing each node among their premises, in group order.
    pub fn consumers(&self) -> Vec<Vec<GroupId>> {
        let mut out = vec![Vec::new(); self.props.len()];
        for (gi, g) in self.groups.iter().enumerate() {
            for &p in &g.premises {
                out[p.0 as usize].push(GroupId(gi as u32));
            }
        }
        out
    }

    /// True when the factor graph is a forest: treating propositions and
    /// groups as vertices, and premise links, conclusion links, and NEG links
    /// as undirected edges, no cycle exists.
    pub fn is_singly_connected(&self) -> bool {
        let n = self.props.len() + self.groups.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut acyclic = true;
        let union = |parent: &mut Vec<usize>, a: usize, b: usize, acyclic: &mut bool| {
            let ra = find(parent, a);
            let rb = find(parent, b);
            if ra == rb {
                *acyclic = false;
            } else {
                parent[ra] = rb;
            }
        };
        let group_vertex = |gi: usize| self.props.len() + gi;
        for (gi, g) in self.groups.iter().enumerate() {
            union(
                &mut parent,
                g.conclusion.0 as usize,
                group_vertex(gi),
                &mut acyclic,
            );
            for &p in &g.premises {
                union(&mut parent, p.0 as usize, group_vertex(gi), &mut acyclic);
            }
        }
        for (pos, neg) in self.neg_pairs() {
            union(&mut parent, pos.0 as usize, neg.0 as usize, &mut acyclic);
        }
        acyclic
    }

    /// Stable textual rendering for traces and golden comparisons.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "query {}", self.query.0);
        for (i, p) in self.props.iter().enumerate() {
            let _ = write!(out, "prop {} {}", i, p.key);
            if let Some(v) = p.evidence {
                let _ = write!(out, " evidence={v}");
            }
            if !p.supporters.is_empty() {
                let ids: Vec<String> = p.supporters.iter().map(|g| g.0.to_string()).collect();
                let _ = write!(out, " supporters=[{}]", ids.join(","));
            }
            out.push('\n');
        }
        for (i, g) in self.groups.iter().enumerate() {
            let ids: Vec<String> = g.premises.iter().map(|p| p.0.to_string()).collect();
            let _ = writeln!(
                out,
                "group {} premises=[{}] conclusion={} weight={} clause={}",
                i,
                ids.join(","),
                g.conclusion.0,
                g.weight,
                g.clause_index
            );
        }
        for (pos, neg) in self.neg_pairs() {
            let _ = writeln!(out, "neg {} {}", pos.0, neg.0);
        }
        out
    }
}

struct ClauseMeta {
    premise_keys: Vec<String>,
    conclusion_key: String,
}

struct Builder<'a> {
    clauses: &'a [GroundedClause],
    meta: Vec<ClauseMeta>,
    facts: &'a [Literal],
    props: Vec<PropositionNode>,
    key_index: HashMap<String, NodeId>,
    groups: Vec<GroupNode>,
    worklist: VecDeque<NodeId>,
}

impl<'a> Builder<'a> {
    fn ensure_node(&mut self, key: &str) -> NodeId {
        if let Some(&id) = self.key_index.get(key) {
            return id;
        }
        let id = NodeId(self.props.len() as u32);
        self.props.push(PropositionNode {
            key: key.to_string(),
            evidence: None,
            supporters: Vec::new(),
            partner: None,
        });
        self.key_index.insert(key.to_string(), id);
        self.worklist.push_back(id);
        id
    }

    /// Materialize the NEG pair for a positive key, returning (pos, neg).
    fn ensure_pair(&mut self, positive_key: &str) -> (NodeId, NodeId) {
        let pos = self.ensure_node(positive_key);
        let neg_key = negation_key(positive_key);
        let neg = self.ensure_node(&neg_key);
        self.props[pos.0 as usize].partner = Some(neg);
        self.props[neg.0 as usize].partner = Some(pos);
        (pos, neg)
    }

    fn process(&mut self, id: NodeId) {
        let key = self.props[id.0 as usize].key.clone();
        // Backward: every clause concluding this node becomes a supporter.
        let concluding: Vec<usize> = (0..self.meta.len())
            .filter(|&ci| self.meta[ci].conclusion_key == key)
            .collect();
        for ci in concluding {
            let premise_keys = self.meta[ci].premise_keys.clone();
            let mut premises: Vec<NodeId> = Vec::new();
            for pk in &premise_keys {
                let pid = self.ensure_node(pk);
                if !premises.contains(&pid) {
                    premises.push(pid);
                }
            }
            let gid = GroupId(self.groups.len() as u32);
            self.groups.push(GroupNode {
                premises,
                conclusion: id,
                weight: self.clauses[ci].weight,
                clause_index: ci,
            });
            self.props[id.0 as usize].supporters.push(gid);
        }
        if !key.starts_with('!') {
            // Negation triggers: a clause concluding the negation, or a
            // negated ground fact on this proposition.
            let neg_key = negation_key(&key);
            let negatively_concluded = self.meta.iter().any(|m| m.conclusion_key == neg_key);
            let negatively_evidenced = self.facts.iter().any(|f| {
                !f.polarity && canonical_key(&f.proposition).as_deref() == Ok(key.as_str())
            });
            if negatively_concluded || negatively_evidenced {
                self.ensure_pair(&key);
            }
            // Forward: any clause using this node as a premise pulls in its
            // conclusion; the group itself is created when the conclusion
            // node is processed.
            let conclusions: Vec<String> = self
                .meta
                .iter()
                .filter(|m| m.premise_keys.iter().any(|k| k == &key))
                .map(|m| m.conclusion_key.clone())
                .collect();
            for ckey in conclusions {
                if let Some(positive) = ckey.strip_prefix('!') {
                    let positive = positive.to_string();
                    self.ensure_pair(&positive);
                } else {
                    self.ensure_node(&ckey);
                }
            }
        } else {
            // A negation node always has its positive partner.
            let positive = negation_key(&key);
            self.ensure_pair(&positive);
        }
    }
}

/// Build the factor graph for one ground query literal.
pub fn build_graph(
    clauses: &[GroundedClause],
    facts: &[Literal],
    query: &Literal,
) -> Result<FactorGraph, GraphError> {
    if !query.proposition.is_ground() {
        return Err(GraphError::UngroundedQuery(query.proposition.to_string()));
    }
    let meta = clauses
        .iter()
        .map(|c| {
            let premise_keys = c.premise_keys()?;
            let base = canonical_key(&c.conclusion.proposition)?;
            let conclusion_key = if c.conclusion.polarity {
                base
            } else {
                negation_key(&base)
            };
            Ok(ClauseMeta {
                premise_keys,
                conclusion_key,
            })
        })
        .collect::<Result<Vec<_>, LogicError>>()?;
    let mut b = Builder {
        clauses,
        meta,
        facts,
        props: Vec::new(),
        key_index: HashMap::new(),
        groups: Vec::new(),
        worklist: VecDeque::new(),
    };
    let query_base = canonical_key(&query.proposition)?;
    let query_id = if query.polarity {
        b.ensure_node(&query_base)
    } else {
        let (_, neg) = b.ensure_pair(&query_base);
        neg
    };
    while let Some(id) = b.worklist.pop_front() {
        b.process(id);
    }
    // Evidence marking: positive facts clamp their node true; negated facts
    // clamp the node false and its negation partner true. Facts whose key
    // never entered the expansion are ignored.
    let mut props = b.props;
    let key_index = b.key_index;
    for f in facts {
        let key = canonical_key(&f.proposition)?;
        if let Some(&id) = key_index.get(&key) {
            props[id.0 as usize].evidence = Some(f.polarity);
            if let Some(partner) = props[id.0 as usize].partner {
                props[partner.0 as usize].evidence = Some(!f.polarity);
            }
        }
    }
    Ok(FactorGraph {
        props,
        groups: b.groups,
        query: query_id,
        key_index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::ground_kb;
    use crate::logic::{parse_literal, KnowledgeBase, Lexicon};

    fn graph_for(lex: &str, kb_text: &str, query: &str) -> FactorGraph {
        let lexicon = Lexicon::parse(lex).unwrap();
        let kb = KnowledgeBase::parse(&lexicon, kb_text).unwrap();
        let clauses = ground_kb(&kb).unwrap();
        let q = parse_literal(query, &kb.lexicon).unwrap();
        build_graph(&clauses, &kb.facts, &q).unwrap()
    }

    const SOCRATES_LEX: &str =
        "entity socrates : e\npredicate man {theme: e}\npredicate mortal {theme: e}\n";
    const SOCRATES_KB: &str =
        "man(theme: socrates)\nalways [x:e]: man(theme: x) -> mortal(theme: x)\n";

    #[test]
    fn negation_key_is_involutive() {
        let key = "man(theme=zeus)";
        assert_eq!(negation_key(key), "!man(theme=zeus)");
        assert_eq!(negation_key(&negation_key(key)), key);
    }

    #[test]
    fn socrates_graph_shape() {
        let g = graph_for(SOCRATES_LEX, SOCRATES_KB, "mortal(theme: socrates)");
        assert_eq!(g.props.len(), 2);
        assert_eq!(g.groups.len(), 1);
        assert_eq!(g.neg_pairs().len(), 0);
        assert_eq!(g.node(g.query).key, "mortal(theme=socrates)");
        let man = g.lookup("man(theme=socrates)").unwrap();
        assert_eq!(g.node(man).evidence, Some(true));
        assert_eq!(g.node(g.query).supporters.len(), 1);
        assert!(g.is_singly_connected());
    }

    #[test]
    fn contrapositive_graph_marks_negative_evidence() {
        let g = graph_for(
            "entity zeus : e\npredicate man {theme: e}\npredicate mortal {theme: e}\n",
            "not mortal(theme: zeus)\nalways [x:e]: man(theme: x) -> mortal(theme: x)\n",
            "man(theme: zeus)",
        );
        // Query reaches mortal(zeus) by forward expansion; the negated fact
        // materializes the NEG pair with the negation clamped true.
        let mortal = g.lookup("mortal(theme=zeus)").unwrap();
        let neg = g.lookup("!mortal(theme=zeus)").unwrap();
        assert_eq!(g.node(mortal).evidence, Some(false));
        assert_eq!(g.node(neg).evidence, Some(true));
        assert_eq!(g.neg_pairs(), vec![(mortal, neg)]);
        assert_eq!(g.groups.len(), 1);
        assert!(g.is_singly_connected());
    }

    #[test]
    fn never_rule_supports_the_negation_node() {
        let g = graph_for(
            "entity zeus : e\npredicate god {theme: e}\npredicate mortal {theme: e}\n",
            "god(theme: zeus)\nnever [x:e]: god(theme: x) -> mortal(theme: x)\n",
            "mortal(theme: zeus)",
        );
        let neg = g.lookup("!mortal(theme=zeus)").unwrap();
        assert_eq!(g.node(neg).supporters.len(), 1);
        assert_eq!(g.node(g.query).supporters.len(), 0);
        let god = g.lookup("god(theme=zeus)").unwrap();
        assert_eq!(g.node(god).evidence, Some(true));
    }

    #[test]
    fn negative_query_selects_negation_node() {
        let g = graph_for(
            "entity zeus : e\npredicate god {theme: e}\npredicate mortal {theme: e}\n",
            "god(theme: zeus)\nnever [x:e]: god(theme: x) -> mortal(theme: x)\n",
            "not mortal(theme: zeus)",
        );
        assert_eq!(g.node(g.query).key, "!mortal(theme=zeus)");
        assert_eq!(g.node(g.query).supporters.len(), 1);
    }

    #[test]
    fn unrelated_facts_stay_out_of_the_graph() {
        let g = graph_for(
            "entity jack : e\nentity jill : e\npredicate trust {agent: e, patient: e}\n",
            "trust(agent: jack, patient: jill)\n",
            "trust(agent: jill, patient: jack)",
        );
        assert_eq!(g.props.len(), 1);
        assert_eq!(g.groups.len(), 0);
        assert_eq!(g.node(g.query).evidence, None);
    }

    #[test]
    fn forward_expansion_reaches_conclusions_of_known_premises() {
        let g = graph_for(
            "entity hill : e\npredicate lightning {theme: e}\npredicate fire {theme: e}\npredicate smoke {theme: e}\n",
            "lightning(theme: hill)\nalways [x:e]: lightning(theme: x) -> fire(theme: x)\nalways [x:e]: fire(theme: x) -> smoke(theme: x)\n",
            "smoke(theme: hill)",
        );
        assert_eq!(g.props.len(), 3);
        assert_eq!(g.groups.len(), 2);
        assert!(g.is_singly_connected());
    }

    #[test]
    fn repeated_premises_dedupe_within_a_group() {
        let g = graph_for(
            "entity coin : e\npredicate inside {theme: e, reference: e}\n",
            "always [x:e, y:e, z:e]: inside(theme: x, reference: y) & inside(theme: y, reference: z) -> inside(theme: x, reference: z)\n",
            "inside(theme: coin, reference: coin)",
        );
        for g in &g.groups {
            let mut seen = g.premises.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), g.premises.len());
        }
    }

    #[test]
    fn construction_is_deterministic() {
        let a = graph_for(SOCRATES_LEX, SOCRATES_KB, "mortal(theme: socrates)");
        let b = graph_for(SOCRATES_LEX, SOCRATES_KB, "mortal(theme: socrates)");
        assert_eq!(a.dump(), b.dump());
    }

    #[test]
    fn loopy_graph_detected() {
        let g = graph_for(
            "entity john : e\nentity mary : e\npredicate married_to {theme: e, reference: e}\n",
            "married_to(theme: john, reference: mary)\nalways [x:e, y:e]: married_to(theme: x, reference: y) -> married_to(theme: y, reference: x)\n",
            "married_to(theme: mary, reference: john)",
        );
        assert!(!g.is_singly_connected());
    }
}
