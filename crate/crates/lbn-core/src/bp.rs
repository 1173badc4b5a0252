//! Damped loopy belief propagation over the factor graph.
//!
//! Messages follow the classic value-passing scheme: causal support flows
//! down through noisy-OR combinations of conjunction groups, diagnostic
//! support flows up as likelihood pairs, and NEG factors exchange swapped
//! state between a proposition and its negation so the two beliefs always
//! sum to one.
//!
//! The value a premise contributes to a group is leave-one-out: it combines
//! the premise's causal value with messages from every consumer group
//! except the one being computed, never the full belief. Feeding the full
//! belief back would count the group's own likelihood twice and skew chains
//! with negative evidence by orders of magnitude.
//!
//! Convergence is measured on the raw computed beliefs: the run stops when
//! no node's computed belief moved more than `epsilon` between sweeps. The
//! damped sequence `b_t = damping * b_{t-1} + (1 - damping) * computed_t`
//! is tracked alongside and is what a non-converged run reports; once the
//! computed beliefs reach a fixed point the damped sequence converges to
//! the same values, so a converged run reports the fixed point directly.
//! On singly connected graphs one or two sweeps reproduce exact marginals.

use crate::graph::{FactorGraph, GroupId, NodeId};

#[derive(Debug, Clone, Copy)]
pub struct BpConfig {
    pub damping: f64,
    pub epsilon: f64,
    pub max_iterations: u32,
}

impl Default for BpConfig {
    fn default() -> Self {
        BpConfig {
            damping: 0.5,
            epsilon: 1e-6,
            max_iterations: 20,
        }
    }
}

/// Half-width of the probability band around 0.5 read as "unknown".
pub const VERDICT_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Unknown => "unknown",
        })
    }
}

pub fn classify(probability: f64, band: f64) -> Verdict {
    if (probability - 0.5).abs() <= band {
        Verdict::Unknown
    } else if probability > 0.5 {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

#[derive(Debug, Clone)]
pub struct BpOutcome {
    /// Posterior belief per node, aligned with `graph.props`.
    pub beliefs: Vec<f64>,
    pub converged: bool,
    pub iterations: u32,
    /// One line per sweep describing the query belief and the sweep delta.
    pub trace: Vec<String>,
}

impl BpOutcome {
    pub fn query_probability(&self, graph: &FactorGraph) -> f64 {
        self.beliefs[graph.query.0 as usize]
    }

    pub fn query_verdict(&self, graph: &FactorGraph) -> Verdict {
        classify(self.query_probability(graph), VERDICT_BAND)
    }
}

/// Probability that at least one cause fires: `1 - prod(1 - w * p)`.
/// No leak term, so with no causes (or all causes false) the result is 0.
pub fn noisy_or(causes: &[(f64, f64)]) -> f64 {
    let mut none_fire = 1.0;
    for &(w, p) in causes {
        none_fire *= 1.0 - w * p;
    }
    1.0 - none_fire
}

/// Likelihood message from a conclusion node to one supporting group.
///
/// `others` lists the remaining supporters as (weight, group probability)
/// pairs, marginalized at their current causal values; `node_lambda` is the
/// conclusion's full likelihood pair (true, false).
pub fn or_lambda(weight: f64, others: &[(f64, f64)], node_lambda: (f64, f64)) -> (f64, f64) {
    let others_silent: f64 = others.iter().map(|&(w, p)| 1.0 - w * p).product();
    let msg = |group_value: f64| {
        let p_true = 1.0 - (1.0 - weight * group_value) * others_silent;
        node_lambda.0 * p_true + node_lambda.1 * (1.0 - p_true)
    };
    (msg(1.0), msg(0.0))
}

/// Likelihood message from a group to one of its premises, given the
/// group's likelihood pair and the product of the other premises' values.
pub fn and_lambda(group_lambda: (f64, f64), others_product: f64) -> (f64, f64) {
    (
        group_lambda.0 * others_product + group_lambda.1 * (1.0 - others_product),
        group_lambda.1,
    )
}

fn normalize_p(true_mass: f64, false_mass: f64) -> f64 {
    let total = true_mass + false_mass;
    if total <= 0.0 {
        0.5
    } else {
        true_mass / total
    }
}

fn max_normalize(pair: (f64, f64)) -> (f64, f64) {
    let m = pair.0.max(pair.1);
    if m <= 0.0 {
        (1.0, 1.0)
    } else {
        (pair.0 / m, pair.1 / m)
    }
}

struct State {
    /// Likelihood clamp from evidence: (1,0) true, (0,1) false, (1,1) free.
    clamp: Vec<(f64, f64)>,
    /// Consumer groups per node.
    consumers: Vec<Vec<GroupId>>,
    /// Causal value per node.
    pi: Vec<f64>,
    /// Group-to-premise likelihood pairs, indexed like group premises.
    contribs: Vec<Vec<(f64, f64)>>,
    /// NEG factor message per node.
    neg_contrib: Vec<(f64, f64)>,
    /// Total likelihood pair per node from the last completed sweep.
    lambda_total: Vec<(f64, f64)>,
}

impl State {
    /// Leave-one-out value of `node` as seen by `exclude`: causal value
    /// combined with every other consumer's message, the NEG message, and
    /// the evidence clamp.
    fn premise_value(&self, node: NodeId, exclude: GroupId, graph: &FactorGraph) -> f64 {
        let i = node.0 as usize;
        let mut t = self.pi[i] * self.clamp[i].0 * self.neg_contrib[i].0;
        let mut f = (1.0 - self.pi[i]) * self.clamp[i].1 * self.neg_contrib[i].1;
        for &g in &self.consumers[i] {
            if g == exclude {
                continue;
            }
            let slot = graph
                .group(g)
                .premises
                .iter()
                .position(|&p| p == node)
                .expect("consumer group lists node among premises");
            let c = self.contribs[g.0 as usize][slot];
            t *= c.0;
            f *= c.1;
        }
        normalize_p(t, f)
    }
}

pub fn run(graph: &FactorGraph, config: &BpConfig) -> BpOutcome {
    let n = graph.props.len();
    let clamp: Vec<(f64, f64)> = graph
        .props
        .iter()
        .map(|p| match p.evidence {
            Some(true) => (1.0, 0.0),
            Some(false) => (0.0, 1.0),
            None => (1.0, 1.0),
        })
        .collect();
    let mut state = State {
        clamp,
        consumers: graph.consumers(),
        pi: vec![0.5; n],
        contribs: graph
            .groups
            .iter()
            .map(|g| vec![(1.0, 1.0); g.premises.len()])
            .collect(),
        neg_contrib: vec![(1.0, 1.0); n],
        lambda_total: Vec::new(),
    };
    state.lambda_total = state.clamp.clone();

    let mut computed: Vec<f64> = (0..n)
        .map(|i| {
            normalize_p(
                state.pi[i] * state.clamp[i].0,
                (1.0 - state.pi[i]) * state.clamp[i].1,
            )
        })
        .collect();
    let mut damped = computed.clone();
    let mut trace = Vec::new();
    let qi = graph.query.0 as usize;

    let mut converged = false;
    let mut iterations = 0;
    for t in 1..=config.max_iterations {
        iterations = t;

        // Causal values of every group, then of every node.
        let group_pi: Vec<f64> = graph
            .groups
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                g.premises
                    .iter()
                    .map(|&p| state.premise_value(p, GroupId(gi as u32), graph))
                    .product()
            })
            .collect();
        let new_pi: Vec<f64> = graph
            .props
            .iter()
            .map(|p| {
                if p.supporters.is_empty() {
                    0.5
                } else {
                    let causes: Vec<(f64, f64)> = p
                        .supporters
                        .iter()
                        .map(|&g| (graph.group(g).weight, group_pi[g.0 as usize]))
                        .collect();
                    noisy_or(&causes)
                }
            })
            .collect();

        // Likelihood flowing from each conclusion into its groups.
        let mut group_lambda: Vec<(f64, f64)> = vec![(1.0, 1.0); graph.groups.len()];
        for (i, p) in graph.props.iter().enumerate() {
            for &g in &p.supporters {
                let weight = graph.group(g).weight;
                let others: Vec<(f64, f64)> = p
                    .supporters
                    .iter()
                    .filter(|&&og| og != g)
                    .map(|&og| (graph.group(og).weight, group_pi[og.0 as usize]))
                    .collect();
                group_lambda[g.0 as usize] = or_lambda(weight, &others, state.lambda_total[i]);
            }
        }

        // Likelihood from each group down to each premise. Premise values
        // here use the fresh causal values with the previous sweep's
        // messages, still excluding the receiving group.
        state.pi = new_pi;
        let mut new_contribs = state.contribs.clone();
        for (gi, g) in graph.groups.iter().enumerate() {
            for (slot, &prem) in g.premises.iter().enumerate() {
                let others_product: f64 = g
                    .premises
                    .iter()
                    .filter(|&&p| p != prem)
                    .map(|&p| state.premise_value(p, GroupId(gi as u32), graph))
                    .product();
                new_contribs[gi][slot] =
                    max_normalize(and_lambda(group_lambda[gi], others_product));
            }
        }

        // NEG exchange: each side's state (causal value, clamp, fresh
        // consumer messages, no NEG message) crosses over swapped.
        let s_value = |i: usize| -> (f64, f64) {
            let mut t = state.pi[i] * state.clamp[i].0;
            let mut f = (1.0 - state.pi[i]) * state.clamp[i].1;
            for &g in &state.consumers[i] {
                let slot = graph
                    .group(g)
                    .premises
                    .iter()
                    .position(|&p| p.0 as usize == i)
                    .expect("consumer group lists node among premises");
                let c = new_contribs[g.0 as usize][slot];
                t *= c.0;
                f *= c.1;
            }
            (t, f)
        };
        let mut new_neg = vec![(1.0, 1.0); n];
        for (pos, neg) in graph.neg_pairs() {
            let s_pos = s_value(pos.0 as usize);
            let s_neg = s_value(neg.0 as usize);
            new_neg[pos.0 as usize] = max_normalize((s_neg.1, s_neg.0));
            new_neg[neg.0 as usize] = max_normalize((s_pos.1, s_pos.0));
        }

        // Totals, beliefs, and the sweep delta.
        let mut new_lambda_total = Vec::with_capacity(n);
        let mut new_computed = Vec::with_capacity(n);
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let mut t = state.clamp[i].0 * new_neg[i].0;
            let mut f = state.clamp[i].1 * new_neg[i].1;
            for &g in &state.consumers[i] {
                let slot = graph
                    .group(g)
                    .premises
                    .iter()
                    .position(|&p| p.0 as usize == i)
                    .expect("consumer group lists node among premises");
                let c = new_contribs[g.0 as usize][slot];
                t *= c.0;
                f *= c.1;
            }
            let belief = normalize_p(state.pi[i] * t, (1.0 - state.pi[i]) * f);
            delta = delta.max((belief - computed[i]).abs());
            new_lambda_total.push((t, f));
            new_computed.push(belief);
        }
        for i in 0..n {
            damped[i] = config.damping * damped[i] + (1.0 - config.damping) * new_computed[i];
        }

        state.contribs = new_contribs;
        state.neg_contrib = new_neg;
        state.lambda_total = new_lambda_total;
        computed = new_computed;

        trace.push(format!(
            "iter {t} computed={:.6} damped={:.6} delta={:.3e}",
            computed[qi], damped[qi], delta
        ));
        if delta < config.epsilon {
            converged = true;
            break;
        }
    }

    BpOutcome {
        beliefs: if converged { computed } else { damped },
        converged,
        iterations,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;
    use crate::ground::ground_kb;
    use crate::logic::{parse_literal, KnowledgeBase, Lexicon};

    fn outcome_for(lex: &str, kb_text: &str, query: &str) -> (FactorGraph, BpOutcome) {
        let lexicon = Lexicon::parse(lex).unwrap();
        let kb = KnowledgeBase::parse(&lexicon, kb_text).unwrap();
        let clauses = ground_kb(&kb).unwrap();
        let q = parse_literal(query, &kb.lexicon).unwrap();
        let graph = build_graph(&clauses, &kb.facts, &q).unwrap();
        let run = run(&graph, &BpConfig::default());
        (graph, run)
    }

    #[test]
    fn noisy_or_combines_causes() {
        assert_eq!(noisy_or(&[]), 0.0);
        assert_eq!(noisy_or(&[(1.0, 1.0)]), 1.0);
        assert!((noisy_or(&[(0.99, 1.0)]) - 0.99).abs() < 1e-15);
        assert!((noisy_or(&[(0.9, 1.0), (0.8, 1.0)]) - 0.98).abs() < 1e-15);
        assert!((noisy_or(&[(0.9, 0.5)]) - 0.45).abs() < 1e-15);
    }

    #[test]
    fn or_lambda_against_false_evidence() {
        // Single supporter, conclusion observed false.
        let (l1, l0) = or_lambda(0.99, &[], (0.0, 1.0));
        assert!((l1 - 0.01).abs() < 1e-15);
        assert!((l0 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn or_lambda_marginalizes_other_supporters() {
        // Second supporter at weight 0.8 and group value 0.6 leaves a
        // residual chance of 0.48 that it fires on its own.
        let (l1, l0) = or_lambda(0.9, &[(0.8, 0.6)], (0.0, 1.0));
        assert!((l1 - 0.052).abs() < 1e-12);
        assert!((l0 - 0.52).abs() < 1e-12);
    }

    #[test]
    fn or_lambda_with_flat_likelihood_is_flat() {
        let (l1, l0) = or_lambda(0.99, &[], (1.0, 1.0));
        assert_eq!((l1, l0), (1.0, 1.0));
    }

    #[test]
    fn and_lambda_blocks_false_premises() {
        let (l1, l0) = and_lambda((0.01, 1.0), 1.0);
        assert!((l1 - 0.01).abs() < 1e-15);
        assert!((l0 - 1.0).abs() < 1e-15);
        // With an uncertain co-premise the message softens.
        let (l1, _) = and_lambda((0.01, 1.0), 0.5);
        assert!((l1 - 0.505).abs() < 1e-15);
    }

    #[test]
    fn direct_chain_reaches_rule_weight() {
        let (graph, out) = outcome_for(
            "entity socrates : e\npredicate man {theme: e}\npredicate mortal {theme: e}\n",
            "man(theme: socrates)\nalways [x:e]: man(theme: x) -> mortal(theme: x)\n",
            "mortal(theme: socrates)",
        );
        assert!(out.converged);
        assert_eq!(out.iterations, 2);
        assert!((out.query_probability(&graph) - 0.99).abs() < 1e-12);
        assert_eq!(out.query_verdict(&graph), Verdict::Yes);
    }

    #[test]
    fn denying_the_conclusion_suppresses_the_premise() {
        let (graph, out) = outcome_for(
            "entity zeus : e\npredicate man {theme: e}\npredicate mortal {theme: e}\n",
            "not mortal(theme: zeus)\nalways [x:e]: man(theme: x) -> mortal(theme: x)\n",
            "man(theme: zeus)",
        );
        assert!(out.converged);
        assert!(out.iterations <= 3);
        let expected = 0.01 / 1.01;
        assert!((out.query_probability(&graph) - expected).abs() < 1e-12);
        assert_eq!(out.query_verdict(&graph), Verdict::No);
    }

    #[test]
    fn unsupported_query_stays_at_prior() {
        let (graph, out) = outcome_for(
            "entity jack : e\nentity jill : e\npredicate trust {agent: e, patient: e}\n",
            "trust(agent: jack, patient: jill)\n",
            "trust(agent: jill, patient: jack)",
        );
        assert!(out.converged);
        assert_eq!(out.iterations, 1);
        assert_eq!(out.query_probability(&graph), 0.5);
        assert_eq!(out.query_verdict(&graph), Verdict::Unknown);
    }

    #[test]
    fn negation_pair_beliefs_sum_to_one() {
        let (graph, out) = outcome_for(
            "entity zeus : e\npredicate god {theme: e}\npredicate mortal {theme: e}\n",
            "god(theme: zeus)\nnever [x:e]: god(theme: x) -> mortal(theme: x)\n",
            "mortal(theme: zeus)",
        );
        assert!(out.converged);
        assert!((out.query_probability(&graph) - 0.01).abs() < 1e-12);
        assert_eq!(out.query_verdict(&graph), Verdict::No);
        for (pos, neg) in graph.neg_pairs() {
            let sum = out.beliefs[pos.0 as usize] + out.beliefs[neg.0 as usize];
            assert_eq!(sum, 1.0);
        }
    }

    #[test]
    fn symmetric_support_loop_locks_in_evidence() {
        let (graph, out) = outcome_for(
            "entity john : e\nentity mary : e\npredicate married_to {theme: e, reference: e}\n",
            "married_to(theme: john, reference: mary)\nalways [x:e, y:e]: married_to(theme: x, reference: y) -> married_to(theme: y, reference: x)\n",
            "married_to(theme: mary, reference: john)",
        );
        assert!(out.converged);
        assert_eq!(out.query_probability(&graph), 1.0);
    }

    #[test]
    fn mutual_support_without_evidence_does_not_converge() {
        // Two propositions supporting each other with nothing observed:
        // the computed beliefs decay geometrically toward zero and never
        // settle within the sweep budget. The damped belief is reported.
        let (graph, out) = outcome_for(
            "entity john : e\nentity mary : e\npredicate married_to {theme: e, reference: e}\n",
            "always [x:e, y:e]: married_to(theme: x, reference: y) -> married_to(theme: y, reference: x)\n",
            "married_to(theme: mary, reference: john)",
        );
        assert!(!out.converged);
        assert_eq!(out.iterations, 20);
        let p = out.query_probability(&graph);
        assert!(p > 0.0 && p < 0.5);
    }

    #[test]
    fn verdict_bands() {
        assert_eq!(classify(0.5 + 1e-7, VERDICT_BAND), Verdict::Unknown);
        assert_eq!(classify(0.5 - 1e-7, VERDICT_BAND), Verdict::Unknown);
        assert_eq!(classify(0.5001, VERDICT_BAND), Verdict::Yes);
        assert_eq!(classify(0.0099, VERDICT_BAND), Verdict::No);
    }
}
