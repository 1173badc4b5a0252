//! Exact posterior by brute-force enumeration over the factor graph.
//!
//! Every proposition node contributes one factor to the joint: a noisy-OR
//! conditional when it has supporting groups, otherwise a flat 0.5 prior.
//! A NEG pair counts as a single boolean variable whose negation side takes
//! the complementary value. Evidence nodes are held fixed but their factors
//! still multiply in, which is exactly conditioning on the observation.
//!
//! The factor arithmetic here is written independently of the message
//! passing code on purpose: agreement between the two is a meaningful
//! check, not a tautology.

use thiserror::Error;

use crate::graph::{FactorGraph, NodeId};

/// Enumeration bound; past this the sum is deliberately refused.
pub const MAX_FREE_VARS: usize = 24;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("{free} free variables exceed the enumeration limit of {limit}")]
    TooLarge { free: usize, limit: usize },
    #[error("evidence assignment has zero probability")]
    InconsistentEvidence,
}

/// Exact posterior probability that `target` is true given the evidence.
pub fn exact_posterior(graph: &FactorGraph, target: NodeId) -> Result<f64, OracleError> {
    // One variable per NEG pair, owned by the positive side.
    let is_owner: Vec<bool> = graph.props.iter().map(|p| !p.is_negation()).collect();
    let owners: Vec<usize> = (0..graph.props.len()).filter(|&i| is_owner[i]).collect();
    let free: Vec<usize> = owners
        .iter()
        .copied()
        .filter(|&i| graph.props[i].evidence.is_none())
        .collect();
    if free.len() > MAX_FREE_VARS {
        return Err(OracleError::TooLarge {
            free: free.len(),
            limit: MAX_FREE_VARS,
        });
    }

    let mut values = vec![false; graph.props.len()];
    for (i, p) in graph.props.iter().enumerate() {
        if let Some(v) = p.evidence {
            values[i] = v;
        }
    }

    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for bits in 0u64..(1u64 << free.len()) {
        for (bit, &i) in free.iter().enumerate() {
            values[i] = bits & (1 << bit) != 0;
        }
        // Negation sides mirror their owner.
        for (i, p) in graph.props.iter().enumerate() {
            if !is_owner[i] {
                let partner = p.partner.expect("negation node has a partner");
                values[i] = !values[partner.0 as usize];
            }
        }
        let w = assignment_weight(graph, &values);
        denominator += w;
        if values[target.0 as usize] {
            numerator += w;
        }
    }
    if denominator <= 0.0 {
        return Err(OracleError::InconsistentEvidence);
    }
    Ok(numerator / denominator)
}

fn assignment_weight(graph: &FactorGraph, values: &[bool]) -> f64 {
    let mut weight = 1.0;
    for (i, p) in graph.props.iter().enumerate() {
        let factor = if p.supporters.is_empty() {
            0.5
        } else {
            let mut none_fire = 1.0;
            for &gid in &p.supporters {
                let g = graph.group(gid);
                let all_true = g.premises.iter().all(|&pr| values[pr.0 as usize]);
                if all_true {
                    none_fire *= 1.0 - g.weight;
                }
            }
            let p_true = 1.0 - none_fire;
            if values[i] {
                p_true
            } else {
                1.0 - p_true
            }
        };
        weight *= factor;
        if weight == 0.0 {
            return 0.0;
        }
    }
    weight
}
