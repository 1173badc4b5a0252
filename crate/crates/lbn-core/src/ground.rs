//! Grounding: instantiate quantified rules over the declared entities.
//!
//! Each rule expands to the full Cartesian product of its variable bindings,
//! with every binding ranging over the entities of its declared type in
//! declaration order. The first binding varies slowest, so the clause list
//! is deterministic given the lexicon.

use crate::logic::{
    canonical_key, Argument, KnowledgeBase, Lexicon, Literal, LogicError, Proposition,
    QuantifiedRule,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GroundError {
    #[error("no entities of type `{0}` to ground over")]
    EmptyType(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// A fully instantiated rule: ground premises, a ground conclusion literal,
/// and the source rule's weight.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundedClause {
    pub premises: Vec<Proposition>,
    pub conclusion: Literal,
    pub weight: f64,
    /// Index of the source rule within its knowledge base.
    pub rule_index: usize,
}

impl GroundedClause {
    pub fn premise_keys(&self) -> Result<Vec<String>, LogicError> {
        self.premises.iter().map(canonical_key).collect()
    }
}

fn substitute(prop: &Proposition, names: &[&str], values: &[&str]) -> Proposition {
    let args = prop
        .args
        .iter()
        .map(|(role, arg)| {
            let arg = match arg {
                Argument::Entity(id) => Argument::Entity(id.clone()),
                Argument::Variable(v) => {
                    let i = names
                        .iter()
                        .position(|n| n == v)
                        .expect("validated rules have no free variables");
                    Argument::Entity(values[i].to_string())
                }
                Argument::Embedded(inner) => Argument::Embedded(substitute(inner, names, values)),
            };
            (role.clone(), arg)
        })
        .collect();
    Proposition {
        predicate: prop.predicate.clone(),
        args,
    }
}

/// Ground one rule over the lexicon's entities. The clause count is the
/// product of the entity counts of the bound types.
pub fn ground_rule(
    rule: &QuantifiedRule,
    lexicon: &Lexicon,
    rule_index: usize,
) -> Result<Vec<GroundedClause>, GroundError> {
    let names: Vec<&str> = rule.bindings.iter().map(|(v, _)| v.as_str()).collect();
    let domains: Vec<Vec<&str>> = rule
        .bindings
        .iter()
        .map(|(_, t)| {
            let entities = lexicon.entities_of_type(t);
            if entities.is_empty() {
                return Err(GroundError::EmptyType(t.as_str().to_string()));
            }
            Ok(entities.into_iter().map(|e| e.id.as_str()).collect())
        })
        .collect::<Result<_, _>>()?;
    let total: usize = domains.iter().map(|d| d.len()).product();
    let mut clauses = Vec::with_capacity(total);
    let mut values: Vec<&str> = domains.iter().map(|d| d[0]).collect();
    let mut counters = vec![0usize; domains.len()];
    loop {
        let premises = rule
            .premises
            .iter()
            .map(|p| substitute(p, &names, &values))
            .collect();
        let conclusion = Literal {
            proposition: substitute(&rule.conclusion.proposition, &names, &values),
            polarity: rule.conclusion.polarity,
        };
        clauses.push(GroundedClause {
            premises,
            conclusion,
            weight: rule.weight,
            rule_index,
        });
        // Odometer increment, last binding fastest.
        let mut i = domains.len();
        loop {
            if i == 0 {
                return Ok(clauses);
            }
            i -= 1;
            counters[i] += 1;
            if counters[i] < domains[i].len() {
                values[i] = domains[i][counters[i]];
                break;
            }
            counters[i] = 0;
            values[i] = domains[i][0];
        }
    }
}

/// Ground every rule of a knowledge base, concatenated in rule order.
pub fn ground_kb(kb: &KnowledgeBase) -> Result<Vec<GroundedClause>, GroundError> {
    let mut clauses = Vec::new();
    for (i, rule) in kb.rules.iter().enumerate() {
        clauses.extend(ground_rule(rule, &kb.lexicon, i)?);
    }
    Ok(clauses)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Lexicon;

    fn kb(lex: &str, text: &str) -> KnowledgeBase {
        let lexicon = Lexicon::parse(lex).unwrap();
        KnowledgeBase::parse(&lexicon, text).unwrap()
    }

    #[test]
    fn socrates_kb_grounds_to_one_clause() {
        let kb = kb(
            "entity socrates : e\npredicate man {theme: e}\npredicate mortal {theme: e}\n",
            "man(theme: socrates)\nalways [x:e]: man(theme: x) -> mortal(theme: x)\n",
        );
        let clauses = ground_kb(&kb).unwrap();
        assert_eq!(clauses.len(), 1);
        assert_eq!(clauses[0].premises[0].to_string(), "man(theme: socrates)");
        assert_eq!(
            clauses[0].conclusion.proposition.to_string(),
            "mortal(theme: socrates)"
        );
        assert_eq!(clauses[0].weight, 0.99);
    }

    #[test]
    fn two_variables_ground_over_product() {
        let kb = kb(
            "entity jack : e\nentity jill : e\npredicate trust {agent: e, patient: e}\npredicate allies {agent: e, patient: e}\n",
            "always [x:e, y:e]: trust(agent: x, patient: y) & trust(agent: y, patient: x) -> allies(agent: x, patient: y)\n",
        );
        let clauses = ground_kb(&kb).unwrap();
        assert_eq!(clauses.len(), 4);
        // First binding varies slowest; entities in declaration order.
        let conclusions: Vec<String> = clauses
            .iter()
            .map(|c| c.conclusion.proposition.to_string())
            .collect();
        assert_eq!(
            conclusions,
            vec![
                "allies(agent: jack, patient: jack)",
                "allies(agent: jack, patient: jill)",
                "allies(agent: jill, patient: jack)",
                "allies(agent: jill, patient: jill)",
            ]
        );
    }

    #[test]
    fn typed_bindings_restrict_domains() {
        let kb = kb(
            "type c\nentity henry : e\nentity mary : e\nentity france : c\npredicate man {theme: e}\npredicate country {theme: c}\npredicate king_of {theme: e, reference: c}\npredicate successful {theme: e}\n",
            "always [x:e, y:c]: man(theme: x) & country(theme: y) & king_of(theme: x, reference: y) -> successful(theme: x)\n",
        );
        let clauses = ground_kb(&kb).unwrap();
        assert_eq!(clauses.len(), 2);
    }

    #[test]
    fn substitution_reaches_embedded_propositions() {
        let kb = kb(
            "entity otto : e\npredicate rude {theme: e}\npredicate apologize {agent: e}\npredicate should {content: s}\n",
            "usually [o:e]: rude(theme: o) -> should(content: apologize(agent: o))\n",
        );
        let clauses = ground_kb(&kb).unwrap();
        assert_eq!(clauses.len(), 1);
        assert_eq!(
            clauses[0].conclusion.proposition.to_string(),
            "should(content: apologize(agent: otto))"
        );
        assert_eq!(clauses[0].weight, 0.9);
    }

    #[test]
    fn empty_type_is_an_error() {
        let kb = kb(
            "type c\nentity henry : e\npredicate man {theme: e}\npredicate country {theme: c}\n",
            "always [y:c]: country(theme: y) -> country(theme: y)\n",
        );
        assert_eq!(
            ground_kb(&kb),
            Err(GroundError::EmptyType("c".to_string()))
        );
    }

    #[test]
    fn duplicate_groundings_stay_distinct() {
        // Two rules with overlapping instantiations both contribute clauses.
        let kb = kb(
            "entity gala : e\npredicate apple {theme: e}\npredicate fruit {theme: e}\n",
            "always [x:e]: apple(theme: x) -> fruit(theme: x)\nalways [y:e]: apple(theme: y) -> fruit(theme: y)\n",
        );
        let clauses = ground_kb(&kb).unwrap();
        assert_eq!(clauses.len(), 2);
        assert_eq!(clauses[0].premises, clauses[1].premises);
        assert_eq!(clauses[0].rule_index, 0);
        assert_eq!(clauses[1].rule_index, 1);
    }
}
