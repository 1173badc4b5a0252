//! The slot patterns and what they compile to.
//!
//! Facts come out ground; conditional shapes come out as quantified rules
//! binding fresh variables of type `e`, so lexicons feeding this grammar
//! keep their entities in the base type. An identity sentence needs a
//! binary predicate named `identity` declared; relational nouns, verbs,
//! and adjectives are resolved through their declared surface forms.

use super::{Pat, TaggedWord};
use crate::logic::{
    validate_proposition, validate_rule, Argument, Category, Lexicon, Literal, LogicError,
    Proposition, QuantifiedRule, Quantifier, Statement, SurfaceTarget, TypeName,
};

pub(crate) struct GrammarRule {
    pub name: &'static str,
    pub pattern: &'static [Pat],
    pub emit: fn(&[TaggedWord], &Lexicon) -> Result<Option<Statement>, LogicError>,
}

const E: &[Category] = &[Category::EntityName];
const N: &[Category] = &[Category::CommonNoun];
const ADJ: &[Category] = &[Category::Adjective];
const TV: &[Category] = &[Category::TransitiveVerb];
const IV: &[Category] = &[Category::IntransitiveVerb];
const REL: &[Category] = &[Category::RelationalNoun];
const N_OR_ADJ: &[Category] = &[Category::CommonNoun, Category::Adjective];

const W_IS: &[&str] = &["is"];
const W_IS_ARE: &[&str] = &["is", "are"];
const W_ARE: &[&str] = &["are"];
const W_A: &[&str] = &["a", "an"];
const W_ALL: &[&str] = &["all", "every"];
const W_NO: &[&str] = &["no"];
const W_NOT: &[&str] = &["not"];
const W_IF: &[&str] = &["if"];
const W_THEN: &[&str] = &["then"];
const W_TWO: &[&str] = &["two"];
const W_EACH: &[&str] = &["each"];
const W_OTHER: &[&str] = &["other"];
const W_THEY: &[&str] = &["they"];
const W_PRONOUN: &[&str] = &["he", "she", "they"];
const W_SOMEONE: &[&str] = &["someone"];

pub(crate) static RULES: &[GrammarRule] = &[
    GrammarRule {
        name: "copular_fact",
        pattern: &[Pat::Cap(E), Pat::Word(W_IS), Pat::Word(W_A), Pat::Cap(N)],
        emit: emit_copular_fact,
    },
    GrammarRule {
        name: "copular_fact_bare",
        pattern: &[Pat::Cap(E), Pat::Word(W_IS), Pat::Cap(ADJ)],
        emit: emit_copular_fact_bare,
    },
    GrammarRule {
        name: "negated_copular_fact",
        pattern: &[Pat::Cap(E), Pat::Word(W_IS), Pat::Word(W_NOT), Pat::Cap(ADJ)],
        emit: emit_negated_copular_fact,
    },
    GrammarRule {
        name: "prep_copular_fact",
        pattern: &[Pat::Cap(E), Pat::Word(W_IS), Pat::Cap(REL), Pat::Cap(E)],
        emit: emit_prep_copular_fact,
    },
    GrammarRule {
        name: "copular_identity",
        pattern: &[Pat::Cap(E), Pat::Word(W_IS), Pat::Cap(E)],
        emit: emit_copular_identity,
    },
    GrammarRule {
        name: "transitive_fact",
        pattern: &[Pat::Cap(E), Pat::Cap(TV), Pat::Cap(E)],
        emit: emit_transitive_fact,
    },
    GrammarRule {
        name: "intransitive_fact",
        pattern: &[Pat::Cap(E), Pat::Cap(IV)],
        emit: emit_intransitive_fact,
    },
    GrammarRule {
        name: "copular_universal",
        pattern: &[
            Pat::Word(W_ALL),
            Pat::Cap(N),
            Pat::Word(W_IS_ARE),
            Pat::Cap(N_OR_ADJ),
        ],
        emit: emit_copular_universal,
    },
    GrammarRule {
        name: "negated_universal",
        pattern: &[
            Pat::Word(W_NO),
            Pat::Cap(N),
            Pat::Word(W_IS_ARE),
            Pat::Cap(N_OR_ADJ),
        ],
        emit: emit_negated_universal,
    },
    GrammarRule {
        name: "copular_generic",
        pattern: &[
            Pat::Word(W_A),
            Pat::Cap(N),
            Pat::Word(W_IS),
            Pat::Word(W_A),
            Pat::Cap(N),
        ],
        emit: emit_copular_generic,
    },
    GrammarRule {
        name: "reciprocal_conditional",
        pattern: &[
            Pat::Word(W_IF),
            Pat::Word(W_TWO),
            Pat::Cap(N),
            Pat::Cap(TV),
            Pat::Word(W_EACH),
            Pat::Word(W_OTHER),
            Pat::Word(W_THEY),
            Pat::Word(W_ARE),
            Pat::Cap(TV),
        ],
        emit: emit_reciprocal_conditional,
    },
    GrammarRule {
        name: "conditional_prep_copular",
        pattern: &[
            Pat::Word(W_IF),
            Pat::Word(W_A),
            Pat::Cap(N),
            Pat::Word(W_IS),
            Pat::Cap(REL),
            Pat::Word(W_A),
            Pat::Cap(N),
            Pat::Word(W_PRONOUN),
            Pat::Word(W_IS_ARE),
            Pat::Cap(ADJ),
        ],
        emit: emit_conditional_prep_copular,
    },
    GrammarRule {
        name: "conditional_transitive",
        pattern: &[
            Pat::Word(W_IF),
            Pat::Word(W_A),
            Pat::Cap(N),
            Pat::Cap(TV),
            Pat::Word(W_A),
            Pat::Cap(ADJ),
            Pat::Cap(N),
            Pat::Word(W_PRONOUN),
            Pat::Word(W_IS_ARE),
            Pat::Cap(ADJ),
        ],
        emit: emit_conditional_transitive,
    },
    GrammarRule {
        name: "conditional_someone",
        pattern: &[
            Pat::Word(W_IF),
            Pat::Word(W_SOMEONE),
            Pat::Word(W_IS),
            Pat::Cap(ADJ),
            Pat::Word(W_PRONOUN),
            Pat::Word(W_IS_ARE),
            Pat::Cap(ADJ),
        ],
        emit: emit_conditional_someone,
    },
    GrammarRule {
        name: "conditional_symmetry",
        pattern: &[
            Pat::Word(W_IF),
            Pat::Cap(E),
            Pat::Word(W_IS),
            Pat::Cap(REL),
            Pat::Cap(E),
            Pat::Word(W_THEN),
            Pat::Cap(E),
            Pat::Word(W_IS),
            Pat::Cap(REL),
            Pat::Cap(E),
        ],
        emit: emit_conditional_symmetry,
    },
];

/// Names of every pattern, in dispatch order.
pub fn rule_names() -> Vec<&'static str> {
    RULES.iter().map(|r| r.name).collect()
}

fn entity_id(w: &TaggedWord) -> String {
    match &w.target {
        Some(SurfaceTarget::Entity(id)) => id.clone(),
        _ => unreachable!("capture category guarantees an entity target"),
    }
}

fn predicate_name(w: &TaggedWord) -> String {
    match &w.target {
        Some(SurfaceTarget::Predicate(name)) => name.clone(),
        _ => unreachable!("capture category guarantees a predicate target"),
    }
}

fn themed(predicate: &str, arg: Argument) -> Proposition {
    Proposition {
        predicate: predicate.to_string(),
        args: vec![("theme".to_string(), arg)],
    }
}

fn binary(predicate: &str, roles: [&str; 2], args: [Argument; 2]) -> Proposition {
    let [a0, a1] = args;
    Proposition {
        predicate: predicate.to_string(),
        args: vec![(roles[0].to_string(), a0), (roles[1].to_string(), a1)],
    }
}

fn ent(id: String) -> Argument {
    Argument::Entity(id)
}

fn var(name: &str) -> Argument {
    Argument::Variable(name.to_string())
}

fn fact(
    lexicon: &Lexicon,
    polarity: bool,
    prop: Proposition,
) -> Result<Option<Statement>, LogicError> {
    let proposition = validate_proposition(prop, lexicon, None, 0)?;
    Ok(Some(Statement::Fact(Literal {
        proposition,
        polarity,
    })))
}

fn bindings(vars: &[&str]) -> Vec<(String, TypeName)> {
    let e = TypeName::new("e").expect("base type name");
    vars.iter().map(|v| (v.to_string(), e.clone())).collect()
}

fn rule(
    lexicon: &Lexicon,
    quantifier: Quantifier,
    vars: &[&str],
    premises: Vec<Proposition>,
    conclusion: Proposition,
) -> Result<Option<Statement>, LogicError> {
    let rule = QuantifiedRule {
        weight: quantifier.weight(),
        quantifier,
        bindings: bindings(vars),
        premises,
        conclusion: Literal {
            proposition: conclusion,
            polarity: !quantifier.negates_conclusion(),
        },
    };
    Ok(Some(Statement::Rule(validate_rule(rule, lexicon)?)))
}

fn emit_copular_fact(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let noun = predicate_name(&caps[1]);
    fact(lexicon, true, themed(&noun, ent(entity_id(&caps[0]))))
}

fn emit_copular_fact_bare(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let adj = predicate_name(&caps[1]);
    fact(lexicon, true, themed(&adj, ent(entity_id(&caps[0]))))
}

fn emit_negated_copular_fact(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let adj = predicate_name(&caps[1]);
    fact(lexicon, false, themed(&adj, ent(entity_id(&caps[0]))))
}

fn emit_prep_copular_fact(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let rel = predicate_name(&caps[1]);
    fact(
        lexicon,
        true,
        binary(
            &rel,
            ["theme", "reference"],
            [ent(entity_id(&caps[0])), ent(entity_id(&caps[2]))],
        ),
    )
}

fn emit_copular_identity(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    fact(
        lexicon,
        true,
        binary(
            "identity",
            ["theme", "reference"],
            [ent(entity_id(&caps[0])), ent(entity_id(&caps[1]))],
        ),
    )
}

fn emit_transitive_fact(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let verb = predicate_name(&caps[1]);
    fact(
        lexicon,
        true,
        binary(
            &verb,
            ["agent", "patient"],
            [ent(entity_id(&caps[0])), ent(entity_id(&caps[2]))],
        ),
    )
}

fn emit_intransitive_fact(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let verb = predicate_name(&caps[1]);
    fact(lexicon, true, themed(&verb, ent(entity_id(&caps[0]))))
}

fn emit_universal(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
    quantifier: Quantifier,
) -> Result<Option<Statement>, LogicError> {
    let subject = predicate_name(&caps[0]);
    let object = predicate_name(&caps[1]);
    rule(
        lexicon,
        quantifier,
        &["x"],
        vec![themed(&subject, var("x"))],
        themed(&object, var("x")),
    )
}

fn emit_copular_universal(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    emit_universal(caps, lexicon, Quantifier::Always)
}

fn emit_negated_universal(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    emit_universal(caps, lexicon, Quantifier::Never)
}

fn emit_copular_generic(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    emit_universal(caps, lexicon, Quantifier::Always)
}

fn emit_reciprocal_conditional(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    // The sorting noun is not part of the logical form.
    let v1 = predicate_name(&caps[1]);
    let v2 = predicate_name(&caps[2]);
    rule(
        lexicon,
        Quantifier::Always,
        &["x", "y"],
        vec![
            binary(&v1, ["agent", "patient"], [var("x"), var("y")]),
            binary(&v1, ["agent", "patient"], [var("y"), var("x")]),
        ],
        binary(&v2, ["agent", "patient"], [var("x"), var("y")]),
    )
}

fn emit_conditional_prep_copular(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let n1 = predicate_name(&caps[0]);
    let rel = predicate_name(&caps[1]);
    let n2 = predicate_name(&caps[2]);
    let adj = predicate_name(&caps[3]);
    rule(
        lexicon,
        Quantifier::Always,
        &["x", "y"],
        vec![
            themed(&n1, var("x")),
            themed(&n2, var("y")),
            binary(&rel, ["theme", "reference"], [var("x"), var("y")]),
        ],
        themed(&adj, var("x")),
    )
}

fn emit_conditional_transitive(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let n1 = predicate_name(&caps[0]);
    let verb = predicate_name(&caps[1]);
    let adj1 = predicate_name(&caps[2]);
    let n2 = predicate_name(&caps[3]);
    let adj2 = predicate_name(&caps[4]);
    rule(
        lexicon,
        Quantifier::Always,
        &["x", "y"],
        vec![
            themed(&n1, var("x")),
            themed(&n2, var("y")),
            themed(&adj1, var("y")),
            binary(&verb, ["agent", "patient"], [var("x"), var("y")]),
        ],
        themed(&adj2, var("x")),
    )
}

fn emit_conditional_someone(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    let a1 = predicate_name(&caps[0]);
    let a2 = predicate_name(&caps[1]);
    rule(
        lexicon,
        Quantifier::Always,
        &["x"],
        vec![themed(&a1, var("x"))],
        themed(&a2, var("x")),
    )
}

fn emit_conditional_symmetry(
    caps: &[TaggedWord],
    lexicon: &Lexicon,
) -> Result<Option<Statement>, LogicError> {
    // caps: [E1, R, E2, E2 again, R again, E1 again]. The instance only
    // licenses the schema when the second clause mirrors the first.
    let same_relation = predicate_name(&caps[1]) == predicate_name(&caps[4]);
    let mirrored = entity_id(&caps[0]) == entity_id(&caps[5])
        && entity_id(&caps[2]) == entity_id(&caps[3]);
    if !same_relation || !mirrored {
        return Ok(None);
    }
    let rel = predicate_name(&caps[1]);
    rule(
        lexicon,
        Quantifier::Always,
        &["x", "y"],
        vec![binary(&rel, ["theme", "reference"], [var("x"), var("y")])],
        binary(&rel, ["theme", "reference"], [var("y"), var("x")]),
    )
}
