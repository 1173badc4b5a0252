//! The typed logical language: entities, predicates with named roles, ground
//! facts, and quantified implication rules.
//!
//! A lexicon declares types, typed entities, and predicates whose roles are
//! either entity-typed or sentential (`s`, filled by an embedded proposition).
//! On top of the lexicon sit two statement kinds with semantic content: ground
//! literals (facts, possibly negated) and quantified rules that compile a
//! frequency word into a conditional probability:
//!
//! ```text
//! entity socrates : e
//! predicate man {theme: e}
//! man(theme: socrates)
//! always [x:e]: man(theme: x) -> mortal(theme: x)
//! ```
//!
//! `always`, `usually`, and `sometimes` map to weights 0.99, 0.9, and 0.5.
//! `never` maps to weight 0.99 toward the negated conclusion, so a `never`
//! rule is stored with a conclusion literal of negative polarity.

mod parser;

pub use parser::{parse_document_literal, parse_literal, parse_logic};

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Maximum nesting depth for propositions embedded in sentential roles.
pub const MAX_EMBEDDING_DEPTH: usize = 4;

#[derive(Debug, Error, PartialEq)]
pub enum LogicError {
    #[error("line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),
    #[error("unknown entity `{0}`")]
    UnknownEntity(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("predicate `{predicate}` does not take roles {given:?} (declared {declared:?})")]
    RoleMismatch {
        predicate: String,
        declared: Vec<String>,
        given: Vec<String>,
    },
    #[error("role `{role}` of `{predicate}` expects {expected}, got {found}")]
    TypeMismatch {
        predicate: String,
        role: String,
        expected: String,
        found: String,
    },
    #[error("unknown quantifier `{0}`")]
    UnknownQuantifier(String),
    #[error("proposition `{0}` contains variables and has no canonical key")]
    UngroundedProposition(String),
    #[error("embedded propositions nest deeper than {MAX_EMBEDDING_DEPTH}")]
    EmbeddingTooDeep,
    #[error("duplicate declaration of `{0}`")]
    DuplicateDeclaration(String),
    #[error("variable `{variable}` in rule is not bound by the quantifier prefix")]
    UnboundVariable { variable: String },
    #[error("fact `{0}` is not ground")]
    UngroundedFact(String),
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

/// Name of a declared entity type. Lowercase snake_case; `s` is reserved for
/// the sentential role marker and is not a valid type name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeName(String);

impl TypeName {
    pub fn new(name: &str) -> Result<TypeName, LogicError> {
        if !valid_ident(name) || name == "s" {
            return Err(LogicError::Syntax {
                line: 0,
                col: 0,
                message: format!("invalid type name `{name}`"),
            });
        }
        Ok(TypeName(name.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A named individual with a declared type.
#[derive(Debug, Clone, PartialEq)]
pub struct Entity {
    pub id: String,
    pub entity_type: TypeName,
    pub description: Option<String>,
}

/// What may fill a predicate role: an entity of a given type, or an embedded
/// proposition (the sentential type `s`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoleType {
    Entity(TypeName),
    Sentential,
}

impl fmt::Display for RoleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RoleType::Entity(t) => write!(f, "{t}"),
            RoleType::Sentential => f.write_str("s"),
        }
    }
}

/// A predicate declaration: name plus an ordered map of role names to role
/// types. Role order here fixes the display order of arguments.
#[derive(Debug, Clone, PartialEq)]
pub struct PredicateDecl {
    pub name: String,
    pub roles: Vec<(String, RoleType)>,
    pub description: Option<String>,
}

impl PredicateDecl {
    pub fn role(&self, name: &str) -> Option<&RoleType> {
        self.roles.iter().find(|(r, _)| r == name).map(|(_, t)| t)
    }
}

/// An argument in a proposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Argument {
    /// Reference to a declared entity.
    Entity(String),
    /// A variable bound by an enclosing rule's quantifier prefix.
    Variable(String),
    /// A proposition filling a sentential role.
    Embedded(Proposition),
}

/// A predicate applied to role-labelled arguments. Arguments are stored in
/// the predicate's declared role order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Proposition {
    pub predicate: String,
    pub args: Vec<(String, Argument)>,
}

impl Proposition {
    pub fn arg(&self, role: &str) -> Option<&Argument> {
        self.args.iter().find(|(r, _)| r == role).map(|(_, a)| a)
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|(_, a)| match a {
            Argument::Entity(_) => true,
            Argument::Variable(_) => false,
            Argument::Embedded(p) => p.is_ground(),
        })
    }

    fn collect_variables<'a>(&'a self, out: &mut Vec<&'a str>) {
        for (_, a) in &self.args {
            match a {
                Argument::Entity(_) => {}
                Argument::Variable(v) => out.push(v),
                Argument::Embedded(p) => p.collect_variables(out),
            }
        }
    }
}

/// A proposition with a polarity. `polarity == false` is a negated literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    pub proposition: Proposition,
    pub polarity: bool,
}

impl Literal {
    pub fn positive(proposition: Proposition) -> Literal {
        Literal {
            proposition,
            polarity: true,
        }
    }

    pub fn negative(proposition: Proposition) -> Literal {
        Literal {
            proposition,
            polarity: false,
        }
    }
}

/// Frequency words that scale a rule's conditional probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Always,
    Usually,
    Sometimes,
    Never,
}

impl Quantifier {
    pub fn from_word(word: &str) -> Result<Quantifier, LogicError> {
        match word {
            "always" => Ok(Quantifier::Always),
            "usually" => Ok(Quantifier::Usually),
            "sometimes" => Ok(Quantifier::Sometimes),
            "never" => Ok(Quantifier::Never),
            other => Err(LogicError::UnknownQuantifier(other.to_string())),
        }
    }

    pub fn word(self) -> &'static str {
        match self {
            Quantifier::Always => "always",
            Quantifier::Usually => "usually",
            Quantifier::Sometimes => "sometimes",
            Quantifier::Never => "never",
        }
    }

    /// Rule weight. `never` is as strong as `always` but pushes toward the
    /// negated conclusion.
    pub fn weight(self) -> f64 {
        match self {
            Quantifier::Always | Quantifier::Never => 0.99,
            Quantifier::Usually => 0.9,
            Quantifier::Sometimes => 0.5,
        }
    }

    /// `never` rules conclude the negation of their surface conclusion.
    pub fn negates_conclusion(self) -> bool {
        matches!(self, Quantifier::Never)
    }
}

/// Map a quantifier word to its rule weight.
pub fn quantifier_weight(word: &str) -> Result<f64, LogicError> {
    Quantifier::from_word(word).map(Quantifier::weight)
}

/// A universally quantified implication. `premises` are positive propositions
/// joined conjunctively; the conclusion literal carries the stored polarity
/// (already flipped for `never`).
#[derive(Debug, Clone, PartialEq)]
pub struct QuantifiedRule {
    pub quantifier: Quantifier,
    pub bindings: Vec<(String, TypeName)>,
    pub premises: Vec<Proposition>,
    pub conclusion: Literal,
    pub weight: f64,
}

impl QuantifiedRule {
    pub fn binding_type(&self, var: &str) -> Option<&TypeName> {
        self.bindings.iter().find(|(v, _)| v == var).map(|(_, t)| t)
    }
}

/// Word categories assigned during lexical lookup. The first six are
/// declarable via surface forms; the last three are built into the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Category {
    EntityName,
    CommonNoun,
    Adjective,
    TransitiveVerb,
    IntransitiveVerb,
    RelationalNoun,
    Quantword,
    NegationWord,
    FunctionWord,
}

impl Category {
    pub fn keyword(self) -> &'static str {
        match self {
            Category::EntityName => "entity",
            Category::CommonNoun => "noun",
            Category::Adjective => "adjective",
            Category::TransitiveVerb => "verb",
            Category::IntransitiveVerb => "intransitive",
            Category::RelationalNoun => "relation",
            Category::Quantword => "quantword",
            Category::NegationWord => "negation",
            Category::FunctionWord => "function",
        }
    }
}

/// What a surface form resolves to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurfaceTarget {
    Entity(String),
    Predicate(String),
}

/// One surface form: a case-folded phrase mapping to a lexicon entry under a
/// category. Multi-word phrases are stored space-joined.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceForm {
    pub phrase: String,
    pub target: SurfaceTarget,
    pub category: Category,
}

/// Declared types, entities, predicates, and surface forms. The entity type
/// `e` is predeclared.
#[derive(Debug, Clone)]
pub struct Lexicon {
    pub types: Vec<TypeName>,
    pub entities: Vec<Entity>,
    pub predicates: Vec<PredicateDecl>,
    pub surface_forms: Vec<SurfaceForm>,
    entity_index: HashMap<String, usize>,
    predicate_index: HashMap<String, usize>,
}

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon::new()
    }
}

impl Lexicon {
    pub fn new() -> Lexicon {
        Lexicon {
            types: vec![TypeName("e".to_string())],
            entities: Vec::new(),
            predicates: Vec::new(),
            surface_forms: Vec::new(),
            entity_index: HashMap::new(),
            predicate_index: HashMap::new(),
        }
    }

    /// Parse a `.lex` text: type, entity, predicate, and surface declarations
    /// only. Facts and rules are rejected here.
    pub fn parse(text: &str) -> Result<Lexicon, LogicError> {
        parser::parse_lexicon(text)
    }

    pub fn has_type(&self, name: &str) -> bool {
        self.types.iter().any(|t| t.as_str() == name)
    }

    pub fn declare_type(&mut self, t: TypeName) -> Result<(), LogicError> {
        if self.has_type(t.as_str()) {
            return Err(LogicError::DuplicateDeclaration(t.as_str().to_string()));
        }
        self.types.push(t);
        Ok(())
    }

    pub fn declare_entity(&mut self, e: Entity) -> Result<(), LogicError> {
        if !self.has_type(e.entity_type.as_str()) {
            return Err(LogicError::UnknownType(e.entity_type.as_str().to_string()));
        }
        if self.entity_index.contains_key(&e.id) {
            return Err(LogicError::DuplicateDeclaration(e.id.clone()));
        }
        self.entity_index.insert(e.id.clone(), self.entities.len());
        self.entities.push(e);
        Ok(())
    }

    pub fn declare_predicate(&mut self, p: PredicateDecl) -> Result<(), LogicError> {
        if self.predicate_index.contains_key(&p.name) {
            return Err(LogicError::DuplicateDeclaration(p.name.clone()));
        }
        for (_, rt) in &p.roles {
            if let RoleType::Entity(t) = rt {
                if !self.has_type(t.as_str()) {
                    return Err(LogicError::UnknownType(t.as_str().to_string()));
                }
            }
        }
        self.predicate_index.insert(p.name.clone(), self.predicates.len());
        self.predicates.push(p);
        Ok(())
    }

    pub fn declare_surface(&mut self, s: SurfaceForm) -> Result<(), LogicError> {
        match (&s.target, s.category) {
            (SurfaceTarget::Entity(id), Category::EntityName) => {
                if self.entity(id).is_none() {
                    return Err(LogicError::UnknownEntity(id.clone()));
                }
            }
            (SurfaceTarget::Predicate(name), cat) => {
                let decl = self
                    .predicate(name)
                    .ok_or_else(|| LogicError::UnknownPredicate(name.clone()))?;
                let expected: &[&str] = match cat {
                    Category::CommonNoun | Category::Adjective | Category::IntransitiveVerb => {
                        &["theme"]
                    }
                    Category::TransitiveVerb => &["agent", "patient"],
                    Category::RelationalNoun => &["theme", "reference"],
                    _ => &[],
                };
                let declared: Vec<&str> = decl.roles.iter().map(|(r, _)| r.as_str()).collect();
                if declared != expected {
                    return Err(LogicError::RoleMismatch {
                        predicate: name.clone(),
                        declared: declared.iter().map(|s| s.to_string()).collect(),
                        given: expected.iter().map(|s| s.to_string()).collect(),
                    });
                }
            }
            (SurfaceTarget::Entity(id), _) => {
                return Err(LogicError::UnknownEntity(id.clone()));
            }
        }
        self.surface_forms.push(s);
        Ok(())
    }

    pub fn entity(&self, id: &str) -> Option<&Entity> {
        self.entity_index.get(id).map(|&i| &self.entities[i])
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicate_index.get(name).map(|&i| &self.predicates[i])
    }

    /// Entities of a type, in declaration order.
    pub fn entities_of_type(&self, t: &TypeName) -> Vec<&Entity> {
        self.entities
            .iter()
            .filter(|e| &e.entity_type == t)
            .collect()
    }

    /// Longest surface phrase length, counted in words.
    pub fn max_surface_words(&self) -> usize {
        self.surface_forms
            .iter()
            .map(|s| s.phrase.split(' ').count())
            .max()
            .unwrap_or(1)
    }

    pub fn surface(&self, folded: &str) -> Option<&SurfaceForm> {
        self.surface_forms.iter().find(|s| s.phrase == folded)
    }
}

/// A parsed statement.
#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Entity(Entity),
    Predicate(PredicateDecl),
    Fact(Literal),
    Rule(QuantifiedRule),
}

/// A lexicon together with the facts and rules stated over it.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub lexicon: Lexicon,
    pub facts: Vec<Literal>,
    pub rules: Vec<QuantifiedRule>,
}

impl KnowledgeBase {
    /// Parse a `.lbn` text against a lexicon. Declarations in the text extend
    /// a copy of the lexicon; facts must be ground.
    pub fn parse(lexicon: &Lexicon, text: &str) -> Result<KnowledgeBase, LogicError> {
        let (statements, lexicon) = parser::parse_with_lexicon(text, lexicon)?;
        let mut facts = Vec::new();
        let mut rules = Vec::new();
        for s in statements {
            match s {
                Statement::Fact(f) => {
                    if !f.proposition.is_ground() {
                        return Err(LogicError::UngroundedFact(format!(
                            "{}",
                            PropDisplay(&f.proposition)
                        )));
                    }
                    facts.push(f);
                }
                Statement::Rule(r) => rules.push(r),
                Statement::Entity(_) | Statement::Predicate(_) => {}
            }
        }
        Ok(KnowledgeBase {
            lexicon,
            facts,
            rules,
        })
    }
}

// -- validation -----------------------------------------------------------

pub(crate) struct RuleContext<'a> {
    pub bindings: &'a [(String, TypeName)],
}

/// Check a proposition against the lexicon and reorder its arguments into the
/// predicate's declared role order. `ctx` supplies variable bindings when
/// validating inside a rule; outside rules any variable is an unknown entity.
pub(crate) fn validate_proposition(
    prop: Proposition,
    lexicon: &Lexicon,
    ctx: Option<&RuleContext<'_>>,
    depth: usize,
) -> Result<Proposition, LogicError> {
    if depth > MAX_EMBEDDING_DEPTH {
        return Err(LogicError::EmbeddingTooDeep);
    }
    let decl = lexicon
        .predicate(&prop.predicate)
        .ok_or_else(|| LogicError::UnknownPredicate(prop.predicate.clone()))?;
    let declared: Vec<&str> = decl.roles.iter().map(|(r, _)| r.as_str()).collect();
    let mut given: Vec<&str> = prop.args.iter().map(|(r, _)| r.as_str()).collect();
    given.sort_unstable();
    let mut declared_sorted = declared.clone();
    declared_sorted.sort_unstable();
    if given != declared_sorted {
        return Err(LogicError::RoleMismatch {
            predicate: prop.predicate.clone(),
            declared: declared.iter().map(|s| s.to_string()).collect(),
            given: prop.args.iter().map(|(r, _)| r.clone()).collect(),
        });
    }
    let mut ordered = Vec::with_capacity(prop.args.len());
    for (role, role_type) in &decl.roles {
        let (_, arg) = prop
            .args
            .iter()
            .find(|(r, _)| r == role)
            .expect("role checked above");
        let arg = match (role_type, arg) {
            (RoleType::Entity(t), Argument::Entity(id)) => {
                let entity = lexicon
                    .entity(id)
                    .ok_or_else(|| LogicError::UnknownEntity(id.clone()))?;
                if &entity.entity_type != t {
                    return Err(LogicError::TypeMismatch {
                        predicate: prop.predicate.clone(),
                        role: role.clone(),
                        expected: t.as_str().to_string(),
                        found: entity.entity_type.as_str().to_string(),
                    });
                }
                Argument::Entity(id.clone())
            }
            (RoleType::Entity(t), Argument::Variable(v)) => {
                let ctx = ctx.ok_or_else(|| LogicError::UnknownEntity(v.clone()))?;
                let bound = ctx
                    .bindings
                    .iter()
                    .find(|(name, _)| name == v)
                    .map(|(_, t)| t)
                    .ok_or_else(|| LogicError::UnboundVariable {
                        variable: v.clone(),
                    })?;
                if bound != t {
                    return Err(LogicError::TypeMismatch {
                        predicate: prop.predicate.clone(),
                        role: role.clone(),
                        expected: t.as_str().to_string(),
                        found: bound.as_str().to_string(),
                    });
                }
                Argument::Variable(v.clone())
            }
            (RoleType::Entity(t), Argument::Embedded(_)) => {
                return Err(LogicError::TypeMismatch {
                    predicate: prop.predicate.clone(),
                    role: role.clone(),
                    expected: t.as_str().to_string(),
                    found: "an embedded proposition".to_string(),
                });
            }
            (RoleType::Sentential, Argument::Embedded(inner)) => Argument::Embedded(
                validate_proposition(inner.clone(), lexicon, ctx, depth + 1)?,
            ),
            (RoleType::Sentential, other) => {
                let found = match other {
                    Argument::Entity(id) => format!("entity `{id}`"),
                    Argument::Variable(v) => format!("variable `{v}`"),
                    Argument::Embedded(_) => unreachable!(),
                };
                return Err(LogicError::TypeMismatch {
                    predicate: prop.predicate.clone(),
                    role: role.clone(),
                    expected: "an embedded proposition".to_string(),
                    found,
                });
            }
        };
        ordered.push((role.clone(), arg));
    }
    Ok(Proposition {
        predicate: prop.predicate,
        args: ordered,
    })
}

pub(crate) fn validate_rule(
    rule: QuantifiedRule,
    lexicon: &Lexicon,
) -> Result<QuantifiedRule, LogicError> {
    let mut seen = Vec::new();
    for (var, t) in &rule.bindings {
        if seen.contains(&var) {
            return Err(LogicError::DuplicateDeclaration(var.clone()));
        }
        seen.push(var);
        if !lexicon.has_type(t.as_str()) {
            return Err(LogicError::UnknownType(t.as_str().to_string()));
        }
    }
    let ctx = RuleContext {
        bindings: &rule.bindings,
    };
    let mut premises = Vec::with_capacity(rule.premises.len());
    for p in rule.premises {
        premises.push(validate_proposition(p, lexicon, Some(&ctx), 0)?);
    }
    let conclusion = Literal {
        proposition: validate_proposition(rule.conclusion.proposition, lexicon, Some(&ctx), 0)?,
        polarity: rule.conclusion.polarity,
    };
    let mut used = Vec::new();
    for p in &premises {
        p.collect_variables(&mut used);
    }
    conclusion.proposition.collect_variables(&mut used);
    for v in used {
        if !rule.bindings.iter().any(|(name, _)| name == v) {
            return Err(LogicError::UnboundVariable {
                variable: v.to_string(),
            });
        }
    }
    Ok(QuantifiedRule {
        quantifier: rule.quantifier,
        bindings: rule.bindings,
        premises,
        conclusion,
        weight: rule.weight,
    })
}

// -- canonical keys -------------------------------------------------------

/// Stable identity string for a ground proposition: roles sorted
/// lexicographically, applied recursively to embedded propositions.
/// `trust(agent: jack, patient: jill)` keys as `trust(agent=jack,patient=jill)`.
pub fn canonical_key(prop: &Proposition) -> Result<String, LogicError> {
    let mut out = String::new();
    write_key(prop, &mut out)?;
    Ok(out)
}

fn write_key(prop: &Proposition, out: &mut String) -> Result<(), LogicError> {
    out.push_str(&prop.predicate);
    out.push('(');
    let mut roles: Vec<&(String, Argument)> = prop.args.iter().collect();
    roles.sort_by(|a, b| a.0.cmp(&b.0));
    for (i, (role, arg)) in roles.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(role);
        out.push('=');
        match arg {
            Argument::Entity(id) => out.push_str(id),
            Argument::Variable(_) => {
                return Err(LogicError::UngroundedProposition(format!(
                    "{}",
                    PropDisplay(prop)
                )))
            }
            Argument::Embedded(inner) => write_key(inner, out)?,
        }
    }
    out.push(')');
    Ok(())
}

// -- serialization --------------------------------------------------------

struct PropDisplay<'a>(&'a Proposition);

impl fmt::Display for PropDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.0.predicate)?;
        for (i, (role, arg)) in self.0.args.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{role}: ")?;
            match arg {
                Argument::Entity(id) => f.write_str(id)?,
                Argument::Variable(v) => f.write_str(v)?,
                Argument::Embedded(p) => write!(f, "{}", PropDisplay(p))?,
            }
        }
        f.write_str(")")
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", PropDisplay(self))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.polarity {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.proposition)
    }
}

impl fmt::Display for QuantifiedRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.quantifier.word())?;
        for (i, (var, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{var}:{t}")?;
        }
        f.write_str("]: ")?;
        for (i, p) in self.premises.iter().enumerate() {
            if i > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(" -> ")?;
        // A `never` rule stores a flipped conclusion; its surface form shows
        // the un-negated proposition.
        let surface_negated = !self.conclusion.polarity != self.quantifier.negates_conclusion();
        if surface_negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.conclusion.proposition)
    }
}

/// Render a statement in the concrete syntax accepted by [`parse_logic`].
/// Descriptions are emitted on a following indented line.
pub fn serialize(statement: &Statement) -> String {
    match statement {
        Statement::Entity(e) => {
            let mut s = format!("entity {} : {}", e.id, e.entity_type);
            if let Some(d) = &e.description {
                s.push_str(&format!("\n  \"{d}\""));
            }
            s
        }
        Statement::Predicate(p) => {
            let roles: Vec<String> = p
                .roles
                .iter()
                .map(|(r, t)| format!("{r}: {t}"))
                .collect();
            let mut s = format!("predicate {} {{{}}}", p.name, roles.join(", "));
            if let Some(d) = &p.description {
                s.push_str(&format!("\n  \"{d}\""));
            }
            s
        }
        Statement::Fact(l) => l.to_string(),
        Statement::Rule(r) => r.to_string(),
    }
}
