//! Line-oriented parser for the concrete syntax.
//!
//! One statement per line. `#` starts a comment. A line holding only a
//! double-quoted string attaches as the description of the declaration on
//! the previous line. Declarations must precede use; the parser makes a
//! single pass with a working copy of the lexicon.

use super::*;

/// Tokens within a single line.
#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Colon,
    Comma,
    Arrow,
    Amp,
    Eq,
}

struct Line {
    number: usize,
    toks: Vec<(usize, Tok)>,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> LogicError {
    LogicError::Syntax {
        line,
        col,
        message: message.into(),
    }
}

fn lex_line(number: usize, text: &str) -> Result<Option<Line>, LogicError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        match chars[i] {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '{' => {
                toks.push((col, Tok::LBrace));
                i += 1;
            }
            '}' => {
                toks.push((col, Tok::RBrace));
                i += 1;
            }
            '(' => {
                toks.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((col, Tok::RParen));
                i += 1;
            }
            '[' => {
                toks.push((col, Tok::LBracket));
                i += 1;
            }
            ']' => {
                toks.push((col, Tok::RBracket));
                i += 1;
            }
            ':' => {
                toks.push((col, Tok::Colon));
                i += 1;
            }
            ',' => {
                toks.push((col, Tok::Comma));
                i += 1;
            }
            '=' => {
                toks.push((col, Tok::Eq));
                i += 1;
            }
            '&' => {
                toks.push((col, Tok::Amp));
                i += 1;
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    toks.push((col, Tok::Arrow));
                    i += 2;
                } else {
                    return Err(err(number, col, "expected `->`"));
                }
            }
            '"' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(err(number, col, "unterminated string"));
                }
                toks.push((col, Tok::Str(chars[start..j].iter().collect())));
                i = j + 1;
            }
            c if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_lowercase()
                        || chars[i].is_ascii_digit()
                        || chars[i] == '_')
                {
                    i += 1;
                }
                toks.push((col, Tok::Ident(chars[start..i].iter().collect())));
            }
            c => return Err(err(number, col, format!("unexpected character `{c}`"))),
        }
    }
    if toks.is_empty() {
        return Ok(None);
    }
    Ok(Some(Line { number, toks }))
}

struct LineParser<'a> {
    line: &'a Line,
    pos: usize,
}

impl<'a> LineParser<'a> {
    fn new(line: &'a Line) -> Self {
        LineParser { line, pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.line.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.line
            .toks
            .get(self.pos)
            .or_else(|| self.line.toks.last())
            .map(|(c, _)| *c)
            .unwrap_or(1)
    }

    fn fail(&self, message: impl Into<String>) -> LogicError {
        err(self.line.number, self.col(), message)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.line.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), LogicError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(self.fail(format!("expected {what}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, LogicError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            _ => Err(self.fail(format!("expected {what}"))),
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.line.toks.len()
    }

    fn finish(&self) -> Result<(), LogicError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.fail("trailing tokens after statement"))
        }
    }

    /// proposition := ident '(' role ':' argval (',' role ':' argval)* ')'
    fn proposition(&mut self) -> Result<Proposition, LogicError> {
        let predicate = self.ident("a predicate name")?;
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        loop {
            let role = self.ident("a role name")?;
            self.expect(Tok::Colon, "`:`")?;
            let value = match self.peek() {
                Some(Tok::Ident(_)) => {
                    let name = self.ident("an argument")?;
                    if matches!(self.peek(), Some(Tok::LParen)) {
                        // Re-parse as an embedded proposition head.
                        self.pos -= 1;
                        Argument::Embedded(self.proposition()?)
                    } else {
                        // Entity or variable; resolved during validation.
                        Argument::Entity(name)
                    }
                }
                _ => return Err(self.fail("expected an argument")),
            };
            args.push((role, value));
            match self.next() {
                Some(Tok::Comma) => continue,
                Some(Tok::RParen) => break,
                _ => return Err(self.fail("expected `,` or `)`")),
            }
        }
        Ok(Proposition { predicate, args })
    }
}

/// Mark identifiers bound by `bindings` as variables, recursively.
fn resolve_variables(prop: Proposition, bindings: &[(String, TypeName)]) -> Proposition {
    let args = prop
        .args
        .into_iter()
        .map(|(role, arg)| {
            let arg = match arg {
                Argument::Entity(name) => {
                    if bindings.iter().any(|(v, _)| *v == name) {
                        Argument::Variable(name)
                    } else {
                        Argument::Entity(name)
                    }
                }
                Argument::Embedded(inner) => {
                    Argument::Embedded(resolve_variables(inner, bindings))
                }
                v => v,
            };
            (role, arg)
        })
        .collect();
    Proposition {
        predicate: prop.predicate,
        args,
    }
}

enum Parsed {
    Statement(Statement),
    Type(TypeName),
    Surface(SurfaceForm),
}

fn parse_statement_line(line: &Line, lexicon: &Lexicon) -> Result<Parsed, LogicError> {
    let mut p = LineParser::new(line);
    let head = match p.peek() {
        Some(Tok::Ident(s)) => s.clone(),
        _ => return Err(p.fail("expected a statement")),
    };
    match head.as_str() {
        "type" => {
            p.next();
            let name = p.ident("a type name")?;
            p.finish()?;
            let t = TypeName::new(&name)
                .map_err(|_| err(line.number, 1, format!("invalid type name `{name}`")))?;
            Ok(Parsed::Type(t))
        }
        "entity" => {
            p.next();
            let id = p.ident("an entity name")?;
            p.expect(Tok::Colon, "`:`")?;
            let t = p.ident("a type name")?;
            p.finish()?;
            let entity_type = TypeName::new(&t)
                .map_err(|_| err(line.number, 1, format!("invalid type name `{t}`")))?;
            Ok(Parsed::Statement(Statement::Entity(Entity {
                id,
                entity_type,
                description: None,
            })))
        }
        "predicate" => {
            p.next();
            let name = p.ident("a predicate name")?;
            p.expect(Tok::LBrace, "`{`")?;
            let mut roles = Vec::new();
            loop {
                let role = p.ident("a role name")?;
                p.expect(Tok::Colon, "`:`")?;
                let t = p.ident("a role type")?;
                let role_type = if t == "s" {
                    RoleType::Sentential
                } else {
                    RoleType::Entity(TypeName::new(&t).map_err(|_| {
                        err(line.number, 1, format!("invalid type name `{t}`"))
                    })?)
                };
                if roles.iter().any(|(r, _)| *r == role) {
                    return Err(p.fail(format!("duplicate role `{role}`")));
                }
                roles.push((role, role_type));
                match p.next() {
                    Some(Tok::Comma) => continue,
                    Some(Tok::RBrace) => break,
                    _ => return Err(p.fail("expected `,` or `}`")),
                }
            }
            p.finish()?;
            Ok(Parsed::Statement(Statement::Predicate(PredicateDecl {
                name,
                roles,
                description: None,
            })))
        }
        "surface" => {
            p.next();
            let phrase = match p.next() {
                Some(Tok::Str(s)) => s,
                _ => return Err(p.fail("expected a quoted surface phrase")),
            };
            p.expect(Tok::Eq, "`=`")?;
            let kind = p.ident("a category keyword")?;
            let target_name = p.ident("a target name")?;
            p.finish()?;
            let category = match kind.as_str() {
                "entity" => Category::EntityName,
                "noun" => Category::CommonNoun,
                "adjective" => Category::Adjective,
                "verb" => Category::TransitiveVerb,
                "intransitive" => Category::IntransitiveVerb,
                "relation" => Category::RelationalNoun,
                other => {
                    return Err(p.fail(format!("unknown surface category `{other}`")));
                }
            };
            let target = if category == Category::EntityName {
                SurfaceTarget::Entity(target_name)
            } else {
                SurfaceTarget::Predicate(target_name)
            };
            let folded = phrase.to_lowercase();
            if folded.is_empty() {
                return Err(p.fail("empty surface phrase"));
            }
            Ok(Parsed::Surface(SurfaceForm {
                phrase: folded,
                target,
                category,
            }))
        }
        "always" | "usually" | "sometimes" | "never" => {
            let quantifier = Quantifier::from_word(&head).expect("matched above");
            p.next();
            p.expect(Tok::LBracket, "`[`")?;
            let mut bindings = Vec::new();
            loop {
                let var = p.ident("a variable name")?;
                p.expect(Tok::Colon, "`:`")?;
                let t = p.ident("a type name")?;
                bindings.push((
                    var,
                    TypeName::new(&t).map_err(|_| {
                        err(line.number, 1, format!("invalid type name `{t}`"))
                    })?,
                ));
                match p.next() {
                    Some(Tok::RBracket) => break,
                    Some(Tok::Comma) => continue,
                    _ => return Err(p.fail("expected `,` or `]`")),
                }
            }
            p.expect(Tok::Colon, "`:`")?;
            let mut premises = Vec::new();
            loop {
                premises.push(p.proposition()?);
                match p.peek() {
                    Some(Tok::Amp) => {
                        p.next();
                    }
                    Some(Tok::Arrow) => break,
                    _ => return Err(p.fail("expected `&` or `->`")),
                }
            }
            p.expect(Tok::Arrow, "`->`")?;
            let surface_negated = match p.peek() {
                Some(Tok::Ident(w)) if w == "not" => {
                    p.next();
                    true
                }
                _ => false,
            };
            let conclusion_prop = p.proposition()?;
            p.finish()?;
            let premises = premises
                .into_iter()
                .map(|prop| resolve_variables(prop, &bindings))
                .collect();
            let conclusion_prop = resolve_variables(conclusion_prop, &bindings);
            // `never` concludes the negation of its surface conclusion.
            let polarity = surface_negated == quantifier.negates_conclusion();
            let rule = QuantifiedRule {
                weight: quantifier.weight(),
                quantifier,
                bindings,
                premises,
                conclusion: Literal {
                    proposition: conclusion_prop,
                    polarity,
                },
            };
            let rule = validate_rule(rule, lexicon)?;
            Ok(Parsed::Statement(Statement::Rule(rule)))
        }
        "not" => {
            p.next();
            let prop = p.proposition()?;
            p.finish()?;
            let prop = validate_proposition(prop, lexicon, None, 0)?;
            Ok(Parsed::Statement(Statement::Fact(Literal::negative(prop))))
        }
        _ => {
            let prop = p.proposition()?;
            p.finish()?;
            let prop = validate_proposition(prop, lexicon, None, 0)?;
            Ok(Parsed::Statement(Statement::Fact(Literal::positive(prop))))
        }
    }
}

fn is_description_line(line: &Line) -> bool {
    line.toks.len() == 1 && matches!(line.toks[0].1, Tok::Str(_))
}

pub(crate) fn parse_with_lexicon(
    text: &str,
    base: &Lexicon,
) -> Result<(Vec<Statement>, Lexicon), LogicError> {
    let mut lexicon = base.clone();
    let mut statements: Vec<Statement> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let Some(line) = lex_line(number, raw)? else {
            continue;
        };
        if is_description_line(&line) {
            let Tok::Str(text) = &line.toks[0].1 else {
                unreachable!()
            };
            let attached = match statements.last_mut() {
                Some(Statement::Entity(e)) if e.description.is_none() => {
                    e.description = Some(text.clone());
                    // Keep the lexicon copy in sync.
                    let id = e.id.clone();
                    if let Some(idx) = lexicon.entities.iter().position(|x| x.id == id) {
                        lexicon.entities[idx].description = Some(text.clone());
                    }
                    true
                }
                Some(Statement::Predicate(p)) if p.description.is_none() => {
                    p.description = Some(text.clone());
                    let name = p.name.clone();
                    if let Some(idx) = lexicon.predicates.iter().position(|x| x.name == name) {
                        lexicon.predicates[idx].description = Some(text.clone());
                    }
                    true
                }
                _ => false,
            };
            if !attached {
                return Err(err(
                    number,
                    line.toks[0].0,
                    "description line without a preceding declaration",
                ));
            }
            continue;
        }
        match parse_statement_line(&line, &lexicon)? {
            Parsed::Type(t) => lexicon.declare_type(t)?,
            Parsed::Surface(s) => lexicon.declare_surface(s)?,
            Parsed::Statement(s) => {
                match &s {
                    Statement::Entity(e) => lexicon.declare_entity(e.clone())?,
                    Statement::Predicate(p) => lexicon.declare_predicate(p.clone())?,
                    _ => {}
                }
                statements.push(s);
            }
        }
    }
    Ok((statements, lexicon))
}

/// Parse statements against a lexicon. Declarations inside the text extend a
/// working copy of the lexicon and are returned as statements; `type` and
/// `surface` lines update the working lexicon only.
pub fn parse_logic(text: &str, lexicon: &Lexicon) -> Result<Vec<Statement>, LogicError> {
    parse_with_lexicon(text, lexicon).map(|(s, _)| s)
}

pub(crate) fn parse_lexicon(text: &str) -> Result<Lexicon, LogicError> {
    let (statements, lexicon) = parse_with_lexicon(text, &Lexicon::new())?;
    for s in &statements {
        match s {
            Statement::Fact(f) => {
                return Err(LogicError::Syntax {
                    line: 0,
                    col: 0,
                    message: format!("fact `{f}` is not allowed in a lexicon file"),
                })
            }
            Statement::Rule(r) => {
                return Err(LogicError::Syntax {
                    line: 0,
                    col: 0,
                    message: format!("rule `{r}` is not allowed in a lexicon file"),
                })
            }
            _ => {}
        }
    }
    Ok(lexicon)
}

/// Parse a single ground literal, e.g. a query string.
pub fn parse_literal(text: &str, lexicon: &Lexicon) -> Result<Literal, LogicError> {
    let statements = parse_logic(text, lexicon)?;
    match statements.as_slice() {
        [Statement::Fact(l)] => Ok(l.clone()),
        _ => Err(LogicError::Syntax {
            line: 1,
            col: 1,
            message: "expected exactly one literal".to_string(),
        }),
    }
}

/// Parse a ground literal, requiring groundness explicitly. Used for query
/// strings where a stray variable name should be reported as an unknown
/// entity rather than accepted.
pub fn parse_document_literal(text: &str, lexicon: &Lexicon) -> Result<Literal, LogicError> {
    let lit = parse_literal(text, lexicon)?;
    if !lit.proposition.is_ground() {
        return Err(LogicError::UngroundedProposition(
            lit.proposition.to_string(),
        ));
    }
    Ok(lit)
}

#[cfg(test)]
mod tests {
    use super::*;

    const LEX: &str = "\
type n
entity socrates : e
  \"Greek philosopher\"
entity zeus : e
entity two : n
predicate man {theme: e}
predicate mortal {theme: e}
predicate greater {theme: n, reference: n}
predicate should {content: s}
predicate apologize {agent: e}
surface \"socrates\" = entity socrates
surface \"man\" = noun man
";

    fn lex() -> Lexicon {
        Lexicon::parse(LEX).unwrap()
    }

    #[test]
    fn lexicon_declarations_parse() {
        let lex = lex();
        assert!(lex.has_type("n"));
        assert_eq!(
            lex.entity("socrates").unwrap().description.as_deref(),
            Some("Greek philosopher")
        );
        assert_eq!(lex.predicate("greater").unwrap().roles.len(), 2);
        assert_eq!(lex.surface("man").unwrap().category, Category::CommonNoun);
    }

    #[test]
    fn fact_parses_and_serializes() {
        let lex = lex();
        let s = parse_logic("man(theme: socrates)", &lex).unwrap();
        assert_eq!(serialize(&s[0]), "man(theme: socrates)");
    }

    #[test]
    fn negated_fact_round_trips() {
        let lex = lex();
        let s = parse_logic("not mortal(theme: zeus)", &lex).unwrap();
        let text = serialize(&s[0]);
        assert_eq!(text, "not mortal(theme: zeus)");
        assert_eq!(parse_logic(&text, &lex).unwrap(), s);
    }

    #[test]
    fn rule_parses_with_weight() {
        let lex = lex();
        let s = parse_logic("always [x:e]: man(theme: x) -> mortal(theme: x)", &lex).unwrap();
        let Statement::Rule(r) = &s[0] else {
            panic!("expected rule")
        };
        assert_eq!(r.weight, 0.99);
        assert!(r.conclusion.polarity);
        assert_eq!(
            serialize(&s[0]),
            "always [x:e]: man(theme: x) -> mortal(theme: x)"
        );
    }

    #[test]
    fn never_rule_stores_negated_conclusion() {
        let lex = lex();
        let s = parse_logic("never [x:e]: man(theme: x) -> mortal(theme: x)", &lex).unwrap();
        let Statement::Rule(r) = &s[0] else {
            panic!("expected rule")
        };
        assert_eq!(r.weight, 0.99);
        assert!(!r.conclusion.polarity);
        // Surface form stays un-negated.
        assert_eq!(
            serialize(&s[0]),
            "never [x:e]: man(theme: x) -> mortal(theme: x)"
        );
    }

    #[test]
    fn embedded_proposition_parses() {
        let lex = lex();
        let s = parse_logic(
            "usually [o:e]: man(theme: o) -> should(content: apologize(agent: o))",
            &lex,
        )
        .unwrap();
        assert_eq!(
            serialize(&s[0]),
            "usually [o:e]: man(theme: o) -> should(content: apologize(agent: o))"
        );
    }

    #[test]
    fn rule_with_constant_in_premise() {
        let lex = lex();
        let s = parse_logic(
            "always [x:n]: greater(theme: x, reference: two) -> greater(theme: x, reference: two)",
            &lex,
        )
        .unwrap();
        let Statement::Rule(r) = &s[0] else {
            panic!("expected rule")
        };
        assert_eq!(
            r.premises[0].arg("reference"),
            Some(&Argument::Entity("two".into()))
        );
        assert_eq!(
            r.premises[0].arg("theme"),
            Some(&Argument::Variable("x".into()))
        );
    }

    #[test]
    fn unbound_variable_rejected() {
        let lex = lex();
        let e = parse_logic("always [x:e]: man(theme: x) -> mortal(theme: y)", &lex);
        assert!(matches!(e, Err(LogicError::UnknownEntity(ref n)) if n == "y"));
    }

    #[test]
    fn syntax_error_carries_position() {
        let lex = lex();
        let e = parse_logic("man(theme socrates)", &lex);
        match e {
            Err(LogicError::Syntax { line, col, .. }) => {
                assert_eq!(line, 1);
                assert!(col > 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let lex = lex();
        let s = parse_logic("# a comment\n\nman(theme: socrates)  # trailing\n", &lex).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn kb_rejects_ungrounded_fact() {
        let lex = lex();
        // `x` is not a declared entity, so as a fact argument it is unknown.
        let e = KnowledgeBase::parse(&lex, "man(theme: x)");
        assert!(matches!(e, Err(LogicError::UnknownEntity(_))));
    }

    #[test]
    fn embedding_depth_is_bounded() {
        let mut lex = Lexicon::new();
        lex.declare_predicate(PredicateDecl {
            name: "believes".into(),
            roles: vec![("content".into(), RoleType::Sentential)],
            description: None,
        })
        .unwrap();
        lex.declare_predicate(PredicateDecl {
            name: "rains".into(),
            roles: vec![("theme".into(), RoleType::Entity(TypeName::new("e").unwrap()))],
            description: None,
        })
        .unwrap();
        lex.declare_entity(Entity {
            id: "sky".into(),
            entity_type: TypeName::new("e").unwrap(),
            description: None,
        })
        .unwrap();
        let ok = "believes(content: believes(content: believes(content: believes(content: rains(theme: sky)))))";
        assert!(parse_logic(ok, &lex).is_ok());
        let deep = "believes(content: believes(content: believes(content: believes(content: believes(content: rains(theme: sky))))))";
        assert!(matches!(
            parse_logic(deep, &lex),
            Err(LogicError::EmbeddingTooDeep)
        ));
    }
}
