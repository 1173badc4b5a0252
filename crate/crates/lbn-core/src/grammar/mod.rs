//! Controlled-English front end.
//!
//! A sentence is tokenized, each position is tagged with exactly one word
//! sense (longest declared surface phrase first, then the built-in closed
//! classes), and the tag sequence is matched against a fixed set of slot
//! patterns. Every pattern is tried; a sentence must match exactly one to
//! parse. Function words are the only tags a pattern may skip over, which
//! keeps negation and quantifier words from silently disappearing into an
//! unrelated pattern.
//!
//! The fragment is deliberately small: copular facts, transitive and
//! intransitive facts, identity, universal statements, and a handful of
//! conditional shapes. Each pattern compiles directly to a logical fact or
//! quantified rule over the lexicon.

mod rules;

pub use rules::rule_names;

use thiserror::Error;

use crate::logic::{Category, Lexicon, LogicError, Statement, SurfaceTarget};

#[derive(Debug, Error, PartialEq)]
pub enum GrammarError {
    #[error("word `{word}` is not in the lexicon (in `{sentence}`)")]
    UnknownWord { word: String, sentence: String },
    #[error("no pattern matches `{sentence}`")]
    NoMatch { sentence: String },
    #[error("`{sentence}` is ambiguous between patterns {rules:?}")]
    Ambiguous {
        sentence: String,
        rules: Vec<String>,
    },
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Split a sentence into folded word tokens. Terminal `.`, `!`, or `?` is
/// dropped; other punctuation (`,`, `;`, `:`) becomes its own token.
pub fn tokenize(sentence: &str) -> Vec<String> {
    let trimmed = sentence.trim().trim_end_matches(['.', '!', '?']);
    let is_punct = |c: char| matches!(c, ',' | ';' | ':' | '.' | '!' | '?');
    let mut tokens = Vec::new();
    for word in trimmed.split_whitespace() {
        let core_start = word.find(|c| !is_punct(c));
        let Some(start) = core_start else {
            // Pure punctuation.
            for c in word.chars() {
                tokens.push(c.to_string());
            }
            continue;
        };
        let head = &word[..start];
        let rest = &word[start..];
        let end = rest
            .rfind(|c| !is_punct(c))
            .map(|i| i + rest[i..].chars().next().unwrap().len_utf8())
            .unwrap_or(0);
        for c in head.chars() {
            tokens.push(c.to_string());
        }
        tokens.push(rest[..end].to_lowercase());
        for c in rest[end..].chars() {
            tokens.push(c.to_string());
        }
    }
    tokens
}

/// One tagged position: a phrase (possibly multi-token), its category, and
/// the lexicon target for declared surface forms.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggedWord {
    pub phrase: String,
    pub category: Category,
    pub target: Option<SurfaceTarget>,
}

impl TaggedWord {
    fn skippable(&self) -> bool {
        self.category == Category::FunctionWord
    }
}

const QUANT_WORDS: &[&str] = &["all", "every", "no"];
const FUNCTION_WORDS: &[&str] = &[
    "the", "a", "an", "to", "of", "he", "she", "they", "is", "are", "if", "then", "two", "each",
    "other", "someone", "than", "who", ",",
];

/// Assign one sense per position: declared surface forms win, longest
/// phrase first; the rest must be a built-in quantifier word, `not`, or a
/// function word.
fn tag(tokens: &[String], lexicon: &Lexicon, sentence: &str) -> Result<Vec<TaggedWord>, GrammarError> {
    let max_words = lexicon.max_surface_words();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < tokens.len() {
        let limit = max_words.min(tokens.len() - pos);
        let mut surface = None;
        for len in (1..=limit).rev() {
            let phrase = tokens[pos..pos + len].join(" ");
            if let Some(sf) = lexicon.surface(&phrase) {
                surface = Some((len, sf.clone()));
                break;
            }
        }
        if let Some((len, sf)) = surface {
            out.push(TaggedWord {
                phrase: sf.phrase,
                category: sf.category,
                target: Some(sf.target),
            });
            pos += len;
            continue;
        }
        let word = tokens[pos].as_str();
        let category = if QUANT_WORDS.contains(&word) {
            Category::Quantword
        } else if word == "not" {
            Category::NegationWord
        } else if FUNCTION_WORDS.contains(&word) {
            Category::FunctionWord
        } else {
            return Err(GrammarError::UnknownWord {
                word: word.to_string(),
                sentence: sentence.to_string(),
            });
        };
        out.push(TaggedWord {
            phrase: word.to_string(),
            category,
            target: None,
        });
        pos += 1;
    }
    Ok(out)
}

/// A slot in a pattern: a literal anchor word, or a capture of a surface
/// form in one of the listed categories.
pub(crate) enum Pat {
    Word(&'static [&'static str]),
    Cap(&'static [Category]),
}

impl Pat {
    fn matches(&self, w: &TaggedWord) -> bool {
        match self {
            Pat::Word(words) => words.contains(&w.phrase.as_str()),
            Pat::Cap(cats) => w.target.is_some() && cats.contains(&w.category),
        }
    }
}

/// Left-to-right pattern match. A slot that does not fit the current word
/// may skip it only if the word is a function word; anything left over
/// after the last slot must also be function words. Returns the captured
/// words in slot order.
fn match_pattern(tagged: &[TaggedWord], pattern: &[Pat]) -> Option<Vec<TaggedWord>> {
    let mut caps = Vec::new();
    let mut pos = 0;
    for pat in pattern {
        loop {
            let w = tagged.get(pos)?;
            if pat.matches(w) {
                if matches!(pat, Pat::Cap(_)) {
                    caps.push(w.clone());
                }
                pos += 1;
                break;
            }
            if !w.skippable() {
                return None;
            }
            pos += 1;
        }
    }
    while let Some(w) = tagged.get(pos) {
        if !w.skippable() {
            return None;
        }
        pos += 1;
    }
    Some(caps)
}

/// A successful sentence parse: which pattern fired and what it compiled to.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSentence {
    pub rule: &'static str,
    pub statement: Statement,
}

pub fn parse_sentence(sentence: &str, lexicon: &Lexicon) -> Result<ParsedSentence, GrammarError> {
    let tokens = tokenize(sentence);
    if tokens.is_empty() {
        return Err(GrammarError::NoMatch {
            sentence: sentence.trim().to_string(),
        });
    }
    let tagged = tag(&tokens, lexicon, sentence.trim())?;
    let mut matches = Vec::new();
    for rule in rules::RULES {
        if let Some(caps) = match_pattern(&tagged, rule.pattern) {
            // An emitter may still reject the match on a constraint the
            // pattern cannot express (for example mismatched entities in a
            // symmetry statement); that is a non-match, not an error.
            match (rule.emit)(&caps, lexicon)? {
                Some(statement) => matches.push(ParsedSentence {
                    rule: rule.name,
                    statement,
                }),
                None => {}
            }
        }
    }
    match matches.len() {
        0 => Err(GrammarError::NoMatch {
            sentence: sentence.trim().to_string(),
        }),
        1 => Ok(matches.pop().expect("one match")),
        _ => Err(GrammarError::Ambiguous {
            sentence: sentence.trim().to_string(),
            rules: matches.iter().map(|m| m.rule.to_string()).collect(),
        }),
    }
}

/// Parse a document, one sentence per non-empty line. Returns each original
/// line with its parse; the first failure aborts.
pub fn parse_document(
    text: &str,
    lexicon: &Lexicon,
) -> Result<Vec<(String, ParsedSentence)>, GrammarError> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed = parse_sentence(line, lexicon)?;
        out.push((line.to_string(), parsed));
    }
    Ok(out)
}
