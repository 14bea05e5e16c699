//! Templates as data: slot specifications, schemas, the DSL and the
//! built-in class registry.

mod dsl;
mod registry;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::PartOfSpeech;
use crate::morphology::Derivation;

pub use dsl::{parse_template, render_template, ParseError};
pub use registry::{builtin_registry, load_catalog, render_catalog, select_classes, CatalogError};

/// How a slot relates to its group's base word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Relation {
    Identity,
    Antonym,
    Synonym,
}

/// A typed hole in a template.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SlotSpec {
    pub symbol: PartOfSpeech,
    pub relation: Relation,
    /// 0 for the base word, 1 for `X'`, 2 for `X''`.
    pub prime: u8,
    /// Applied in order; empty means the bare word.
    pub derivation: Vec<Derivation>,
    pub group: u8,
}

impl SlotSpec {
    pub fn is_base_form(&self) -> bool {
        self.relation == Relation::Identity && self.prime == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Literal(String),
    Slot(SlotSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemaKind {
    Paradox,
    SemiParadox,
    Tautology,
}

impl SchemaKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemaKind::Paradox => "paradox",
            SchemaKind::SemiParadox => "semiparadox",
            SchemaKind::Tautology => "tautology",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "paradox" => Some(SchemaKind::Paradox),
            "semiparadox" => Some(SchemaKind::SemiParadox),
            "tautology" => Some(SchemaKind::Tautology),
            _ => None,
        }
    }
}

impl fmt::Display for SchemaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Class identifiers such as `"4"`, `"2n"`, `"11b"`. Ordered numerically
/// on the leading number, then by suffix, so `"2n" < "10" < "11a"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(String);

impl ClassId {
    pub fn new(id: impl Into<String>) -> Self {
        ClassId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Leading class number and variant suffix.
    pub fn parts(&self) -> (u32, &str) {
        let split = self
            .0
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.0.len());
        (
            self.0[..split].parse().unwrap_or(u32::MAX),
            &self.0[split..],
        )
    }
}

impl Ord for ClassId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.parts()
            .cmp(&other.parts())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ClassId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A template class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub class_id: ClassId,
    /// Angle-bracket notation of the pattern, e.g. `All is <A>, the <Non-A> too.`
    pub label: String,
    pub kind: SchemaKind,
    pub tokens: Vec<Token>,
}

impl Schema {
    /// Builds a schema from DSL text.
    pub fn from_dsl(class_id: &str, kind: SchemaKind, dsl: &str) -> Result<Self, ParseError> {
        let tokens = parse_template(dsl)?;
        Ok(Self::from_tokens(class_id, kind, tokens))
    }

    pub fn from_tokens(class_id: &str, kind: SchemaKind, tokens: Vec<Token>) -> Self {
        let label = notation(&tokens);
        Schema {
            class_id: ClassId::new(class_id),
            label,
            kind,
            tokens,
        }
    }

    pub fn dsl(&self) -> String {
        render_template(&self.tokens)
    }

    pub fn slots(&self) -> impl Iterator<Item = &SlotSpec> {
        self.tokens.iter().filter_map(|t| match t {
            Token::Slot(s) => Some(s),
            Token::Literal(_) => None,
        })
    }

    /// Distinct group ids in ascending order.
    pub fn groups(&self) -> Vec<u8> {
        let mut g: Vec<u8> = self.slots().map(|s| s.group).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// Index (among slots) of the first base-form slot of `group`.
    pub fn base_slot(&self, group: u8) -> Option<usize> {
        self.slots()
            .position(|s| s.group == group && s.is_base_form())
    }

    pub fn same_pattern(&self, other: &Schema) -> bool {
        self.tokens == other.tokens
    }
}

fn notation(tokens: &[Token]) -> String {
    let mut out = String::new();
    for t in tokens {
        match t {
            Token::Literal(l) => out.push_str(l),
            Token::Slot(s) => {
                out.push('<');
                if s.relation == Relation::Antonym {
                    out.push_str("Non-");
                }
                out.push(s.symbol.code());
                out.extend(std::iter::repeat_n('\'', s.prime as usize));
                if !s.derivation.is_empty() {
                    let flags: Vec<_> = s.derivation.iter().map(|d| d.flag()).collect();
                    out.push(':');
                    out.push_str(&flags.join("+"));
                }
                out.push('>');
            }
        }
    }
    out
}
