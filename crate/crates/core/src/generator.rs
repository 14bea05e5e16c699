//! Seeded slot filling.
//!
//! For each group (ascending id) one base word is drawn uniformly from the
//! lexicon entries of the group's part of speech that can satisfy every
//! slot of the group. Then, in slot order, each distinct `(relation,
//! prime)` of the group draws its fill: antonyms from the base's antonym
//! set, synonyms preferring words not yet used in the group. All draws
//! come from one [`SplitMix64`] stream seeded with the caller's seed.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::exec::Execution;
use crate::lexicon::{Lexicon, PartOfSpeech};
use crate::morphology::{derive, gerund, indefinite_article, Derivation};
use crate::rng::{sub_seed, SplitMix64};
use crate::schema::{ClassId, Relation, Schema, SlotSpec, Token};

/// Concrete words for a schema: base word per group, realized text per slot.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub groups: BTreeMap<u8, String>,
    pub slots: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratedSentence {
    pub class_id: ClassId,
    pub surface: String,
    pub binding: Binding,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenerateError {
    #[error("no lexicon word satisfies group {group}")]
    NoCandidate { group: u8 },
    #[error("override {word:?} for group {group} rejected: {reason}")]
    BadOverride {
        group: u8,
        word: String,
        reason: String,
    },
}

/// Base words pinned per group.
pub type Overrides = BTreeMap<u8, String>;

/// Verb antonym slots that can fall back to a negated form when the base
/// has no lexical antonym.
fn has_negation_fallback(slot: &SlotSpec) -> bool {
    slot.symbol == PartOfSpeech::Verb
        && matches!(
            slot.derivation.as_slice(),
            [] | [Derivation::Gerund] | [Derivation::NegatedInfinitive]
        )
}

fn forces_negation(slot: &SlotSpec) -> bool {
    slot.derivation.as_slice() == [Derivation::NegatedInfinitive]
}

/// Negated realization of a verb slot: `not to V`, or `not V-ing` for gerund slots.
pub(crate) fn negated_form(base: &str, slot: &SlotSpec) -> String {
    if slot.derivation.contains(&Derivation::Gerund) {
        format!("not {}", gerund(base))
    } else {
        format!("not to {base}")
    }
}

#[derive(Debug, Clone)]
enum Fill {
    Word(String),
    Negated,
}

/// Generates one sentence. Pure in `(lexicon, schema, seed, overrides)`.
pub fn generate(
    lex: &Lexicon,
    schema: &Schema,
    seed: u64,
    overrides: &Overrides,
) -> Result<GeneratedSentence, GenerateError> {
    let mut rng = SplitMix64::new(seed);
    let slots: Vec<&SlotSpec> = schema.slots().collect();
    let groups = schema.groups();

    if let Some((&group, word)) = overrides.iter().find(|(g, _)| !groups.contains(g)) {
        return Err(GenerateError::BadOverride {
            group,
            word: word.clone(),
            reason: "schema has no such group".into(),
        });
    }

    let mut bases: BTreeMap<u8, String> = BTreeMap::new();
    for &group in &groups {
        let members: Vec<&SlotSpec> = slots.iter().copied().filter(|s| s.group == group).collect();
        let pos = members[0].symbol;
        let needs_antonym = members
            .iter()
            .any(|s| s.relation == Relation::Antonym && !has_negation_fallback(s));

        let base = match overrides.get(&group) {
            Some(word) => {
                let bad = |reason: &str| GenerateError::BadOverride {
                    group,
                    word: word.clone(),
                    reason: reason.into(),
                };
                let entry = lex
                    .get(word, pos)
                    .ok_or_else(|| bad("not a lexicon word of the slot's part of speech"))?;
                if needs_antonym && entry.antonyms.is_empty() {
                    return Err(bad("word has no antonym"));
                }
                entry.surface.clone()
            }
            None => {
                let candidates: Vec<&str> = lex
                    .words(pos)
                    .filter(|e| !needs_antonym || !e.antonyms.is_empty())
                    .map(|e| e.surface.as_str())
                    .collect();
                if candidates.is_empty() {
                    return Err(GenerateError::NoCandidate { group });
                }
                candidates[rng.below(candidates.len())].to_string()
            }
        };
        bases.insert(group, base);
    }

    let mut fills: BTreeMap<(u8, Relation, u8), Fill> = BTreeMap::new();
    let mut used: BTreeMap<(u8, Relation), BTreeSet<String>> = BTreeMap::new();
    for slot in &slots {
        let key = (slot.group, slot.relation, slot.prime);
        if slot.relation == Relation::Identity || forces_negation(slot) || fills.contains_key(&key)
        {
            continue;
        }
        let base = &bases[&slot.group];
        let taken = used.entry((slot.group, slot.relation)).or_default();
        let fill = match slot.relation {
            Relation::Antonym => {
                let all = lex.antonyms(base, slot.symbol);
                let fresh: Vec<&String> = all.iter().filter(|w| !taken.contains(*w)).collect();
                let pool: Vec<&String> = if fresh.is_empty() {
                    all.iter().collect()
                } else {
                    fresh
                };
                if pool.is_empty() {
                    Fill::Negated
                } else {
                    Fill::Word(pool[rng.below(pool.len())].clone())
                }
            }
            Relation::Synonym => {
                let all = lex.synonyms(base, slot.symbol);
                let others: Vec<&String> = all
                    .iter()
                    .filter(|w| *w != base && !taken.contains(*w))
                    .collect();
                if !others.is_empty() {
                    Fill::Word(others[rng.below(others.len())].clone())
                } else if !taken.contains(base) {
                    Fill::Word(base.clone())
                } else {
                    let any: Vec<&String> = all.iter().collect();
                    Fill::Word(any[rng.below(any.len())].clone())
                }
            }
            Relation::Identity => unreachable!(),
        };
        if let Fill::Word(w) = &fill {
            taken.insert(w.clone());
        }
        fills.insert(key, fill);
    }

    let mut realized = Vec::with_capacity(slots.len());
    for slot in &slots {
        let base = &bases[&slot.group];
        let text = match fills.get(&(slot.group, slot.relation, slot.prime)) {
            _ if forces_negation(slot) => negated_form(base, slot),
            Some(Fill::Negated) => negated_form(base, slot),
            Some(Fill::Word(w)) => derive(w, &slot.derivation),
            None => derive(base, &slot.derivation),
        };
        realized.push(text);
    }

    let surface = assemble(&schema.tokens, &realized);
    Ok(GeneratedSentence {
        class_id: schema.class_id.clone(),
        surface,
        binding: Binding {
            groups: bases,
            slots: realized,
        },
        seed,
    })
}

fn assemble(tokens: &[Token], realized: &[String]) -> String {
    let mut out = String::new();
    let mut slot_idx = 0;
    for t in tokens {
        match t {
            Token::Literal(l) => out.push_str(&first_alternatives(l)),
            Token::Slot(_) => {
                out.push_str(&realized[slot_idx]);
                slot_idx += 1;
            }
        }
    }
    capitalize_first(&resolve_articles(&out))
}

/// `inside/within` → `inside`.
fn first_alternatives(literal: &str) -> String {
    let chars: Vec<char> = literal.chars().collect();
    let mut out = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let joins = c == '/'
            && i > 0
            && chars[i - 1].is_alphanumeric()
            && chars.get(i + 1).is_some_and(|n| n.is_alphanumeric());
        if joins {
            i += 1;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '/') {
                i += 1;
            }
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

/// Replaces each `a(n)` / `A(n)` marker with the article for the text after it.
fn resolve_articles(text: &str) -> String {
    let mut out = text.to_string();
    while let Some(at) = find_article_marker(&out) {
        let upper = out[at..].starts_with('A');
        let article = indefinite_article(&out[at + 4..]).unwrap_or("a");
        let article = if upper {
            let mut a = article.to_string();
            a[..1].make_ascii_uppercase();
            a
        } else {
            article.to_string()
        };
        out.replace_range(at..at + 4, &article);
    }
    out
}

pub(crate) fn find_article_marker(text: &str) -> Option<usize> {
    let bytes = text.as_bytes();
    text.match_indices("(n)").map(|(i, _)| i).find_map(|i| {
        let a = i.checked_sub(1)?;
        let boundary = a == 0 || !(bytes[a - 1] as char).is_alphanumeric();
        (matches!(bytes[a], b'a' | b'A') && boundary).then_some(a)
    })
}

fn capitalize_first(text: &str) -> String {
    match text.char_indices().find(|(_, c)| c.is_alphabetic()) {
        Some((i, c)) => {
            let mut out = String::with_capacity(text.len());
            out.push_str(&text[..i]);
            out.extend(c.to_uppercase());
            out.push_str(&text[i + c.len_utf8()..]);
            out
        }
        None => text.to_string(),
    }
}

/// A batch item that produced no sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skip {
    pub class_id: ClassId,
    pub index: usize,
    pub seed: u64,
    pub error: GenerateError,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Batch {
    pub sentences: Vec<GeneratedSentence>,
    pub skips: Vec<Skip>,
}

/// `count` sentences per schema. Item `i` (schema-major order) is generated
/// with `sub_seed(seed, i)`.
pub fn generate_batch<S>(
    lex: &Lexicon,
    schemas: &[S],
    seed: u64,
    count: usize,
    overrides: &Overrides,
) -> Batch
where
    S: Borrow<Schema> + Sync,
{
    generate_batch_with(Execution::default(), lex, schemas, seed, count, overrides)
}

pub fn generate_batch_with<S>(
    exec: Execution,
    lex: &Lexicon,
    schemas: &[S],
    seed: u64,
    count: usize,
    overrides: &Overrides,
) -> Batch
where
    S: Borrow<Schema> + Sync,
{
    let total = schemas.len() * count;
    let results = exec.map_range(total, |i| {
        let schema: &Schema = schemas[i / count].borrow();
        let item_seed = sub_seed(seed, i as u64);
        generate(lex, schema, item_seed, overrides).map_err(|error| Skip {
            class_id: schema.class_id.clone(),
            index: i,
            seed: item_seed,
            error,
        })
    });
    let mut batch = Batch::default();
    for r in results {
        match r {
            Ok(s) => batch.sentences.push(s),
            Err(s) => batch.skips.push(s),
        }
    }
    batch
}
