//! Orthographic English inflection used to realize slot fills, plus the
//! exact inverses the detector uses to undo them.
//!
//! Rules are deliberately small: no consonant doubling, no irregular
//! tables, article choice by initial letter.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::PartOfSpeech;

/// A derivation step applied to a slot's word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Derivation {
    /// verb → agent noun (`hate` → `hater`)
    Agentive,
    /// verb → `-ing` form
    Gerund,
    /// noun (or agent noun) → plural
    Plural,
    /// verb → `not to <verb>`
    NegatedInfinitive,
}

impl Derivation {
    pub fn flag(self) -> &'static str {
        match self {
            Derivation::Agentive => "agent",
            Derivation::Gerund => "ger",
            Derivation::Plural => "pl",
            Derivation::NegatedInfinitive => "neginf",
        }
    }

    pub fn from_flag(flag: &str) -> Option<Self> {
        match flag {
            "agent" => Some(Derivation::Agentive),
            "ger" => Some(Derivation::Gerund),
            "pl" => Some(Derivation::Plural),
            "neginf" => Some(Derivation::NegatedInfinitive),
            _ => None,
        }
    }

    /// Whether this step may follow `prior` steps on a slot of `pos`.
    /// Plural applies to nouns, or to a verb already made an agent noun.
    pub fn applies_to(self, pos: PartOfSpeech, prior: &[Derivation]) -> bool {
        let nominal = pos == PartOfSpeech::Noun || prior.last() == Some(&Derivation::Agentive);
        match self {
            Derivation::Plural => nominal,
            Derivation::Agentive | Derivation::Gerund | Derivation::NegatedInfinitive => {
                pos == PartOfSpeech::Verb && prior.is_empty()
            }
        }
    }

    pub fn apply(self, word: &str) -> String {
        match self {
            Derivation::Agentive => agentive(word),
            Derivation::Gerund => gerund(word),
            Derivation::Plural => pluralize(word),
            Derivation::NegatedInfinitive => format!("not to {word}"),
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.flag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MorphError {
    #[error("empty phrase")]
    EmptyPhrase,
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

fn ends_consonant_y(word: &str) -> bool {
    let mut rev = word.chars().rev();
    matches!((rev.next(), rev.next()), (Some('y'), Some(c)) if c.is_alphabetic() && !is_vowel(c))
}

/// `"a"` or `"an"` for the phrase, chosen by its first letter.
pub fn indefinite_article(phrase: &str) -> Result<&'static str, MorphError> {
    let first = phrase
        .chars()
        .find(|c| c.is_alphanumeric())
        .ok_or(MorphError::EmptyPhrase)?;
    Ok(if is_vowel(first.to_ascii_lowercase()) {
        "an"
    } else {
        "a"
    })
}

/// Agent noun: `hate` → `hater`, `envy` → `envier`, `kick` → `kicker`.
pub fn agentive(verb: &str) -> String {
    er_suffix(verb)
}

/// Comparative adjective, same orthography as the agent suffix.
pub fn comparative(adjective: &str) -> String {
    er_suffix(adjective)
}

fn er_suffix(word: &str) -> String {
    if word.ends_with('e') {
        format!("{word}r")
    } else if ends_consonant_y(word) {
        format!("{}ier", &word[..word.len() - 1])
    } else {
        format!("{word}er")
    }
}

pub fn pluralize(noun: &str) -> String {
    if ends_consonant_y(noun) {
        format!("{}ies", &noun[..noun.len() - 1])
    } else if ["s", "x", "z", "ch", "sh"]
        .iter()
        .any(|s| noun.ends_with(s))
    {
        format!("{noun}es")
    } else {
        format!("{noun}s")
    }
}

pub fn gerund(verb: &str) -> String {
    if let Some(stem) = verb.strip_suffix("ie") {
        format!("{stem}ying")
    } else if verb.ends_with('e') && !verb.ends_with("ee") {
        format!("{}ing", &verb[..verb.len() - 1])
    } else {
        format!("{verb}ing")
    }
}

pub fn negated_infinitive(verb: &str) -> Result<String, MorphError> {
    if verb.trim().is_empty() {
        return Err(MorphError::EmptyPhrase);
    }
    Ok(format!("not to {verb}"))
}

/// Keeps only the stems that the forward rule maps back onto `word`.
fn exact_inverse(word: &str, stems: Vec<String>, forward: fn(&str) -> String) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in stems {
        if !s.is_empty() && forward(&s) == word && !out.contains(&s) {
            out.push(s);
        }
    }
    out
}

fn er_stems(word: &str) -> Vec<String> {
    let mut stems = Vec::new();
    if let Some(s) = word.strip_suffix("ier") {
        stems.push(format!("{s}y"));
    }
    if let Some(s) = word.strip_suffix("er") {
        stems.push(s.to_string());
    }
    if let Some(s) = word.strip_suffix('r') {
        stems.push(s.to_string());
    }
    stems
}

pub fn invert_agentive(noun: &str) -> Vec<String> {
    exact_inverse(noun, er_stems(noun), agentive)
}

pub fn invert_comparative(adjective: &str) -> Vec<String> {
    exact_inverse(adjective, er_stems(adjective), comparative)
}

pub fn invert_plural(noun: &str) -> Vec<String> {
    let mut stems = Vec::new();
    if let Some(s) = noun.strip_suffix("ies") {
        stems.push(format!("{s}y"));
    }
    if let Some(s) = noun.strip_suffix("es") {
        stems.push(s.to_string());
    }
    if let Some(s) = noun.strip_suffix('s') {
        stems.push(s.to_string());
    }
    exact_inverse(noun, stems, pluralize)
}

pub fn invert_gerund(form: &str) -> Vec<String> {
    let mut stems = Vec::new();
    if let Some(s) = form.strip_suffix("ying") {
        stems.push(format!("{s}ie"));
    }
    if let Some(s) = form.strip_suffix("ing") {
        stems.push(s.to_string());
        stems.push(format!("{s}e"));
    }
    exact_inverse(form, stems, gerund)
}

/// Applies a derivation chain left to right.
pub fn derive(word: &str, chain: &[Derivation]) -> String {
    chain.iter().fold(word.to_string(), |w, d| d.apply(&w))
}

/// All words that `derive(_, chain)` maps onto `form`.
pub fn underive(form: &str, chain: &[Derivation]) -> Vec<String> {
    let mut current = vec![form.to_string()];
    for step in chain.iter().rev() {
        let mut next = Vec::new();
        for w in &current {
            let stems = match step {
                Derivation::Agentive => invert_agentive(w),
                Derivation::Gerund => invert_gerund(w),
                Derivation::Plural => invert_plural(w),
                Derivation::NegatedInfinitive => w
                    .strip_prefix("not to ")
                    .map(str::to_string)
                    .into_iter()
                    .collect(),
            };
            for s in stems {
                if !next.contains(&s) {
                    next.push(s);
                }
            }
        }
        current = next;
    }
    current
}
