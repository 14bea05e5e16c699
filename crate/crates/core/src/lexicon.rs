//! Word store supplying slot fills and relation evidence.
//!
//! The on-disk format is one entry per line:
//!
//! ```text
//! surface<TAB>pos<TAB>syn1,syn2,...<TAB>ant1,ant2,...
//! ```
//!
//! `pos` is one of `N`, `V`, `A`. Blank lines and lines starting with `#`
//! are skipped. Antonymy is closed symmetrically on load; synonymy is kept
//! exactly as written (directed, non-transitive).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

/// Category of a slot and of a lexicon entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PartOfSpeech {
    Noun,
    Verb,
    Attribute,
}

impl PartOfSpeech {
    pub const ALL: [PartOfSpeech; 3] = [
        PartOfSpeech::Noun,
        PartOfSpeech::Verb,
        PartOfSpeech::Attribute,
    ];

    /// Single-letter code used by both the lexicon file and the template DSL.
    pub fn code(self) -> char {
        match self {
            PartOfSpeech::Noun => 'N',
            PartOfSpeech::Verb => 'V',
            PartOfSpeech::Attribute => 'A',
        }
    }

    pub fn from_code(c: char) -> Option<Self> {
        match c {
            'N' => Some(PartOfSpeech::Noun),
            'V' => Some(PartOfSpeech::Verb),
            'A' => Some(PartOfSpeech::Attribute),
            _ => None,
        }
    }
}

impl fmt::Display for PartOfSpeech {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// One word sense.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexEntry {
    pub surface: String,
    pub pos: PartOfSpeech,
    pub synonyms: BTreeSet<String>,
    pub antonyms: BTreeSet<String>,
}

/// Immutable, validated collection of entries keyed by `(pos, surface)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<(PartOfSpeech, String), LexEntry>,
}

static EMPTY: BTreeSet<String> = BTreeSet::new();

impl Lexicon {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, surface: &str, pos: PartOfSpeech) -> Option<&LexEntry> {
        self.entries.get(&(pos, surface.to_lowercase()))
    }

    pub fn contains(&self, surface: &str, pos: PartOfSpeech) -> bool {
        self.get(surface, pos).is_some()
    }

    /// Antonyms of `surface`; empty for unknown words.
    pub fn antonyms(&self, surface: &str, pos: PartOfSpeech) -> &BTreeSet<String> {
        self.get(surface, pos).map_or(&EMPTY, |e| &e.antonyms)
    }

    /// Synonyms of `surface`, always including `surface` itself.
    pub fn synonyms(&self, surface: &str, pos: PartOfSpeech) -> BTreeSet<String> {
        let surface = surface.to_lowercase();
        let mut out = self
            .entries
            .get(&(pos, surface.clone()))
            .map(|e| e.synonyms.clone())
            .unwrap_or_default();
        out.insert(surface);
        out
    }

    /// Entries of one part of speech, ordered by surface.
    pub fn words(&self, pos: PartOfSpeech) -> impl Iterator<Item = &LexEntry> {
        self.entries
            .range((pos, String::new())..)
            .take_while(move |((p, _), _)| *p == pos)
            .map(|(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values()
    }

    /// Serializes back to the line format. Parsing the result yields an
    /// equal lexicon with no repairs.
    pub fn to_source(&self) -> String {
        let mut out = String::new();
        for e in self.entries.values() {
            let join =
                |s: &BTreeSet<String>| s.iter().map(String::as_str).collect::<Vec<_>>().join(",");
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                e.surface,
                e.pos,
                join(&e.synonyms),
                join(&e.antonyms)
            ));
        }
        out
    }
}

/// An antonym link added by symmetric closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Repair {
    pub word: String,
    pub pos: PartOfSpeech,
    pub gained_antonym: String,
}

impl fmt::Display for Repair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "closure: {} ({}) gains antonym {}",
            self.word, self.pos, self.gained_antonym
        )
    }
}

/// A successfully parsed lexicon together with the closure actions taken.
#[derive(Debug, Clone)]
pub struct LoadedLexicon {
    pub lexicon: Lexicon,
    pub repairs: Vec<Repair>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Defect {
    #[error("line {line}: malformed line: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: duplicate entry {surface} ({pos})")]
    DuplicateEntry {
        surface: String,
        pos: PartOfSpeech,
        line: usize,
    },
    #[error("line {line}: {from} ({pos}) refers to {to}, which has no {pos} entry")]
    DanglingReference {
        from: String,
        to: String,
        pos: PartOfSpeech,
        line: usize,
    },
}

/// Every defect found in a lexicon source.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub defects: Vec<Defect>,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "lexicon has {} defect(s):", self.defects.len())?;
        for d in &self.defects {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

fn is_valid_surface(s: &str) -> bool {
    let first_last_ok = s.chars().next().is_some_and(char::is_alphanumeric)
        && s.chars().last().is_some_and(char::is_alphanumeric);
    first_last_ok
        && s.chars()
            .all(|c| c.is_alphanumeric() || c == '-' || c == '\'')
}

fn parse_word_list(field: &str) -> Result<BTreeSet<String>, String> {
    let mut out = BTreeSet::new();
    if field.is_empty() {
        return Ok(out);
    }
    for item in field.split(',') {
        let word = item.to_lowercase();
        if !is_valid_surface(&word) {
            return Err(format!("bad word {item:?} in list"));
        }
        out.insert(word);
    }
    Ok(out)
}

/// Parses the line format, closing antonymy symmetrically.
pub fn parse_lexicon(source: &str) -> Result<LoadedLexicon, ValidationReport> {
    let mut report = ValidationReport::default();
    let mut entries: BTreeMap<(PartOfSpeech, String), (usize, LexEntry)> = BTreeMap::new();

    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let text = raw.strip_suffix('\r').unwrap_or(raw);
        if text.trim().is_empty() || text.starts_with('#') {
            continue;
        }
        let malformed = |reason: String| Defect::MalformedLine { line, reason };
        let fields: Vec<&str> = text.split('\t').collect();
        if fields.len() != 4 {
            report.defects.push(malformed(format!(
                "expected 4 tab-separated fields, found {}",
                fields.len()
            )));
            continue;
        }
        let surface = fields[0].to_lowercase();
        if !is_valid_surface(&surface) {
            report
                .defects
                .push(malformed(format!("bad surface {:?}", fields[0])));
            continue;
        }
        let mut pos_chars = fields[1].chars();
        let pos = match (
            pos_chars.next().and_then(PartOfSpeech::from_code),
            pos_chars.next(),
        ) {
            (Some(p), None) => p,
            _ => {
                report
                    .defects
                    .push(malformed(format!("bad part of speech {:?}", fields[1])));
                continue;
            }
        };
        let (mut synonyms, antonyms) =
            match (parse_word_list(fields[2]), parse_word_list(fields[3])) {
                (Ok(s), Ok(a)) => (s, a),
                (Err(e), _) | (_, Err(e)) => {
                    report.defects.push(malformed(e));
                    continue;
                }
            };
        if antonyms.contains(&surface) {
            report
                .defects
                .push(malformed(format!("{surface} lists itself as an antonym")));
            continue;
        }
        // identity is implicit in every synonym set
        synonyms.remove(&surface);

        let key = (pos, surface.clone());
        if entries.contains_key(&key) {
            report
                .defects
                .push(Defect::DuplicateEntry { surface, pos, line });
            continue;
        }
        entries.insert(
            key,
            (
                line,
                LexEntry {
                    surface,
                    pos,
                    synonyms,
                    antonyms,
                },
            ),
        );
    }

    for (line, entry) in entries.values() {
        for target in entry.synonyms.iter().chain(&entry.antonyms) {
            if !entries.contains_key(&(entry.pos, target.clone())) {
                report.defects.push(Defect::DanglingReference {
                    from: entry.surface.clone(),
                    to: target.clone(),
                    pos: entry.pos,
                    line: *line,
                });
            }
        }
    }

    if !report.defects.is_empty() {
        report.defects.sort_by_key(defect_line);
        return Err(report);
    }

    let mut repairs = Vec::new();
    let links: Vec<(PartOfSpeech, String, String)> = entries
        .values()
        .flat_map(|(_, e)| {
            e.antonyms
                .iter()
                .map(move |a| (e.pos, e.surface.clone(), a.clone()))
        })
        .collect();
    for (pos, from, to) in links {
        let (_, target) = entries.get_mut(&(pos, to.clone())).expect("checked above");
        if target.antonyms.insert(from.clone()) {
            repairs.push(Repair {
                word: to,
                pos,
                gained_antonym: from,
            });
        }
    }

    let entries = entries.into_iter().map(|(k, (_, e))| (k, e)).collect();
    Ok(LoadedLexicon {
        lexicon: Lexicon { entries },
        repairs,
    })
}

fn defect_line(d: &Defect) -> usize {
    match d {
        Defect::MalformedLine { line, .. }
        | Defect::DuplicateEntry { line, .. }
        | Defect::DanglingReference { line, .. } => *line,
    }
}
