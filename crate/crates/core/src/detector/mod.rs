//! Sentence classification against the schema registry.
//!
//! A schema matches when its literal skeleton covers the whole normalized
//! sentence in order, with every slot capturing one to [`MAX_SLOT_SPAN`]
//! word tokens. Captures are tried shortest first and the first complete
//! alignment wins. A trailing run of `.`/`!`/`?` is compared only for
//! presence, so `!` may close a `.` pattern.
//!
//! Relations are then checked against the lexicon. Each checked relation
//! either carries an [`Evidence`] kind or is unsatisfied; unknown words are
//! checked and unsatisfied, never skipped.
//!
//! One extra alignment: the literal `more` followed by an attribute slot
//! may instead be a single comparative (`prettier` for `more pretty`). The
//! base is recovered by inverting the comparative suffix and the recovery
//! is itself a checked relation.

mod normalize;

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::Serialize;

pub use normalize::normalize;
use normalize::{is_terminal, is_word, literal_tokens, LitTok};

use crate::exec::Execution;
use crate::generator::{negated_form, Binding};
use crate::lexicon::{Lexicon, PartOfSpeech};
use crate::morphology::{invert_comparative, underive, Derivation};
use crate::schema::{ClassId, Relation, Schema, SlotSpec, Token};

/// Longest span, in tokens, a single slot may capture.
pub const MAX_SLOT_SPAN: usize = 3;

/// Default `min-score` for corpus scans.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

/// Why a relation counts as satisfied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Evidence {
    LexAntonym,
    LexSynonym,
    NegInf,
    SuffixInverse,
    IdentityRepeat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    /// Slot index (among the schema's slots) whose relation was checked.
    pub slot: usize,
    pub relation: Relation,
    pub evidence: Option<Evidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Detection {
    pub class_id: ClassId,
    pub binding: Binding,
    pub relations: Vec<RelationCheck>,
    /// Number of literal skeleton tokens, used for ranking.
    pub literal_count: usize,
    /// Matched token range; always the whole sentence.
    pub span: (usize, usize),
    pub sentence_index: usize,
}

impl Detection {
    pub fn relations_checked(&self) -> usize {
        self.relations.len()
    }

    pub fn relations_satisfied(&self) -> usize {
        self.relations
            .iter()
            .filter(|r| r.evidence.is_some())
            .count()
    }

    /// `satisfied / checked`, or 1 when nothing was checked.
    pub fn score(&self) -> f64 {
        match self.relations_checked() {
            0 => 1.0,
            n => self.relations_satisfied() as f64 / n as f64,
        }
    }

    fn cmp_score(&self, other: &Detection) -> Ordering {
        let frac = |d: &Detection| match d.relations_checked() {
            0 => (1, 1),
            n => (d.relations_satisfied(), n),
        };
        let (a, b) = frac(self);
        let (c, d) = frac(other);
        (a * d).cmp(&(c * b))
    }

    /// Ranking order: score descending, literal count descending, class id ascending.
    pub fn rank_cmp(&self, other: &Detection) -> Ordering {
        other
            .cmp_score(self)
            .then_with(|| other.literal_count.cmp(&self.literal_count))
            .then_with(|| self.class_id.cmp(&other.class_id))
    }
}

#[derive(Debug, Clone)]
enum Elem {
    Lit(LitTok),
    Slot(usize),
}

#[derive(Debug, Clone, Copy, Default)]
struct Capture {
    start: usize,
    end: usize,
    comparative: bool,
}

/// A schema prepared for matching.
#[derive(Debug, Clone)]
struct Compiled<'a> {
    schema: &'a Schema,
    slots: Vec<&'a SlotSpec>,
    body: Vec<Elem>,
    terminated: bool,
    literal_count: usize,
}

impl<'a> Compiled<'a> {
    fn new(schema: &'a Schema) -> Self {
        let mut elems = Vec::new();
        let mut slot_idx = 0;
        for t in &schema.tokens {
            match t {
                Token::Literal(l) => elems.extend(literal_tokens(l).into_iter().map(Elem::Lit)),
                Token::Slot(_) => {
                    elems.push(Elem::Slot(slot_idx));
                    slot_idx += 1;
                }
            }
        }
        let literal_count = elems.iter().filter(|e| matches!(e, Elem::Lit(_))).count();
        let mut terminated = false;
        while matches!(elems.last(), Some(Elem::Lit(l)) if l.is_terminal()) {
            elems.pop();
            terminated = true;
        }
        Compiled {
            schema,
            slots: schema.slots().collect(),
            body: elems,
            terminated,
            literal_count,
        }
    }

    fn align(&self, ei: usize, tokens: &[String], ti: usize, caps: &mut [Capture]) -> bool {
        let Some(elem) = self.body.get(ei) else {
            return ti == tokens.len();
        };
        match elem {
            Elem::Lit(lit) => {
                if tokens.get(ti).is_some_and(|t| lit.matches(t))
                    && self.align(ei + 1, tokens, ti + 1, caps)
                {
                    return true;
                }
                self.align_comparative(ei, tokens, ti, caps)
            }
            Elem::Slot(k) => {
                for len in 1..=MAX_SLOT_SPAN {
                    let end = ti + len;
                    if end > tokens.len() || !is_word(&tokens[end - 1]) {
                        break;
                    }
                    caps[*k] = Capture {
                        start: ti,
                        end,
                        comparative: false,
                    };
                    if self.align(ei + 1, tokens, end, caps) {
                        return true;
                    }
                }
                false
            }
        }
    }

    fn align_comparative(
        &self,
        ei: usize,
        tokens: &[String],
        ti: usize,
        caps: &mut [Capture],
    ) -> bool {
        let (Some(Elem::Lit(LitTok::Word(w))), Some(Elem::Slot(k))) =
            (self.body.get(ei), self.body.get(ei + 1))
        else {
            return false;
        };
        let slot = self.slots[*k];
        let eligible =
            w == "more" && slot.symbol == PartOfSpeech::Attribute && slot.derivation.is_empty();
        if !eligible
            || !tokens
                .get(ti)
                .is_some_and(|t| is_word(t) && t.ends_with("er"))
        {
            return false;
        }
        caps[*k] = Capture {
            start: ti,
            end: ti + 1,
            comparative: true,
        };
        self.align(ei + 2, tokens, ti + 1, caps)
    }

    fn match_tokens(&self, lex: &Lexicon, tokens: &[String]) -> Option<Detection> {
        let terminal_run = tokens.iter().rev().take_while(|t| is_terminal(t)).count();
        let body = &tokens[..tokens.len() - terminal_run];
        if (terminal_run > 0) != self.terminated || body.is_empty() {
            return None;
        }
        let mut caps = vec![Capture::default(); self.slots.len()];
        if !self.align(0, body, 0, &mut caps) {
            return None;
        }
        Some(self.check_relations(lex, body, &caps, tokens.len()))
    }

    fn check_relations(
        &self,
        lex: &Lexicon,
        tokens: &[String],
        caps: &[Capture],
        len: usize,
    ) -> Detection {
        let spaced: Vec<String> = caps
            .iter()
            .map(|c| tokens[c.start..c.end].join(" "))
            .collect();
        let joined: Vec<String> = caps
            .iter()
            .map(|c| tokens[c.start..c.end].join("-"))
            .collect();
        let mut groups = BTreeMap::new();
        let mut relations = Vec::new();

        for group in self.schema.groups() {
            let b = self
                .schema
                .base_slot(group)
                .expect("parsed schemas have a base per group");
            let base_spec = self.slots[b];
            let pos = base_spec.symbol;

            let base = if caps[b].comparative {
                let cands = invert_comparative(&joined[b]);
                let known = cands.iter().find(|c| lex.contains(c, pos)).cloned();
                relations.push(RelationCheck {
                    slot: b,
                    relation: Relation::Identity,
                    evidence: known.is_some().then_some(Evidence::SuffixInverse),
                });
                known
                    .or_else(|| cands.into_iter().next())
                    .unwrap_or_else(|| joined[b].clone())
            } else if base_spec.derivation.is_empty() {
                joined[b].clone()
            } else {
                let cands = underive(&joined[b], &base_spec.derivation);
                cands
                    .iter()
                    .find(|c| lex.contains(c, pos))
                    .or(cands.first())
                    .cloned()
                    .unwrap_or_else(|| joined[b].clone())
            };

            for (i, spec) in self.slots.iter().enumerate() {
                if spec.group != group || i == b {
                    continue;
                }
                let evidence = relation_evidence(lex, spec, &base, &joined[i], &spaced[i]);
                relations.push(RelationCheck {
                    slot: i,
                    relation: spec.relation,
                    evidence,
                });
            }
            groups.insert(group, base);
        }
        relations.sort_by_key(|r| r.slot);

        Detection {
            class_id: self.schema.class_id.clone(),
            binding: Binding {
                groups,
                slots: spaced,
            },
            relations,
            literal_count: self.literal_count,
            span: (0, len),
            sentence_index: 0,
        }
    }
}

fn relation_evidence(
    lex: &Lexicon,
    spec: &SlotSpec,
    base: &str,
    joined: &str,
    spaced: &str,
) -> Option<Evidence> {
    let derived = !spec.derivation.is_empty();
    let lexical = if derived {
        Evidence::SuffixInverse
    } else {
        Evidence::IdentityRepeat
    };
    match spec.relation {
        Relation::Identity => underive(joined, &spec.derivation)
            .iter()
            .any(|c| c == base)
            .then_some(lexical),
        Relation::Antonym => {
            let forced = spec.derivation.as_slice() == [Derivation::NegatedInfinitive];
            if !forced {
                let antonyms = lex.antonyms(base, spec.symbol);
                if underive(joined, &spec.derivation)
                    .iter()
                    .any(|c| antonyms.contains(c))
                {
                    return Some(if derived {
                        Evidence::SuffixInverse
                    } else {
                        Evidence::LexAntonym
                    });
                }
            }
            if spec.symbol == PartOfSpeech::Verb && negation_matches(spec, base, spaced) {
                return Some(Evidence::NegInf);
            }
            None
        }
        Relation::Synonym => {
            if !lex.contains(base, spec.symbol) {
                return None;
            }
            let synonyms = lex.synonyms(base, spec.symbol);
            underive(joined, &spec.derivation)
                .iter()
                .any(|c| synonyms.contains(c))
                .then_some(if derived {
                    Evidence::SuffixInverse
                } else {
                    Evidence::LexSynonym
                })
        }
    }
}

/// Whether `spaced` is the negated realization of `base` for this slot.
fn negation_matches(spec: &SlotSpec, base: &str, spaced: &str) -> bool {
    match spec.derivation.as_slice() {
        [] | [Derivation::NegatedInfinitive] | [Derivation::Gerund] => {
            let expected = negated_form(base, spec);
            // bases are hyphen-joined, realized text uses spaces
            spaced == expected || spaced.replace(' ', "-") == expected.replace(' ', "-")
        }
        _ => false,
    }
}

/// Matches one schema against a normalized token sequence.
pub fn match_schema(lex: &Lexicon, schema: &Schema, tokens: &[String]) -> Option<Detection> {
    Compiled::new(schema).match_tokens(lex, tokens)
}

/// A lexicon and registry prepared for repeated classification.
pub struct Detector<'a> {
    lex: &'a Lexicon,
    compiled: Vec<Compiled<'a>>,
}

impl<'a> Detector<'a> {
    pub fn new<S: Borrow<Schema>>(lex: &'a Lexicon, registry: &'a [S]) -> Self {
        let compiled = registry.iter().map(|s| Compiled::new(s.borrow())).collect();
        Detector { lex, compiled }
    }

    /// All matching schemas, best first.
    pub fn classify(&self, sentence: &str) -> Vec<Detection> {
        let tokens = normalize(sentence);
        if tokens.is_empty() {
            return Vec::new();
        }
        let mut out: Vec<Detection> = self
            .compiled
            .iter()
            .filter_map(|c| c.match_tokens(self.lex, &tokens))
            .collect();
        out.sort_by(Detection::rank_cmp);
        out
    }

    pub fn scan<L: AsRef<str> + Sync>(&self, lines: &[L], threshold: f64, exec: Execution) -> Scan {
        let tops = exec.map_range(lines.len(), |i| {
            self.classify(lines[i].as_ref())
                .into_iter()
                .next()
                .filter(|d| d.score() >= threshold)
                .map(|mut d| {
                    d.sentence_index = i;
                    d
                })
        });
        let mut counts: Vec<(ClassId, usize)> = self
            .compiled
            .iter()
            .map(|c| (c.schema.class_id.clone(), 0))
            .collect();
        let detections: Vec<Detection> = tops.into_iter().flatten().collect();
        for d in &detections {
            if let Some(entry) = counts.iter_mut().find(|(id, _)| *id == d.class_id) {
                entry.1 += 1;
            }
        }
        Scan { detections, counts }
    }
}

/// Ranked detections for one sentence.
pub fn classify<S: Borrow<Schema>>(
    lex: &Lexicon,
    registry: &[S],
    sentence: &str,
) -> Vec<Detection> {
    Detector::new(lex, registry).classify(sentence)
}

/// Result of scanning a corpus: the top detection of each line that meets
/// the threshold (in line order) and per-class counts in registry order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Scan {
    pub detections: Vec<Detection>,
    pub counts: Vec<(ClassId, usize)>,
}

pub fn scan_corpus<S, L>(lex: &Lexicon, registry: &[S], lines: &[L], threshold: f64) -> Scan
where
    S: Borrow<Schema> + Sync,
    L: AsRef<str> + Sync,
{
    scan_corpus_with(Execution::default(), lex, registry, lines, threshold)
}

pub fn scan_corpus_with<S, L>(
    exec: Execution,
    lex: &Lexicon,
    registry: &[S],
    lines: &[L],
    threshold: f64,
) -> Scan
where
    S: Borrow<Schema> + Sync,
    L: AsRef<str> + Sync,
{
    Detector::new(lex, registry).scan(lines, threshold, exec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::parse_lexicon;
    use crate::schema::{builtin_registry, SchemaKind};

    fn lex(src: &str) -> Lexicon {
        parse_lexicon(src).unwrap().lexicon
    }

    fn schema(id: &str) -> Schema {
        builtin_registry()
            .into_iter()
            .find(|s| s.class_id.as_str() == id)
            .unwrap()
    }

    fn top(lex: &Lexicon, sentence: &str) -> Option<Detection> {
        classify(lex, &builtin_registry(), sentence)
            .into_iter()
            .next()
    }

    #[test]
    fn class_one_real_unreal() {
        let lex = lex("real\tA\t\tunreal\nunreal\tA\t\t\n");
        let d = match_schema(
            &lex,
            &schema("1"),
            &normalize("All is real, the unreal too."),
        )
        .unwrap();
        assert_eq!(d.binding.groups[&0], "real");
        assert_eq!(d.binding.slots, ["real", "unreal"]);
        assert_eq!(d.score(), 1.0);
        assert_eq!(d.relations[0].evidence, Some(Evidence::LexAntonym));
    }

    #[test]
    fn skeleton_absent() {
        assert!(match_schema(
            &Lexicon::default(),
            &schema("1"),
            &normalize("xyzzy plugh.")
        )
        .is_none());
    }

    #[test]
    fn negated_infinitive_needs_no_lexicon() {
        let d = match_schema(
            &Lexicon::default(),
            &schema("9"),
            &normalize("Not to touch sometimes means to touch."),
        )
        .unwrap();
        assert_eq!(d.score(), 1.0);
        assert_eq!(d.relations[0].evidence, Some(Evidence::NegInf));
    }

    #[test]
    fn identical_patterns_tie_to_lower_id() {
        let lex = lex("real\tA\t\t\n");
        let ranked = classify(&lex, &builtin_registry(), "More real than real.");
        let ids: Vec<&str> = ranked.iter().map(|d| d.class_id.as_str()).collect();
        assert_eq!(&ids[..2], ["23", "27"]);
        assert_eq!(ranked[0].score(), ranked[1].score());
    }

    #[test]
    fn empty_lexicon_still_matches_skeleton() {
        let d = top(&Lexicon::default(), "The shadow of the light.").unwrap();
        assert_eq!(d.class_id.as_str(), "12");
        assert_eq!(d.score(), 0.0);
        let lex = lex("shadow\tA\t\tlight\nlight\tA\t\t\n");
        let d = top(&lex, "The shadow of the light.").unwrap();
        assert_eq!((d.class_id.as_str(), d.score()), ("12", 1.0));
    }

    #[test]
    fn empty_sentence() {
        assert!(classify(&Lexicon::default(), &builtin_registry(), "").is_empty());
    }

    #[test]
    fn comparative_fold() {
        let lex = lex("pretty\tA\t\t\n");
        let d = top(&lex, "Prettier than pretty.").unwrap();
        assert_eq!(d.class_id.as_str(), "23");
        assert_eq!(d.score(), 1.0);
        assert_eq!(d.binding.groups[&0], "pretty");
        assert_eq!(d.relations[0].evidence, Some(Evidence::SuffixInverse));
        // unknown comparative base counts against the score
        let d = top(&Lexicon::default(), "Foster than foster.").unwrap();
        assert!(d.score() < 1.0);
    }

    #[test]
    fn terminal_punctuation_is_interchangeable() {
        let lex = lex("true\tA\t\tfalse\nfalse\tA\t\t\n");
        let d = top(&lex, "This is so true, that it looks false!").unwrap();
        assert_eq!((d.class_id.as_str(), d.score()), ("4", 1.0));
        assert!(match_schema(
            &lex,
            &schema("4"),
            &normalize("This is so true, that it looks false")
        )
        .is_none());
    }

    #[test]
    fn agentive_plural_inverse() {
        let lex = lex("hate\tV\t\t\nenvy\tV\t\t\n");
        let d = top(&lex, "I envy the enviers.").unwrap();
        assert_eq!(d.class_id.as_str(), "30");
        assert_eq!(d.relations[0].evidence, Some(Evidence::SuffixInverse));
        assert_eq!(d.score(), 1.0);
    }

    #[test]
    fn gerund_negation() {
        let d = top(&Lexicon::default(), "Let's strike by not striking.").unwrap();
        assert_eq!((d.class_id.as_str(), d.score()), ("14", 1.0));
        let lex = lex("accept\tV\t\treject\nreject\tV\t\t\n");
        let d = top(&lex, "Let's accept by rejecting.").unwrap();
        assert_eq!(d.relations[0].evidence, Some(Evidence::SuffixInverse));
    }

    #[test]
    fn part_of_speech_separates_variants() {
        let lex = lex("time\tN\t\t\nclean\tA\t\t\n");
        assert_eq!(
            top(&lex, "Time is not enough time.")
                .unwrap()
                .class_id
                .as_str(),
            "22n"
        );
        assert_eq!(
            top(&lex, "Clean is not enough clean.")
                .unwrap()
                .class_id
                .as_str(),
            "22a"
        );
    }

    #[test]
    fn articles_and_alternations() {
        let lex = lex("teacher\tN\tprofessor\t\nprofessor\tN\t\t\nproblem\tN\texercise\t\nexercise\tN\t\t\nsilence\tN\t\tnoise\nnoise\tN\t\t\n");
        assert_eq!(
            top(&lex, "This is not a teacher, this is a professor.")
                .unwrap()
                .score(),
            1.0
        );
        assert_eq!(
            top(&lex, "This is not a problem, this is an exercise.")
                .unwrap()
                .score(),
            1.0
        );
        let d = top(&lex, "Silence within the noise.").unwrap();
        assert_eq!((d.class_id.as_str(), d.score()), ("11a", 1.0));
    }

    #[test]
    fn span_cap() {
        let s = Schema::from_dsl("x", SchemaKind::Paradox, "{N} ok.").unwrap();
        assert!(match_schema(&Lexicon::default(), &s, &normalize("a b c ok.")).is_some());
        assert!(match_schema(&Lexicon::default(), &s, &normalize("a b c d ok.")).is_none());
        let d = match_schema(&Lexicon::default(), &s, &normalize("hidden enemy ok.")).unwrap();
        assert_eq!(d.binding.groups[&0], "hidden-enemy");
        assert_eq!(d.binding.slots[0], "hidden enemy");
    }

    #[test]
    fn skeleton_only_schema_scores_one() {
        let s = Schema::from_dsl("x", SchemaKind::Paradox, "Just {N}.").unwrap();
        let d = match_schema(&Lexicon::default(), &s, &normalize("Just words.")).unwrap();
        assert_eq!((d.relations_checked(), d.score()), (0, 1.0));
    }

    #[test]
    fn scan_edges() {
        let lex = lex("hell\tN\t\t\n");
        let reg = builtin_registry();
        let empty: [&str; 0] = [];
        let scan = scan_corpus(&lex, &reg, &empty, DEFAULT_THRESHOLD);
        assert!(scan.detections.is_empty());
        assert_eq!(scan.counts.len(), 36);
        assert!(scan.counts.iter().all(|(_, n)| *n == 0));

        let lines = ["Hell without hell.", "nothing here", "Hell without hell."];
        let scan = scan_corpus(&lex, &reg, &lines, DEFAULT_THRESHOLD);
        let idx: Vec<usize> = scan.detections.iter().map(|d| d.sentence_index).collect();
        assert_eq!(idx, [0, 2]);
        assert_eq!(
            scan.counts
                .iter()
                .find(|(id, _)| id.as_str() == "10")
                .unwrap()
                .1,
            2
        );
        assert_eq!(
            scan,
            scan_corpus_with(Execution::Sequential, &lex, &reg, &lines, DEFAULT_THRESHOLD)
        );
    }
}
