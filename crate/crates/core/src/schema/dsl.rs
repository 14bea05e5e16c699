//! Template DSL.
//!
//! ```text
//! template := ( literal | slot )+
//! slot     := "{" ["~"] symbol prime* [":" flag ("+" flag)*] ["#" digit] "}"
//! symbol   := "N" | "V" | "A"
//! prime    := "'"
//! flag     := "agent" | "ger" | "pl" | "neginf"
//! ```
//!
//! Slots without `#g` get an implicit group per symbol, numbered by the
//! order in which symbols first appear in the template. Rendering writes
//! `#g` only where it differs from that implicit number, so
//! `parse_template(render_template(t)) == t`.

use std::collections::BTreeMap;

use super::{Relation, SlotSpec, Token};
use crate::lexicon::PartOfSpeech;
use crate::morphology::Derivation;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("unknown slot symbol {symbol:?} at byte {at}")]
    UnknownSlotSymbol { symbol: String, at: usize },
    #[error("unbalanced brace at byte {at}")]
    UnbalancedBraces { at: usize },
    #[error("slots without a literal separator at byte {at}")]
    AdjacentSlots { at: usize },
    #[error("bad derivation flag {flag:?} at byte {at}")]
    BadDerivationFlag { flag: String, at: usize },
    #[error("malformed slot {text:?} at byte {at}")]
    MalformedSlot { text: String, at: usize },
    #[error("template has no slots")]
    NoSlots,
    #[error("group {group} has no base slot")]
    MissingBase { group: u8 },
    #[error("group {group} mixes parts of speech")]
    GroupSymbolMismatch { group: u8 },
}

/// Parses DSL text into a token sequence.
pub fn parse_template(dsl: &str) -> Result<Vec<Token>, ParseError> {
    // (spec, explicit group)
    let mut raw: Vec<Result<String, (SlotSpec, Option<u8>)>> = Vec::new();
    let mut literal = String::new();
    let mut rest = dsl;
    let mut offset = 0;

    while let Some(c) = rest.chars().next() {
        match c {
            '{' => {
                let close = rest
                    .find('}')
                    .ok_or(ParseError::UnbalancedBraces { at: offset })?;
                let body = &rest[1..close];
                if let Some(i) = body.find('{') {
                    return Err(ParseError::UnbalancedBraces { at: offset + 1 + i });
                }
                if !literal.is_empty() {
                    raw.push(Ok(std::mem::take(&mut literal)));
                } else if matches!(raw.last(), Some(Err(_))) {
                    return Err(ParseError::AdjacentSlots { at: offset });
                }
                raw.push(Err(parse_slot(body, offset)?));
                offset += close + 1;
                rest = &rest[close + 1..];
            }
            '}' => return Err(ParseError::UnbalancedBraces { at: offset }),
            _ => {
                literal.push(c);
                offset += c.len_utf8();
                rest = &rest[c.len_utf8()..];
            }
        }
    }
    if !literal.is_empty() {
        raw.push(Ok(literal));
    }

    let implicit = implicit_groups(
        raw.iter()
            .filter_map(|r| r.as_ref().err().map(|(s, _)| s.symbol)),
    );
    let tokens: Vec<Token> = raw
        .into_iter()
        .map(|r| match r {
            Ok(text) => Token::Literal(text),
            Err((mut spec, explicit)) => {
                spec.group = explicit.unwrap_or(implicit[&spec.symbol]);
                Token::Slot(spec)
            }
        })
        .collect();
    validate_groups(&tokens)?;
    Ok(tokens)
}

fn implicit_groups(symbols: impl Iterator<Item = PartOfSpeech>) -> BTreeMap<PartOfSpeech, u8> {
    let mut map = BTreeMap::new();
    for s in symbols {
        let next = map.len() as u8;
        map.entry(s).or_insert(next);
    }
    map
}

fn validate_groups(tokens: &[Token]) -> Result<(), ParseError> {
    let mut groups: BTreeMap<u8, (PartOfSpeech, bool)> = BTreeMap::new();
    for t in tokens {
        if let Token::Slot(s) = t {
            let entry = groups.entry(s.group).or_insert((s.symbol, false));
            if entry.0 != s.symbol {
                return Err(ParseError::GroupSymbolMismatch { group: s.group });
            }
            entry.1 |= s.is_base_form();
        }
    }
    if groups.is_empty() {
        return Err(ParseError::NoSlots);
    }
    match groups.iter().find(|(_, (_, has_base))| !has_base) {
        Some((g, _)) => Err(ParseError::MissingBase { group: *g }),
        None => Ok(()),
    }
}

fn parse_slot(body: &str, at: usize) -> Result<(SlotSpec, Option<u8>), ParseError> {
    let malformed = || ParseError::MalformedSlot {
        text: body.to_string(),
        at,
    };
    let (body, group) = match body.split_once('#') {
        Some((head, g)) => {
            let mut digits = g.chars();
            match (digits.next().and_then(|d| d.to_digit(10)), digits.next()) {
                (Some(d), None) => (head, Some(d as u8)),
                _ => return Err(malformed()),
            }
        }
        None => (body, None),
    };
    let (head, flags) = match body.split_once(':') {
        Some((h, f)) => (h, Some(f)),
        None => (body, None),
    };

    let (antonym, head) = match head.strip_prefix('~') {
        Some(h) => (true, h),
        None => (false, head),
    };
    let mut chars = head.chars();
    let symbol = chars
        .next()
        .and_then(PartOfSpeech::from_code)
        .ok_or_else(|| ParseError::UnknownSlotSymbol {
            symbol: head.to_string(),
            at,
        })?;
    let primes = chars.as_str();
    if !primes.chars().all(|c| c == '\'') {
        return Err(ParseError::UnknownSlotSymbol {
            symbol: head.to_string(),
            at,
        });
    }
    let prime = u8::try_from(primes.len()).map_err(|_| malformed())?;
    let relation = if antonym {
        Relation::Antonym
    } else if prime > 0 {
        Relation::Synonym
    } else {
        Relation::Identity
    };

    let mut derivation = Vec::new();
    if let Some(flags) = flags {
        for flag in flags.split('+') {
            let bad = || ParseError::BadDerivationFlag {
                flag: flag.to_string(),
                at,
            };
            let d = Derivation::from_flag(flag).ok_or_else(bad)?;
            if derivation.contains(&d) || !d.applies_to(symbol, &derivation) {
                return Err(bad());
            }
            if d == Derivation::NegatedInfinitive && relation != Relation::Antonym {
                return Err(bad());
            }
            derivation.push(d);
        }
    }

    Ok((
        SlotSpec {
            symbol,
            relation,
            prime,
            derivation,
            group: 0,
        },
        group,
    ))
}

/// Renders tokens back to DSL text.
pub fn render_template(tokens: &[Token]) -> String {
    let implicit = implicit_groups(tokens.iter().filter_map(|t| match t {
        Token::Slot(s) => Some(s.symbol),
        Token::Literal(_) => None,
    }));
    let mut out = String::new();
    for t in tokens {
        match t {
            Token::Literal(l) => out.push_str(l),
            Token::Slot(s) => {
                out.push('{');
                if s.relation == Relation::Antonym {
                    out.push('~');
                }
                out.push(s.symbol.code());
                out.extend(std::iter::repeat_n('\'', s.prime as usize));
                if !s.derivation.is_empty() {
                    let flags: Vec<_> = s.derivation.iter().map(|d| d.flag()).collect();
                    out.push(':');
                    out.push_str(&flags.join("+"));
                }
                if implicit.get(&s.symbol) != Some(&s.group) {
                    out.push_str(&format!("#{}", s.group));
                }
                out.push('}');
            }
        }
    }
    out
}
