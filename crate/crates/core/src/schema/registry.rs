use std::collections::BTreeSet;

use super::{ClassId, ParseError, Schema, SchemaKind};

use SchemaKind::{Paradox, SemiParadox, Tautology};

/// The built-in catalog: one row per pattern line.
///
/// `a(n)` is an article marker resolved against the following word on
/// generation and matching either article on detection. `x/y` in a literal
/// is an alternation; generation uses the first alternative.
const CATALOG: &[(&str, SchemaKind, &str)] = &[
    ("1", Paradox, "All is {A}, the {~A} too."),
    ("2n", Paradox, "{~N} is a better {N}."),
    ("2a", Paradox, "{~A} is a better {A}."),
    ("2v", Paradox, "{~V} is a better {V}."),
    ("3n", Paradox, "Only {N} is truly a(n) {~N}."),
    ("3a", Paradox, "Only {A} is truly a(n) {~A}."),
    ("4", Paradox, "This is so {A}, that it looks {~A}."),
    (
        "5",
        Paradox,
        "There is some {N} which is {A} and {~A} at the same time.",
    ),
    (
        "6",
        Paradox,
        "There is some {N} which {V} and really {~V} at the same time.",
    ),
    ("7", Paradox, "To {V}, even when {~V}."),
    ("8", Paradox, "This {N} is enough {~N}."),
    ("9", Paradox, "{~V} sometimes means to {V}."),
    ("10", Paradox, "{N} without {N}."),
    ("11a", Paradox, "{N} inside/within the {~N}."),
    ("11b", Paradox, "{~N} in the {N}."),
    ("12", Paradox, "The {A} of the {~A}."),
    ("13", Paradox, "{V} what one {~V}."),
    ("14", Paradox, "Let's {V} by {~V:ger}."),
    ("15", Paradox, "{N} of the {~N}."),
    ("16", Paradox, "{~A} is {A}."),
    ("17", Paradox, "A(n) {~N} {N}."),
    ("18", Paradox, "Everything has a(n) {A} and a(n) {~A}."),
    ("19", Paradox, "{V} what {~V}."),
    ("20a", SemiParadox, "{N} of the {N'}."),
    ("20b", SemiParadox, "{N} of the {N'} of the {N''}..."),
    ("21", Tautology, "This is not a(n) {N}, this is a(n) {N'}."),
    ("22n", Tautology, "{N} is not enough {N'}."),
    ("22a", Tautology, "{A} is not enough {A'}."),
    ("23", Tautology, "More {A} than {A'}."),
    ("24", Tautology, "How {A} is a(n) {A'} {N}?"),
    ("25", Tautology, "No {A} is really {A'}."),
    ("26", Tautology, "I would rather prefer {A}, than {A'}."),
    ("27", Tautology, "More {A} than {A'}."),
    ("28", Tautology, "{V} those who {V'} you."),
    ("29", Tautology, "{V}, because {V'}."),
    ("30", Tautology, "I {V} the {V':agent+pl}."),
];

/// All 36 built-in schemas in catalog order.
pub fn builtin_registry() -> Vec<Schema> {
    CATALOG
        .iter()
        .map(|(id, kind, dsl)| Schema::from_dsl(id, *kind, dsl).expect("built-in catalog is valid"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("line {line}: expected classId<TAB>kind<TAB>dsl")]
    Malformed { line: usize },
    #[error("line {line}: unknown kind {kind:?}")]
    UnknownKind { line: usize, kind: String },
    #[error("line {line}: {source}")]
    Template { line: usize, source: ParseError },
    #[error("line {line}: duplicate class id {id}")]
    DuplicateId { line: usize, id: String },
}

/// Loads a `classId<TAB>kind<TAB>dsl` catalog.
pub fn load_catalog(text: &str) -> Result<Vec<Schema>, CatalogError> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        if raw.trim().is_empty() || raw.starts_with('#') {
            continue;
        }
        let mut fields = raw.splitn(3, '\t');
        let (Some(id), Some(kind), Some(dsl)) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(CatalogError::Malformed { line });
        };
        if id.is_empty() {
            return Err(CatalogError::Malformed { line });
        }
        let kind = SchemaKind::parse(kind).ok_or_else(|| CatalogError::UnknownKind {
            line,
            kind: kind.to_string(),
        })?;
        let schema = Schema::from_dsl(id, kind, dsl)
            .map_err(|source| CatalogError::Template { line, source })?;
        if !seen.insert(id.to_string()) {
            return Err(CatalogError::DuplicateId {
                line,
                id: id.to_string(),
            });
        }
        out.push(schema);
    }
    Ok(out)
}

/// Renders schemas as catalog lines.
pub fn render_catalog(schemas: &[Schema]) -> String {
    schemas
        .iter()
        .map(|s| format!("{}\t{}\t{}\n", s.class_id, s.kind, s.dsl()))
        .collect()
}

/// Resolves a class selector: `all`, an exact id, or a bare class number
/// naming every variant (`2` selects `2n`, `2a`, `2v`).
pub fn select_classes<'a>(registry: &'a [Schema], selector: &str) -> Vec<&'a Schema> {
    if selector.eq_ignore_ascii_case("all") {
        return registry.iter().collect();
    }
    let exact: Vec<&Schema> = registry
        .iter()
        .filter(|s| s.class_id.as_str() == selector)
        .collect();
    if !exact.is_empty() || selector.is_empty() || !selector.chars().all(|c| c.is_ascii_digit()) {
        return exact;
    }
    let wanted = ClassId::new(selector).parts().0;
    registry
        .iter()
        .filter(|s| s.class_id.parts().0 == wanted)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::{parse_template, render_template};

    #[test]
    fn thirty_six_unique_schemas() {
        let reg = builtin_registry();
        assert_eq!(reg.len(), 36);
        let ids: BTreeSet<_> = reg.iter().map(|s| s.class_id.clone()).collect();
        assert_eq!(ids.len(), 36);
        let numbers: BTreeSet<u32> = reg.iter().map(|s| s.class_id.parts().0).collect();
        assert_eq!(numbers, (1..=30).collect());
    }

    #[test]
    fn pattern_lines() {
        let reg = builtin_registry();
        let dsl = |id: &str| {
            reg.iter()
                .find(|s| s.class_id.as_str() == id)
                .unwrap()
                .dsl()
        };
        assert_eq!(dsl("1"), "All is {A}, the {~A} too.");
        assert_eq!(dsl("4"), "This is so {A}, that it looks {~A}.");
        assert_eq!(dsl("25"), "No {A} is really {A'}.");
        assert_eq!(dsl("30"), "I {V} the {V':agent+pl}.");
    }

    #[test]
    fn dsl_round_trips_over_registry() {
        for s in builtin_registry() {
            assert_eq!(
                parse_template(&render_template(&s.tokens)).unwrap(),
                s.tokens,
                "{}",
                s.class_id
            );
        }
    }

    #[test]
    fn identical_patterns_are_23_and_27_only() {
        let reg = builtin_registry();
        let mut twins = Vec::new();
        for (i, a) in reg.iter().enumerate() {
            for b in &reg[i + 1..] {
                if a.same_pattern(b) {
                    twins.push((a.class_id.to_string(), b.class_id.to_string()));
                }
            }
        }
        assert_eq!(twins, [("23".to_string(), "27".to_string())]);
    }

    #[test]
    fn catalog_round_trip() {
        let reg = builtin_registry();
        assert_eq!(load_catalog(&render_catalog(&reg)).unwrap(), reg);
    }

    #[test]
    fn catalog_errors() {
        assert_eq!(
            load_catalog("1\tparadox"),
            Err(CatalogError::Malformed { line: 1 })
        );
        assert!(matches!(
            load_catalog("1\tjoke\t{A}."),
            Err(CatalogError::UnknownKind { .. })
        ));
        assert!(matches!(
            load_catalog("1\tparadox\t{A}{A}"),
            Err(CatalogError::Template { .. })
        ));
        assert!(matches!(
            load_catalog("1\tparadox\t{A}.\n1\tparadox\t{N}."),
            Err(CatalogError::DuplicateId { line: 2, .. })
        ));
    }

    #[test]
    fn selectors() {
        let reg = builtin_registry();
        let ids = |sel: &str| -> Vec<String> {
            select_classes(&reg, sel)
                .iter()
                .map(|s| s.class_id.to_string())
                .collect()
        };
        assert_eq!(ids("all").len(), 36);
        assert_eq!(ids("4"), ["4"]);
        assert_eq!(ids("2"), ["2n", "2a", "2v"]);
        assert_eq!(ids("11b"), ["11b"]);
        assert!(ids("31").is_empty());
        assert!(ids("zz").is_empty());
    }
}
