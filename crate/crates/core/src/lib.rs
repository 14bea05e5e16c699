//! Bidirectional template grammar for linguistic paradoxes and tautologies.
//!
//! Schemas such as `All is {A}, the {~A} too.` are filled from a
//! synonym/antonym [`Lexicon`] to generate sentences, and matched against
//! free text to detect and classify instances.
//!
//! ```
//! use paradox_grammar::{builtin_registry, classify, generate, parse_lexicon, Overrides};
//!
//! let lex = parse_lexicon("possible\tA\t\timpossible\nimpossible\tA\t\t\n").unwrap().lexicon;
//! let registry = builtin_registry();
//! let class1 = &registry[0];
//! let s = generate(&lex, class1, 7, &Overrides::new()).unwrap();
//! let top = &classify(&lex, &registry, &s.surface)[0];
//! assert_eq!(top.class_id, class1.class_id);
//! assert_eq!(top.score(), 1.0);
//! ```

pub mod detector;
pub mod exec;
pub mod generator;
pub mod lexicon;
pub mod morphology;
pub mod rng;
pub mod schema;

pub use detector::{
    classify, match_schema, normalize, scan_corpus, scan_corpus_with, Detection, Detector,
    Evidence, RelationCheck, Scan, DEFAULT_THRESHOLD, MAX_SLOT_SPAN,
};
pub use exec::Execution;
pub use generator::{
    generate, generate_batch, generate_batch_with, Batch, Binding, GenerateError,
    GeneratedSentence, Overrides, Skip,
};
pub use lexicon::{
    parse_lexicon, Defect, LexEntry, Lexicon, LoadedLexicon, PartOfSpeech, Repair, ValidationReport,
};
pub use morphology::{
    agentive, gerund, indefinite_article, negated_infinitive, pluralize, Derivation, MorphError,
};
pub use schema::{
    builtin_registry, load_catalog, parse_template, render_catalog, render_template,
    select_classes, CatalogError, ClassId, ParseError, Relation, Schema, SchemaKind, SlotSpec,
    Token,
};
