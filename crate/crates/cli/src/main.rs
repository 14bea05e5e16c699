use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use paradox_grammar::{
    builtin_registry, generate_batch, load_catalog, parse_lexicon, render_catalog, select_classes,
    Binding, Detection, Detector, Execution, Lexicon, Overrides, RelationCheck, Schema,
    DEFAULT_THRESHOLD,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "paradox",
    version,
    about = "Generate and detect linguistic paradoxes and tautologies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fill class templates from a lexicon
    Generate(GenerateArgs),
    /// Classify sentences, one per line
    Detect(DetectArgs),
    /// List the class registry
    Classes(ClassesArgs),
    /// Lexicon utilities
    #[command(subcommand)]
    Lexicon(LexiconCommand),
}

#[derive(Subcommand)]
enum LexiconCommand {
    /// Check a lexicon file and print its defects
    Validate { path: PathBuf },
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Jsonl,
    Text,
}

#[derive(Args)]
struct RegistryArgs {
    /// Load classes from a `classId<TAB>kind<TAB>template` file instead of the built-in registry
    #[arg(long, value_name = "PATH")]
    catalog: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_name = "PATH")]
    lexicon: PathBuf,
    /// Class id, bare class number, or `all`
    #[arg(long, default_value = "all")]
    class: String,
    /// Sentences per class
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Pin a group's base word, e.g. `0=possible`
    #[arg(long = "slot", value_name = "GROUP=WORD", value_parser = parse_slot)]
    slots: Vec<(u8, String)>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    #[command(flatten)]
    registry: RegistryArgs,
}

#[derive(Args)]
struct DetectArgs {
    #[arg(long, value_name = "PATH")]
    lexicon: PathBuf,
    /// Defaults to standard input
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    min_score: f64,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Print per-class counts to standard error
    #[arg(long)]
    stats: bool,
    /// Report every matching class, not just the best
    #[arg(long)]
    all: bool,
    #[command(flatten)]
    registry: RegistryArgs,
}

#[derive(Args)]
struct ClassesArgs {
    /// Show a single class
    #[arg(long)]
    id: Option<String>,
    #[command(flatten)]
    registry: RegistryArgs,
}

fn parse_slot(s: &str) -> Result<(u8, String), String> {
    let (group, word) = s.split_once('=').ok_or("expected GROUP=WORD")?;
    let group = group
        .trim()
        .parse()
        .map_err(|_| format!("bad group {group:?}"))?;
    let word = word.trim().to_lowercase();
    if word.is_empty() {
        return Err("empty word".into());
    }
    Ok((group, word))
}

#[derive(Serialize)]
struct GenerateRecord<'a> {
    class: &'a str,
    sentence: &'a str,
    seed: u64,
    binding: &'a Binding,
}

#[derive(Serialize)]
struct DetectRecord<'a> {
    line: usize,
    class: &'a str,
    score: f64,
    evidence: &'a [RelationCheck],
    binding: &'a Binding,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Classes(args) => cmd_classes(args),
        Command::Lexicon(LexiconCommand::Validate { path }) => cmd_validate(&path),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_lexicon(path: &Path) -> anyhow::Result<Lexicon> {
    parse_lexicon(&read(path)?)
        .map(|loaded| loaded.lexicon)
        .map_err(|report| anyhow!("{} is invalid:\n{report}", path.display()))
}

fn load_registry(args: &RegistryArgs) -> anyhow::Result<Vec<Schema>> {
    match &args.catalog {
        Some(path) => {
            load_catalog(&read(path)?).with_context(|| format!("bad catalog {}", path.display()))
        }
        None => Ok(builtin_registry()),
    }
}

fn cmd_generate(args: GenerateArgs) -> anyhow::Result<ExitCode> {
    let lex = load_lexicon(&args.lexicon)?;
    let registry = load_registry(&args.registry)?;
    let schemas = select_classes(&registry, &args.class);
    if schemas.is_empty() {
        bail!("unknown class {:?}", args.class);
    }
    let overrides: Overrides = args.slots.into_iter().collect();
    let batch = generate_batch(&lex, &schemas, args.seed, args.count, &overrides);

    let mut out = io::stdout().lock();
    for s in &batch.sentences {
        match args.format {
            Format::Jsonl => {
                let rec = GenerateRecord {
                    class: s.class_id.as_str(),
                    sentence: &s.surface,
                    seed: s.seed,
                    binding: &s.binding,
                };
                serde_json::to_writer(&mut out, &rec)?;
                writeln!(out)?;
            }
            Format::Text => writeln!(out, "{}", s.surface)?,
        }
    }
    out.flush()?;
    for skip in &batch.skips {
        eprintln!(
            "skipped class {} (item {}): {}",
            skip.class_id, skip.index, skip.error
        );
    }
    if batch.sentences.is_empty() && args.count > 0 {
        eprintln!("no sentence could be generated");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_detect(args: DetectArgs) -> anyhow::Result<ExitCode> {
    let lex = load_lexicon(&args.lexicon)?;
    let registry = load_registry(&args.registry)?;
    let text = match &args.input {
        Some(path) => read(path)?,
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .context("cannot read standard input")?;
            buf
        }
    };
    let lines: Vec<&str> = text.lines().collect();
    let detector = Detector::new(&lex, &registry);

    let detections: Vec<Detection> = if args.all {
        lines
            .iter()
            .enumerate()
            .flat_map(|(i, line)| {
                detector
                    .classify(line)
                    .into_iter()
                    .filter(|d| d.score() >= args.min_score)
                    .map(move |mut d| {
                        d.sentence_index = i;
                        d
                    })
            })
            .collect()
    } else {
        detector
            .scan(&lines, args.min_score, Execution::default())
            .detections
    };

    let mut out = io::stdout().lock();
    for d in &detections {
        match args.format {
            Format::Jsonl => {
                let rec = DetectRecord {
                    line: d.sentence_index + 1,
                    class: d.class_id.as_str(),
                    score: d.score(),
                    evidence: &d.relations,
                    binding: &d.binding,
                };
                serde_json::to_writer(&mut out, &rec)?;
                writeln!(out)?;
            }
            Format::Text => writeln!(
                out,
                "{}\t{}\t{:.3}\t{}",
                d.sentence_index + 1,
                d.class_id,
                d.score(),
                lines[d.sentence_index]
            )?,
        }
    }
    out.flush()?;

    if args.stats {
        let mut err = io::stderr().lock();
        for schema in &registry {
            let n = detections
                .iter()
                .filter(|d| d.class_id == schema.class_id)
                .count();
            writeln!(err, "{}\t{n}", schema.class_id)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_classes(args: ClassesArgs) -> anyhow::Result<ExitCode> {
    let registry = load_registry(&args.registry)?;
    let shown: Vec<Schema> = match &args.id {
        Some(id) => {
            let found: Vec<Schema> = registry
                .iter()
                .filter(|s| s.class_id.as_str() == id)
                .cloned()
                .collect();
            if found.is_empty() {
                bail!("unknown class {id:?}");
            }
            found
        }
        None => registry,
    };
    let mut out = io::stdout().lock();
    out.write_all(render_catalog(&shown).as_bytes())?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(path: &Path) -> anyhow::Result<ExitCode> {
    match parse_lexicon(&read(path)?) {
        Ok(loaded) => {
            for r in &loaded.repairs {
                println!("{r}");
            }
            println!(
                "{}: {} entries, no defects",
                path.display(),
                loaded.lexicon.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Err(report) => {
            print!("{report}");
            Ok(ExitCode::from(1))
        }
    }
}
