use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../.."))
}

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_paradox"))
        .current_dir(root())
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Field order as written, not as a parsed map would report it.
fn assert_key_order(line: &str, keys: &[&str]) {
    let at: Vec<usize> = keys
        .iter()
        .map(|k| line.find(&format!("\"{k}\":")).unwrap())
        .collect();
    assert!(at.windows(2).all(|w| w[0] < w[1]), "{line}");
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("paradox-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn generate_pinned_slot() {
    let o = run(
        &[
            "generate",
            "--lexicon",
            "data/demo.lex",
            "--class",
            "1",
            "--slot",
            "0=possible",
            "--seed",
            "7",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["class"], "1");
    assert_eq!(recs[0]["sentence"], "All is possible, the impossible too.");
    assert_eq!(recs[0]["binding"]["groups"]["0"], "possible");
    assert_key_order(&stdout(&o), &["class", "sentence", "seed", "binding"]);
}

#[test]
fn generate_unsatisfiable_exits_2() {
    let empty = temp_file("empty.lex", "");
    let o = run(
        &[
            "generate",
            "--lexicon",
            empty.to_str().unwrap(),
            "--class",
            "1",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn generate_is_reproducible() {
    let args = [
        "generate",
        "--lexicon",
        "data/demo.lex",
        "--count",
        "3",
        "--seed",
        "11",
    ];
    let a = run(&args, "");
    let b = run(&args, "");
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(records(&a).len(), 36 * 3);
}

#[test]
fn generate_text_format_and_count() {
    let o = run(
        &[
            "generate",
            "--lexicon",
            "data/demo.lex",
            "--class",
            "2",
            "--count",
            "4",
            "--format",
            "text",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 12);
    assert!(text
        .lines()
        .all(|l| l.ends_with('.') && !l.starts_with('{')));
}

#[test]
fn generate_errors_exit_1() {
    let o = run(
        &["generate", "--lexicon", "data/demo.lex", "--class", "99"],
        "",
    );
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["generate", "--lexicon", "missing.lex"], "");
    assert_eq!(o.status.code(), Some(1));
    let bad = temp_file("bad.lex", "possible\tA\t\timpossible\n");
    let o = run(&["generate", "--lexicon", bad.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("impossible"));
    let o = run(
        &[
            "generate",
            "--lexicon",
            "data/demo.lex",
            "--slot",
            "nonsense",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn rejected_override_is_a_skip() {
    let o = run(
        &[
            "generate",
            "--lexicon",
            "data/demo.lex",
            "--class",
            "1",
            "--slot",
            "0=unknownword",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknownword"));
}

#[test]
fn detect_comparative() {
    let o = run(
        &["detect", "--lexicon", "data/golden.lex"],
        "Prettier than pretty.\n",
    );
    assert_eq!(o.status.code(), Some(0));
    let recs = records(&o);
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["line"], 1);
    assert_eq!(recs[0]["class"], "23");
    assert_eq!(recs[0]["score"], 1.0);
    assert_eq!(recs[0]["evidence"][0]["evidence"], "SuffixInverse");
    assert_key_order(
        &stdout(&o),
        &["line", "class", "score", "evidence", "binding"],
    );
}

#[test]
fn detect_empty_input() {
    let o = run(&["detect", "--lexicon", "data/demo.lex"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
}

#[test]
fn detect_threshold_and_all() {
    let input = "The shadow of the light.\nMore real than real.\nnothing to see here\n";
    let o = run(&["detect", "--lexicon", "data/demo.lex"], input);
    // demo.lex does not know shadow/light
    let lines: Vec<u64> = records(&o)
        .iter()
        .map(|r| r["line"].as_u64().unwrap())
        .collect();
    assert_eq!(lines, [2]);
    let o = run(
        &["detect", "--lexicon", "data/demo.lex", "--min-score", "0"],
        input,
    );
    assert_eq!(records(&o).len(), 2);
    let o = run(&["detect", "--lexicon", "data/demo.lex", "--all"], input);
    let classes: Vec<String> = records(&o)
        .iter()
        .map(|r| r["class"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(classes, ["23", "27"]);
}

#[test]
fn detect_stats_match_corpus_labels() {
    let corpus = std::fs::read_to_string(root().join("data/golden_corpus.tsv")).unwrap();
    let conforming: Vec<(&str, &str)> = corpus
        .lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.splitn(3, '\t').collect();
            (f.len() == 3 && f[1] == "Y").then(|| (f[0], f[2]))
        })
        .collect();
    let input: String = conforming.iter().map(|(_, s)| format!("{s}\n")).collect();
    let o = run(
        &[
            "detect",
            "--lexicon",
            "data/golden.lex",
            "--stats",
            "--format",
            "text",
        ],
        &input,
    );
    assert_eq!(o.status.code(), Some(0));

    let stats = String::from_utf8(o.stderr).unwrap();
    let mut got = std::collections::BTreeMap::new();
    for row in stats.lines() {
        let (id, n) = row.split_once('\t').unwrap();
        // 27 shares its pattern with 23 and loses the tie
        let id = if id == "27" { "23" } else { id };
        *got.entry(id.to_string()).or_insert(0usize) += n.parse::<usize>().unwrap();
    }
    got.retain(|_, n| *n > 0);
    let mut want = std::collections::BTreeMap::new();
    for (label, _) in &conforming {
        let label = if *label == "27" { "23" } else { label };
        *want.entry(label.to_string()).or_insert(0usize) += 1;
    }
    assert_eq!(got, want);
    assert_eq!(stats.lines().count(), 36);
}

#[test]
fn classes_listing() {
    let o = run(&["classes"], "");
    assert_eq!(stdout(&o).lines().count(), 36);
    assert_eq!(
        stdout(&o),
        std::fs::read_to_string(root().join("data/classes.tsv")).unwrap()
    );
    let o = run(&["classes", "--id", "4"], "");
    assert_eq!(
        stdout(&o),
        "4\tparadox\tThis is so {A}, that it looks {~A}.\n"
    );
    let o = run(&["classes", "--id", "31"], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn custom_catalog() {
    let cat = temp_file("mini.tsv", "x1\tparadox\tSo {A}, so {~A}.\n");
    let o = run(&["classes", "--catalog", cat.to_str().unwrap()], "");
    assert_eq!(stdout(&o), "x1\tparadox\tSo {A}, so {~A}.\n");
    let o = run(
        &[
            "detect",
            "--lexicon",
            "data/demo.lex",
            "--catalog",
            cat.to_str().unwrap(),
        ],
        "So hot, so cold.\n",
    );
    assert_eq!(records(&o)[0]["class"], "x1");
    let broken = temp_file("broken.tsv", "x1\tparadox\tNo slots here.\n");
    let o = run(&["classes", "--catalog", broken.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn lexicon_validate() {
    let o = run(&["lexicon", "validate", "data/demo.lex"], "");
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["lexicon", "validate", "data/golden.lex"], "");
    assert_eq!(o.status.code(), Some(0));
    let bad = temp_file("defects.lex", "good\tA\t\tbad\ngood\tA\t\t\nodd line\n");
    let o = run(&["lexicon", "validate", bad.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(1));
    let report = stdout(&o);
    assert!(report.contains("3 defect(s)"), "{report}");
}

#[test]
fn usage_errors_exit_1_help_exits_0() {
    assert_eq!(run(&["bogus"], "").status.code(), Some(1));
    assert_eq!(run(&["generate"], "").status.code(), Some(1));
    assert_eq!(run(&["--help"], "").status.code(), Some(0));
}
