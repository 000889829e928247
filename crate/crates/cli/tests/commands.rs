use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str =
    "[dataset]\nseed = 2\n[dataset.enumeration]\nwidths = [3]\nstride = 3\noffset = 1\n";

fn topobench(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topobench"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = topobench(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn generated() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("small.toml"), SMALL).unwrap();
    ok(
        dir.path(),
        &[
            "--config",
            "small.toml",
            "generate",
            "--out",
            "data/d.jsonl",
        ],
    );
    dir
}

#[test]
fn generate_is_reproducible() {
    let dir = generated();
    let p = dir.path();
    ok(
        p,
        &[
            "--config",
            "small.toml",
            "generate",
            "--out",
            "again.jsonl",
            "--sequential",
        ],
    );
    let a = fs::read(p.join("data/d.jsonl")).unwrap();
    assert_eq!(a, fs::read(p.join("again.jsonl")).unwrap());
    assert_eq!(a.iter().filter(|&&b| b == b'\n').count(), 9 * 16);
    ok(
        p,
        &[
            "--config",
            "small.toml",
            "generate",
            "--out",
            "other.jsonl",
            "--seed",
            "3",
        ],
    );
    assert_ne!(a, fs::read(p.join("other.jsonl")).unwrap());
}

#[test]
fn eval_then_report() {
    let dir = generated();
    let p = dir.path();
    let table = ok(
        p,
        &[
            "eval",
            "--dataset",
            "data/d.jsonl",
            "--out",
            "r.jsonl",
            "--endpoint",
            "mock:echo",
            "--per-stratum",
            "2",
            "--difficulty",
            "easy",
        ],
    );
    let avg = table.lines().find(|l| l.starts_with("average")).unwrap();
    assert!(avg.contains("100.00"), "{avg}");
    assert_eq!(
        fs::read_to_string(p.join("r.jsonl"))
            .unwrap()
            .lines()
            .count(),
        16
    );

    let json: serde_json::Value =
        serde_json::from_str(&ok(p, &["report", "r.jsonl", "--format", "json"])).unwrap();
    assert_eq!(json["rows"].as_array().unwrap().len(), 9);
    assert_eq!(json["rows"][8]["exact_match"], 100.0);
    assert_eq!(
        ok(p, &["report", "r.jsonl", "--format", "records"])
            .lines()
            .count(),
        16
    );
    assert_eq!(ok(p, &["report", "r.jsonl"]), table);
}

#[test]
fn score_completions_file() {
    let dir = generated();
    let p = dir.path();
    let first = fs::read_to_string(p.join("data/d.jsonl"))
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    let rec: serde_json::Value = serde_json::from_str(&first).unwrap();
    let lines = [
        serde_json::json!({"id": rec["id"], "completion": format!("Sure:\n```\n{}\n```", rec["gt_grid"].as_str().unwrap())}),
        serde_json::json!({"id": "s001-full-hard", "completion": "no idea"}),
    ];
    let text: String = lines.iter().map(|l| format!("{l}\n")).collect();
    fs::write(p.join("c.jsonl"), text).unwrap();
    ok(
        p,
        &[
            "score",
            "--dataset",
            "data/d.jsonl",
            "--completions",
            "c.jsonl",
            "--out",
            "s.jsonl",
        ],
    );
    let scored: Vec<serde_json::Value> = fs::read_to_string(p.join("s.jsonl"))
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(scored[0]["metrics"]["exact_match"], true);
    assert_eq!(scored[1]["metrics"]["valid_grid"], false);

    fs::write(
        p.join("bad.jsonl"),
        "{\"id\": \"nope\", \"completion\": \"\"}\n",
    )
    .unwrap();
    assert!(!topobench(
        p,
        &[
            "score",
            "--dataset",
            "data/d.jsonl",
            "--completions",
            "bad.jsonl",
            "--out",
            "x.jsonl"
        ]
    )
    .status
    .success());
    assert!(!p.join("x.jsonl").exists());
}

#[test]
fn render_and_mask() {
    let dir = generated();
    let p = dir.path();
    let prompt = ok(
        p,
        &[
            "render",
            "--dataset",
            "data/d.jsonl",
            "--id",
            "s000-full-easy",
            "--style",
            "physics-neutral",
        ],
    );
    assert!(prompt.contains('V'));
    ok(
        p,
        &[
            "render",
            "--dataset",
            "data/d.jsonl",
            "--out",
            "prompts.jsonl",
            "--shots",
            "3",
        ],
    );
    assert_eq!(
        fs::read_to_string(p.join("prompts.jsonl"))
            .unwrap()
            .lines()
            .count(),
        144
    );

    fs::write(p.join("g.txt"), "L L\n1 0\n0 1\nS S\n").unwrap();
    let masked = ok(
        p,
        &[
            "mask",
            "g.txt",
            "--subject",
            "1_random_row",
            "--difficulty",
            "easy",
        ],
    );
    assert_eq!(masked.matches('V').count(), 2);
}

#[test]
fn bad_inputs_exit_nonzero() {
    let dir = generated();
    let p = dir.path();
    fs::write(p.join("typo.toml"), "[solver]\niteration = 3\n").unwrap();
    let out = topobench(
        p,
        &["--config", "typo.toml", "generate", "--out", "y.jsonl"],
    );
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("iteration"));
    assert!(!topobench(
        p,
        &["render", "--dataset", "data/d.jsonl", "--id", "missing"]
    )
    .status
    .success());
    assert!(!topobench(
        p,
        &[
            "eval",
            "--dataset",
            "data/d.jsonl",
            "--out",
            "z",
            "--endpoint",
            "mock:noise:2"
        ]
    )
    .status
    .success());
}
