use std::fs;
use std::path::Path;
use std::process::Command;

use plangen_cli::{RunManifest, MANIFEST_FILE};

fn plangen(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_plangen"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) {
    let out = plangen(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn unknown_subcommand_and_flag_exit_with_two() {
    assert_eq!(plangen(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(plangen(&["kg", "gen", "--colour", "red"]).status.code(), Some(2));
    assert_eq!(plangen(&["--help"]).status.code(), Some(0));
}

#[test]
fn kg_gen_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["kg", "gen", "--seed", "7", "--out", p(&a)]);
    ok(&["kg", "gen", "--seed", "7", "--out", p(&b)]);
    let ma = RunManifest::load(&a.join(MANIFEST_FILE)).unwrap();
    let mb = RunManifest::load(&b.join(MANIFEST_FILE)).unwrap();
    assert_eq!(ma.outputs, mb.outputs);
    assert_eq!(ma.reproducible_part(), mb.reproducible_part());
    assert_eq!(fs::read(a.join("ground_truth.tsv")).unwrap(), fs::read(b.join("ground_truth.tsv")).unwrap());
}

#[test]
fn pipeline_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (kg, split, model, world, bench) = (d.join("kg"), d.join("split"), d.join("model"), d.join("world"), d.join("bench"));
    ok(&["kg", "gen", "--seed", "3", "--out", p(&kg)]);
    let gt = kg.join("ground_truth.tsv");
    let cat = kg.join("catalog.tsv");
    ok(&["kg", "split", "--gt", p(&gt), "--catalog", p(&cat), "--seed", "3", "--out", p(&split)]);
    let data = split.join("dataset.tsv");
    ok(&[
        "kge", "train", "--data", p(&data), "--catalog", p(&cat), "--seed", "3", "--epochs", "10", "--dim", "20",
        "--out", p(&model),
    ]);
    let ckpt = model.join("embeddings.ckpt");
    assert!(model.join("train_report.json").exists());
    ok(&[
        "kge", "eval", "--data", p(&data), "--catalog", p(&cat), "--checkpoint", p(&ckpt), "--out", p(&model),
    ]);
    let metrics: serde_json::Value = serde_json::from_str(&fs::read_to_string(model.join("metrics.json")).unwrap()).unwrap();
    assert!(metrics.to_string().contains("mrr"));
    ok(&["world", "gen", "--gt", p(&gt), "--catalog", p(&cat), "--seed", "3", "--perturbation", "O", "--out", p(&world)]);
    for f in ["demo.world", "env.world", "plan.txt", "solution.txt"] {
        assert!(world.join(f).exists(), "{f}");
    }
    ok(&[
        "bench", "run", "--gt", p(&gt), "--catalog", p(&cat), "--data", p(&data), "--checkpoint", p(&ckpt),
        "--source", "kge", "--demos", "2", "--envs", "5", "--seed", "3", "--out", p(&bench),
    ]);
    let trials = fs::read_to_string(bench.join("trials.csv")).unwrap();
    assert_eq!(trials.lines().count(), 1 + 2, "{trials}");
    assert_eq!(fs::read_to_string(bench.join("episodes.jsonl")).unwrap().lines().count(), 10);
    let m = RunManifest::load(&bench.join(MANIFEST_FILE)).unwrap();
    assert!(m.inputs.len() >= 3);
    assert!(m.outputs.contains_key("summary.csv"));
}

#[test]
fn config_file_supplies_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "[kg.gen]\nseed = 11\n").unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    ok(&["kg", "gen", "--config", p(&cfg), "--out", p(&a)]);
    ok(&["kg", "gen", "--seed", "11", "--out", p(&b)]);
    assert_eq!(fs::read(a.join("ground_truth.tsv")).unwrap(), fs::read(b.join("ground_truth.tsv")).unwrap());
}
