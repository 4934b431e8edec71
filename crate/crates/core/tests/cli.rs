//! The `volret` binary driven through its subcommands.

mod common;

use std::path::Path;
use std::process::{Command, Output};

fn volret(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_volret"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn with_series() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = volret(
        &["surrogate", "--kind", "long-memory", "--H", "0.8", "--n", "65536", "--seed", "3", "--out", "lm.txt"],
        dir.path(),
    );
    assert!(o.status.success());
    dir
}

#[test]
fn surrogate_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = stdout(&volret(&["surrogate", "--kind", "fgn", "--n", "1024", "--seed", "7"], dir.path()));
    let b = stdout(&volret(&["surrogate", "--kind", "fgn", "--n", "1024", "--seed", "7"], dir.path()));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 1024);
    // invalid parameters are argument errors
    let o = volret(&["surrogate", "--kind", "fgn", "--n", "1000"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn preprocess_and_intervals() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bars.csv"), common::synthetic_minute_bars(5, 240, 1)).unwrap();
    let text = stdout(&volret(&["preprocess", "--prices", "bars.csv"], dir.path()));
    let rows: Vec<&str> = text.lines().collect();
    assert!(rows.len() > 1000);
    assert!(rows.iter().skip(1).all(|r| r.split('\t').count() == 2));

    let text = stdout(&volret(&["intervals", "--prices", "bars.csv", "--q", "1,2"], dir.path()));
    assert_eq!(text.lines().next(), Some("q\ttau"));
    assert!(text.lines().skip(1).all(|r| r.starts_with("1\t") || r.starts_with("2\t")));
}

#[test]
fn analysis_subcommands() {
    let dir = with_series();
    let p = dir.path();
    let t = stdout(&volret(&["scaling-test", "--series", "lm.txt"], p));
    assert_eq!(t.lines().next(), Some("symbol,KS,CV,scaling"));
    assert_eq!(t.lines().count(), 2);

    let t = stdout(&volret(&["fit", "--series", "lm.txt", "--curve", "curve.tsv"], p));
    let fit: serde_json::Value = serde_json::from_str(&t).unwrap();
    assert!(fit["gamma"].as_f64().unwrap() > 0.0);
    assert!(std::fs::read_to_string(p.join("curve.tsv")).unwrap().lines().count() > 5);

    let t = stdout(&volret(&["gof", "--series", "lm.txt", "--replicas", "100"], p));
    assert_eq!(t.lines().count(), 3);

    let t = stdout(&volret(&["dfa", "--series", "lm.txt", "--q", "2"], p));
    let json = t.lines().last().unwrap().strip_prefix("# ").unwrap();
    let record: serde_json::Value = serde_json::from_str(json).unwrap();
    for key in ["H_small", "H_large", "stderr_small", "stderr_large"] {
        assert!(record[key].is_f64(), "{key}");
    }

    let o = volret(&["memory", "--series", "lm.txt", "--out", "mem"], p);
    assert!(o.status.success());
    for f in ["conditional_pdf.tsv", "conditional_mean.tsv", "clusters.tsv"] {
        assert!(p.join("mem").join(f).exists(), "{f}");
    }
}

#[test]
fn report_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("bad.toml"), "thresholds = [3.0, 2.0]\n").unwrap();
    assert_eq!(volret(&["report", "--config", "bad.toml"], p).status.code(), Some(2));

    std::fs::write(
        p.join("partial.toml"),
        "bootstrap_replicas = 100\n[[inputs]]\nsymbol = \"X\"\npath = \"missing.csv\"\n",
    )
    .unwrap();
    let o = volret(&["report", "--config", "partial.toml", "--out", "out"], p);
    assert_eq!(o.status.code(), Some(1));
    assert!(p.join("out/report.json").exists());

    std::fs::write(
        p.join("good.toml"),
        "bootstrap_replicas = 100\n[[inputs]]\nsymbol = \"LM\"\nsurrogate = { kind = \"long-memory\", hurst = 0.8, nu = 3.5, n = 65536, seed = 1 }\n",
    )
    .unwrap();
    let t = stdout(&volret(&["report", "--config", "good.toml", "--seed", "5"], p));
    assert!(t.starts_with("symbol,KS,CV,scaling\nLM,"));
    assert!(t.contains("symbol,q,p_KS,p_KSW\nLM,2,"));
}
