//! End-to-end runs of the `koenigs-shift` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use koenigs_shift::cli::parse_config;
use serde_json::Value;
use tempfile::TempDir;

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(TempDir::new().unwrap())
    }

    fn path(&self) -> &Path {
        self.0.path()
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let path = self.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koenigs-shift")).args(args).output().unwrap()
}

fn run_config(command: &str, config: &Path, extra: &[&str]) -> Output {
    let mut args = vec![command, "--config", config.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

#[test]
fn classify_reports_and_echoes() {
    let dir = Scratch::new();
    let cfg = dir.write("c.json", r#"{"command":"classify","domain":{"type":"graph","family":"xlog","eps":0}}"#);
    let out = run_config("classify", &cfg, &[]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out.stdout);
    assert_eq!(report["result"]["decision"], "InfiniteShift");
    assert_eq!(report["config"]["tol"], 1e-8);
    assert_eq!(report["config"]["jmax"], 100000);
    assert!(report.get("wallTime").is_none());
    assert!(report["toolVersion"].is_string());
    // the echo is itself a valid config describing the same run
    let echo = serde_json::to_vec(&report["config"]).unwrap();
    let original = parse_config(&std::fs::read(&cfg).unwrap()).unwrap();
    assert_eq!(parse_config(&echo).unwrap(), original);
}

#[test]
fn inconclusive_exits_with_two() {
    let dir = Scratch::new();
    let cfg = dir
        .write("c.json", r#"{"command":"classify","domain":{"type":"step","a":[0,1],"b":[1]},"tail":{"type":"none"}}"#);
    let out = run_config("classify", &cfg, &[]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out.stdout)["result"]["decision"], "Inconclusive");
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = Scratch::new();
    let cfg = dir.write("c.json", r#"{"command":"classify","domain":{"type":"halfplane"},"colour":"red"}"#);
    let out = run_config("classify", &cfg, &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = json(&out.stderr);
    assert_eq!(err["error"]["kind"], "ValidationError");
    assert_eq!(err["error"]["key"], "colour");

    let cfg = dir.write("p.json", "{\"command\": \"classify\",\n \"domain\": }");
    let err = json(&run_config("classify", &cfg, &[]).stderr);
    assert_eq!(err["error"]["kind"], "ParseError");
    assert_eq!(err["error"]["line"], 2);

    let cfg = dir.write("m.json", r#"{"command":"eta","domain":{"type":"halfplane"},"radii":{"values":[1,2]}}"#);
    let err = json(&run_config("classify", &cfg, &[]).stderr);
    assert_eq!(err["error"]["key"], "command");

    assert_eq!(run(&["classify"]).status.code(), Some(1));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn csv_tables_and_atomic_output() {
    let dir = Scratch::new();
    let cfg = dir.write(
        "s.json",
        r#"{"command":"speeds","model":{"type":"slitplane"},"t_grid":{"start":1,"end":10000,"n":100}}"#,
    );
    let target = dir.path().join("speeds.csv");
    let out = run_config("speeds", &cfg, &["--format", "csv", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,re,im,v,vO,vT,rho,theta");
    assert_eq!(lines.len(), 101);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
    // no temporary files are left behind
    let leftovers: Vec<_> =
        std::fs::read_dir(dir.path()).unwrap().filter_map(|e| e.ok()).map(|e| e.file_name()).collect();
    assert_eq!(leftovers.len(), 2, "{leftovers:?}");

    let cfg = dir.write("c.json", r#"{"command":"classify","domain":{"type":"halfplane"}}"#);
    assert_eq!(run_config("classify", &cfg, &["--format", "csv"]).status.code(), Some(1));
}

#[test]
fn timing_is_opt_in() {
    let dir = Scratch::new();
    let cfg = dir.write(
        "d.json",
        r#"{"command":"delta","domain":{"type":"step","a":[0,1,2],"b":[1,2]},"point":[0.5,0],"t_grid":{"values":[1,2,4]}}"#,
    );
    let report = json(&run_config("delta", &cfg, &["--timing"]).stdout);
    assert!(report["wallTime"].as_f64().unwrap() >= 0.0);
    assert_eq!(report["result"]["table"]["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn other_commands_run() {
    let dir = Scratch::new();
    let cases = [
        ("series", r#"{"command":"series","domain":{"type":"graph","family":"xlog","eps":1},"jmax":5000}"#),
        ("integral", r#"{"command":"integral","domain":{"type":"graph","family":"xlog","eps":1},"rmax":1000}"#),
        ("eta", r#"{"command":"eta","domain":{"type":"slitplane"},"radii":{"values":[1,10]}}"#),
        (
            "orbit",
            r#"{"command":"orbit","model":{"type":"halfplane"},"point":[0.5,0.5],"t_grid":{"start":0,"end":10,"n":11,"spacing":"linear"}}"#,
        ),
    ];
    for (command, text) in cases {
        let cfg = dir.write(&format!("{command}.json"), text);
        let out = run_config(command, &cfg, &[]);
        assert_eq!(out.status.code(), Some(0), "{command}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(json(&out.stdout)["command"], command);
    }
    let report = json(&run_config("integral", &dir.path().join("integral.json"), &[]).stdout);
    // graph domains carry no certified remainder, written as the string "inf"
    assert_eq!(report["result"]["upperTail"], "inf");
}
