use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const BIN: &str = env!("CARGO_BIN_EXE_consensus-linsolve");

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self { dir: TempDir::new().unwrap() };
        ws.write("i2.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n");
        ws.write("b2.txt", "1\n2\n");
        ws.write("k2.txt", "0 1\n");
        ws.write("split.txt", "# vertices 2\n");
        ws.write("dup.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 4\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n");
        ws.write(
            "a4.mtx",
            "%%MatrixMarket matrix array real general\n4 4\n2\n0.5\n0\n1\n-1\n3\n0.2\n0\n0\n1\n2.5\n-0.5\n0.3\n0\n1\n2\n",
        );
        ws.write("b4.txt", "1\n-1\n0.5\n2\n");
        ws.write("c4.txt", "0 1\n1 2\n2 3\n3 0\n");
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) {
        std::fs::write(self.path(name), text).unwrap();
    }

    fn read(&self, name: &str) -> String {
        std::fs::read_to_string(self.path(name)).unwrap()
    }

    fn json(&self, name: &str) -> Value {
        serde_json::from_str(&self.read(name)).unwrap()
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN).current_dir(self.dir.path()).args(args).output().unwrap()
    }
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn solve_args<'a>(matrix: &'a str, rhs: &'a str, graph: &'a str) -> Vec<&'a str> {
    vec!["solve", "--matrix", matrix, "--rhs", rhs, "--graph", graph]
}

#[test]
fn solve_identity_fixture() {
    let ws = Workspace::new();
    let mut args = solve_args("i2.mtx", "b2.txt", "k2.txt");
    args.extend(["--summary", "s.json", "--trace", "t.jsonl"]);
    let out = ws.run(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = ws.json("s.json");
    assert_eq!(summary["converged"], true);
    let x: Vec<f64> = serde_json::from_value(summary["consensus"].clone()).unwrap();
    assert!((x[0] - 1.0).abs() < 1e-6 && (x[1] - 2.0).abs() < 1e-6);
    let printed: Vec<f64> = String::from_utf8(out.stdout).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(printed, x);
    for line in ws.read("t.jsonl").lines() {
        let record: Value = serde_json::from_str(line).unwrap();
        for key in ["step", "t", "cost_v", "spread", "residual", "oracle_dist"] {
            assert!(record.get(key).is_some(), "{key} missing in {line}");
        }
    }
}

#[test]
fn solve_disconnected_graph() {
    let ws = Workspace::new();
    let out = ws.run(&solve_args("i2.mtx", "b2.txt", "split.txt"));
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("disconnected"));
    assert_eq!(stderr(&out).trim().lines().count(), 1);
}

#[test]
fn solve_step_cap_is_exit_two() {
    let ws = Workspace::new();
    let mut args = solve_args("a4.mtx", "b4.txt", "c4.txt");
    args.extend(["--max-steps", "1"]);
    assert_eq!(code(&ws.run(&args)), 2);
}

#[test]
fn solve_rejects_bad_inputs() {
    let ws = Workspace::new();
    ws.write("b3.txt", "1\n2\n3\n");
    ws.write("bad.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n");
    for args in [
        solve_args("i2.mtx", "b3.txt", "k2.txt"),
        solve_args("bad.mtx", "b2.txt", "k2.txt"),
        solve_args("missing.mtx", "b2.txt", "k2.txt"),
        vec!["solve", "--matrix", "i2.mtx", "--graph", "k2.txt"],
        vec!["solve", "--bogus"],
        vec!["frobnicate"],
    ] {
        let out = ws.run(&args);
        assert_eq!(code(&out), 1, "{args:?}: {}", stderr(&out));
    }
    let mut args = solve_args("i2.mtx", "b2.txt", "k2.txt");
    args.extend(["--variant", "sideways"]);
    assert_eq!(code(&ws.run(&args)), 1);
    assert_eq!(code(&ws.run(&["--help"])), 0);
    assert_eq!(code(&ws.run(&["solve", "--help"])), 0);
}

#[test]
fn solve_variants_and_options() {
    let ws = Workspace::new();
    for extra in [
        vec!["--variant", "restoring", "--init", "free-random", "--seed", "5"],
        vec!["--variant", "gains", "--alpha", "2", "--alpha-i", "1,3,1,2", "--integrator", "rk4"],
        vec!["--step", "0.05", "--tol", "1e-10", "--record-every", "3", "--init", "tangent-noise"],
    ] {
        let mut args = solve_args("a4.mtx", "b4.txt", "c4.txt");
        args.extend(extra.iter().copied());
        let out = ws.run(&args);
        assert_eq!(code(&out), 0, "{extra:?}: {}", stderr(&out));
    }
}

#[test]
fn solve_row_blocks() {
    let ws = Workspace::new();
    ws.write("path2.txt", "0 1\n");
    let mut args = solve_args("a4.mtx", "b4.txt", "path2.txt");
    args.extend(["--blocks", "1,3", "--summary", "s.json"]);
    let out = ws.run(&args);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(ws.json("s.json")["oracle_error"].as_f64().unwrap() < 1e-6);
}

#[test]
fn config_file_with_flag_override() {
    let ws = Workspace::new();
    ws.write(
        "run.toml",
        "matrix = \"a4.mtx\"\nrhs = \"b4.txt\"\ngraph = \"c4.txt\"\nmax-steps = 1\nvariant = \"restoring\"\n",
    );
    assert_eq!(code(&ws.run(&["solve", "--config", "run.toml"])), 2);
    assert_eq!(code(&ws.run(&["solve", "--config", "run.toml", "--max-steps", "1000000"])), 0);
    ws.write("typo.toml", "max_stepz = 3\n");
    let out = ws.run(&["solve", "--config", "typo.toml"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("max_stepz"));
}

#[test]
fn analyze_k2_identity() {
    let ws = Workspace::new();
    let out = ws.run(&["analyze", "--matrix", "i2.mtx", "--graph", "k2.txt", "--out", "r.json"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = ws.json("r.json");
    assert_eq!(report["spectral"]["lambda2"].as_f64().unwrap(), 2.0);
    assert_eq!(report["spectral"]["theorem2_holds"], true);
    assert_eq!(report["spectral"]["equilibrium_dim"], 2);
}

#[test]
fn analyze_rank_deficient_matrix() {
    let ws = Workspace::new();
    let out = ws.run(&["analyze", "--matrix", "dup.mtx", "--graph", "k2.txt"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("rank deficient"), "{}", stderr(&out));
}

#[test]
fn analyze_graph_only() {
    let ws = Workspace::new();
    ws.write("p3.txt", "0 1\n1 2\n");
    let out = ws.run(&["analyze", "--graph", "p3.txt"]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["graph"]["diameter"], 2);
    assert!((report["graph"]["lambda2"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(report.get("spectral").is_none());
    let out = ws.run(&["analyze", "--graph", "split.txt"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("disconnected"));
}

fn generate(ws: &Workspace, args: &[&str], out: &str) -> String {
    let mut all = vec!["graph", "gen"];
    all.extend(args.iter().copied());
    all.extend(["--out", out]);
    let o = ws.run(&all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    ws.read(out)
}

fn edge_lines(text: &str) -> usize {
    text.lines().filter(|l| !l.trim_start().starts_with('#')).count()
}

#[test]
fn graph_generation() {
    let ws = Workspace::new();
    assert_eq!(edge_lines(&generate(&ws, &["--topology", "cycle", "--n", "4"], "c.txt")), 4);
    let single = generate(&ws, &["--topology", "path", "--n", "1"], "p.txt");
    assert_eq!(edge_lines(&single), 0);
    let args = ["--topology", "random_connected", "--n", "20", "--seed", "7"];
    assert_eq!(generate(&ws, &args, "r1.txt"), generate(&ws, &args, "r2.txt"));
    // Generated files are valid graph inputs.
    let out = ws.run(&["analyze", "--graph", "r1.txt"]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&ws.run(&["graph", "gen", "--topology", "blob", "--n", "3"])), 1);
    assert_eq!(code(&ws.run(&["graph", "gen", "--topology", "path", "--n", "0"])), 1);
    assert_eq!(
        code(&ws.run(&["graph", "gen", "--topology", "path", "--n", "3", "--out", "/nonexistent-dir/g.txt"])),
        1
    );
}

#[test]
fn track_zero_amplitude_matches_solve() {
    let ws = Workspace::new();
    let common = ["--variant", "restoring", "--init", "free-random", "--seed", "11"];
    let mut solve = solve_args("a4.mtx", "b4.txt", "c4.txt");
    solve.extend(common);
    solve.extend(["--summary", "solve.json"]);
    assert_eq!(code(&ws.run(&solve)), 0);
    let mut track = solve_args("a4.mtx", "b4.txt", "c4.txt");
    track[0] = "track";
    track.extend(common);
    track.extend(["--drift-amplitude", "0", "--summary", "track.json"]);
    assert_eq!(code(&ws.run(&track)), 0);
    assert_eq!(ws.read("solve.json"), ws.read("track.json"));
}

#[test]
fn track_guards_and_lag() {
    let ws = Workspace::new();
    let mut plain = solve_args("a4.mtx", "b4.txt", "c4.txt");
    plain[0] = "track";
    plain.extend(["--drift-amplitude", "0.1", "--drift-omega", "0.5"]);
    let out = ws.run(&plain);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("manifolds move"));

    let mut drift = plain.clone();
    drift.extend(["--variant", "restoring", "--max-steps", "3000", "--summary", "s.json", "--trace", "lag.jsonl"]);
    let out = ws.run(&drift);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let lag = ws.json("s.json")["steady_state_lag"].as_f64().unwrap();
    assert!(lag.is_finite() && lag > 0.0);
    assert!(ws.read("lag.jsonl").lines().count() > 100);

    let mut frozen = drift.clone();
    frozen.extend(["--freeze-at", "20"]);
    let pos = frozen.iter().position(|a| *a == "3000").unwrap();
    frozen[pos] = "1000000";
    let out = ws.run(&frozen);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(ws.json("s.json")["converged"], true);
}

#[test]
fn solve_traces_are_reproducible() {
    let ws = Workspace::new();
    let mut args = solve_args("a4.mtx", "b4.txt", "c4.txt");
    args.extend(["--variant", "restoring", "--init", "free-random", "--seed", "3", "--trace", "t1.jsonl"]);
    assert_eq!(code(&ws.run(&args)), 0);
    let last = args.len() - 1;
    args[last] = "t2.jsonl";
    assert_eq!(code(&ws.run(&args)), 0);
    assert_eq!(std::fs::read(ws.path("t1.jsonl")).unwrap(), std::fs::read(ws.path("t2.jsonl")).unwrap());
}

#[test]
fn sweep_rows_in_order_with_local_errors() {
    let ws = Workspace::new();
    let out = ws.run(&[
        "sweep", "--topologies", "path,complete", "--sizes", "1,3", "--seeds", "0,1", "--out", "rows.jsonl",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let rows: Vec<Value> = ws.read("rows.jsonl").lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 8);
    assert_eq!(rows[0]["entry"]["topology"], "path");
    assert_eq!(rows[0]["entry"]["n"], 1);
    assert!(rows[0].get("error").is_some());
    assert_eq!(rows[2]["entry"]["n"], 3);
    assert_eq!(rows[2]["spectral"]["theorem2_holds"], true);
    assert_eq!(rows[7]["entry"]["topology"], "complete");
    let again = ws.run(&[
        "sweep", "--topologies", "path,complete", "--sizes", "1,3", "--seeds", "0,1",
    ]);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), ws.read("rows.jsonl"));
}

#[test]
fn coordinate_matrix_input() {
    let ws = Workspace::new();
    ws.write("i2c.mtx", "%%MatrixMarket matrix coordinate real general\n% identity\n2 2 2\n2 2 1\n1 1 1\n");
    let out = ws.run(&solve_args("i2c.mtx", "b2.txt", "k2.txt"));
    assert_eq!(code(&out), 0);
}
