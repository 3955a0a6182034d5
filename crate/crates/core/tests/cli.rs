use std::path::Path;
use std::process::{Command, Output};

use stepup_core::construction::parse_edge_list;
use stepup_core::{ExtractionTrace, HypergraphView, PairColoring};

fn stepup(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stepup"))
        .args(args)
        .env_remove("STEPUP_WORKERS")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

struct Dir(tempfile::TempDir);

impl Dir {
    fn new() -> Self {
        Dir(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    fn path(&self, name: &str) -> String {
        self.0.path().join(name).to_str().unwrap().to_string()
    }
}

fn read(p: impl AsRef<Path>) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn search_then_verify() {
    let dir = Dir::new();
    let phi = dir.path("phi.txt");
    let out = stepup(&[
        "search-phi",
        "--d",
        "8",
        "--n",
        "5",
        "--trials",
        "200",
        "--seed",
        "4",
        "--out",
        &phi,
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("# stepup search-phi d=8 n=5 trials=200 seed=4\nfound trial="));
    let parsed: PairColoring = read(&phi).parse().unwrap();
    assert_eq!(parsed.universe(), 8);
    let out = stepup(&["verify-phi", "--coloring", &phi, "--n", "5"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("OK\n"));
    let out = stepup(&["verify-phi", "--coloring", &phi, "--n", "3"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("COUNTEREXAMPLE "));
}

#[test]
fn search_failure_and_bad_arguments() {
    let out = stepup(&["search-phi", "--d", "8", "--n", "3", "--trials", "20"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).ends_with("not found\n"));
    assert_eq!(code(&stepup(&["search-phi", "--d", "3", "--n", "5"])), 2);
    assert_eq!(code(&stepup(&["search-phi", "--d", "3"])), 2);
}

#[test]
fn verify_rejects_malformed_files() {
    let dir = Dir::new();
    for body in ["D=3\n8\n", "D=3\nzz\n", "3\n2\n", "D=3\n"] {
        let p = dir.file("bad.txt", body);
        assert_eq!(
            code(&stepup(&["verify-phi", "--coloring", &p, "--n", "3"])),
            2,
            "{body:?}"
        );
    }
    assert_eq!(
        code(&stepup(&[
            "verify-phi",
            "--coloring",
            "/nonexistent",
            "--n",
            "3"
        ])),
        2
    );
}

#[test]
fn census_at_d3() {
    let dir = Dir::new();
    let passing: Vec<u32> = (0..8u32)
        .filter(|&code_| {
            let p = dir.file("phi.txt", &format!("D=3\n{code_:x}\n"));
            code(&stepup(&["verify-phi", "--coloring", &p, "--n", "3"])) == 0
        })
        .collect();
    assert_eq!(passing, vec![2, 5]);
}

#[test]
fn build_writes_the_edge_list() {
    let dir = Dir::new();
    let phi = dir.file("phi.txt", "D=4\n00\n");
    let edges = dir.path("edges.txt");
    let out = stepup(&["build", "--coloring", &phi, "--out", &edges]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("edges=240 I=0 II=0 III=240"));
    let list = parse_edge_list(&read(&edges)).unwrap();
    assert_eq!(list.len(), 240);
    let h = HypergraphView::new(4, read(&phi).parse().unwrap()).unwrap();
    assert!(list
        .iter()
        .all(|e| h.edge_predicate(&e.quad).unwrap() == Some(e.rule)));

    let out = stepup(&["build", "--coloring", &phi, "--cap", "8"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn k5check_and_alpha() {
    let dir = Dir::new();
    let phi = dir.file("phi.txt", "D=3\n0\n");
    let out = stepup(&["k5check", "--coloring", &phi]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).ends_with("k5free=true\n"));
    let out = stepup(&["alpha", "--coloring", &phi]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("alpha=7 exact=true\n"));

    let wide = dir.file("wide.txt", "D=7\n000000\n");
    let out = stepup(&["alpha", "--coloring", &wide, "--seed", "1"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("exact=false"));
    assert_eq!(code(&stepup(&["k5check", "--coloring", &wide])), 2);
}

fn write_set(dir: &Dir, values: &[u64]) -> String {
    dir.file(
        "set.txt",
        &values.iter().map(|v| format!("{v}\n")).collect::<String>(),
    )
}

#[test]
fn extract_exit_codes() {
    let dir = Dir::new();
    let phi = dir.path("phi.txt");
    assert_eq!(
        code(&stepup(&[
            "search-phi",
            "--d",
            "12",
            "--n",
            "6",
            "--trials",
            "3000",
            "--seed",
            "1",
            "--out",
            &phi
        ])),
        0
    );

    let set = write_set(&dir, &[5, 3, 9]);
    assert_eq!(
        code(&stepup(&[
            "extract",
            "--coloring",
            &phi,
            "--set",
            &set,
            "--n",
            "6"
        ])),
        2
    );

    let set = write_set(&dir, &[0, 1, 2, 3, 4, 5]);
    let out = stepup(&[
        "extract",
        "--coloring",
        &phi,
        "--set",
        &set,
        "--n",
        "6",
        "--factor",
        "3",
    ]);
    assert_eq!(code(&out), 1);

    let q: Vec<u64> = (0..4096).step_by(3).collect();
    let set = write_set(&dir, &q);
    let trace = dir.path("trace.txt");
    let out = stepup(&[
        "extract",
        "--coloring",
        &phi,
        "--set",
        &set,
        "--n",
        "6",
        "--factor",
        "3",
        "--out",
        &trace,
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let t: ExtractionTrace = read(&trace).parse().unwrap();
    assert!(t.edge.quad.iter().all(|v| q.contains(v)));
    let h = HypergraphView::new(12, read(&phi).parse().unwrap()).unwrap();
    assert_eq!(h.edge_predicate(&t.edge.quad).unwrap(), Some(t.edge.rule));

    let out = stepup(&[
        "extract",
        "--coloring",
        &phi,
        "--set",
        &set,
        "--n",
        "6",
        "--depth",
        "4",
    ]);
    assert_eq!(code(&out), 2);
    let out = stepup(&[
        "extract",
        "--coloring",
        &phi,
        "--set",
        &set,
        "--n",
        "6",
        "--factor",
        "3",
        "--strict-paper",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn steiner_and_bound() {
    let out = stepup(&["steiner", "--n", "7"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("count=7\n"));
    assert_eq!(text.lines().count(), 2 + 7);
    assert!(text.contains("\n0 1 2\n"));

    assert_eq!(code(&stepup(&["bound", "--n", "3", "--c0", "0.55"])), 0);
    let out = stepup(&["bound", "--n", "40", "--c0", "1"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("feasible=false"));
    assert_eq!(code(&stepup(&["bound", "--n", "20", "--c0", "0.05"])), 2);
    assert_eq!(code(&stepup(&["bound", "--n", "20", "--c0", "4"])), 2);
}

#[test]
fn sweep_reports() {
    let dir = Dir::new();
    let report = dir.path("sweep.txt");
    let out = stepup(&["sweep", "--d", "4", "--out", &report]);
    assert_eq!(code(&out), 0);
    let text = read(&report);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 65);
    assert!(lines[..64]
        .iter()
        .all(|l| l.contains(" k5free=true alpha=")));
    let hexes: Vec<&str> = lines[..64]
        .iter()
        .map(|l| l.split(' ').next().unwrap())
        .collect();
    let mut sorted = hexes.clone();
    sorted.sort();
    assert_eq!(hexes, sorted);
    assert!(lines[64].starts_with("summary colorings=64 k5_violations=0 alpha_min="));

    assert_eq!(code(&stepup(&["sweep", "--d", "6"])), 2);
    let out = stepup(&["sweep", "--d", "5", "--sample", "5", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 1 + 5 + 1);
}

#[test]
fn workers_do_not_change_output() {
    let run = |w: &str| {
        Command::new(env!("CARGO_BIN_EXE_stepup"))
            .args([
                "search-phi",
                "--d",
                "10",
                "--n",
                "5",
                "--trials",
                "400",
                "--seed",
                "3",
            ])
            .env("STEPUP_WORKERS", w)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("3"));
}
