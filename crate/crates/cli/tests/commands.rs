use std::path::PathBuf;

use stonekernel::dsl::Program;
use stonekernel::proker;
use stonekernel_cli::{run_args, Outcome};
use tempfile::TempDir;

const PROGRAM: &str = r#"
[objects]
X = 2
Y = 3
S = { family = "binary_prefix" }
YS = { family = "product", factors = ["Y", "S"] }

[kernels]
f = { dom = "X", cod = "Y", matrix = [["1/2", "1/4", "1/4"], ["0", "1", "0"]] }
h = { dom = "Y", cod = "X", matrix = [["1", "0"], ["0", "1"], ["1", "0"]] }
fair = { cod = "S", coin = "1/2" }
coin = { cod = "X", coin = "1/3" }
joint = { cod = "YS", levels = [
  { dom_level = 0, matrix = [["1/2", "0", "1/2"]] },
  { dom_level = 0, matrix = [["1/4", "1/4", "0", "0", "1/2", "0"]] },
] }

[terms]
counit = "copy[X] ; (id[X] (x) discard[X])"
"#;

struct Fixture {
    _dir: TempDir,
    file: PathBuf,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("program.toml");
        std::fs::write(&file, PROGRAM).unwrap();
        Fixture { _dir: dir, file }
    }

    fn run(&self, args: &[&str]) -> Outcome {
        let mut argv = vec!["stonekernel", args[0], self.file.to_str().unwrap()];
        argv.extend_from_slice(&args[1..]);
        run_args(argv)
    }
}

#[test]
fn eval_prints_exact_matrices() {
    let fx = Fixture::new();
    let out = fx.run(&["eval", "--term", "f ; h", "--depth", "0"]);
    assert_eq!(out.code, 0, "{}", out.output);
    assert_eq!(
        out.output,
        "level 0 (domain level 0): 2 x 2\n3/4 1/4\n0 1\n"
    );
    let out = fx.run(&["eval", "--term", "fair", "--depth", "2"]);
    assert!(out.output.ends_with("1/4 1/4 1/4 1/4\n"), "{}", out.output);
}

#[test]
fn comonoid_law_holds() {
    let fx = Fixture::new();
    let out = fx.run(&[
        "check-eq", "--left", "counit", "--right", "id[X]", "--depth", "3",
    ]);
    assert_eq!(out.code, 0, "{}", out.output);
    let out = fx.run(&[
        "check-eq",
        "--left",
        "copy[S] ; (discard[S] (x) id[S])",
        "--right",
        "id[S]",
        "--depth",
        "5",
    ]);
    assert_eq!(out.code, 0, "{}", out.output);
}

#[test]
fn inequality_reports_a_witness() {
    let fx = Fixture::new();
    let out = fx.run(&[
        "check-eq",
        "--left",
        "f ; h",
        "--right",
        "discard[X] ; coin",
        "--depth",
        "0",
    ]);
    assert_eq!(out.code, 1);
    assert_eq!(
        out.output,
        "not equal: level 0 (domain level 0), entry (0, 0): 3/4 vs 2/3\n"
    );
}

#[test]
fn fair_coin_is_not_deterministic() {
    let fx = Fixture::new();
    let out = fx.run(&["check-det", "--term", "fair", "--depth", "3"]);
    assert_eq!(out.code, 1);
    assert!(
        out.output.contains("level 0") || out.output.contains("level 1"),
        "{}",
        out.output
    );
    assert!(out.output.contains("1/2"), "{}", out.output);
    let out = fx.run(&["check-det", "--term", "coin", "--depth", "0"]);
    assert_eq!(
        out.output,
        "not deterministic: level 0, row 0, column 0 has entry 2/3\n"
    );
    let out = fx.run(&["check-det", "--term", "h", "--depth", "4"]);
    assert_eq!(out.code, 0);
}

#[test]
fn measure_of_a_cylinder() {
    let fx = Fixture::new();
    let out = fx.run(&["measure", "--state", "fair", "--clopen", "3:5"]);
    assert_eq!((out.code, out.output.as_str()), (0, "1/8\n"));
    let out = fx.run(&["measure", "--state", "fair", "--clopen", "2:0,1,3"]);
    assert_eq!(out.output, "3/4\n");
    let out = fx.run(&["measure", "--state", "fair", "--clopen", "0:"]);
    assert_eq!(out.output, "0\n");
    let out = fx.run(&["measure", "--state", "fair", "--clopen", "3:8"]);
    assert_eq!(out.code, 2);
    let out = fx.run(&["measure", "--state", "fair", "--clopen", "three"]);
    assert_eq!(out.code, 2);
}

#[test]
fn parse_and_type_errors_exit_2() {
    let fx = Fixture::new();
    for term in ["q", "f ; f", "f $ h", "f ;", "id[Q]"] {
        let out = fx.run(&["eval", "--term", term, "--depth", "0"]);
        assert_eq!(out.code, 2, "{term}: {}", out.output);
    }
    let out = fx.run(&["eval", "--term", "q"]);
    assert!(out.output.contains("unknown name `q`"), "{}", out.output);
    let out = fx.run(&["eval", "--term", "f ; f"]);
    assert!(out.output.contains("type mismatch at 4"), "{}", out.output);
    let out = fx.run(&["eval", "--term", "joint", "--depth", "2"]);
    assert!(out.output.contains("depth 2 exceeds"), "{}", out.output);
    let out = run_args(["stonekernel", "eval", "/nonexistent.toml", "--term", "f"]);
    assert_eq!(out.code, 2);
    let out = run_args(["stonekernel", "frobnicate"]);
    assert_eq!(out.code, 2);
}

#[test]
fn conditional_writes_a_reloadable_program() {
    let fx = Fixture::new();
    let out_file = fx.file.with_file_name("cond.toml");
    let out = fx.run(&[
        "conditional",
        "--term",
        "joint",
        "--depth",
        "1",
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.output);
    assert!(
        out.output.contains("fiber masses: 1/2 0 1/2"),
        "{}",
        out.output
    );
    let written = Program::parse(&std::fs::read_to_string(&out_file).unwrap()).unwrap();
    let k = written.lookup("k").unwrap();
    let level1 = k.kernel_at(1).unwrap();
    // y = 0 splits evenly, y = 1 falls back to the all-zeros thread, y = 2 is all on 0
    assert_eq!(level1.render(), "1/2 1/2\n1 0\n1 0\n");
    let original = Program::parse(PROGRAM).unwrap().lookup("joint").unwrap();
    let (y, l) = (written.object("Y").unwrap(), written.object("S").unwrap());
    let rebuilt = proker::recompose(&proker::first_marginal(&original, y, l).unwrap(), &k).unwrap();
    assert!(proker::equal_at_depth(&rebuilt, &original, 1).unwrap());
}

#[test]
fn sampling_is_seeded() {
    let fx = Fixture::new();
    let args = [
        "sample", "--state", "fair", "--depth", "3", "--seed", "9", "--count", "50",
    ];
    let a = fx.run(&args);
    assert_eq!(a, fx.run(&args));
    assert_eq!(a.output.lines().count(), 50);
    assert!(a.output.lines().all(|l| l.parse::<usize>().unwrap() < 8));
    let mut other = args;
    other[6] = "10";
    assert_ne!(a.output, fx.run(&other).output);
    let summary = fx.run(&["sample", "--state", "coin", "--count", "10", "--summary"]);
    assert!(
        summary.output.lines().any(|l| l.starts_with("# ")),
        "{}",
        summary.output
    );
}

#[test]
fn axioms_run_clean() {
    let out = run_args([
        "stonekernel",
        "axioms",
        "--seed",
        "3",
        "--cases",
        "10",
        "--max-size",
        "3",
        "--depth",
        "3",
    ]);
    assert_eq!(out.code, 0, "{}", out.output);
    assert!(
        out.output.ends_with("17 suites, 0 failed\n"),
        "{}",
        out.output
    );
}
