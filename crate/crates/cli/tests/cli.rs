use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperspan"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn first_line(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap().lines().next().unwrap().to_owned()
}

#[test]
fn lowerbound_gen_writes_instance_and_sidecar() {
    let tmp = TempDir::new().unwrap();
    let out = run(tmp.path(), &["gen", "--kind", "lowerbound", "--r", "2", "--k", "2", "--f", "4", "--n", "6", "--seed", "1", "--out", "lb.hg"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(first_line(tmp.path(), "lb.hg"), "12 24 2");
    let sidecar = std::fs::read_to_string(tmp.path().join("lb.faults")).unwrap();
    assert_eq!(sidecar.lines().count(), 24);
    assert!(sidecar.lines().all(|l| l.split_whitespace().count() == 4));
}

#[test]
fn cluster_build_then_exhaustive_verify() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    for seed in ["1", "2", "3"] {
        assert_eq!(code(&run(d, &["gen", "--kind", "random", "--n", "14", "--m", "30", "--r", "3", "--weights", "1,5", "--seed", seed, "--out", "g.hg"])), 0);
        assert_eq!(code(&run(d, &["build", "--algo", "cluster", "--k", "2", "--f", "1", "--seed", "7", "--in", "g.hg", "--out", "s.hg", "--stats", "s.tsv"])), 0);
        let out = run(d, &["verify", "--kind", "mult", "--stretch", "3", "--f", "1", "--mode", "exhaustive", "--graph", "g.hg", "--spanner", "s.hg"]);
        assert_eq!(code(&out), 0);
        let report = String::from_utf8(out.stdout).unwrap();
        assert!(report.starts_with("mode\tfault_sets_checked\tpairs_checked\tviolations"));
        assert!(report.lines().nth(1).unwrap().starts_with("exhaustive\t31\t"));
    }
}

#[test]
fn verifying_the_graph_against_itself_passes() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["gen", "--kind", "random", "--n", "10", "--m", "15", "--r", "3", "--seed", "4", "--out", "g.hg"])), 0);
    let out = run(d, &["verify", "--kind", "mult", "--stretch", "1", "--f", "2", "--graph", "g.hg", "--spanner", "g.hg"]);
    assert_eq!(code(&out), 0);
    let out = run(d, &["verify", "--kind", "add", "--alpha-params", "0,1", "--f", "2", "--graph", "g.hg", "--spanner", "g.hg"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn violation_exits_one() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["gen", "--kind", "lowerbound", "--r", "2", "--k", "2", "--f", "4", "--n", "6", "--seed", "1", "--out", "lb.hg"])), 0);
    assert_eq!(code(&run(d, &["build", "--algo", "assoc-greedy", "--k", "2", "--in", "lb.hg", "--out", "s.hg"])), 0);
    let out = run(d, &["verify", "--kind", "mult", "--stretch", "3", "--f", "4", "--mode", "adversarial", "--seed", "1", "--budget", "20", "--faults", "lb.faults", "--graph", "lb.hg", "--spanner", "s.hg"]);
    assert_eq!(code(&out), 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_and_io_errors_exit_two() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["frobnicate"])), 2);
    assert_eq!(code(&run(d, &["gen", "--kind", "random", "--n", "10", "--m", "5", "--out", "x.hg"])), 2, "seed is mandatory");
    assert_eq!(code(&run(d, &["verify", "--kind", "mult", "--f", "1", "--graph", "a", "--spanner", "b"])), 2);
    assert_eq!(code(&run(d, &["verify", "--kind", "mult", "--stretch", "3", "--f", "1", "--graph", "missing.hg", "--spanner", "missing.hg"])), 2);
    std::fs::write(d.join("g.hg"), "3 1 2\n1 0 1\n").unwrap();
    assert_eq!(code(&run(d, &["build", "--algo", "cluster", "--in", "g.hg", "--out", "s.hg"])), 2, "cluster needs a seed");
    assert_eq!(code(&run(d, &["verify", "--kind", "mult", "--stretch", "3", "--f", "1", "--mode", "sampled", "--graph", "g.hg", "--spanner", "g.hg"])), 2);
}

#[test]
fn identical_command_lines_give_identical_files() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let gen = |out: &str| run(d, &["gen", "--kind", "random", "--n", "16", "--m", "40", "--r", "3", "--mixed", "--weights", "1,9", "--seed", "11", "--out", out]);
    assert_eq!(code(&gen("a.hg")), 0);
    assert_eq!(code(&gen("b.hg")), 0);
    let read = |f: &str| std::fs::read(d.join(f)).unwrap();
    assert_eq!(read("a.hg"), read("b.hg"));
    for (algo, out) in [("cluster", "a1.hg"), ("cluster", "a2.hg"), ("additive-eft", "b1.hg"), ("additive-eft", "b2.hg")] {
        let input = if algo == "cluster" { "a.hg" } else { "u.hg" };
        if !d.join("u.hg").exists() {
            assert_eq!(code(&run(d, &["gen", "--kind", "random", "--n", "12", "--m", "20", "--r", "3", "--seed", "5", "--out", "u.hg"])), 0);
        }
        assert_eq!(code(&run(d, &["build", "--algo", algo, "--k", "2", "--f", "1", "--seed", "3", "--in", input, "--out", out])), 0);
    }
    assert_eq!(read("a1.hg"), read("a2.hg"));
    assert_eq!(read("b1.hg"), read("b2.hg"));
}

#[test]
fn additive_eft_build_passes_its_own_bound() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["gen", "--kind", "random", "--n", "12", "--m", "24", "--r", "3", "--seed", "8", "--out", "u.hg"])), 0);
    assert_eq!(code(&run(d, &["build", "--algo", "additive-eft", "--k", "2", "--f", "1", "--seed", "2", "--in", "u.hg", "--out", "s.hg", "--stats", "st.tsv"])), 0);
    let stats = std::fs::read_to_string(d.join("st.tsv")).unwrap();
    assert!(stats.contains("bound=20"), "{stats}");
    let out = run(d, &["verify", "--kind", "add", "--alpha-params", "2,3", "--f", "1", "--graph", "u.hg", "--spanner", "s.hg"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn bench_emits_summary_lines() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let out = run(d, &["bench", "--suite", "size-scaling", "--grid", "16,2,1/2,3", "--seed", "1", "--seeds", "2", "--reps", "1", "--out-tsv", "b.tsv"]);
    assert_eq!(code(&out), 0);
    let tsv = std::fs::read_to_string(d.join("b.tsv")).unwrap();
    assert!(tsv.starts_with("suite\talgo\tn\tk\tf\tr\tm\tseed\tedges\twall_ms"));
    assert!(tsv.lines().any(|l| l.starts_with("# size n=16")));
}

#[test]
fn baseline_algorithms_run() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    assert_eq!(code(&run(d, &["gen", "--kind", "random", "--n", "12", "--m", "24", "--r", "3", "--seed", "9", "--out", "g.hg"])), 0);
    for algo in ["assoc-greedy", "assoc-additive", "peeloff"] {
        assert_eq!(code(&run(d, &["build", "--algo", algo, "--k", "2", "--f", "1", "--in", "g.hg", "--out", "s.hg"])), 0, "{algo}");
    }
    let out = run(d, &["verify", "--kind", "mult", "--stretch", "3", "--f", "1", "--threads", "2", "--graph", "g.hg", "--spanner", "s.hg"]);
    assert_eq!(code(&out), 0);
}
