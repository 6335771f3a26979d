use std::path::Path;
use std::process::{Command, Output};

fn nslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn out_flag(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn run_writes_trajectory_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (d1, d2) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&d1, &d2] {
        let o = nslab(&[
            "run", "--a", "2", "--c1", "0.1", "--c2", "0.5", "--n", "2", "--seed", "7", "--out",
            &out_flag(d), "--svg",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let first = std::fs::read_to_string(d1.join("trajectory.csv")).unwrap();
    let second = std::fs::read_to_string(d2.join("trajectory.csv")).unwrap();
    assert_eq!(first, second);
    assert!(first.starts_with("k,u,v,f,t,S_N,status\n"));
    assert_eq!(first.lines().count(), 52); // header, 50 steps, final iterate
    assert!(d1.join("trajectory.svg").exists());
}

#[test]
fn failing_run_ends_on_the_bisection_cap() {
    let dir = tempfile::tempdir().unwrap();
    let o = nslab(&["run", "--a", "5", "--c1", "0.1", "--seed", "7", "--out", &out_flag(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(csv.lines().last().unwrap().ends_with(",bisection-cap"));
    assert!(String::from_utf8_lossy(&o.stdout).contains("outcome=failure"));
}

#[test]
fn sweep_a_table_has_tau_and_rates() {
    let dir = tempfile::tempdir().unwrap();
    let o = nslab(&[
        "sweep-a", "--c1", "0.05", "--a-grid", "1.5,2,6", "--trials", "50", "--seed", "3",
        "--out", &out_flag(dir.path()), "--svg",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sweep-a.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "a,c1,tau,failures,successes,errors,trials,failure_rate");
    assert_eq!(lines.len(), 4);
    // a = 6 gives tau > 0: every run fails
    assert!(lines[3].contains(",50,0,0,50,"));
    assert!(dir.path().join("sweep-a.svg").exists());
}

#[test]
fn sweep_c1_and_cap_sensitivity_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = nslab(&["sweep-c1", "--c1-grid", "0.05,0.2", "--trials", "20", "--out", &out_flag(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = nslab(&["cap-sensitivity", "--tau", "-0.01", "--trials", "40", "--out", &out_flag(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("cap-sensitivity.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn basin_labels_every_start() {
    let dir = tempfile::tempdir().unwrap();
    let o = nslab(&["basin", "--tau", "-0.01", "--trials", "100", "--svg", "--out", &out_flag(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("basin.csv")).unwrap();
    assert_eq!(csv.lines().count(), 101);
    let svg = std::fs::read_to_string(dir.path().join("basin-1.svg")).unwrap();
    assert!(svg.contains(">success<") && svg.contains(">failure<"));
}

#[test]
fn compare_subset_writes_long_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = nslab(&[
        "compare", "--n", "10", "--budget", "100", "--c1", "0.1", "--method", "gradient,bfgs",
        "--svg", "--out", &out_flag(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("compare.csv")).unwrap();
    assert!(csv.starts_with("method,c1,evaluation,f\n"));
    assert!(csv.lines().count() <= 201);
    assert!(dir.path().join("compare-1.svg").exists());
}

#[test]
fn verify_passes_with_zero_violations() {
    let dir = tempfile::tempdir().unwrap();
    let o = nslab(&[
        "verify", "--suite", "wolfe,sums,schedule,pred", "--samples", "200", "--out",
        &out_flag(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    assert_eq!(csv.lines().count(), 5);
    for line in csv.lines().skip(1) {
        assert_eq!(line.split(',').nth(3), Some("0"), "{line}");
    }
}

#[test]
fn invalid_flags_exit_one_and_name_the_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_flag(dir.path());
    let cases: [(&[&str], &str); 6] = [
        (&["run", "--c1", "1.5", "--out", &out], "--c1"),
        (&["run", "--c1", "0.6", "--c2", "0.5", "--out", &out], "--c2"),
        (&["run", "--a", "1", "--n", "5", "--out", &out], "--a"),
        (&["sweep-a", "--a-grid", "2", "--box", "5,1", "--trials", "5", "--out", &out], "--box"),
        (&["verify", "--suite", "nope", "--out", &out], "--suite"),
        (&["run", "--bogus", "1"], "--bogus"),
    ];
    for (args, flag) in cases {
        let o = nslab(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(stderr(&o).contains(flag), "{args:?}: {}", stderr(&o));
    }
    assert!(std::fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn help_exits_zero() {
    assert_eq!(nslab(&["--help"]).status.code(), Some(0));
}
