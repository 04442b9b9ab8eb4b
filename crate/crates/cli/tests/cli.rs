use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn rlgt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlgt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_verify_runlength() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    let o = rlgt(&[
        "construct",
        "--scheme",
        "randmatrix",
        "--n",
        "16",
        "--k",
        "2",
        "--d",
        "1",
        "--target",
        "0.0625",
        "--seed",
        "7",
        "--out",
        path(&m),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let echo = stderr(&o);
    assert!(
        echo.contains("t=100") && echo.contains("alpha=6") && echo.contains("seed=7"),
        "{echo}"
    );

    let o = rlgt(&[
        "verify",
        "--matrix",
        path(&m),
        "--check",
        "runlength",
        "--d",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "pass");
    let o = rlgt(&[
        "verify",
        "--matrix",
        path(&m),
        "--check",
        "weight",
        "--w",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn duplicated_column_is_not_disjunct() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("dup.txt");
    fs::write(&m, "3 3 -1 -1\n110\n001\n110\n").unwrap();
    let o = rlgt(&[
        "verify",
        "--matrix",
        path(&m),
        "--check",
        "disjunct",
        "--k",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stdout(&o).contains("column 0 is covered by columns [1]"),
        "{}",
        stdout(&o)
    );
}

#[test]
fn comp_on_identity_returns_outcome_support() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("id.txt");
    let y = dir.path().join("y.txt");
    fs::write(&m, "4 4 -1 -1\n1000\n0100\n0010\n0001\n").unwrap();
    fs::write(&y, "0 1 0 1\n").unwrap();
    let o = rlgt(&[
        "decode",
        "--matrix",
        path(&m),
        "--outcome",
        path(&y),
        "--decoder",
        "comp",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "{1,3}");

    let o = rlgt(&[
        "decode",
        "--matrix",
        path(&m),
        "--outcome",
        path(&y),
        "--decoder",
        "brute",
        "--k",
        "2",
    ]);
    assert_eq!(stdout(&o).trim(), "{1,3}");
}

#[test]
fn round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for (i, args) in [
        &[
            "--scheme",
            "randmatrix",
            "--n",
            "20",
            "--k",
            "3",
            "--d",
            "2",
            "--t",
            "60",
        ][..],
        &[
            "--scheme", "spacer", "--n", "10", "--k", "2", "--d", "3", "--t", "12",
        ][..],
        &["--scheme", "bernoulli", "--n", "9", "--k", "2", "--t", "11"][..],
        &["--scheme", "qnagt", "--n", "12", "--k", "2", "--w", "8"][..],
    ]
    .into_iter()
    .enumerate()
    {
        let a = dir.path().join(format!("a{i}.txt"));
        let mut full = vec!["construct"];
        full.extend_from_slice(args);
        full.extend_from_slice(&["--seed", "3", "--out", path(&a)]);
        let o = rlgt(&full);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let text = fs::read_to_string(&a).unwrap();
        let back = rlgt_core::TestMatrix::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        // the same command again writes the same bytes
        let b = dir.path().join(format!("b{i}.txt"));
        *full.last_mut().unwrap() = path(&b);
        assert_eq!(rlgt(&full).status.code(), Some(0));
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}

#[test]
fn missing_seed_is_reported() {
    let o = rlgt(&[
        "construct",
        "--scheme",
        "bernoulli",
        "--n",
        "4",
        "--k",
        "1",
        "--t",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("no --seed given, using seed="));
}

#[test]
fn exit_codes_for_usage_and_scale() {
    assert_eq!(
        rlgt(&["construct", "--scheme", "nope"]).status.code(),
        Some(2)
    );
    let o = rlgt(&[
        "construct",
        "--scheme",
        "randmatrix",
        "--n",
        "4",
        "--k",
        "9",
        "--seed",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.txt");
    let o = rlgt(&[
        "construct",
        "--scheme",
        "randmatrix",
        "--n",
        "200",
        "--k",
        "6",
        "--t",
        "300",
        "--seed",
        "1",
        "--out",
        path(&m),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = rlgt(&[
        "verify",
        "--matrix",
        path(&m),
        "--check",
        "disjunct",
        "--k",
        "6",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let o = rlgt(&[
        "verify",
        "--matrix",
        path(&m),
        "--check",
        "disjunct",
        "--k",
        "6",
        "--sampled",
        "1000",
        "--seed",
        "2",
    ]);
    assert!(matches!(o.status.code(), Some(0) | Some(1)));
}

#[test]
fn simulate_and_sweep_emit_csv() {
    let header = "experiment,n,k,d,w,t,alpha,trials,failures,rate,wilson_lo,wilson_hi,bound,seed";
    let o = rlgt(&[
        "simulate",
        "--experiment",
        "avg-case",
        "--n",
        "100",
        "--k",
        "3",
        "--d",
        "2",
        "--trials",
        "50",
        "--seed",
        "4",
        "--workers",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], header);
    assert_eq!(lines.len(), 2);
    assert!(lines[1].starts_with("avg-case,100,3,2,-1,"));
    let one = rlgt(&[
        "simulate",
        "--experiment",
        "avg-case",
        "--n",
        "100",
        "--k",
        "3",
        "--d",
        "2",
        "--trials",
        "50",
        "--seed",
        "4",
        "--workers",
        "1",
    ]);
    assert_eq!(stdout(&one), out);

    let o = rlgt(&[
        "sweep",
        "--experiment",
        "zero-error",
        "--n",
        "10,12",
        "--k",
        "2",
        "--d",
        "0,1,2",
        "--t",
        "40",
        "--trials",
        "5",
        "--seed",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1 + 6);
}

#[test]
fn bounds_table_prints() {
    let o = rlgt(&[
        "bounds", "--n", "16", "--k", "2", "--d", "1", "--target", "0.0625", "--w", "8", "--t",
        "100",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let zero_error = out
        .lines()
        .skip_while(|l| !l.starts_with("minimal t"))
        .find(|l| l.starts_with("zero-error"))
        .unwrap();
    assert!(zero_error.contains(" 100 alpha=6"), "{zero_error}");
}
