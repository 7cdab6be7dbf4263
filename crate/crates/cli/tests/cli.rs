use std::process::{Command, Output};

fn tachibana(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tachibana")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn compute_prints_components() {
    let o = tachibana(&["compute", "example2", "S", "kappa"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("S[1,1] = 3*exp(x1)/(1+2*exp(x1))^2"), "{out}");
    assert!(out.contains("# kappa"));
    let o = tachibana(&["--format", "kv", "compute", "example1", "S"]);
    let out = stdout(&o);
    assert!(out.contains("tensor.S.2.2=1/2\n"), "{out}");
    assert!(out.contains("compute.chart=example1\n"));
}

#[test]
fn check_exit_codes_follow_the_verdict() {
    let cases = [
        (["check", "example1", "R.R=0"], 0),
        (["check", "example1", "P.calR=0"], 2),
        (["check", "example1", "R.S=L*Q(S,S)"], 3),
        (["check", "example2", "R.R="], 64),
        (["check", "example2", "S.R=0"], 65),
    ];
    for (args, code) in cases {
        let o = tachibana(&args);
        assert_eq!(o.status.code(), Some(code), "{args:?}: {}{}", stdout(&o), stderr(&o));
    }
    assert_eq!(tachibana(&["nonsense"]).status.code(), Some(64));
}

#[test]
fn check_reports_the_extracted_scalar() {
    let o = tachibana(&["check", "example2", "P.R = L*Q(S,R)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("P.R=L*Q(S,R) | Holds | L=2/3"), "{}", stdout(&o));
    let o = tachibana(&["--format", "kv", "check", "example2", "P.R = L*Q(S,R)"]);
    assert!(stdout(&o).contains("check.status=Holds\n"));
}

#[test]
fn numeric_only_grades_numerically() {
    let o = tachibana(&["--numeric-only", "check", "example1", "R.R=0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("numeric"), "{}", stdout(&o));
}

#[test]
fn examples_are_listed_and_printed() {
    let o = tachibana(&["example"]);
    let names = stdout(&o);
    for n in ["example1", "example2", "example3", "example3-x1-reading", "example4-corrected", "example4-verbatim"] {
        assert!(names.lines().any(|l| l == n), "{n}");
    }
    let o = tachibana(&["example", "example1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).is_empty());
}

#[test]
fn verbatim_example4_is_rejected_with_a_diagnostic() {
    let o = tachibana(&["example", "example4-verbatim"]);
    assert!(stderr(&o).contains("degree 3 in the differentials"), "{}", stderr(&o));
    let o = tachibana(&["report", "example4-verbatim"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("degree 3"));
}

#[test]
fn report_runs_on_a_spec_file() {
    let dir = std::env::temp_dir().join(format!("tachibana-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spec.txt");
    let spec = stdout(&tachibana(&["example", "sphere"]));
    std::fs::write(&path, spec).unwrap();
    let o = tachibana(&["--format", "kv", "report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("summary.holds="));
    let lines: Vec<&str> = out.lines().collect();
    let at = lines.iter().position(|l| l.ends_with(".id=constant-curvature")).expect("constant-curvature row");
    assert!(lines[at + 1].ends_with(".status=Holds"), "{}", lines[at + 1]);
    std::fs::remove_dir_all(&dir).unwrap();
}
