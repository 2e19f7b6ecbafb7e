use std::io::Write;
use std::process::{Command, Stdio};

const PAIR: &str = "kind: Sq\nvars: x y\nmatrix:\n[x, y]\n[y, x]\n";

fn matgerm(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_matgerm"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn has_line(out: &str, line: &str) -> bool {
    out.lines().any(|l| l == line)
}

#[test]
fn tau_of_the_simplest_pair() {
    let (code, out, _) = matgerm(&["tau", "-"], PAIR);
    assert_eq!(code, 0);
    assert!(has_line(&out, "tau: 2"), "{out}");
    assert!(has_line(&out, "exactness: EXACT"));
    assert_eq!(out.lines().last(), Some("status: OK"));
}

#[test]
fn intermediate_suspension_pipes_into_pf() {
    let (code, sus, _) = matgerm(&["suspend", "--type", "intermediate", "-"], PAIR);
    assert_eq!(code, 0);
    let (code, out, _) = matgerm(&["pf", "-"], &sus);
    assert_eq!(code, 0);
    let printed = out.lines().find_map(|l| l.strip_prefix("pf: ")).unwrap();
    let vars = matgerm::ring::roster(&["x", "y", "z"]);
    let parse = |s| matgerm::parse::parse_poly(s, &vars).unwrap();
    // the canonical printer orders terms by variable: -x^2 + y^2 + z^2
    assert_eq!(parse(printed), parse("z^2 - x^2 + y^2"));
}

#[test]
fn dims_rejects_rank_two_for_k_four() {
    let (code, out, _) = matgerm(&["dims", "--s", "2", "--k", "4", "--r", "2"], "");
    assert_eq!(code, 0);
    assert!(has_line(&out, "allowed: false"), "{out}");
}

#[test]
fn catalog_verify_with_default_bounds_exits_zero() {
    let (code, out, _) = matgerm(&["catalog", "verify"], "");
    assert_eq!(code, 0, "{out}");
    assert!(!out.contains(": FAIL"));
    assert!(has_line(&out, "status: ERRATUM"));
}

#[test]
fn catalog_list_filters_by_id() {
    let (code, out, _) = matgerm(&["catalog", "list", "--id", "c2-", "--bounds", "p=2"], "");
    assert_eq!(code, 0);
    assert!(has_line(&out, "count: 5"), "{out}");
}

#[test]
fn parse_errors_exit_two_with_a_position() {
    let (code, out, err) = matgerm(&["det", "-"], "kind: Sq\nvars: x\nmatrix:\n[x +]\n");
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");
    assert!(has_line(&out, "status: ERROR"));
}

#[test]
fn unknown_flags_exit_two() {
    let (code, _, err) = matgerm(&["tau", "--nonsense"], "");
    assert_eq!(code, 2);
    assert!(!err.is_empty());
}

#[test]
fn the_skew_relation_reports_an_erratum() {
    let one = "kind: Sq\nvars: x\nmatrix:\n[x^2]\n";
    let (code, out, _) = matgerm(&["relations", "--type", "trivial", "-"], one);
    assert_eq!(code, 0, "{out}");
    assert!(has_line(&out, "tau-source: 1"));
    assert!(has_line(&out, "tau-suspended: 1"));
    assert_eq!(out.lines().last(), Some("status: ERRATUM"));
}

#[test]
fn certify_accepts_replayed_operations() {
    let (code, out, _) = matgerm(&["certify", "-", "--ops", "T(1,2,x); rows:Scale(2,1+y)"], PAIR);
    assert_eq!(code, 0, "{out}");
    assert!(has_line(&out, "certificate: VALID"), "{out}");
}

#[test]
fn classify_reads_expressions() {
    let (code, out, _) = matgerm(&["classify-fn", "x^3 + y^4"], "");
    assert_eq!(code, 0);
    assert!(has_line(&out, "class: E6"), "{out}");
}

#[test]
fn reports_are_deterministic() {
    let a = matgerm(&["catalog", "verify", "--id", "t1-"], "");
    let b = matgerm(&["catalog", "verify", "--id", "t1-"], "");
    assert_eq!(a, b);
}
