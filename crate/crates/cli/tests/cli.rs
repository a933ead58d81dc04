use std::path::PathBuf;
use std::process::Command;

struct Run {
    stdout: String,
    stderr: String,
    code: i32,
}

fn latmat(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_latmat"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
        code: out.status.code().unwrap(),
    }
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("latmat-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn max_determinant_on_a_chain() {
    let r = latmat(&[
        "det",
        "--kind",
        "join",
        "--chain",
        "1,2,3",
        "--f-linear",
        "t=0",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("det: 3\n"));
    assert!(r.stdout.starts_with("matrix:\n1 2 3\n2 2 3\n3 3 3\n"));
}

#[test]
fn min_inverse_with_check() {
    let r = latmat(&[
        "inv",
        "--kind",
        "meet",
        "--chain",
        "1,2,3",
        "--f-linear",
        "t=0",
        "--check",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("inverse:\n2 -1 0\n-1 2 -1\n0 -1 1\n"));
    assert!(r.stdout.ends_with("verdict: AGREE\n"));
}

#[test]
fn every_inverse_method_agrees() {
    for method in ["cofactor-cb", "join-closed", "upper-closed", "auto"] {
        let r = latmat(&[
            "inv", "--chain", "2,5,9", "--t", "1", "--method", method, "--check",
        ]);
        assert_eq!(r.code, 0, "{method}: {}", r.stderr);
        assert!(r.stdout.contains("verdict: AGREE"));
    }
}

#[test]
fn hypothesis_violation_exits_3() {
    let r = latmat(&[
        "det",
        "--kind",
        "join",
        "--divisors",
        "1,2,3",
        "--f",
        "identity",
        "--method",
        "join-closed",
    ]);
    assert_eq!(r.code, 3);
    assert!(r.stderr.contains("join-closed"));
    let r = latmat(&["example", "3", "--chain", "1,2,3", "--t", "-3"]);
    assert_eq!(r.code, 3);
    let r = latmat(&["example", "2", "--chain", "1,2,4"]);
    assert_eq!(r.code, 3);
}

#[test]
fn singular_exits_2() {
    let r = latmat(&[
        "inv",
        "--chain",
        "1,2,3",
        "--t",
        "-3",
        "--method",
        "join-closed",
    ]);
    assert_eq!(r.code, 2);
    let r = latmat(&[
        "inv",
        "--chain",
        "1,2,3",
        "--t",
        "-3",
        "--method",
        "cofactor-cb",
    ]);
    assert_eq!(r.code, 2);
}

#[test]
fn cap_exits_4_unless_forced() {
    let r = latmat(&[
        "det",
        "--divisors",
        "1,2,3",
        "--basis",
        "1,2,3,6",
        "--method",
        "cauchy-binet",
        "--cap",
        "2",
    ]);
    assert_eq!(r.code, 4);
    let r = latmat(&[
        "det",
        "--divisors",
        "1,2,3",
        "--basis",
        "1,2,3,6",
        "--method",
        "cauchy-binet",
        "--cap",
        "2",
        "--force",
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("det: 12\n"));
}

#[test]
fn input_errors_exit_1() {
    assert_eq!(latmat(&["det", "--chain", "1,2,x"]).code, 1);
    assert_eq!(
        latmat(&["det", "--chain", "1,2", "--divisors", "1,2"]).code,
        1
    );
    assert_eq!(latmat(&["det", "--chain", "1,2", "--set", "1,5"]).code, 0);
    assert_eq!(
        latmat(&["det", "--divisors", "1,2", "--f", "constant:0.5"]).code,
        1
    );
    assert_eq!(
        latmat(&["det", "--poset", "/nonexistent/poset.txt"]).code,
        1
    );
    assert_eq!(
        latmat(&["det", "--chain", "1,2", "--method", "bogus"]).code,
        1
    );
    assert_eq!(latmat(&["frobnicate"]).code, 1);
    assert_eq!(latmat(&["verify", "--trials", "0"]).code, 1);
    assert_eq!(latmat(&["--help"]).code, 0);
}

#[test]
fn poset_and_function_files() {
    // The diamond M3 with a bottom and top.
    let poset = temp_file(
        "m3.txt",
        "# diamond\nelem 0\nelem a\nelem b\nelem c\nelem 1\nrel 0 a\nrel 0 b\nrel 0 c\nrel a 1\nrel b 1\nrel c 1\n",
    );
    let f = temp_file("m3-f.txt", "0 1\na 2\nb 3\nc 5\n1 7/2\n");
    let (p, fp) = (poset.to_str().unwrap(), f.to_str().unwrap());
    let r = latmat(&["det", "--poset", p, "--f", fp, "--set", "a,b,c", "--check"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("verdict: AGREE"));
    let r = latmat(&["inv", "--poset", p, "--f", fp, "--kind", "join", "--check"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = latmat(&[
        "build",
        "--poset",
        p,
        "--f",
        fp,
        "--set",
        "a,b",
        "--set-y",
        "b,c,1",
        "--factors",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("E(Y):"));
    let r = latmat(&["det", "--poset", p, "--f", fp, "--set", "a,z"]);
    assert_eq!(r.code, 1);
}

#[test]
fn dirichlet_method() {
    let r = latmat(&[
        "det",
        "--divisors",
        "1,2,3,6",
        "--method",
        "dirichlet",
        "--check",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = latmat(&[
        "inv",
        "--divisors",
        "2,4",
        "--kind",
        "meet",
        "--method",
        "dirichlet",
        "--check",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = latmat(&["det", "--chain", "1,2", "--method", "dirichlet"]);
    assert_eq!(r.code, 1);
}

#[test]
fn examples_agree() {
    let r = latmat(&["example", "2", "--chain", "4,5,6", "--t", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("formula: 6\n"));
    let r = latmat(&["example", "6", "--start", "1", "--n", "3", "--t", "0"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("formula: 1\n") && r.stdout.ends_with("verdict: AGREE\n"));
    for id in 1..=8 {
        let id = id.to_string();
        let r = latmat(&["example", &id, "--start", "-3", "--n", "5", "--t", "7/2"]);
        assert_eq!(r.code, 0, "example {id}: {}", r.stderr);
    }
    assert_eq!(latmat(&["example", "9", "--chain", "1,2"]).code, 1);
    assert_eq!(latmat(&["example", "1"]).code, 1);
}

#[test]
fn verify_reports_and_mutation() {
    let r = latmat(&["verify", "--trials", "20", "--seed", "42"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.ends_with("20/20 pass\n"));
    let again = latmat(&["verify", "--trials", "20", "--seed", "42"]);
    assert_eq!(r.stdout, again.stdout);

    let r = latmat(&[
        "verify",
        "--trials",
        "5",
        "--seed",
        "1",
        "--inject",
        "negated-mobius",
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("counterexample poset:\nelem "));
}
