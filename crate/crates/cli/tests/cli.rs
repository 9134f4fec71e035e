use std::fs;
use std::process::{Command, Output};

use fermat_kerd2::{data, GaloisActionData};

fn kerd2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerd2"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn kv(args: &[&str]) -> String {
    let mut full = args.to_vec();
    full.extend(["--format", "kv"]);
    let out = kerd2(&full);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

#[test]
fn invariant_dimensions() {
    for (module, dim) in [("UY", "5"), ("U", "3"), ("X", "2")] {
        let out = kv(&["invariants", "--p", "3", "--module", module]);
        assert_eq!(value(&out, "dim_MQ"), dim, "{module}");
    }
}

#[test]
fn kernel_dimensions() {
    for (module, homs, ker) in [("UY", "18", "5"), ("U", "10", "1"), ("X", "6", "0")] {
        let out = kv(&["kerd2", "--p", "3", "--module", module]);
        assert_eq!(value(&out, "dim_invhoms"), homs, "{module}");
        assert_eq!(value(&out, "dim_kerd2"), ker, "{module}");
    }
}

#[test]
fn golden_uy_kernel() {
    let out = kv(&["kerd2", "--module", "UY"]);
    let expected = "\
p=3
module=UY
dim_N=7
dim_invhoms=18
dim_kerd2=5
kernel_basis[0]=n1 -> 1*y0^1*y1^1, n3 -> 1*y0^2*y1^2
kernel_basis[1]=n1 -> 1*y0^1*y1^2
kernel_basis[2]=n1 -> 1*y0^2*y1^1
kernel_basis[3]=n1 -> 1*y0^2*y1^2
kernel_basis[4]=n2 -> 1*y0^2*y1^2
witness[0]=m0 = 0, m1 = 1 + 1*y1^1 + 1*y0^1
witness[1]=m0 = 1*y1^1, m1 = 1*y1^1
witness[2]=m0 = 1*y1^1, m1 = 1*y0^1
witness[3]=m0 = 1*y1^1, m1 = 0
witness[4]=m0 = 1 + 1*y1^1, m1 = 2*y1^1 + 2*y0^1
";
    assert_eq!(out, expected);
}

#[test]
fn heisenberg_and_presets() {
    let out = kv(&["heisenberg", "--p", "3", "--module", "UY"]);
    assert_eq!(value(&out, "dim_imT"), "4");
    assert_eq!(value(&out, "dim_ker"), "3");
    let out = kv(&["preset", "--name", "cyclotomic", "--module", "UY"]);
    assert_eq!(value(&out, "dim_ker"), "1");
    assert_eq!(value(&out, "kernel_basis[0]"), "n1 -> 1*y0^2*y1^2");
    let out = kv(&[
        "preset", "--name", "rayclass", "--rho", "2", "--module", "X",
    ]);
    assert_eq!(value(&out, "dim_ker"), "4");
    let out = kv(&["preset", "--name", "cyclotomic", "--module", "U"]);
    assert_eq!(value(&out, "dim_ker"), "0");
}

#[test]
fn cohomology_of_n7() {
    assert_eq!(value(&kv(&["cohomology", "--k", "2"]), "dim_H2"), "9");
    assert_eq!(value(&kv(&["cohomology", "--k", "0"]), "dim_H0"), "3");
}

#[test]
fn cyclotomic_checks() {
    let out = kv(&["verify-cyclotomic", "--p", "3"]);
    assert_eq!(value(&out, "conductor_heisenberg"), "12");
    assert_eq!(value(&out, "conductor_cyclotomic"), "15");
    for line in out
        .lines()
        .filter(|l| l.ends_with("ok") || l.ends_with("FAILED"))
    {
        assert!(line.ends_with("=ok"), "{line}");
    }
}

#[test]
fn output_is_reproducible() {
    for args in [
        &["kerd2", "--module", "U"][..],
        &["heisenberg", "--module", "X"],
        &["invariants"],
    ] {
        assert_eq!(kv(args), kv(args));
    }
}

#[test]
fn files_replace_the_builtin_data() {
    let dir = tempfile::tempdir().unwrap();
    let action = dir.path().join("action.txt");
    let n = dir.path().join("n7.txt");
    fs::write(&action, GaloisActionData::builtin_p3().export()).unwrap();
    fs::write(&n, data::n7().export()).unwrap();
    let with_files = kv(&[
        "kerd2",
        "--action-file",
        action.to_str().unwrap(),
        "--n-data-file",
        n.to_str().unwrap(),
    ]);
    assert_eq!(with_files, kv(&["kerd2"]));

    let (n3, _) = data::n_ell(3).unwrap();
    fs::write(&n, n3.export()).unwrap();
    let out = kv(&["kerd2", "--n-data-file", n.to_str().unwrap()]);
    assert_eq!(value(&out, "dim_N"), "3");
    assert_eq!(value(&out, "dim_kerd2"), "5");
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "p = 3\nB[0] = 1 + y0\nB[1] = 1\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["invariants", "--p", "5"],
        vec!["kerd2", "--p", "5"],
        vec!["invariants", "--p", "9"],
        vec!["invariants", "--module", "V"],
        vec!["preset", "--name", "nope"],
        vec!["cohomology", "--k", "3"],
        vec!["invariants", "--action-file", bad.to_str().unwrap()],
        vec!["frobnicate"],
    ];
    for args in cases {
        let out = kerd2(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = kerd2(&["invariants", "--action-file", bad.to_str().unwrap()]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("B[0] - 1 is not in ⟨y0y1⟩"));
}

#[test]
fn mismatched_prime_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let action = dir.path().join("trivial5.txt");
    fs::write(
        &action,
        GaloisActionData::trivial(fermat_kerd2::Prime::new(5).unwrap()).export(),
    )
    .unwrap();
    let out = kerd2(&[
        "invariants",
        "--p",
        "3",
        "--action-file",
        action.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = kv(&[
        "invariants",
        "--p",
        "5",
        "--action-file",
        action.to_str().unwrap(),
    ]);
    assert_eq!(value(&out, "dim_M"), "25");
    assert_eq!(value(&out, "dim_MQ"), "25");
}

#[test]
fn table_format_lists_sections() {
    let out = kerd2(&["kerd2", "--module", "X"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("dim_kerd2    0"));
    assert!(text.contains("kernel_basis:\n  (none)"));
}
