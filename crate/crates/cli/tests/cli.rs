use std::process::{Command, Output};

fn nfmertens(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nfmertens"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn residue_json_for_gaussian_field() {
    let o = nfmertens(&["residue", "--quadratic", "-4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kappa"].as_f64().unwrap(), std::f64::consts::FRAC_PI_4);
    assert_eq!(v["method"], "cross-checked");
    assert_eq!(v["field"], "Q(i)");
}

#[test]
fn squarefree_and_discriminant_forms_agree() {
    let a = stdout(&nfmertens(&["residue", "--quadratic", "-1", "--json"]));
    let b = stdout(&nfmertens(&["residue", "--quadratic", "-4", "--json"]));
    assert_eq!(a, b);
}

#[test]
fn mertens_reports_prime_count() {
    let o = nfmertens(&["mertens", "--field", "Q", "--x", "1e6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["prime_ideal_count"], 78498);
    for key in ["s1", "s2", "product"] {
        assert!(v[key].is_f64(), "{key}");
    }
    let text = stdout(&nfmertens(&["mertens", "--field", "Q", "--x", "1e6"]));
    assert!(text.contains("S1") && text.contains("78498"));
}

#[test]
fn inspect_json_is_one_object() {
    let o = nfmertens(&["inspect", "--cyclotomic", "5", "--json", "--primes", "11"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 4);
    assert_eq!(v["discriminant"], 125);
    assert_eq!(v["splitting"].as_array().unwrap().len(), 5);
    assert_eq!(v["splitting"][4]["factors"][0]["count"], 4);
}

#[test]
fn verify_writes_csv_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("fields.cfg");
    std::fs::write(&cat, "kind=rational\nkind=quadratic d=5\n").unwrap();
    let out = dir.path().join("bounds.csv");
    let o = nfmertens(&[
        "verify",
        "--catalog",
        cat.to_str().unwrap(),
        "--grid",
        "1e2:1e4:10",
        "--out",
        out.to_str().unwrap(),
        "--workers",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    // 2 fields x (3 points x 5 rows + 1)
    assert_eq!(csv.lines().count(), 1 + 32);
    assert!(dir.path().join("bounds.csv.summary.txt").exists());

    let o = nfmertens(&["verify", "--catalog", cat.to_str().unwrap(), "--grid", "1e2,1e3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("field_label,quantity,x,"));
}

#[test]
fn verify_json_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("fields.cfg");
    std::fs::write(&cat, "kind=rational\n").unwrap();
    let o = nfmertens(&["verify", "--catalog", cat.to_str().unwrap(), "--grid", "1e2,1e3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rows"], 11);
    assert_eq!(v["failed_rows"], 0);
}

#[test]
fn usage_and_config_errors_exit_two() {
    assert_eq!(nfmertens(&["residue"]).status.code(), Some(2));
    assert_eq!(nfmertens(&["bogus"]).status.code(), Some(2));
    assert_eq!(nfmertens(&["residue", "--quadratic", "4"]).status.code(), Some(2));
    assert_eq!(nfmertens(&["residue", "--cyclotomic", "5"]).status.code(), Some(2));
    assert_eq!(
        nfmertens(&["verify", "--catalog", "/nonexistent/fields.cfg"]).status.code(),
        Some(2)
    );
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("fields.cfg");
    std::fs::write(&cat, "kind=rational\n").unwrap();
    let cat = cat.to_str().unwrap();
    // descending grid, grid above the ceiling
    assert_eq!(nfmertens(&["verify", "--catalog", cat, "--grid", "1e3,1e2"]).status.code(), Some(2));
    assert_eq!(
        nfmertens(&["verify", "--catalog", cat, "--grid", "1e2,1e6", "--ceiling", "1e5"]).status.code(),
        Some(2)
    );
    let o = nfmertens(&["residue", "--quadratic", "4"]);
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
}

#[test]
fn bound_failure_exits_one() {
    // a wildly wrong residue makes the C and E rows fail
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("fields.cfg");
    std::fs::write(&cat, "kind=cyclotomic m=5 kappa=1e-6\n").unwrap();
    let o = nfmertens(&["verify", "--catalog", cat.to_str().unwrap(), "--grid", "1e2,1e3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",false,"));
}

#[test]
fn chebotarev_classes() {
    let o = nfmertens(&["chebotarev", "--mod", "5", "--res", "1", "--res", "4", "--grid", "1e3,1e4", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // per class: 2 A_L rows and 1 Cauchy row
    assert_eq!(v["rows"], 6);
    assert_eq!(nfmertens(&["chebotarev", "--mod", "6"]).status.code(), Some(2));
    assert_eq!(nfmertens(&["chebotarev", "--mod", "5", "--res", "5"]).status.code(), Some(2));
}

#[test]
fn help_lists_every_flag() {
    let text = |args: &[&str]| stdout(&nfmertens(args));
    let verify = text(&["verify", "--help"]);
    for flag in ["--catalog", "--grid", "--truncation", "--ceiling", "--workers", "--out", "--tight", "--json"] {
        assert!(verify.contains(flag), "verify --help lacks {flag}");
    }
    let residue = text(&["residue", "--help"]);
    for flag in ["--quadratic", "--cyclotomic", "--field", "--json"] {
        assert!(residue.contains(flag), "residue --help lacks {flag}");
    }
    assert!(text(&["mertens", "--help"]).contains("--x"));
    let cheb = text(&["chebotarev", "--help"]);
    assert!(cheb.contains("--mod") && cheb.contains("--res"));
    assert_eq!(nfmertens(&["--help"]).status.code(), Some(0));
}
