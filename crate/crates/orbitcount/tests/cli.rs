use std::path::Path;
use std::process::{Command, Output};

use orbitcount::series_csv;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_orbitcount"));
    c.env_remove("ORBITCOUNT_MEM_LIMIT_MB");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn orbitcount")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn count_writes_monotone_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("counts.csv");
    let o = run(&[
        "count",
        "--kind",
        "euclidean",
        "--root",
        "-1,2,2,3",
        "--tmin",
        "100",
        "--tmax",
        "1000000",
        "--grid",
        "32",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("T,N\n100.000,"));
    assert!(!text.contains('\r') && !text.contains(" \n"));
    let series = series_csv::load(&out).unwrap();
    assert_eq!(series.len(), 32);
    assert!(series.is_monotone());
    let stderr = String::from_utf8_lossy(&o.stderr);
    assert!(
        stderr.contains("runtime") && stderr.contains("peak frontier"),
        "{stderr}"
    );

    let fit_out = dir.path().join("fit.json");
    let o = run(&[
        "fit",
        "--input",
        out.to_str().unwrap(),
        "--window",
        "1e4:1e6",
        "--out",
        fit_out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v = json(&fit_out);
    let alpha = v["alpha"].as_f64().unwrap();
    assert!((1.25..=1.36).contains(&alpha), "{alpha}");
    assert_eq!(v["window"][0].as_f64(), Some(1e4));
    for key in ["c", "alpha_stderr", "r_squared", "n_points", "ratio_spread_last_decade"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn count_is_thread_independent_and_deterministic() {
    let args = [
        "count",
        "--kind",
        "hyperbolic",
        "--tmin",
        "10",
        "--tmax",
        "50000",
        "--grid",
        "16",
    ];
    let one = run(&[&args[..], &["--threads", "1"]].concat());
    let four = run(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert!(String::from_utf8_lossy(&one.stdout).starts_with("T,N\n10.0000,"));
}

#[test]
fn invalid_roots_exit_2() {
    let o = run(&["count", "--kind", "hyperbolic", "--root", "-1,2,2,3", "--grid", "8"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("Q = 0") && err.contains("q(*) = 4"), "{err}");
    assert_eq!(
        run(&["count", "--kind", "spherical", "--grid", "8"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["count", "--grid", "4"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--threads", "0"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--kind", "parabolic"]).status.code(), Some(2));
}

#[test]
fn non_root_quadruple_is_reduced() {
    let a = run(&[
        "count", "--root", "15,2,2,3", "--tmin", "10", "--tmax", "1000", "--grid", "8",
    ]);
    let b = run(&[
        "count", "--root", "-1,2,2,3", "--tmin", "10", "--tmax", "1000", "--grid", "8",
    ]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn memory_cap_is_enforced() {
    let o = bin()
        .args(["count", "--tmax", "1e6", "--grid", "8", "--threads", "2"])
        .env("ORBITCOUNT_MEM_LIMIT_MB", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("memory guard"));
    let o = bin()
        .args(["count", "--grid", "8"])
        .env("ORBITCOUNT_MEM_LIMIT_MB", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_of_exact_synthetic_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("synthetic.csv");
    let mut text = String::from("T,N\n");
    for k in 1..=30u64 {
        text.push_str(&format!("{},{}\n", k * k, 4 * k * k * k));
    }
    std::fs::write(&csv, text).unwrap();
    let o = run(&["fit", "--input", csv.to_str().unwrap(), "--window", "1:900"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["alpha"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((v["c"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert_eq!(v["n_points"], 30);
    let narrow = run(&["fit", "--input", csv.to_str().unwrap(), "--window", "100:900"]);
    let v: serde_json::Value = serde_json::from_slice(&narrow.stdout).unwrap();
    assert_eq!(v["n_points"], 21);
}

#[test]
fn fit_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "T,N\n1,2\n2,three\n").unwrap();
    assert_eq!(run(&["fit", "--input", bad.to_str().unwrap()]).status.code(), Some(3));
    let missing = dir.path().join("missing.csv");
    assert_eq!(
        run(&["fit", "--input", missing.to_str().unwrap()]).status.code(),
        Some(3)
    );
    let good = dir.path().join("good.csv");
    std::fs::write(&good, "T,N\n1,1\n2,2\n3,3\n4,4\n5,5\n").unwrap();
    assert_eq!(
        run(&["fit", "--input", good.to_str().unwrap(), "--window", "5:1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn exponent_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("delta.json");
    let o = run(&[
        "exponent",
        "--gens",
        &data("apollonian.gens"),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&out);
    let delta = v["delta_hat"].as_f64().unwrap();
    assert!((delta - 1.30568).abs() <= 0.15, "{delta}");
    assert_eq!(v["R_grid"].as_array().unwrap().len(), 15);
    assert_eq!(v["ball_counts"].as_array().unwrap().len(), 15);
    assert!(v.get("stderr").is_some());

    let o = run(&[
        "exponent",
        "--gens",
        &data("cyclic_loxodromic.gens"),
        "--rmin",
        "8",
        "--rmax",
        "24",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["delta_hat"].as_f64().unwrap().abs() < 0.1);
}

#[test]
fn exponent_rejects_bad_generators() {
    let dir = tempfile::tempdir().unwrap();
    let malformed = dir.path().join("malformed.gens");
    std::fs::write(&malformed, "form: lorentz:2\n1,0,0\n0,1\n0,0,1\n").unwrap();
    assert_eq!(
        run(&["exponent", "--gens", malformed.to_str().unwrap()]).status.code(),
        Some(2)
    );
    let skew = dir.path().join("skew.gens");
    std::fs::write(&skew, "form: lorentz:2\n1,1,0\n0,1,0\n0,0,1\n").unwrap();
    let o = run(&["exponent", "--gens", skew.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("preserve"));
    let missing = dir.path().join("missing.gens");
    assert_eq!(
        run(&["exponent", "--gens", missing.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn orbit_counts_match_packing_counts() {
    // Orbit vectors of (-1,2,2,3) are the packing's Descartes quadruples, so
    // counts by max norm are packing quadruple counts.
    let o = run(&[
        "orbit", "--norm", "max", "--tmin", "10", "--tmax", "1000", "--grid", "8",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let s = series_csv::read_series(&o.stdout[..]).unwrap();
    assert!(s.is_monotone());
    let cone = run(&[
        "orbit",
        "--tmin",
        "10",
        "--tmax",
        "1000",
        "--grid",
        "8",
        "--cone-axis",
        "1,1,1,1",
        "--cone-radius",
        "3.141592653589793",
    ]);
    assert_eq!(cone.stdout, o.stdout, "a cone of radius pi holds everything");
    let narrow = run(&[
        "orbit",
        "--tmin",
        "10",
        "--tmax",
        "1000",
        "--grid",
        "8",
        "--cone-axis",
        "0,0,-1,1",
        "--cone-radius",
        "0.5",
    ]);
    let n = series_csv::read_series(&narrow.stdout[..]).unwrap();
    assert!(n.counts().last() < s.counts().last());
    assert_eq!(run(&["orbit", "--norm", "taxicab"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "--cone-axis", "1,1,1,1"]).status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let o = run(&["verify"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stdout));
    let text = String::from_utf8_lossy(&o.stdout);
    for s in ["form", "involution", "decomp", "geometry", "prop24", "enumeration"] {
        assert!(
            text.lines().any(|l| l.starts_with(s) && l.contains("pass")),
            "{s}: {text}"
        );
    }

    let only = run(&["verify", "--suite", "prop24"]);
    assert!(only.status.success());
    let text = String::from_utf8_lossy(&only.stdout);
    assert!(text.starts_with("prop24") && !text.contains("geometry"));
    assert!(text.contains("all 1 suites passed"));
}

#[test]
fn verify_flags_corrupted_generator() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("corrupt.gens");
    let text = std::fs::read_to_string(data("apollonian.gens"))
        .unwrap()
        .replacen("0,2,1,0", "0,2,1,1", 1);
    std::fs::write(&bad, text).unwrap();
    let o = run(&["verify", "--suite", "involution", "--gens", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("involution   FAIL"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("involution"));
    let fine = run(&[
        "verify",
        "--suite",
        "involution",
        "--suite",
        "form",
        "--gens",
        &data("apollonian.gens"),
    ]);
    assert!(fine.status.success());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["count", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert!(run(&["--help"]).status.success());
}
