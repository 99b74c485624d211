use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn nilweyl(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilweyl"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

#[test]
fn heis3_trace_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("heis3.group");
    let o = nilweyl(
        &["verify", g.to_str().unwrap(), "--suite", "trace"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["pass"], true);
    let res = &r["results"][0];
    assert_eq!(res["suite"], "trace");
    for k in ["trace", "product", "product_adjoint"] {
        let v = res["residuals"][k].as_f64().unwrap();
        assert!(v <= res["tolerances"][k].as_f64().unwrap(), "{k} = {v}");
    }
}

#[test]
fn malformed_bracket_exits_nonzero_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.group");
    std::fs::write(
        &bad,
        "name = \"bad\"\ndim = 3\nbrackets = [[3, 2, \"1\"]]\n",
    )
    .unwrap();
    let o = nilweyl(&["validate", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
    assert!(!dir.path().join("report.json").exists());
}

#[test]
fn non_nilpotent_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("sl2.group");
    std::fs::write(
        &bad,
        "name = \"x\"\ndim = 2\nbrackets = [[2, 1, 2, \"1\"]]\n",
    )
    .unwrap();
    let o = nilweyl(&["validate", bad.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn abelian_orbit_suite_reports_empty_jump_set() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("abelian2.group");
    let o = nilweyl(
        &["verify", g.to_str().unwrap(), "--suite", "orbit"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["pass"], true);
    assert!(r["results"][0]["notes"][0]
        .as_str()
        .unwrap()
        .contains("e = []"));

    let o = nilweyl(&["orbit", g.to_str().unwrap()], dir.path());
    assert!(o.status.success());
    let r = report(dir.path());
    assert_eq!(r["orbit"]["e"], serde_json::json!([]));
    assert_eq!(r["orbit"]["d"], 0);
    assert_eq!(r["orbit"]["point_orbit"], true);
}

#[test]
fn filiform_orbit_report() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("filiform4.group");
    let o = nilweyl(
        &["orbit", g.to_str().unwrap(), "--xi0", "1,0,0,0"],
        dir.path(),
    );
    assert!(o.status.success());
    let r = report(dir.path());
    assert_eq!(r["orbit"]["e"], serde_json::json!([2, 4]));
    assert_eq!(r["orbit"]["d"], 2);
    assert_eq!(r["orbit"]["isotropy_basis"].as_array().unwrap().len(), 2);
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let g = data("heis3.group");
    let args = [
        "verify",
        g.to_str().unwrap(),
        "--suite",
        "moyal,trace",
        "--seed",
        "7",
    ];
    assert!(nilweyl(&args, a.path()).status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_nilweyl"))
        .args(args)
        .arg("--out")
        .arg(b.path())
        .env("RAYON_NUM_THREADS", "3")
        .output()
        .unwrap();
    assert!(o.status.success());
    let ra = std::fs::read(a.path().join("report.json")).unwrap();
    let rb = std::fs::read(b.path().join("report.json")).unwrap();
    assert_eq!(ra, rb);
}

#[test]
fn tolerance_scale_can_force_a_failing_suite() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("heis3.group");
    let o = nilweyl(
        &[
            "verify",
            g.to_str().unwrap(),
            "--suite",
            "trace",
            "--tolerance-scale",
            "1e-30",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(dir.path())["pass"], false);
}

#[test]
fn schrodinger_needs_heisenberg() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("filiform4.group");
    let o = nilweyl(
        &[
            "verify",
            g.to_str().unwrap(),
            "--suite",
            "trace",
            "--rep",
            "schrodinger",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn quantize_reads_a_symbol_csv() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("heis3.group");
    let n = 64usize;
    let l = (std::f64::consts::PI * n as f64 / 2.0).sqrt();
    let h = 2.0 * l / n as f64;
    let mut csv = String::from("q,p,re,im\n");
    for i in 0..n {
        for j in 0..n {
            let (q, p) = (-l + i as f64 * h, -l + j as f64 * h);
            let v = (-(q * q + p * p) / (2.0 * 1.2 * 1.2)).exp();
            csv.push_str(&format!("{q:.17e},{p:.17e},{v:.17e},0\n"));
        }
    }
    let sym = dir.path().join("a.csv");
    std::fs::write(&sym, csv).unwrap();
    let o = nilweyl(
        &[
            "quantize",
            g.to_str().unwrap(),
            "--symbol",
            sym.to_str().unwrap(),
            "--rep",
            "schrodinger",
            "--points",
            "64",
            "--box",
            &format!("{l}"),
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let sv = std::fs::read_to_string(dir.path().join("singular_values.csv")).unwrap();
    let s: Vec<f64> = sv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(s.len(), n);
    assert!(s.windows(2).all(|w| w[0] >= w[1]));
    // a Gaussian symbol of width w gives a geometric spectrum with ratio (2w² - 1)/(2w² + 1)
    let ratio = (2.0 * 1.44 - 1.0) / (2.0 * 1.44 + 1.0);
    assert!(
        (s[1] / s[0] - ratio).abs() < 1e-6,
        "{} vs {ratio}",
        s[1] / s[0]
    );
}

#[test]
fn modnorm_m22_is_the_product_of_norms() {
    let dir = tempfile::tempdir().unwrap();
    let g = data("heis3.group");
    let o = nilweyl(
        &[
            "modnorm",
            g.to_str().unwrap(),
            "--rep",
            "schrodinger",
            "--points",
            "64",
            "--r",
            "1",
            "--s",
            "inf",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(dir.path());
    assert_eq!(r["pass"], true);
    assert!(r["modnorm"]["m22_residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(r["modnorm"]["s"], "inf");
    assert_eq!(r["modnorm"]["split"]["convention"], true);
}
