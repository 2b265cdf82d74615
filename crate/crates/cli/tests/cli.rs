use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_speclab"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .arg("--quiet")
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

struct Files {
    _dir: TempDir,
    example_m: PathBuf,
    example_d: PathBuf,
    vn_m: PathBuf,
    unit_disk: PathBuf,
    identity: PathBuf,
    nilpotent: PathBuf,
    outside: PathBuf,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    Files {
        example_m: write(d, "m.json", r#"{"dim":2,"re":[[1,1],[0,0]]}"#),
        example_d: write(
            d,
            "d.json",
            r#"{"type":"union","disks":[{"center":[0,0],"radius":0.25},{"center":[1,0],"radius":0.25}]}"#,
        ),
        vn_m: write(
            d,
            "vn.json",
            r#"{"dim":2,"re":[[0,0.8],[0,0]],"im":[[0,0],[0,0]]}"#,
        ),
        unit_disk: write(
            d,
            "disk.json",
            r#"{"type":"disk","center":[0,0],"radius":1}"#,
        ),
        identity: write(d, "id.json", r#"{"dim":3,"re":[[1,0,0],[0,1,0],[0,0,1]]}"#),
        nilpotent: write(d, "nil.json", r#"{"dim":2,"re":[[0,1],[0,0]]}"#),
        outside: write(d, "out.json", r#"{"dim":2,"re":[[3,0],[0,0.5]]}"#),
        _dir: dir,
    }
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn radius_line(o: &Output) -> f64 {
    let text = String::from_utf8_lossy(&o.stdout);
    let line = text
        .lines()
        .find(|l| l.starts_with("numerical_radius"))
        .unwrap();
    line.split_whitespace().nth(1).unwrap().parse().unwrap()
}

/// max |⟨Mx, x⟩| over unit vectors on a dense grid of `(cos t, e^{iφ} sin t)`.
fn sampled_radius_2x2(m: [[f64; 2]; 2]) -> f64 {
    let mut best: f64 = 0.0;
    let n = 400;
    for i in 0..=n {
        let t = std::f64::consts::FRAC_PI_2 * i as f64 / n as f64;
        for j in 0..n {
            let phi = std::f64::consts::TAU * j as f64 / n as f64;
            let (a, b) = (t.cos(), t.sin());
            let (c, s) = (phi.cos(), phi.sin());
            // x = (a, b e^{iφ}); ⟨Mx, x⟩ = Σ m_kl x_l conj(x_k)
            let re = m[0][0] * a * a + m[1][1] * b * b + (m[0][1] + m[1][0]) * a * b * c;
            let im = (m[0][1] - m[1][0]) * a * b * -s;
            best = best.max(re.hypot(im));
        }
    }
    best
}

#[test]
fn range_example_matches_sampled_ellipse() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("w.csv");
    let o = run(&[
        "range",
        "--matrix",
        f.example_m.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let r = radius_line(&o);
    let oracle = sampled_radius_2x2([[1.0, 1.0], [0.0, 0.0]]);
    assert!(r >= oracle - 1e-12 && r - oracle < 1e-4, "{r} vs {oracle}");
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("theta,h,vertex_re,vertex_im\n"));
    assert_eq!(text.lines().count(), 361);
}

#[test]
fn range_identity_is_a_point() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("w.csv");
    let o = run(&[
        "range",
        "--matrix",
        f.identity.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!((radius_line(&o) - 1.0).abs() < 1e-14);
    for line in std::fs::read_to_string(csv).unwrap().lines().skip(1) {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((cols[2] - 1.0).abs() < 1e-12 && cols[3].abs() < 1e-12);
    }
}

#[test]
fn range_nilpotent_radius_half() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("w.csv");
    let o = run(&[
        "range",
        "--matrix",
        f.nilpotent.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    let r = radius_line(&o);
    let oracle = sampled_radius_2x2([[0.0, 1.0], [0.0, 0.0]]);
    assert!((r - oracle).abs() < 1e-4 && (r - 0.5).abs() < 1e-12, "{r}");
}

#[test]
fn analyze_example_reproduces_tight_bound() {
    let f = files();
    let o = run(&[
        "analyze",
        "--matrix",
        f.example_m.to_str().unwrap(),
        "--domain",
        f.example_d.to_str().unwrap(),
        "--phi",
        "two-point",
        "--starts",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let b = &v["results"]["bound"];
    let target = 1.0 + 2f64.sqrt();
    let get = |k: &str| b[k].as_f64().unwrap();
    assert!((get("gamma_lower") - target).abs() < 1e-5);
    assert!((get("kappa_main") - target).abs() < 1e-6);
    assert!((get("c") - 1.0).abs() < 1e-6);
    assert!((get("d") - 2.0).abs() < 1e-6);
    assert_eq!(v["config"]["search"]["seed"], 0);
}

#[test]
fn analyze_vn_is_at_most_one() {
    let f = files();
    let o = run(&[
        "analyze",
        "--matrix",
        f.vn_m.to_str().unwrap(),
        "--domain",
        f.unit_disk.to_str().unwrap(),
        "--starts",
        "4",
    ]);
    assert!(o.status.success());
    let b = &stdout_json(&o)["results"]["bound"];
    assert!(b["kappa_main"].as_f64().unwrap() <= 1.0 + 1e-3);
    assert!(b["d_caldwell"].as_f64().unwrap() <= 1.0 + 1e-6);
    assert_eq!(b["verdicts"]["vn"], "pass");
}

#[test]
fn analyze_is_deterministic() {
    let f = files();
    let args = [
        "analyze",
        "--matrix",
        f.vn_m.to_str().unwrap(),
        "--domain",
        f.unit_disk.to_str().unwrap(),
        "--starts",
        "2",
        "--seed",
        "11",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn spectrum_outside_exits_2_with_margin_report() {
    let f = files();
    let o = run(&[
        "analyze",
        "--matrix",
        f.outside.to_str().unwrap(),
        "--domain",
        f.unit_disk.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("3.000000+0.000000i"), "{err}");
    assert!(err.contains("margin -2.000e0"), "{err}");
}

#[test]
fn parse_errors_exit_3_with_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "{\"dim\": 2,\n \"re\": [[1, 0], [0,]]}",
    );
    let o = run(&["range", "--matrix", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json:2:"));

    let missing = run(&["range", "--matrix", "/nonexistent/m.json"]);
    assert_eq!(missing.status.code(), Some(3));

    let bad_dom = write(
        dir.path(),
        "dom.json",
        r#"{"type":"disk","center":[0,0],"radius":-1}"#,
    );
    let m = write(dir.path(), "m.json", r#"{"dim":1,"re":[[0]]}"#);
    let o = run(&[
        "potential",
        "--matrix",
        m.to_str().unwrap(),
        "--domain",
        bad_dom.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_vn_passes_with_seed_echo() {
    let o = run(&["verify", "vn", "--trials", "200", "--seed", "7"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    assert_eq!(v["config"]["campaign"]["seed"], 7);
    let ratio = &v["results"]["metrics"][0];
    assert_eq!(ratio["name"], "max_ratio");
    assert!(ratio["worst"].as_f64().unwrap() <= 1.0 + 1e-6);
}

#[test]
fn verify_compress_passes() {
    let o = run(&["verify", "compress"]);
    assert!(o.status.success());
    let v = stdout_json(&o);
    assert!(v["results"]["metrics"][0]["worst"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_identities_passes() {
    let o = run(&["verify", "identities", "--trials", "20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_failure_exits_1() {
    // a negative slack makes any ratio fail
    let o = run(&[
        "verify",
        "vn",
        "--trials",
        "5",
        "--matrices",
        "1",
        "--tol-ratio=-0.9",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(3));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn example_rs_passes_at_default_and_coarse_nodes() {
    for nodes in ["256", "64"] {
        let o = run(&["example-rs", "--nodes", nodes]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v = stdout_json(&o);
        assert_eq!(v["results"]["passed"], true);
        assert_eq!(v["results"]["seed"], 0);
    }
}

#[test]
fn potential_and_measure_csv() {
    let f = files();
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("p.csv");
    let o = run(&[
        "potential",
        "--matrix",
        f.example_m.to_str().unwrap(),
        "--domain",
        f.example_d.to_str().unwrap(),
        "--nodes",
        "64",
        "--out",
        p.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("component,s,lambda_min\n"));
    assert_eq!(text.lines().count(), 1 + 2 * 64);

    let o = run(&[
        "measure",
        "--matrix",
        f.example_m.to_str().unwrap(),
        "--domain",
        f.example_d.to_str().unwrap(),
        "--starts",
        "4",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("component,s,weight\n"));
    let mass: f64 = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((mass - 1.0).abs() < 1e-9);
}
