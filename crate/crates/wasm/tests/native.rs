use serde_json::Value;
use speclab_wasm::{explorer_report, profile_report, range_report};

fn v(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn range_of_example_matrix() {
    let r = v(&range_report(r#"{"dim":2,"re":[[1,1],[0,0]]}"#, 64).unwrap());
    let radius = r["radius"].as_f64().unwrap();
    assert!((radius - (0.5 + 0.5f64.sqrt())).abs() < 1e-12);
    assert_eq!(r["vertices"].as_array().unwrap().len(), 64);
    assert_eq!(r["spectrum"].as_array().unwrap().len(), 2);
}

#[test]
fn bad_input_is_an_error_string() {
    let e = range_report(r#"{"dim":2,"re":[[1]]}"#, 64).unwrap_err();
    assert!(e.contains("square"), "{e}");
    assert!(range_report("{", 64).unwrap_err().starts_with("matrix:"));
}

#[test]
fn profile_on_norm_disk_has_caldwell_bound_below_one() {
    let r = v(&profile_report(
        r#"{"dim":2,"re":[[0,0.5],[0,0]]}"#,
        r#"{"type":"disk","center":[0,0],"radius":1}"#,
        64,
    )
    .unwrap());
    assert!(r["caldwell_bound"].as_f64().unwrap() <= 1.0 + 1e-9);
    assert_eq!(r["lambda_min"].as_array().unwrap().len(), 64);
}

#[test]
fn explorer_matches_closed_form() {
    // f = -1 near 0, +1 near 1, x = x₀ direction
    let theta = ((2.0 + 2f64.sqrt()).sqrt() / (2.0 - 2f64.sqrt()).sqrt()).atan();
    let r = v(&explorer_report([-1.0, 0.0], [1.0, 0.0], theta).unwrap());
    let target = 1.0 + 2f64.sqrt();
    assert!((r["gamma_norm"].as_f64().unwrap() - target).abs() < 1e-9);
    assert!((r["value_at_x"].as_f64().unwrap() - target).abs() < 1e-9);
    assert!((r["gamma_phi_norm"].as_f64().unwrap() - 2.0).abs() < 1e-8);
    let d = &r["diagonal_at_x0"];
    assert!(d[0].as_f64().unwrap().abs() < 1e-9 && d[1].as_f64().unwrap().abs() < 1e-9);
}
