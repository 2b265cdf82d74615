//! Browser bindings. Every export takes and returns JSON strings; the plain
//! `*_report` functions do the work and are what the native tests call.

use std::cell::OnceCell;

use num_complex::Complex64;
use serde::Serialize;
use speclab::calculus::{AntilinearMap, BoundaryFunction, CalculusContext};
use speclab::domain::{example_union, DomainSpec};
use speclab::example::{example_matrix, example_x0};
use speclab::linalg::{
    inner, numerical_radius, numerical_range, op_norm, spectrum, vec_norm, ComplexMatrix,
};
use wasm_bindgen::prelude::*;

const EXPLORER_NODES: usize = 128;

fn parse<T: serde::de::DeserializeOwned>(what: &str, text: &str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("{what}: {e}"))
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

#[derive(Serialize)]
pub struct RangeView {
    pub vertices: Vec<[f64; 2]>,
    pub spectrum: Vec<[f64; 2]>,
    pub radius: f64,
}

fn pt(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn range_report(matrix_json: &str, angles: usize) -> Result<String, String> {
    let m: ComplexMatrix = parse("matrix", matrix_json)?;
    let poly = numerical_range(&m, angles).map_err(|e| e.to_string())?;
    let eig = spectrum(&m).map_err(|e| e.to_string())?;
    Ok(json(&RangeView {
        vertices: poly.vertices.iter().copied().map(pt).collect(),
        spectrum: eig.into_iter().map(pt).collect(),
        radius: numerical_radius(&m).map_err(|e| e.to_string())?,
    }))
}

#[derive(Serialize)]
pub struct ProfileView {
    pub components: Vec<usize>,
    pub s: Vec<f64>,
    pub lambda_min: Vec<f64>,
    pub min: f64,
    pub integral: f64,
    pub caldwell_bound: f64,
}

pub fn profile_report(
    matrix_json: &str,
    domain_json: &str,
    nodes: usize,
) -> Result<String, String> {
    let m: ComplexMatrix = parse("matrix", matrix_json)?;
    let spec: DomainSpec = parse("domain", domain_json)?;
    let dom = spec.build().map_err(|e| e.to_string())?;
    let ctx = CalculusContext::new(m, dom, nodes).map_err(|e| e.to_string())?;
    let p = ctx.lambda_min_profile().map_err(|e| e.to_string())?;
    Ok(json(&ProfileView {
        components: p.components,
        s: p.s,
        lambda_min: p.values,
        min: p.min,
        integral: p.integral,
        caldwell_bound: p.caldwell_bound,
    }))
}

#[derive(Serialize)]
pub struct ExplorerView {
    /// Row-major `γ(f)` as `[re, im]` pairs.
    pub gamma: Vec<[f64; 2]>,
    pub gamma_norm: f64,
    pub sup_norm: f64,
    /// `‖γ(f)x‖` for `x = (cos θ, sin θ)`.
    pub value_at_x: f64,
    pub diagonal_at_x0: [f64; 2],
    pub mean_of_values: [f64; 2],
    pub gamma_phi_norm: f64,
    pub jump: f64,
}

thread_local! {
    static EXAMPLE: OnceCell<CalculusContext> = const { OnceCell::new() };
}

/// Two-disk example with `f = a` near 0 and `f = b` near 1.
pub fn explorer_report(a: [f64; 2], b: [f64; 2], theta: f64) -> Result<String, String> {
    let fa = Complex64::new(a[0], a[1]);
    let fb = Complex64::new(b[0], b[1]);
    let f = BoundaryFunction::piecewise(vec![fa, fb]);
    EXAMPLE.with(|cell| {
        let ctx = match cell.get() {
            Some(c) => c,
            None => {
                let c = CalculusContext::new(example_matrix(), example_union(), EXPLORER_NODES)
                    .map_err(|e| e.to_string())?;
                cell.get_or_init(|| c)
            }
        };
        let g = ctx.gamma(&f).map_err(|e| e.to_string())?;
        let x = [
            Complex64::new(theta.cos(), 0.0),
            Complex64::new(theta.sin(), 0.0),
        ];
        let x0 = example_x0();
        let gp = ctx
            .gamma_phi(&AntilinearMap::two_point_example(), &f)
            .map_err(|e| e.to_string())?;
        Ok(json(&ExplorerView {
            gamma: g.as_slice().iter().copied().map(pt).collect(),
            gamma_norm: op_norm(&g).map_err(|e| e.to_string())?,
            sup_norm: fa.norm().max(fb.norm()),
            value_at_x: vec_norm(&g.matvec(&x)),
            diagonal_at_x0: pt(inner(&g.matvec(&x0), &x0)),
            mean_of_values: pt((fa + fb) / 2.0),
            gamma_phi_norm: op_norm(&gp).map_err(|e| e.to_string())?,
            jump: (fb - fa).norm(),
        }))
    })
}

#[wasm_bindgen]
pub fn numerical_range_json(matrix_json: &str, angles: usize) -> Result<String, JsValue> {
    range_report(matrix_json, angles).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn lambda_profile_json(
    matrix_json: &str,
    domain_json: &str,
    nodes: usize,
) -> Result<String, JsValue> {
    profile_report(matrix_json, domain_json, nodes).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn two_disk_json(
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
    theta: f64,
) -> Result<String, JsValue> {
    explorer_report([a_re, a_im], [b_re, b_im], theta).map_err(|e| JsValue::from_str(&e))
}
