use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BoundaryFunction, CalculusError};
use crate::domain::{AdmissibilityMode, AdmissibilityReport, Domain, QuadNode, Quadrature};
use crate::linalg::{herm_min_eig, ComplexMatrix, Lu};
use crate::par;

/// Per-node bound on `‖(σ_i - M) R_i - I‖_F`.
pub const RESOLVENT_TOL: f64 = 1e-10;

/// Everything the calculus needs at the quadrature nodes, computed once:
/// resolvents `R_i`, Cauchy kernels `w_i σ'_i R_i / 2πi` and double-layer
/// values `P(σ_i)`.
#[derive(Debug, Clone)]
pub struct CalculusContext {
    m: ComplexMatrix,
    dom: Domain,
    quad: Quadrature,
    resolvents: Vec<ComplexMatrix>,
    kernels: Vec<ComplexMatrix>,
    potentials: Vec<ComplexMatrix>,
    admissibility: AdmissibilityReport,
    max_residual: f64,
}

impl CalculusContext {
    pub fn new(m: ComplexMatrix, dom: Domain, nodes: usize) -> Result<Self, CalculusError> {
        m.check_finite()?;
        let admissibility = dom.admissibility(&m, AdmissibilityMode::Spectrum)?;
        if !admissibility.passed {
            return Err(CalculusError::NotAdmissible {
                min_margin: admissibility.min_margin,
                required: admissibility.required_margin,
                details: admissibility.describe_failures(),
            });
        }
        let quad = dom.quadrature(nodes)?;
        let dim = m.dim();
        let identity = ComplexMatrix::identity(dim);
        let solved = par::map_indexed(quad.len(), |i| {
            let node = &quad.nodes()[i];
            let shifted = &ComplexMatrix::scalar(dim, node.point) - &m;
            let r = Lu::factorize(&shifted)?.inverse();
            let residual = (&shifted * &r).distance(&identity);
            Ok::<_, CalculusError>((r, residual))
        });
        let mut resolvents = Vec::with_capacity(quad.len());
        let mut max_residual: f64 = 0.0;
        for (i, entry) in solved.into_iter().enumerate() {
            let (r, residual) = entry?;
            if residual > RESOLVENT_TOL {
                return Err(CalculusError::ResolventResidual { node: i, residual });
            }
            max_residual = max_residual.max(residual);
            resolvents.push(r);
        }
        let kernels = quad
            .nodes()
            .iter()
            .zip(&resolvents)
            .map(|(n, r)| r.scale(n.tangent * n.weight / Complex64::new(0.0, TAU)))
            .collect();
        let potentials = quad
            .nodes()
            .iter()
            .zip(&resolvents)
            .map(|(n, r)| potential_from_resolvent(n.normal(), r))
            .collect();
        Ok(Self {
            m,
            dom,
            quad,
            resolvents,
            kernels,
            potentials,
            admissibility,
            max_residual,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn domain(&self) -> &Domain {
        &self.dom
    }

    pub fn quadrature(&self) -> &Quadrature {
        &self.quad
    }

    pub fn nodes(&self) -> &[QuadNode] {
        self.quad.nodes()
    }

    pub fn resolvent(&self, i: usize) -> &ComplexMatrix {
        &self.resolvents[i]
    }

    pub fn admissibility(&self) -> &AdmissibilityReport {
        &self.admissibility
    }

    /// Largest multiply-back residual over all cached resolvents.
    pub fn max_resolvent_residual(&self) -> f64 {
        self.max_residual
    }

    /// `γ(f) = (1/2πi) ∮ f(σ)(σ - M)⁻¹ dσ`.
    pub fn gamma(&self, f: &BoundaryFunction) -> Result<ComplexMatrix, CalculusError> {
        let values = f.node_values(&self.quad)?;
        Ok(self.gamma_from_values(&values))
    }

    /// `γ` applied to raw node values; panics on a length mismatch.
    pub fn gamma_from_values(&self, values: &[Complex64]) -> ComplexMatrix {
        assert_eq!(values.len(), self.kernels.len(), "one value per node");
        weighted_sum(self.dim(), values.iter().copied().zip(&self.kernels))
    }

    /// `P(σ)` at the cached node `i`.
    pub fn potential(&self, i: usize) -> &ComplexMatrix {
        &self.potentials[i]
    }

    /// `P(σ_c(s))` at an arbitrary arc-length position.
    pub fn double_layer(&self, component: usize, s: f64) -> Result<ComplexMatrix, CalculusError> {
        let curve =
            self.dom
                .components()
                .get(component)
                .ok_or(CalculusError::ComponentMismatch {
                    expected: self.dom.component_count(),
                    got: component + 1,
                })?;
        let (point, tangent) = curve.point_and_tangent(s.rem_euclid(curve.length()));
        let shifted = &ComplexMatrix::scalar(self.dim(), point) - &self.m;
        let r = Lu::factorize(&shifted)?.inverse();
        Ok(potential_from_resolvent(
            tangent * Complex64::new(0.0, -1.0),
            &r,
        ))
    }

    /// `∮ P ds`, which should be `2I`.
    pub fn dlp_total(&self) -> ComplexMatrix {
        weighted_sum(
            self.dim(),
            self.nodes()
                .iter()
                .map(|n| Complex64::new(n.weight, 0.0))
                .zip(&self.potentials),
        )
    }

    /// `Σ_i w_i f(σ_i) P(σ_i)`: the double-layer route to `γ(f) + γ(Φf)*`.
    pub fn potential_integral(&self, values: &[Complex64]) -> ComplexMatrix {
        assert_eq!(values.len(), self.potentials.len(), "one value per node");
        weighted_sum(
            self.dim(),
            values
                .iter()
                .zip(self.nodes())
                .map(|(v, n)| v * n.weight)
                .zip(&self.potentials),
        )
    }

    pub fn lambda_min_profile(&self) -> Result<LambdaProfile, CalculusError> {
        let values = par::map_indexed(self.potentials.len(), |i| herm_min_eig(&self.potentials[i]))
            .into_iter()
            .collect::<Result<Vec<f64>, _>>()?;
        let integral: f64 = values
            .iter()
            .zip(self.nodes())
            .map(|(l, n)| l * n.weight)
            .sum();
        Ok(LambdaProfile {
            components: self.nodes().iter().map(|n| n.component).collect(),
            s: self.nodes().iter().map(|n| n.s).collect(),
            weights: self.nodes().iter().map(|n| n.weight).collect(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            values,
            integral,
            caldwell_bound: 2.0 - integral,
        })
    }
}

fn potential_from_resolvent(normal: Complex64, r: &ComplexMatrix) -> ComplexMatrix {
    let half = r.scale(normal / (2.0 * PI));
    let mut p = &half + &half.adjoint();
    // exact Hermitian symmetry: average the two triangles
    let n = p.dim();
    for i in 0..n {
        p[(i, i)] = Complex64::new(p[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (p[(i, j)] + p[(j, i)].conj()) * 0.5;
            p[(i, j)] = avg;
            p[(j, i)] = avg.conj();
        }
    }
    p
}

fn weighted_sum<'a>(
    dim: usize,
    terms: impl Iterator<Item = (Complex64, &'a ComplexMatrix)>,
) -> ComplexMatrix {
    let mut acc = ComplexMatrix::zeros(dim);
    for (w, k) in terms {
        if w != Complex64::new(0.0, 0.0) {
            acc.add_scaled(w, k);
        }
    }
    acc
}

/// `λ_min(P(σ_i))` at every node with its boundary integral.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaProfile {
    pub components: Vec<usize>,
    pub s: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub min: f64,
    /// `∮ λ_min(P) ds`.
    pub integral: f64,
    /// `2 - ∮ λ_min(P) ds`, an upper bound for `‖γ_Φ - ω‖`.
    pub caldwell_bound: f64,
}

impl LambdaProfile {
    /// CSV `component,s,lambda_min`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,s,lambda_min\n");
        for ((c, s), l) in self.components.iter().zip(&self.s).zip(&self.values) {
            let _ = writeln!(out, "{c},{s:.17e},{l:.17e}");
        }
        out
    }

    /// `∮ |λ_min(P)| ds`, the norm of the Caldwell functional.
    pub fn abs_integral(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.weights)
            .map(|(l, w)| l.abs() * w)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::example_union;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example_ctx(n: usize) -> CalculusContext {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        CalculusContext::new(m, example_union(), n).unwrap()
    }

    #[test]
    fn scalar_zero_resolvents() {
        let d = Domain::disk(c(0.0, 0.0), 1.0).unwrap();
        let ctx = CalculusContext::new(ComplexMatrix::zeros(1), d, 32).unwrap();
        for (i, n) in ctx.nodes().iter().enumerate() {
            assert!((ctx.resolvent(i)[(0, 0)] - 1.0 / n.point).norm() < 1e-14);
            assert!((ctx.potential(i)[(0, 0)] - 1.0 / PI).norm() < 1e-14);
        }
        assert!((ctx.dlp_total()[(0, 0)] - 2.0).norm() < 1e-13);
        let prof = ctx.lambda_min_profile().unwrap();
        assert!((prof.integral - 2.0).abs() < 1e-13);
        assert!(prof.caldwell_bound.abs() < 1e-13);
    }

    #[test]
    fn example_cache_size_and_unitality() {
        let ctx = example_ctx(128);
        assert_eq!(ctx.nodes().len(), 256);
        let g = ctx.gamma(&BoundaryFunction::constant(c(1.0, 0.0))).unwrap();
        assert!(g.distance(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(ctx.max_resolvent_residual() < 1e-13);
    }

    #[test]
    fn example_gamma_form() {
        let ctx = example_ctx(128);
        let f = BoundaryFunction::polynomial(vec![c(0.3, 0.1), c(-1.0, 2.0), c(0.5, 0.0)]);
        let g = ctx.gamma(&f).unwrap();
        let f0 = f.eval(0, c(0.0, 0.0)).unwrap();
        let f1 = f.eval(1, c(1.0, 0.0)).unwrap();
        let expected =
            ComplexMatrix::from_rows(&[vec![f1, f1 - f0], vec![c(0.0, 0.0), f0]]).unwrap();
        assert!(g.distance(&expected) < 1e-12);
    }

    #[test]
    fn rejects_spectrum_outside() {
        let m = ComplexMatrix::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.0]]).unwrap();
        let r = CalculusContext::new(m, example_union(), 32);
        assert!(matches!(r, Err(CalculusError::NotAdmissible { .. })));
    }

    #[test]
    fn off_node_double_layer_is_hermitian() {
        let ctx = example_ctx(64);
        let p = ctx.double_layer(0, 0.123).unwrap();
        assert!(p.hermitian_defect() <= 1e-12);
        let at_node = ctx.double_layer(1, ctx.nodes()[70].s).unwrap();
        assert!(at_node.distance(ctx.potential(70)) < 1e-12);
    }
}
