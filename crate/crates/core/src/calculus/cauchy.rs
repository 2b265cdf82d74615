use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{BoundaryFunction, CalculusContext, CalculusError};
use crate::domain::{Domain, Quadrature};
use crate::linalg::ComplexMatrix;
use crate::par;

const TWO_PI_I: Complex64 = Complex64::new(0.0, TAU);

/// `(1/2πi) ∮ h(σ)/(σ - z) dσ` for `z` inside exactly one component, from
/// node values of `h`. The value at the nearest node is subtracted first so
/// that points close to the boundary keep full accuracy.
pub fn cauchy_integral(quad: &Quadrature, values: &[Complex64], z: Complex64) -> Complex64 {
    let nodes = quad.nodes();
    let nearest = nodes
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1.point - z).norm().total_cmp(&(b.1.point - z).norm()))
        .map(|(i, _)| i)
        .expect("quadrature is non-empty");
    let h0 = values[nearest];
    let sum: Complex64 = nodes
        .iter()
        .zip(values)
        .map(|(n, h)| (h - h0) * n.tangent * n.weight / (n.point - z))
        .sum();
    h0 + sum / TWO_PI_I
}

/// Interior value of `f` at `z` in component `component`. Polynomials and
/// piecewise constants are evaluated directly, samples through the Cauchy
/// integral.
pub fn interior_value(
    quad: &Quadrature,
    f: &BoundaryFunction,
    component: usize,
    z: Complex64,
) -> Result<Complex64, CalculusError> {
    match f {
        BoundaryFunction::Samples { .. } => {
            let values = f.node_values(quad)?;
            Ok(cauchy_integral(quad, &values, z))
        }
        _ => f.eval(component, z),
    }
}

fn require_interior(dom: &Domain, quad: &Quadrature, z: Complex64) -> Result<usize, CalculusError> {
    let not_interior = |margin: f64, required: f64| CalculusError::PointNotInterior {
        point: z,
        margin,
        required,
    };
    let found = match dom.contains_point(z) {
        Ok(c) => c,
        Err(_) => return Err(not_interior(0.0, f64::NAN)),
    };
    match found.component {
        Some(c) => {
            let required = quad.spacing(c);
            if found.margin < required {
                Err(not_interior(found.margin, required))
            } else {
                Ok(c)
            }
        }
        None => Err(not_interior(found.margin, 0.0)),
    }
}

/// `Φ(f)(z) = (1/2πi) ∮ f(σ)*/(σ - z) dσ` at an interior point whose
/// distance to the boundary is at least one node spacing.
pub fn conj_cauchy(
    dom: &Domain,
    quad: &Quadrature,
    f: &BoundaryFunction,
    z: Complex64,
) -> Result<Complex64, CalculusError> {
    require_interior(dom, quad, z)?;
    let g: Vec<Complex64> = f.node_values(quad)?.iter().map(|v| v.conj()).collect();
    Ok(cauchy_integral(quad, &g, z))
}

/// Boundary values of `Φ(f)`.
///
/// On a single disk the transform collapses to the constant `f(center)*`.
/// Elsewhere the boundary limit of the Cauchy integral is taken directly:
/// with `g = f*`, the integrand `(g(σ) - g(σ_j))/(σ - σ_j)` is smooth along
/// the component of `σ_j`, with limit `dg/ds` at `σ_j`, so the trapezoid
/// rule keeps its spectral accuracy.
pub fn conj_cauchy_function(
    dom: &Domain,
    quad: &Quadrature,
    f: &BoundaryFunction,
) -> Result<BoundaryFunction, CalculusError> {
    f.check(quad)?;
    if let Some((center, _)) = dom.single_disk() {
        let value = match f {
            BoundaryFunction::Samples { values } => {
                values.iter().sum::<Complex64>() / values.len() as f64
            }
            _ => f.eval(0, center)?,
        };
        return Ok(BoundaryFunction::piecewise(vec![value.conj()]));
    }
    let g: Vec<Complex64> = f.node_values(quad)?.iter().map(|v| v.conj()).collect();
    let dg: Vec<Complex64> = f.arc_derivative(quad)?.iter().map(|v| v.conj()).collect();
    let nodes = quad.nodes();
    let values = par::map_indexed(nodes.len(), |j| {
        let nj = &nodes[j];
        let mut sum = dg[j] * nj.weight;
        for (i, ni) in nodes.iter().enumerate() {
            if i == j {
                continue;
            }
            let numerator = if ni.component == nj.component {
                g[i] - g[j]
            } else {
                g[i]
            };
            sum += numerator * ni.tangent * ni.weight / (ni.point - nj.point);
        }
        g[j] + sum / TWO_PI_I
    });
    Ok(BoundaryFunction::samples(values))
}

/// Antilinear maps `Φ: A → A` entering `γ_Φ(f) = γ(f) + γ(Φ(f))*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AntilinearMap {
    /// The conjugate Cauchy transform of the domain.
    ConjugateCauchy,
    /// `Φ(f) = scales[c]·f(points[c])*` on component `c`.
    ExplicitPiecewise {
        points: Vec<Complex64>,
        scales: Vec<Complex64>,
    },
}

impl AntilinearMap {
    /// `Φ(f) = -f(0)*` on the disk around 0 and `-f(1)*` on the disk around 1.
    pub fn two_point_example() -> Self {
        Self::ExplicitPiecewise {
            points: vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            scales: vec![Complex64::new(-1.0, 0.0); 2],
        }
    }

    pub fn is_conjugate_cauchy(&self) -> bool {
        matches!(self, Self::ConjugateCauchy)
    }

    pub fn apply(
        &self,
        dom: &Domain,
        quad: &Quadrature,
        f: &BoundaryFunction,
    ) -> Result<BoundaryFunction, CalculusError> {
        match self {
            Self::ConjugateCauchy => conj_cauchy_function(dom, quad, f),
            Self::ExplicitPiecewise { points, scales } => {
                let count = quad.component_count();
                if points.len() != count || scales.len() != count {
                    return Err(CalculusError::ComponentMismatch {
                        expected: count,
                        got: points.len().min(scales.len()),
                    });
                }
                let values = points
                    .iter()
                    .zip(scales)
                    .enumerate()
                    .map(|(c, (&p, &s))| Ok(s * interior_value(quad, f, c, p)?.conj()))
                    .collect::<Result<Vec<_>, CalculusError>>()?;
                Ok(BoundaryFunction::piecewise(values))
            }
        }
    }
}

impl CalculusContext {
    pub fn phi(
        &self,
        map: &AntilinearMap,
        f: &BoundaryFunction,
    ) -> Result<BoundaryFunction, CalculusError> {
        map.apply(self.domain(), self.quadrature(), f)
    }

    /// `γ_Φ(f) = γ(f) + γ(Φ(f))*`.
    pub fn gamma_phi(
        &self,
        map: &AntilinearMap,
        f: &BoundaryFunction,
    ) -> Result<ComplexMatrix, CalculusError> {
        let phi_f = self.phi(map, f)?;
        Ok(&self.gamma(f)? + &self.gamma(&phi_f)?.adjoint())
    }

    /// `Σ_c ∫ f(σ_c(s)) P(σ_c(s)) ds`, which equals `γ_Φ(f)` for the
    /// conjugate Cauchy transform.
    pub fn gamma_phi_potential(
        &self,
        f: &BoundaryFunction,
    ) -> Result<ComplexMatrix, CalculusError> {
        let values = f.node_values(self.quadrature())?;
        Ok(self.potential_integral(&values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::example_union;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cauchy_reproduces_polynomials_inside() {
        let d = Domain::ellipse(c(0.0, 0.0), 2.0, 1.0, 0.2).unwrap();
        let q = d.quadrature(256).unwrap();
        let p = BoundaryFunction::polynomial(vec![c(1.0, 0.5), c(0.0, -1.0), c(0.3, 0.3)]);
        let vals = p.node_values(&q).unwrap();
        for z in [c(0.0, 0.0), c(1.5, 0.1), c(-0.3, 0.8)] {
            let got = cauchy_integral(&q, &vals, z);
            assert!((got - p.eval(0, z).unwrap()).norm() < 1e-10, "{z}");
        }
    }

    #[test]
    fn disk_collapse_brute_force() {
        let d = Domain::disk(c(0.4, -0.2), 0.7).unwrap();
        let q = d.quadrature(256).unwrap();
        let p =
            BoundaryFunction::polynomial(vec![c(0.2, 1.0), c(1.0, 0.0), c(0.0, -0.5), c(0.1, 0.1)]);
        let exact = p.eval(0, c(0.4, -0.2)).unwrap().conj();
        for z in [c(0.4, -0.2), c(0.6, 0.1), c(0.0, -0.3)] {
            let brute = conj_cauchy(&d, &q, &p, z).unwrap();
            assert!((brute - exact).norm() < 1e-10);
        }
        let phi = conj_cauchy_function(&d, &q, &p).unwrap();
        assert_eq!(phi, BoundaryFunction::piecewise(vec![exact]));
    }

    #[test]
    fn pointwise_rejects_exterior_and_near_boundary() {
        let d = example_union();
        let q = d.quadrature(64).unwrap();
        let f = BoundaryFunction::constant(c(1.0, 0.0));
        assert!(conj_cauchy(&d, &q, &f, c(0.5, 0.0)).is_err());
        assert!(conj_cauchy(&d, &q, &f, c(0.2499, 0.0)).is_err());
        assert!((conj_cauchy(&d, &q, &f, c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-13);
    }

    #[test]
    fn boundary_limit_matches_interior_approach() {
        // Φ(f) is holomorphic inside, so its boundary samples must reproduce
        // the pointwise transform at interior points via Cauchy's formula.
        let d = Domain::ellipse(c(0.0, 0.0), 1.5, 1.0, 0.0).unwrap();
        let q = d.quadrature(256).unwrap();
        let p =
            BoundaryFunction::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.5), c(0.2, 0.0)]);
        let phi = conj_cauchy_function(&d, &q, &p).unwrap();
        let phi_vals = phi.node_values(&q).unwrap();
        for z in [c(0.0, 0.0), c(0.7, 0.3), c(-1.0, -0.2)] {
            let direct = conj_cauchy(&d, &q, &p, z).unwrap();
            let via_boundary = cauchy_integral(&q, &phi_vals, z);
            assert!((direct - via_boundary).norm() < 1e-9, "{z}");
        }
    }

    #[test]
    fn explicit_example_map() {
        let d = example_union();
        let q = d.quadrature(64).unwrap();
        let f = BoundaryFunction::polynomial(vec![c(2.0, 1.0), c(1.0, 0.0)]);
        let phi = AntilinearMap::two_point_example()
            .apply(&d, &q, &f)
            .unwrap();
        assert_eq!(
            phi,
            BoundaryFunction::piecewise(vec![c(-2.0, 1.0), c(-3.0, 1.0)])
        );
        let sampled = BoundaryFunction::samples(f.node_values(&q).unwrap());
        let phi_s = AntilinearMap::two_point_example()
            .apply(&d, &q, &sampled)
            .unwrap();
        let a = phi.node_values(&q).unwrap();
        let b = phi_s.node_values(&q).unwrap();
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).norm() < 1e-12));
    }
}
