use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::CalculusError;
use crate::domain::Quadrature;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An element of the boundary algebra, in one of three concrete forms.
///
/// Polynomials may be given once for the whole boundary (a single list) or
/// once per component, each expanded around its own center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionLiteral", into = "FunctionLiteral")]
pub enum BoundaryFunction {
    Poly {
        coeffs: Vec<Vec<Complex64>>,
        centers: Vec<Complex64>,
    },
    Pwc {
        values: Vec<Complex64>,
    },
    Samples {
        values: Vec<Complex64>,
    },
}

impl BoundaryFunction {
    /// Global polynomial `Σ a_k z^k`.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::Poly {
            coeffs: vec![coeffs],
            centers: vec![ZERO],
        }
    }

    /// Per-component polynomials `Σ a_{c,k} (z - center_c)^k`.
    pub fn per_component(coeffs: Vec<Vec<Complex64>>, centers: Vec<Complex64>) -> Self {
        Self::Poly { coeffs, centers }
    }

    pub fn constant(value: Complex64) -> Self {
        Self::polynomial(vec![value])
    }

    pub fn piecewise(values: Vec<Complex64>) -> Self {
        Self::Pwc { values }
    }

    pub fn samples(values: Vec<Complex64>) -> Self {
        Self::Samples { values }
    }

    /// Checks that the representation matches the quadrature layout.
    pub fn check(&self, quad: &Quadrature) -> Result<(), CalculusError> {
        let expected = quad.component_count();
        match self {
            Self::Poly { coeffs, centers } => {
                if coeffs.len() != 1 && coeffs.len() != expected {
                    return Err(CalculusError::ComponentMismatch {
                        expected,
                        got: coeffs.len(),
                    });
                }
                if centers.len() != coeffs.len() {
                    return Err(CalculusError::ComponentMismatch {
                        expected: coeffs.len(),
                        got: centers.len(),
                    });
                }
            }
            Self::Pwc { values } => {
                if values.len() != expected {
                    return Err(CalculusError::ComponentMismatch {
                        expected,
                        got: values.len(),
                    });
                }
            }
            Self::Samples { values } => {
                if values.len() != quad.len() {
                    return Err(CalculusError::SampleCount {
                        expected: quad.len(),
                        got: values.len(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Value at a point of the closure of component `component`. Samples can
    /// only be read at nodes; see [`super::cauchy_interior`] for interior values.
    pub fn eval(&self, component: usize, z: Complex64) -> Result<Complex64, CalculusError> {
        match self {
            Self::Poly { coeffs, centers } => {
                let k = if coeffs.len() == 1 { 0 } else { component };
                let list = coeffs.get(k).ok_or(CalculusError::ComponentMismatch {
                    expected: component + 1,
                    got: coeffs.len(),
                })?;
                Ok(horner(list, z - centers[k]))
            }
            Self::Pwc { values } => {
                values
                    .get(component)
                    .copied()
                    .ok_or(CalculusError::ComponentMismatch {
                        expected: component + 1,
                        got: values.len(),
                    })
            }
            Self::Samples { .. } => Err(CalculusError::NotEvaluable),
        }
    }

    /// Values at every quadrature node, in node order.
    pub fn node_values(&self, quad: &Quadrature) -> Result<Vec<Complex64>, CalculusError> {
        self.check(quad)?;
        match self {
            Self::Samples { values } => Ok(values.clone()),
            _ => quad
                .nodes()
                .iter()
                .map(|n| self.eval(n.component, n.point))
                .collect(),
        }
    }

    /// Sampled sup-norm `max_i |f(σ_i)|`.
    pub fn sup_norm(&self, quad: &Quadrature) -> Result<f64, CalculusError> {
        Ok(self
            .node_values(quad)?
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Derivative of `s ↦ f(σ(s))` along the boundary at every node.
    ///
    /// Exact for polynomials and piecewise constants; spectral (FFT) for samples.
    pub fn arc_derivative(&self, quad: &Quadrature) -> Result<Vec<Complex64>, CalculusError> {
        self.check(quad)?;
        match self {
            Self::Poly { coeffs, centers } => Ok(quad
                .nodes()
                .iter()
                .map(|n| {
                    let k = if coeffs.len() == 1 { 0 } else { n.component };
                    horner_derivative(&coeffs[k], n.point - centers[k]) * n.tangent
                })
                .collect()),
            Self::Pwc { .. } => Ok(vec![ZERO; quad.len()]),
            Self::Samples { values } => {
                let mut out = vec![ZERO; values.len()];
                let mut planner = FftPlanner::new();
                for c in 0..quad.component_count() {
                    let range = quad.component_range(c);
                    let d = spectral_derivative(
                        &mut planner,
                        &values[range.clone()],
                        quad.component_length(c),
                    );
                    out[range].copy_from_slice(&d);
                }
                Ok(out)
            }
        }
    }

    /// Node-wise product; the result is sampled.
    pub fn product(&self, other: &Self, quad: &Quadrature) -> Result<Self, CalculusError> {
        let a = self.node_values(quad)?;
        let b = other.node_values(quad)?;
        Ok(Self::samples(
            a.iter().zip(&b).map(|(x, y)| x * y).collect(),
        ))
    }

    /// `α·self + other` at the nodes.
    pub fn axpy(
        &self,
        alpha: Complex64,
        other: &Self,
        quad: &Quadrature,
    ) -> Result<Self, CalculusError> {
        let a = self.node_values(quad)?;
        let b = other.node_values(quad)?;
        Ok(Self::samples(
            a.iter().zip(&b).map(|(x, y)| alpha * x + y).collect(),
        ))
    }

    /// Multiplies by a scalar without changing the representation.
    pub fn scaled(&self, alpha: Complex64) -> Self {
        match self {
            Self::Poly { coeffs, centers } => Self::Poly {
                coeffs: coeffs
                    .iter()
                    .map(|l| l.iter().map(|a| a * alpha).collect())
                    .collect(),
                centers: centers.clone(),
            },
            Self::Pwc { values } => Self::Pwc {
                values: values.iter().map(|v| v * alpha).collect(),
            },
            Self::Samples { values } => Self::Samples {
                values: values.iter().map(|v| v * alpha).collect(),
            },
        }
    }
}

/// `Σ a_k z^k` by Horner's rule, coefficients in ascending order.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, a| acc * z + a)
}

fn horner_derivative(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(ZERO, |acc, (k, a)| acc * z + a * k as f64)
}

fn spectral_derivative(
    planner: &mut FftPlanner<f64>,
    values: &[Complex64],
    period: f64,
) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    planner.plan_fft_forward(n).process(&mut buf);
    let base = std::f64::consts::TAU / period;
    for (k, b) in buf.iter_mut().enumerate() {
        let freq = if 2 * k < n {
            k as f64
        } else if 2 * k == n {
            0.0
        } else {
            k as f64 - n as f64
        };
        *b *= Complex64::new(0.0, base * freq);
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    buf.iter().map(|z| z / n as f64).collect()
}

/// Accepts a bare real number, a `[re, im]` pair or `{"re", "im"}`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum ScalarLiteral {
    Real(f64),
    Pair([f64; 2]),
    Parts { re: f64, im: f64 },
}

impl From<ScalarLiteral> for Complex64 {
    fn from(s: ScalarLiteral) -> Self {
        match s {
            ScalarLiteral::Real(re) => Complex64::new(re, 0.0),
            ScalarLiteral::Pair([re, im]) | ScalarLiteral::Parts { re, im } => {
                Complex64::new(re, im)
            }
        }
    }
}

fn to_lit(z: &Complex64) -> ScalarLiteral {
    ScalarLiteral::Pair([z.re, z.im])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum FunctionLiteral {
    Poly {
        coeffs_per_component: Vec<Vec<ScalarLiteral>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        centers: Option<Vec<ScalarLiteral>>,
    },
    Pwc {
        values: Vec<ScalarLiteral>,
    },
    Samples {
        values: Vec<ScalarLiteral>,
    },
}

impl TryFrom<FunctionLiteral> for BoundaryFunction {
    type Error = CalculusError;

    fn try_from(lit: FunctionLiteral) -> Result<Self, Self::Error> {
        let conv = |v: Vec<ScalarLiteral>| v.into_iter().map(Complex64::from).collect::<Vec<_>>();
        Ok(match lit {
            FunctionLiteral::Poly {
                coeffs_per_component,
                centers,
            } => {
                if coeffs_per_component.is_empty() {
                    return Err(CalculusError::ComponentMismatch {
                        expected: 1,
                        got: 0,
                    });
                }
                let coeffs: Vec<Vec<Complex64>> =
                    coeffs_per_component.into_iter().map(conv).collect();
                let centers = match centers {
                    Some(c) => conv(c),
                    None => vec![ZERO; coeffs.len()],
                };
                if centers.len() != coeffs.len() {
                    return Err(CalculusError::ComponentMismatch {
                        expected: coeffs.len(),
                        got: centers.len(),
                    });
                }
                Self::Poly { coeffs, centers }
            }
            FunctionLiteral::Pwc { values } => Self::Pwc {
                values: conv(values),
            },
            FunctionLiteral::Samples { values } => Self::Samples {
                values: conv(values),
            },
        })
    }
}

impl From<BoundaryFunction> for FunctionLiteral {
    fn from(f: BoundaryFunction) -> Self {
        let lits = |v: &[Complex64]| v.iter().map(to_lit).collect::<Vec<_>>();
        match f {
            BoundaryFunction::Poly { coeffs, centers } => FunctionLiteral::Poly {
                coeffs_per_component: coeffs.iter().map(|l| lits(l)).collect(),
                centers: if centers.iter().all(|c| *c == ZERO) {
                    None
                } else {
                    Some(lits(&centers))
                },
            },
            BoundaryFunction::Pwc { values } => FunctionLiteral::Pwc {
                values: lits(&values),
            },
            BoundaryFunction::Samples { values } => FunctionLiteral::Samples {
                values: lits(&values),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{example_union, Domain};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn horner_matches_powers() {
        let p = [c(1.0, 0.0), c(0.0, 2.0), c(-3.0, 1.0)];
        let z = c(0.3, -0.7);
        let direct = p[0] + p[1] * z + p[2] * z * z;
        assert!((horner(&p, z) - direct).norm() < 1e-15);
        let d = p[1] + p[2] * z * 2.0;
        assert!((horner_derivative(&p, z) - d).norm() < 1e-15);
    }

    #[test]
    fn json_forms() {
        let f: BoundaryFunction =
            serde_json::from_str(r#"{"type":"poly","coeffs_per_component":[[1, [0, 2]]]}"#)
                .unwrap();
        assert_eq!(
            f,
            BoundaryFunction::polynomial(vec![c(1.0, 0.0), c(0.0, 2.0)])
        );
        let g: BoundaryFunction =
            serde_json::from_str(r#"{"type":"pwc","values":[-1, {"re":1,"im":0}]}"#).unwrap();
        assert_eq!(
            g,
            BoundaryFunction::piecewise(vec![c(-1.0, 0.0), c(1.0, 0.0)])
        );
        let back: BoundaryFunction =
            serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<BoundaryFunction>(
            r#"{"type":"poly","coeffs_per_component":[[1],[2]],"centers":[0]}"#
        )
        .is_err());
    }

    #[test]
    fn layout_checks() {
        let q = example_union().quadrature(32).unwrap();
        assert!(BoundaryFunction::piecewise(vec![c(1.0, 0.0)])
            .check(&q)
            .is_err());
        assert!(BoundaryFunction::samples(vec![ZERO; 10]).check(&q).is_err());
        assert!(BoundaryFunction::constant(c(1.0, 0.0)).check(&q).is_ok());
        let vals = BoundaryFunction::piecewise(vec![c(-1.0, 0.0), c(1.0, 0.0)])
            .node_values(&q)
            .unwrap();
        assert_eq!(vals[0], c(-1.0, 0.0));
        assert_eq!(vals[32], c(1.0, 0.0));
    }

    #[test]
    fn spectral_derivative_matches_exact() {
        let d = Domain::ellipse(c(0.1, 0.2), 1.5, 0.8, 0.3).unwrap();
        let q = d.quadrature(128).unwrap();
        let p =
            BoundaryFunction::polynomial(vec![c(0.5, 0.0), c(1.0, -1.0), c(0.0, 0.3), c(0.2, 0.0)]);
        let exact = p.arc_derivative(&q).unwrap();
        let sampled = BoundaryFunction::samples(p.node_values(&q).unwrap());
        let spectral = sampled.arc_derivative(&q).unwrap();
        let err = exact
            .iter()
            .zip(&spectral)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }
}
