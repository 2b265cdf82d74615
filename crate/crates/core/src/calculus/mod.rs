//! Holomorphic functional calculus by contour quadrature, the double-layer
//! potential and the conjugate Cauchy transform.

mod cauchy;
mod context;
mod function;

use num_complex::Complex64;
use thiserror::Error;

use crate::domain::DomainError;
use crate::linalg::{ComplexMatrix, LinalgError};

pub use cauchy::{
    cauchy_integral, conj_cauchy, conj_cauchy_function, interior_value, AntilinearMap,
};
pub use context::{CalculusContext, LambdaProfile, RESOLVENT_TOL};
pub use function::{horner, BoundaryFunction};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CalculusError {
    #[error("spectrum not admissible: smallest margin {min_margin:.3e}, required > {required:.3e}\n{details}")]
    NotAdmissible {
        min_margin: f64,
        required: f64,
        details: String,
    },
    #[error("resolvent residual {residual:.3e} at node {node} exceeds tolerance")]
    ResolventResidual { node: usize, residual: f64 },
    #[error("function layout has {got} pieces, expected {expected}")]
    ComponentMismatch { expected: usize, got: usize },
    #[error("expected {expected} node samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("sampled functions can only be read at quadrature nodes")]
    NotEvaluable,
    #[error("point {point} is not interior (margin {margin:.3e}, required {required:.3e})")]
    PointNotInterior {
        point: Complex64,
        margin: f64,
        required: f64,
    },
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `p(M)` by Horner's rule, coefficients in ascending order.
pub fn poly_apply(m: &ComplexMatrix, coeffs: &[Complex64]) -> ComplexMatrix {
    let n = m.dim();
    let mut acc = ComplexMatrix::zeros(n);
    for a in coeffs.iter().rev() {
        acc = &acc * m;
        for i in 0..n {
            acc[(i, i)] += a;
        }
    }
    acc
}

/// `p(M) x` by Horner's rule on vectors.
pub fn poly_apply_vec(m: &ComplexMatrix, coeffs: &[Complex64], x: &[Complex64]) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); x.len()];
    for a in coeffs.iter().rev() {
        acc = m.matvec(&acc);
        for (o, xi) in acc.iter_mut().zip(x) {
            *o += a * xi;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{example_union, Domain};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn poly_apply_basics() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(poly_apply(&m, &[c(0.0, 0.0), c(1.0, 0.0)]).distance(&m) < 1e-15);
        // z^2 - z vanishes because M is idempotent
        let p = [c(0.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0)];
        assert!(poly_apply(&m, &p).frobenius_norm() < 1e-15);
        let x = [c(0.3, 0.1), c(-0.2, 0.5)];
        let q = [c(1.0, 2.0), c(0.5, 0.0), c(0.0, 1.0)];
        let direct = poly_apply(&m, &q).matvec(&x);
        let fused = poly_apply_vec(&m, &q, &x);
        assert!(direct
            .iter()
            .zip(&fused)
            .all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn example_gamma_phi_routes() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        let ctx = CalculusContext::new(m, example_union(), 128).unwrap();
        let f = BoundaryFunction::polynomial(vec![c(0.2, 0.3), c(1.0, -0.5), c(0.0, 0.4)]);
        let a = ctx.gamma_phi(&AntilinearMap::ConjugateCauchy, &f).unwrap();
        let b = ctx.gamma_phi_potential(&f).unwrap();
        assert!(a.distance(&b) < 1e-9, "{}", a.distance(&b));

        let e = ctx
            .gamma_phi(&AntilinearMap::two_point_example(), &f)
            .unwrap();
        let f0 = f.eval(0, c(0.0, 0.0)).unwrap();
        let f1 = f.eval(1, c(1.0, 0.0)).unwrap();
        let expected =
            ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), f1 - f0], vec![f0 - f1, c(0.0, 0.0)]])
                .unwrap();
        assert!(e.distance(&expected) < 1e-12);
    }

    #[test]
    fn constant_gamma_phi_is_two() {
        let m = ComplexMatrix::from_real_rows(&[&[0.2, 0.5], &[0.0, -0.1]]).unwrap();
        let ctx =
            CalculusContext::new(m, Domain::ellipse(c(0.0, 0.0), 1.2, 0.9, 0.0).unwrap(), 128)
                .unwrap();
        let one = BoundaryFunction::constant(c(1.0, 0.0));
        let g = ctx
            .gamma_phi(&AntilinearMap::ConjugateCauchy, &one)
            .unwrap();
        assert!(g.distance(&ComplexMatrix::identity(2).scale(c(2.0, 0.0))) < 1e-10);
    }
}
