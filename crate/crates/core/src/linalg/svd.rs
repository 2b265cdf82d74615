use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hermitian_eigen, normalize, vec_norm, ComplexMatrix, LinalgError};

/// Largest singular value together with a maximizing unit vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularPair {
    pub value: f64,
    pub vector: Vec<Complex64>,
}

/// Top singular pair from the Hermitian eigenproblem of `A*A`, refined by
/// one power step so that the value is `‖A v‖` for the returned vector.
pub fn top_singular_pair(a: &ComplexMatrix) -> Result<SingularPair, LinalgError> {
    a.check_finite()?;
    let n = a.dim();
    let ah = a.adjoint();
    let gram = &ah * a;
    let eig = hermitian_eigen(&gram)?;
    let mut v = eig.vector(n - 1);

    let w = ah.matvec(&a.matvec(&v));
    if vec_norm(&w) > 0.0 {
        v = normalize(&w)?;
    }
    let value = vec_norm(&a.matvec(&v));
    Ok(SingularPair { value, vector: v })
}

pub fn op_norm(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(top_singular_pair(a)?.value)
}

/// `‖A*A x - value² x‖`, the residual of the norm-attaining identity.
pub fn gram_residual(a: &ComplexMatrix, pair: &SingularPair) -> f64 {
    let g = a.adjoint().matvec(&a.matvec(&pair.vector));
    let v2 = pair.value * pair.value;
    g.iter()
        .zip(&pair.vector)
        .map(|(x, y)| (x - y * v2).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
