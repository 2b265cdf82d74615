use num_complex::Complex64;

use super::{inner, vec_norm, ComplexMatrix, LinalgError};

/// Vectors whose norm falls below this (relative to `‖M‖_F`) after
/// orthogonalization are dropped: the Krylov space became invariant.
const BREAKDOWN_TOL: f64 = 1e-12;

/// Compression `Π M Π*` of `M` onto a Krylov subspace, with its orthonormal basis.
#[derive(Debug, Clone)]
pub struct KrylovCompression {
    pub compressed: ComplexMatrix,
    /// Orthonormal basis vectors, each of length `dim(M)`.
    pub basis: Vec<Vec<Complex64>>,
}

impl KrylovCompression {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `x` in the basis, `Π x`.
    pub fn project(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.basis.iter().map(|q| inner(x, q)).collect()
    }

    /// Lifts coordinates back to the ambient space, `Π* y`.
    pub fn lift(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.basis.first().map_or(0, Vec::len);
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (coef, q) in y.iter().zip(&self.basis) {
            for (o, qi) in out.iter_mut().zip(q) {
                *o += coef * qi;
            }
        }
        out
    }
}

/// Orthonormalizes `x, Mx, …, M^d x` by Arnoldi with modified Gram–Schmidt
/// and one reorthogonalization pass, then forms the compression.
pub fn krylov_compress(
    m: &ComplexMatrix,
    x: &[Complex64],
    d: usize,
) -> Result<KrylovCompression, LinalgError> {
    if x.len() != m.dim() {
        return Err(LinalgError::DimensionMismatch {
            expected: m.dim(),
            actual: x.len(),
        });
    }
    let xn = vec_norm(x);
    if xn == 0.0 || !xn.is_finite() {
        return Err(LinalgError::ZeroVector);
    }
    let mut basis = vec![x.iter().map(|z| z / xn).collect::<Vec<_>>()];
    let scale = m.frobenius_norm();
    let max_rank = (d + 1).min(m.dim());

    while basis.len() < max_rank {
        let mut w = m.matvec(basis.last().expect("non-empty"));
        for _pass in 0..2 {
            for q in &basis {
                let h = inner(&w, q);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= h * qi;
                }
            }
        }
        let wn = vec_norm(&w);
        if scale == 0.0 || wn < BREAKDOWN_TOL * scale {
            break;
        }
        basis.push(w.into_iter().map(|z| z / wn).collect());
    }

    let k = basis.len();
    let images: Vec<Vec<Complex64>> = basis.iter().map(|q| m.matvec(q)).collect();
    let compressed = ComplexMatrix::from_fn(k, |i, j| inner(&images[j], &basis[i]));
    Ok(KrylovCompression { compressed, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_rayleigh_quotient() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let x = [Complex64::new(1.0, 0.0), Complex64::new(1.0, 1.0)];
        let k = krylov_compress(&m, &x, 0).unwrap();
        assert_eq!(k.rank(), 1);
        let rq = inner(&m.matvec(&x), &x) / inner(&x, &x);
        assert!((k.compressed[(0, 0)] - rq).norm() < 1e-14);
    }

    #[test]
    fn zero_vector_rejected() {
        let m = ComplexMatrix::identity(2);
        let x = [Complex64::new(0.0, 0.0); 2];
        assert!(matches!(
            krylov_compress(&m, &x, 2),
            Err(LinalgError::ZeroVector)
        ));
    }

    #[test]
    fn invariant_subspace_breaks_down_early() {
        let m = ComplexMatrix::identity(4);
        let x = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let k = krylov_compress(&m, &x, 3).unwrap();
        assert_eq!(k.rank(), 1);
    }
}
