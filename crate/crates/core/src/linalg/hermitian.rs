use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

/// Relative asymmetry accepted before a matrix is symmetrized.
const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 64;

/// Eigen-decomposition of a Hermitian matrix; eigenvalues ascending, eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }
}

fn check_hermitian(h: &ComplexMatrix) -> Result<(), LinalgError> {
    let defect = h.hermitian_defect();
    let tolerance = HERMITIAN_TOL * h.frobenius_norm().max(f64::MIN_POSITIVE);
    if defect > tolerance && defect > f64::MIN_POSITIVE {
        return Err(LinalgError::NotHermitian { defect, tolerance });
    }
    Ok(())
}

/// Cyclic complex Jacobi. The input is symmetrized after the Hermitian check.
pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    check_hermitian(h)?;
    Ok(jacobi(h.hermitian_part()))
}

fn jacobi(mut a: ComplexMatrix) -> HermitianEigen {
    let n = a.dim();
    let mut v = ComplexMatrix::identity(n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    let scale = a.frobenius_norm();
    if n > 1 && scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= 1e-17 * scale {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    HermitianEigen { values, vectors }
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Ignore rotations that cannot change the diagonal in floating point.
    if b < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        a[(p, q)] = Complex64::new(0.0, 0.0);
        a[(q, p)] = Complex64::new(0.0, 0.0);
        return;
    }
    let phase = apq / b;
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, conj(phase)) * [[c, s], [-s, c]] restricted to (p, q).
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = -phase.conj() * s;
    let gqq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
}

pub fn herm_min_eig(h: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(hermitian_eigen(h)?.values[0])
}

pub fn herm_max_eig(h: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(*hermitian_eigen(h)?.values.last().expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_min() {
        let h = ComplexMatrix::from_real_rows(&[&[-1.0, 0.0], &[0.0, 2.0]]).unwrap();
        assert_eq!(herm_min_eig(&h).unwrap(), -1.0);
    }

    #[test]
    fn rank_one_projector_has_zero_min() {
        let x = [c(0.6, 0.0), c(0.0, 0.8)];
        let h = ComplexMatrix::from_fn(2, |i, j| x[i] * x[j].conj());
        assert!(herm_min_eig(&h).unwrap().abs() < 1e-14);
        assert!((herm_max_eig(&h).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn decomposition_residual() {
        let h = ComplexMatrix::from_fn(5, |i, j| {
            let z = c(
                (i + 2 * j) as f64 * 0.37 % 1.3,
                (i as f64 - j as f64) * 0.21,
            );
            if i == j {
                c(z.re, 0.0)
            } else {
                z
            }
        })
        .hermitian_part();
        let e = hermitian_eigen(&h).unwrap();
        for k in 0..5 {
            let x = e.vector(k);
            let hx = h.matvec(&x);
            let r: f64 = hx
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b * e.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-13, "residual {r}");
        }
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            herm_min_eig(&h),
            Err(LinalgError::NotHermitian { .. })
        ));
    }
}
