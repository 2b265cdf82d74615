use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError};

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    pivots: Vec<usize>,
}

impl Lu {
    pub fn factorize(a: &ComplexMatrix) -> Result<Self, LinalgError> {
        let n = a.dim();
        let mut lu = a.clone();
        let mut pivots: Vec<usize> = (0..n).collect();
        let scale = a.max_abs().max(f64::MIN_POSITIVE);

        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best <= scale * f64::EPSILON * 1e-2 {
                return Err(LinalgError::Singular { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                pivots.swap(k, p);
            }
            let d = lu[(k, k)];
            for i in (k + 1)..n {
                let l = lu[(i, k)] / d;
                lu[(i, k)] = l;
                if l != Complex64::new(0.0, 0.0) {
                    for j in (k + 1)..n {
                        let u = lu[(k, j)];
                        lu[(i, j)] -= l * u;
                    }
                }
            }
        }
        Ok(Self { lu, pivots })
    }

    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.lu.dim();
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        let mut y: Vec<Complex64> = self.pivots.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut v = y[i];
            for j in 0..i {
                v -= self.lu[(i, j)] * y[j];
            }
            y[i] = v;
        }
        for i in (0..n).rev() {
            let mut v = y[i];
            for j in (i + 1)..n {
                v -= self.lu[(i, j)] * y[j];
            }
            y[i] = v / self.lu[(i, i)];
        }
        y
    }

    pub fn inverse(&self) -> ComplexMatrix {
        let n = self.lu.dim();
        let mut inv = ComplexMatrix::zeros(n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.solve(&e);
            for i in 0..n {
                inv[(i, j)] = col[i];
            }
        }
        inv
    }
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    Ok(Lu::factorize(a)?.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_multiplies_back() {
        let a = ComplexMatrix::from_fn(4, |i, j| {
            Complex64::new((i * 3 + j) as f64 % 5.0 - 2.0, (i as f64 - j as f64) * 0.3)
        });
        let inv = inverse(&a).unwrap();
        let r = (&(&a * &inv) - &ComplexMatrix::identity(4)).frobenius_norm();
        assert!(r < 1e-12, "residual {r}");
    }

    #[test]
    fn singular_detected() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0]]).unwrap();
        assert!(matches!(inverse(&a), Err(LinalgError::Singular { .. })));
    }
}
