use num_complex::Complex64;

use super::{normalize, vec_norm, ComplexMatrix, LinalgError, Lu};

const MAX_ITER_PER_EIGENVALUE: usize = 60;

/// Reduces `a` to upper Hessenberg form by Householder reflections.
fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = ((k + 1)..n).map(|i| h[(i, k)]).collect();
        let xnorm = vec_norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vnorm = vec_norm(&v);
        if vnorm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vnorm);

        // H <- (I - 2vv*) H
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += vi.conj() * h[(k + 1 + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= vi * dot * 2.0;
            }
        }
        // H <- H (I - 2vv*)
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dot += h[(i, k + 1 + t)] * vi;
            }
            for (t, vi) in v.iter().enumerate() {
                h[(i, k + 1 + t)] -= dot * vi.conj() * 2.0;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let s1 = mean + disc;
    let s2 = mean - disc;
    if (s1 - d).norm() <= (s2 - d).norm() {
        s1
    } else {
        s2
    }
}

/// Eigenvalues with algebraic multiplicity, via Hessenberg reduction and
/// single-shift complex QR with Wilkinson shifts.
pub fn spectrum(a: &ComplexMatrix) -> Result<Vec<Complex64>, LinalgError> {
    a.check_finite()?;
    let n = a.dim();
    let mut h = hessenberg(a);
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let norm_scale = h.max_abs();

    loop {
        if hi == 0 {
            eig[0] = h[(0, 0)];
            break;
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let reference = if diag == 0.0 { norm_scale } else { diag };
            if sub <= f64::EPSILON * reference {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(LinalgError::NoConvergence {
                iterations: iter,
                index: hi,
            });
        }

        let mu = if iter.is_multiple_of(11) {
            // exceptional shift to break cycles
            h[(hi, hi)]
                + Complex64::new(h[(hi, hi - 1)].norm() * 0.75, h[(hi, hi - 1)].norm() * 0.4)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, l, hi, mu);
    }
    Ok(eig)
}

/// One explicit shifted QR step on the active block `l..=hi`.
fn qr_step(h: &mut ComplexMatrix, l: usize, hi: usize, mu: Complex64) {
    for i in l..=hi {
        h[(i, i)] -= mu;
    }
    let mut rotations = Vec::with_capacity(hi - l);
    for k in l..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (1.0, Complex64::new(0.0, 0.0))
        } else if x.norm() == 0.0 {
            (0.0, Complex64::new(1.0, 0.0))
        } else {
            let c = x.norm() / r;
            let s = (x / x.norm()) * y.conj() / r;
            (c, s)
        };
        for j in k..=hi {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = a * c + s * b;
            h[(k + 1, j)] = -s.conj() * a + b * c;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = l + offset;
        let last = (k + 2).min(hi);
        for i in l..=last {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s.conj();
            h[(i, k + 1)] = -a * s + b * c;
        }
    }
    for i in l..=hi {
        h[(i, i)] += mu;
    }
}

pub fn spectral_radius(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(spectrum(a)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Unit eigenvector for an (approximate) eigenvalue, by inverse iteration.
pub fn eigenvector(a: &ComplexMatrix, lambda: Complex64) -> Result<Vec<Complex64>, LinalgError> {
    let n = a.dim();
    let scale = a.max_abs().max(1.0);
    let mut shift = lambda + Complex64::new(scale * 1e-10, scale * 1e-10);
    let mut lu = None;
    for _ in 0..8 {
        let shifted = &ComplexMatrix::scalar(n, shift) - a;
        match Lu::factorize(&shifted) {
            Ok(f) => {
                lu = Some(f);
                break;
            }
            Err(_) => shift += Complex64::new(scale * 1e-8, 0.0),
        }
    }
    let lu = lu.ok_or(LinalgError::Singular { pivot: 0 })?;
    let mut x: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.1 * i as f64, 0.05 * i as f64))
        .collect();
    x = normalize(&x)?;
    for _ in 0..4 {
        x = normalize(&lu.solve(&x))?;
    }
    Ok(x)
}
