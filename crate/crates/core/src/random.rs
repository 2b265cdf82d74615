//! Seeded random instances: matrices, polynomials and admissible domains.
//!
//! Every generator takes an explicit RNG; campaigns derive one ChaCha stream
//! per trial from `(seed, trial)` so any single case can be replayed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::domain::{Domain, DomainError};
use crate::linalg::{numerical_range, op_norm, ComplexMatrix, LinalgError};

/// Independent RNG for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Polynomial of degree `deg` with standard complex Gaussian coefficients.
pub fn gaussian_poly<R: Rng + ?Sized>(rng: &mut R, deg: usize) -> Vec<Complex64> {
    gaussian_vector(rng, deg + 1)
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(rng))
}

/// Gaussian matrix rescaled to operator norm `norm`.
pub fn matrix_with_norm<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    norm: f64,
) -> Result<ComplexMatrix, LinalgError> {
    let m = gaussian_matrix(rng, dim);
    let current = op_norm(&m)?;
    Ok(m.scale(Complex64::new(norm / current, 0.0)))
}

/// Origin-centered disk of radius `‖M‖·(1 + margin) + margin`.
pub fn norm_disk(m: &ComplexMatrix, margin: f64) -> Result<Domain, DomainError> {
    let r = op_norm(m)? * (1.0 + margin) + margin;
    Domain::disk(Complex64::new(0.0, 0.0), r)
}

/// Disk around the centroid of the outer numerical-range polygon whose
/// distance to that polygon is at least `margin`.
pub fn range_disk(m: &ComplexMatrix, margin: f64) -> Result<Domain, DomainError> {
    let poly = numerical_range(m, 128)?;
    let center = centroid(&poly.outer_vertices);
    let reach = poly
        .outer_vertices
        .iter()
        .map(|v| (v - center).norm())
        .fold(0.0, f64::max);
    Domain::disk(center, reach + margin)
}

/// Randomly rotated ellipse containing the outer numerical-range polygon at
/// distance at least `margin`. The aspect ratio is drawn from `[1, 2]`.
pub fn range_ellipse<R: Rng + ?Sized>(
    rng: &mut R,
    m: &ComplexMatrix,
    margin: f64,
) -> Result<Domain, DomainError> {
    let poly = numerical_range(m, 128)?;
    let center = centroid(&poly.outer_vertices);
    let rot = rng.random_range(0.0..std::f64::consts::PI);
    let ratio = rng.random_range(1.0..2.0);
    // smallest scale t with every vertex inside the ellipse (t·ratio, t)
    let frame = Complex64::from_polar(1.0, -rot);
    let need = poly
        .outer_vertices
        .iter()
        .map(|v| {
            let w = (v - center) * frame;
            ((w.re / ratio).powi(2) + w.im.powi(2)).sqrt()
        })
        .fold(0.0, f64::max);
    let mut t = need.max(margin) + margin;
    for _ in 0..60 {
        let dom = Domain::ellipse(center, t * ratio, t, rot)?;
        let worst = poly
            .outer_vertices
            .iter()
            .map(|&v| {
                dom.components()[0].distance(v)
                    * if dom.components()[0].encloses(v) {
                        1.0
                    } else {
                        -1.0
                    }
            })
            .fold(f64::INFINITY, f64::min);
        if worst >= margin {
            return Ok(dom);
        }
        t += margin.max(worst.abs());
    }
    Domain::ellipse(center, t * ratio, t, rot)
}

/// Diagonalizable matrix `V diag(λ) V⁻¹` with a random well-conditioned `V`.
pub fn diagonalizable<R: Rng + ?Sized>(
    rng: &mut R,
    eigenvalues: &[Complex64],
    skew: f64,
) -> Result<ComplexMatrix, LinalgError> {
    let n = eigenvalues.len();
    let g = gaussian_matrix(rng, n);
    let v = &ComplexMatrix::identity(n) + &g.scale(Complex64::new(skew, 0.0));
    let vinv = crate::linalg::inverse(&v)?;
    Ok(&(&v * &ComplexMatrix::from_diagonal(eigenvalues)) * &vinv)
}

fn centroid(points: &[Complex64]) -> Complex64 {
    points.iter().sum::<Complex64>() / points.len() as f64
}
