use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hermitian_eigen, inner, ComplexMatrix, LinalgError};

pub const MIN_ANGLES: usize = 8;

/// Support-function sampling of the numerical range `W(M)`.
///
/// `vertices[k]` is the point `⟨M u, u⟩` for a top eigenvector `u` of
/// `Re(e^{-iθ_k} M)`; it lies in `W(M)` and on the supporting line at
/// `θ_k`. `outer_vertices[k]` is the intersection of the supporting lines at
/// `θ_k` and `θ_{k+1}`, so the outer polygon contains `W(M)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RangePolygon {
    pub angles: Vec<f64>,
    pub support_values: Vec<f64>,
    pub vertices: Vec<Complex64>,
    pub outer_vertices: Vec<Complex64>,
}

impl RangePolygon {
    /// Lower estimate of the numerical radius from the sampled data.
    pub fn radius(&self) -> f64 {
        let h = self.support_values.iter().copied().fold(f64::MIN, f64::max);
        let v = self.vertices.iter().map(|z| z.norm()).fold(0.0, f64::max);
        h.max(v)
    }

    /// Upper estimate: largest modulus over the circumscribed polygon.
    pub fn outer_radius(&self) -> f64 {
        self.outer_vertices
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// `λ_max(Re(e^{-iθ} A))`.
pub fn support_value(a: &ComplexMatrix, theta: f64) -> Result<f64, LinalgError> {
    let (h, _) = rotated_top(a, theta)?;
    Ok(h)
}

fn rotated_top(a: &ComplexMatrix, theta: f64) -> Result<(f64, Vec<Complex64>), LinalgError> {
    let rot = Complex64::from_polar(1.0, -theta);
    let h = a.scale(rot).hermitian_part();
    let e = hermitian_eigen(&h)?;
    let k = a.dim() - 1;
    Ok((e.values[k], e.vector(k)))
}

pub fn numerical_range(m: &ComplexMatrix, n_angles: usize) -> Result<RangePolygon, LinalgError> {
    if n_angles < MIN_ANGLES {
        return Err(LinalgError::TooFewAngles {
            min: MIN_ANGLES,
            got: n_angles,
        });
    }
    m.check_finite()?;
    let mut angles = Vec::with_capacity(n_angles);
    let mut support_values = Vec::with_capacity(n_angles);
    let mut vertices = Vec::with_capacity(n_angles);
    for k in 0..n_angles {
        let theta = TAU * k as f64 / n_angles as f64;
        let (h, u) = rotated_top(m, theta)?;
        angles.push(theta);
        support_values.push(h);
        vertices.push(inner(&m.matvec(&u), &u));
    }
    let outer_vertices = (0..n_angles)
        .map(|k| {
            let j = (k + 1) % n_angles;
            line_intersection(angles[k], support_values[k], angles[j], support_values[j])
        })
        .collect();
    Ok(RangePolygon {
        angles,
        support_values,
        vertices,
        outer_vertices,
    })
}

/// Intersection of `Re(e^{-iθ₁} z) = h₁` and `Re(e^{-iθ₂} z) = h₂`.
fn line_intersection(t1: f64, h1: f64, t2: f64, h2: f64) -> Complex64 {
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let det = c1 * s2 - s1 * c2;
    let x = (h1 * s2 - s1 * h2) / det;
    let y = (c1 * h2 - h1 * c2) / det;
    Complex64::new(x, y)
}

/// Numerical radius `w(A) = max_θ λ_max(Re(e^{-iθ} A))`, by dense sampling
/// followed by golden-section refinement of the best few angles.
pub fn numerical_radius(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    const COARSE: usize = 64;
    let step = TAU / COARSE as f64;
    let samples: Vec<f64> = (0..COARSE)
        .map(|k| support_value(a, step * k as f64))
        .collect::<Result<_, _>>()?;
    let mut order: Vec<usize> = (0..COARSE).collect();
    order.sort_by(|&i, &j| samples[j].total_cmp(&samples[i]));

    let mut best = samples[order[0]];
    for &k in order.iter().take(3) {
        let centre = step * k as f64;
        let refined = golden_max(|t| support_value(a, t), centre - step, centre + step, 1e-9)?;
        best = best.max(refined);
    }
    Ok(best)
}

fn golden_max(
    f: impl Fn(f64) -> Result<f64, LinalgError>,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
) -> Result<f64, LinalgError> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1)?;
        }
    }
    Ok(f1.max(f2))
}
