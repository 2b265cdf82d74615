//! Atomic probability measures on the quadrature nodes that reproduce the
//! moments `⟨γ(b)x₀, x₀⟩` of a unit vector.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::family::PolyFamily;
use super::BoundsError;
use crate::calculus::{BoundaryFunction, CalculusContext};
use crate::linalg::{self, inner};

pub const DEFAULT_MOMENT_DEGREE: usize = 8;
/// Fits whose moment residual exceeds this are reported as infeasible.
pub const FEASIBILITY_TOL: f64 = 1e-4;
/// Weight of the total-mass row relative to the moment rows.
const MASS_WEIGHT: f64 = 1e3;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AtomicMeasure {
    /// Node indices carrying positive mass.
    pub atoms: Vec<usize>,
    pub weights: Vec<f64>,
    pub components: Vec<usize>,
    pub s: Vec<f64>,
    pub points: Vec<Complex64>,
    /// Largest moment mismatch after renormalization.
    pub residual: f64,
    pub feasible: bool,
    pub moment_degree: usize,
}

impl AtomicMeasure {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn component_mass(&self, component: usize) -> f64 {
        self.weights
            .iter()
            .zip(&self.components)
            .filter(|(_, &c)| c == component)
            .map(|(w, _)| w)
            .sum()
    }

    /// `∫ f dμ` for a function evaluable at the nodes.
    pub fn integrate(
        &self,
        ctx: &CalculusContext,
        f: &BoundaryFunction,
    ) -> Result<Complex64, BoundsError> {
        let values = f.node_values(ctx.quadrature())?;
        Ok(self
            .atoms
            .iter()
            .zip(&self.weights)
            .map(|(&i, w)| values[i] * w)
            .sum())
    }

    /// CSV `component,s,weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("component,s,weight\n");
        for ((c, s), w) in self.components.iter().zip(&self.s).zip(&self.weights) {
            let _ = writeln!(out, "{c},{s:.17e},{w:.17e}");
        }
        out
    }
}

/// Fits nonnegative node weights summing to one whose moments against the
/// centered per-component monomials of degree `≤ k` match `⟨γ(b)x₀, x₀⟩`.
pub fn fit_extremal_measure(
    ctx: &CalculusContext,
    x0: &[Complex64],
    k: usize,
) -> Result<AtomicMeasure, BoundsError> {
    let x0 = linalg::normalize(x0)?;
    if x0.len() != ctx.dim() {
        return Err(linalg::LinalgError::DimensionMismatch {
            expected: ctx.dim(),
            actual: x0.len(),
        }
        .into());
    }
    let fam = PolyFamily::gamma(ctx, k)?;
    let n = ctx.nodes().len();
    let basis_count = fam.coeff_len();

    let mut targets = Vec::with_capacity(basis_count);
    let mut basis_values = Vec::with_capacity(basis_count);
    for j in 0..basis_count {
        let mut a = vec![Complex64::new(0.0, 0.0); basis_count];
        a[j] = Complex64::new(1.0, 0.0);
        targets.push(inner(&fam.image(&a).matvec(&x0), &x0));
        basis_values.push(fam.node_values(&a));
    }

    // rows: Re and Im of every moment, then the weighted mass row
    let rows = 2 * basis_count + 1;
    let mut columns: Vec<Vec<f64>> = vec![vec![0.0; rows]; n];
    for (j, vals) in basis_values.iter().enumerate() {
        for (i, v) in vals.iter().enumerate() {
            columns[i][2 * j] = v.re;
            columns[i][2 * j + 1] = v.im;
        }
    }
    for col in &mut columns {
        col[rows - 1] = MASS_WEIGHT;
    }
    let mut rhs = vec![0.0; rows];
    for (j, t) in targets.iter().enumerate() {
        rhs[2 * j] = t.re;
        rhs[2 * j + 1] = t.im;
    }
    rhs[rows - 1] = MASS_WEIGHT;

    let mut w = nnls(&columns, &rhs, 10 * rows + 100);
    let mass: f64 = w.iter().sum();
    if mass > 0.0 {
        w.iter_mut().for_each(|x| *x /= mass);
    }
    let residual = basis_values
        .iter()
        .zip(&targets)
        .map(|(vals, t)| {
            let m: Complex64 = vals.iter().zip(&w).map(|(v, wi)| v * wi).sum();
            (m - t).norm()
        })
        .fold(0.0, f64::max);

    let nodes = ctx.nodes();
    let atoms: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
    Ok(AtomicMeasure {
        weights: atoms.iter().map(|&i| w[i]).collect(),
        components: atoms.iter().map(|&i| nodes[i].component).collect(),
        s: atoms.iter().map(|&i| nodes[i].s).collect(),
        points: atoms.iter().map(|&i| nodes[i].point).collect(),
        atoms,
        feasible: residual <= FEASIBILITY_TOL,
        residual,
        moment_degree: k,
    })
}

/// Lawson–Hanson active-set solver for `min ‖A w - b‖` subject to `w ≥ 0`,
/// with `A` given by columns.
pub fn nnls(columns: &[Vec<f64>], b: &[f64], max_outer: usize) -> Vec<f64> {
    let n = columns.len();
    let m = b.len();
    let scale = columns
        .iter()
        .flat_map(|c| c.iter())
        .fold(0.0f64, |a, v| a.max(v.abs()))
        .max(1.0);
    let tol = 10.0 * f64::EPSILON * scale * m.max(n) as f64;
    let mut x = vec![0.0; n];
    let mut passive = vec![false; n];

    let gradient = |x: &[f64]| -> Vec<f64> {
        let mut r = b.to_vec();
        for (j, col) in columns.iter().enumerate() {
            if x[j] != 0.0 {
                for (ri, a) in r.iter_mut().zip(col) {
                    *ri -= a * x[j];
                }
            }
        }
        columns
            .iter()
            .map(|col| col.iter().zip(&r).map(|(a, ri)| a * ri).sum())
            .collect()
    };

    for _ in 0..max_outer {
        let w = gradient(&x);
        let candidate = (0..n)
            .filter(|&j| !passive[j])
            .max_by(|&a, &b| w[a].total_cmp(&w[b]));
        let Some(j) = candidate else { break };
        if w[j] <= tol {
            break;
        }
        passive[j] = true;

        loop {
            let set: Vec<usize> = (0..n).filter(|&j| passive[j]).collect();
            let sub: Vec<&[f64]> = set.iter().map(|&j| columns[j].as_slice()).collect();
            let z = least_squares(&sub, b);
            if z.iter().all(|&v| v > 0.0) {
                for (&j, &v) in set.iter().zip(&z) {
                    x[j] = v;
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&j, &v) in set.iter().zip(&z) {
                if v <= 0.0 {
                    alpha = alpha.min(x[j] / (x[j] - v));
                }
            }
            for (&j, &v) in set.iter().zip(&z) {
                x[j] += alpha * (v - x[j]);
                if x[j] <= tol * 1e-3 {
                    x[j] = 0.0;
                    passive[j] = false;
                }
            }
            if !passive.iter().any(|&p| p) {
                break;
            }
        }
    }
    x
}

/// Least-squares solution of `A z ≈ b` by Householder QR; columns that are
/// numerically dependent get a zero coefficient.
fn least_squares(columns: &[&[f64]], b: &[f64]) -> Vec<f64> {
    let m = b.len();
    let k = columns.len();
    let mut a: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
    let mut rhs = b.to_vec();
    let mut diag = vec![0.0; k];
    let steps = k.min(m);
    let norm_scale = a
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    for j in 0..steps {
        let norm = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-13 * norm_scale {
            diag[j] = 0.0;
            continue;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[j][j..].to_vec();
        v[0] -= alpha;
        let vn2: f64 = v.iter().map(|t| t * t).sum();
        if vn2 == 0.0 {
            diag[j] = alpha;
            continue;
        }
        let reflect = |col: &mut [f64]| {
            let dot: f64 = col.iter().zip(&v).map(|(c, vi)| c * vi).sum();
            let f = 2.0 * dot / vn2;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        };
        for col in a.iter_mut().skip(j) {
            reflect(&mut col[j..]);
        }
        reflect(&mut rhs[j..]);
        diag[j] = a[j][j];
    }
    let mut z = vec![0.0; k];
    for j in (0..steps).rev() {
        if diag[j].abs() <= 1e-13 * norm_scale {
            continue;
        }
        let mut s = rhs[j];
        for t in (j + 1)..steps {
            s -= a[t][j] * z[t];
        }
        z[j] = s / diag[j];
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_exact_system() {
        let cols = [vec![1.0, 0.0, 1.0], vec![0.0, 2.0, 1.0]];
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        let z = least_squares(&refs, &[1.0, 4.0, 3.0]);
        assert!((z[0] - 1.0).abs() < 1e-14 && (z[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn nnls_clips_negative_solution() {
        // unconstrained optimum is (2, -1); constrained one puts x2 = 0
        let cols = vec![vec![1.0, 0.0], vec![1.0, 1.0]];
        let x = nnls(&cols, &[1.0, -1.0], 50);
        assert!(x.iter().all(|&v| v >= 0.0));
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1] == 0.0, "{x:?}");
    }

    #[test]
    fn nnls_interior_solution() {
        let cols = vec![vec![2.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]];
        let x = nnls(&cols, &[2.0, 3.0, 4.0], 50);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
    }
}
