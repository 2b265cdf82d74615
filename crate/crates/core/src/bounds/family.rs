//! Finite-dimensional families of boundary functions used by the searches.
//!
//! A member is `f = Σ_{c,k} a_{c,k} b_{c,k}` with `b_{c,k}` equal to
//! `((z - center_c)/scale_c)^k` on component `c` and zero elsewhere. Any
//! operator that is complex-linear in `f` (such as `γ` or `γ_Φ`) is tabulated
//! once on the basis, so evaluating a member costs a short linear
//! combination.

use num_complex::Complex64;

use super::BoundsError;
use crate::calculus::{AntilinearMap, BoundaryFunction, CalculusContext};
use crate::linalg::ComplexMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone)]
pub struct PolyFamily {
    deg: usize,
    components: usize,
    centers: Vec<Complex64>,
    scales: Vec<f64>,
    /// `node_basis[i][k]`: basis function `k` of the node's component at node `i`.
    node_basis: Vec<Vec<Complex64>>,
    node_component: Vec<usize>,
    /// Image of `b_{c,k}` at index `c·(deg+1) + k`.
    images: Vec<ComplexMatrix>,
}

impl PolyFamily {
    /// Tabulates `γ` on the basis.
    pub fn gamma(ctx: &CalculusContext, deg: usize) -> Result<Self, BoundsError> {
        Self::build(ctx, deg, |f| Ok(ctx.gamma(f)?))
    }

    /// Tabulates `γ_Φ` on the basis (it is complex-linear even though `Φ` is not).
    pub fn gamma_phi(
        ctx: &CalculusContext,
        map: &AntilinearMap,
        deg: usize,
    ) -> Result<Self, BoundsError> {
        Self::build(ctx, deg, |f| Ok(ctx.gamma_phi(map, f)?))
    }

    fn build(
        ctx: &CalculusContext,
        deg: usize,
        image: impl Fn(&BoundaryFunction) -> Result<ComplexMatrix, BoundsError>,
    ) -> Result<Self, BoundsError> {
        let quad = ctx.quadrature();
        let components = quad.component_count();
        let centers: Vec<Complex64> = (0..components).map(|c| quad.component_center(c)).collect();
        let scales: Vec<f64> = (0..components).map(|c| quad.component_scale(c)).collect();
        let node_component: Vec<usize> = quad.nodes().iter().map(|n| n.component).collect();
        let node_basis = quad
            .nodes()
            .iter()
            .map(|n| {
                let u = (n.point - centers[n.component]) / scales[n.component];
                let mut powers = Vec::with_capacity(deg + 1);
                let mut acc = Complex64::new(1.0, 0.0);
                for _ in 0..=deg {
                    powers.push(acc);
                    acc *= u;
                }
                powers
            })
            .collect();
        let mut family = Self {
            deg,
            components,
            centers,
            scales,
            node_basis,
            node_component,
            images: Vec::new(),
        };
        let mut images = Vec::with_capacity(components * (deg + 1));
        for c in 0..components {
            for k in 0..=deg {
                let mut a = vec![ZERO; family.coeff_len()];
                a[c * (deg + 1) + k] = Complex64::new(1.0, 0.0);
                images.push(image(&family.to_function(&a))?);
            }
        }
        family.images = images;
        Ok(family)
    }

    pub fn deg(&self) -> usize {
        self.deg
    }

    pub fn components(&self) -> usize {
        self.components
    }

    /// Number of complex coefficients.
    pub fn coeff_len(&self) -> usize {
        self.components * (self.deg + 1)
    }

    /// Real parameter vector (interleaved real/imaginary parts) to
    /// coefficients; entries of degree above `active_deg` are zero.
    pub fn coeffs_from_params(&self, params: &[f64], active_deg: usize) -> Vec<Complex64> {
        let active = active_deg.min(self.deg) + 1;
        let mut a = vec![ZERO; self.coeff_len()];
        let mut it = params.chunks_exact(2);
        for c in 0..self.components {
            for k in 0..active {
                if let Some(p) = it.next() {
                    a[c * (self.deg + 1) + k] = Complex64::new(p[0], p[1]);
                }
            }
        }
        a
    }

    /// Inverse of [`Self::coeffs_from_params`] for the active degrees.
    pub fn params_from_coeffs(&self, a: &[Complex64], active_deg: usize) -> Vec<f64> {
        let active = active_deg.min(self.deg) + 1;
        let mut p = Vec::with_capacity(2 * self.components * active);
        for c in 0..self.components {
            for k in 0..active {
                let z = a[c * (self.deg + 1) + k];
                p.push(z.re);
                p.push(z.im);
            }
        }
        p
    }

    pub fn param_len(&self, active_deg: usize) -> usize {
        2 * self.components * (active_deg.min(self.deg) + 1)
    }

    pub fn node_values(&self, a: &[Complex64]) -> Vec<Complex64> {
        self.node_basis
            .iter()
            .zip(&self.node_component)
            .map(|(powers, &c)| {
                let base = c * (self.deg + 1);
                powers
                    .iter()
                    .zip(&a[base..base + self.deg + 1])
                    .map(|(p, q)| p * q)
                    .sum()
            })
            .collect()
    }

    /// `max_i |f(σ_i)|`.
    pub fn sup_norm(&self, a: &[Complex64]) -> f64 {
        self.node_basis
            .iter()
            .zip(&self.node_component)
            .map(|(powers, &c)| {
                let base = c * (self.deg + 1);
                powers
                    .iter()
                    .zip(&a[base..base + self.deg + 1])
                    .map(|(p, q)| p * q)
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// The tabulated operator applied to the member with coefficients `a`.
    pub fn image(&self, a: &[Complex64]) -> ComplexMatrix {
        let dim = self.images[0].dim();
        let mut acc = ComplexMatrix::zeros(dim);
        for (coef, m) in a.iter().zip(&self.images) {
            if *coef != ZERO {
                acc.add_scaled(*coef, m);
            }
        }
        acc
    }

    /// The member as a per-component polynomial in `z - center_c`.
    pub fn to_function(&self, a: &[Complex64]) -> BoundaryFunction {
        let coeffs = (0..self.components)
            .map(|c| {
                (0..=self.deg)
                    .map(|k| a[c * (self.deg + 1) + k] / self.scales[c].powi(k as i32))
                    .collect()
            })
            .collect();
        BoundaryFunction::per_component(coeffs, self.centers.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::example_union;

    #[test]
    fn images_are_linear_and_consistent() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        let ctx = CalculusContext::new(m, example_union(), 64).unwrap();
        let fam = PolyFamily::gamma(&ctx, 3).unwrap();
        let params: Vec<f64> = (0..fam.param_len(3))
            .map(|i| (i as f64 * 0.37).sin())
            .collect();
        let a = fam.coeffs_from_params(&params, 3);
        assert_eq!(fam.params_from_coeffs(&a, 3), params);
        let f = fam.to_function(&a);
        let direct = ctx.gamma(&f).unwrap();
        assert!(direct.distance(&fam.image(&a)) < 1e-12);
        let sup = f.sup_norm(ctx.quadrature()).unwrap();
        assert!((sup - fam.sup_norm(&a)).abs() < 1e-12);
        let nv = f.node_values(ctx.quadrature()).unwrap();
        assert!(nv
            .iter()
            .zip(fam.node_values(&a))
            .all(|(x, y)| (x - y).norm() < 1e-12));
    }

    #[test]
    fn truncated_parameters() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]).unwrap();
        let ctx = CalculusContext::new(m, example_union(), 32).unwrap();
        let fam = PolyFamily::gamma(&ctx, 2).unwrap();
        let a = fam.coeffs_from_params(&[1.0, 0.0, -1.0, 0.0], 0);
        assert_eq!(a[0], Complex64::new(1.0, 0.0));
        assert_eq!(a[3], Complex64::new(-1.0, 0.0));
        assert_eq!(a[1], ZERO);
    }
}
