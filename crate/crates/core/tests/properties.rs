use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use speclab::bounds::main_bound;
use speclab::calculus::{AntilinearMap, BoundaryFunction, CalculusContext};
use speclab::domain::{example_union, Domain};
use speclab::example::{example_matrix, example_x0};
use speclab::linalg::{
    gram_residual, inner, krylov_compress, numerical_range, op_norm, spectrum, support_value,
    top_singular_pair, ComplexMatrix,
};
use speclab::random::{gaussian_matrix, gaussian_poly, gaussian_vector, range_disk, trial_rng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix(seed: u64, dim: usize) -> ComplexMatrix {
    gaussian_matrix(&mut trial_rng(seed, 0), dim)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn op_norm_is_adjoint_invariant(seed in any::<u64>(), dim in 1usize..7) {
        let a = matrix(seed, dim);
        let (n, na) = (op_norm(&a).unwrap(), op_norm(&a.adjoint()).unwrap());
        prop_assert!((n - na).abs() <= 1e-12 * n.max(1.0));
    }

    #[test]
    fn top_pair_satisfies_gram_identity(seed in any::<u64>(), dim in 1usize..7) {
        let a = matrix(seed, dim);
        let pair = top_singular_pair(&a).unwrap();
        prop_assert!(gram_residual(&a, &pair) <= 1e-10 * pair.value.powi(2).max(1.0));
    }

    #[test]
    fn range_vertices_respect_every_support_line(seed in any::<u64>(), dim in 1usize..6) {
        let a = matrix(seed, dim);
        let poly = numerical_range(&a, 48).unwrap();
        for (t, h) in poly.angles.iter().zip(&poly.support_values) {
            let rot = Complex64::from_polar(1.0, -t);
            for v in &poly.vertices {
                prop_assert!((rot * v).re <= h + 1e-9);
            }
        }
    }

    #[test]
    fn spectrum_lies_in_numerical_range(seed in any::<u64>(), dim in 1usize..6) {
        let a = matrix(seed, dim);
        let eig = spectrum(&a).unwrap();
        for k in 0..64 {
            let t = TAU * k as f64 / 64.0;
            let h = support_value(&a, t).unwrap();
            for z in &eig {
                prop_assert!((Complex64::from_polar(1.0, -t) * z).re <= h + 1e-6);
            }
        }
    }

    #[test]
    fn compression_shrinks_numerical_range(seed in any::<u64>(), dim in 2usize..7, d in 0usize..4) {
        let a = matrix(seed, dim);
        let x = gaussian_vector(&mut trial_rng(seed, 1), dim);
        let k = krylov_compress(&a, &x, d).unwrap();
        for j in 0..32 {
            let t = TAU * j as f64 / 32.0;
            prop_assert!(
                support_value(&k.compressed, t).unwrap() <= support_value(&a, t).unwrap() + 1e-8
            );
        }
    }

    #[test]
    fn ellipse_normals_are_unit_and_tangent_over_i(
        a in 0.5f64..3.0, ratio in 0.2f64..1.0, rot in 0.0f64..3.2, s in 0.0f64..1.0,
    ) {
        let dom = Domain::ellipse(c(0.3, -0.2), a, a * ratio, rot).unwrap();
        let q = dom.quadrature(64).unwrap();
        for node in q.nodes() {
            let n = node.normal();
            prop_assert!((n.norm() - 1.0).abs() <= 1e-12);
            prop_assert!((n - node.tangent / Complex64::i()).norm() <= 1e-14);
        }
        let curve = &dom.components()[0];
        prop_assert!((curve.tangent(s * curve.length()).norm() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn winding_counts_containing_components(x in -0.6f64..1.6, y in -0.6f64..0.6) {
        let dom = example_union();
        let z = c(x, y);
        let inside = dom.contains_point(z).unwrap();
        prop_assume!(inside.margin.abs() > 0.05);
        let q = dom.quadrature(256).unwrap();
        let w = q.contour_integral(|n| 1.0 / (n.point - z)) / (TAU * Complex64::i());
        let expected = if inside.inside { 1.0 } else { 0.0 };
        prop_assert!((w - expected).norm() <= 1e-8, "w = {w}, z = {z}");
    }

    #[test]
    fn unitality_on_random_contexts(seed in any::<u64>(), dim in 1usize..5) {
        let m = matrix(seed, dim);
        let dom = range_disk(&m, 0.5).unwrap();
        let ctx = CalculusContext::new(m, dom, 128).unwrap();
        let one = BoundaryFunction::constant(c(1.0, 0.0));
        prop_assert!(ctx.gamma(&one).unwrap().distance(&ComplexMatrix::identity(dim)) <= 1e-10);
    }

    #[test]
    fn conjugate_cauchy_is_antilinear(seed in any::<u64>(), re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let ctx = CalculusContext::new(example_matrix(), example_union(), 128).unwrap();
        let q = ctx.quadrature();
        let mut rng = trial_rng(seed, 0);
        let f = BoundaryFunction::polynomial(gaussian_poly(&mut rng, 4));
        let g = BoundaryFunction::polynomial(gaussian_poly(&mut rng, 4));
        let alpha = c(re, im);
        let map = AntilinearMap::ConjugateCauchy;
        let lhs = ctx.phi(&map, &f.axpy(alpha, &g, q).unwrap()).unwrap().node_values(q).unwrap();
        let pf = ctx.phi(&map, &f).unwrap().node_values(q).unwrap();
        let pg = ctx.phi(&map, &g).unwrap().node_values(q).unwrap();
        for ((l, a), b) in lhs.iter().zip(&pf).zip(&pg) {
            prop_assert!((l - (alpha.conj() * a + b)).norm() <= 1e-9 * (1.0 + alpha.norm()));
        }
    }

    #[test]
    fn conjugate_cauchy_contracts_on_convex_domains(seed in any::<u64>(), ratio in 0.3f64..1.0) {
        let dom = Domain::ellipse(c(0.0, 0.0), 1.0, ratio, 0.4).unwrap();
        let m = ComplexMatrix::scalar(1, c(0.0, 0.0));
        let ctx = CalculusContext::new(m, dom, 256).unwrap();
        let f = BoundaryFunction::polynomial(gaussian_poly(&mut trial_rng(seed, 0), 5));
        let q = ctx.quadrature();
        let phi = ctx.phi(&AntilinearMap::ConjugateCauchy, &f).unwrap();
        prop_assert!(phi.sup_norm(q).unwrap() <= f.sup_norm(q).unwrap() * (1.0 + 1e-6));
    }

    #[test]
    fn example_pair_is_contractive_on_moments(seed in any::<u64>(), deg in 0usize..10) {
        let ctx = CalculusContext::new(example_matrix(), example_union(), 256).unwrap();
        let x0 = example_x0();
        let f = BoundaryFunction::polynomial(gaussian_poly(&mut trial_rng(seed, 0), deg));
        let moment = inner(&ctx.gamma(&f).unwrap().matvec(&x0), &x0).norm();
        prop_assert!(moment <= f.sup_norm(ctx.quadrature()).unwrap() * (1.0 + 1e-6));
    }

    #[test]
    fn main_bound_is_monotone(d in 0.0f64..4.0, c0 in 0.0f64..2.0, dd in 0.0f64..1.0, dc in 0.0f64..1.0) {
        let b = main_bound(d, c0).unwrap();
        prop_assert!(main_bound(d + dd, c0).unwrap() >= b - 1e-15);
        prop_assert!(main_bound(d, c0 + dc).unwrap() >= b - 1e-15);
        prop_assert!((main_bound(d, 0.0).unwrap() - d).abs() <= 1e-15 * d.max(1.0));
        // b solves b² = d·b + c
        prop_assert!((b * b - d * b - c0).abs() <= 1e-12 * (1.0 + b * b));
    }
}
