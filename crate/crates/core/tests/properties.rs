//! Invariants checked on generated instances.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use matgeo::expmlog::{expm, logm_spd};
use matgeo::lattices::{integer_det, lattices_equal, reduce_mod, round_integer_matrix, Lattice};
use matgeo::linalg::{gram_schmidt, inner_product, op_norm, orthonormality_residual, Field, Matrix, Vector};
use matgeo::manifolds::{inverse_differential, metric_gl, sqrtm_spd, SpdMatrix};
use matgeo::metricspace::{dist_point_set, dp_metric, hausdorff, p_norm, FinitePointSet, SampledPath};
use matgeo::projective::{annihilator, apply_projective, proj_from, GrassPoint};
use matgeo::sample::{self, SampleRng};
use matgeo::spectral::{eig_normal, eigh, is_nonnegative};
use matgeo::submersion::{BasePath, Submersion, SubmersionKind};

fn field(complex: bool) -> Field {
    if complex {
        Field::Complex
    } else {
        Field::Real
    }
}

fn setup(seed: u64) -> SampleRng {
    sample::rng(seed)
}

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(64)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn adjoint_is_characterized_by_the_inner_product(seed: u64, n in 1usize..6, cx: bool) {
        let mut rng = setup(seed);
        let t = sample::matrix(&mut rng, field(cx), n, n);
        let v = sample::vector(&mut rng, field(cx), n);
        let w = sample::vector(&mut rng, field(cx), n);
        let lhs = inner_product(&t.adjoint().apply(&v).unwrap(), &w).unwrap();
        let rhs = inner_product(&v, &t.apply(&w).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * t.hs_norm() * v.norm() * w.norm());
    }

    #[test]
    fn trace_is_exactly_linear_on_small_integers(seed: u64, n in 1usize..6, a in -4i32..5, b in -4i32..5) {
        let mut rng = setup(seed);
        let mut int_matrix = || {
            let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-9..10) as f64).collect();
            Matrix::from_real(n, n, &data).unwrap()
        };
        let (t1, t2) = (int_matrix(), int_matrix());
        let combo = &t1.scale_real(a as f64) + &t2.scale_real(b as f64);
        let want = t1.trace().unwrap() * a as f64 + t2.trace().unwrap() * b as f64;
        prop_assert_eq!(combo.trace().unwrap(), want);
    }

    #[test]
    fn hs_cauchy_schwarz_and_det_bound(seed: u64, n in 1usize..6, cx: bool) {
        let mut rng = setup(seed);
        let t1 = sample::matrix(&mut rng, field(cx), n, n);
        let t2 = sample::matrix(&mut rng, field(cx), n, n);
        let tr = (&t2.adjoint() * &t1).trace().unwrap().norm();
        prop_assert!(tr <= t1.hs_norm() * t2.hs_norm() * (1.0 + 1e-12));
        let op = op_norm(&t1).unwrap();
        prop_assert!(t1.det().unwrap().norm() <= op.powi(n as i32) * (1.0 + 1e-9));
    }

    #[test]
    fn vector_triangle_and_pythagoras(seed: u64, n in 1usize..8, cx: bool) {
        let mut rng = setup(seed);
        let v = sample::vector(&mut rng, field(cx), n);
        let w = sample::vector(&mut rng, field(cx), n);
        prop_assert!((&v + &w).norm() <= (v.norm() + w.norm()) * (1.0 + 1e-12));
        // Make w orthogonal to v.
        let c = inner_product(&w, &v).unwrap() / v.norm_sqr();
        let w = &w - &v.scale(c);
        let lhs = (&v + &w).norm_sqr();
        let rhs = v.norm_sqr() + w.norm_sqr();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn complexification_and_realification_norms(seed: u64, n in 1usize..6) {
        let mut rng = setup(seed);
        let a = sample::matrix(&mut rng, Field::Real, n, n);
        let ac = a.complexify();
        prop_assert!((ac.hs_norm() - a.hs_norm()).abs() <= 1e-10 * a.hs_norm());
        prop_assert!((op_norm(&ac).unwrap() - op_norm(&a).unwrap()).abs() <= 1e-10 * a.hs_norm());
        let z = sample::matrix(&mut rng, Field::Complex, n, n);
        let d = z.det().unwrap().norm_sqr();
        let dr = z.realify().det().unwrap();
        prop_assert!((dr.re - d).abs() <= 1e-9 * d.max(1e-12) && dr.im == 0.0);
    }

    #[test]
    fn eigh_reconstructs_with_orthonormal_basis(seed: u64, n in 1usize..7, cx: bool) {
        let mut rng = setup(seed);
        let a = sample::self_adjoint(&mut rng, field(cx), n);
        let e = eigh(&a).unwrap();
        prop_assert!(e.reconstruct().dist(&a) <= 1e-9 * a.hs_norm().max(1e-300));
        prop_assert!(orthonormality_residual(&e.basis.columns()) <= 1e-10);
        let op = op_norm(&a).unwrap();
        for l in &e.eigenvalues {
            prop_assert!(l.im == 0.0);
            prop_assert!(l.norm() <= op * (1.0 + 1e-9) + 1e-12);
        }
        let en = eig_normal(&a).unwrap();
        prop_assert!(en.eigenvalues.iter().all(|l| l.im.abs() <= 1e-10));
    }

    #[test]
    fn gram_matrices_are_nonnegative(seed: u64, n in 1usize..6, cx: bool) {
        let mut rng = setup(seed);
        let t = sample::matrix(&mut rng, field(cx), n, n);
        prop_assert!(is_nonnegative(&(&t.adjoint() * &t)).unwrap());
    }

    #[test]
    fn det_and_trace_from_eigenvalues(seed: u64, n in 1usize..6) {
        let mut rng = setup(seed);
        // Normal matrices are diagonalizable.
        let u = sample::unitary(&mut rng, Field::Complex, n);
        let d: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))).collect();
        let a = &(&u * &Matrix::diag(&d)) * &u.adjoint();
        let e = eig_normal(&a).unwrap();
        let prod: Complex64 = e.eigenvalues.iter().product();
        let sum: Complex64 = e.eigenvalues.iter().sum();
        let det = a.det().unwrap();
        let tr = a.trace().unwrap();
        prop_assert!((prod - det).norm() <= 1e-8 * det.norm().max(1.0));
        prop_assert!((sum - tr).norm() <= 1e-8 * tr.norm().max(1.0));
    }

    #[test]
    fn exponential_norm_bounds(seed: u64, n in 1usize..6, cx: bool, scale in 0.1f64..3.0) {
        let mut rng = setup(seed);
        let a = sample::with_op_norm(&mut rng, field(cx), n, scale);
        let na = op_norm(&a).unwrap();
        let ea = expm(&a).value;
        prop_assert!(op_norm(&ea).unwrap() <= na.exp() * (1.0 + 1e-9));
        prop_assert!(op_norm(&ea.inverse().unwrap()).unwrap() <= na.exp() * (1.0 + 1e-9));
        let adj = ea.adjoint().dist(&expm(&a.adjoint()).value);
        prop_assert!(adj <= 1e-10 * na.exp());
    }

    #[test]
    fn exponential_transports_eigenvectors(seed: u64, n in 1usize..5) {
        let mut rng = setup(seed);
        let v = sample::invertible(&mut rng, Field::Complex, n, 20.0);
        let d: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let a = &(&v * &Matrix::diag(&d)) * &v.inverse().unwrap();
        for &t in &[-1.0, 0.5, 2.0] {
            let e = expm(&a.scale_real(t)).value;
            for (j, &l) in d.iter().enumerate() {
                let x = v.column(j);
                let lhs = e.apply(&x).unwrap();
                let rhs = x.scale((l * t).exp());
                prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-9 * x.norm().max(1.0) * rhs.norm().max(1.0));
            }
        }
    }

    #[test]
    fn exponential_preserves_block_triangular_patterns(seed: u64, k in 1usize..4, m in 1usize..4) {
        let mut rng = setup(seed);
        let n = k + m;
        let mut a = sample::matrix(&mut rng, Field::Real, n, n);
        let mut entries = a.entries().to_vec();
        for i in k..n {
            for j in 0..k {
                entries[i * n + j] = Complex64::new(0.0, 0.0);
            }
        }
        a = Matrix::new(n, n, Field::Real, entries).unwrap();
        let e = expm(&a).value;
        let off: f64 = (k..n).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| e.get(i, j).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(off <= 1e-12 * e.hs_norm());
    }

    #[test]
    fn spd_log_and_exp_are_inverse(seed: u64, n in 1usize..5, cx: bool, scale in 0.1f64..3.0) {
        let mut rng = setup(seed);
        let s = sample::self_adjoint(&mut rng, field(cx), n);
        let s = s.scale_real(scale / op_norm(&s).unwrap().max(1e-300));
        let p = SpdMatrix::new(expm(&s).value).unwrap();
        let back = logm_spd(&p);
        prop_assert!(back.dist(&s) <= 1e-8 * s.hs_norm().max(1.0));
    }

    #[test]
    fn metric_invariances(seed: u64, n in 1usize..5, cx: bool) {
        let mut rng = setup(seed);
        let f = field(cx);
        let t = sample::invertible(&mut rng, f, n, 30.0);
        let z = sample::invertible(&mut rng, f, n, 30.0);
        let a = sample::matrix(&mut rng, f, n, n);
        let b = sample::matrix(&mut rng, f, n, n);
        let tinv = t.inverse().unwrap();
        let scale = (&tinv * &a).hs_norm() * (&tinv * &b).hs_norm();
        let base = metric_gl(&t, &a, &b).unwrap();
        prop_assert!((metric_gl(&t, &b, &a).unwrap() - base).abs() <= 1e-12 * scale);
        prop_assert!((metric_gl(&(&z * &t), &(&z * &a), &(&z * &b)).unwrap() - base).abs() <= 1e-9 * scale);
        prop_assert!((metric_gl(&(&t * &z), &(&a * &z), &(&b * &z)).unwrap() - base).abs() <= 1e-9 * scale);
        let da = inverse_differential(&t, &a).unwrap();
        let db = inverse_differential(&t, &b).unwrap();
        prop_assert!((metric_gl(&tinv, &da, &db).unwrap() - base).abs() <= 1e-9 * scale);
    }

    #[test]
    fn congruence_acts_transitively_on_spd(seed: u64, n in 1usize..5, cx: bool) {
        let mut rng = setup(seed);
        let p1 = SpdMatrix::new(sample::spd(&mut rng, field(cx), n, 0.2)).unwrap();
        let p2 = SpdMatrix::new(sample::spd(&mut rng, field(cx), n, 0.2)).unwrap();
        let z = sqrtm_spd(&p2).value() * sqrtm_spd(&p1).inverse().value();
        let moved = &(&z * p1.value()) * &z.adjoint();
        prop_assert!(moved.dist(p2.value()) <= 1e-9 * p2.value().hs_norm());
    }

    #[test]
    fn anti_self_adjoint_exponentials_are_unitary(seed: u64, n in 1usize..6, cx: bool) {
        let mut rng = setup(seed);
        let k = sample::anti_self_adjoint(&mut rng, field(cx), n).scale_real(3.0);
        let u = expm(&k).value;
        prop_assert!((&u.adjoint() * &u).dist(&Matrix::identity(n, field(cx))) <= 1e-9);
    }

    #[test]
    fn lattice_equality_is_an_equivalence(seed: u64, n in 1usize..5) {
        let mut rng = setup(seed);
        let b = sample::invertible(&mut rng, Field::Real, n, 50.0);
        let l1 = Lattice::new(b.clone()).unwrap();
        let l2 = Lattice::new(&b * &sample::unimodular(&mut rng, n, n + 3)).unwrap();
        let l3 = Lattice::new(l2.basis() * &sample::unimodular(&mut rng, n, n + 3)).unwrap();
        prop_assert!(lattices_equal(&l1, &l1).unwrap());
        prop_assert!(lattices_equal(&l1, &l2).unwrap() && lattices_equal(&l2, &l1).unwrap());
        prop_assert!(lattices_equal(&l2, &l3).unwrap() && lattices_equal(&l1, &l3).unwrap());
    }

    #[test]
    fn unimodular_samples_have_integer_det_one(seed: u64, n in 1usize..7, ops in 0usize..12) {
        let mut rng = setup(seed);
        let u = sample::unimodular(&mut rng, n, ops);
        let m = round_integer_matrix(&u, 0.0).unwrap();
        prop_assert_eq!(integer_det(&m), 1);
    }

    #[test]
    fn quotient_map_is_a_homomorphism(seed: u64, n in 1usize..5) {
        let mut rng = setup(seed);
        let l = Lattice::new(sample::invertible(&mut rng, Field::Real, n, 20.0)).unwrap();
        let x = sample::vector(&mut rng, Field::Real, n).scale(Complex64::new(7.0, 0.0));
        let y = sample::vector(&mut rng, Field::Real, n).scale(Complex64::new(7.0, 0.0));
        let direct = reduce_mod(&l, &(&x + &y)).unwrap();
        let via = reduce_mod(&l, &(reduce_mod(&l, &x).unwrap().rep() + reduce_mod(&l, &y).unwrap().rep())).unwrap();
        for (a, b) in direct.coords().iter().zip(via.coords()) {
            let d = (a - b).abs();
            // Coordinates live on the circle R/Z.
            prop_assert!(d.min(1.0 - d) <= 1e-9);
        }
        let twice = reduce_mod(&l, direct.rep()).unwrap();
        prop_assert_eq!(twice.coords(), direct.coords());
    }

    #[test]
    fn projective_inverse_and_subspaces(seed: u64, n in 2usize..6, cx: bool) {
        let mut rng = setup(seed);
        let f = field(cx);
        let a = sample::invertible(&mut rng, f, n, 100.0);
        let p = proj_from(&sample::vector(&mut rng, f, n)).unwrap();
        let there = apply_projective(&a, &p).unwrap();
        let back = apply_projective(&a.inverse().unwrap(), &there).unwrap();
        prop_assert!(back.rep().max_abs_diff(p.rep()) <= 1e-10);
        // Some chart coordinate is at least 1/sqrt(n).
        let best = p.rep().entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!(best >= 1.0 / (n as f64).sqrt() - 1e-12);
        // A maps the points of P(L) into P(A(L)).
        let k = rng.gen_range(1..n);
        let vs: Vec<Vector> = (0..k).map(|_| sample::vector(&mut rng, f, n)).collect();
        let l = GrassPoint::new(n, &vs).unwrap();
        let image = l.image(&a).unwrap();
        prop_assert_eq!(image.dim(), k);
        let inside = &vs[0] + &vs[k - 1];
        let moved = apply_projective(&a, &proj_from(&inside).unwrap()).unwrap();
        prop_assert!(image.distance_to(moved.rep()).unwrap() <= 1e-9);
        prop_assert_eq!(annihilator(&l).dim(), n - k);
    }

    #[test]
    fn dp_metric_axioms_and_subadditivity(seed: u64, n in 1usize..6, p in prop::sample::select(vec![0.3, 0.5, 1.0, 1.5, 2.0, 3.0, f64::INFINITY])) {
        let mut rng = setup(seed);
        let x = sample::vector(&mut rng, Field::Real, n);
        let y = sample::vector(&mut rng, Field::Real, n);
        let z = sample::vector(&mut rng, Field::Real, n);
        let d = |a: &Vector, b: &Vector| dp_metric(a, b, p).unwrap();
        prop_assert_eq!(d(&x, &x), 0.0);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= (d(&x, &y) + d(&y, &z)) * (1.0 + 1e-12));
        if p <= 1.0 {
            let s = |v: &Vector| p_norm(v, p).unwrap().powf(p);
            prop_assert!(s(&(&x + &y)) <= (s(&x) + s(&y)) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn hausdorff_bounds_point_distances(seed: u64, dim in 1usize..4, ka in 1usize..6, kb in 1usize..6) {
        let mut rng = setup(seed);
        let a: Vec<Vector> = (0..ka).map(|_| sample::vector(&mut rng, Field::Real, dim)).collect();
        let b: Vec<Vector> = (0..kb).map(|_| sample::vector(&mut rng, Field::Real, dim)).collect();
        let a = FinitePointSet::new(a, 2.0).unwrap();
        let b = FinitePointSet::new(b, 2.0).unwrap();
        let h = hausdorff(&a, &b).unwrap();
        let x = sample::vector(&mut rng, Field::Real, dim);
        let gap = (dist_point_set(&x, &a).unwrap() - dist_point_set(&x, &b).unwrap()).abs();
        prop_assert!(gap <= h * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn refining_a_partition_never_shortens_it(seed: u64, k in 2usize..40) {
        let mut rng = setup(seed);
        let f = |t: f64| Vector::real(&[t.cos(), (2.0 * t).sin(), t * t]);
        let mut times: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..3.0)).collect();
        times.push(0.0);
        times.push(3.0);
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        times.dedup();
        let coarse = SampledPath::new(times.clone(), times.iter().map(|&t| f(t)).collect(), 2.0).unwrap();
        let extra: f64 = rng.gen_range(0.0..3.0);
        if !times.contains(&extra) {
            times.push(extra);
        }
        times.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let fine = SampledPath::new(times.clone(), times.iter().map(|&t| f(t)).collect(), 2.0).unwrap();
        prop_assert!(fine.partition_sum() >= coarse.partition_sum() * (1.0 - 1e-14));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn submersions_are_open_at_sampled_centers(seed: u64) {
        let mut rng = setup(seed);
        let sub = Submersion::new(SubmersionKind::SphereToCP(1)).unwrap();
        let p = sub.random_point(&mut rng);
        // Every horizontal unit direction of length 1e-2 moves the image by
        // at least gain·1e-2 ≥ 1e-3.
        let gain = sub.min_horizontal_gain(&p).unwrap();
        prop_assert!(gain * 1e-2 >= 1e-3);
    }

    #[test]
    fn transport_there_and_back_returns_home(seed: u64) {
        let mut rng = setup(seed);
        let sub = Submersion::new(SubmersionKind::SphereToCP(1)).unwrap();
        let p = sub.random_point(&mut rng);
        let q = sub.random_point(&mut rng);
        let z = Vector::from_realified(&p);
        let w = Vector::from_realified(&q);
        let c = inner_product(&w, &z).unwrap();
        let w = &w - &z.scale(c);
        prop_assume!(w.norm() > 0.1);
        let w = w.scale(Complex64::new(1.0 / w.norm(), 0.0));
        let (zr, wr) = (z.realify(), w.realify());
        let alpha = BasePath::projected(sub, move |t| &(&zr * (0.7 * t).cos()) + &(&wr * (0.7 * t).sin()), 0.0, 1.0, 100).unwrap();
        let there = sub.horizontal_lift(&alpha, &p).unwrap();
        let back = sub.horizontal_lift(&alpha.reversed(), there.end()).unwrap();
        prop_assert!(back.end().max_abs_diff(&p) <= 1e-6);
        prop_assert!(there.horizontality_residual(&sub).unwrap() <= 1e-6);
    }
}

#[test]
fn gram_schmidt_output_is_orthonormal() {
    let mut rng = sample::rng(11);
    for n in 1..7 {
        let vs: Vec<Vector> = (0..n).map(|_| sample::vector(&mut rng, Field::Complex, n)).collect();
        assert!(orthonormality_residual(&gram_schmidt(&vs).unwrap()) <= 1e-12);
    }
}
