use asympolar::numlin::{
    abs, det, eig_general, eigh, inverse, loewner_leq, lq, minor_det, psd_power, qr, subsets, svd, CMatrix,
    HermitianView, PsdMatrix, C64,
};
use asympolar::random::{complex_matrix, psd_bounded, rng, unitary};
use proptest::prelude::*;

fn cauchy_binet_gap(a: &CMatrix, b: &CMatrix) -> f64 {
    let (p, n) = a.shape();
    let all_p: Vec<usize> = (0..p).collect();
    let lhs = det(&(a * b)).unwrap();
    let rhs: C64 = subsets(n, p)
        .iter()
        .map(|j| minor_det(a, &all_p, j).unwrap() * minor_det(b, j, &all_p).unwrap())
        .sum();
    (lhs - rhs).norm() / lhs.norm().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_binet(seed in any::<u64>(), n in 1usize..=5, p_frac in 0.0f64..1.0) {
        let p = 1 + ((n as f64 * p_frac) as usize).min(n - 1);
        let mut r = rng(seed);
        let a = complex_matrix(&mut r, p, n);
        let b = complex_matrix(&mut r, n, p);
        prop_assert!(cauchy_binet_gap(&a, &b) <= 1e-9);
    }

    #[test]
    fn unitary_rows_have_unit_minor_mass(seed in any::<u64>(), n in 1usize..=5, p_frac in 0.0f64..1.0) {
        let p = 1 + ((n as f64 * p_frac) as usize).min(n - 1);
        let u = unitary(&mut rng(seed), n, false);
        let rows: Vec<usize> = (0..p).collect();
        let mass: f64 = subsets(n, p).iter().map(|j| minor_det(&u, &rows, j).unwrap().norm_sqr()).sum();
        prop_assert!((mass - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..=8, cols in 1usize..=8) {
        let a = complex_matrix(&mut rng(seed), rows, cols);
        let f = svd(&a).unwrap();
        let k = f.s.len();
        let mut us = f.u.clone();
        for j in 0..k {
            for i in 0..rows {
                us[(i, j)] *= f.s[j];
            }
        }
        let back = &us.select_columns(&(0..k).collect::<Vec<_>>()) * &f.v.select_columns(&(0..k).collect::<Vec<_>>()).adjoint();
        prop_assert!(back.max_dist(&a) <= 1e-10 * a.max_abs().max(1.0));
        prop_assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn factorizations_round_trip() {
    let mut r = rng(1);
    for k in 0..100 {
        let n = 1 + k % 8;
        let a = complex_matrix(&mut r, n, n);
        let scale = a.max_abs();
        let id = CMatrix::identity(n);

        let q = qr(&a).unwrap();
        assert!((&q.q * &q.r).max_dist(&a) <= 1e-10 * scale);
        assert!((&q.q.adjoint() * &q.q).max_dist(&id) <= 1e-10);
        let l = lq(&a).unwrap();
        assert!((&l.l * &l.q).max_dist(&a) <= 1e-10 * scale);
        for i in 0..n {
            assert!(q.r[(i, i)].re > 0.0 && q.r[(i, i)].im == 0.0);
            assert!(l.l[(i, i)].re > 0.0 && l.l[(i, i)].im == 0.0);
        }

        let h = (&a + &a.adjoint()).hermitian_part();
        let e = eigh(&HermitianView::new(&h).unwrap()).unwrap();
        assert!(e.reconstruct().max_dist(&h) <= 1e-10 * scale);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));

        let g = eig_general(&a).unwrap();
        let av = &a * &g.v;
        let vl = &g.v * &CMatrix::from_diag(&g.lambda);
        assert!(av.max_dist(&vl) <= 1e-9 * scale * g.condition_estimate.max(1.0));
        let back = &vl * &inverse(&g.v).unwrap();
        assert!(back.max_dist(&a) <= 1e-8 * scale);
    }
}

#[test]
fn singular_values_are_eigenvalues_of_abs() {
    let mut r = rng(2);
    for k in 0..50 {
        let n = 1 + k % 6;
        let a = complex_matrix(&mut r, n, n);
        let s = svd(&a).unwrap().s;
        let e = abs(&a).unwrap();
        for (x, y) in s.iter().zip(e.eigenvalues()) {
            assert!((x - y).abs() <= 1e-9 * s[0].max(1.0));
        }
    }
}

#[test]
fn matrix_roots_are_loewner_monotone() {
    let mut r = rng(3);
    for k in 0..50 {
        let n = 1 + k % 5;
        let a = psd_bounded(&mut r, n, 2.0);
        let gap = psd_bounded(&mut r, n, 1.0);
        let b = (&a + &gap).hermitian_part();
        let pa = PsdMatrix::new(&a).unwrap();
        let pb = PsdMatrix::new(&b).unwrap();
        for m in 1..=6 {
            let x = 1.0 / (2.0 * m as f64);
            let ra = psd_power(&pa, x).unwrap();
            let rb = psd_power(&pb, x).unwrap();
            assert!(loewner_leq(ra.view(), rb.view(), 1e-9).unwrap(), "pair {k}, m={m}");
        }
    }
}
