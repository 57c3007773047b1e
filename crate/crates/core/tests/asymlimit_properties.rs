use asympolar::asymlimit::{
    default_schedule, direct_root, growth_exponent, invariance_defect, iterate_limit, iterate_root,
    nayak_projections, predicted_limit_left, predicted_limit_right, Side,
};
use asympolar::jordan::{assemble, JordanSpec};
use asympolar::numlin::{CMatrix, C64};
use asympolar::random::{complex_vector, jordan_spec, nonsingular, rng, standard_suite, SpecShape};
use asympolar::Tolerances;

fn random_specs(seed: u64, count: usize, zero_probability: f64, real: bool) -> Vec<JordanSpec> {
    let mut r = rng(seed);
    (0..count)
        .map(|k| {
            let mut shape = SpecShape::new(2 + k % 4, 3);
            shape.tie_probability = 0.3;
            shape.zero_probability = zero_probability;
            shape.real = real;
            shape.max_condition = 20.0;
            jordan_spec(&mut r, &shape)
        })
        .collect()
}

/// `M R` with `R` block diagonal over the modulus groups.
fn regroup(spec: &JordanSpec, seed: u64) -> CMatrix {
    let mut r = rng(seed);
    let n = spec.n();
    let mut big = CMatrix::zeros(n, n);
    for range in spec.groups().ranges() {
        let k = range.len();
        let blk = nonsingular(&mut r, k, 10.0, false);
        for (a, i) in range.clone().enumerate() {
            for (b, j) in range.clone().enumerate() {
                big[(i, j)] = blk[(a, b)];
            }
        }
    }
    spec.m() * &big
}

#[test]
fn suite_converges_with_decreasing_errors() {
    let sched = default_schedule();
    for case in standard_suite(42) {
        let rep = iterate_limit(&case.spec, &case.b, &case.c, &sched, Side::Right, 1).unwrap();
        let last = rep.final_frob_error();
        assert!(last <= 3e-3, "{}: {last:e}", case.name);
        assert!(last < rep.frob_error_at(4096).unwrap(), "{}", case.name);
        assert!(rep.tail_decreasing(3), "{}: {:?}", case.name, rep.frob_errors);
        assert!(rep.final_sv_error() <= 3e-3, "{}", case.name);
    }
}

#[test]
fn yamamoto_singular_value_errors_decay() {
    for case in standard_suite(7) {
        let rep = iterate_limit(&case.spec, &case.b, &case.c, &[256, 4096, 65536], Side::Right, 2).unwrap();
        let e = &rep.sv_errors;
        assert!(e[2] <= e[1] && e[1] <= e[0], "{}: {e:?}", case.name);
        assert!(e[2] <= 3e-3);
    }
}

#[test]
fn limit_does_not_depend_on_b() {
    let mut r = rng(3);
    for spec in random_specs(21, 12, 0.15, false) {
        let n = spec.n();
        let c = nonsingular(&mut r, n, 10.0, false);
        let b1 = nonsingular(&mut r, n, 10.0, false);
        let b2 = nonsingular(&mut r, n, 10.0, false);
        let p1 = iterate_limit(&spec, &b1, &c, &[1 << 16], Side::Right, 1).unwrap();
        let p2 = iterate_limit(&spec, &b2, &c, &[1 << 16], Side::Right, 1).unwrap();
        assert_eq!(p1.limit, p2.limit);
        let gap = p1.iterates[0].matrix().frob_dist(p2.iterates[0].matrix());
        assert!(gap <= 6e-3, "gap {gap:e}");
    }
}

#[test]
fn limit_does_not_depend_on_the_jordan_basis() {
    let mut r = rng(4);
    for (k, spec) in random_specs(22, 20, 0.1, false).into_iter().enumerate() {
        let c = nonsingular(&mut r, spec.n(), 10.0, false);
        let base = predicted_limit_right(&spec, &c).unwrap();
        let moved = spec.with_m(regroup(&spec, 100 + k as u64)).unwrap();
        let other = predicted_limit_right(&moved, &c).unwrap();
        assert!(base.matrix().max_dist(other.matrix()) <= 1e-9);
    }
}

#[test]
fn real_input_gives_real_limit() {
    let mut r = rng(5);
    for spec in random_specs(23, 15, 0.1, true) {
        assert!(assemble(&spec).max_imag() < 1e-12);
        let c = nonsingular(&mut r, spec.n(), 10.0, true);
        let p = predicted_limit_right(&spec, &c).unwrap();
        assert!(p.matrix().max_imag() <= 1e-10);
    }
}

#[test]
fn left_limit_is_the_adjoint_route() {
    let mut r = rng(6);
    for spec in random_specs(24, 12, 0.1, false) {
        let n = spec.n();
        let b = nonsingular(&mut r, n, 10.0, false);
        let c = nonsingular(&mut r, n, 10.0, false);
        let left = predicted_limit_left(&spec, &b).unwrap();
        let via = predicted_limit_right(&spec.adjoint().unwrap(), &b.adjoint()).unwrap();
        assert!(left.matrix().max_dist(via.matrix()) < 1e-10);
        let rep = iterate_limit(&spec, &b, &c, &[1 << 16], Side::Left, 1).unwrap();
        assert!(rep.final_frob_error() <= 3e-3);
    }
}

#[test]
fn graded_engine_matches_literal_powers() {
    let mut r = rng(8);
    for spec in random_specs(25, 20, 0.0, false) {
        let n = spec.n();
        let b = nonsingular(&mut r, n, 10.0, false);
        let c = nonsingular(&mut r, n, 10.0, false);
        for m in [1, 2, 3, 5, 8] {
            for side in [Side::Right, Side::Left] {
                let g = iterate_root(&spec, &b, &c, m, side).unwrap();
                let d = direct_root(&spec, &b, &c, m, side).unwrap();
                let scale = d.root.matrix().max_abs();
                assert!(g.root.matrix().max_dist(d.root.matrix()) <= 1e-8 * scale, "m={m}");
            }
        }
    }
}

#[test]
fn nayak_projections_invariants() {
    for case in standard_suite(42) {
        let spec = &case.spec;
        let p = nayak_projections(spec).unwrap();
        let n = spec.n();
        let pred = predicted_limit_right(spec, &CMatrix::identity(n)).unwrap();
        assert!(p.reconstruction.max_dist(pred.matrix()) <= 1e-10, "{}", case.name);
        let ranks = p.ranks();
        for j in 1..=p.len() {
            let e = p.projection(j);
            assert!((&e * &e).max_dist(&e) <= 1e-9);
            assert!(e.adjoint().max_dist(&e) <= 1e-9);
            let next = p.projection(j + 1);
            assert!((&e * &next).max_dist(&next) <= 1e-9);
            assert!((e.trace().re - ranks[j - 1] as f64).abs() <= 1e-9);
        }
    }
}

#[test]
fn growth_classifies_vectors_from_each_projection() {
    let mut r = rng(9);
    let mut checked = 0;
    for case in standard_suite(42) {
        let spec = &case.spec;
        let p = nayak_projections(spec).unwrap();
        for j in (1..=p.len()).cycle().take(6) {
            let z = complex_vector(&mut r, spec.n());
            let x = p.projection(j).mul_vec(&z);
            let g = growth_exponent(spec, &x, &default_schedule(), &Tolerances::default()).unwrap();
            assert_eq!(g.classified_j, j, "{} j={j}", case.name);
            assert_eq!(g.membership_j, j);
            checked += 1;
        }
    }
    assert_eq!(checked, 120);
}

#[test]
fn projection_images_are_invariant() {
    let mut r = rng(10);
    for case in standard_suite(42) {
        let a = assemble(&case.spec);
        for _ in 0..3 {
            let x: Vec<C64> = complex_vector(&mut r, case.spec.n());
            assert!(invariance_defect(&case.spec, &a, &x).unwrap() <= 1e-9, "{}", case.name);
        }
    }
}
