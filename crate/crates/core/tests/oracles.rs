//! Implementations checked against independent brute-force routes.

use std::collections::BTreeSet;

use efsphere::experiments::{brute_oracle_distance, sample_subset, ExperimentContext};
use efsphere::ffield::odd_prime_power;
use efsphere::geometry::{self, dot, line_of, omega_build, quad_form, sphere_enumerate};
use efsphere::mixing::trial_rng;
use efsphere::scheme::{classify_reps, RelationTable};
use efsphere::spectra::{
    adjacency_matrix, graph_spectrum, power_iteration, second_eigenvalue, sym_eigenvalues, sym_eigenvalues_tridiagonal,
    SolverChoice,
};
use efsphere::{FieldElement, FieldSpec, PointVec};

/// Every vector of F_q^d in lexicographic order, first coordinate slowest.
fn all_vectors(field: &FieldSpec, d: usize) -> Vec<PointVec> {
    let q = field.q() as usize;
    let total = q.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            let mut c = vec![FieldElement::ZERO; d];
            for slot in c.iter_mut().rev() {
                *slot = field.from_index((idx % q) as u32).unwrap();
                idx /= q;
            }
            PointVec::new(c)
        })
        .collect()
}

fn exhaustive_sphere(field: &FieldSpec, d: usize) -> Vec<PointVec> {
    all_vectors(field, d)
        .into_iter()
        .filter(|x| quad_form(field, x) == FieldElement::ONE)
        .collect()
}

/// Quadratic character by brute enumeration of squares.
fn eta(field: &FieldSpec, a: FieldElement) -> i64 {
    if a.is_zero() {
        return 0;
    }
    if field.enumerate().any(|t| field.mul(t, t) == a) {
        1
    } else {
        -1
    }
}

/// |S^{d-1}| from the character-sum count of solutions to x_1^2 + .. + x_d^2 = 1.
fn sphere_size_formula(field: &FieldSpec, d: usize) -> i64 {
    let q = field.q() as i64;
    let minus_one = field.neg(FieldElement::ONE);
    if d % 2 == 1 {
        let sign = eta(field, field.pow(minus_one, ((d - 1) / 2) as u64));
        q.pow(d as u32 - 1) + sign * q.pow(((d - 1) / 2) as u32)
    } else {
        let sign = eta(field, field.pow(minus_one, (d / 2) as u64));
        q.pow(d as u32 - 1) - sign * q.pow(((d - 2) / 2) as u32)
    }
}

const SMALL_Q: [u64; 4] = [3, 5, 7, 9];

#[test]
fn fast_sphere_matches_exhaustive_scan() {
    for q in SMALL_Q {
        let f = FieldSpec::with_order(q).unwrap();
        for d in 2..=4 {
            let fast = sphere_enumerate(&f, d).unwrap();
            assert_eq!(fast.points, exhaustive_sphere(&f, d), "q={q} d={d}");
            assert_eq!(fast.len() as i64, sphere_size_formula(&f, d), "q={q} d={d}");
        }
    }
}

#[test]
fn sphere_sizes_follow_character_formula() {
    for q in [11, 13, 25, 27] {
        let f = FieldSpec::with_order(q).unwrap();
        for d in 2..=4 {
            assert_eq!(
                sphere_enumerate(&f, d).unwrap().len() as i64,
                sphere_size_formula(&f, d),
                "q={q} d={d}"
            );
        }
    }
}

#[test]
fn sphere_is_closed_under_negation() {
    for q in SMALL_Q {
        let f = FieldSpec::with_order(q).unwrap();
        let s = sphere_enumerate(&f, 3).unwrap();
        assert!(s.points.iter().all(|x| s.contains(&x.neg(&f))));
        for x in s.points.iter().take(20) {
            for y in s.points.iter().take(20) {
                assert_eq!(
                    geometry::dist(&f, x, y).unwrap(),
                    geometry::dist(&f, &x.neg(&f), &y.neg(&f)).unwrap()
                );
            }
        }
    }
}

/// Scans every nonzero vector, normalises it projectively and keeps the
/// lines whose Q value is a nonzero square.
fn definitional_omega(field: &FieldSpec, d: usize) -> BTreeSet<PointVec> {
    let mut projective = BTreeSet::new();
    for x in all_vectors(field, d) {
        if x.is_zero() {
            continue;
        }
        let lead = *x.coords().iter().find(|c| !c.is_zero()).unwrap();
        projective.insert(x.scale(field, field.inv(lead).unwrap()));
    }
    projective
        .into_iter()
        .filter(|x| {
            let qx = quad_form(field, x);
            !qx.is_zero() && eta(field, qx) == 1
        })
        .collect()
}

#[test]
fn omega_matches_definitional_scan() {
    for q in SMALL_Q {
        let f = FieldSpec::with_order(q).unwrap();
        for d in 2..=4 {
            let om = omega_build(&f, d).unwrap();
            let sphere = sphere_enumerate(&f, d).unwrap();
            assert_eq!(2 * om.len(), sphere.len());
            let lines = definitional_omega(&f, d);
            assert_eq!(lines.len(), om.len(), "q={q} d={d}");
            let via_line_of: BTreeSet<_> = lines.iter().map(|x| line_of(&f, x).unwrap()).collect();
            let built: BTreeSet<_> = om.lines().iter().cloned().collect();
            assert_eq!(via_line_of, built);
        }
    }
}

#[test]
fn unit_vector_identities() {
    for q in SMALL_Q {
        let f = FieldSpec::with_order(q).unwrap();
        let two = f.from_int(2);
        let s = sphere_enumerate(&f, 3).unwrap();
        for u in &s.points {
            for v in &s.points {
                let c = f.mul(two, dot(&f, u, v).unwrap());
                assert_eq!(quad_form(&f, &u.add(&f, v).unwrap()), f.add(two, c));
                assert_eq!(quad_form(&f, &u.sub(&f, v).unwrap()), f.sub(two, c));
            }
        }
    }
}

#[test]
fn classification_ignores_representative_signs() {
    for q in [5, 7, 9] {
        let f = FieldSpec::with_order(q).unwrap();
        for d in [3, 4] {
            let om = omega_build(&f, d).unwrap();
            let lines = om.lines();
            for (a, u) in lines.iter().enumerate() {
                for v in &lines[a + 1..] {
                    let (u, v) = (u.rep(), v.rep());
                    let base = classify_reps(&f, d, u, v).unwrap();
                    assert_eq!(classify_reps(&f, d, &u.neg(&f), v).unwrap(), base);
                    assert_eq!(classify_reps(&f, d, u, &v.neg(&f)).unwrap(), base);
                    assert_eq!(classify_reps(&f, d, v, u).unwrap(), base);
                }
            }
        }
    }
}

#[test]
fn distance_set_matches_oracle_on_random_subsets() {
    for (q, d) in [(5, 3), (9, 3), (5, 4), (7, 3)] {
        let f = FieldSpec::with_order(q).unwrap();
        let s = sphere_enumerate(&f, d).unwrap();
        for t in 0..100u64 {
            let mut rng = trial_rng(0xD15, t);
            let size = 1 + (t as usize * 7) % s.len();
            let e = sample_subset(&s, size, &mut rng).unwrap();
            assert_eq!(
                geometry::distance_set(&f, &e).unwrap(),
                brute_oracle_distance(&f, &e).unwrap(),
                "q={q} d={d} trial={t}"
            );
        }
    }
}

#[test]
fn jacobi_and_ql_agree() {
    for q in [3, 5, 7] {
        let f = FieldSpec::with_order(q).unwrap();
        for d in [3, 4] {
            let om = omega_build(&f, d).unwrap();
            for g in RelationTable::build(&f, &om).graphs(&f, d) {
                let m = adjacency_matrix::<f64>(&g);
                let a = sym_eigenvalues(&m).unwrap();
                let b = sym_eigenvalues_tridiagonal(&m).unwrap();
                let diff = a
                    .eigenvalues
                    .iter()
                    .zip(&b.eigenvalues)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-9, "q={q} d={d} i={} diff={diff:e}", g.relation());
            }
        }
    }
}

#[test]
fn power_iteration_cross_check() {
    for (q, d) in [(3, 3), (5, 3), (7, 3), (9, 3), (5, 4), (7, 4)] {
        let f = FieldSpec::with_order(q).unwrap();
        let om = omega_build(&f, d).unwrap();
        for g in RelationTable::build(&f, &om).graphs(&f, d) {
            let s = graph_spectrum::<f64>(&g, SolverChoice::Jacobi).unwrap();
            let k = g.valency().unwrap();
            let lambda = second_eigenvalue(&s, k).unwrap();
            let est = power_iteration::<f64>(&g, 500, 7);
            let largest = s.eigenvalues.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1.0);
            assert!(rel(est.largest, largest) < 1e-4, "q={q} d={d} i={}", g.relation());
            assert!(
                rel(est.second, lambda) < 1e-4,
                "q={q} d={d} i={}: power {} vs dense {lambda}",
                g.relation(),
                est.second
            );
        }
    }
}

#[test]
fn experiment_context_lambdas_are_nonnegative() {
    let ctx = ExperimentContext::build(FieldSpec::with_order(7).unwrap(), 3, SolverChoice::Auto).unwrap();
    assert_eq!(ctx.lambdas.len(), 4);
    assert!(ctx.lambdas.iter().all(|&l| l >= 0.0));
}

#[test]
fn prime_power_parsing() {
    for q in [3u64, 5, 7, 9, 11, 13, 25, 27, 49, 81, 121, 125, 243] {
        let (p, e) = odd_prime_power(q).unwrap();
        assert_eq!((p as u64).pow(e), q);
    }
}
