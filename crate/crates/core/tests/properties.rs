use galnum::circles::{circle_contains, circle_points, Circle};
use galnum::fields::{BigRational, ExtField, ExtScalar, FiniteField, FqElem, GroundField, Rationals};
use galnum::gen::{random_matrix, random_unitary, random_vector};
use galnum::io::{matrix_from_json, matrix_to_json, scalar_from_json, scalar_to_json};
use galnum::linalg::{affine, dagger, is_unitary, mat_mul, quadratic_value, self_pairing, ExtMatrix};
use galnum::normsets::{Answer, NormSets, DEFAULT_BOUND};
use galnum::numrange::{num_range_exhaustive, DEFAULT_BUDGET};
use galnum::verify::{finite_ext, rational_ext};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fq_scalar(l: &ExtField<FiniteField>, code: u32) -> ExtScalar<FqElem> {
    let q = l.ground().order().unwrap() as u32;
    let code = code % (q * q);
    ExtScalar::new(FqElem(code / q), FqElem(code % q))
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn q_scalar(a: (i64, i64, i64, i64)) -> ExtScalar<BigRational> {
    ExtScalar::new(rat(a.0, a.1), rat(a.2, a.3))
}

fn small_rat() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-30i64..=30, 1i64..=12, -30i64..=30, 1i64..=12)
}

fn finite_fields() -> Vec<ExtField<FiniteField>> {
    vec![finite_ext(3, 1), finite_ext(5, 1), finite_ext(2, 1), finite_ext(2, 2)]
}

proptest! {
    #[test]
    fn finite_ext_field_laws(f in 0usize..4, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let l = &finite_fields()[f];
        let (a, b, c) = (fq_scalar(l, a), fq_scalar(l, b), fq_scalar(l, c));
        prop_assert_eq!(l.mul(&a, &l.add(&b, &c)), l.add(&l.mul(&a, &b), &l.mul(&a, &c)));
        prop_assert_eq!(l.mul(&l.mul(&a, &b), &c), l.mul(&a, &l.mul(&b, &c)));
        prop_assert_eq!(l.norm(&l.mul(&a, &b)), l.ground().mul(&l.norm(&a), &l.norm(&b)));
        prop_assert_eq!(l.conj(&l.conj(&a)), a.clone());
        prop_assert_eq!(l.conj(&l.mul(&a, &b)), l.mul(&l.conj(&a), &l.conj(&b)));
        prop_assert!(l.is_ground(&l.from_ground(l.trace(&a))));
        if !l.is_zero(&a) {
            prop_assert_eq!(l.mul(&a, &l.inv(&a).unwrap()), l.one());
        }
    }

    #[test]
    fn rational_ext_field_laws(d in prop::sample::select(vec![-1i64, -3, 2, 5, -7]), a in small_rat(), b in small_rat()) {
        let l = rational_ext(d);
        let (a, b) = (q_scalar(a), q_scalar(b));
        prop_assert_eq!(l.norm(&l.mul(&a, &b)), l.norm(&a) * l.norm(&b));
        prop_assert_eq!(l.norm(&a), l.mul(&a, &l.conj(&a)).c0);
        if !l.is_zero(&b) {
            prop_assert_eq!(l.mul(&l.div(&a, &b).unwrap(), &b), a);
        }
    }

    #[test]
    fn norm_verdicts_carry_valid_witnesses(d in prop::sample::select(vec![-1i64, -2, 2, 3, -5]), n in -60i64..=60, m in 1i64..=15) {
        let l = rational_ext(d);
        let k = rat(n, m);
        prop_assume!(n != 0);
        let v = Rationals::in_delta(&l, &k, DEFAULT_BOUND);
        if v.answer == Answer::Yes && !v.witness.is_empty() {
            prop_assert!(v.verifies(&l, &k));
        }
        if v.answer == Answer::No {
            prop_assert!(v.obstruction.is_some());
        }
    }

    #[test]
    fn circle_points_lie_on_the_circle(center in small_rat(), b in small_rat()) {
        let l = rational_ext(-1);
        let b = q_scalar(b);
        prop_assume!(!l.is_zero(&b));
        let circle = Circle::new(q_scalar(center), l.norm(&b));
        let pts: Vec<_> = circle_points(&l, &circle, &b).unwrap().take(25).collect();
        prop_assert_eq!(pts.len(), 25);
        for p in &pts {
            prop_assert!(circle_contains(&l, p, &circle));
        }
    }

    #[test]
    fn quadratic_values_respect_affine_and_dagger(seed in any::<u64>(), n in 1usize..4) {
        let l = rational_ext(2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&l, n, &mut rng);
        let u = random_vector(&l, n, &mut rng);
        let (c, d) = (l.from_ints(2, -1), l.from_ints(0, 3));
        let v = quadratic_value(&l, &m, &u);
        let pairing = l.from_ground(self_pairing(&l, &u));
        prop_assert_eq!(
            quadratic_value(&l, &affine(&l, &m, &c, &d), &u),
            l.add(&l.mul(&c, &v), &l.mul(&d, &pairing))
        );
        prop_assert_eq!(quadratic_value(&l, &dagger(&l, &m), &u), l.conj(&v));
    }

    #[test]
    fn matrix_json_round_trips(seed in any::<u64>(), n in 1usize..4) {
        let l = rational_ext(-3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(&l, n, &mut rng);
        let text = serde_json::to_string(&matrix_to_json(&l, &m)).unwrap();
        let back: ExtMatrix<BigRational> = matrix_from_json(&l, &serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(&back, &m);
        let z = m.get(0, 0);
        prop_assert_eq!(&scalar_from_json(&l, &scalar_to_json(&l, z)).unwrap(), z);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn finite_ranges_are_unitarily_invariant(f in 0usize..4, seed in any::<u64>()) {
        let l = &finite_fields()[f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_matrix(l, 2, &mut rng);
        let u = random_unitary(l, 2, &mut rng);
        prop_assert!(is_unitary(l, &u));
        let conj = mat_mul(l, &dagger(l, &u), &mat_mul(l, &m, &u));
        prop_assert_eq!(num_range_exhaustive(l, &m, DEFAULT_BUDGET).unwrap(), num_range_exhaustive(l, &conj, DEFAULT_BUDGET).unwrap());
    }
}
