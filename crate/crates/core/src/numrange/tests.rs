use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::fields::{BigRational, FiniteField, FqElem, Rationals};
use crate::linalg::{diagonal, is_unitary, mat_mul, dagger, affine, sesq};
use crate::normsets::DEFAULT_BOUND;

fn fq(p: u32, m: u32) -> ExtField<FiniteField> {
    let k = if m == 1 { FiniteField::prime(p).unwrap() } else { FiniteField::new(p, m, None).unwrap() };
    ExtField::quadratic_auto(k).unwrap()
}

fn qd(d: i64) -> ExtField<Rationals> {
    ExtField::quadratic(&BigRational::from_integer(d.into())).unwrap()
}

/// Every vector of `L^n`, checked one by one.
fn brute_force(l: &ExtField<FiniteField>, m: &ExtMatrix<FqElem>, on_sphere: bool) -> Vec<ExtScalar<FqElem>> {
    let els = l.elements().unwrap();
    let n = m.n();
    let g = l.ground();
    let target = if on_sphere { g.one() } else { g.zero() };
    let mut out = BTreeSet::new();
    let total = els.len().pow(n as u32);
    for mut code in 0..total {
        let mut u = Vec::with_capacity(n);
        for _ in 0..n {
            u.push(els[code % els.len()].clone());
            code /= els.len();
        }
        let u = ExtVector(u);
        if self_pairing(l, &u) == target {
            out.insert(quadratic_value(l, m, &u));
        }
    }
    if !on_sphere {
        out.insert(l.zero());
    }
    out.into_iter().collect()
}

fn random_matrix(l: &ExtField<FiniteField>, n: usize, rng: &mut ChaCha8Rng) -> ExtMatrix<FqElem> {
    let q2 = l.elements().unwrap().len();
    ExtMatrix::from_fn(n, |_, _| l.from_index(rng.gen_range(0..q2)))
}

fn all_2x2(l: &ExtField<FiniteField>) -> impl Iterator<Item = ExtMatrix<FqElem>> + '_ {
    let q2 = l.elements().unwrap().len();
    (0..q2.pow(4)).map(move |mut code| {
        ExtMatrix::from_fn(2, |_, _| {
            let z = l.from_index(code % q2);
            code /= q2;
            z
        })
    })
}

#[test]
fn jordan_block_over_f9() {
    let l = fq(3, 1);
    let m = ExtMatrix::from_rows(vec![vec![l.zero(), l.one()], vec![l.zero(), l.zero()]]).unwrap();
    let got = num_range_exhaustive(&l, &m, DEFAULT_BUDGET).unwrap();
    let b = l.beta();
    let mut want = vec![l.zero(), l.one(), l.from_int(2), b.clone(), l.add(&b, &b)];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn diagonal_over_f9() {
    let l = fq(3, 1);
    let m = diagonal(&l, &[l.zero(), l.one()]);
    assert_eq!(num_range_exhaustive(&l, &m, DEFAULT_BUDGET).unwrap(), vec![l.zero(), l.one(), l.from_int(2)]);
}

#[test]
fn exhaustive_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (p, m, n) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (3, 1, 3), (5, 1, 2), (2, 2, 2)] {
        let l = fq(p, m);
        for _ in 0..6 {
            let a = random_matrix(&l, n, &mut rng);
            assert_eq!(num_range_exhaustive(&l, &a, DEFAULT_BUDGET).unwrap(), brute_force(&l, &a, true));
            assert_eq!(num_range_zero_exhaustive(&l, &a, DEFAULT_BUDGET).unwrap(), brute_force(&l, &a, false));
        }
    }
}

#[test]
fn budget_is_enforced() {
    let l = fq(3, 1);
    let m = identity(&l, 4);
    assert!(matches!(num_range_exhaustive(&l, &m, 10), Err(Error::BudgetExceeded { .. })));
}

fn identity(l: &ExtField<FiniteField>, n: usize) -> ExtMatrix<FqElem> {
    crate::linalg::identity(l, n)
}

/// Over a finite field every 2x2 matrix with eigenvalues in `L` must get a
/// description whose enumeration and membership test agree with enumeration.
fn check_all_2x2(l: &ExtField<FiniteField>) {
    let els = l.elements().unwrap();
    let mut seen = BTreeSet::new();
    for m in all_2x2(l) {
        let want = num_range_exhaustive(l, &m, DEFAULT_BUDGET).unwrap();
        let desc = match classify_2x2(l, &m, 0) {
            Ok(d) => d,
            Err(Error::NotInL { .. }) => continue,
            Err(e) => panic!("{m:?}: {e}"),
        };
        seen.insert(desc.variant_name());
        assert_eq!(desc.enumerate(l).unwrap(), want, "{m:?} as {desc:?}");
        for z in &els {
            let member = desc.membership(l, z, 0) == Answer::Yes;
            assert_eq!(member, want.binary_search(z).is_ok(), "{m:?} at {z:?}");
        }
    }
    assert!(seen.len() >= 5, "{seen:?}");
}

#[test]
fn classification_matches_enumeration_f3() {
    check_all_2x2(&fq(3, 1));
}

#[test]
fn classification_matches_enumeration_f2() {
    check_all_2x2(&fq(2, 1));
}

#[test]
fn classification_matches_enumeration_f5_sampled() {
    let l = fq(5, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let els = l.elements().unwrap();
    for _ in 0..150 {
        let m = random_matrix(&l, 2, &mut rng);
        let Ok(desc) = classify_2x2(&l, &m, 0) else { continue };
        let want = num_range_exhaustive(&l, &m, DEFAULT_BUDGET).unwrap();
        assert_eq!(desc.enumerate(&l).unwrap(), want);
        for z in els.iter().step_by(3) {
            assert_eq!(desc.membership(&l, z, 0) == Answer::Yes, want.binary_search(z).is_ok());
        }
    }
}

#[test]
fn not_in_l_is_reported() {
    // 1 + beta generates F_9^*, so x^2 - (1 + beta) has no root in L
    let l = fq(3, 1);
    let m = ExtMatrix::from_rows(vec![vec![l.zero(), l.from_ints(1, 1)], vec![l.one(), l.zero()]]).unwrap();
    assert!(matches!(classify_2x2(&l, &m, 0), Err(Error::NotInL { .. })));
}

#[test]
fn direct_sum_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (p, m) in [(2, 1), (3, 1)] {
        let l = fq(p, m);
        for (na, nb) in [(1, 1), (1, 2), (2, 1)] {
            for _ in 0..4 {
                let a = random_matrix(&l, na, &mut rng);
                let b = random_matrix(&l, nb, &mut rng);
                let sum = a.direct_sum(&b, &l.zero());
                let want = num_range_exhaustive(&l, &sum, DEFAULT_BUDGET).unwrap();
                assert_eq!(direct_sum_range(&l, &a, &b, 0, DEFAULT_BUDGET).unwrap(), DirectSumRange::Exact(want));
            }
        }
    }
}

#[test]
fn corank1_splitting_over_f9() {
    let l = fq(3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut ok, mut cases) = (0, BTreeSet::new());
    for _ in 0..60 {
        let c = l.from_index(rng.gen_range(0..9));
        let x = ExtVector((0..3).map(|_| l.from_index(rng.gen_range(0..9))).collect());
        let y = ExtVector((0..3).map(|_| l.from_index(rng.gen_range(0..9))).collect());
        if is_zero_vec(&l, &x) || is_zero_vec(&l, &y) {
            continue;
        }
        // M = cI + x y^dagger
        let m = ExtMatrix::from_fn(3, |i, j| {
            let v = l.mul(&x.0[i], &l.conj(&y.0[j]));
            if i == j {
                l.add(&v, &c)
            } else {
                v
            }
        });
        match classify_corank1(&l, &m, DEFAULT_BUDGET) {
            Ok(rep) => {
                ok += 1;
                cases.insert(rep.case);
                assert!(is_unitary(&l, &rep.unitary));
                let split = mat_mul(&l, &dagger(&l, &rep.unitary), &mat_mul(&l, &m, &rep.unitary));
                assert_eq!(split.get(0, 0), &rep.c);
                assert_eq!(rep.range, num_range_exhaustive(&l, &m, DEFAULT_BUDGET).unwrap());
            }
            Err(Error::Hypothesis(_)) | Err(Error::NotInL { .. }) => {}
            Err(e) => panic!("{e}"),
        }
    }
    assert!(ok >= 20, "only {ok} splittings");
    assert!(cases.len() >= 3, "{cases:?}");
}

fn is_zero_vec(l: &ExtField<FiniteField>, v: &ExtVector<FqElem>) -> bool {
    v.0.iter().all(|z| l.is_zero(z))
}

#[test]
fn corank1_needs_dimension_three() {
    let l = fq(3, 1);
    let m = diagonal(&l, &[l.zero(), l.one()]);
    assert!(matches!(classify_corank1(&l, &m, DEFAULT_BUDGET), Err(Error::Hypothesis(_))));
}

#[test]
fn affine_maps_commute_with_num() {
    let l = fq(3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let m = random_matrix(&l, 2, &mut rng);
        let (c, d) = (l.from_index(rng.gen_range(1..9)), l.from_index(rng.gen_range(0..9)));
        let base = num_range_exhaustive(&l, &m, DEFAULT_BUDGET).unwrap();
        let mut moved: Vec<_> = base.iter().map(|z| l.add(&l.mul(&c, z), &d)).collect();
        moved.sort();
        assert_eq!(num_range_exhaustive(&l, &affine(&l, &m, &c, &d), DEFAULT_BUDGET).unwrap(), moved);
        let mut conj: Vec<_> = base.iter().map(|z| l.conj(z)).collect();
        conj.sort();
        assert_eq!(num_range_exhaustive(&l, &dagger(&l, &m), DEFAULT_BUDGET).unwrap(), conj);
    }
}

#[test]
fn samples_over_q_are_members() {
    for d in [-1, 2, -3, 5] {
        let l = qd(d);
        let mats = [
            ExtMatrix::from_rows(vec![vec![l.one(), l.from_ints(1, 1)], vec![l.zero(), l.zero()]]).unwrap(),
            ExtMatrix::from_rows(vec![vec![l.from_int(2), l.one()], vec![l.zero(), l.from_int(2)]]).unwrap(),
            diagonal(&l, &[l.zero(), l.from_ints(1, 2)]),
        ];
        for m in &mats {
            let desc = match classify_2x2(&l, m, DEFAULT_BOUND) {
                Ok(desc) => desc,
                Err(Error::Unhandled(_)) | Err(Error::Undecided(_)) => continue,
                Err(e) => panic!("{e}"),
            };
            for (u, v) in num_range_sample(&l, m, 25).unwrap() {
                assert_eq!(sesq(&l, &u, &u).unwrap(), l.one());
                assert_ne!(desc.membership(&l, &v, DEFAULT_BOUND), Answer::No, "d={d} {desc:?} {v:?}");
            }
            for z in desc.sample(&l, 10, DEFAULT_BOUND).unwrap() {
                assert_eq!(desc.membership(&l, &z, DEFAULT_BOUND), Answer::Yes);
            }
        }
    }
}

#[test]
fn gaussian_segment_starts_at_one_half() {
    let l = qd(-1);
    let pts = open_segment(&l, &l.one(), &l.zero(), 2);
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(pts[0], l.from_ground(half));
    assert_eq!(pts[1], l.from_ground(BigRational::new(4.into(), 5.into())));
}

#[test]
fn isotropic_defective_round_trip() {
    for l in [fq(3, 1), fq(5, 1), fq(2, 1)] {
        let c = l.from_ints(1, 1);
        let mu = l.beta();
        let m = make_isotropic_defective(&l, &c, &mu, 0).unwrap();
        assert_eq!(classify_2x2(&l, &m, 0).unwrap(), RangeDescription::PuncturedCoset { c, mu });
    }
    let l = qd(-2);
    assert!(matches!(make_isotropic_defective(&l, &l.one(), &l.one(), DEFAULT_BOUND), Err(Error::Hypothesis(_))));
    let l = qd(2);
    let m = make_isotropic_defective(&l, &l.one(), &l.from_ints(0, 3), DEFAULT_BOUND).unwrap();
    assert!(matches!(classify_2x2(&l, &m, DEFAULT_BOUND).unwrap(), RangeDescription::PuncturedCoset { .. }));
}

#[test]
fn two_point_family_of_rank_one_idempotent() {
    let l = fq(3, 1);
    let b = l.from_ints(1, 2);
    let m = ExtMatrix::from_rows(vec![vec![l.one(), b.clone()], vec![l.zero(), l.zero()]]).unwrap();
    let desc = lemma_a30_range(&l, &b).unwrap();
    assert_eq!(desc.enumerate(&l).unwrap(), num_range_exhaustive(&l, &m, DEFAULT_BUDGET).unwrap());
}

#[test]
fn singleton_witness_branches() {
    let l = qd(-1);
    assert_eq!(singleton_witness(&l, &crate::linalg::identity(&l, 3), DEFAULT_BOUND).unwrap(), None);
    let cases = [
        (diagonal(&l, &[l.zero(), l.one()]), WitnessBranch::Diagonal),
        (ExtMatrix::from_rows(vec![vec![l.zero(), l.one()], vec![l.zero(), l.zero()]]).unwrap(), WitnessBranch::RealRotation),
        (
            ExtMatrix::from_rows(vec![vec![l.zero(), l.one()], vec![l.from_int(-1), l.zero()]]).unwrap(),
            WitnessBranch::SquareComplement,
        ),
    ];
    for (m, branch) in cases {
        let w = singleton_witness(&l, &m, DEFAULT_BOUND).unwrap().unwrap();
        assert_eq!(w.branch, branch);
        assert_ne!(w.v1, w.v2);
        assert_eq!(quadratic_value(&l, &m, &w.u2), w.v2);
    }
}

#[test]
fn num_zero_of_definite_form_is_zero() {
    let l = qd(-1);
    let m = diagonal(&l, &[l.one(), l.from_int(3), l.from_int(5)]);
    assert_eq!(num_range_zero(&l, &m, 10, DEFAULT_BUDGET, DEFAULT_BOUND).unwrap(), NumZero::Exact(vec![l.zero()]));
    let l = qd(2);
    let m = diagonal(&l, &[l.one(), l.from_int(3)]);
    match num_range_zero(&l, &m, 10, DEFAULT_BUDGET, DEFAULT_BOUND).unwrap() {
        NumZero::Sampled(v) => assert!(v.len() > 1),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sphere_points_have_unit_square_sum() {
    let k = Rationals;
    for n in 1..4 {
        for x in k_sphere_points(&k, n, 30) {
            let s = x.iter().fold(k.zero(), |acc, a| k.add(&acc, &k.square(a)));
            assert!(k.is_one(&s));
        }
    }
}
