//! Seeded random instances: scalars, matrices, unitaries, and 2x2 matrices of
//! each classified shape.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circles::{circle_points, Circle};
use crate::error::{Error, Result};
use crate::fields::{ExtField, ExtScalar, GroundField};
use crate::linalg::{
    inverse, mat_mul, orthogonal_partner, self_pairing, sesq_unchecked, ExtMatrix, ExtVector,
};
use crate::normsets::{in_hat_delta, zero_in_hat_delta2, Answer, NormSets};

/// Attempts before a generator gives up on a shape.
const TRIES: usize = 10_000;

/// Uniform over a finite field; small numerators and denominators over Q.
pub fn random_ground<K: GroundField, R: Rng>(k: &K, rng: &mut R) -> K::Elem {
    match k.order() {
        Some(q) => k.elements().expect("finite")[rng.gen_range(0..q as usize)].clone(),
        None => {
            let num = k.from_int(rng.gen_range(-9..=9));
            let den = k.from_int(rng.gen_range(1..=9));
            k.div(&num, &den).expect("nonzero denominator")
        }
    }
}

pub fn random_scalar<K: GroundField, R: Rng>(l: &ExtField<K>, rng: &mut R) -> ExtScalar<K::Elem> {
    ExtScalar::new(random_ground(l.ground(), rng), random_ground(l.ground(), rng))
}

pub fn random_nonzero_scalar<K: GroundField, R: Rng>(l: &ExtField<K>, rng: &mut R) -> ExtScalar<K::Elem> {
    loop {
        let z = random_scalar(l, rng);
        if !l.is_zero(&z) {
            return z;
        }
    }
}

pub fn random_vector<K: GroundField, R: Rng>(l: &ExtField<K>, n: usize, rng: &mut R) -> ExtVector<K::Elem> {
    ExtVector((0..n).map(|_| random_scalar(l, rng)).collect())
}

pub fn random_matrix<K: GroundField, R: Rng>(l: &ExtField<K>, n: usize, rng: &mut R) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(n, |_, _| random_scalar(l, rng))
}

/// Two distinct random scalars.
fn distinct_pair<K: GroundField, R: Rng>(l: &ExtField<K>, rng: &mut R) -> (ExtScalar<K::Elem>, ExtScalar<K::Elem>) {
    let a = random_scalar(l, rng);
    loop {
        let b = random_scalar(l, rng);
        if b != a {
            return (a, b);
        }
    }
}

/// Elements of norm 1: all of them over a finite field, the first `count` otherwise.
pub fn unit_elements<K: GroundField>(l: &ExtField<K>, count: usize) -> Vec<ExtScalar<K::Elem>> {
    let unit = Circle::new(l.zero(), l.ground().one());
    let pts = circle_points(l, &unit, &l.one()).expect("N(1) = 1");
    if l.ground().is_finite() {
        pts.collect()
    } else {
        pts.take(count).collect()
    }
}

/// A random 2x2 unitary `[[a, -sigma(b) u], [b, sigma(a) u]]` with
/// `N(a) + N(b) = 1` and `N(u) = 1`.
pub fn random_unitary_2x2<K: NormSets, R: Rng>(l: &ExtField<K>, rng: &mut R) -> ExtMatrix<K::Elem> {
    let units = unit_elements(l, 24);
    let segs = K::segment_sample(l, 24);
    let pick = |rng: &mut R| units.choose(rng).expect("1 has norm 1").clone();
    let (a, b) = match segs.choose(rng) {
        Some(s) if rng.gen_bool(0.8) => (l.mul(&s.w, &pick(rng)), l.mul(&s.w_c, &pick(rng))),
        _ => {
            let w = pick(rng);
            if rng.gen_bool(0.5) {
                (w, l.zero())
            } else {
                (l.zero(), w)
            }
        }
    };
    let u = pick(rng);
    ExtMatrix::from_rows(vec![
        vec![a.clone(), l.neg(&l.mul(&l.conj(&b), &u))],
        vec![b, l.mul(&l.conj(&a), &u)],
    ])
    .expect("2x2")
}

/// A random `n x n` unitary: a permutation times a norm-1 diagonal times a
/// chain of 2x2 unitaries on random coordinate pairs.
pub fn random_unitary<K: NormSets, R: Rng>(l: &ExtField<K>, n: usize, rng: &mut R) -> ExtMatrix<K::Elem> {
    let units = unit_elements(l, 24);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let diag: Vec<_> = (0..n).map(|_| units.choose(rng).expect("nonempty").clone()).collect();
    let mut u = ExtMatrix::from_fn(n, |i, j| if perm[j] == i { diag[j].clone() } else { l.zero() });
    if n < 2 {
        return u;
    }
    for _ in 0..n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let r = random_unitary_2x2(l, rng);
        let g = ExtMatrix::from_fn(n, |a, b| {
            let pos = |x| if x == i { Some(0) } else if x == j { Some(1) } else { None };
            match (pos(a), pos(b)) {
                (Some(p), Some(q)) => r.get(p, q).clone(),
                (None, None) if a == b => l.one(),
                _ => l.zero(),
            }
        });
        u = mat_mul(l, &u, &g);
    }
    u
}

/// Vectors `v != 0` in `L^2` with `<v, v> = 0`: `lambda (1, w omega)` with
/// `N(w) = -1`, `N(omega) = 1`, or `lambda (w omega, 1)`.
pub fn random_isotropic_2<K: NormSets, R: Rng>(
    l: &ExtField<K>,
    rng: &mut R,
    bound: u64,
) -> Result<ExtVector<K::Elem>> {
    let zero = zero_in_hat_delta2(l, bound);
    if zero.answer != Answer::Yes {
        return Err(Error::Hypothesis(format!("{} has no isotropic vectors in L^2", l.name())));
    }
    let w = zero.witness.get(1).cloned().ok_or_else(|| Error::MissingWitness("N(w) = -1".into()))?;
    let units = unit_elements(l, 24);
    let x = l.mul(&w, units.choose(rng).expect("nonempty"));
    let lambda = random_nonzero_scalar(l, rng);
    let v = if rng.gen_bool(0.5) { vec![l.one(), x] } else { vec![x, l.one()] };
    Ok(ExtVector(v.into_iter().map(|z| l.mul(&lambda, &z)).collect()))
}

fn random_anisotropic_2<K: GroundField, R: Rng>(l: &ExtField<K>, rng: &mut R) -> ExtVector<K::Elem> {
    loop {
        let v = random_vector(l, 2, rng);
        if !l.ground().is_zero(&self_pairing(l, &v)) {
            return v;
        }
    }
}

/// `V J V^{-1}` with the columns of `V` as given; `None` if they are dependent.
fn conjugate<K: GroundField>(
    l: &ExtField<K>,
    v1: &ExtVector<K::Elem>,
    v2: &ExtVector<K::Elem>,
    j: &ExtMatrix<K::Elem>,
) -> Option<ExtMatrix<K::Elem>> {
    let v = ExtMatrix::from_columns(&[v1.clone(), v2.clone()]);
    let vinv = inverse(l, &v).ok()?;
    Some(mat_mul(l, &mat_mul(l, &v, j), &vinv))
}

/// The five non-scalar shapes of 2x2 numerical ranges with eigenvalues in `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    /// Distinct eigenvalues, orthogonal eigenvectors.
    SegmentJoin,
    /// Distinct eigenvalues, non-orthogonal eigenvectors, one of them anisotropic.
    TwoPoint,
    /// One eigenvalue, anisotropic eigenvector.
    CenterCircle,
    /// One eigenvalue, isotropic eigenvector.
    PuncturedCoset,
    /// Distinct eigenvalues, both eigenvectors isotropic.
    TraceLine,
}

impl Shape {
    pub const ALL: [Shape; 5] =
        [Shape::SegmentJoin, Shape::TwoPoint, Shape::CenterCircle, Shape::PuncturedCoset, Shape::TraceLine];

    pub fn name(self) -> &'static str {
        match self {
            Shape::SegmentJoin => "SegmentJoin",
            Shape::TwoPoint => "TwoPointCircleFamily",
            Shape::CenterCircle => "CenterCircleFamily",
            Shape::PuncturedCoset => "PuncturedCoset",
            Shape::TraceLine => "TraceLine",
        }
    }
}

/// A random 2x2 matrix of the given shape, with `c` as an eigenvalue when given.
pub fn random_shape<K: NormSets, R: Rng>(
    l: &ExtField<K>,
    shape: Shape,
    c: Option<&ExtScalar<K::Elem>>,
    rng: &mut R,
    bound: u64,
) -> Result<ExtMatrix<K::Elem>> {
    let pair = |rng: &mut R| match c {
        Some(c) => loop {
            let d = random_scalar(l, rng);
            if d != *c {
                break (c.clone(), d);
            }
        },
        None => distinct_pair(l, rng),
    };
    let single = |rng: &mut R| c.cloned().unwrap_or_else(|| random_scalar(l, rng));
    let diag = |a: ExtScalar<K::Elem>, b: ExtScalar<K::Elem>| {
        ExtMatrix::from_rows(vec![vec![a, l.zero()], vec![l.zero(), b]]).expect("2x2")
    };
    let jordan = |a: ExtScalar<K::Elem>, mu: ExtScalar<K::Elem>| {
        ExtMatrix::from_rows(vec![vec![a.clone(), mu], vec![l.zero(), a]]).expect("2x2")
    };
    for _ in 0..TRIES {
        let built = match shape {
            Shape::SegmentJoin => {
                let v1 = random_anisotropic_2(l, rng);
                let v2 = orthogonal_partner(l, &v1);
                let (a, b) = pair(rng);
                conjugate(l, &v1, &v2, &diag(a, b))
            }
            Shape::TwoPoint => {
                let v1 = random_vector(l, 2, rng);
                let v2 = random_vector(l, 2, rng);
                let (d1, d2) = (self_pairing(l, &v1), self_pairing(l, &v2));
                let certified = [&d1, &d2].iter().any(|d| in_hat_delta(l, d, bound) == Answer::Yes);
                if l.is_zero(&sesq_unchecked(l, &v1.0, &v2.0)) || !certified {
                    continue;
                }
                let (a, b) = pair(rng);
                conjugate(l, &v1, &v2, &diag(a, b))
            }
            Shape::CenterCircle => {
                let v = random_anisotropic_2(l, rng);
                let w = random_vector(l, 2, rng);
                conjugate(l, &v, &w, &jordan(single(rng), random_nonzero_scalar(l, rng)))
            }
            Shape::PuncturedCoset => {
                let v = random_isotropic_2(l, rng, bound)?;
                let w = random_vector(l, 2, rng);
                conjugate(l, &v, &w, &jordan(single(rng), random_nonzero_scalar(l, rng)))
            }
            Shape::TraceLine => {
                let v1 = random_isotropic_2(l, rng, bound)?;
                let v2 = random_isotropic_2(l, rng, bound)?;
                let (a, b) = pair(rng);
                conjugate(l, &v1, &v2, &diag(a, b))
            }
        };
        if let Some(m) = built {
            return Ok(m);
        }
    }
    Err(Error::Hypothesis(format!("no {} instance found over {}", shape.name(), l.name())))
}

/// `U (c I_{n-2} ⊕ B) U^dagger` with `B` of the given shape having `c` as an
/// eigenvalue; with `shape = None`, `U (c I_{n-1} ⊕ d) U^dagger`.
pub fn random_corank1<K: NormSets, R: Rng>(
    l: &ExtField<K>,
    n: usize,
    shape: Option<Shape>,
    rng: &mut R,
    bound: u64,
) -> Result<ExtMatrix<K::Elem>> {
    let (c, d) = distinct_pair(l, rng);
    let inner = match shape {
        None => {
            let mut diag = vec![c.clone(); n];
            diag[n - 1] = d;
            crate::linalg::diagonal(l, &diag)
        }
        Some(s) => {
            let b = random_shape(l, s, Some(&c), rng, bound)?;
            crate::linalg::scalar_matrix(l, n - 2, &c).direct_sum(&b, &l.zero())
        }
    };
    let u = random_unitary(l, n, rng);
    Ok(mat_mul(l, &mat_mul(l, &u, &inner), &crate::linalg::dagger(l, &u)))
}

/// A random nonzero element with a norm witness, `(k, w)` with `N(w) = k`.
pub fn random_norm<K: GroundField, R: Rng>(l: &ExtField<K>, rng: &mut R) -> (K::Elem, ExtScalar<K::Elem>) {
    loop {
        let w = random_nonzero_scalar(l, rng);
        let k = l.norm(&w);
        if !l.ground().is_zero(&k) {
            return (k, w);
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::fields::{BigRational, FiniteField, Rationals};
    use crate::linalg::is_unitary;
    use crate::normsets::DEFAULT_BOUND;
    use crate::numrange::{classify_2x2, RangeDescription};

    fn shape_of<E: Clone + Eq + Ord>(d: &RangeDescription<E>) -> Option<Shape> {
        match d {
            RangeDescription::SegmentJoin { .. } => Some(Shape::SegmentJoin),
            RangeDescription::TwoPointCircleFamily { .. } => Some(Shape::TwoPoint),
            RangeDescription::CenterCircleFamily { .. } => Some(Shape::CenterCircle),
            RangeDescription::PuncturedCoset { .. } => Some(Shape::PuncturedCoset),
            RangeDescription::TraceLine { .. } => Some(Shape::TraceLine),
            _ => None,
        }
    }

    #[test]
    fn unitaries_are_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f9 = ExtField::quadratic_auto(FiniteField::prime(3).unwrap()).unwrap();
        let qi = ExtField::quadratic(&BigRational::from_integer((-1).into())).unwrap();
        for n in 1..5 {
            assert!(is_unitary(&f9, &random_unitary(&f9, n, &mut rng)));
            assert!(is_unitary(&qi, &random_unitary(&qi, n, &mut rng)));
        }
    }

    #[test]
    fn shapes_classify_as_built() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f25 = ExtField::quadratic_auto(FiniteField::prime(5).unwrap()).unwrap();
        let q5: ExtField<Rationals> = ExtField::quadratic(&BigRational::from_integer(5.into())).unwrap();
        for shape in Shape::ALL {
            for _ in 0..10 {
                let m = random_shape(&f25, shape, None, &mut rng, 0).unwrap();
                assert_eq!(shape_of(&classify_2x2(&f25, &m, 0).unwrap()), Some(shape));
                let m = random_shape(&q5, shape, None, &mut rng, DEFAULT_BOUND).unwrap();
                assert_eq!(shape_of(&classify_2x2(&q5, &m, DEFAULT_BOUND).unwrap()), Some(shape));
            }
        }
    }
}
