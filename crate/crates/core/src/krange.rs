//! The K-numerical range `Num(M)_K = {sum m_ij x_i x_j : sum x_i^2 = 1}` of a
//! matrix with entries in the ground field.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fields::{BigRational, GroundField, Rationals};
use crate::numrange::k_sphere_points;

/// A square matrix over `K`, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KMatrix<E> {
    n: usize,
    entries: Vec<Vec<E>>,
}

impl<E: Clone> KMatrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: r.len() });
        }
        Ok(Self { n, entries: rows })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        Self { n, entries: (0..n).map(|i| (0..n).map(|j| f(i, j)).collect()).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<E>] {
        &self.entries
    }
}

/// `sum m_ij x_i x_j`.
pub fn k_form_value<K: GroundField>(k: &K, m: &KMatrix<K::Elem>, x: &[K::Elem]) -> K::Elem {
    let mut acc = k.zero();
    for i in 0..m.n() {
        for j in 0..m.n() {
            acc = k.add(&acc, &k.mul(m.get(i, j), &k.mul(&x[i], &x[j])));
        }
    }
    acc
}

fn sum_of_squares<K: GroundField>(k: &K, x: &[K::Elem]) -> K::Elem {
    x.iter().fold(k.zero(), |acc, a| k.add(&acc, &k.square(a)))
}

/// Value of a K-numerical range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KRangeResult<E> {
    SingletonK { c: E },
    FiniteSetK { points: Vec<E> },
    FullField,
    /// Each value with a unit vector of `K^n` attaining it.
    SampledK { values: Vec<(Vec<E>, E)> },
}

impl<E: Clone> KRangeResult<E> {
    pub fn variant_name(&self) -> &'static str {
        match self {
            KRangeResult::SingletonK { .. } => "SingletonK",
            KRangeResult::FiniteSetK { .. } => "FiniteSetK",
            KRangeResult::FullField => "FullField",
            KRangeResult::SampledK { .. } => "SampledK",
        }
    }

    pub fn to_json<K: GroundField<Elem = E>>(&self, k: &K) -> Value {
        let f = |a: &E| Value::String(k.format_elem(a));
        match self {
            KRangeResult::SingletonK { c } => json!({ "variant": "SingletonK", "c": f(c) }),
            KRangeResult::FiniteSetK { points } => {
                json!({ "variant": "FiniteSetK", "points": points.iter().map(f).collect::<Vec<_>>() })
            }
            KRangeResult::FullField => json!({ "variant": "FullField" }),
            KRangeResult::SampledK { values } => json!({
                "variant": "SampledK",
                "values": values
                    .iter()
                    .map(|(x, v)| json!({ "vector": x.iter().map(f).collect::<Vec<_>>(), "value": f(v) }))
                    .collect::<Vec<_>>(),
            }),
        }
    }
}

/// `Num(M)_K` for finite `K`, sorted. Costs `q^(n-1)` evaluations.
pub fn k_range_exhaustive<K: GroundField>(k: &K, m: &KMatrix<K::Elem>, budget: u128) -> Result<Vec<K::Elem>> {
    let els = k.elements().ok_or_else(|| Error::Unsupported("exhaustive K-ranges need a finite field".into()))?;
    let n = m.n();
    let needed = (els.len() as u128).saturating_pow(n as u32 - 1);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut out = BTreeSet::new();
    let mut x = vec![k.zero(); n];
    let char2 = k.characteristic() == 2;
    let mut idx = vec![0usize; n - 1];
    loop {
        for (i, &c) in idx.iter().enumerate() {
            x[i] = els[c].clone();
        }
        let head = &x[..n - 1];
        if char2 {
            // the sphere is the hyperplane sum x_i = 1
            x[n - 1] = head.iter().fold(k.one(), |acc, a| k.add(&acc, a));
            out.insert(k_form_value(k, m, &x));
        } else if let Some(s) = k.sqrt(&k.sub(&k.one(), &sum_of_squares(k, head))) {
            for last in [s.clone(), k.neg(&s)] {
                x[n - 1] = last;
                out.insert(k_form_value(k, m, &x));
            }
        }
        // odometer over the first n - 1 coordinates
        let mut pos = 0;
        loop {
            if pos == n - 1 {
                return Ok(out.into_iter().collect());
            }
            idx[pos] += 1;
            if idx[pos] < els.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// The symmetric matrix `(m_ij + m_ji)/2`, which has the same K-range.
pub fn symmetrize<K: GroundField>(k: &K, m: &KMatrix<K::Elem>) -> Result<KMatrix<K::Elem>> {
    if k.characteristic() == 2 {
        return Err(Error::Unsupported("symmetrization divides by 2".into()));
    }
    let half = k.inv(&k.from_int(2))?;
    Ok(KMatrix::from_fn(m.n(), |i, j| k.mul(&half, &k.add(m.get(i, j), m.get(j, i)))))
}

/// The lower-triangular matrix with the diagonal of `M` and `m_ij + m_ji`
/// below it, which has the same K-range in every characteristic.
pub fn triangular_form<K: GroundField>(k: &K, m: &KMatrix<K::Elem>) -> KMatrix<K::Elem> {
    KMatrix::from_fn(m.n(), |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => m.get(i, i).clone(),
        std::cmp::Ordering::Less => k.zero(),
        std::cmp::Ordering::Greater => k.add(m.get(i, j), m.get(j, i)),
    })
}

/// Structural singleton test: `Some(m_11)` iff every diagonal entry equals
/// `m_11` and `m_ij + m_ji = 0` off the diagonal. In characteristic 2 the
/// second condition reads `m_ij = m_ji`.
pub fn is_singleton_k<K: GroundField>(k: &K, m: &KMatrix<K::Elem>) -> Option<K::Elem> {
    let c = m.get(0, 0).clone();
    let n = m.n();
    for i in 0..n {
        if *m.get(i, i) != c {
            return None;
        }
        for j in i + 1..n {
            if !k.is_zero(&k.add(m.get(i, j), m.get(j, i))) {
                return None;
            }
        }
    }
    Some(c)
}

/// Exact polynomial keyed by exponent vectors; zero coefficients are never stored.
pub type Poly<E> = BTreeMap<Vec<u32>, E>;

fn poly_add_term<K: GroundField>(k: &K, p: &mut Poly<K::Elem>, exp: Vec<u32>, c: K::Elem) {
    let next = match p.get(&exp) {
        Some(old) => k.add(old, &c),
        None => c,
    };
    if k.is_zero(&next) {
        p.remove(&exp);
    } else {
        p.insert(exp, next);
    }
}

fn poly_mul<K: GroundField>(k: &K, a: &Poly<K::Elem>, b: &Poly<K::Elem>) -> Poly<K::Elem> {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let exp = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            poly_add_term(k, &mut out, exp, k.mul(ca, cb));
        }
    }
    out
}

pub fn poly_degree<E>(p: &Poly<E>) -> Option<u32> {
    p.keys().map(|e| e.iter().sum()).max()
}

pub fn poly_eval<K: GroundField>(k: &K, p: &Poly<K::Elem>, x: &[K::Elem]) -> K::Elem {
    p.iter().fold(k.zero(), |acc, (exp, c)| {
        let mono = exp.iter().zip(x).fold(c.clone(), |m, (&e, xi)| (0..e).fold(m, |m, _| k.mul(&m, xi)));
        k.add(&acc, &mono)
    })
}

/// `f_M` after `x_n = 1 + x_1 + ... + x_{n-1}`, with its quadratic part `g_M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Char2Reduction<E> {
    pub f: Poly<E>,
    pub g: Poly<E>,
    /// `None` for the zero polynomial.
    pub degree: Option<u32>,
    pub classification: KRangeResult<E>,
}

/// Reduces `Num(M)_K` in characteristic 2 to the image of `f_M : K^(n-1) -> K`.
///
/// Degree 0 gives a singleton and degree 1 the whole field. In degree 2 a
/// finite field is enumerated; an infinite one is `FullField` when some
/// `x_i x_j` coefficient is nonzero while the `x_j^2` one vanishes, since
/// then `f_M` is affine and non-constant in `x_j` for a suitable `x_i`.
pub fn char2_reduce<K: GroundField>(k: &K, m: &KMatrix<K::Elem>, budget: u128) -> Result<Char2Reduction<K::Elem>> {
    if k.characteristic() != 2 {
        return Err(Error::Unsupported("char2_reduce needs characteristic 2".into()));
    }
    let n = m.n();
    let vars = n - 1;
    let linear = |i: usize| -> Poly<K::Elem> {
        let mut p = Poly::new();
        if i < vars {
            let mut e = vec![0; vars];
            e[i] = 1;
            p.insert(e, k.one());
        } else {
            p.insert(vec![0; vars], k.one());
            for j in 0..vars {
                let mut e = vec![0; vars];
                e[j] = 1;
                p.insert(e, k.one());
            }
        }
        p
    };
    let xs: Vec<_> = (0..n).map(linear).collect();
    let mut f = Poly::new();
    for i in 0..n {
        for j in 0..n {
            if k.is_zero(m.get(i, j)) {
                continue;
            }
            for (e, c) in poly_mul(k, &xs[i], &xs[j]) {
                poly_add_term(k, &mut f, e, k.mul(m.get(i, j), &c));
            }
        }
    }
    let g: Poly<K::Elem> =
        f.iter().filter(|(e, _)| e.iter().sum::<u32>() == 2).map(|(e, c)| (e.clone(), c.clone())).collect();
    let degree = poly_degree(&f);
    let classification = match degree {
        None => KRangeResult::SingletonK { c: k.zero() },
        Some(0) => KRangeResult::SingletonK { c: f.values().next().cloned().unwrap_or_else(|| k.zero()) },
        Some(1) => KRangeResult::FullField,
        _ if k.is_finite() => KRangeResult::FiniteSetK { points: k_range_exhaustive(k, m, budget)? },
        _ => {
            let square = |j: usize| {
                let mut e = vec![0; vars];
                e[j] = 2;
                g.contains_key(&e)
            };
            let mixed = g.keys().any(|e| {
                let ones: Vec<usize> = (0..vars).filter(|&i| e[i] == 1).collect();
                ones.len() == 2 && (!square(ones[0]) || !square(ones[1]))
            });
            if mixed {
                KRangeResult::FullField
            } else {
                return Err(Error::Unsupported("degree-2 reduction without an affine direction".into()));
            }
        }
    };
    Ok(Char2Reduction { f, g, degree, classification })
}

/// Exact sample of `Num(M)_Q`: unit vectors by stereographic projection, each
/// paired with its value.
pub fn k_range_sample(m: &KMatrix<BigRational>, count: usize) -> Vec<(Vec<BigRational>, BigRational)> {
    let k = Rationals;
    k_sphere_points(&k, m.n(), count)
        .into_iter()
        .map(|x| {
            debug_assert!(k.is_one(&sum_of_squares(&k, &x)));
            let v = k_form_value(&k, m, &x);
            (x, v)
        })
        .collect()
}

/// Two sampled unit vectors with different values, proving `|Num(M)_Q| > 1`.
pub fn k_distinct_values(
    m: &KMatrix<BigRational>,
    count: usize,
) -> Option<((Vec<BigRational>, BigRational), (Vec<BigRational>, BigRational))> {
    let mut samples = k_range_sample(m, count).into_iter();
    let first = samples.next()?;
    samples.find(|(_, v)| *v != first.1).map(|second| (first, second))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FiniteField;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn fm(k: &FiniteField, rows: &[&[i64]]) -> KMatrix<crate::fields::FqElem> {
        KMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&a| k.from_int(a)).collect()).collect()).unwrap()
    }

    fn brute(k: &FiniteField, m: &KMatrix<crate::fields::FqElem>) -> Vec<crate::fields::FqElem> {
        let els = k.elements().unwrap();
        let n = m.n();
        let mut out = BTreeSet::new();
        for code in 0..els.len().pow(n as u32) {
            let x: Vec<_> = (0..n).map(|i| els[(code / els.len().pow(i as u32)) % els.len()]).collect();
            if k.is_one(&sum_of_squares(k, &x)) {
                out.insert(k_form_value(k, m, &x));
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn small_examples() {
        let f3 = FiniteField::prime(3).unwrap();
        assert_eq!(k_range_exhaustive(&f3, &fm(&f3, &[&[0, 1], &[2, 0]]), 1000).unwrap(), vec![f3.zero()]);
        assert_eq!(k_range_exhaustive(&f3, &fm(&f3, &[&[0, 0], &[0, 1]]), 1000).unwrap(), vec![f3.zero(), f3.one()]);
        let f2 = FiniteField::prime(2).unwrap();
        let m = fm(&f2, &[&[1, 1], &[0, 1]]);
        assert_eq!(k_range_exhaustive(&f2, &m, 1000).unwrap(), brute(&f2, &m));
    }

    #[test]
    fn exhaustive_matches_brute_force() {
        for p in [2, 3, 5] {
            let k = FiniteField::prime(p).unwrap();
            for seed in 0..20i64 {
                let m = KMatrix::from_fn(3, |i, j| k.from_int(seed * 7 + (i * 3 + j) as i64 * (seed + 1)));
                assert_eq!(k_range_exhaustive(&k, &m, 1 << 20).unwrap(), brute(&k, &m));
            }
        }
        let k = FiniteField::new(2, 2, None).unwrap();
        let els = k.elements().unwrap();
        let m = KMatrix::from_fn(3, |i, j| els[(i * 5 + j * 3 + 1) % 4]);
        assert_eq!(k_range_exhaustive(&k, &m, 1 << 20).unwrap(), brute(&k, &m));
    }

    #[test]
    fn symmetric_forms() {
        let q = Rationals;
        let m = KMatrix::from_rows(vec![vec![r(0, 1), r(1, 1)], vec![r(0, 1), r(0, 1)]]).unwrap();
        let a = symmetrize(&q, &m).unwrap();
        assert_eq!(a.rows(), &[vec![r(0, 1), r(1, 2)], vec![r(1, 2), r(0, 1)]]);
        let t = triangular_form(&q, &m);
        assert_eq!(t.rows(), &[vec![r(0, 1), r(0, 1)], vec![r(1, 1), r(0, 1)]]);
        assert!(symmetrize(&FiniteField::prime(2).unwrap(), &fm(&FiniteField::prime(2).unwrap(), &[&[1]])).is_err());
    }

    #[test]
    fn structural_singletons() {
        let q = Rationals;
        let m = KMatrix::from_rows(vec![vec![r(3, 1), r(1, 1)], vec![r(-1, 1), r(3, 1)]]).unwrap();
        assert_eq!(is_singleton_k(&q, &m), Some(r(3, 1)));
        let f2 = FiniteField::prime(2).unwrap();
        assert_eq!(is_singleton_k(&f2, &fm(&f2, &[&[1, 1], &[1, 1]])), Some(f2.one()));
        let j = KMatrix::from_rows(vec![vec![r(0, 1), r(1, 1)], vec![r(0, 1), r(0, 1)]]).unwrap();
        assert_eq!(is_singleton_k(&q, &j), None);
        let ((_, v1), (x2, v2)) = k_distinct_values(&j, 20).unwrap();
        assert_ne!(v1, v2);
        assert_eq!(k_form_value(&q, &j, &x2), v2);
        let pair = vec![r(3, 5), r(4, 5)];
        assert!(k_range_sample(&j, 20).contains(&(pair, r(12, 25))));
    }

    #[test]
    fn char2_reduction() {
        let f2 = FiniteField::prime(2).unwrap();
        let red = char2_reduce(&f2, &fm(&f2, &[&[1, 1], &[1, 1]]), 1000).unwrap();
        assert_eq!(red.degree, Some(0));
        assert_eq!(red.classification, KRangeResult::SingletonK { c: f2.one() });
        // x_1 (1 + x_1) is a non-zero polynomial that vanishes on F_2
        let j = fm(&f2, &[&[0, 1], &[0, 0]]);
        let red = char2_reduce(&f2, &j, 1000).unwrap();
        assert_eq!(red.degree, Some(2));
        assert_eq!(red.classification, KRangeResult::FiniteSetK { points: vec![f2.zero()] });
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let els = f4.elements().unwrap();
        for seed in 0..30usize {
            let m = KMatrix::from_fn(3, |i, j| els[(seed * 3 + i * 7 + j * (seed % 5 + 1)) % 4]);
            let red = char2_reduce(&f4, &m, 1000).unwrap();
            let want = k_range_exhaustive(&f4, &m, 1000).unwrap();
            for x1 in &els {
                for x2 in &els {
                    let x3 = f4.add(&f4.add(&f4.one(), x1), x2);
                    assert_eq!(poly_eval(&f4, &red.f, &[*x1, *x2]), k_form_value(&f4, &m, &[*x1, *x2, x3]));
                }
            }
            match red.classification {
                KRangeResult::SingletonK { c } => assert_eq!(want, vec![c]),
                KRangeResult::FullField => assert_eq!(want, els),
                KRangeResult::FiniteSetK { points } => assert_eq!(points, want),
                KRangeResult::SampledK { .. } => unreachable!(),
            }
        }
    }

    #[test]
    fn samples_are_unit_vectors() {
        let q = Rationals;
        let id = KMatrix::from_fn(3, |i, j| if i == j { r(1, 1) } else { r(0, 1) });
        for (x, v) in k_range_sample(&id, 40) {
            assert!(q.is_one(&sum_of_squares(&q, &x)));
            assert_eq!(v, r(1, 1));
        }
    }
}
