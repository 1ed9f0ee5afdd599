//! Membership in the norm image `Delta = N(L)` and its relatives.
//!
//! Over a finite field the norm map is onto, so every question has answer
//! Yes and only a witness needs to be found. Over Q, membership of `k` in
//! `N(Q(sqrt d))` is decided by Hilbert symbols; sums of norms are decided in
//! closed form where possible and searched otherwise.

mod hilbert;

use num::{BigInt, BigRational, One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::fields::{ExtField, ExtScalar, FiniteField, GroundField, Rationals};
use crate::fields::{int_sqrt, RationalsByHeight};

pub use hilbert::{hilbert_symbol, norm_obstruction, relevant_places, square_class, Place};

/// Default height bound for witness searches.
pub const DEFAULT_BOUND: u64 = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown,
}

impl Answer {
    pub fn as_str(self) -> &'static str {
        match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::Unknown => "Unknown",
        }
    }
}

/// Result of a `Delta` or `Delta_n` membership query.
///
/// For `Yes`, `witness` is either empty (existence is proven but no witness
/// was found within the search bound) or a list `w_1, .., w_r` with
/// `sum N(w_i) = k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaVerdict<E> {
    pub answer: Answer,
    pub witness: Vec<ExtScalar<E>>,
    pub bound: Option<u64>,
    pub obstruction: Option<String>,
}

impl<E> DeltaVerdict<E> {
    pub fn yes(witness: Vec<ExtScalar<E>>) -> Self {
        Self { answer: Answer::Yes, witness, bound: None, obstruction: None }
    }

    fn yes_unwitnessed(bound: u64) -> Self {
        Self { answer: Answer::Yes, witness: Vec::new(), bound: Some(bound), obstruction: None }
    }

    pub fn no(obstruction: impl Into<String>) -> Self {
        Self { answer: Answer::No, witness: Vec::new(), bound: None, obstruction: Some(obstruction.into()) }
    }

    pub fn unknown(bound: u64) -> Self {
        Self { answer: Answer::Unknown, witness: Vec::new(), bound: Some(bound), obstruction: None }
    }

    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

impl<E: Clone + Eq> DeltaVerdict<E> {
    /// Checks the witness exactly: `sum N(w_i) = k`.
    pub fn verifies<K: GroundField<Elem = E>>(&self, l: &ExtField<K>, k: &E) -> bool {
        let g = l.ground();
        let s = self.witness.iter().fold(g.zero(), |acc, w| g.add(&acc, &l.norm(w)));
        s == *k
    }

    pub fn to_json<K: GroundField<Elem = E>>(&self, l: &ExtField<K>) -> serde_json::Value {
        let witness = match self.witness.len() {
            0 => serde_json::Value::Null,
            1 => json!(l.format_scalar(&self.witness[0])),
            _ => json!(self.witness.iter().map(|w| l.format_scalar(w)).collect::<Vec<_>>()),
        };
        json!({
            "answer": self.answer.as_str(),
            "witness": witness,
            "bound": self.bound,
            "obstruction": self.obstruction,
        })
    }
}

/// A parameter `t` in `Dhat ∩ (1 - Dhat)` with `N(w) = t` and `N(w_c) = 1 - t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentPoint<E> {
    pub t: E,
    pub w: ExtScalar<E>,
    pub w_c: ExtScalar<E>,
}

/// Norm-set decisions, specialized per ground field.
pub trait NormSets: GroundField {
    fn in_delta(l: &ExtField<Self>, k: &Self::Elem, bound: u64) -> DeltaVerdict<Self::Elem>;

    fn in_delta_n(l: &ExtField<Self>, k: &Self::Elem, n: usize, bound: u64) -> DeltaVerdict<Self::Elem>;

    /// Distinct elements of `Dhat ∩ (1 - Dhat)` with witnesses; for a finite
    /// field, all of them regardless of `count`.
    fn segment_sample(l: &ExtField<Self>, count: usize) -> Vec<SegmentPoint<Self::Elem>>;
}

/// Witness `w` with `N(w) = k`, if one is available.
pub fn norm_witness<K: NormSets>(l: &ExtField<K>, k: &K::Elem, bound: u64) -> Option<ExtScalar<K::Elem>> {
    let v = K::in_delta(l, k, bound);
    v.witness.into_iter().next()
}

/// Whether `k ∈ Dhat`.
pub fn in_hat_delta<K: NormSets>(l: &ExtField<K>, k: &K::Elem, bound: u64) -> Answer {
    if l.ground().is_zero(k) {
        Answer::No
    } else {
        K::in_delta(l, k, bound).answer
    }
}

/// Whether `0 ∈ Dhat_2`, equivalently `-1 ∈ Dhat`; a Yes carries `(1, w)` with `N(w) = -1`.
pub fn zero_in_hat_delta2<K: NormSets>(l: &ExtField<K>, bound: u64) -> DeltaVerdict<K::Elem> {
    let minus_one = l.ground().from_int(-1);
    let mut v = K::in_delta(l, &minus_one, bound);
    if v.is_yes() && !v.witness.is_empty() {
        v.witness.insert(0, l.one());
    }
    v
}

/// Given `sum N(a_i) = k` with `k != 0`, builds and checks `sum N(a_i / k) = 1/k`.
pub fn inv_in_delta_n_check<K: GroundField>(
    l: &ExtField<K>,
    k: &K::Elem,
    witness: &[ExtScalar<K::Elem>],
) -> Result<(bool, Vec<ExtScalar<K::Elem>>)> {
    let g = l.ground();
    if witness.is_empty() {
        return Err(Error::MissingWitness(format!("a decomposition of {}", g.format_elem(k))));
    }
    let kinv = g.inv(k)?;
    let scaled: Vec<_> = witness.iter().map(|a| l.scale(&kinv, a)).collect();
    let s = scaled.iter().fold(g.zero(), |acc, w| g.add(&acc, &l.norm(w)));
    Ok((s == kinv, scaled))
}

impl NormSets for FiniteField {
    fn in_delta(l: &ExtField<Self>, k: &Self::Elem, _bound: u64) -> DeltaVerdict<Self::Elem> {
        let g = l.ground();
        if g.characteristic() == 2 {
            // N(x) = x^2 and squaring is onto
            let x = g.sqrt(k).expect("every element is a square");
            return DeltaVerdict::yes(vec![l.from_ground(x)]);
        }
        let alpha = l.alpha().expect("odd characteristic").clone();
        for y in g.elements().expect("finite") {
            let r = g.add(k, &g.mul(&alpha, &g.square(&y)));
            if let Some(x) = g.sqrt(&r) {
                return DeltaVerdict::yes(vec![ExtScalar::new(x, y)]);
            }
        }
        unreachable!("the norm map of a finite field extension is onto")
    }

    fn in_delta_n(l: &ExtField<Self>, k: &Self::Elem, n: usize, bound: u64) -> DeltaVerdict<Self::Elem> {
        if n == 0 {
            return if l.ground().is_zero(k) { DeltaVerdict::yes(vec![]) } else { DeltaVerdict::no("empty sum") };
        }
        let mut v = Self::in_delta(l, k, bound);
        v.witness.resize(n, l.zero());
        v
    }

    fn segment_sample(l: &ExtField<Self>, _count: usize) -> Vec<SegmentPoint<Self::Elem>> {
        let g = l.ground();
        g.elements()
            .expect("finite")
            .into_iter()
            .filter(|t| !g.is_zero(t) && !g.is_one(t))
            .map(|t| {
                let c = g.sub(&g.one(), &t);
                let w = norm_witness(l, &t, 0).expect("onto");
                let w_c = norm_witness(l, &c, 0).expect("onto");
                SegmentPoint { t, w, w_c }
            })
            .collect()
    }
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Searches `x^2 - d y^2 = k` with `y = a/(c kd)` for `0 <= a, 1 <= c <= bound`.
fn search_norm_witness(d: &BigInt, k: &BigRational, bound: u64) -> Option<ExtScalar<BigRational>> {
    let (kn, kd) = (k.numer(), k.denom());
    let base = kn * kd;
    for c in 1..=bound {
        let c = BigInt::from(c);
        let c2b = &base * &c * &c;
        let den = &c * kd;
        for a in 0..=bound {
            let a = BigInt::from(a);
            let s2 = &c2b + d * &a * &a;
            if let Some(s) = int_sqrt(&s2) {
                return Some(ExtScalar::new(BigRational::new(s, den.clone()), BigRational::new(a, den.clone())));
            }
        }
    }
    None
}

/// Writes a non-negative integer as a sum of four squares, searching descending.
fn four_squares(n: &BigInt, budget: u64) -> Option<[BigInt; 4]> {
    if n.is_zero() {
        return Some([BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]);
    }
    let mut steps = 0u64;
    let top = n.sqrt();
    let mut a = top.clone();
    while !a.is_negative() {
        let r1 = n - &a * &a;
        let mut b = r1.sqrt().min(a.clone());
        while !b.is_negative() {
            let r2 = &r1 - &b * &b;
            let mut c = r2.sqrt().min(b.clone());
            while !c.is_negative() {
                steps += 1;
                if steps > budget {
                    return None;
                }
                let r3 = &r2 - &c * &c;
                if r3 > &c * &c {
                    break;
                }
                if let Some(e) = int_sqrt(&r3) {
                    return Some([a, b, c, e]);
                }
                c -= 1;
            }
            b -= 1;
        }
        a -= 1;
    }
    None
}

const FOUR_SQUARE_BUDGET: u64 = 2_000_000;

/// `k >= 0` as four squares of rationals.
fn rational_four_squares(k: &BigRational) -> Option<[BigRational; 4]> {
    let n = k.numer() * k.denom();
    let parts = four_squares(&n, FOUR_SQUARE_BUDGET)?;
    Some(parts.map(|p| BigRational::new(p, k.denom().clone())))
}

impl NormSets for Rationals {
    fn in_delta(l: &ExtField<Self>, k: &BigRational, bound: u64) -> DeltaVerdict<BigRational> {
        if k.is_zero() {
            return DeltaVerdict::yes(vec![l.zero()]);
        }
        let d = l.d();
        if let Some(place) = norm_obstruction(&d, &square_class(k.numer(), k.denom())) {
            return DeltaVerdict::no(place.to_string());
        }
        match search_norm_witness(&d, k, bound) {
            Some(w) => DeltaVerdict::yes(vec![w]),
            None => DeltaVerdict::yes_unwitnessed(bound),
        }
    }

    fn in_delta_n(l: &ExtField<Self>, k: &BigRational, n: usize, bound: u64) -> DeltaVerdict<BigRational> {
        let pad = |mut w: Vec<ExtScalar<BigRational>>| {
            w.resize(n.max(w.len()), l.zero());
            DeltaVerdict::yes(w)
        };
        if n == 0 {
            return if k.is_zero() { DeltaVerdict::yes(vec![]) } else { DeltaVerdict::no("empty sum") };
        }
        if n == 1 {
            return Self::in_delta(l, k, bound);
        }
        if k.is_zero() {
            return pad(vec![]);
        }
        let d = l.d();
        if d.is_negative() && k.is_negative() {
            return DeltaVerdict::no(Place::Real.to_string());
        }
        let single = Self::in_delta(l, k, bound);
        if single.is_yes() && !single.witness.is_empty() {
            return pad(single.witness);
        }
        if n >= 4 && k.is_positive() {
            // squares are norms
            return match rational_four_squares(k) {
                Some(s) => pad(s.into_iter().map(|x| l.from_ground(x)).collect()),
                None => DeltaVerdict::yes_unwitnessed(bound),
            };
        }
        if n >= 4 && d.is_positive() {
            // N(s beta) = -d s^2
            let r = -k / rat(d.clone());
            return match rational_four_squares(&r) {
                Some(s) => pad(s.into_iter().map(|x| ExtScalar::new(BigRational::zero(), x)).collect()),
                None => DeltaVerdict::yes_unwitnessed(bound),
            };
        }
        if d == -BigInt::one() && k.is_positive() {
            return match rational_four_squares(k) {
                Some([a, b, c, e]) => pad(vec![ExtScalar::new(a, b), ExtScalar::new(c, e)]),
                None => DeltaVerdict::yes_unwitnessed(bound),
            };
        }
        search_sum_of_norms(l, k, n, bound)
    }

    fn segment_sample(l: &ExtField<Self>, count: usize) -> Vec<SegmentPoint<BigRational>> {
        // t = N(1/z), 1 - t = N(r beta / z) with z = 1 + r beta
        RationalsByHeight::positive()
            .take(count)
            .map(|r| {
                let z = ExtScalar::new(BigRational::one(), r.clone());
                let zinv = l.inv(&z).expect("z != 0");
                let t = l.norm(&zinv);
                let w_c = l.mul(&ExtScalar::new(BigRational::zero(), r), &zinv);
                SegmentPoint { t, w: zinv, w_c }
            })
            .collect()
    }
}

/// Bounded search for `k = N(z_1) + .. + N(z_n)` with small `z_1, .., z_{n-1}`.
fn search_sum_of_norms(l: &ExtField<Rationals>, k: &BigRational, n: usize, bound: u64) -> DeltaVerdict<BigRational> {
    let limit = (bound as usize).clamp(8, 40);
    let small: Vec<_> = RationalsByHeight::signed().take(limit).collect();
    let mut proven = false;
    for x in &small {
        for y in &small {
            let z = ExtScalar::new(x.clone(), y.clone());
            let rest = k - l.norm(&z);
            let sub = if n == 2 {
                Rationals::in_delta(l, &rest, bound.min(60))
            } else {
                search_sum_of_norms(l, &rest, n - 1, bound.min(8))
            };
            if sub.is_yes() {
                if sub.witness.is_empty() {
                    proven = true;
                    continue;
                }
                let mut w = vec![z];
                w.extend(sub.witness);
                w.resize(n, l.zero());
                return DeltaVerdict::yes(w);
            }
        }
    }
    if proven {
        DeltaVerdict::yes_unwitnessed(bound)
    } else {
        DeltaVerdict::unknown(bound)
    }
}

/// `(m, z, s)` with `m = N(z)`, `1 - m = s^2`, `s != 0`, and `z` in neither `K` nor `K beta`.
pub fn find_norm_with_square_complement(
    l: &ExtField<Rationals>,
    bound: u64,
) -> Result<(BigRational, ExtScalar<BigRational>, BigRational)> {
    // integer points of X^2 - d Y^2 + S^2 = W^2
    let d = l.d();
    for w in 1..=bound {
        let wb = BigInt::from(w);
        let w2 = &wb * &wb;
        for x in 1..=bound {
            for y in 1..=bound {
                let (xb, yb) = (BigInt::from(x), BigInt::from(y));
                let s2 = &w2 - &xb * &xb + &d * &yb * &yb;
                if !s2.is_positive() {
                    if d.is_negative() {
                        break;
                    }
                    continue;
                }
                if let Some(s) = int_sqrt(&s2) {
                    let z = ExtScalar::new(BigRational::new(xb, wb.clone()), BigRational::new(yb, wb.clone()));
                    let m = l.norm(&z);
                    return Ok((m, z, BigRational::new(s, wb)));
                }
            }
            if d.is_negative() && BigInt::from(x) * BigInt::from(x) >= w2 {
                break;
            }
        }
    }
    Err(Error::NotFoundWithinBound { bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qd(d: i64) -> ExtField<Rationals> {
        ExtField::quadratic(&rat(d)).unwrap()
    }

    #[test]
    fn delta_examples() {
        let qi = qd(-1);
        let v = Rationals::in_delta(&qi, &r(7, 1), DEFAULT_BOUND);
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.obstruction.as_deref(), Some("p=7"));
        let v = Rationals::in_delta(&qi, &r(2, 1), DEFAULT_BOUND);
        assert_eq!(v.witness, vec![qi.from_ints(1, 1)]);
        let q5 = qd(5);
        let v = Rationals::in_delta(&q5, &r(-1, 1), DEFAULT_BOUND);
        assert_eq!(v.witness, vec![q5.from_ints(2, 1)]);
        let f7 = ExtField::quadratic_auto(FiniteField::prime(7).unwrap()).unwrap();
        for k in f7.ground().elements().unwrap() {
            let v = FiniteField::in_delta(&f7, &k, 0);
            assert!(v.is_yes() && v.verifies(&f7, &k));
        }
    }

    #[test]
    fn delta_n_examples() {
        let qi = qd(-1);
        let v = Rationals::in_delta_n(&qi, &r(7, 1), 2, DEFAULT_BOUND);
        assert!(v.is_yes() && v.verifies(&qi, &r(7, 1)));
        assert_eq!(Rationals::in_delta_n(&qi, &r(-1, 1), 3, DEFAULT_BOUND).answer, Answer::No);
        let q2 = qd(2);
        let v = Rationals::in_delta_n(&q2, &r(1, 3), 4, DEFAULT_BOUND);
        assert!(v.is_yes() && v.verifies(&q2, &r(1, 3)));
        let v = Rationals::in_delta_n(&q2, &r(-5, 7), 4, DEFAULT_BOUND);
        assert!(v.is_yes() && v.verifies(&q2, &r(-5, 7)));
    }

    #[test]
    fn inverse_rescaling() {
        let qi = qd(-1);
        let (ok, w) = inv_in_delta_n_check(&qi, &r(2, 1), &[qi.from_ints(1, 1)]).unwrap();
        assert!(ok);
        assert_eq!(w, vec![ExtScalar::new(r(1, 2), r(1, 2))]);
        let q5 = qd(5);
        let (ok, w) = inv_in_delta_n_check(&q5, &r(-1, 1), &[q5.from_ints(2, 1)]).unwrap();
        assert!(ok);
        assert_eq!(w, vec![q5.from_ints(-2, -1)]);
        let f5 = ExtField::quadratic_auto(FiniteField::prime(5).unwrap()).unwrap();
        let k = f5.ground().from_int(3);
        let v = FiniteField::in_delta(&f5, &k, 0);
        assert!(inv_in_delta_n_check(&f5, &k, &v.witness).unwrap().0);
        assert!(inv_in_delta_n_check(&f5, &k, &[]).is_err());
    }

    #[test]
    fn zero_in_hat_delta2_examples() {
        assert_eq!(zero_in_hat_delta2(&qd(-1), DEFAULT_BOUND).answer, Answer::No);
        let q5 = qd(5);
        let v = zero_in_hat_delta2(&q5, DEFAULT_BOUND);
        assert_eq!(v.witness, vec![q5.one(), q5.from_ints(2, 1)]);
        let f3 = ExtField::quadratic_auto(FiniteField::prime(3).unwrap()).unwrap();
        let v = zero_in_hat_delta2(&f3, 0);
        assert!(v.is_yes() && v.verifies(&f3, &f3.ground().zero()));
    }

    #[test]
    fn segment_examples() {
        let qi = qd(-1);
        let pts = Rationals::segment_sample(&qi, 3);
        assert_eq!(pts[0].t, r(1, 2));
        assert_eq!(pts[1].t, r(4, 5));
        for p in &pts {
            assert_eq!(qi.norm(&p.w), p.t);
            assert_eq!(qi.norm(&p.w_c), r(1, 1) - &p.t);
        }
        let f3 = ExtField::quadratic_auto(FiniteField::prime(3).unwrap()).unwrap();
        let pts = FiniteField::segment_sample(&f3, 0);
        assert_eq!(pts.iter().map(|p| p.t).collect::<Vec<_>>(), vec![f3.ground().from_int(2)]);
        let f2 = ExtField::quadratic_auto(FiniteField::prime(2).unwrap()).unwrap();
        assert!(FiniteField::segment_sample(&f2, 0).is_empty());
    }

    #[test]
    fn square_complement() {
        let qi = qd(-1);
        let (m, z, s) = find_norm_with_square_complement(&qi, 50).unwrap();
        assert_eq!(m, qi.norm(&z));
        assert_eq!(r(1, 1) - &m, &s * &s);
        assert!(!z.c0.is_zero() && !z.c1.is_zero() && !s.is_zero());
        let z = ExtScalar::new(r(9, 25), r(12, 25));
        assert_eq!(qi.norm(&z), r(9, 25));
        // 1 - 1/4 = 3/4 is not a rational square
        let z = ExtScalar::new(r(3, 10), r(4, 10));
        assert!(int_sqrt(&BigInt::from(3)).is_none() && qi.norm(&z) == r(1, 4));
    }

    #[test]
    fn four_squares_small() {
        for n in 0..200i64 {
            let s = four_squares(&BigInt::from(n), 1_000_000).unwrap();
            assert_eq!(s.iter().map(|x| x * x).sum::<BigInt>(), BigInt::from(n));
        }
    }
}
