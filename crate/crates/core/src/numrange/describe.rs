//! Symbolic values of `Num(M)` and what can be done with them.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use crate::circles::{circle_point_set, circle_points, Circle};
use crate::error::{Error, Result};
use crate::fields::{quadratic_roots, ExtField, ExtScalar, GroundField};
use crate::normsets::{in_hat_delta, norm_witness, Answer, NormSets};

/// The value of a numerical range.
///
/// `delta` is the self-pairing of the relevant eigenvector; it only matters
/// up to a factor in `Dhat` and is 1 whenever that vector can be normalized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeDescription<E> {
    Singleton { c: ExtScalar<E> },
    FiniteSet { points: Vec<ExtScalar<E>> },
    /// `c + mu Dhat`; `c` itself is not a member.
    PuncturedCoset { c: ExtScalar<E>, mu: ExtScalar<E> },
    /// `c + mu S` where `S` is `{0}` (when `delta ∈ Delta`) together with the
    /// circles `C(k(1-k), 0)` for `k ∈ delta Dhat ∩ (1 - delta Dhat)`.
    CenterCircleFamily { c: ExtScalar<E>, mu: ExtScalar<E>, delta: E },
    /// `c2 + (c1 - c2) S` where `S = {0, 1}` together with the circles
    /// `C(N(mu) d(1-d), d)` for `d ∈ Dhat ∩ (1 - Dhat)`.
    TwoPointCircleFamily { c1: ExtScalar<E>, c2: ExtScalar<E>, mu: ExtScalar<E> },
    /// `{s c1 + (1-s) c2}` for `s ∈ delta Delta ∩ (1 - delta Delta)`: the
    /// endpoints when `delta ∈ Delta`, and the open segment.
    SegmentJoin { c1: ExtScalar<E>, c2: ExtScalar<E>, delta: E },
    /// `{c1 + (c2 - c1) t : t + sigma(t) = 1}`.
    TraceLine { c1: ExtScalar<E>, c2: ExtScalar<E> },
}

fn all_yes(a: Answer, b: Answer) -> Answer {
    match (a, b) {
        (Answer::No, _) | (_, Answer::No) => Answer::No,
        (Answer::Yes, Answer::Yes) => Answer::Yes,
        _ => Answer::Unknown,
    }
}

fn any_yes(answers: impl IntoIterator<Item = Answer>) -> Answer {
    let mut acc = Answer::No;
    for a in answers {
        match a {
            Answer::Yes => return Answer::Yes,
            Answer::Unknown => acc = Answer::Unknown,
            Answer::No => {}
        }
    }
    acc
}

fn answer_of(b: bool) -> Answer {
    if b {
        Answer::Yes
    } else {
        Answer::No
    }
}

/// A parameter `t` with `t/delta = N(a)` and `(1-t)/delta = N(b)`, both nonzero.
pub(crate) struct Param<E> {
    pub t: E,
    pub a: ExtScalar<E>,
    pub b: ExtScalar<E>,
}

/// Parameters of `delta Dhat ∩ (1 - delta Dhat)` with witnesses: all of them
/// over a finite field, otherwise up to `count` in height order.
pub(crate) fn segment_params<K: NormSets>(l: &ExtField<K>, delta: &K::Elem, count: usize, bound: u64) -> Vec<Param<K::Elem>> {
    let g = l.ground();
    if g.is_one(delta) && !g.is_finite() {
        return K::segment_sample(l, count)
            .into_iter()
            .map(|p| Param { t: p.t, a: p.w, b: p.w_c })
            .collect();
    }
    let dinv = g.inv(delta).expect("delta is nonzero");
    let attempts = if g.is_finite() { usize::MAX } else { 50 * count + 100 };
    let mut out = Vec::new();
    for t in g.elements_by_height().take(attempts) {
        if g.is_zero(&t) || g.is_one(&t) {
            continue;
        }
        let x = g.mul(&t, &dinv);
        let y = g.mul(&g.sub(&g.one(), &t), &dinv);
        if let (Some(a), Some(b)) = (norm_witness(l, &x, bound), norm_witness(l, &y, bound)) {
            out.push(Param { t, a, b });
            if !g.is_finite() && out.len() >= count {
                break;
            }
        }
    }
    out
}

impl<E: Clone + Eq + Ord> RangeDescription<E> {
    pub fn variant_name(&self) -> &'static str {
        match self {
            RangeDescription::Singleton { .. } => "Singleton",
            RangeDescription::FiniteSet { .. } => "FiniteSet",
            RangeDescription::PuncturedCoset { .. } => "PuncturedCoset",
            RangeDescription::CenterCircleFamily { .. } => "CenterCircleFamily",
            RangeDescription::TwoPointCircleFamily { .. } => "TwoPointCircleFamily",
            RangeDescription::SegmentJoin { .. } => "SegmentJoin",
            RangeDescription::TraceLine { .. } => "TraceLine",
        }
    }

    /// Whether `z` belongs to the described set.
    pub fn membership<K: NormSets<Elem = E>>(&self, l: &ExtField<K>, z: &ExtScalar<E>, bound: u64) -> Answer {
        let g = l.ground();
        let hat = |k: &E| in_hat_delta(l, k, bound);
        let in_delta = |k: &E| K::in_delta(l, k, bound).answer;
        match self {
            RangeDescription::Singleton { c } => answer_of(z == c),
            RangeDescription::FiniteSet { points } => answer_of(points.binary_search(z).is_ok()),
            RangeDescription::PuncturedCoset { c, mu } => {
                let w = l.div(&l.sub(z, c), mu).expect("mu != 0");
                if !l.is_ground(&w) {
                    return Answer::No;
                }
                hat(&w.c0)
            }
            RangeDescription::CenterCircleFamily { c, mu, delta } => {
                let zp = l.div(&l.sub(z, c), mu).expect("mu != 0");
                if l.is_zero(&zp) {
                    return in_delta(delta);
                }
                let dinv = g.inv(delta).expect("delta != 0");
                // N(z') = k(1-k)
                let roots = quadratic_roots(g, &g.one(), &g.neg(&g.one()), &l.norm(&zp)).unwrap_or_default();
                any_yes(roots.iter().map(|k| {
                    let rest = g.sub(&g.one(), k);
                    all_yes(hat(&g.mul(k, &dinv)), hat(&g.mul(&rest, &dinv)))
                }))
            }
            RangeDescription::TwoPointCircleFamily { c1, c2, mu } => {
                let zp = l.div(&l.sub(z, c2), &l.sub(c1, c2)).expect("c1 != c2");
                if l.is_zero(&zp) || zp == l.one() {
                    return Answer::Yes;
                }
                // N(z' - d) = N(mu) d (1 - d), a quadratic in d over K
                let nm = l.norm(mu);
                let a = g.add(&g.one(), &nm);
                let b = g.neg(&g.add(&l.trace(&zp), &nm));
                let roots = quadratic_roots(g, &a, &b, &l.norm(&zp)).unwrap_or_default();
                any_yes(roots.iter().map(|d| {
                    if g.is_zero(d) || g.is_one(d) {
                        return Answer::No;
                    }
                    all_yes(hat(d), hat(&g.sub(&g.one(), d)))
                }))
            }
            RangeDescription::SegmentJoin { c1, c2, delta } => {
                if z == c1 || z == c2 {
                    return in_delta(delta);
                }
                let s = l.div(&l.sub(z, c2), &l.sub(c1, c2)).expect("c1 != c2");
                if !l.is_ground(&s) {
                    return Answer::No;
                }
                let dinv = g.inv(delta).expect("delta != 0");
                let rest = g.sub(&g.one(), &s.c0);
                all_yes(hat(&g.mul(&s.c0, &dinv)), hat(&g.mul(&rest, &dinv)))
            }
            RangeDescription::TraceLine { c1, c2 } => {
                let t = l.div(&l.sub(z, c1), &l.sub(c2, c1)).expect("c1 != c2");
                answer_of(g.is_one(&l.trace(&t)))
            }
        }
    }

    /// The full set over a finite field, sorted.
    pub fn enumerate<K: NormSets<Elem = E>>(&self, l: &ExtField<K>) -> Result<Vec<ExtScalar<E>>> {
        let g = l.ground();
        if !g.is_finite() {
            return Err(Error::Unsupported("enumeration needs a finite field".into()));
        }
        let mut out = BTreeSet::new();
        match self {
            RangeDescription::Singleton { c } => {
                out.insert(c.clone());
            }
            RangeDescription::FiniteSet { points } => out.extend(points.iter().cloned()),
            RangeDescription::PuncturedCoset { c, mu } => {
                for k in g.elements().expect("finite") {
                    if in_hat_delta(l, &k, 0) == Answer::Yes {
                        out.insert(l.add(c, &l.mul(mu, &l.from_ground(k))));
                    }
                }
            }
            RangeDescription::CenterCircleFamily { c, mu, delta } => {
                let map = |z: &ExtScalar<E>| l.add(c, &l.mul(mu, z));
                if K::in_delta(l, delta, 0).is_yes() {
                    out.insert(c.clone());
                }
                for p in segment_params(l, delta, 0, 0) {
                    let r = g.mul(&p.t, &g.sub(&g.one(), &p.t));
                    for z in circle_point_set(l, &Circle::new(l.zero(), r))? {
                        out.insert(map(&z));
                    }
                }
            }
            RangeDescription::TwoPointCircleFamily { c1, c2, mu } => {
                let scale = l.sub(c1, c2);
                let map = |z: &ExtScalar<E>| l.add(c2, &l.mul(&scale, z));
                out.insert(c1.clone());
                out.insert(c2.clone());
                let nm = l.norm(mu);
                for p in segment_params(l, &g.one(), 0, 0) {
                    let r = g.mul(&nm, &g.mul(&p.t, &g.sub(&g.one(), &p.t)));
                    for z in circle_point_set(l, &Circle::new(l.from_ground(p.t.clone()), r))? {
                        out.insert(map(&z));
                    }
                }
            }
            RangeDescription::SegmentJoin { c1, c2, delta } => {
                if K::in_delta(l, delta, 0).is_yes() {
                    out.insert(c1.clone());
                    out.insert(c2.clone());
                }
                for p in segment_params(l, delta, 0, 0) {
                    out.insert(segment_point(l, c1, c2, &p.t));
                }
            }
            RangeDescription::TraceLine { c1, c2 } => {
                let scale = l.sub(c2, c1);
                for t in l.elements().expect("finite") {
                    if g.is_one(&l.trace(&t)) {
                        out.insert(l.add(c1, &l.mul(&scale, &t)));
                    }
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Up to `count` distinct members, each certified by construction.
    pub fn sample<K: NormSets<Elem = E>>(&self, l: &ExtField<K>, count: usize, bound: u64) -> Result<Vec<ExtScalar<E>>> {
        let g = l.ground();
        if g.is_finite() {
            let mut all = self.enumerate(l)?;
            all.truncate(count);
            return Ok(all);
        }
        let mut out: Vec<ExtScalar<E>> = Vec::new();
        let mut seen = BTreeSet::new();
        let mut push = |z: ExtScalar<E>, out: &mut Vec<ExtScalar<E>>| {
            if out.len() < count && seen.insert(z.clone()) {
                out.push(z);
            }
        };
        // points per circle, so several circles are visited
        let per = 4;
        match self {
            RangeDescription::Singleton { c } => push(c.clone(), &mut out),
            RangeDescription::FiniteSet { points } => points.iter().for_each(|p| push(p.clone(), &mut out)),
            RangeDescription::PuncturedCoset { c, mu } => {
                for x in g.elements_by_height().take(count * 20 + 20) {
                    for y in [g.zero(), g.one()] {
                        let w = ExtScalar::new(x.clone(), y);
                        if !l.is_zero(&w) {
                            push(l.add(c, &l.mul(mu, &l.from_ground(l.norm(&w)))), &mut out);
                        }
                    }
                    if out.len() >= count {
                        break;
                    }
                }
            }
            RangeDescription::CenterCircleFamily { c, mu, delta } => {
                if K::in_delta(l, delta, bound).is_yes() {
                    push(c.clone(), &mut out);
                }
                for p in segment_params(l, delta, count, bound) {
                    // k(1-k) = N(delta sigma(a) b)
                    let w = l.scale(delta, &l.mul(&l.conj(&p.a), &p.b));
                    let circle = Circle::new(l.zero(), l.norm(&w));
                    for z in circle_points(l, &circle, &w)?.take(per) {
                        push(l.add(c, &l.mul(mu, &z)), &mut out);
                    }
                    if out.len() >= count {
                        break;
                    }
                }
            }
            RangeDescription::TwoPointCircleFamily { c1, c2, mu } => {
                let scale = l.sub(c1, c2);
                push(c1.clone(), &mut out);
                push(c2.clone(), &mut out);
                for p in segment_params(l, &g.one(), count, bound) {
                    // N(mu) d (1-d) = N(mu sigma(a) b)
                    let w = l.mul(mu, &l.mul(&l.conj(&p.a), &p.b));
                    let circle = Circle::new(l.from_ground(p.t.clone()), l.norm(&w));
                    let pts: Vec<_> = if l.is_zero(&w) {
                        vec![circle.center.clone()]
                    } else {
                        circle_points(l, &circle, &w)?.take(per).collect()
                    };
                    for z in pts {
                        push(l.add(c2, &l.mul(&scale, &z)), &mut out);
                    }
                    if out.len() >= count {
                        break;
                    }
                }
            }
            RangeDescription::SegmentJoin { c1, c2, delta } => {
                if K::in_delta(l, delta, bound).is_yes() {
                    push(c1.clone(), &mut out);
                    push(c2.clone(), &mut out);
                }
                for p in segment_params(l, delta, count, bound) {
                    push(segment_point(l, c1, c2, &p.t), &mut out);
                }
            }
            RangeDescription::TraceLine { c1, c2 } => {
                let scale = l.sub(c2, c1);
                let half = g.inv(&g.from_int(2))?;
                for y in g.elements_by_height().take(count) {
                    let t = ExtScalar::new(half.clone(), y);
                    push(l.add(c1, &l.mul(&scale, &t)), &mut out);
                }
            }
        }
        Ok(out)
    }

    pub fn to_json<K: GroundField<Elem = E>>(&self, l: &ExtField<K>) -> Value {
        let s = |z: &ExtScalar<E>| json!(l.format_scalar(z));
        let k = |x: &E| json!(l.ground().format_elem(x));
        let body = match self {
            RangeDescription::Singleton { c } => json!({ "c": s(c) }),
            RangeDescription::FiniteSet { points } => json!({ "points": points.iter().map(s).collect::<Vec<_>>() }),
            RangeDescription::PuncturedCoset { c, mu } => json!({ "c": s(c), "mu": s(mu) }),
            RangeDescription::CenterCircleFamily { c, mu, delta } => json!({ "c": s(c), "mu": s(mu), "delta": k(delta) }),
            RangeDescription::TwoPointCircleFamily { c1, c2, mu } => json!({ "c1": s(c1), "c2": s(c2), "mu": s(mu) }),
            RangeDescription::SegmentJoin { c1, c2, delta } => json!({ "c1": s(c1), "c2": s(c2), "delta": k(delta) }),
            RangeDescription::TraceLine { c1, c2 } => json!({ "c1": s(c1), "c2": s(c2) }),
        };
        json!({ self.variant_name(): body })
    }
}

/// `t c1 + (1 - t) c2` for `t ∈ K`.
pub(crate) fn segment_point<K: GroundField>(
    l: &ExtField<K>,
    c1: &ExtScalar<K::Elem>,
    c2: &ExtScalar<K::Elem>,
    t: &K::Elem,
) -> ExtScalar<K::Elem> {
    let g = l.ground();
    l.add(&l.scale(t, c1), &l.scale(&g.sub(&g.one(), t), c2))
}
