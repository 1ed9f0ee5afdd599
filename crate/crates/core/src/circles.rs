//! Circles `{z : N(z - mu) = c}` in `L`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::fields::{ExtField, ExtScalar, GroundField};
use crate::normsets::{Answer, NormSets};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle<E> {
    pub center: ExtScalar<E>,
    pub squared_radius: E,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircleKind {
    Empty,
    SinglePoint,
    /// `bounded` is known only over Q, where it holds iff `L` is imaginary.
    SmoothConic { bounded: Option<bool> },
}

impl<E> Circle<E> {
    pub fn new(center: ExtScalar<E>, squared_radius: E) -> Self {
        Self { center, squared_radius }
    }
}

pub fn circle_contains<K: GroundField>(l: &ExtField<K>, z: &ExtScalar<K::Elem>, c: &Circle<K::Elem>) -> bool {
    l.norm(&l.sub(z, &c.center)) == c.squared_radius
}

pub fn circle_classify<K: NormSets>(l: &ExtField<K>, c: &Circle<K::Elem>, bound: u64) -> Result<CircleKind> {
    let g = l.ground();
    if g.is_zero(&c.squared_radius) {
        return Ok(CircleKind::SinglePoint);
    }
    match K::in_delta(l, &c.squared_radius, bound).answer {
        Answer::No => Ok(CircleKind::Empty),
        Answer::Unknown => Err(Error::Undecided(format!("{} in Delta", g.format_elem(&c.squared_radius)))),
        Answer::Yes => {
            let bounded = match (g.is_finite(), l.alpha()) {
                (false, Some(alpha)) => g.approx(alpha).map(|a| a < 0.0),
                _ => None,
            };
            Ok(CircleKind::SmoothConic { bounded })
        }
    }
}

/// Points of a circle, parametrized by the lines through a known point.
///
/// Emits `mu + b` first, then for each direction `v` (first `beta`, then
/// `1 + t beta` with `t` in height order) the second intersection
/// `mu + b + lambda v` with `lambda = -Tr(sigma(b) v) / N(v)`. Tangent
/// directions give `lambda = 0` and are skipped. Over a finite field the
/// stream ends after all `q + 1` directions and is the full point set.
pub struct CirclePoints<K: GroundField> {
    l: ExtField<K>,
    center: ExtScalar<K::Elem>,
    b: ExtScalar<K::Elem>,
    started: bool,
    vertical_done: bool,
    slopes: Box<dyn Iterator<Item = K::Elem> + Send>,
    seen: HashSet<ExtScalar<K::Elem>>,
}

impl<K: GroundField> CirclePoints<K> {
    fn point_on_line(&self, v: &ExtScalar<K::Elem>) -> Option<ExtScalar<K::Elem>> {
        let g = self.l.ground();
        let nv = self.l.norm(v);
        if g.is_zero(&nv) {
            return None;
        }
        let tr = self.l.trace(&self.l.mul(&self.l.conj(&self.b), v));
        let lambda = g.neg(&g.div(&tr, &nv).expect("nonzero"));
        if g.is_zero(&lambda) {
            return None;
        }
        Some(self.l.add(&self.b, &self.l.scale(&lambda, v)))
    }
}

impl<K: GroundField> Iterator for CirclePoints<K> {
    type Item = ExtScalar<K::Elem>;

    fn next(&mut self) -> Option<Self::Item> {
        if !self.started {
            self.started = true;
            self.seen.insert(self.b.clone());
            return Some(self.l.add(&self.center, &self.b));
        }
        loop {
            let v = if !self.vertical_done {
                self.vertical_done = true;
                self.l.beta()
            } else {
                let t = self.slopes.next()?;
                ExtScalar::new(self.l.ground().one(), t)
            };
            if let Some(p) = self.point_on_line(&v) {
                if self.seen.insert(p.clone()) {
                    return Some(self.l.add(&self.center, &p));
                }
            }
        }
    }
}

/// Point stream for `c` given a witness `b` with `N(b) = c != 0`.
pub fn circle_points<K: GroundField>(
    l: &ExtField<K>,
    c: &Circle<K::Elem>,
    b: &ExtScalar<K::Elem>,
) -> Result<CirclePoints<K>> {
    let g = l.ground();
    if g.is_zero(&c.squared_radius) {
        return Err(Error::Hypothesis("the circle of radius 0 is a single point".into()));
    }
    if l.norm(b) != c.squared_radius {
        return Err(Error::MissingWitness(format!(
            "{} does not have norm {}",
            l.format_scalar(b),
            g.format_elem(&c.squared_radius)
        )));
    }
    Ok(CirclePoints {
        l: l.clone(),
        center: c.center.clone(),
        b: b.clone(),
        started: false,
        vertical_done: false,
        slopes: g.elements_by_height(),
        seen: HashSet::new(),
    })
}

/// Every point of a circle over a finite field, sorted.
pub fn circle_point_set<K: NormSets>(l: &ExtField<K>, c: &Circle<K::Elem>) -> Result<Vec<ExtScalar<K::Elem>>> {
    let g = l.ground();
    if !g.is_finite() {
        return Err(Error::Unsupported("full point sets need a finite field".into()));
    }
    if g.is_zero(&c.squared_radius) {
        return Ok(vec![c.center.clone()]);
    }
    let b = crate::normsets::norm_witness(l, &c.squared_radius, 0)
        .ok_or_else(|| Error::MissingWitness("norm witness".into()))?;
    let mut pts: Vec<_> = circle_points(l, c, &b)?.collect();
    pts.sort();
    Ok(pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{BigRational, FiniteField, Rationals};
    use crate::normsets::DEFAULT_BOUND;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn qd(d: i64) -> ExtField<Rationals> {
        ExtField::quadratic(&r(d, 1)).unwrap()
    }

    #[test]
    fn containment_examples() {
        let l = qd(-1);
        let unit = Circle::new(l.zero(), r(1, 1));
        assert!(circle_contains(&l, &ExtScalar::new(r(3, 5), r(4, 5)), &unit));
        assert!(!circle_contains(&l, &l.from_ints(1, 1), &unit));
        let mu = l.from_ints(2, -3);
        assert!(circle_contains(&l, &mu, &Circle::new(mu.clone(), r(0, 1))));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(circle_classify(&qd(-1), &Circle::new(qd(-1).zero(), r(7, 1)), DEFAULT_BOUND).unwrap(), CircleKind::Empty);
        let q2 = qd(2);
        assert_eq!(
            circle_classify(&q2, &Circle::new(q2.zero(), r(1, 1)), DEFAULT_BOUND).unwrap(),
            CircleKind::SmoothConic { bounded: Some(false) }
        );
        let qi = qd(-1);
        assert_eq!(
            circle_classify(&qi, &Circle::new(qi.zero(), r(1, 1)), DEFAULT_BOUND).unwrap(),
            CircleKind::SmoothConic { bounded: Some(true) }
        );
        assert_eq!(circle_classify(&qi, &Circle::new(qi.one(), r(0, 1)), DEFAULT_BOUND).unwrap(), CircleKind::SinglePoint);
        let f9 = ExtField::quadratic_auto(FiniteField::prime(3).unwrap()).unwrap();
        let c = Circle::new(f9.zero(), f9.ground().one());
        assert_eq!(circle_classify(&f9, &c, 0).unwrap(), CircleKind::SmoothConic { bounded: None });
    }

    #[test]
    fn pythagorean_points() {
        let l = qd(-1);
        let c = Circle::new(l.zero(), r(1, 1));
        let pts: Vec<_> = circle_points(&l, &c, &l.one()).unwrap().take(20).collect();
        assert_eq!(pts[0], l.one());
        assert!(pts.contains(&l.from_int(-1)));
        assert!(pts.contains(&ExtScalar::new(r(3, 5), r(4, 5))));
        assert!(circle_points(&l, &c, &l.from_ints(1, 1)).is_err());
    }

    #[test]
    fn unit_circle_of_f9() {
        let l = ExtField::quadratic_auto(FiniteField::prime(3).unwrap()).unwrap();
        let c = Circle::new(l.zero(), l.ground().one());
        let pts = circle_point_set(&l, &c).unwrap();
        assert_eq!(pts, vec![l.from_ints(0, 1), l.from_ints(0, 2), l.from_ints(1, 0), l.from_ints(2, 0)]);
    }

    #[test]
    fn antipodal_point_present() {
        let l = qd(2);
        let b = l.from_ints(3, 2);
        let c = Circle::new(l.from_ints(1, 1), l.norm(&b));
        let pts: Vec<_> = circle_points(&l, &c, &b).unwrap().take(200).collect();
        let minus = l.add(&c.center, &l.neg(&b));
        assert!(pts.contains(&minus));
        for p in &pts {
            assert!(circle_contains(&l, p, &c));
        }
    }
}
