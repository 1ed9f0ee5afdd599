//! Exact scalar arithmetic.
//!
//! A [`GroundField`] is either the rationals or a finite field `F_q`; an
//! [`ExtField`] is a degree-2 Galois extension `L = K(beta)` of it, presented
//! either as `K(sqrt(alpha))` (characteristic not 2) or as the Artin-Schreier
//! extension `beta^2 + beta + eps = 0` (characteristic 2).
//!
//! Field objects carry all context; elements are plain values. Arithmetic is
//! written `field.mul(&a, &b)`.

mod ext;
mod finite;
mod rational;

use std::fmt::Debug;
use std::hash::Hash;

use crate::error::Result;

pub use ext::{ExtField, ExtKind, ExtScalar};
pub use finite::{FiniteField, FqElem};
pub use rational::{parse_rational, Rationals};
pub(crate) use rational::{int_sqrt, rat_sqrt, RationalsByHeight};

pub use num::BigRational;

pub trait GroundField: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_int(&self, n: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn square(&self, a: &Self::Elem) -> Self::Elem {
        self.mul(a, a)
    }

    /// 0 for the rationals.
    fn characteristic(&self) -> u64;

    /// Number of elements, `None` when infinite.
    fn order(&self) -> Option<u64>;

    fn sqrt(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn is_square(&self, a: &Self::Elem) -> bool {
        self.sqrt(a).is_some()
    }

    /// Every element in canonical order; `None` for infinite fields.
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn format_elem(&self, a: &Self::Elem) -> String;

    /// Lossy rendering used by `--approx`; `None` when no real embedding exists.
    fn approx(&self, _a: &Self::Elem) -> Option<f64> {
        None
    }

    /// Short human-readable name such as `Q` or `F_9`.
    fn name(&self) -> String;

    /// Every element for a finite field, in canonical order; for Q, all
    /// rationals by ascending height. Never ends for infinite fields.
    fn elements_by_height(&self) -> Box<dyn Iterator<Item = Self::Elem> + Send>;

    fn is_finite(&self) -> bool {
        self.order().is_some()
    }
}

/// Roots in `K` of `a t^2 + b t + c`, sorted and deduplicated.
///
/// Degenerate inputs are handled: `a = 0` reduces to the linear equation and
/// `a = b = 0` has no roots unless `c = 0`, in which case every element is a
/// root and `None` is returned.
pub fn quadratic_roots<K: GroundField>(
    k: &K,
    a: &K::Elem,
    b: &K::Elem,
    c: &K::Elem,
) -> Option<Vec<K::Elem>> {
    if k.is_zero(a) {
        if k.is_zero(b) {
            return if k.is_zero(c) { None } else { Some(Vec::new()) };
        }
        let root = k.div(&k.neg(c), b).expect("nonzero");
        return Some(vec![root]);
    }
    let mut roots = if k.characteristic() == 2 {
        // no closed form without a half-trace; the fields here are small
        let elems = k.elements().expect("characteristic-2 ground fields are finite");
        elems
            .into_iter()
            .filter(|t| {
                let v = k.add(&k.add(&k.mul(a, &k.square(t)), &k.mul(b, t)), c);
                k.is_zero(&v)
            })
            .collect()
    } else {
        let four = k.from_int(4);
        let disc = k.sub(&k.square(b), &k.mul(&four, &k.mul(a, c)));
        match k.sqrt(&disc) {
            None => Vec::new(),
            Some(s) => {
                let two_a = k.add(a, a);
                let r1 = k.div(&k.sub(&s, b), &two_a).expect("nonzero");
                let r2 = k.div(&k.sub(&k.neg(&s), b), &two_a).expect("nonzero");
                vec![r1, r2]
            }
        }
    };
    roots.sort();
    roots.dedup();
    Some(roots)
}
