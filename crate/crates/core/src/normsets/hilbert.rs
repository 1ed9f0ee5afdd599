//! Hilbert symbols over Q and the local-global test for `x^2 - d y^2 = k`.

use num::integer::Integer;
use num::{BigInt, One, Signed, Zero};

use crate::arith::{factor, legendre, small_mod, valuation};

/// A place of Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Real,
    Prime(BigInt),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Real => write!(f, "real"),
            Place::Prime(p) => write!(f, "p={p}"),
        }
    }
}

fn split(a: &BigInt, p: &BigInt) -> (u32, BigInt) {
    let v = valuation(a, p);
    (v, a / p.pow(v))
}

/// `(a, b)_v` for nonzero integers `a`, `b`, as `1` or `-1`.
pub fn hilbert_symbol(a: &BigInt, b: &BigInt, place: &Place) -> i32 {
    assert!(!a.is_zero() && !b.is_zero(), "Hilbert symbol of zero");
    match place {
        Place::Real => {
            if a.is_negative() && b.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(p) if *p == BigInt::from(2) => {
            let (al, u) = split(a, p);
            let (be, v) = split(b, p);
            let eps = |x: &BigInt| u64::from(small_mod(x, 4) == 3);
            let omega = |x: &BigInt| u64::from(matches!(small_mod(x, 8), 3 | 5));
            let e = eps(&u) * eps(&v) + u64::from(al) * omega(&v) + u64::from(be) * omega(&u);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (al, u) = split(a, p);
            let (be, v) = split(b, p);
            let half = small_mod(&((p - 1u32) / 2u32), 2);
            let mut s = if (u64::from(al) * u64::from(be) * half) % 2 == 0 { 1 } else { -1 };
            if be % 2 == 1 {
                s *= legendre(&u, p);
            }
            if al % 2 == 1 {
                s *= legendre(&v, p);
            }
            s
        }
    }
}

/// Places where `(d, k)` could be nontrivial, in the order they are reported:
/// the real place, odd primes ascending, then 2.
pub fn relevant_places(d: &BigInt, k: &BigInt) -> Vec<Place> {
    let mut primes: Vec<BigInt> = factor(d).into_iter().chain(factor(k)).map(|(p, _)| p).collect();
    primes.sort();
    primes.dedup();
    let two = BigInt::from(2);
    let mut out = vec![Place::Real];
    out.extend(primes.iter().filter(|p| **p != two).cloned().map(Place::Prime));
    out.push(Place::Prime(two));
    out
}

/// First place where `x^2 - d y^2 = k` fails to have a local solution, or `None`
/// when it has solutions everywhere (and hence a rational one).
pub fn norm_obstruction(d: &BigInt, k: &BigInt) -> Option<Place> {
    relevant_places(d, k).into_iter().find(|v| hilbert_symbol(d, k, v) == -1)
}

/// Integer in the square class of `num/den`.
pub fn square_class(num: &BigInt, den: &BigInt) -> BigInt {
    let g = num.gcd(den);
    if g.is_one() {
        num * den
    } else {
        (num / &g) * (den / &g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn product_formula() {
        // the number of places with symbol -1 is even
        for a in [-15i64, -7, -3, -2, -1, 2, 3, 5, 6, 10, 12, 21] {
            for c in [-11i64, -6, -5, -1, 2, 3, 7, 13, 14, 18] {
                let places = relevant_places(&b(a), &b(c));
                let minus = places.iter().filter(|v| hilbert_symbol(&b(a), &b(c), v) == -1).count();
                assert_eq!(minus % 2, 0, "({a},{c})");
            }
        }
    }

    #[test]
    fn classical_values() {
        let two = Place::Prime(b(2));
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), &two), -1);
        assert_eq!(hilbert_symbol(&b(-1), &b(-1), &Place::Real), -1);
        assert_eq!(hilbert_symbol(&b(2), &b(3), &Place::Prime(b(3))), -1);
        assert_eq!(hilbert_symbol(&b(2), &b(7), &Place::Prime(b(7))), 1);
    }

    #[test]
    fn obstruction_for_seven() {
        assert_eq!(norm_obstruction(&b(-1), &b(7)), Some(Place::Prime(b(7))));
        assert_eq!(norm_obstruction(&b(-1), &b(-1)), Some(Place::Real));
        assert_eq!(norm_obstruction(&b(-1), &b(2)), None);
        assert_eq!(norm_obstruction(&b(5), &b(-1)), None);
    }
}
