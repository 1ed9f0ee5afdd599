use num::bigint::Sign;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};

use super::GroundField;
use crate::error::{Error, Result};

/// The field of rational numbers, backed by arbitrary-precision fractions
/// kept in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

/// Exact integer square root, `None` for negatives and non-squares.
pub(crate) fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

pub(crate) fn rat_sqrt(a: &BigRational) -> Option<BigRational> {
    let n = int_sqrt(a.numer())?;
    let d = int_sqrt(a.denom())?;
    Some(BigRational::new(n, d))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let err = || Error::Parse(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| err())?;
            let d: BigInt = d.trim().parse().map_err(|_| err())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| err())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub(crate) fn format_rational(a: &BigRational) -> String {
    if a.denom().is_one() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

impl GroundField for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn characteristic(&self) -> u64 {
        0
    }

    fn order(&self) -> Option<u64> {
        None
    }

    fn sqrt(&self, a: &BigRational) -> Option<BigRational> {
        rat_sqrt(a)
    }

    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn parse_elem(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }

    fn format_elem(&self, a: &BigRational) -> String {
        format_rational(a)
    }

    fn approx(&self, a: &BigRational) -> Option<f64> {
        let n = a.numer().to_f64()?;
        let d = a.denom().to_f64()?;
        Some(n / d)
    }

    fn name(&self) -> String {
        "Q".into()
    }

    fn elements_by_height(&self) -> Box<dyn Iterator<Item = BigRational> + Send> {
        Box::new(RationalsByHeight::signed())
    }
}

/// Rationals in order of ascending height `max(|p|, q)`; within one height,
/// ascending by value. Starts with 0.
#[derive(Debug, Clone)]
pub(crate) struct RationalsByHeight {
    height: i64,
    pending: std::vec::IntoIter<BigRational>,
    signed: bool,
}

impl RationalsByHeight {
    pub(crate) fn signed() -> Self {
        Self { height: -1, pending: Vec::new().into_iter(), signed: true }
    }

    /// Positive rationals only, starting with 1.
    pub(crate) fn positive() -> Self {
        Self { height: 0, pending: Vec::new().into_iter(), signed: false }
    }

    fn layer(&self, h: i64) -> Vec<BigRational> {
        if h == 0 {
            return vec![BigRational::zero()];
        }
        let mut out = Vec::new();
        for q in 1..=h {
            for p in 1..=h {
                if p.max(q) != h || num::integer::gcd(p, q) != 1 {
                    continue;
                }
                let r = BigRational::new(p.into(), q.into());
                if self.signed {
                    out.push(-r.clone());
                }
                out.push(r);
            }
        }
        out.sort();
        out
    }
}

impl Iterator for RationalsByHeight {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        loop {
            if let Some(r) = self.pending.next() {
                return Some(r);
            }
            self.height += 1;
            self.pending = self.layer(self.height).into_iter();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn stays_reduced() {
        let k = Rationals;
        let a = k.add(&q(1, 6), &q(1, 3));
        assert_eq!(a, q(1, 2));
        assert_eq!(*a.denom(), BigInt::from(2));
        let b = q(3, -6);
        assert_eq!(*b.denom(), BigInt::from(2));
        assert_eq!(*b.numer(), BigInt::from(-1));
    }

    #[test]
    fn sqrt_exactness() {
        let k = Rationals;
        assert_eq!(k.sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(k.sqrt(&q(2, 1)), None);
        assert_eq!(k.sqrt(&q(-1, 1)), None);
        assert_eq!(k.sqrt(&q(0, 1)), Some(q(0, 1)));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(-1, 3)), "-1/3");
    }

    #[test]
    fn inverse_of_zero_is_an_error() {
        assert_eq!(Rationals.inv(&q(0, 1)), Err(Error::DivisionByZero));
    }

    #[test]
    fn height_order() {
        let first: Vec<_> = RationalsByHeight::signed().take(7).collect();
        assert_eq!(first, vec![q(0, 1), q(-1, 1), q(1, 1), q(-2, 1), q(-1, 2), q(1, 2), q(2, 1)]);
        let pos: Vec<_> = RationalsByHeight::positive().take(3).collect();
        assert_eq!(pos, vec![q(1, 1), q(1, 2), q(2, 1)]);
    }
}
