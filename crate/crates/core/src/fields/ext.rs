use num::{BigInt, BigRational, One, Signed, Zero};

use super::{FiniteField, GroundField, Rationals};
use crate::arith::squarefree_decomposition;
use crate::error::{Error, Result};

/// How `beta` generates `L` over `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExtKind<E> {
    /// `beta^2 = alpha`, alpha a non-square; characteristic not 2.
    SquareRoot { alpha: E },
    /// `beta^2 + beta + eps = 0`, irreducible; characteristic 2.
    ArtinSchreier { eps: E },
}

/// `c0 + c1 * beta`. Ordering is lexicographic on `(c0, c1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtScalar<E> {
    pub c0: E,
    pub c1: E,
}

impl<E> ExtScalar<E> {
    pub fn new(c0: E, c1: E) -> Self {
        Self { c0, c1 }
    }
}

/// A degree-2 Galois extension `L = K(beta)` together with its conjugation.
#[derive(Debug, Clone)]
pub struct ExtField<K: GroundField> {
    ground: K,
    kind: ExtKind<K::Elem>,
    /// `sqrt(input) = adjust * beta` when the user-supplied radicand was rescaled.
    adjust: Option<K::Elem>,
}

impl<K: GroundField> ExtField<K> {
    /// `K(sqrt(alpha))`; rejects characteristic 2 and square `alpha`.
    pub fn square_root(ground: K, alpha: K::Elem) -> Result<Self> {
        if ground.characteristic() == 2 {
            return Err(Error::InvalidField(
                "square-root extensions are not Galois-separable in characteristic 2; use an Artin-Schreier extension".into(),
            ));
        }
        if ground.is_square(&alpha) {
            return Err(Error::InvalidField(format!(
                "{} is a square in {}",
                ground.format_elem(&alpha),
                ground.name()
            )));
        }
        Ok(Self { ground, kind: ExtKind::SquareRoot { alpha }, adjust: None })
    }

    /// `K(beta)` with `beta^2 + beta + eps = 0`; characteristic 2 and finite `K` only.
    pub fn artin_schreier(ground: K, eps: K::Elem) -> Result<Self> {
        if ground.characteristic() != 2 {
            return Err(Error::InvalidField("Artin-Schreier extensions need characteristic 2".into()));
        }
        let elems = ground
            .elements()
            .ok_or_else(|| Error::Unsupported("a finite ground field".into()))?;
        let has_root = elems.iter().any(|t| {
            let v = ground.add(&ground.add(&ground.square(t), t), &eps);
            ground.is_zero(&v)
        });
        if has_root {
            return Err(Error::InvalidField(format!(
                "t^2 + t + {} is reducible over {}",
                ground.format_elem(&eps),
                ground.name()
            )));
        }
        Ok(Self { ground, kind: ExtKind::ArtinSchreier { eps }, adjust: None })
    }

    pub fn ground(&self) -> &K {
        &self.ground
    }

    pub fn kind(&self) -> &ExtKind<K::Elem> {
        &self.kind
    }

    /// Unit adjustment applied when normalizing the radicand, if any.
    pub fn adjustment(&self) -> Option<&K::Elem> {
        self.adjust.as_ref()
    }

    /// `alpha` for square-root extensions.
    pub fn alpha(&self) -> Option<&K::Elem> {
        match &self.kind {
            ExtKind::SquareRoot { alpha } => Some(alpha),
            ExtKind::ArtinSchreier { .. } => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.ground.characteristic()
    }

    pub fn name(&self) -> String {
        let k = &self.ground;
        match &self.kind {
            ExtKind::SquareRoot { alpha } => format!("{}(sqrt({}))", k.name(), k.format_elem(alpha)),
            ExtKind::ArtinSchreier { eps } => format!("{}[b]/(b^2+b+{})", k.name(), k.format_elem(eps)),
        }
    }

    pub fn zero(&self) -> ExtScalar<K::Elem> {
        ExtScalar::new(self.ground.zero(), self.ground.zero())
    }

    pub fn one(&self) -> ExtScalar<K::Elem> {
        ExtScalar::new(self.ground.one(), self.ground.zero())
    }

    pub fn beta(&self) -> ExtScalar<K::Elem> {
        ExtScalar::new(self.ground.zero(), self.ground.one())
    }

    pub fn from_ground(&self, a: K::Elem) -> ExtScalar<K::Elem> {
        ExtScalar::new(a, self.ground.zero())
    }

    pub fn from_int(&self, n: i64) -> ExtScalar<K::Elem> {
        self.from_ground(self.ground.from_int(n))
    }

    pub fn from_ints(&self, x: i64, y: i64) -> ExtScalar<K::Elem> {
        ExtScalar::new(self.ground.from_int(x), self.ground.from_int(y))
    }

    pub fn is_zero(&self, z: &ExtScalar<K::Elem>) -> bool {
        self.ground.is_zero(&z.c0) && self.ground.is_zero(&z.c1)
    }

    /// Whether `z` lies in the fixed field `K`.
    pub fn is_ground(&self, z: &ExtScalar<K::Elem>) -> bool {
        self.ground.is_zero(&z.c1)
    }

    pub fn add(&self, a: &ExtScalar<K::Elem>, b: &ExtScalar<K::Elem>) -> ExtScalar<K::Elem> {
        let k = &self.ground;
        ExtScalar::new(k.add(&a.c0, &b.c0), k.add(&a.c1, &b.c1))
    }

    pub fn sub(&self, a: &ExtScalar<K::Elem>, b: &ExtScalar<K::Elem>) -> ExtScalar<K::Elem> {
        let k = &self.ground;
        ExtScalar::new(k.sub(&a.c0, &b.c0), k.sub(&a.c1, &b.c1))
    }

    pub fn neg(&self, a: &ExtScalar<K::Elem>) -> ExtScalar<K::Elem> {
        let k = &self.ground;
        ExtScalar::new(k.neg(&a.c0), k.neg(&a.c1))
    }

    pub fn mul(&self, a: &ExtScalar<K::Elem>, b: &ExtScalar<K::Elem>) -> ExtScalar<K::Elem> {
        let k = &self.ground;
        let ac = k.mul(&a.c0, &b.c0);
        let bd = k.mul(&a.c1, &b.c1);
        let cross = k.add(&k.mul(&a.c0, &b.c1), &k.mul(&a.c1, &b.c0));
        match &self.kind {
            ExtKind::SquareRoot { alpha } => ExtScalar::new(k.add(&ac, &k.mul(alpha, &bd)), cross),
            // beta^2 = beta + eps in characteristic 2
            ExtKind::ArtinSchreier { eps } => ExtScalar::new(k.add(&ac, &k.mul(eps, &bd)), k.add(&cross, &bd)),
        }
    }

    /// Multiplies by a ground-field scalar.
    pub fn scale(&self, s: &K::Elem, a: &ExtScalar<K::Elem>) -> ExtScalar<K::Elem> {
        let k = &self.ground;
        ExtScalar::new(k.mul(s, &a.c0), k.mul(s, &a.c1))
    }

    pub fn square(&self, a: &ExtScalar<K::Elem>) -> ExtScalar<K::Elem> {
        self.mul(a, a)
    }

    /// The nontrivial automorphism fixing `K`.
    pub fn conj(&self, z: &ExtScalar<K::Elem>) -> ExtScalar<K::Elem> {
        let k = &self.ground;
        match &self.kind {
            ExtKind::SquareRoot { .. } => ExtScalar::new(z.c0.clone(), k.neg(&z.c1)),
            ExtKind::ArtinSchreier { .. } => ExtScalar::new(k.add(&z.c0, &z.c1), z.c1.clone()),
        }
    }

    /// `conj(z) * z`, an element of `K`.
    pub fn norm(&self, z: &ExtScalar<K::Elem>) -> K::Elem {
        let k = &self.ground;
        match &self.kind {
            ExtKind::SquareRoot { alpha } => k.sub(&k.square(&z.c0), &k.mul(alpha, &k.square(&z.c1))),
            ExtKind::ArtinSchreier { eps } => {
                k.add(&k.mul(&z.c0, &k.add(&z.c0, &z.c1)), &k.mul(eps, &k.square(&z.c1)))
            }
        }
    }

    /// `z + conj(z)`, an element of `K`.
    pub fn trace(&self, z: &ExtScalar<K::Elem>) -> K::Elem {
        let k = &self.ground;
        match &self.kind {
            ExtKind::SquareRoot { .. } => k.add(&z.c0, &z.c0),
            ExtKind::ArtinSchreier { .. } => z.c1.clone(),
        }
    }

    pub fn inv(&self, z: &ExtScalar<K::Elem>) -> Result<ExtScalar<K::Elem>> {
        let n = self.norm(z);
        let n_inv = self.ground.inv(&n)?;
        Ok(self.scale(&n_inv, &self.conj(z)))
    }

    pub fn div(&self, a: &ExtScalar<K::Elem>, b: &ExtScalar<K::Elem>) -> Result<ExtScalar<K::Elem>> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, z: &ExtScalar<K::Elem>, mut e: u64) -> ExtScalar<K::Elem> {
        let mut acc = self.one();
        let mut base = z.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.square(&base);
            e >>= 1;
        }
        acc
    }

    /// A square root of `z` in `L`, if one exists.
    pub fn sqrt(&self, z: &ExtScalar<K::Elem>) -> Option<ExtScalar<K::Elem>> {
        let k = &self.ground;
        let alpha = match &self.kind {
            ExtKind::SquareRoot { alpha } => alpha,
            ExtKind::ArtinSchreier { .. } => {
                // squaring is a bijection of a finite field of characteristic 2
                let q = k.order().expect("characteristic-2 fields here are finite");
                return Some(self.pow(z, q * q / 2));
            }
        };
        let two = k.from_int(2);
        let root = if k.is_zero(&z.c1) {
            if let Some(s) = k.sqrt(&z.c0) {
                ExtScalar::new(s, k.zero())
            } else {
                let r = k.div(&z.c0, alpha).ok()?;
                ExtScalar::new(k.zero(), k.sqrt(&r)?)
            }
        } else {
            let s = k.sqrt(&self.norm(z))?;
            let halves = [k.add(&z.c0, &s), k.sub(&z.c0, &s)];
            let a = halves
                .iter()
                .filter_map(|h| k.sqrt(&k.div(h, &two).expect("2 is invertible")))
                .find(|a| !k.is_zero(a))?;
            let b = k.div(&z.c1, &k.mul(&two, &a)).expect("nonzero");
            ExtScalar::new(a, b)
        };
        debug_assert_eq!(self.square(&root), *z);
        Some(root)
    }

    /// Every element of a finite `L`, in canonical order.
    pub fn elements(&self) -> Option<Vec<ExtScalar<K::Elem>>> {
        let els = self.ground.elements()?;
        let mut out = Vec::with_capacity(els.len() * els.len());
        for x in &els {
            for y in &els {
                out.push(ExtScalar::new(x.clone(), y.clone()));
            }
        }
        Some(out)
    }

    pub fn parse_scalar(&self, s: &str) -> Result<ExtScalar<K::Elem>> {
        let t = s.trim();
        let inner = t.strip_prefix('[').and_then(|r| r.strip_suffix(']'));
        match inner {
            Some(body) => {
                let parts: Vec<&str> = body.split(',').map(|p| p.trim().trim_matches('"')).collect();
                if parts.len() != 2 {
                    return Err(Error::Parse(format!("expected [x, y], got {t:?}")));
                }
                Ok(ExtScalar::new(self.ground.parse_elem(parts[0])?, self.ground.parse_elem(parts[1])?))
            }
            None => Ok(self.from_ground(self.ground.parse_elem(t)?)),
        }
    }

    pub fn format_scalar(&self, z: &ExtScalar<K::Elem>) -> String {
        format!("[{}, {}]", self.ground.format_elem(&z.c0), self.ground.format_elem(&z.c1))
    }
}

impl ExtField<Rationals> {
    /// `Q(sqrt(radicand))`, normalized to a square-free integer `d`.
    pub fn quadratic(radicand: &BigRational) -> Result<Self> {
        if radicand.is_zero() {
            return Err(Error::InvalidField("radicand must be nonzero".into()));
        }
        // radicand = n/m, so radicand * m^2 = n*m = s^2 d
        let nm: BigInt = radicand.numer() * radicand.denom();
        let (s, d) = squarefree_decomposition(&nm);
        if d.is_one() {
            return Err(Error::InvalidField(format!("{radicand} is a square in Q")));
        }
        let adjust = BigRational::new(s, radicand.denom().clone());
        let mut field = Self::square_root(Rationals, BigRational::from_integer(d))?;
        if !adjust.is_one() {
            field.adjust = Some(adjust);
        }
        Ok(field)
    }

    /// The square-free integer `d` with `L = Q(sqrt(d))`.
    pub fn d(&self) -> BigInt {
        self.alpha().expect("quadratic").numer().clone()
    }

    pub fn is_imaginary(&self) -> bool {
        self.d().is_negative()
    }
}

impl ExtField<FiniteField> {
    /// The quadratic extension of `F_q` with the least admissible parameter:
    /// the least non-residue `alpha` for odd `q`, the least `eps` with
    /// `t^2 + t + eps` irreducible for even `q`.
    pub fn quadratic_auto(ground: FiniteField) -> Result<Self> {
        let elems = ground.elements().expect("finite");
        if ground.characteristic() == 2 {
            for eps in elems {
                if let Ok(f) = Self::artin_schreier(ground.clone(), eps) {
                    return Ok(f);
                }
            }
        } else {
            for alpha in elems {
                if !ground.is_square(&alpha) {
                    return Self::square_root(ground, alpha);
                }
            }
        }
        unreachable!("every finite field has a quadratic extension")
    }

    /// Dense index of an element of `L` in `0..q^2`, consistent with the canonical order.
    #[inline]
    pub fn index(&self, z: &ExtScalar<super::FqElem>) -> usize {
        z.c0.0 as usize * self.ground.q() as usize + z.c1.0 as usize
    }

    pub fn from_index(&self, i: usize) -> ExtScalar<super::FqElem> {
        let q = self.ground.q() as usize;
        ExtScalar::new(super::FqElem((i / q) as u32), super::FqElem((i % q) as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::FqElem;

    fn qi() -> ExtField<Rationals> {
        ExtField::quadratic(&BigRational::from_integer((-1).into())).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn conj_examples() {
        let l = qi();
        assert_eq!(l.conj(&l.from_ints(3, 4)), l.from_ints(3, -4));
        let f4 = FiniteField::new(2, 2, None).unwrap();
        let l2 = ExtField::quadratic_auto(f4).unwrap();
        let b = l2.beta();
        assert_eq!(l2.conj(&b), l2.add(&l2.one(), &b));
    }

    #[test]
    fn norm_and_trace_examples() {
        let l = qi();
        assert_eq!(l.norm(&l.from_ints(3, 4)), r(25, 1));
        assert_eq!(l.trace(&l.from_ints(3, 4)), r(6, 1));
        assert_eq!(l.norm(&l.zero()), r(0, 1));
        let l5 = ExtField::quadratic(&r(5, 1)).unwrap();
        assert_eq!(l5.norm(&l5.from_ints(2, 1)), r(-1, 1));
        let f2 = FiniteField::prime(2).unwrap();
        let as2 = ExtField::artin_schreier(f2, FqElem(1)).unwrap();
        assert_eq!(as2.trace(&as2.beta()), FqElem(1));
    }

    #[test]
    fn arithmetic_examples() {
        let l = qi();
        assert_eq!(l.mul(&l.from_ints(1, 1), &l.from_ints(1, -1)), l.from_int(2));
        assert_eq!(l.inv(&l.beta()).unwrap(), l.from_ints(0, -1));
        assert_eq!(l.inv(&l.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn sqrt_examples() {
        let l = qi();
        assert_eq!(l.sqrt(&l.from_int(-1)), Some(l.beta()));
        let w = l.sqrt(&l.from_ints(0, 2)).unwrap();
        assert_eq!(l.square(&w), l.from_ints(0, 2));
        assert!(w == l.from_ints(1, 1) || w == l.from_ints(-1, -1));
        assert_eq!(l.sqrt(&l.from_int(2)), None);
    }

    #[test]
    fn normalization_of_radicand() {
        let l = ExtField::quadratic(&r(-4, 1)).unwrap();
        assert_eq!(l.d(), BigInt::from(-1));
        assert_eq!(l.adjustment(), Some(&r(2, 1)));
        let l = ExtField::quadratic(&r(1, 2)).unwrap();
        assert_eq!(l.d(), BigInt::from(2));
        assert_eq!(l.adjustment(), Some(&r(1, 2)));
        assert!(ExtField::quadratic(&r(9, 4)).is_err());
        assert!(ExtField::quadratic(&r(0, 1)).is_err());
    }

    #[test]
    fn construction_guards() {
        let f3 = FiniteField::prime(3).unwrap();
        assert!(ExtField::square_root(f3.clone(), FqElem(1)).is_err());
        assert!(ExtField::square_root(f3.clone(), FqElem(2)).is_ok());
        assert!(ExtField::artin_schreier(f3, FqElem(1)).is_err());
        let f2 = FiniteField::prime(2).unwrap();
        assert!(ExtField::square_root(f2.clone(), FqElem(1)).is_err());
        assert!(ExtField::artin_schreier(f2.clone(), FqElem(0)).is_err());
        let f4 = FiniteField::new(2, 2, None).unwrap();
        // eps = 1 has a root in F_4, so the least admissible eps is a generator
        assert!(ExtField::artin_schreier(f4.clone(), FqElem(1)).is_err());
        let l = ExtField::quadratic_auto(f4).unwrap();
        assert!(matches!(l.kind(), ExtKind::ArtinSchreier { eps } if eps.0 >= 2));
    }

    #[test]
    fn least_non_residue() {
        let l = ExtField::quadratic_auto(FiniteField::prime(7).unwrap()).unwrap();
        assert_eq!(l.alpha(), Some(&FqElem(3)));
    }

    fn exhaustive_laws(l: &ExtField<FiniteField>) {
        let els = l.elements().unwrap();
        for z in &els {
            assert_eq!(l.conj(&l.conj(z)), *z);
            assert_eq!(l.is_ground(z), l.conj(z) == *z);
            assert_eq!(l.is_zero(z), l.ground().is_zero(&l.norm(z)));
            let root = l.sqrt(z);
            let brute = els.iter().find(|w| l.square(w) == *z);
            assert_eq!(root.is_some(), brute.is_some(), "squareness of {z:?} in {}", l.name());
            if let Some(w) = root {
                assert_eq!(l.square(&w), *z);
            }
        }
        for z in els.iter().step_by(3) {
            for w in els.iter().step_by(5) {
                let zw = l.mul(z, w);
                assert_eq!(l.conj(&zw), l.mul(&l.conj(z), &l.conj(w)));
                assert_eq!(l.norm(&zw), l.ground().mul(&l.norm(z), &l.norm(w)));
                if !l.is_zero(w) {
                    assert_eq!(l.mul(&l.div(z, w).unwrap(), w), *z);
                }
            }
        }
    }

    #[test]
    fn exhaustive_laws_f9_f25_f16() {
        for p in [3, 5] {
            exhaustive_laws(&ExtField::quadratic_auto(FiniteField::prime(p).unwrap()).unwrap());
        }
        exhaustive_laws(&ExtField::quadratic_auto(FiniteField::new(2, 2, None).unwrap()).unwrap());
    }

    #[test]
    fn index_round_trip() {
        let l = ExtField::quadratic_auto(FiniteField::prime(5).unwrap()).unwrap();
        for (i, z) in l.elements().unwrap().iter().enumerate() {
            assert_eq!(l.index(z), i);
            assert_eq!(l.from_index(i), *z);
        }
    }
}
