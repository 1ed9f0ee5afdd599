use std::fmt;
use std::sync::Arc;

use super::GroundField;
use crate::error::{Error, Result};

/// Largest field order accepted; every table is sized by `q`.
pub const MAX_ORDER: u32 = 1 << 16;

/// Element of `F_q`, stored as the base-`p` encoding of its coefficient
/// vector over `F_p[t]/(modulus)`: `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(pub u32);

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug)]
struct Tables {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    // exp has length 2(q-1) so log a + log b never needs a reduction
    exp: Vec<u32>,
    log: Vec<u32>,
    neg: Vec<u32>,
    add: Option<Vec<u32>>,
    sqrt: Vec<u32>,
}

const NO_SQRT: u32 = u32::MAX;

/// The finite field `F_{p^m} = F_p[t]/(modulus)`.
#[derive(Clone)]
pub struct FiniteField {
    t: Arc<Tables>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.t.q)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.t.p == other.t.p && self.t.modulus == other.t.modulus
    }
}

impl Eq for FiniteField {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

// dense polynomials over F_p, lowest degree first, no trailing zeros

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_pow(b[db], p - 2, p);
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let factor = (r[r.len() - 1] * lead_inv) % p;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (factor * bi) % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_pow(b: u32, mut e: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = b as u64 % p as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

fn decode(code: u32, p: u32, m: u32) -> Vec<u32> {
    let mut c = code;
    let mut out = Vec::with_capacity(m as usize);
    for _ in 0..m {
        out.push(c % p);
        c /= p;
    }
    out
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg == 1 {
        return true;
    }
    // trial division by every monic polynomial of degree 1..=deg/2
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g = decode(code, p, d as u32);
            g.push(1);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = p.pow(m);
    for code in 0..count {
        let mut f = decode(code, p, m);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// `F_{p^m}` with the given monic modulus (coefficients lowest degree
    /// first, `m + 1` of them), or the lexicographically first monic
    /// irreducible polynomial of degree `m` when `modulus` is `None`.
    pub fn new(p: u32, m: u32, modulus: Option<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER as u64).ok_or_else(|| {
            Error::InvalidField(format!("field order {p}^{m} exceeds {MAX_ORDER}"))
        })? as u32;
        let modulus = match modulus {
            Some(f) => {
                if f.len() != m as usize + 1 || f.iter().any(|&c| c >= p) || f[m as usize] != 1 {
                    return Err(Error::InvalidField(format!(
                        "modulus must be monic of degree {m} with coefficients below {p}"
                    )));
                }
                if !is_irreducible(&f, p) {
                    return Err(Error::InvalidField(format!("modulus {f:?} is reducible over F_{p}")));
                }
                f
            }
            None => first_irreducible(p, m),
        };
        let mul_slow = |a: u32, b: u32| -> u32 {
            let (da, db) = (decode(a, p, m), decode(b, p, m));
            let mut prod = vec![0u32; (2 * m) as usize];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut r = poly_rem(&prod, &modulus, p);
            r.resize(m as usize, 0);
            encode(&r, p)
        };
        let order = q - 1;
        let generator = (1..q)
            .find(|&g| {
                let mut x = 1;
                for k in 1..=order {
                    x = mul_slow(x, g);
                    if x == 1 {
                        return k == order;
                    }
                }
                false
            })
            .expect("the multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for k in 0..order {
            exp[k as usize] = x;
            exp[(k + order) as usize] = x;
            log[x as usize] = k;
            x = mul_slow(x, generator);
        }
        let neg: Vec<u32> = (0..q)
            .map(|a| encode(&decode(a, p, m).iter().map(|&c| (p - c) % p).collect::<Vec<_>>(), p))
            .collect();
        let add_digits = |a: u32, b: u32| -> u32 {
            let (da, db) = (decode(a, p, m), decode(b, p, m));
            encode(&da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect::<Vec<_>>(), p)
        };
        let add = if m > 1 && q <= 1024 {
            let mut tab = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    tab[(a * q + b) as usize] = add_digits(a, b);
                }
            }
            Some(tab)
        } else {
            None
        };
        let mut sqrt = vec![NO_SQRT; q as usize];
        sqrt[0] = 0;
        for a in 1..q {
            let s = exp[2 * log[a as usize] as usize] as usize;
            if sqrt[s] == NO_SQRT {
                sqrt[s] = a;
            }
        }
        Ok(FiniteField { t: Arc::new(Tables { p, m, q, modulus, exp, log, neg, add, sqrt }) })
    }

    pub fn p(&self) -> u32 {
        self.t.p
    }

    pub fn degree(&self) -> u32 {
        self.t.m
    }

    pub fn q(&self) -> u32 {
        self.t.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.t.modulus
    }

    /// Dense index in `0..q`.
    #[inline]
    pub fn index(&self, a: &FqElem) -> usize {
        a.0 as usize
    }

    pub fn pow(&self, a: &FqElem, e: u64) -> FqElem {
        if a.0 == 0 {
            return if e == 0 { FqElem(1) } else { FqElem(0) };
        }
        let order = (self.t.q - 1) as u64;
        let l = (self.t.log[a.0 as usize] as u64 * (e % order)) % order;
        FqElem(self.t.exp[l as usize])
    }
}

impl GroundField for FiniteField {
    type Elem = FqElem;

    #[inline]
    fn zero(&self) -> FqElem {
        FqElem(0)
    }

    #[inline]
    fn one(&self) -> FqElem {
        FqElem(1)
    }

    fn from_int(&self, n: i64) -> FqElem {
        let p = self.t.p as i64;
        FqElem(n.rem_euclid(p) as u32)
    }

    #[inline]
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        match &self.t.add {
            None if self.t.m == 1 => {
                let s = a.0 + b.0;
                FqElem(if s >= self.t.p { s - self.t.p } else { s })
            }
            Some(tab) => FqElem(tab[(a.0 * self.t.q + b.0) as usize]),
            None => {
                let (p, mut x, mut y) = (self.t.p, a.0, b.0);
                let (mut out, mut place) = (0, 1);
                for _ in 0..self.t.m {
                    out += ((x % p + y % p) % p) * place;
                    x /= p;
                    y /= p;
                    place *= p;
                }
                FqElem(out)
            }
        }
    }

    #[inline]
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.add(a, &self.neg(b))
    }

    #[inline]
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        let t = &self.t;
        FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
    }

    #[inline]
    fn neg(&self, a: &FqElem) -> FqElem {
        FqElem(self.t.neg[a.0 as usize])
    }

    fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let t = &self.t;
        let order = t.q - 1;
        let l = t.log[a.0 as usize];
        Ok(FqElem(t.exp[((order - l) % order) as usize]))
    }

    #[inline]
    fn is_zero(&self, a: &FqElem) -> bool {
        a.0 == 0
    }

    fn characteristic(&self) -> u64 {
        self.t.p as u64
    }

    fn order(&self) -> Option<u64> {
        Some(self.t.q as u64)
    }

    fn sqrt(&self, a: &FqElem) -> Option<FqElem> {
        match self.t.sqrt[a.0 as usize] {
            NO_SQRT => None,
            s => Some(FqElem(s)),
        }
    }

    fn elements(&self) -> Option<Vec<FqElem>> {
        Some((0..self.t.q).map(FqElem).collect())
    }

    fn parse_elem(&self, s: &str) -> Result<FqElem> {
        let s = s.trim();
        let n: i64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("not an element code of F_{}: {s:?}", self.t.q)))?;
        if self.t.m == 1 {
            Ok(self.from_int(n))
        } else if (0..self.t.q as i64).contains(&n) {
            Ok(FqElem(n as u32))
        } else {
            Err(Error::Parse(format!("element code {n} out of range for F_{}", self.t.q)))
        }
    }

    fn format_elem(&self, a: &FqElem) -> String {
        a.0.to_string()
    }

    fn elements_by_height(&self) -> Box<dyn Iterator<Item = FqElem> + Send> {
        Box::new((0..self.q()).map(FqElem))
    }

    fn name(&self) -> String {
        format!("F_{}", self.t.q)
    }
}
