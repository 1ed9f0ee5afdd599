//! Integer helpers: factorization, square-free parts, Legendre symbols.

use num::bigint::Sign;
use num::integer::Integer;
use num::{BigInt, One, Signed, ToPrimitive, Zero};

const SMALL_PRIMES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mod_pow(base: &BigInt, exp: &BigInt, m: &BigInt) -> BigInt {
    base.modpow(exp, m)
}

/// Deterministic for `n < 3.3e24`, probabilistic beyond.
pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1: BigInt = n - 1;
    let mut d = n1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &SMALL_PRIMES {
        let mut x = mod_pow(&BigInt::from(a), &d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigInt) -> BigInt {
    if n.is_even() {
        return BigInt::from(2);
    }
    let one = BigInt::one();
    for c in 1u64.. {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut x, mut y, mut d) = (BigInt::from(2), BigInt::from(2), one.clone());
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            d = (&x - &y).abs().gcd(n);
        }
        if &d != n {
            return d;
        }
    }
    unreachable!()
}

fn factor_into(n: BigInt, out: &mut Vec<BigInt>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let d = pollard_brent(&n);
    let rest = &n / &d;
    factor_into(d, out);
    factor_into(rest, out);
}

/// Prime factorization of `|n|` as sorted `(prime, exponent)` pairs; empty for 0 and ±1.
pub fn factor(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < 10_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        while (&n % &bp).is_zero() {
            primes.push(bp.clone());
            n /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_into(n, &mut primes);
    primes.sort();
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Writes a nonzero `n` as `s^2 * d` with `d` square-free (sign carried by `d`).
pub fn squarefree_decomposition(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "zero has no square-free part");
    let mut s = BigInt::one();
    let mut d = if n.sign() == Sign::Minus { -BigInt::one() } else { BigInt::one() };
    for (p, e) in factor(n) {
        s *= p.pow(e / 2);
        if e % 2 == 1 {
            d *= p;
        }
    }
    (s, d)
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        v += 1;
    }
    v
}

/// Legendre symbol `(a/p)` for an odd prime `p`, in {-1, 0, 1}.
pub fn legendre(a: &BigInt, p: &BigInt) -> i32 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e: BigInt = (p - 1u32) / 2u32;
    let r = a.modpow(&e, p);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// `n mod m` for small positive `m`, as a non-negative machine integer.
pub fn small_mod(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().expect("fits")
}
