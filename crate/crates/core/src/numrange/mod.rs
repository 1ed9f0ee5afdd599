//! The numerical range `Num(M) = {<u, M u> : <u, u> = 1}`.
//!
//! Three engines share one vocabulary: exhaustive enumeration over finite
//! fields, exact sampling over Q, and symbolic [`RangeDescription`]s produced
//! by the classifiers in [`classify`] and [`sums`].

pub mod classify;
pub mod describe;
pub mod sums;

use std::collections::{BTreeSet, HashMap};

use crate::circles::{circle_points, Circle};
use crate::error::{Error, Result};
use crate::fields::{ExtField, ExtScalar, GroundField};
use crate::linalg::{quadratic_value, self_pairing, ExtMatrix, ExtVector};
use crate::normsets::{zero_in_hat_delta2, Answer, NormSets};

pub use classify::{
    classify_2x2, lemma_a30_range, make_isotropic_defective, singleton_witness, SingletonWitness, WitnessBranch,
};
pub use describe::RangeDescription;
pub use sums::{classify_corank1, direct_sum_range, direct_sum_symbolic, open_segment, Corank1Report, DirectSumRange};

/// Default enumeration budget, in evaluated vectors.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Reads the enumeration budget from `NUMRANGE_BUDGET`, falling back to the default.
pub fn budget_from_env() -> u128 {
    std::env::var("NUMRANGE_BUDGET").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET)
}

/// Norm fibers of a finite `L`, with one representative per nonzero norm.
struct Fibers<E> {
    by_norm: HashMap<E, Vec<ExtScalar<E>>>,
    reps: Vec<ExtScalar<E>>,
    all: Vec<ExtScalar<E>>,
}

fn fibers<K: GroundField>(l: &ExtField<K>) -> Result<Fibers<K::Elem>> {
    let all = l.elements().ok_or_else(|| Error::Unsupported("exhaustive enumeration needs a finite field".into()))?;
    let mut by_norm: HashMap<K::Elem, Vec<ExtScalar<K::Elem>>> = HashMap::new();
    for z in &all {
        by_norm.entry(l.norm(z)).or_default().push(z.clone());
    }
    let mut reps: Vec<_> = by_norm
        .iter()
        .filter(|(k, _)| !l.ground().is_zero(k))
        .map(|(_, zs)| zs[0].clone())
        .collect();
    reps.sort();
    Ok(Fibers { by_norm, reps, all })
}

fn check_budget<K: GroundField>(l: &ExtField<K>, n: usize, budget: u128) -> Result<()> {
    let q = l
        .ground()
        .order()
        .ok_or_else(|| Error::Unsupported("exhaustive enumeration needs a finite field".into()))? as u128;
    // leading coordinate up to a norm-1 factor, n - 2 free coordinates, last one from a fiber
    let needed = q.saturating_mul((q * q).saturating_pow(n.saturating_sub(2) as u32)).saturating_mul(q + 1);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok(())
}

/// Calls `f` on every `u` with `<u, u> = target`, up to a norm-1 scalar on the
/// first nonzero coordinate (which leaves `<u, M u>` unchanged). `u = 0` is skipped.
fn for_each_sphere_vector<K: GroundField>(
    l: &ExtField<K>,
    n: usize,
    target: &K::Elem,
    fib: &Fibers<K::Elem>,
    mut f: impl FnMut(&[ExtScalar<K::Elem>]),
) {
    let g = l.ground();
    let mut u = vec![l.zero(); n];
    for p in 0..n {
        for x in &fib.reps {
            u[p] = x.clone();
            let used = l.norm(x);
            if p == n - 1 {
                if used == *target {
                    f(&u);
                }
                continue;
            }
            fill(l, &mut u, p + 1, &g.sub(target, &used), fib, &mut f);
        }
        u[p] = l.zero();
    }
}

fn fill<K: GroundField>(
    l: &ExtField<K>,
    u: &mut Vec<ExtScalar<K::Elem>>,
    i: usize,
    remaining: &K::Elem,
    fib: &Fibers<K::Elem>,
    f: &mut impl FnMut(&[ExtScalar<K::Elem>]),
) {
    let n = u.len();
    if i == n - 1 {
        if let Some(zs) = fib.by_norm.get(remaining) {
            for z in zs {
                u[i] = z.clone();
                f(u);
            }
        }
        u[i] = l.zero();
        return;
    }
    let g = l.ground();
    for z in &fib.all {
        u[i] = z.clone();
        fill(l, u, i + 1, &g.sub(remaining, &l.norm(z)), fib, f);
    }
    u[i] = l.zero();
}

fn values_on_sphere<K: GroundField>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    target: &K::Elem,
    budget: u128,
) -> Result<BTreeSet<ExtScalar<K::Elem>>> {
    check_budget(l, m.n(), budget)?;
    let fib = fibers(l)?;
    let mut out = BTreeSet::new();
    let mut v = ExtVector(Vec::new());
    for_each_sphere_vector(l, m.n(), target, &fib, |u| {
        v.0.clear();
        v.0.extend_from_slice(u);
        out.insert(quadratic_value(l, m, &v));
    });
    Ok(out)
}

/// `Num(M)` over a finite field, sorted.
pub fn num_range_exhaustive<K: GroundField>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    budget: u128,
) -> Result<Vec<ExtScalar<K::Elem>>> {
    Ok(values_on_sphere(l, m, &l.ground().one(), budget)?.into_iter().collect())
}

/// `Num_0(M)`, the values on isotropic vectors including `u = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumZero<E> {
    Exact(Vec<ExtScalar<E>>),
    /// Verified members; not known to be complete.
    Sampled(Vec<ExtScalar<E>>),
}

impl<E> NumZero<E> {
    pub fn values(&self) -> &[ExtScalar<E>] {
        match self {
            NumZero::Exact(v) | NumZero::Sampled(v) => v,
        }
    }
}

/// `Num_0(M)` over a finite field, sorted; always contains 0.
pub fn num_range_zero_exhaustive<K: GroundField>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    budget: u128,
) -> Result<Vec<ExtScalar<K::Elem>>> {
    let mut set = values_on_sphere(l, m, &l.ground().zero(), budget)?;
    set.insert(l.zero());
    Ok(set.into_iter().collect())
}

/// `Num_0(M)`: exhaustive for finite fields, exact `{0}` when the form is
/// anisotropic, otherwise values on isotropic vectors built from
/// `N(w) = -1` witnesses on coordinate pairs.
pub fn num_range_zero<K: NormSets>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    count: usize,
    budget: u128,
    bound: u64,
) -> Result<NumZero<K::Elem>> {
    let g = l.ground();
    if g.is_finite() {
        return Ok(NumZero::Exact(num_range_zero_exhaustive(l, m, budget)?));
    }
    let n = m.n();
    let definite = l.alpha().and_then(|a| g.approx(a)).is_some_and(|a| a < 0.0);
    let zero = zero_in_hat_delta2(l, bound);
    if definite || n == 1 || (n == 2 && zero.answer == Answer::No) {
        return Ok(NumZero::Exact(vec![l.zero()]));
    }
    let Some(w) = zero.witness.get(1).cloned() else {
        return Ok(NumZero::Sampled(vec![l.zero()]));
    };
    // u_{2i} = x_i, u_{2i+1} = x_i w omega_i with N(omega_i) = 1
    let unit = Circle::new(l.zero(), g.one());
    let omegas: Vec<_> = circle_points(l, &unit, &l.one())?.take(count.max(1)).collect();
    let xs: Vec<_> = g.elements_by_height().filter(|x| !g.is_zero(x)).take(count.max(1)).collect();
    let mut out = BTreeSet::from([l.zero()]);
    for j in 0..count {
        let mut u = vec![l.zero(); n];
        for pair in 0..n / 2 {
            let x = l.from_ground(xs[(j + pair) % xs.len()].clone());
            let om = &omegas[(j * (pair + 1)) % omegas.len()];
            u[2 * pair] = x.clone();
            u[2 * pair + 1] = l.mul(&l.mul(&x, &w), om);
        }
        let v = ExtVector(u);
        debug_assert!(g.is_zero(&self_pairing(l, &v)));
        out.insert(quadratic_value(l, m, &v));
    }
    Ok(NumZero::Sampled(out.into_iter().collect()))
}

/// Unit vectors of `K^n` by stereographic projection from `e_1`, in height order.
pub fn k_sphere_points<K: GroundField>(k: &K, n: usize, count: usize) -> Vec<Vec<K::Elem>> {
    if k.characteristic() == 2 {
        // the sphere is the hyperplane sum x_i = 1; no projection needed here
        return (0..n.min(count)).map(|i| (0..n).map(|j| if i == j { k.one() } else { k.zero() }).collect()).collect();
    }
    if n == 1 {
        let mut v = vec![vec![k.one()]];
        if k.characteristic() != 2 {
            v.push(vec![k.neg(&k.one())]);
        }
        v.truncate(count);
        return v;
    }
    let params: Vec<K::Elem> = k.elements_by_height().take(count.max(2)).collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut idx = vec![0usize; n - 1];
    // walk parameter tuples in order of their largest index
    'outer: for top in 0..params.len() {
        for tuple in tuples_with_max(n - 1, top) {
            idx.copy_from_slice(&tuple);
            let s: Vec<&K::Elem> = idx.iter().map(|&i| &params[i]).collect();
            let s2 = s.iter().fold(k.zero(), |acc, x| k.add(&acc, &k.square(x)));
            let den = k.add(&k.one(), &s2);
            let Ok(inv) = k.inv(&den) else { continue };
            let mut x = vec![k.mul(&k.sub(&k.one(), &s2), &inv)];
            let two = k.from_int(2);
            x.extend(s.iter().map(|si| k.mul(&k.mul(&two, si), &inv)));
            if seen.insert(x.clone()) {
                out.push(x);
                if out.len() >= count {
                    break 'outer;
                }
            }
        }
    }
    out
}

/// All index tuples of length `len` over `0..=top` whose maximum is `top`.
fn tuples_with_max(len: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; len];
    loop {
        if cur.iter().any(|&i| i == top) {
            out.push(cur.clone());
        }
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if cur[pos] < top {
                cur[pos] += 1;
                for c in cur.iter_mut().skip(pos + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Unit vectors of `L^n` built from segment parameters: `u = (w omega, w_c u')`
/// with `N(w) = t`, `N(w_c) = 1 - t`, `N(omega) = 1` and `u'` a unit vector of `L^{n-1}`.
fn segment_unit_vectors<K: NormSets>(l: &ExtField<K>, n: usize, count: usize) -> Result<Vec<ExtVector<K::Elem>>> {
    let g = l.ground();
    let unit = Circle::new(l.zero(), g.one());
    let omegas: Vec<_> = circle_points(l, &unit, &l.one())?.take(count.max(1)).collect();
    if n == 1 {
        return Ok(omegas.into_iter().map(|z| ExtVector(vec![z])).collect());
    }
    let segs = K::segment_sample(l, count);
    if segs.is_empty() {
        return Ok(Vec::new());
    }
    let subs = segment_unit_vectors(l, n - 1, count)?;
    let mut out = Vec::new();
    for j in 0..count.min(segs.len().max(1) * omegas.len()) {
        let s = &segs[j % segs.len()];
        let om = &omegas[(j / segs.len()) % omegas.len()];
        let sub = &subs[j % subs.len()];
        let mut u = vec![l.mul(&s.w, om)];
        u.extend(sub.0.iter().map(|x| l.mul(&s.w_c, x)));
        out.push(ExtVector(u));
    }
    Ok(out)
}

/// Exact sample of `(u, <u, M u>)` with `<u, u> = 1`: the basis vectors, then
/// alternately rational sphere points and segment-built vectors.
pub fn num_range_sample<K: NormSets>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    count: usize,
) -> Result<Vec<(ExtVector<K::Elem>, ExtScalar<K::Elem>)>> {
    let n = m.n();
    let g = l.ground();
    let mut vecs: Vec<ExtVector<K::Elem>> = (0..n).map(|i| crate::linalg::basis_vector(l, n, i)).collect();
    let real: Vec<_> = k_sphere_points(g, n, count)
        .into_iter()
        .map(|x| ExtVector(x.into_iter().map(|a| l.from_ground(a)).collect()))
        .collect();
    let seg = segment_unit_vectors(l, n, count)?;
    let mut seen: BTreeSet<ExtVector<K::Elem>> = vecs.iter().cloned().collect();
    let (mut i, mut j) = (0, 0);
    while vecs.len() < count && (i < real.len() || j < seg.len()) {
        let next = if (i <= j && i < real.len()) || j >= seg.len() {
            i += 1;
            &real[i - 1]
        } else {
            j += 1;
            &seg[j - 1]
        };
        if seen.insert(next.clone()) {
            vecs.push(next.clone());
        }
    }
    vecs.truncate(count);
    vecs.into_iter()
        .map(|u| {
            if self_pairing(l, &u) != g.one() {
                return Err(Error::Hypothesis("sampled vector is not a unit vector".into()));
            }
            let val = quadratic_value(l, m, &u);
            Ok((u, val))
        })
        .collect()
}

#[cfg(test)]
mod tests;
