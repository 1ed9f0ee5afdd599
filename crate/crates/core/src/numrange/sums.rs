//! Unitary direct sums, open segments, and matrices with an eigenspace of corank 1.

use std::collections::BTreeSet;

use super::describe::{segment_point, RangeDescription};
use super::{classify_2x2, num_range_exhaustive, num_range_sample, num_range_zero_exhaustive};
use crate::error::{Error, Result};
use crate::fields::{ExtField, ExtScalar};
use crate::linalg::{
    affine, dagger, greedy_orthonormal, kernel_of_rows, mat_mul, mat_vec, monic_quadratic_roots_in_ext, orthogonal_complement,
    rank, scalar_matrix, sesq_unchecked, ExtMatrix, ExtVector,
};
use crate::normsets::{norm_witness, NormSets};

/// `((c; d)) = {t c + (1-t) d : t ∈ Dhat ∩ (1 - Dhat)}`; all of it over a
/// finite field, otherwise the first `count` sampled points.
pub fn open_segment<K: NormSets>(
    l: &ExtField<K>,
    c: &ExtScalar<K::Elem>,
    d: &ExtScalar<K::Elem>,
    count: usize,
) -> Vec<ExtScalar<K::Elem>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in K::segment_sample(l, count) {
        let z = segment_point(l, c, d, &p.t);
        if seen.insert(z.clone()) {
            out.push(z);
        }
    }
    out
}

/// `(Num_0(A) + Num(B)) ∪ (Num(A) + Num_0(B)) ∪ {t a + (1-t) b}` over a
/// finite field, where `t` runs over `Dhat ∩ (1 - Dhat)`.
pub fn direct_sum_symbolic<K: NormSets>(
    l: &ExtField<K>,
    num_a: &[ExtScalar<K::Elem>],
    num0_a: &[ExtScalar<K::Elem>],
    num_b: &[ExtScalar<K::Elem>],
    num0_b: &[ExtScalar<K::Elem>],
) -> Vec<ExtScalar<K::Elem>> {
    let mut out = BTreeSet::new();
    for x in num0_a {
        for y in num_b {
            out.insert(l.add(x, y));
        }
    }
    for x in num_a {
        for y in num0_b {
            out.insert(l.add(x, y));
        }
    }
    let ts = K::segment_sample(l, 0);
    for a in num_a {
        for b in num_b {
            for p in &ts {
                out.insert(segment_point(l, a, b, &p.t));
            }
        }
    }
    out.into_iter().collect()
}

/// `Num(A ⊕ B)`: exact over finite fields, sampled otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectSumRange<E> {
    Exact(Vec<ExtScalar<E>>),
    Sampled(Vec<ExtScalar<E>>),
}

pub fn direct_sum_range<K: NormSets>(
    l: &ExtField<K>,
    a: &ExtMatrix<K::Elem>,
    b: &ExtMatrix<K::Elem>,
    count: usize,
    budget: u128,
) -> Result<DirectSumRange<K::Elem>> {
    if l.ground().is_finite() {
        let (na, n0a) = (num_range_exhaustive(l, a, budget)?, num_range_zero_exhaustive(l, a, budget)?);
        let (nb, n0b) = (num_range_exhaustive(l, b, budget)?, num_range_zero_exhaustive(l, b, budget)?);
        return Ok(DirectSumRange::Exact(direct_sum_symbolic(l, &na, &n0a, &nb, &n0b)));
    }
    // the symbolic form needs Delta_x = Delta; fall back to exact samples of A ⊕ B
    let m = a.direct_sum(b, &l.zero());
    let mut vals: Vec<_> = num_range_sample(l, &m, count)?.into_iter().map(|(_, v)| v).collect();
    vals.sort();
    vals.dedup();
    Ok(DirectSumRange::Sampled(vals))
}

/// The splitting of a matrix whose eigenvalue `c` has an eigenspace of dimension `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corank1Report<E> {
    /// Which of the five configurations occurs, 1 through 5.
    pub case: u8,
    pub c: ExtScalar<E>,
    /// The other eigenvalue of the 2x2 block (equal to `c` in cases 3 and 5).
    pub d: ExtScalar<E>,
    /// Unitary `U` with `U^dagger M U = c I ⊕ block`.
    pub unitary: ExtMatrix<E>,
    pub block: ExtMatrix<E>,
    pub block_description: RangeDescription<E>,
    /// `Num(M)`, assembled from the splitting.
    pub range: Vec<ExtScalar<E>>,
}

/// Splits `M` as `c I_{n-2} ⊕ B` and classifies the block. Finite fields only,
/// where `Delta_n = Delta` holds.
pub fn classify_corank1<K: NormSets>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    budget: u128,
) -> Result<Corank1Report<K::Elem>> {
    let n = m.n();
    let g = l.ground();
    if n <= 2 {
        return Err(Error::Hypothesis(format!("need n > 2, got {n}")));
    }
    if !g.is_finite() {
        return Err(Error::Hypothesis("Delta_n = Delta is only certified over finite fields".into()));
    }
    // rank(M - cI) = 1 forces every 2x2 principal minor of M - cI to vanish
    let b = l.neg(&l.add(m.get(0, 0), m.get(1, 1)));
    let det = l.sub(&l.mul(m.get(0, 0), m.get(1, 1)), &l.mul(m.get(0, 1), m.get(1, 0)));
    let c = monic_quadratic_roots_in_ext(l, &b, &det)
        .into_iter()
        .find(|c| rank(l, &affine(l, m, &l.one(), &l.neg(c))) == 1)
        .ok_or_else(|| Error::Hypothesis("no eigenvalue with an eigenspace of dimension n - 1".into()))?;
    let shifted = affine(l, m, &l.one(), &l.neg(&c));
    // eigenvectors that are also killed by (M - cI)^dagger, so that their
    // orthogonal complement is M-invariant; this subspace has dimension >= n - 2
    let mut rows = shifted.rows();
    rows.extend(dagger(l, &shifted).rows());
    let eigenspace = kernel_of_rows(l, &rows, n);
    let witness = |k: &K::Elem| norm_witness(l, k, 0);
    let fs = greedy_orthonormal(l, &eigenspace, n - 2, witness);
    if fs.len() < n - 2 {
        return Err(Error::Hypothesis(format!("found {} of {} orthonormal eigenvectors", fs.len(), n - 2)));
    }
    let perp = orthogonal_complement(l, &fs, n);
    let gs = greedy_orthonormal(l, &perp, 2, |k: &K::Elem| norm_witness(l, k, 0));
    if gs.len() < 2 {
        return Err(Error::Hypothesis("the complement has no orthonormal basis".into()));
    }
    let block = ExtMatrix::from_fn(2, |i, j| sesq_unchecked(l, &gs[i].0, &mat_vec(l, m, &gs[j]).0));
    let cols: Vec<ExtVector<K::Elem>> = fs.iter().chain(&gs).cloned().collect();
    let unitary = ExtMatrix::from_columns(&cols);
    let split = scalar_matrix(l, n - 2, &c).direct_sum(&block, &l.zero());
    if mat_mul(l, &dagger(l, &unitary), &mat_mul(l, m, &unitary)) != split {
        return Err(Error::Hypothesis("the complement of the orthonormal eigenvectors is not invariant".into()));
    }
    let d = l.sub(&l.add(block.get(0, 0), block.get(1, 1)), &c);
    let block_description = classify_2x2(l, &block, 0)?;
    let case = match &block_description {
        RangeDescription::SegmentJoin { .. } => 1,
        RangeDescription::TwoPointCircleFamily { .. } => 2,
        RangeDescription::CenterCircleFamily { .. } => 3,
        RangeDescription::TraceLine { .. } => 4,
        RangeDescription::PuncturedCoset { .. } => 5,
        other => return Err(Error::Hypothesis(format!("unexpected block shape {}", other.variant_name()))),
    };
    // Num(c I_{n-2}) = {c}; Num_0(c I_{n-2}) = {0} since <u, c u> = c <u, u>
    let num_b = block_description.enumerate(l)?;
    let num0_b = num_range_zero_exhaustive(l, &block, budget)?;
    let range = direct_sum_symbolic(l, &[c.clone()], &[l.zero()], &num_b, &num0_b);
    Ok(Corank1Report { case, c, d, unitary, block, block_description, range })
}
