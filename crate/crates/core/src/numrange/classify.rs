//! Classification of 2x2 numerical ranges, and the explicit constructions
//! that go with it.

use num::BigRational;

use super::describe::RangeDescription;
use crate::error::{Error, Result};
use crate::fields::{ExtField, ExtScalar, GroundField, Rationals};
use crate::linalg::{
    affine, basis_vector, eigen_2x2, is_scalar, mat_vec, orthogonal_partner, quadratic_value, self_pairing, sesq_unchecked,
    vec_scale, EigenStatus, ExtMatrix, ExtVector,
};
use crate::normsets::{find_norm_with_square_complement, in_hat_delta, zero_in_hat_delta2, Answer, NormSets};

/// Symbolic value of `Num(M)` for a 2x2 matrix with eigenvalues in `L`.
pub fn classify_2x2<K: NormSets>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    bound: u64,
) -> Result<RangeDescription<K::Elem>> {
    if m.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: m.n() });
    }
    if let Some(c) = is_scalar(l, m) {
        return Ok(RangeDescription::Singleton { c });
    }
    let g = l.ground();
    let eig = eigen_2x2(l, m)?;
    match eig.status {
        EigenStatus::NotInL => Err(Error::NotInL {
            b: l.format_scalar(&eig.char_poly[0]),
            c: l.format_scalar(&eig.char_poly[1]),
        }),
        EigenStatus::Repeated { .. } => {
            let c = eig.eigenvalues[0].clone();
            let v = &eig.eigenvectors[0];
            let shifted = affine(l, m, &l.one(), &l.neg(&c));
            let delta = self_pairing(l, v);
            if g.is_zero(&delta) {
                // isotropic: rescale so v_2 = 1; then (M - cI) e_2 = mu v
                let v = vec_scale(l, &l.inv(&v.0[1])?, v);
                let col = mat_vec(l, &shifted, &basis_vector(l, 2, 1));
                let mu = l.div(&col.0[1], &v.0[1])?;
                Ok(RangeDescription::PuncturedCoset { c, mu })
            } else {
                // (M - cI) w = mu v in the orthogonal basis (v, w)
                let w = orthogonal_partner(l, v);
                let mw = mat_vec(l, &shifted, &w);
                let mu = l.scale(&g.inv(&delta)?, &sesq_unchecked(l, &v.0, &mw.0));
                Ok(RangeDescription::CenterCircleFamily { c, mu, delta })
            }
        }
        EigenStatus::TwoDistinct => {
            let (c1, c2) = (eig.eigenvalues[0].clone(), eig.eigenvalues[1].clone());
            let (v1, v2) = (&eig.eigenvectors[0], &eig.eigenvectors[1]);
            let (d1, d2) = (self_pairing(l, v1), self_pairing(l, v2));
            if g.is_zero(&d1) && g.is_zero(&d2) {
                return Ok(RangeDescription::TraceLine { c1, c2 });
            }
            if l.is_zero(&sesq_unchecked(l, &v1.0, &v2.0)) {
                return Ok(RangeDescription::SegmentJoin { c1, c2, delta: d1 });
            }
            let mut undecided = None;
            for (v, d, ci, cj) in [(v1, &d1, &c1, &c2), (v2, &d2, &c2, &c1)] {
                if g.is_zero(d) {
                    continue;
                }
                match in_hat_delta(l, d, bound) {
                    Answer::Yes => {
                        let w = orthogonal_partner(l, v);
                        let num = sesq_unchecked(l, &v.0, &mat_vec(l, m, &w).0);
                        let den = l.scale(d, &l.sub(ci, cj));
                        let mu = l.div(&num, &den)?;
                        return Ok(RangeDescription::TwoPointCircleFamily { c1: ci.clone(), c2: cj.clone(), mu });
                    }
                    Answer::Unknown => undecided = Some(g.format_elem(d)),
                    Answer::No => {}
                }
            }
            match undecided {
                Some(d) => Err(Error::Undecided(format!("{d} in Delta"))),
                None => Err(Error::Unhandled(
                    "distinct eigenvalues with non-orthogonal eigenvectors whose self-pairings are not norms".into(),
                )),
            }
        }
    }
}

/// The description of `[[1, b], [0, 0]]`.
pub fn lemma_a30_range<K: GroundField>(l: &ExtField<K>, b: &ExtScalar<K::Elem>) -> Result<RangeDescription<K::Elem>> {
    if l.is_zero(b) {
        return Err(Error::Hypothesis("b must be nonzero".into()));
    }
    Ok(RangeDescription::TwoPointCircleFamily { c1: l.one(), c2: l.zero(), mu: b.clone() })
}

/// A 2x2 matrix with the single eigenvalue `c`, an isotropic eigenvector
/// `v = (1/w, 1)` with `N(w) = -1`, and `(M - cI) e_2 = mu v`.
pub fn make_isotropic_defective<K: NormSets>(
    l: &ExtField<K>,
    c: &ExtScalar<K::Elem>,
    mu: &ExtScalar<K::Elem>,
    bound: u64,
) -> Result<ExtMatrix<K::Elem>> {
    if l.is_zero(mu) {
        return Err(Error::Hypothesis("mu must be nonzero".into()));
    }
    let zero = zero_in_hat_delta2(l, bound);
    let w = match zero.answer {
        Answer::No => {
            return Err(Error::Hypothesis(format!(
                "0 is not in Dhat_2 for {}: no isotropic vectors exist",
                l.name()
            )))
        }
        _ => zero.witness.get(1).cloned().ok_or_else(|| Error::MissingWitness("an element of norm -1".into()))?,
    };
    let v1 = l.inv(&w)?;
    let rows = vec![
        vec![l.sub(c, mu), l.mul(mu, &v1)],
        vec![l.neg(&l.div(mu, &v1)?), l.add(c, mu)],
    ];
    ExtMatrix::from_rows(rows)
}

/// Which construction produced a singleton witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessBranch {
    /// Two basis vectors with different diagonal entries.
    Diagonal,
    /// `(3/5) e_i + (4/5) e_j`, when `m_ji != -m_ij`.
    RealRotation,
    /// `s e_i + z e_j` with `s^2 + N(z) = 1`, when `m_ji = -m_ij`.
    SquareComplement,
}

/// Two unit vectors whose values differ, proving `|Num(M)| >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingletonWitness<E> {
    pub u1: ExtVector<E>,
    pub u2: ExtVector<E>,
    pub v1: ExtScalar<E>,
    pub v2: ExtScalar<E>,
    pub branch: WitnessBranch,
}

/// `None` iff `M` is scalar; otherwise two unit vectors with distinct values.
pub fn singleton_witness(
    l: &ExtField<Rationals>,
    m: &ExtMatrix<BigRational>,
    bound: u64,
) -> Result<Option<SingletonWitness<BigRational>>> {
    if is_scalar(l, m).is_some() {
        return Ok(None);
    }
    let n = m.n();
    let e = |i| basis_vector(l, n, i);
    let pick = || -> Result<(ExtVector<BigRational>, ExtVector<BigRational>, WitnessBranch)> {
        for i in 0..n {
            for j in i + 1..n {
                if m.get(i, i) != m.get(j, j) {
                    return Ok((e(i), e(j), WitnessBranch::Diagonal));
                }
            }
        }
        let (i, j) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| i != j && !l.is_zero(m.get(i, j)))
            .expect("a non-scalar matrix with constant diagonal has a nonzero off-diagonal entry");
        let mut u = vec![l.zero(); n];
        if l.is_zero(&l.add(m.get(i, j), m.get(j, i))) {
            let (_, z, s) = find_norm_with_square_complement(l, bound)?;
            u[i] = l.from_ground(s);
            u[j] = z;
            Ok((e(i), ExtVector(u), WitnessBranch::SquareComplement))
        } else {
            u[i] = l.from_ground(BigRational::new(3.into(), 5.into()));
            u[j] = l.from_ground(BigRational::new(4.into(), 5.into()));
            Ok((e(i), ExtVector(u), WitnessBranch::RealRotation))
        }
    };
    let (u1, u2, branch) = pick()?;
    let (v1, v2) = (quadratic_value(l, m, &u1), quadratic_value(l, m, &u2));
    if v1 == v2 || self_pairing(l, &u2) != l.ground().one() {
        return Err(Error::Hypothesis("witness construction failed to separate values".into()));
    }
    Ok(Some(SingletonWitness { u1, u2, v1, v2, branch }))
}
