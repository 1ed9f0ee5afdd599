//! Vectors and matrices over `L`, the sesquilinear form, and the 2x2 eigensolver.

use crate::error::{Error, Result};
use crate::fields::{quadratic_roots, ExtField, ExtKind, ExtScalar, GroundField};

/// A vector in `L^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtVector<E>(pub Vec<ExtScalar<E>>);

/// A square matrix over `L`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtMatrix<E> {
    n: usize,
    entries: Vec<ExtScalar<E>>,
}

impl<E> ExtVector<E> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<E: Clone> ExtMatrix<E> {
    pub fn from_rows(rows: Vec<Vec<ExtScalar<E>>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: row.len() });
            }
            entries.extend(row);
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> ExtScalar<E>) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &ExtScalar<E> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExtScalar<E>) {
        self.entries[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<ExtScalar<E>>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> ExtVector<E> {
        ExtVector((0..self.n).map(|i| self.get(i, j).clone()).collect())
    }

    /// Builds the matrix whose columns are `cols`.
    pub fn from_columns(cols: &[ExtVector<E>]) -> Self {
        let n = cols.len();
        Self::from_fn(n, |i, j| cols[j].0[i].clone())
    }

    /// Unitary direct sum `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self, zero: &ExtScalar<E>) -> Self {
        let (a, b) = (self.n, other.n);
        Self::from_fn(a + b, |i, j| match (i < a, j < a) {
            (true, true) => self.get(i, j).clone(),
            (false, false) => other.get(i - a, j - a).clone(),
            _ => zero.clone(),
        })
    }
}

/// Status of a 2x2 eigen-decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EigenStatus {
    TwoDistinct,
    /// Eigenspace dimension 1 or 2.
    Repeated { eigenspace_dim: usize },
    NotInL,
}

/// Exact eigen-data of a 2x2 matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData2x2<E> {
    pub status: EigenStatus,
    pub eigenvalues: Vec<ExtScalar<E>>,
    pub eigenvectors: Vec<ExtVector<E>>,
    /// `t^2 + b t + c`, as `[b, c]`.
    pub char_poly: [ExtScalar<E>; 2],
}

pub fn zero_vector<K: GroundField>(l: &ExtField<K>, n: usize) -> ExtVector<K::Elem> {
    ExtVector(vec![l.zero(); n])
}

pub fn basis_vector<K: GroundField>(l: &ExtField<K>, n: usize, i: usize) -> ExtVector<K::Elem> {
    let mut v = zero_vector(l, n);
    v.0[i] = l.one();
    v
}

pub fn identity<K: GroundField>(l: &ExtField<K>, n: usize) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(n, |i, j| if i == j { l.one() } else { l.zero() })
}

pub fn scalar_matrix<K: GroundField>(l: &ExtField<K>, n: usize, c: &ExtScalar<K::Elem>) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(n, |i, j| if i == j { c.clone() } else { l.zero() })
}

pub fn diagonal<K: GroundField>(l: &ExtField<K>, d: &[ExtScalar<K::Elem>]) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(d.len(), |i, j| if i == j { d[i].clone() } else { l.zero() })
}

/// `<u, v> = sum sigma(u_i) v_i`.
pub fn sesq<K: GroundField>(
    l: &ExtField<K>,
    u: &ExtVector<K::Elem>,
    v: &ExtVector<K::Elem>,
) -> Result<ExtScalar<K::Elem>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch { expected: u.len(), got: v.len() });
    }
    Ok(sesq_unchecked(l, &u.0, &v.0))
}

pub(crate) fn sesq_unchecked<K: GroundField>(
    l: &ExtField<K>,
    u: &[ExtScalar<K::Elem>],
    v: &[ExtScalar<K::Elem>],
) -> ExtScalar<K::Elem> {
    u.iter().zip(v).fold(l.zero(), |acc, (a, b)| l.add(&acc, &l.mul(&l.conj(a), b)))
}

/// `<u, u>`, an element of `K`.
pub fn self_pairing<K: GroundField>(l: &ExtField<K>, u: &ExtVector<K::Elem>) -> K::Elem {
    let k = l.ground();
    u.0.iter().fold(k.zero(), |acc, a| k.add(&acc, &l.norm(a)))
}

pub fn vec_add<K: GroundField>(l: &ExtField<K>, u: &ExtVector<K::Elem>, v: &ExtVector<K::Elem>) -> ExtVector<K::Elem> {
    ExtVector(u.0.iter().zip(&v.0).map(|(a, b)| l.add(a, b)).collect())
}

pub fn vec_sub<K: GroundField>(l: &ExtField<K>, u: &ExtVector<K::Elem>, v: &ExtVector<K::Elem>) -> ExtVector<K::Elem> {
    ExtVector(u.0.iter().zip(&v.0).map(|(a, b)| l.sub(a, b)).collect())
}

pub fn vec_scale<K: GroundField>(l: &ExtField<K>, c: &ExtScalar<K::Elem>, u: &ExtVector<K::Elem>) -> ExtVector<K::Elem> {
    ExtVector(u.0.iter().map(|a| l.mul(c, a)).collect())
}

pub fn is_zero_vector<K: GroundField>(l: &ExtField<K>, u: &ExtVector<K::Elem>) -> bool {
    u.0.iter().all(|a| l.is_zero(a))
}

pub fn mat_vec<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>, v: &ExtVector<K::Elem>) -> ExtVector<K::Elem> {
    let n = m.n();
    ExtVector(
        (0..n)
            .map(|i| (0..n).fold(l.zero(), |acc, j| l.add(&acc, &l.mul(m.get(i, j), &v.0[j]))))
            .collect(),
    )
}

/// `<u, M u>`, the quantity whose values make up the numerical range.
pub fn quadratic_value<K: GroundField>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    u: &ExtVector<K::Elem>,
) -> ExtScalar<K::Elem> {
    sesq_unchecked(l, &u.0, &mat_vec(l, m, u).0)
}

pub fn mat_mul<K: GroundField>(l: &ExtField<K>, a: &ExtMatrix<K::Elem>, b: &ExtMatrix<K::Elem>) -> ExtMatrix<K::Elem> {
    let n = a.n();
    ExtMatrix::from_fn(n, |i, j| (0..n).fold(l.zero(), |acc, k| l.add(&acc, &l.mul(a.get(i, k), b.get(k, j)))))
}

pub fn mat_add<K: GroundField>(l: &ExtField<K>, a: &ExtMatrix<K::Elem>, b: &ExtMatrix<K::Elem>) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(a.n(), |i, j| l.add(a.get(i, j), b.get(i, j)))
}

pub fn mat_scale<K: GroundField>(l: &ExtField<K>, c: &ExtScalar<K::Elem>, a: &ExtMatrix<K::Elem>) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(a.n(), |i, j| l.mul(c, a.get(i, j)))
}

/// `c M + d I`.
pub fn affine<K: GroundField>(
    l: &ExtField<K>,
    m: &ExtMatrix<K::Elem>,
    c: &ExtScalar<K::Elem>,
    d: &ExtScalar<K::Elem>,
) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(m.n(), |i, j| {
        let v = l.mul(c, m.get(i, j));
        if i == j {
            l.add(&v, d)
        } else {
            v
        }
    })
}

/// Conjugate transpose.
pub fn dagger<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> ExtMatrix<K::Elem> {
    ExtMatrix::from_fn(m.n(), |i, j| l.conj(m.get(j, i)))
}

pub fn is_unitary<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> bool {
    mat_mul(l, &dagger(l, m), m) == identity(l, m.n())
}

pub fn is_scalar<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> Option<ExtScalar<K::Elem>> {
    let c = m.get(0, 0).clone();
    (*m == scalar_matrix(l, m.n(), &c)).then_some(c)
}

/// Scales `v` so its first nonzero coordinate is 1.
pub fn canonicalize<K: GroundField>(l: &ExtField<K>, v: &ExtVector<K::Elem>) -> ExtVector<K::Elem> {
    match v.0.iter().find(|a| !l.is_zero(a)) {
        None => v.clone(),
        Some(p) => {
            let inv = l.inv(p).expect("nonzero pivot");
            vec_scale(l, &inv, v)
        }
    }
}

/// Reduced row echelon form; returns the pivot columns.
fn rref<K: GroundField>(l: &ExtField<K>, rows: &mut [Vec<ExtScalar<K::Elem>>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !l.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, p);
        let inv = l.inv(&rows[r][c]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = l.mul(&inv, x);
        }
        for i in 0..rows.len() {
            if i != r && !l.is_zero(&rows[i][c]) {
                let f = rows[i][c].clone();
                for j in 0..cols {
                    let t = l.mul(&f, &rows[r][j]);
                    rows[i][j] = l.sub(&rows[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn rank<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> usize {
    let mut rows = m.rows();
    rref(l, &mut rows, m.n()).len()
}

/// Rank of a list of vectors.
pub fn span_rank<K: GroundField>(l: &ExtField<K>, vs: &[ExtVector<K::Elem>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let cols = vs[0].len();
    let mut rows: Vec<_> = vs.iter().map(|v| v.0.clone()).collect();
    rref(l, &mut rows, cols).len()
}

/// Basis of the kernel of an `r x cols` system, each vector canonicalized.
pub fn kernel_of_rows<K: GroundField>(
    l: &ExtField<K>,
    rows: &[Vec<ExtScalar<K::Elem>>],
    cols: usize,
) -> Vec<ExtVector<K::Elem>> {
    let mut rows = rows.to_vec();
    let pivots = rref(l, &mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![l.zero(); cols];
            v[f] = l.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = l.neg(&rows[r][f]);
            }
            canonicalize(l, &ExtVector(v))
        })
        .collect()
}

pub fn kernel<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> Vec<ExtVector<K::Elem>> {
    kernel_of_rows(l, &m.rows(), m.n())
}

pub fn inverse<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> Result<ExtMatrix<K::Elem>> {
    let n = m.n();
    let mut rows: Vec<Vec<_>> = m
        .rows()
        .into_iter()
        .enumerate()
        .map(|(i, mut r)| {
            r.extend((0..n).map(|j| if i == j { l.one() } else { l.zero() }));
            r
        })
        .collect();
    let pivots = rref(l, &mut rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::DivisionByZero);
    }
    Ok(ExtMatrix::from_fn(n, |i, j| rows[i][n + j].clone()))
}

/// Roots in `L` of `t^2 + b t + c`, sorted and deduplicated.
pub fn monic_quadratic_roots_in_ext<K: GroundField>(
    l: &ExtField<K>,
    b: &ExtScalar<K::Elem>,
    c: &ExtScalar<K::Elem>,
) -> Vec<ExtScalar<K::Elem>> {
    let mut roots = match l.kind() {
        ExtKind::SquareRoot { .. } => {
            let disc = l.sub(&l.square(b), &l.mul(&l.from_int(4), c));
            match l.sqrt(&disc) {
                None => Vec::new(),
                Some(s) => {
                    let half = l.inv(&l.from_int(2)).expect("odd characteristic");
                    let nb = l.neg(b);
                    vec![l.mul(&half, &l.add(&nb, &s)), l.mul(&half, &l.sub(&nb, &s))]
                }
            }
        }
        ExtKind::ArtinSchreier { eps } => {
            if l.is_zero(b) {
                vec![l.sqrt(c).expect("squaring is bijective")]
            } else {
                // t = b s with s^2 + s = a; write s = u + v beta and split coordinates
                let a = l.div(c, &l.square(b)).expect("nonzero");
                let k = l.ground();
                let one = k.one();
                let mut out = Vec::new();
                for v in quadratic_roots(k, &one, &one, &k.neg(&a.c1)).unwrap_or_default() {
                    let rhs = k.sub(&a.c0, &k.mul(eps, &k.square(&v)));
                    for u in quadratic_roots(k, &one, &one, &k.neg(&rhs)).unwrap_or_default() {
                        out.push(l.mul(b, &ExtScalar::new(u, v.clone())));
                    }
                }
                out
            }
        }
    };
    roots.sort();
    roots.dedup();
    roots
}

/// Exact eigenvalues and eigenvectors of a 2x2 matrix.
pub fn eigen_2x2<K: GroundField>(l: &ExtField<K>, m: &ExtMatrix<K::Elem>) -> Result<EigenData2x2<K::Elem>> {
    if m.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: m.n() });
    }
    let tr = l.add(m.get(0, 0), m.get(1, 1));
    let det = l.sub(&l.mul(m.get(0, 0), m.get(1, 1)), &l.mul(m.get(0, 1), m.get(1, 0)));
    let b = l.neg(&tr);
    let roots = monic_quadratic_roots_in_ext(l, &b, &det);
    let char_poly = [b, det];
    let eigvecs = |lam: &ExtScalar<K::Elem>| kernel(l, &affine(l, m, &l.one(), &l.neg(lam)));
    match roots.len() {
        0 => Ok(EigenData2x2 { status: EigenStatus::NotInL, eigenvalues: vec![], eigenvectors: vec![], char_poly }),
        1 => {
            let vs = eigvecs(&roots[0]);
            Ok(EigenData2x2 {
                status: EigenStatus::Repeated { eigenspace_dim: vs.len() },
                eigenvalues: roots,
                eigenvectors: vs,
                char_poly,
            })
        }
        _ => {
            let vs = roots.iter().map(|r| eigvecs(r).remove(0)).collect();
            Ok(EigenData2x2 { status: EigenStatus::TwoDistinct, eigenvalues: roots, eigenvectors: vs, char_poly })
        }
    }
}

/// A vector orthogonal to `v` in `L^2` with the same self-pairing.
pub fn orthogonal_partner<K: GroundField>(l: &ExtField<K>, v: &ExtVector<K::Elem>) -> ExtVector<K::Elem> {
    ExtVector(vec![l.neg(&l.conj(&v.0[1])), l.conj(&v.0[0])])
}

/// `{x : <f, x> = 0 for all f}` as a basis of canonical vectors.
pub fn orthogonal_complement<K: GroundField>(
    l: &ExtField<K>,
    fs: &[ExtVector<K::Elem>],
    n: usize,
) -> Vec<ExtVector<K::Elem>> {
    // <f, x> = sum sigma(f_i) x_i is linear in x with coefficients sigma(f_i)
    let rows: Vec<Vec<_>> = fs.iter().map(|f| f.0.iter().map(|a| l.conj(a)).collect()).collect();
    if rows.is_empty() {
        return (0..n).map(|i| basis_vector(l, n, i)).collect();
    }
    kernel_of_rows(l, &rows, n)
}

/// Greedy orthonormal family inside the span of `basis`.
///
/// Repeatedly picks a vector of nonzero self-pairing `k` (scanning the basis,
/// then pairwise combinations), rescales it by `1/w` for a norm witness
/// `N(w) = k`, and restricts to its orthogonal complement in the span.
/// `witness` returns `w` with `N(w) = k`, or `None` when `k` is not a norm.
pub fn greedy_orthonormal<K: GroundField>(
    l: &ExtField<K>,
    basis: &[ExtVector<K::Elem>],
    limit: usize,
    mut witness: impl FnMut(&K::Elem) -> Option<ExtScalar<K::Elem>>,
) -> Vec<ExtVector<K::Elem>> {
    let mut span: Vec<ExtVector<K::Elem>> = basis.to_vec();
    let mut out = Vec::new();
    while out.len() < limit && !span.is_empty() {
        let Some((g, w)) = pick_anisotropic(l, &span, &mut witness) else {
            break;
        };
        let f = vec_scale(l, &l.inv(&w).expect("nonzero witness"), &g);
        // project the remaining span onto f's complement: x - <f,x> f
        let mut next = Vec::new();
        for x in &span {
            let p = vec_sub(l, x, &vec_scale(l, &sesq_unchecked(l, &f.0, &x.0), &f));
            if !is_zero_vector(l, &p) {
                next.push(p);
            }
        }
        span = independent_subset(l, &next);
        out.push(f);
    }
    out
}

fn independent_subset<K: GroundField>(l: &ExtField<K>, vs: &[ExtVector<K::Elem>]) -> Vec<ExtVector<K::Elem>> {
    let mut out: Vec<ExtVector<K::Elem>> = Vec::new();
    for v in vs {
        out.push(v.clone());
        if span_rank(l, &out) < out.len() {
            out.pop();
        }
    }
    out
}

fn pick_anisotropic<K: GroundField>(
    l: &ExtField<K>,
    span: &[ExtVector<K::Elem>],
    witness: &mut impl FnMut(&K::Elem) -> Option<ExtScalar<K::Elem>>,
) -> Option<(ExtVector<K::Elem>, ExtScalar<K::Elem>)> {
    let k = l.ground();
    let mut try_vec = |g: ExtVector<K::Elem>| {
        let s = self_pairing(l, &g);
        if k.is_zero(&s) {
            return None;
        }
        witness(&s).map(|w| (g, w))
    };
    for u in span {
        if let Some(hit) = try_vec(u.clone()) {
            return Some(hit);
        }
    }
    for i in 0..span.len() {
        for j in i + 1..span.len() {
            let p = sesq_unchecked(l, &span[i].0, &span[j].0);
            if l.is_zero(&p) {
                continue;
            }
            let pinv = l.inv(&p).expect("nonzero");
            for c in [pinv.clone(), l.mul(&l.beta(), &pinv)] {
                if let Some(hit) = try_vec(vec_add(l, &span[i], &vec_scale(l, &c, &span[j]))) {
                    return Some(hit);
                }
            }
        }
    }
    None
}

/// Orthonormal vectors `f_1, .., f_r` with `r = max(3m - 2n, 0)` inside an
/// `m`-dimensional subspace of `L^n`, for `n > m > n/2 > 1`.
pub fn orthonormal_subset<K: GroundField>(
    l: &ExtField<K>,
    basis: &[ExtVector<K::Elem>],
    n: usize,
    witness: impl FnMut(&K::Elem) -> Option<ExtScalar<K::Elem>>,
) -> Result<Vec<ExtVector<K::Elem>>> {
    let m = basis.len();
    if basis.iter().any(|b| b.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: basis.iter().map(|b| b.len()).find(|&x| x != n).unwrap_or(n) });
    }
    if !(n > m && 2 * m > n && m > 1) {
        return Err(Error::Hypothesis(format!("need n > m > n/2 > 1, got n = {n}, m = {m}")));
    }
    if span_rank(l, basis) != m {
        return Err(Error::Hypothesis("input vectors are dependent".into()));
    }
    let want = (3 * m).saturating_sub(2 * n);
    let fs = greedy_orthonormal(l, basis, want, witness);
    if fs.len() < want {
        return Err(Error::Hypothesis(format!(
            "found only {} of {want} orthonormal vectors; the form degenerates on the subspace",
            fs.len()
        )));
    }
    Ok(fs)
}
