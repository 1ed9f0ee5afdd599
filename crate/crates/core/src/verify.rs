//! The theorem-check suite behind `galnum verify` and the acceptance test.
//!
//! Every criterion is a list of [`Check`]s, each counting how many generated
//! instances agreed with an independent oracle. A check marked `known_gap`
//! tests a statement that is false as written; it still runs and is reported.

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use num::{BigInt, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circles::{circle_contains, circle_point_set, circle_points, Circle};
use crate::fields::{rat_sqrt, BigRational, ExtField, FiniteField, FqElem, GroundField, Rationals};
use crate::gen::{random_corank1, random_matrix, random_nonzero_scalar, random_scalar, random_shape, Shape};
use crate::krange::{
    char2_reduce, is_singleton_k, k_distinct_values, k_range_exhaustive, symmetrize, triangular_form, KMatrix,
    KRangeResult,
};
use crate::linalg::{
    affine, basis_vector, dagger, eigen_2x2, quadratic_value, scalar_matrix, self_pairing, vec_scale, ExtMatrix,
    ExtVector,
};
use crate::normsets::{inv_in_delta_n_check, zero_in_hat_delta2, Answer, NormSets, DEFAULT_BOUND};
use crate::numrange::{
    classify_2x2, classify_corank1, direct_sum_symbolic, lemma_a30_range, make_isotropic_defective,
    num_range_exhaustive, num_range_sample, num_range_zero_exhaustive, singleton_witness,
    WitnessBranch, DEFAULT_BUDGET,
};

/// One counted comparison against an oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: u64,
    pub total: u64,
    /// The statement under test is known to be false as written.
    pub known_gap: bool,
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), passed: 0, total: 0, known_gap: false, note: None }
    }

    fn gap(mut self) -> Self {
        self.known_gap = true;
        self
    }

    pub fn record(&mut self, ok: bool) {
        self.total += 1;
        if ok {
            self.passed += 1;
        }
    }

    /// Records a failure with a note, keeping the first note only.
    fn fail(&mut self, note: impl Into<String>) {
        self.total += 1;
        self.note.get_or_insert_with(|| note.into());
    }

    /// Records `ok`, keeping `note` when it fails.
    fn expect(&mut self, ok: bool, note: impl FnOnce() -> String) {
        if ok {
            self.record(true);
        } else {
            self.fail(note());
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A vacuous check is a failure.
    pub fn ok(&self) -> bool {
        self.total > 0 && self.passed == self.total
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub title: String,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::ok)
    }

    /// Every failing check is a documented gap.
    pub fn only_known_gaps(&self) -> bool {
        self.checks.iter().all(|c| c.ok() || c.known_gap)
    }

    pub fn counts(&self) -> (u64, u64) {
        self.checks.iter().fold((0, 0), |(p, t), c| (p + c.passed, t + c.total))
    }

    pub fn summary_line(&self) -> String {
        let (p, t) = self.counts();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("criterion {:>2}: {status} {} ({p}/{t}, {:.1}s)", self.id, self.title, self.seconds)
    }

    pub fn detail_lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let status = match (c.ok(), c.known_gap) {
                    (true, _) => "ok",
                    (false, true) => "GAP",
                    (false, false) => "FAIL",
                };
                let note = c.note.as_deref().map(|n| format!(" - {n}")).unwrap_or_default();
                format!("    [{status}] {}: {}/{}{note}", c.name, c.passed, c.total)
            })
            .collect()
    }
}

fn criterion(id: u8, title: &str, seed: u64, body: impl FnOnce(&mut ChaCha8Rng) -> Vec<Check>) -> CriterionReport {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (u64::from(id) << 32));
    let checks = body(&mut rng);
    CriterionReport { id, title: title.into(), checks, seconds: start.elapsed().as_secs_f64() }
}

/// `F_{q^2}` for a finite ground field, the usual name otherwise.
pub fn label<K: GroundField>(l: &ExtField<K>) -> String {
    match l.ground().order() {
        Some(q) => format!("F_{}", q * q),
        None => l.name(),
    }
}

pub fn finite_ext(p: u32, m: u32) -> ExtField<FiniteField> {
    let k = if m == 1 { FiniteField::prime(p) } else { FiniteField::new(p, m, None) };
    ExtField::quadratic_auto(k.expect("small prime power")).expect("quadratic extension exists")
}

pub fn rational_ext(d: i64) -> ExtField<Rationals> {
    ExtField::quadratic(&BigRational::from_integer(d.into())).expect("non-square radicand")
}

fn sorted<T: Ord>(v: impl IntoIterator<Item = T>) -> Vec<T> {
    let set: BTreeSet<T> = v.into_iter().collect();
    set.into_iter().collect()
}

/// Criterion 1: classifier against enumeration for each generated shape.
pub fn checks_classifier(l: &ExtField<FiniteField>, per_shape: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let name = label(l);
    let mut out = Vec::new();
    for shape in Shape::ALL {
        let mut check = Check::new(format!("{name} {}", shape.name()));
        for _ in 0..per_shape {
            let m = match random_shape(l, shape, None, rng, 0) {
                Ok(m) => m,
                Err(e) => {
                    check.fail(e.to_string());
                    continue;
                }
            };
            match classify_2x2(l, &m, 0) {
                Ok(desc) => {
                    let want = num_range_exhaustive(l, &m, DEFAULT_BUDGET);
                    let got = desc.enumerate(l);
                    let same = matches!((&got, &want), (Ok(a), Ok(b)) if a == b);
                    check.expect(desc.variant_name() == shape.name() && same, || format!("{m:?} as {desc:?}"));
                }
                Err(e) => check.fail(format!("{m:?}: {e}")),
            }
        }
        out.push(check);
    }
    let mut check = Check::new(format!("{name} [[1,b],[0,0]]"));
    for _ in 0..per_shape.min(40) {
        let b = random_nonzero_scalar(l, rng);
        let m = ExtMatrix::from_rows(vec![vec![l.one(), b.clone()], vec![l.zero(), l.zero()]]).expect("2x2");
        let want = num_range_exhaustive(l, &m, DEFAULT_BUDGET).ok();
        let got = lemma_a30_range(l, &b).and_then(|d| d.enumerate(l)).ok();
        check.expect(got.is_some() && got == want, || format!("b = {}", l.format_scalar(&b)));
    }
    out.push(check);
    let mut check = Check::new(format!("{name} uniform random"));
    for _ in 0..per_shape {
        let m = random_matrix(l, 2, rng);
        match classify_2x2(l, &m, 0) {
            Ok(desc) => {
                let same = desc.enumerate(l).ok() == num_range_exhaustive(l, &m, DEFAULT_BUDGET).ok();
                check.expect(same, || format!("{m:?}"));
            }
            Err(crate::Error::NotInL { .. }) => {}
            Err(e) => check.fail(e.to_string()),
        }
    }
    out.push(check);
    out
}

/// Criterion 2 over a finite field: `Num = c + mu K^*`, `c` excluded.
pub fn checks_isotropic_finite(l: &ExtField<FiniteField>, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let g = l.ground();
    let q = g.order().expect("finite");
    let mut check = Check::new(format!("{} c + mu Dhat, |Num| = q - 1", label(l)));
    for _ in 0..count {
        let c = random_scalar(l, rng);
        let mu = random_nonzero_scalar(l, rng);
        let m = match make_isotropic_defective(l, &c, &mu, 0) {
            Ok(m) => m,
            Err(e) => {
                check.fail(e.to_string());
                continue;
            }
        };
        let num = num_range_exhaustive(l, &m, DEFAULT_BUDGET).unwrap_or_default();
        let coset = sorted(
            g.elements()
                .expect("finite")
                .into_iter()
                .filter(|k| !g.is_zero(k))
                .map(|k| l.add(&c, &l.scale(&k, &mu))),
        );
        let eigen = eigen_2x2(l, &m).map(|e| e.eigenvalues.contains(&c)).unwrap_or(false);
        let excluded = classify_2x2(l, &m, 0).map(|d| d.membership(l, &c, 0) == Answer::No).unwrap_or(false);
        let ok = eigen && excluded && num == coset && num.len() as u64 == q - 1 && !num.contains(&c);
        check.expect(ok, || format!("c = {}, mu = {}", l.format_scalar(&c), l.format_scalar(&mu)));
    }
    vec![check]
}

/// Criterion 2 over Q: `c` is an eigenvalue, not a member, and every sampled
/// value lies in `c + mu Dhat`.
pub fn checks_isotropic_rational(l: &ExtField<Rationals>, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut check = Check::new(format!("{} c not in Num, samples in c + mu Dhat", label(l)));
    if zero_in_hat_delta2(l, DEFAULT_BOUND).answer != Answer::Yes {
        return vec![check.with_note("0 is not in Dhat_2; the construction does not apply")];
    }
    for _ in 0..count {
        let c = random_scalar(l, rng);
        let mu = random_nonzero_scalar(l, rng);
        let result = (|| -> crate::Result<bool> {
            let m = make_isotropic_defective(l, &c, &mu, DEFAULT_BOUND)?;
            let desc = classify_2x2(l, &m, DEFAULT_BOUND)?;
            let eigen = eigen_2x2(l, &m)?.eigenvalues.contains(&c);
            let mut ok = eigen && desc.membership(l, &c, DEFAULT_BOUND) == Answer::No;
            for (_, z) in num_range_sample(l, &m, 40)? {
                let k = l.div(&l.sub(&z, &c), &mu)?;
                ok &= z != c && l.is_ground(&k) && Rationals::in_delta(l, &k.c0, DEFAULT_BOUND).is_yes();
            }
            Ok(ok)
        })();
        check.expect(matches!(result, Ok(true)), || format!("c = {}, mu = {}: {result:?}", l.format_scalar(&c), l.format_scalar(&mu)));
    }
    vec![check]
}

/// Criterion 3: trace-line ranges have exactly `q` points.
pub fn checks_trace_line(l: &ExtField<FiniteField>, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let g = l.ground();
    let q = g.order().expect("finite");
    let trace_one: Vec<_> = l.elements().expect("finite").into_iter().filter(|t| g.is_one(&l.trace(t))).collect();
    let mut check = Check::new(format!("{} |Num| = q on c1 + (c2 - c1) D", label(l)));
    for _ in 0..count {
        let m = match random_shape(l, Shape::TraceLine, None, rng, 0) {
            Ok(m) => m,
            Err(e) => {
                check.fail(e.to_string());
                continue;
            }
        };
        let Ok(eig) = eigen_2x2(l, &m) else {
            check.fail("eigenvalues");
            continue;
        };
        let (c1, c2) = (&eig.eigenvalues[0], &eig.eigenvalues[1]);
        let line = sorted(trace_one.iter().map(|t| l.add(c1, &l.mul(&l.sub(c2, c1), t))));
        let num = num_range_exhaustive(l, &m, DEFAULT_BUDGET).unwrap_or_default();
        check.expect(num.len() as u64 == q && num == line, || format!("{m:?}"));
    }
    vec![check]
}

/// Criterion 4: symbolic direct sums against enumeration on `L^3`.
pub fn checks_direct_sum(l: &ExtField<FiniteField>, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut check = Check::new(format!("{} (2+1) and (1+2) splits", label(l)));
    let ranges = |m: &ExtMatrix<FqElem>| -> crate::Result<_> {
        Ok((num_range_exhaustive(l, m, DEFAULT_BUDGET)?, num_range_zero_exhaustive(l, m, DEFAULT_BUDGET)?))
    };
    for i in 0..count {
        let (na, nb) = if i % 2 == 0 { (2, 1) } else { (1, 2) };
        let a = random_matrix(l, na, rng);
        let b = random_matrix(l, nb, rng);
        let result = (|| -> crate::Result<bool> {
            let ((num_a, zero_a), (num_b, zero_b)) = (ranges(&a)?, ranges(&b)?);
            let symbolic = direct_sum_symbolic(l, &num_a, &zero_a, &num_b, &zero_b);
            Ok(symbolic == num_range_exhaustive(l, &a.direct_sum(&b, &l.zero()), DEFAULT_BUDGET)?)
        })();
        check.expect(matches!(result, Ok(true)), || format!("{a:?} ⊕ {b:?}: {result:?}"));
    }
    vec![check]
}

/// Criterion 5: representatives of the five corank-1 cases.
pub fn checks_corank1(l: &ExtField<FiniteField>, n: usize, per_case: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let cases = [
        (1u8, None),
        (2, Some(Shape::TwoPoint)),
        (3, Some(Shape::CenterCircle)),
        (4, Some(Shape::TraceLine)),
        (5, Some(Shape::PuncturedCoset)),
    ];
    cases
        .into_iter()
        .map(|(case, shape)| {
            let mut check = Check::new(format!("{} n = {n} case {case}", label(l)));
            for _ in 0..per_case {
                let result = (|| -> crate::Result<bool> {
                    let m = random_corank1(l, n, shape, rng, 0)?;
                    let rep = classify_corank1(l, &m, DEFAULT_BUDGET)?;
                    Ok(rep.case == case && rep.range == num_range_exhaustive(l, &m, DEFAULT_BUDGET)?)
                })();
                check.expect(matches!(result, Ok(true)), || format!("{result:?}"));
            }
            check
        })
        .collect()
}

/// Criterion 6, pinned decisions over `Q(i)` and `Q(sqrt 5)`.
pub fn checks_delta_pinned() -> Vec<Check> {
    let qi = rational_ext(-1);
    let q5 = rational_ext(5);
    let int = |n: i64| BigRational::from_integer(n.into());
    let mut out = Vec::new();
    let v = Rationals::in_delta(&qi, &int(7), DEFAULT_BOUND);
    let mut c = Check::new("Q(i): 7 not in Delta, obstruction p=7");
    c.expect(v.answer == Answer::No && v.obstruction.as_deref() == Some("p=7"), || format!("{v:?}"));
    out.push(c);
    let v = Rationals::in_delta(&qi, &int(2), DEFAULT_BOUND);
    let mut c = Check::new("Q(i): 2 = N(1 + beta)");
    c.expect(v.is_yes() && v.verifies(&qi, &int(2)) && v.witness == vec![qi.from_ints(1, 1)], || format!("{v:?}"));
    out.push(c);
    let mut c = Check::new("Q(i): 0 not in Dhat_2");
    c.record(zero_in_hat_delta2(&qi, DEFAULT_BOUND).answer == Answer::No);
    out.push(c);
    let v = Rationals::in_delta(&q5, &int(-1), DEFAULT_BOUND);
    let mut c = Check::new("Q(sqrt 5): -1 = N(2 + beta)");
    c.expect(v.is_yes() && v.verifies(&q5, &int(-1)) && v.witness == vec![q5.from_ints(2, 1)], || format!("{v:?}"));
    out.push(c);
    let mut c = Check::new("Q(sqrt 5): 0 in Dhat_2");
    c.record(zero_in_hat_delta2(&q5, DEFAULT_BOUND).answer == Answer::Yes);
    out.push(c);
    out
}

fn squarefree_radicand(rng: &mut ChaCha8Rng) -> i64 {
    loop {
        let d: i64 = rng.gen_range(-30..=30);
        if d == 0 || d == 1 {
            continue;
        }
        let a = d.unsigned_abs();
        if (2..=5u64).all(|p| a % (p * p) != 0) {
            return d;
        }
    }
}

/// `k = x^2 - d y^2` for some `y` of height at most `height`.
fn brute_force_norm(d: i64, k: &BigRational, height: i64) -> bool {
    let d = BigRational::from_integer(d.into());
    for den in 1..=height {
        for num in 0..=height {
            if num::integer::gcd(num, den) != 1 && !(num == 0 && den == 1) {
                continue;
            }
            let y = BigRational::new(num.into(), den.into());
            if rat_sqrt(&(k + &d * &y * &y)).is_some() {
                return true;
            }
        }
    }
    false
}

/// Criterion 6, local-global decisions against a bounded brute force.
pub fn checks_delta_random(count: usize, height: i64, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut check = Check::new(format!("Hilbert symbols vs brute force (height <= {height})"));
    let mut confirmed = 0;
    let mut yes = 0;
    for _ in 0..count {
        let d = squarefree_radicand(rng);
        let l = rational_ext(d);
        let num = loop {
            let n: i64 = rng.gen_range(-50..=50);
            if n != 0 {
                break n;
            }
        };
        let k = BigRational::new(num.into(), rng.gen_range(1..=20i64).into());
        let v = Rationals::in_delta(&l, &k, DEFAULT_BOUND);
        let found = brute_force_norm(d, &k, height);
        if v.is_yes() {
            yes += 1;
            confirmed += u64::from(found);
        }
        let consistent = match v.answer {
            Answer::No => !found,
            Answer::Yes => v.witness.is_empty() || v.verifies(&l, &k),
            Answer::Unknown => false,
        };
        check.expect(consistent, || format!("d = {d}, k = {k}: {v:?}, brute force {found}"));
    }
    vec![check.clone().with_note(format!(
        "{}{confirmed} of {yes} Yes answers also found by brute force",
        check.note.map(|n| format!("{n}; ")).unwrap_or_default()
    ))]
}

/// Criterion 6 extras: `Dhat ∩ (1 - Dhat)` is large and `Delta_n` is closed under inverses.
pub fn checks_delta_structure(l: &ExtField<Rationals>, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let g = l.ground();
    let mut seg = Check::new(format!("{} {count} distinct segment parameters", label(l)));
    let pts = Rationals::segment_sample(l, count);
    let distinct: HashSet<_> = pts.iter().map(|p| p.t.clone()).collect();
    let witnessed = pts.iter().all(|p| l.norm(&p.w) == p.t && l.norm(&p.w_c) == g.sub(&g.one(), &p.t));
    seg.record(distinct.len() == count && witnessed);
    let mut inv = Check::new(format!("{} 1/k in Delta_n from a witness of k", label(l)));
    for i in 0..count.min(200) {
        let n = 2 + i % 3;
        let ws: Vec<_> = (0..n).map(|_| random_scalar(l, rng)).collect();
        let k = ws.iter().fold(g.zero(), |acc, w| g.add(&acc, &l.norm(w)));
        if g.is_zero(&k) {
            continue;
        }
        inv.record(matches!(inv_in_delta_n_check(l, &k, &ws), Ok((true, _))));
    }
    vec![seg, inv]
}

/// Criterion 7 over Q: many exact, distinct points per circle.
pub fn checks_circles_rational(l: &ExtField<Rationals>, circles: usize, points: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut check = Check::new(format!("{} {circles} circles x {points} points", label(l)));
    for _ in 0..circles {
        let center = random_scalar(l, rng);
        let b = random_nonzero_scalar(l, rng);
        let c = Circle::new(center, l.norm(&b));
        let pts: Vec<_> = match circle_points(l, &c, &b) {
            Ok(it) => it.take(points).collect(),
            Err(e) => {
                check.fail(e.to_string());
                continue;
            }
        };
        let distinct: HashSet<_> = pts.iter().collect();
        let ok = pts.len() == points && distinct.len() == points && pts.iter().all(|p| circle_contains(l, p, &c));
        check.expect(ok, || format!("radius^2 {}", c.squared_radius));
    }
    vec![check]
}

/// Criterion 7 over a finite field: every squared radius, against brute force.
pub fn checks_circles_finite(l: &ExtField<FiniteField>, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let g = l.ground();
    let els = l.elements().expect("finite");
    let mut check = Check::new(format!("{} all squared radii", label(l)));
    for k in g.elements().expect("finite") {
        let c = Circle::new(random_scalar(l, rng), k.clone());
        let brute: Vec<_> = els.iter().filter(|z| l.norm(&l.sub(z, &c.center)) == k).cloned().collect();
        let got = circle_point_set(l, &c).unwrap_or_default();
        check.expect(got == brute, || format!("radius^2 {}", g.format_elem(&k)));
    }
    vec![check]
}

/// Criterion 8: distinct-value witnesses for non-scalar matrices.
pub fn checks_singleton_witness(l: &ExtField<Rationals>, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut scalar = Check::new(format!("{} None exactly for scalar matrices", label(l)));
    for n in 1..=3 {
        for _ in 0..5 {
            let m = scalar_matrix(l, n, &random_scalar(l, rng));
            scalar.record(matches!(singleton_witness(l, &m, DEFAULT_BOUND), Ok(None)));
        }
    }
    let mut pairs = Check::new(format!("{} verified distinct-value pairs", label(l)));
    let mut minus_one = 0;
    for n in [2, 3] {
        for i in 0..count {
            // a third each: random, constant diagonal, constant diagonal plus antisymmetric
            let c = random_scalar(l, rng);
            let m = match i % 3 {
                0 => random_matrix(l, n, rng),
                1 => ExtMatrix::from_fn(n, |a, b| if a == b { c.clone() } else { random_scalar(l, rng) }),
                _ => {
                    let upper = random_matrix(l, n, rng);
                    ExtMatrix::from_fn(n, |a, b| match a.cmp(&b) {
                        std::cmp::Ordering::Equal => c.clone(),
                        std::cmp::Ordering::Less => upper.get(a, b).clone(),
                        std::cmp::Ordering::Greater => l.neg(upper.get(b, a)),
                    })
                }
            };
            if crate::linalg::is_scalar(l, &m).is_some() {
                continue;
            }
            match singleton_witness(l, &m, DEFAULT_BOUND) {
                Ok(Some(w)) => {
                    let unit = |u: &ExtVector<BigRational>| l.ground().is_one(&self_pairing(l, u));
                    let ok = unit(&w.u1)
                        && unit(&w.u2)
                        && quadratic_value(l, &m, &w.u1) == w.v1
                        && quadratic_value(l, &m, &w.u2) == w.v2
                        && w.v1 != w.v2;
                    minus_one += usize::from(w.branch == WitnessBranch::SquareComplement);
                    pairs.expect(ok, || format!("{m:?}"));
                }
                other => pairs.fail(format!("{m:?}: {other:?}")),
            }
        }
    }
    let mut branch = Check::new(format!("{} at least 10 instances of m_ji = -m_ij", label(l)));
    branch.record(minus_one >= 10);
    branch.note = Some(format!("{minus_one} instances"));
    vec![scalar, pairs, branch]
}

fn k_matrices<K: GroundField>(k: &K, n: usize) -> impl Iterator<Item = KMatrix<K::Elem>> + '_ {
    let els = k.elements().expect("finite");
    let q = els.len();
    (0..q.pow((n * n) as u32)).map(move |mut code| {
        KMatrix::from_fn(n, |_, _| {
            let a = els[code % q].clone();
            code /= q;
            a
        })
    })
}

fn random_k_matrix<K: GroundField>(k: &K, n: usize, rng: &mut ChaCha8Rng) -> KMatrix<K::Elem> {
    KMatrix::from_fn(n, |_, _| crate::gen::random_ground(k, rng))
}

/// Criterion 9: the K-numerical range.
pub fn checks_krange(rng: &mut ChaCha8Rng) -> Vec<Check> {
    let mut out = Vec::new();
    let f2 = FiniteField::prime(2).expect("prime");
    let f3 = FiniteField::prime(3).expect("prime");
    let f5 = FiniteField::prime(5).expect("prime");
    let f7 = FiniteField::prime(7).expect("prime");
    let f4 = FiniteField::new(2, 2, None).expect("F_4");
    let f8 = FiniteField::new(2, 3, None).expect("F_8");

    let mut anti = Check::new("antisymmetric => singleton, all 2x2 over F_5 and 3x3 over F_3");
    for (k, n) in [(&f5, 2), (&f3, 3)] {
        for m in k_matrices(k, n) {
            if let Some(c) = is_singleton_k(k, &m) {
                anti.expect(k_range_exhaustive(k, &m, DEFAULT_BUDGET).ok() == Some(vec![c]), || format!("{m:?}"));
            }
        }
    }
    out.push(anti);

    let mut forms = Check::new("M, symmetric and triangular forms agree, F_5 and F_7");
    for i in 0..100 {
        let k = if i % 2 == 0 { &f5 } else { &f7 };
        let m = random_k_matrix(k, 2 + i % 2, rng);
        let r = |m: &KMatrix<FqElem>| k_range_exhaustive(k, m, DEFAULT_BUDGET).ok();
        let sym = symmetrize(k, &m).ok();
        let ok = r(&m).is_some() && sym.as_ref().and_then(r) == r(&m) && r(&triangular_form(k, &m)) == r(&m);
        forms.expect(ok, || format!("{m:?}"));
    }
    out.push(forms);

    let mut suff = Check::new("char 2 structural test => singleton, all 2x2 and 3x3 over F_2");
    let mut nec = Check::new("char 2 singleton => structural test, all 2x2 and 3x3 over F_2").gap();
    let mut examples = 0;
    for n in [2, 3] {
        for m in k_matrices(&f2, n) {
            let range = k_range_exhaustive(&f2, &m, DEFAULT_BUDGET).unwrap_or_default();
            let structural = is_singleton_k(&f2, &m);
            if let Some(c) = &structural {
                suff.record(range == vec![*c]);
            }
            if range.len() == 1 {
                nec.record(structural.is_some());
                examples += usize::from(structural.is_none());
            }
        }
    }
    out.push(suff);
    nec.note = Some(format!("{examples} non-symmetric matrices with a one-point range, e.g. [[0,1],[0,0]]"));
    out.push(nec);

    let mut iff4 = Check::new("char 2 singleton <=> structural test over F_4");
    for m in k_matrices(&f4, 2) {
        let single = k_range_exhaustive(&f4, &m, DEFAULT_BUDGET).map(|r| r.len() == 1).unwrap_or(false);
        iff4.record(single == is_singleton_k(&f4, &m).is_some());
    }
    for _ in 0..200 {
        let m = random_k_matrix(&f4, 3, rng);
        let single = k_range_exhaustive(&f4, &m, DEFAULT_BUDGET).map(|r| r.len() == 1).unwrap_or(false);
        iff4.record(single == is_singleton_k(&f4, &m).is_some());
    }
    out.push(iff4);

    let mut reduce = Check::new("char 2 reduction agrees with enumeration, F_4 and F_8");
    let mut card = Check::new("char 2 non-singleton ranges have at least q/2 points, F_4 and F_8");
    let mut below_four = 0;
    for (k, q) in [(&f4, 4usize), (&f8, 8)] {
        for i in 0..100 {
            let m = random_k_matrix(k, 2 + i % 2, rng);
            let Ok(range) = k_range_exhaustive(k, &m, DEFAULT_BUDGET) else {
                reduce.fail("budget");
                continue;
            };
            let agrees = match char2_reduce(k, &m, DEFAULT_BUDGET).map(|r| r.classification) {
                Ok(KRangeResult::SingletonK { c }) => range == vec![c],
                Ok(KRangeResult::FullField) => range.len() == q,
                Ok(KRangeResult::FiniteSetK { points }) => points == range,
                _ => false,
            };
            reduce.expect(agrees, || format!("{m:?}"));
            if range.len() > 1 {
                card.record(2 * range.len() >= q);
                below_four += usize::from(range.len() < q.min(4));
            }
        }
    }
    out.push(reduce);
    card.note = Some(format!("{below_four} ranges below min(q, 4)"));
    out.push(card);

    let mut counter = Check::new("F_3 [[0,1],[0,0]]: one-point range, not antisymmetric");
    let j = KMatrix::from_rows(vec![vec![f3.zero(), f3.one()], vec![f3.zero(), f3.zero()]]).expect("2x2");
    counter.record(k_range_exhaustive(&f3, &j, DEFAULT_BUDGET).ok() == Some(vec![f3.zero()]) && is_singleton_k(&f3, &j).is_none());
    out.push(counter);

    let q = Rationals;
    let mut converse = Check::new("Q: not antisymmetric => two distinct sampled values");
    for i in 0..100 {
        let m = random_k_matrix(&q, 2 + i % 2, rng);
        if is_singleton_k(&q, &m).is_some() {
            continue;
        }
        converse.expect(k_distinct_values(&m, 50).is_some(), || format!("{m:?}"));
    }
    out.push(converse);
    out
}

/// Criterion 10 over a finite field: exhaustive set identities.
pub fn checks_properties_finite(l: &ExtField<FiniteField>, count: usize, rng: &mut ChaCha8Rng) -> Vec<Check> {
    let name = label(l);
    let mut affine_c = Check::new(format!("{name} Num(cM + dI) = c Num(M) + d"));
    let mut diag_c = Check::new(format!("{name} diagonal entries lie in Num(M)"));
    let mut dagger_c = Check::new(format!("{name} Num(M^dagger) = sigma(Num(M))"));
    let mut scale_c = Check::new(format!("{name} C_2(N(b) delta) = b C_2(delta)"));
    let els = l.elements().expect("finite");
    let pairs: Vec<ExtVector<FqElem>> =
        els.iter().flat_map(|x| els.iter().map(move |y| ExtVector(vec![x.clone(), y.clone()]))).collect();
    let g = l.ground();
    for i in 0..count {
        let m = random_matrix(l, 2 + usize::from(i % 10 == 0), rng);
        let Ok(num) = num_range_exhaustive(l, &m, DEFAULT_BUDGET) else {
            affine_c.fail("budget");
            continue;
        };
        let (c, d) = (random_scalar(l, rng), random_scalar(l, rng));
        let moved = sorted(num.iter().map(|z| l.add(&l.mul(&c, z), &d)));
        affine_c.record(num_range_exhaustive(l, &affine(l, &m, &c, &d), DEFAULT_BUDGET).ok() == Some(moved));
        diag_c.record((0..m.n()).all(|i| num.binary_search(m.get(i, i)).is_ok()));
        let conj = sorted(num.iter().map(|z| l.conj(z)));
        dagger_c.record(num_range_exhaustive(l, &dagger(l, &m), DEFAULT_BUDGET).ok() == Some(conj));
        let b = random_nonzero_scalar(l, rng);
        let delta = crate::gen::random_ground(g, rng);
        let sphere = |r: &<FiniteField as GroundField>::Elem| -> BTreeSet<ExtVector<FqElem>> {
            pairs.iter().filter(|u| self_pairing(l, u) == *r).cloned().collect()
        };
        let scaled: BTreeSet<_> = sphere(&delta).iter().map(|u| vec_scale(l, &b, u)).collect();
        scale_c.record(sphere(&g.mul(&l.norm(&b), &delta)) == scaled);
    }
    vec![affine_c, diag_c, dagger_c, scale_c]
}

/// Criterion 10 over Q: the same identities on exact samples.
pub fn checks_properties_rational(
    l: &ExtField<Rationals>,
    matrices: usize,
    per_matrix: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Check> {
    let name = label(l);
    let mut affine_c = Check::new(format!("{name} <u, (cM + dI) u> = c <u, M u> + d"));
    let mut diag_c = Check::new(format!("{name} <e_i, M e_i> = m_ii"));
    let mut dagger_c = Check::new(format!("{name} <u, M^dagger u> = sigma(<u, M u>)"));
    let mut scale_c = Check::new(format!("{name} <bu, bu> = N(b) <u, u>"));
    for i in 0..matrices {
        let n = 2 + i % 2;
        let m = random_matrix(l, n, rng);
        let (c, d) = (random_scalar(l, rng), random_scalar(l, rng));
        let shifted = affine(l, &m, &c, &d);
        let md = dagger(l, &m);
        for j in 0..n {
            diag_c.record(quadratic_value(l, &m, &basis_vector(l, n, j)) == *m.get(j, j));
        }
        let Ok(samples) = num_range_sample(l, &m, per_matrix) else {
            affine_c.fail("sampler");
            continue;
        };
        for (u, v) in samples {
            affine_c.record(quadratic_value(l, &shifted, &u) == l.add(&l.mul(&c, &v), &d));
            dagger_c.record(quadratic_value(l, &md, &u) == l.conj(&v));
            let b = random_nonzero_scalar(l, rng);
            let bu = vec_scale(l, &b, &u);
            scale_c.record(self_pairing(l, &bu) == l.ground().mul(&l.norm(&b), &self_pairing(l, &u)));
        }
    }
    vec![affine_c, diag_c, dagger_c, scale_c]
}

/// All ten criteria at the pinned sizes.
pub fn acceptance_suite(seed: u64) -> Vec<CriterionReport> {
    let (f9, f25, f49) = (finite_ext(3, 1), finite_ext(5, 1), finite_ext(7, 1));
    let (f4, f16) = (finite_ext(2, 1), finite_ext(2, 2));
    let (qi, q2, q5) = (rational_ext(-1), rational_ext(2), rational_ext(5));
    vec![
        criterion(1, "2x2 classification equals enumeration", seed, |rng| {
            [&f9, &f25, &f49].into_iter().flat_map(|l| checks_classifier(l, 200, rng)).collect()
        }),
        criterion(2, "isotropic defective matrices: c + mu Dhat without c", seed, |rng| {
            let mut v: Vec<_> = [&f9, &f25].into_iter().flat_map(|l| checks_isotropic_finite(l, 100, rng)).collect();
            v.extend(checks_isotropic_rational(&q5, 30, rng));
            v
        }),
        criterion(3, "trace lines have q points", seed, |rng| {
            [&f9, &f25, &f49, &f4, &f16].into_iter().flat_map(|l| checks_trace_line(l, 40, rng)).collect()
        }),
        criterion(4, "direct sums: symbolic union equals enumeration", seed, |rng| {
            [&f9, &f25].into_iter().flat_map(|l| checks_direct_sum(l, 50, rng)).collect()
        }),
        criterion(5, "corank-1 splitting, all five cases", seed, |rng| checks_corank1(&f9, 3, 20, rng)),
        criterion(6, "norm sets: pinned decisions and local-global agreement", seed, |rng| {
            let mut v = checks_delta_pinned();
            v.extend(checks_delta_random(500, 50, rng));
            v.extend(checks_delta_structure(&qi, 1000, rng));
            v.extend(checks_delta_structure(&q2, 1000, rng));
            v
        }),
        criterion(7, "circle points", seed, |rng| {
            let mut v = checks_circles_rational(&qi, 10, 1000, rng);
            v.extend(checks_circles_rational(&q2, 10, 1000, rng));
            for l in [&f9, &f25, &f4, &f16] {
                v.extend(checks_circles_finite(l, rng));
            }
            v
        }),
        criterion(8, "singleton witnesses in characteristic 0", seed, |rng| checks_singleton_witness(&qi, 100, rng)),
        criterion(9, "K-numerical range", seed, checks_krange),
        criterion(10, "affine, diagonal, dagger and scaling identities", seed, |rng| {
            let mut v = checks_properties_finite(&f9, 100, rng);
            v.extend(checks_properties_rational(&qi, 20, 50, rng));
            v
        }),
    ]
}

/// The criteria that make sense for one finite `L`.
pub fn finite_field_suite(l: &ExtField<FiniteField>, seed: u64) -> Vec<CriterionReport> {
    let n3 = l.ground().order().is_some_and(|q| q <= 7);
    let mut out = vec![
        criterion(1, "2x2 classification equals enumeration", seed, |rng| checks_classifier(l, 50, rng)),
        criterion(2, "isotropic defective matrices: c + mu Dhat without c", seed, |rng| {
            checks_isotropic_finite(l, 30, rng)
        }),
        criterion(3, "trace lines have q points", seed, |rng| checks_trace_line(l, 20, rng)),
        criterion(4, "direct sums: symbolic union equals enumeration", seed, |rng| checks_direct_sum(l, 20, rng)),
    ];
    if n3 {
        out.push(criterion(5, "corank-1 splitting, all five cases", seed, |rng| checks_corank1(l, 3, 10, rng)));
    }
    out.push(criterion(7, "circle points", seed, |rng| checks_circles_finite(l, rng)));
    out.push(criterion(10, "affine, diagonal, dagger and scaling identities", seed, |rng| {
        checks_properties_finite(l, 30, rng)
    }));
    out
}

/// The criteria that make sense for one `Q(sqrt d)`.
pub fn rational_suite(l: &ExtField<Rationals>, seed: u64) -> Vec<CriterionReport> {
    let mut out = Vec::new();
    if zero_in_hat_delta2(l, DEFAULT_BOUND).answer == Answer::Yes {
        out.push(criterion(2, "isotropic defective matrices: c + mu Dhat without c", seed, |rng| {
            checks_isotropic_rational(l, 20, rng)
        }));
    }
    out.push(criterion(6, "norm sets: local-global agreement", seed, |rng| {
        let d = l.d();
        let mut check = Check::new(format!("{} Hilbert symbols vs brute force", label(l)));
        for _ in 0..100 {
            let k = BigRational::new(rng.gen_range(-50..=50i64).into(), rng.gen_range(1..=20i64).into());
            if k.is_zero() {
                continue;
            }
            let v = Rationals::in_delta(l, &k, DEFAULT_BOUND);
            let small = d.abs() <= BigInt::from(1000);
            let found = small && brute_force_norm(i64::try_from(&d).unwrap_or(0), &k, 30);
            let ok = match v.answer {
                Answer::No => !found,
                Answer::Yes => v.witness.is_empty() || v.verifies(l, &k),
                Answer::Unknown => false,
            };
            check.expect(ok, || format!("k = {k}: {v:?}"));
        }
        let mut v = vec![check];
        v.extend(checks_delta_structure(l, 200, rng));
        v
    }));
    out.push(criterion(7, "circle points", seed, |rng| checks_circles_rational(l, 5, 300, rng)));
    out.push(criterion(8, "singleton witnesses in characteristic 0", seed, |rng| {
        checks_singleton_witness(l, 30, rng)
    }));
    out.push(criterion(10, "affine, diagonal, dagger and scaling identities", seed, |rng| {
        checks_properties_rational(l, 10, 30, rng)
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_norms() {
        let k = |n: i64| BigRational::from_integer(n.into());
        assert!(brute_force_norm(-1, &k(2), 5));
        assert!(!brute_force_norm(-1, &k(7), 20));
        assert!(brute_force_norm(5, &k(-1), 5));
        assert!(!brute_force_norm(-1, &k(-1), 20));
    }

    #[test]
    fn vacuous_checks_fail() {
        let c = Check::new("empty");
        assert!(!c.ok());
        let mut c = Check::new("one");
        c.record(true);
        assert!(c.ok());
        c.fail("bad");
        assert!(!c.ok());
        assert_eq!(c.note.as_deref(), Some("bad"));
    }

    #[test]
    fn small_finite_suite_passes() {
        let l = finite_ext(3, 1);
        for r in finite_field_suite(&l, 1) {
            assert!(r.passed(), "{}\n{}", r.summary_line(), r.detail_lines().join("\n"));
        }
    }

    #[test]
    fn rational_suite_passes() {
        for r in rational_suite(&rational_ext(-1), 1) {
            assert!(r.passed(), "{}\n{}", r.summary_line(), r.detail_lines().join("\n"));
        }
    }
}
