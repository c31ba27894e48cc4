//! Orthogonal arrays: storage, strength verification, projection (with
//! optional vector annihilation) and dual distance.
//!
//! An array is a multiset of rows over the alphabet `0..q`.  The strength
//! flag is only ever set after [`verify_strength`] has passed; constructions
//! that cannot afford an exhaustive check record a sampled certificate
//! instead, never an unverified claim.

use crate::field::FieldTable;
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// How a strength claim was checked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VerifyMode {
    /// Every `t`-subset of columns.
    Exhaustive,
    /// `count` uniformly random `t`-subsets drawn from the given seed.
    Sampled { count: u64, seed: u64 },
}

/// Outcome of a strength verification.
#[derive(Debug, Clone)]
pub struct StrengthReport {
    pub passes: bool,
    pub t: u32,
    pub mode: VerifyMode,
    /// Largest `|count - rows/q^t|` over all inspected projections.
    pub worst_deviation: f64,
    pub projections_checked: u64,
    pub first_failure: Option<FailedProjection>,
}

/// The first projection that was not constant-to-1.
#[derive(Debug, Clone)]
pub struct FailedProjection {
    pub columns: Vec<usize>,
    pub pattern: Vec<u8>,
    pub count: u64,
    pub expected: f64,
}

/// Construction label carried by an array.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Bch { q: u32, m: u32, s: u32 },
    Hadamard { order: usize },
    Kerdock { m: u32 },
    Projected,
    Custom,
}

/// Verification summary stored on the array once its strength flag is set.
#[derive(Debug, Clone)]
pub struct StrengthCert {
    pub strength: u32,
    pub mode: VerifyMode,
    pub worst_deviation: f64,
}

#[derive(Debug, Clone)]
pub struct OrthogonalArray {
    q: u32,
    len: usize,
    rows: Vec<u8>,
    rows_count: usize,
    strength: Option<u32>,
    verification: Option<StrengthCert>,
    /// Basis of the row space when the rows form (a uniform multiple of) a
    /// vector space over `GF(q)`, together with the field arithmetic.
    linear: Option<LinearStructure>,
    has_all_ones: bool,
    provenance: Provenance,
}

#[derive(Debug, Clone)]
pub struct LinearStructure {
    pub basis: Vec<Vec<u8>>,
    pub field: FieldTable,
}

impl OrthogonalArray {
    pub fn from_rows(q: u32, len: usize, rows: Vec<u8>, provenance: Provenance) -> Result<Self> {
        if !(2..=256).contains(&q) {
            return Err(Error::InvalidParameter(format!("alphabet size {q} out of range")));
        }
        if len == 0 || !rows.len().is_multiple_of(len) {
            return Err(Error::InvalidParameter("row data does not tile the length".into()));
        }
        if rows.iter().any(|&s| s as u32 >= q) {
            return Err(Error::InvalidParameter("symbol out of alphabet".into()));
        }
        let rows_count = rows.len() / len;
        let has_all_ones =
            (0..rows_count).any(|r| rows[r * len..(r + 1) * len].iter().all(|&s| s == 1));
        Ok(OrthogonalArray {
            q,
            len,
            rows,
            rows_count,
            strength: None,
            verification: None,
            linear: None,
            has_all_ones,
            provenance,
        })
    }

    pub(crate) fn attach_linear(&mut self, basis: Vec<Vec<u8>>, field: FieldTable) {
        debug_assert_eq!(field.q(), self.q);
        self.linear = Some(LinearStructure { basis, field });
    }

    /// Records a passed verification; panics on an attempt to record a failed
    /// one (callers must never do that).
    pub(crate) fn set_strength(&mut self, report: &StrengthReport) {
        assert!(report.passes, "attempted to set strength from a failed report");
        self.strength = Some(report.t);
        self.verification = Some(StrengthCert {
            strength: report.t,
            mode: report.mode,
            worst_deviation: report.worst_deviation,
        });
    }

    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.rows_count == 0
    }
    pub fn rows_count(&self) -> usize {
        self.rows_count
    }
    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i * self.len..(i + 1) * self.len]
    }
    pub fn rows_flat(&self) -> &[u8] {
        &self.rows
    }
    /// Verified strength, if any.
    pub fn strength(&self) -> Option<u32> {
        self.strength
    }
    pub fn verification(&self) -> Option<&StrengthCert> {
        self.verification.as_ref()
    }
    pub fn is_linear(&self) -> bool {
        self.linear.is_some()
    }
    pub fn linear(&self) -> Option<&LinearStructure> {
        self.linear.as_ref()
    }
    pub fn contains_all_ones(&self) -> bool {
        self.has_all_ones
    }
    /// For linear arrays: the dual code is zero-sum iff the array contains
    /// the all-ones vector.
    pub fn dual_is_zero_sum(&self) -> bool {
        self.is_linear() && self.has_all_ones
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Basis dimension for linear arrays.
    pub fn dimension(&self) -> Option<usize> {
        self.linear.as_ref().map(|l| l.basis.len())
    }

    /// True if the row multiset is invariant under adding the all-ones
    /// vector (mod q); structural requirement for the even-q symmetric
    /// thinning mode with non-linear arrays.
    pub fn closed_under_all_ones_shift(&self) -> bool {
        let mut set: HashMap<&[u8], i64> = HashMap::new();
        for i in 0..self.rows_count {
            *set.entry(self.row(i)).or_insert(0) += 1;
        }
        let mut shifted = vec![0u8; self.len];
        for i in 0..self.rows_count {
            for (d, &s) in shifted.iter_mut().zip(self.row(i)) {
                *d = ((s as u32 + 1) % self.q) as u8;
            }
            match set.get(shifted.as_slice()) {
                Some(&c) if c > 0 => {}
                _ => return false,
            }
        }
        true
    }
}

/// Verifies the constant-to-1 property of every (or `count` sampled)
/// `t`-column projection.
///
/// Exhaustive mode refuses to start if `C(l, t) * q^t * rows` exceeds
/// `budget` (default `1e9` via [`verify_strength_default`]).
pub fn verify_strength(
    oa: &OrthogonalArray,
    t: u32,
    mode: VerifyMode,
    budget: u64,
) -> Result<StrengthReport> {
    if t == 0 {
        return Ok(StrengthReport {
            passes: true,
            t,
            mode,
            worst_deviation: 0.0,
            projections_checked: 0,
            first_failure: None,
        });
    }
    if (t as usize) > oa.len {
        return Err(Error::InvalidParameter(format!(
            "strength {t} exceeds array length {}",
            oa.len
        )));
    }
    let qt = (oa.q as u128).pow(t);
    match mode {
        VerifyMode::Exhaustive => {
            let cost = binomial_u128(oa.len as u128, t as u128)
                .saturating_mul(qt)
                .saturating_mul(oa.rows_count as u128);
            if cost > budget as u128 {
                return Err(Error::BudgetExceeded(format!(
                    "exhaustive strength-{t} check needs ~{cost} operations (budget {budget}); use sampled mode"
                )));
            }
            verify_exhaustive_impl(oa, t, mode)
        }
        VerifyMode::Sampled { count, seed } => verify_sampled_impl(oa, t, count, seed, mode),
    }
}

/// [`verify_strength`] with the default operation budget of `10^9`.
pub fn verify_strength_default(
    oa: &OrthogonalArray,
    t: u32,
    mode: VerifyMode,
) -> Result<StrengthReport> {
    verify_strength(oa, t, mode, 1_000_000_000)
}

fn verify_exhaustive_impl(oa: &OrthogonalArray, t: u32, mode: VerifyMode) -> Result<StrengthReport> {
    let kernel = ProjectionKernel::new(oa);
    let mut worst = 0.0f64;
    let mut first_failure = None;
    let mut checked = 0u64;
    let mut cols: Vec<usize> = (0..t as usize).collect();
    loop {
        checked += 1;
        let outcome = kernel.check(&cols, t);
        if outcome.deviation > worst {
            worst = outcome.deviation;
        }
        if first_failure.is_none() {
            if let Some(f) = outcome.failure {
                first_failure = Some(f);
            }
        }
        if !advance_combination(&mut cols, oa.len) {
            break;
        }
    }
    Ok(StrengthReport {
        passes: first_failure.is_none(),
        t,
        mode,
        worst_deviation: worst,
        projections_checked: checked,
        first_failure,
    })
}

fn verify_sampled_impl(
    oa: &OrthogonalArray,
    t: u32,
    count: u64,
    seed: u64,
    mode: VerifyMode,
) -> Result<StrengthReport> {
    let kernel = ProjectionKernel::new(oa);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut first_failure = None;
    for _ in 0..count {
        let mut cols = sample_subset(&mut rng, oa.len, t as usize);
        cols.sort_unstable();
        let outcome = kernel.check(&cols, t);
        if outcome.deviation > worst {
            worst = outcome.deviation;
        }
        if first_failure.is_none() {
            if let Some(f) = outcome.failure {
                first_failure = Some(f);
            }
        }
    }
    Ok(StrengthReport {
        passes: first_failure.is_none(),
        t,
        mode,
        worst_deviation: worst,
        projections_checked: count,
        first_failure,
    })
}

struct ProjectionOutcome {
    deviation: f64,
    failure: Option<FailedProjection>,
}

/// Per-subset check kernel; picks the cheapest faithful strategy available.
enum ProjectionKernel<'a> {
    /// Linear arrays: the projection onto columns `I` is constant-to-1 iff
    /// the basis columns `I` have full rank `t`; counts follow exactly from
    /// the rank, so this is the same exhaustive check computed in closed
    /// form.
    LinearRank { oa: &'a OrthogonalArray, ls: &'a LinearStructure },
    /// Binary arrays: bit-plane character sums, inverted by a Walsh-Hadamard
    /// transform into exact pattern counts.
    BitPlanes { oa: &'a OrthogonalArray, planes: Vec<Vec<u64>> },
    /// Anything else: direct tally.
    Direct { oa: &'a OrthogonalArray },
}

impl<'a> ProjectionKernel<'a> {
    fn new(oa: &'a OrthogonalArray) -> Self {
        if let Some(ls) = oa.linear.as_ref() {
            // Uniform row multiplicity is implied by linearity; verify the
            // cardinality bookkeeping before trusting the rank shortcut.
            let d = ls.basis.len() as u32;
            if let Some(span) = (oa.q as u128).checked_pow(d) {
                if span <= oa.rows_count as u128 && (oa.rows_count as u128).is_multiple_of(span) {
                    return ProjectionKernel::LinearRank { oa, ls };
                }
            }
        }
        if oa.q == 2 {
            let words = oa.rows_count.div_ceil(64);
            let mut planes = vec![vec![0u64; words]; oa.len];
            for r in 0..oa.rows_count {
                let row = &oa.rows[r * oa.len..(r + 1) * oa.len];
                for (c, &s) in row.iter().enumerate() {
                    if s == 1 {
                        planes[c][r >> 6] |= 1u64 << (r & 63);
                    }
                }
            }
            return ProjectionKernel::BitPlanes { oa, planes };
        }
        ProjectionKernel::Direct { oa }
    }

    fn check(&self, cols: &[usize], t: u32) -> ProjectionOutcome {
        match self {
            ProjectionKernel::LinearRank { oa, ls } => rank_check(oa, ls, cols, t),
            ProjectionKernel::BitPlanes { oa, planes } => bitplane_check(oa, planes, cols, t),
            ProjectionKernel::Direct { oa } => direct_check(oa, cols, t),
        }
    }
}

fn direct_check(oa: &OrthogonalArray, cols: &[usize], t: u32) -> ProjectionOutcome {
    let qt = (oa.q as u64).pow(t);
    let mut counts = vec![0u64; qt as usize];
    for r in 0..oa.rows_count {
        let row = &oa.rows[r * oa.len..(r + 1) * oa.len];
        let mut idx = 0u64;
        for &c in cols.iter().rev() {
            idx = idx * oa.q as u64 + row[c] as u64;
        }
        counts[idx as usize] += 1;
    }
    judge_counts(oa, cols, &counts, qt)
}

fn bitplane_check(
    oa: &OrthogonalArray,
    planes: &[Vec<u64>],
    cols: &[usize],
    t: u32,
) -> ProjectionOutcome {
    let n = oa.rows_count as i64;
    let masks = 1usize << t;
    let words = planes.first().map_or(0, |p| p.len());
    let mut f = vec![0i64; masks];
    f[0] = n;
    let mut acc = vec![0u64; words];
    let mut gray_prev = 0usize;
    for k in 1..masks {
        let gray = k ^ (k >> 1);
        let toggled = gray ^ gray_prev;
        gray_prev = gray;
        let bit = toggled.trailing_zeros() as usize;
        let plane = &planes[cols[bit]];
        let mut ones = 0i64;
        for (a, &p) in acc.iter_mut().zip(plane) {
            *a ^= p;
            ones += a.count_ones() as i64;
        }
        f[gray] = n - 2 * ones;
    }
    // Inverse WHT turns character sums into pattern counts (times 2^t).
    let mut h = 1usize;
    while h < masks {
        for i in (0..masks).step_by(h * 2) {
            for j in i..i + h {
                let (x, y) = (f[j], f[j + h]);
                f[j] = x + y;
                f[j + h] = x - y;
            }
        }
        h *= 2;
    }
    let qt = 1u64 << t;
    let counts: Vec<u64> = f
        .iter()
        .map(|&v| {
            debug_assert!(v >= 0 && v % masks as i64 == 0);
            (v / masks as i64) as u64
        })
        .collect();
    judge_counts(oa, cols, &counts, qt)
}

fn rank_check(oa: &OrthogonalArray, ls: &LinearStructure, cols: &[usize], t: u32) -> ProjectionOutcome {
    let d = ls.basis.len();
    let t_us = t as usize;
    let rank = if oa.q == 2 {
        let mut rows: Vec<u64> = ls
            .basis
            .iter()
            .map(|b| {
                let mut w = 0u64;
                for (j, &c) in cols.iter().enumerate() {
                    if b[c] == 1 {
                        w |= 1 << j;
                    }
                }
                w
            })
            .collect();
        let mut rank = 0usize;
        for bit in 0..t_us {
            if let Some(p) = (rank..d).find(|&i| rows[i] >> bit & 1 == 1) {
                rows.swap(rank, p);
                let pivot = rows[rank];
                for (i, row) in rows.iter_mut().enumerate() {
                    if i != rank && *row >> bit & 1 == 1 {
                        *row ^= pivot;
                    }
                }
                rank += 1;
            }
        }
        rank
    } else {
        let f = &ls.field;
        let mut mat: Vec<Vec<u8>> = ls
            .basis
            .iter()
            .map(|b| cols.iter().map(|&c| b[c]).collect())
            .collect();
        let mut rank = 0usize;
        for col in 0..t_us {
            if let Some(p) = (rank..d).find(|&i| mat[i][col] != 0) {
                mat.swap(rank, p);
                let inv = f.inv(mat[rank][col] as u32).unwrap();
                for v in mat[rank].iter_mut() {
                    *v = f.mul(*v as u32, inv) as u8;
                }
                for i in 0..d {
                    if i != rank && mat[i][col] != 0 {
                        let factor = mat[i][col] as u32;
                        for j in 0..t_us {
                            let sub = f.mul(factor, mat[rank][j] as u32);
                            mat[i][j] = f.sub(mat[i][j] as u32, sub) as u8;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    };
    let n = oa.rows_count as f64;
    let qt = (oa.q as f64).powi(t as i32);
    let expected = n / qt;
    if rank == t_us {
        ProjectionOutcome { deviation: 0.0, failure: None }
    } else {
        // Counts are N/q^rank on the q^rank image patterns and 0 elsewhere.
        let hit = n / (oa.q as f64).powi(rank as i32);
        ProjectionOutcome {
            deviation: hit - expected,
            failure: Some(FailedProjection {
                columns: cols.to_vec(),
                pattern: vec![0; t_us],
                count: hit as u64,
                expected,
            }),
        }
    }
}

fn judge_counts(oa: &OrthogonalArray, cols: &[usize], counts: &[u64], qt: u64) -> ProjectionOutcome {
    let expected = oa.rows_count as f64 / qt as f64;
    let mut deviation = 0.0f64;
    let mut failure = None;
    for (pat, &c) in counts.iter().enumerate() {
        let dev = (c as f64 - expected).abs();
        if dev > deviation {
            deviation = dev;
        }
        if dev > 1e-9 && failure.is_none() {
            let mut digits = Vec::with_capacity(cols.len());
            let mut v = pat as u64;
            for _ in 0..cols.len() {
                digits.push((v % oa.q as u64) as u8);
                v /= oa.q as u64;
            }
            failure = Some(FailedProjection {
                columns: cols.to_vec(),
                pattern: digits,
                count: c,
                expected,
            });
        }
    }
    ProjectionOutcome { deviation, failure }
}

/// Restriction to the given (distinct) columns; duplicate projected rows are
/// retained as multiplicity, so strength is preserved exactly.
pub fn project_array(oa: &OrthogonalArray, keep: &[usize]) -> Result<OrthogonalArray> {
    let mut seen = vec![false; oa.len];
    for &c in keep {
        if c >= oa.len || seen[c] {
            return Err(Error::InvalidParameter(format!("bad projection column {c}")));
        }
        seen[c] = true;
    }
    if keep.is_empty() {
        return Err(Error::InvalidParameter("empty projection".into()));
    }
    let mut rows = Vec::with_capacity(oa.rows_count * keep.len());
    for r in 0..oa.rows_count {
        let row = oa.row(r);
        rows.extend(keep.iter().map(|&c| row[c]));
    }
    let mut out = OrthogonalArray::from_rows(oa.q, keep.len(), rows, Provenance::Projected)?;
    if let Some(ls) = &oa.linear {
        let projected: Vec<Vec<u8>> = ls
            .basis
            .iter()
            .map(|b| keep.iter().map(|&c| b[c]).collect())
            .collect();
        let basis = row_reduce(&projected, &ls.field);
        out.attach_linear(basis, ls.field.clone());
    }
    if let Some(s) = oa.strength {
        out.strength = Some(s.min(keep.len() as u32));
        out.verification = oa.verification.clone();
    }
    Ok(out)
}

/// Projection onto `n` columns chosen inside the common zero set of the
/// kill vectors (lexicographically first, for determinism).  Every kill
/// vector must lie in the (linear) array; the image then collapses
/// `q^rank(kills)`-to-1 and duplicates are merged.
pub fn project_annihilating(
    oa: &OrthogonalArray,
    n: usize,
    kills: &[Vec<u8>],
) -> Result<OrthogonalArray> {
    let ls = oa.linear.as_ref().ok_or_else(|| {
        Error::InvalidParameter("annihilating projection needs a linear array".into())
    })?;
    for k in kills {
        if k.len() != oa.len {
            return Err(Error::InvalidParameter("kill vector has wrong length".into()));
        }
        if !in_span(k, &ls.basis, &ls.field) {
            return Err(Error::InvalidParameter("kill vector is not a row of the array".into()));
        }
    }
    let zero_cols: Vec<usize> = (0..oa.len)
        .filter(|&c| kills.iter().all(|k| k[c] == 0))
        .collect();
    if zero_cols.len() < n {
        return Err(Error::Infeasible(format!(
            "common zero set has {} columns, need {n}",
            zero_cols.len()
        )));
    }
    let keep = &zero_cols[..n];
    let projected = project_array(oa, keep)?;

    // Merge duplicates; multiplicities must be uniform (cosets of the kernel).
    let rank = row_reduce(kills, &ls.field).len();
    let mut order: Vec<&[u8]> = Vec::new();
    let mut mult: HashMap<&[u8], u64> = HashMap::new();
    for r in 0..projected.rows_count() {
        let row = projected.row(r);
        let e = mult.entry(row).or_insert(0);
        if *e == 0 {
            order.push(row);
        }
        *e += 1;
    }
    let expected_mult = (oa.q as u64).pow(rank as u32);
    if mult.values().any(|&m| m % expected_mult != 0) {
        return Err(Error::ConstructionCheck(
            "projection multiplicities are not uniform over the killed subgroup".into(),
        ));
    }
    let mut rows = Vec::with_capacity(order.len() * n);
    for row in &order {
        rows.extend_from_slice(row);
    }
    let strength = projected.strength();
    let verification = projected.verification().cloned();
    let lsp = projected.linear().cloned();
    let mut out = OrthogonalArray::from_rows(oa.q, n, rows, Provenance::Projected)?;
    if let Some(lsp) = lsp {
        out.attach_linear(lsp.basis, lsp.field);
    }
    out.strength = strength;
    out.verification = verification;
    Ok(out)
}

/// Minimum weight of the dual code of a linear array; the trivial dual gets
/// the conventional value `len + 1`.
pub fn dual_distance(oa: &OrthogonalArray, budget: u64) -> Result<u32> {
    let ls = oa
        .linear
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("dual distance needs a linear array".into()))?;
    if oa.len > 64 {
        return Err(Error::BudgetExceeded("dual enumeration limited to length <= 64".into()));
    }
    let null = nullspace(&ls.basis, oa.len, &ls.field);
    let dual_dim = null.len() as u32;
    if dual_dim == 0 {
        return Ok(oa.len as u32 + 1);
    }
    let total = (oa.q as u128).pow(dual_dim);
    if total > budget as u128 {
        return Err(Error::BudgetExceeded(format!("dual has {total} words")));
    }
    let f = &ls.field;
    // Enumerate the span by extending one basis vector at a time.
    let mut words: Vec<Vec<u8>> = vec![vec![0u8; oa.len]];
    for b in &null {
        let prev = words.clone();
        for c in 1..oa.q {
            for w in &prev {
                let scaled: Vec<u8> = w
                    .iter()
                    .zip(b)
                    .map(|(&wi, &bi)| f.add(wi as u32, f.mul(c, bi as u32)) as u8)
                    .collect();
                words.push(scaled);
            }
        }
    }
    let min_wt = words
        .iter()
        .skip(1)
        .map(|w| w.iter().filter(|&&s| s != 0).count())
        .min()
        .unwrap() as u32;
    Ok(min_wt)
}

/// Row-reduce vectors over `GF(q)`; returns an echelon basis of their span.
pub fn row_reduce(vectors: &[Vec<u8>], f: &FieldTable) -> Vec<Vec<u8>> {
    let mut basis: Vec<Vec<u8>> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        for b in &basis {
            let lead = b.iter().position(|&x| x != 0).unwrap();
            if v[lead] != 0 {
                let factor = v[lead] as u32;
                for (vi, &bi) in v.iter_mut().zip(b) {
                    *vi = f.sub(*vi as u32, f.mul(factor, bi as u32)) as u8;
                }
            }
        }
        if let Some(lead) = v.iter().position(|&x| x != 0) {
            let inv = f.inv(v[lead] as u32).unwrap();
            for vi in v.iter_mut() {
                *vi = f.mul(*vi as u32, inv) as u8;
            }
            basis.push(v);
            basis.sort_by_key(|b| b.iter().position(|&x| x != 0).unwrap());
        }
    }
    basis
}

pub(crate) fn in_span(v: &[u8], basis: &[Vec<u8>], f: &FieldTable) -> bool {
    let mut v = v.to_vec();
    for b in basis {
        let lead = b.iter().position(|&x| x != 0).unwrap();
        if v[lead] != 0 {
            let factor = v[lead] as u32;
            for (vi, &bi) in v.iter_mut().zip(b) {
                *vi = f.sub(*vi as u32, f.mul(factor, bi as u32)) as u8;
            }
        }
    }
    v.iter().all(|&x| x == 0)
}

/// Nullspace basis of the row space spanned by `basis` inside `GF(q)^len`.
fn nullspace(basis: &[Vec<u8>], len: usize, f: &FieldTable) -> Vec<Vec<u8>> {
    let reduced = row_reduce(basis, f);
    let pivots: Vec<usize> = reduced
        .iter()
        .map(|b| b.iter().position(|&x| x != 0).unwrap())
        .collect();
    let free: Vec<usize> = (0..len).filter(|c| !pivots.contains(c)).collect();
    let mut out = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut w = vec![0u8; len];
        w[fc] = 1;
        // Back-substitute the pivot coordinates so that row . w = 0; the
        // basis is in echelon (not fully reduced) form, so go bottom-up.
        for (row, &pc) in reduced.iter().zip(&pivots).rev() {
            let mut dot = 0u32;
            for c in 0..len {
                if c != pc && w[c] != 0 {
                    dot = f.add(dot, f.mul(row[c] as u32, w[c] as u32));
                }
            }
            w[pc] = f.neg(dot) as u8;
        }
        out.push(w);
    }
    out
}

pub(crate) fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut num = 1u128;
    for i in 0..k {
        num = num.saturating_mul(n - i) / (i + 1);
    }
    num
}

fn advance_combination(cols: &mut [usize], n: usize) -> bool {
    let t = cols.len();
    let mut i = t;
    while i > 0 {
        i -= 1;
        if cols[i] < n - (t - i) {
            cols[i] += 1;
            for j in i + 1..t {
                cols[j] = cols[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn sample_subset(rng: &mut ChaCha8Rng, n: usize, t: usize) -> Vec<usize> {
    // Floyd's algorithm: t distinct values in 0..n.
    let mut out: Vec<usize> = Vec::with_capacity(t);
    for j in (n - t)..n {
        let r = rng.gen_range(0..=j);
        if out.contains(&r) {
            out.push(j);
        } else {
            out.push(r);
        }
    }
    out
}
