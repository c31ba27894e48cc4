//! Duals of extended narrow-sense BCH codes, realized directly as orthogonal
//! arrays: the rows are the evaluation vectors `x -> Tr(P(x))` over
//! `GF(q^m)` for all polynomials `P` of degree at most `s - 1`.
//!
//! Lagrange interpolation makes any `s` coordinates of such a row free, so
//! the array has strength `s`; Frobenius redundancy caps the dimension at
//! `m * alpha + 1` with `alpha = (s - 1) - floor((s - 1) / q)`.  Rather than
//! quotienting the polynomial space symbolically, the generator rows are
//! row-reduced over `GF(q)` and the dimension bound is asserted afterwards,
//! which keeps correctness independent of Frobenius bookkeeping.

use crate::field::{field_build, prime_power};
use crate::oa::{self, OrthogonalArray, Provenance, VerifyMode};
use crate::{Error, Result};

/// Options controlling the verification step of array constructors.
#[derive(Debug, Clone, Copy)]
pub struct ArrayBuildOptions {
    /// Operation budget for an exhaustive strength check.
    pub budget: u64,
    /// Fallback sample count when exhaustive is over budget.
    pub sampled_count: u64,
    pub seed: u64,
}

impl Default for ArrayBuildOptions {
    fn default() -> Self {
        ArrayBuildOptions { budget: 1_000_000_000, sampled_count: 20_000, seed: 0x0A }
    }
}

/// The exponent from the dimension bound: `alpha = (s-1) - floor((s-1)/q)`.
pub fn bch_alpha(q: u32, s: u32) -> u32 {
    (s - 1) - (s - 1) / q
}

/// Builds the length-`q^m` strength-`s` array of trace evaluations and
/// verifies the strength before labeling it.
pub fn bch_dual_array(q: u32, m: u32, s: u32) -> Result<OrthogonalArray> {
    bch_dual_array_with(q, m, s, &ArrayBuildOptions::default())
}

pub fn bch_dual_array_with(
    q: u32,
    m: u32,
    s: u32,
    opts: &ArrayBuildOptions,
) -> Result<OrthogonalArray> {
    let (p, e) = prime_power(q)
        .ok_or_else(|| Error::InvalidParameter(format!("{q} is not a prime power")))?;
    if s == 0 || m == 0 {
        return Err(Error::InvalidParameter("m and s must be positive".into()));
    }
    let big_order = (q as u64).checked_pow(m).filter(|&v| v <= 1 << 16).ok_or_else(|| {
        Error::InvalidParameter(format!("q^m = {q}^{m} exceeds the 2^16 size budget"))
    })?;
    let ell = big_order as usize;

    let big = field_build(p, e * m)?;
    let sub = field_build(p, e)?;
    let view = big.subfield(q)?;
    let basis = big.subfield_basis(q)?;

    // Generator rows: the constant function 1 and x -> Tr(c x^j) for c in a
    // GF(q)-basis and 1 <= j <= s - 1 (degrees capped by the field size).
    let mut generators: Vec<Vec<u8>> = vec![vec![1u8; ell]];
    let max_deg = (s - 1).min(big.q() - 1);
    for j in 1..=max_deg {
        for &c in &basis {
            let mut row = Vec::with_capacity(ell);
            for x in 0..big.q() {
                let val = big.mul(c, big.pow(x, j as u64));
                let tr = view.collapse(big.trace_raw(val, q))?;
                row.push(tr as u8);
            }
            generators.push(row);
        }
    }

    let reduced = oa::row_reduce(&generators, &sub);
    let dim = reduced.len() as u32;
    let alpha = bch_alpha(q, s);
    let bound = (m * alpha + 1).min(ell as u32);
    if dim > bound {
        return Err(Error::ConstructionCheck(format!(
            "BCH dual dimension {dim} exceeds the bound m*alpha+1 = {bound}"
        )));
    }

    // Enumerate the span, one basis vector at a time.
    let mut rows: Vec<u8> = vec![0u8; ell];
    for b in &reduced {
        let prev = rows.clone();
        for c in 1..q {
            for chunk in prev.chunks(ell) {
                rows.extend(
                    chunk
                        .iter()
                        .zip(b)
                        .map(|(&w, &bi)| sub.add(w as u32, sub.mul(c, bi as u32)) as u8),
                );
            }
        }
    }

    let mut array = OrthogonalArray::from_rows(q, ell, rows, Provenance::Bch { q, m, s })?;
    array.attach_linear(reduced, sub);

    let strength = s.min(ell as u32);
    let report = match oa::verify_strength(&array, strength, VerifyMode::Exhaustive, opts.budget) {
        Ok(r) => r,
        Err(Error::BudgetExceeded(_)) => oa::verify_strength(
            &array,
            strength,
            VerifyMode::Sampled { count: opts.sampled_count, seed: opts.seed },
            opts.budget,
        )?,
        Err(e) => return Err(e),
    };
    if !report.passes {
        return Err(Error::ConstructionCheck(format!(
            "BCH dual array failed its strength-{strength} verification"
        )));
    }
    array.set_strength(&report);
    Ok(array)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oa::{dual_distance, verify_strength, verify_strength_default};

    #[test]
    fn q2_m2_s3_is_even_weight_code() {
        let a = bch_dual_array(2, 2, 3).unwrap();
        assert_eq!(a.len(), 4);
        assert_eq!(a.rows_count(), 8);
        assert_eq!(a.strength(), Some(3));
        let mut rows: Vec<Vec<u8>> = (0..8).map(|r| a.row(r).to_vec()).collect();
        rows.sort();
        let mut expect: Vec<Vec<u8>> = (0..16u8)
            .filter(|v| v.count_ones() % 2 == 0)
            .map(|v| (0..4).map(|i| (v >> i) & 1).collect())
            .collect();
        expect.sort();
        assert_eq!(rows, expect);
    }

    #[test]
    fn q2_m5_s4_row_count_bound() {
        // alpha = 2, so at most 2^(2*5+1) = 2048 rows; the bound is attained.
        let a = bch_dual_array(2, 5, 4).unwrap();
        assert_eq!(a.len(), 32);
        assert_eq!(a.rows_count(), 2048);
        assert!(a.contains_all_ones());
        assert!(a.dual_is_zero_sum());
    }

    #[test]
    fn strength3_dimension_m_plus_1() {
        // q=2, s=3: dim <= m + 1, rows 2^(m+1), sharp for every m here
        for m in 2..=6 {
            let a = bch_dual_array(2, m, 3).unwrap();
            assert_eq!(a.rows_count(), 1 << (m + 1), "m={m}");
        }
    }

    #[test]
    fn kerdock_comparison_count_q2_m4_s5() {
        // the strength-5 dual of the [16, 16-2*4-1, 6] BCH code has 512 rows
        let a = bch_dual_array(2, 4, 5).unwrap();
        assert_eq!(a.rows_count(), 512);
        assert_eq!(a.dimension(), Some(9));
    }

    #[test]
    fn dual_distance_is_s_plus_1() {
        let a = bch_dual_array(2, 3, 3).unwrap();
        assert_eq!(dual_distance(&a, 1 << 24).unwrap(), 4);
    }

    #[test]
    fn strength_duality_boundary() {
        // passes at dual_distance - 1, fails at dual_distance
        let a = bch_dual_array(2, 3, 3).unwrap();
        let d = dual_distance(&a, 1 << 24).unwrap();
        assert!(verify_strength_default(&a, d - 1, VerifyMode::Exhaustive).unwrap().passes);
        assert!(!verify_strength_default(&a, d, VerifyMode::Exhaustive).unwrap().passes);
    }

    #[test]
    fn ternary_array_strength_verified() {
        let a = bch_dual_array(3, 2, 3).unwrap();
        assert_eq!(a.len(), 9);
        assert_eq!(a.q(), 3);
        assert!(a.rows_count() <= 3usize.pow(2 * 2 + 1));
        let rep = verify_strength(&a, 3, VerifyMode::Exhaustive, 10_000_000_000).unwrap();
        assert!(rep.passes);
    }

    #[test]
    fn gf4_array_builds() {
        // non-prime alphabet exercises the subfield collapse path
        let a = bch_dual_array(4, 2, 2).unwrap();
        assert_eq!(a.len(), 16);
        assert_eq!(a.q(), 4);
        assert!(a.strength().unwrap() >= 2);
    }

    #[test]
    fn size_budget_enforced() {
        assert!(bch_dual_array(2, 17, 3).is_err());
    }
}
