//! The thinning engine: replaces the `q^l` points of an equal-weight
//! convolution by the rows of an orthogonal array over `GF(q)`.
//!
//! Each of the `l` factors is a labeled equal-weight `q`-point set in its
//! own coordinates; a row `(a_1, ..., a_l)` maps to the point
//! `sum_i labeling_i(a_i)` with weight `1/rows`.  An array of strength `t`
//! preserves cubature degree `t`; when `t` is odd and every labeling is in a
//! symmetric mode (negation-compatible for odd `q`, all-ones-shift for even
//! `q`), strength `t - 1` suffices because the thinned set is centrally
//! symmetric and odd polynomials drop out.

use crate::field::prime_power;
use crate::formula::{CubatureFormula, ThinProvenance};
use crate::measure::MeasureSpec;
use crate::oa::OrthogonalArray;
use crate::quad::Quadrature1D;
use crate::{Error, Result};
use std::collections::HashMap;

/// Labeling mode of a factor, matching the symmetric refinements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryMode {
    /// Plain bijection; no structure assumed.
    None,
    /// `labeling(-a) = -labeling(a)` (odd q).
    OddNegation,
    /// `labeling(a + 1) = -labeling(a)` (even q).
    EvenAddOne,
}

/// An equal-weight factor: `q` offset vectors on a sparse coordinate
/// support, indexed by the elements of `GF(q)`.
#[derive(Debug, Clone)]
pub struct LabeledFactor {
    /// Coordinates this factor writes to.
    pub support: Vec<usize>,
    /// `offsets[a]` is the offset vector (length = support length) assigned
    /// to field element `a`.
    pub offsets: Vec<Vec<f64>>,
    pub symmetry: SymmetryMode,
}

impl LabeledFactor {
    /// Single-coordinate factor.
    pub fn on_coordinate(coord: usize, values: Vec<f64>, symmetry: SymmetryMode) -> Self {
        LabeledFactor {
            support: vec![coord],
            offsets: values.into_iter().map(|v| vec![v]).collect(),
            symmetry,
        }
    }

    fn check_symmetry(&self, q: u32) -> Result<()> {
        let tol = 0.0; // labelings are built by negating the same floats
        match self.symmetry {
            SymmetryMode::None => Ok(()),
            SymmetryMode::OddNegation => {
                if q.is_multiple_of(2) {
                    return Err(Error::InvalidParameter(
                        "odd-negation labeling on an even alphabet".into(),
                    ));
                }
                let (p, e) = prime_power(q).unwrap();
                for a in 0..q {
                    let na = neg_index(a, p, e);
                    if !offsets_negated(&self.offsets[a as usize], &self.offsets[na as usize], tol)
                    {
                        return Err(Error::InvalidParameter(format!(
                            "labeling({na}) != -labeling({a})"
                        )));
                    }
                }
                Ok(())
            }
            SymmetryMode::EvenAddOne => {
                if q % 2 == 1 {
                    return Err(Error::InvalidParameter(
                        "add-one labeling on an odd alphabet".into(),
                    ));
                }
                for a in 0..q {
                    // characteristic 2: adding the field element 1 flips the
                    // low base-p digit, i.e. XOR 1 on the index
                    let a1 = a ^ 1;
                    if !offsets_negated(&self.offsets[a as usize], &self.offsets[a1 as usize], tol)
                    {
                        return Err(Error::InvalidParameter(format!(
                            "labeling({a1}) != -labeling({a})"
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

fn offsets_negated(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(&x, &y)| (x + y).abs() <= tol)
}

/// Additive negation of a field-element index in digit representation.
fn neg_index(a: u32, p: u32, e: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    let mut a = a;
    for _ in 0..e {
        out += ((p - a % p) % p) * scale;
        a /= p;
        scale *= p;
    }
    out
}

/// Thins the convolution of `factors` (whose full product is assumed exact
/// to degree `t` for `measure`; record it in the provenance quads) down to
/// the rows of `array`.
///
/// Requires verified array strength `>= t`, or `>= t - 1` when `t` is odd
/// and every factor is in a symmetric mode compatible with the array (odd
/// `q`: a linear array; even `q`: one whose rows are closed under the
/// all-ones shift).
pub fn thin_convolution(
    factors: &[LabeledFactor],
    array: &OrthogonalArray,
    measure: MeasureSpec,
    t: u32,
    coord_quads: Vec<(usize, Quadrature1D)>,
) -> Result<CubatureFormula> {
    let q = array.q();
    let ell = array.len();
    if factors.len() != ell {
        return Err(Error::InvalidParameter(format!(
            "{} factors for an array of length {ell}",
            factors.len()
        )));
    }
    let dim = measure.ambient_dim();
    for f in factors {
        if f.offsets.len() != q as usize {
            return Err(Error::InvalidParameter("factor size != alphabet size".into()));
        }
        if f.support.iter().any(|&c| c >= dim) {
            return Err(Error::InvalidParameter("factor support outside dimension".into()));
        }
        for o in &f.offsets {
            if o.len() != f.support.len() {
                return Err(Error::InvalidParameter("offset/support length mismatch".into()));
            }
        }
        f.check_symmetry(q)?;
    }

    let strength = array.strength().ok_or_else(|| {
        Error::InvalidParameter("array has no verified strength; verify it first".into())
    })?;
    let symmetric_ok = t % 2 == 1
        && factors.iter().all(|f| f.symmetry != SymmetryMode::None)
        && if q % 2 == 1 { array.is_linear() } else { array.contains_all_ones() };
    // A pulled-back degree-t monomial splits into terms that each depend on
    // at most min(t, l) array coordinates, so strength demands cap at l.
    let need_plain = t.min(ell as u32);
    let need_sym = (t - 1).min(ell as u32);
    let required = if strength >= need_plain {
        need_plain
    } else if symmetric_ok && strength >= need_sym {
        need_sym
    } else {
        return Err(Error::InvalidParameter(format!(
            "array strength {strength} insufficient for degree {t} (symmetric mode {})",
            if symmetric_ok { "available" } else { "unavailable" }
        )));
    };

    // Extra guard for the even-q symmetric route with non-linear arrays: the
    // row multiset must actually be closed under the all-ones shift.
    if required == t - 1 && q.is_multiple_of(2) && !array.is_linear() && !array.closed_under_all_ones_shift()
    {
        return Err(Error::InvalidParameter(
            "array is not invariant under the all-ones shift".into(),
        ));
    }

    let rows = array.rows_count();
    let w = 1.0 / rows as f64;
    // Merge bit-identical duplicate points (rows in the same projection
    // coset sum the same offsets in the same order).
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut points: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut scratch = vec![0.0f64; dim];
    for r in 0..rows {
        let row = array.row(r);
        scratch.iter_mut().for_each(|v| *v = 0.0);
        for (f, &sym) in factors.iter().zip(row) {
            let off = &f.offsets[sym as usize];
            for (&c, &v) in f.support.iter().zip(off) {
                scratch[c] += v;
            }
        }
        let key: Vec<u64> =
            scratch.iter().map(|&v| (if v == 0.0 { 0.0f64 } else { v }).to_bits()).collect();
        match index.get(&key) {
            Some(&i) => weights[i] += w,
            None => {
                index.insert(key, weights.len());
                weights.push(w);
                points.extend_from_slice(&scratch);
            }
        }
    }

    let mut formula = CubatureFormula::new(measure, points, weights, t)?;
    formula.provenance = Some(ThinProvenance {
        coord_quads,
        factors: factors.to_vec(),
        array: array.clone(),
        required_strength: required,
        symmetric_mode: required < need_plain,
    });
    Ok(formula)
}

/// The untinned product formula over all `q^l` rows, as a brute-force
/// reference; only sensible for small `q^l`.
pub fn full_convolution(
    factors: &[LabeledFactor],
    q: u32,
    measure: MeasureSpec,
    t: u32,
) -> Result<CubatureFormula> {
    let ell = factors.len();
    let total = (q as u64)
        .checked_pow(ell as u32)
        .filter(|&v| v <= 1 << 24)
        .ok_or_else(|| Error::BudgetExceeded("full convolution too large".into()))?;
    let dim = measure.ambient_dim();
    let mut points = Vec::with_capacity(total as usize * dim);
    let w = 1.0 / total as f64;
    let mut digits = vec![0u32; ell];
    let mut scratch = vec![0.0f64; dim];
    for _ in 0..total {
        scratch.iter_mut().for_each(|v| *v = 0.0);
        for (f, &a) in factors.iter().zip(&digits) {
            let off = &f.offsets[a as usize];
            for (&c, &v) in f.support.iter().zip(off) {
                scratch[c] += v;
            }
        }
        points.extend_from_slice(&scratch);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < q {
                break;
            }
            *d = 0;
        }
    }
    CubatureFormula::new(measure, points, vec![w; total as usize], t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::bch_dual_array;
    use crate::quad::gauss_2point_uniform;

    fn cube_factors(n: usize, z: f64) -> Vec<LabeledFactor> {
        (0..n)
            .map(|c| LabeledFactor::on_coordinate(c, vec![z, -z], SymmetryMode::EvenAddOne))
            .collect()
    }

    #[test]
    fn trivial_array_reproduces_full_product() {
        // full GF(2)^2 array = no thinning
        let mut rows = Vec::new();
        for v in 0..4u8 {
            rows.extend([v & 1, (v >> 1) & 1]);
        }
        let mut array =
            crate::oa::OrthogonalArray::from_rows(2, 2, rows, crate::oa::Provenance::Custom)
                .unwrap();
        let f = crate::field::field_build(2, 1).unwrap();
        array.attach_linear(vec![vec![1, 0], vec![0, 1]], f);
        let rep =
            crate::oa::verify_strength_default(&array, 2, crate::oa::VerifyMode::Exhaustive)
                .unwrap();
        array.set_strength(&rep);

        let z = 1.0 / 3f64.sqrt();
        let factors = cube_factors(2, z);
        let thin =
            thin_convolution(&factors, &array, MeasureSpec::Cube { n: 2 }, 2, vec![]).unwrap();
        let full = full_convolution(&factors, 2, MeasureSpec::Cube { n: 2 }, 2).unwrap();
        assert_eq!(thin.count(), full.count());
        for k in [[0u32, 0], [1, 0], [2, 0], [1, 1], [0, 2]] {
            assert!((thin.monomial_sum(&k) - full.monomial_sum(&k)).abs() < 1e-15);
        }
    }

    #[test]
    fn c4_degree3_thinning_is_even_sign_patterns() {
        // 4 copies of the 2-point Gauss rule thinned by the even-weight
        // array: 8 points, all degree-3 cube moments reproduced.
        let array = bch_dual_array(2, 2, 3).unwrap();
        let g = gauss_2point_uniform();
        let z = g.points[1];
        let factors = cube_factors(4, z);
        let quads: Vec<(usize, Quadrature1D)> = (0..4).map(|c| (c, g.clone())).collect();
        let f =
            thin_convolution(&factors, &array, MeasureSpec::Cube { n: 4 }, 3, quads).unwrap();
        assert_eq!(f.count(), 8);
        assert!(f.flags.equal_weight && f.flags.positive);
        // exhaustive against the 16-point product
        let full = full_convolution(&factors, 2, MeasureSpec::Cube { n: 4 }, 3).unwrap();
        let mut k = [0u32; 4];
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                for c in 0..=3 - a - b {
                    for d in 0..=3 - a - b - c {
                        k = [a, b, c, d];
                        let lhs = f.monomial_sum(&k);
                        let rhs = full.monomial_sum(&k);
                        assert!((lhs - rhs).abs() < 1e-14, "{k:?}: {lhs} vs {rhs}");
                    }
                }
            }
        }
        let _ = k;
    }

    #[test]
    fn symmetric_mode_output_is_centrally_symmetric() {
        let array = bch_dual_array(2, 2, 3).unwrap();
        let factors = cube_factors(4, 0.4);
        let f =
            thin_convolution(&factors, &array, MeasureSpec::Cube { n: 4 }, 3, vec![]).unwrap();
        assert!(f.centrally_symmetric_points());
    }

    #[test]
    fn strength_precondition_enforced() {
        // strength-3 array cannot claim degree 5 with asymmetric factors
        let array = bch_dual_array(2, 2, 3).unwrap();
        let factors: Vec<LabeledFactor> = (0..4)
            .map(|c| LabeledFactor::on_coordinate(c, vec![0.1, 0.7], SymmetryMode::None))
            .collect();
        let err = thin_convolution(&factors, &array, MeasureSpec::Cube { n: 4 }, 5, vec![]);
        assert!(err.is_err());
    }

    #[test]
    fn symmetry_labeling_violation_rejected() {
        let array = bch_dual_array(2, 2, 3).unwrap();
        let mut factors = cube_factors(4, 0.3);
        factors[2].offsets[1][0] = 0.25; // breaks labeling(a+1) = -labeling(a)
        let err = thin_convolution(&factors, &array, MeasureSpec::Cube { n: 4 }, 3, vec![]);
        assert!(err.is_err());
    }
}
