//! The cubature formula container: points, weights, target measure, claimed
//! degree and quality flags.  Flags are always recomputed from the data,
//! never trusted from a construction.

use crate::measure::{Locus, MeasureSpec};
use crate::oa::OrthogonalArray;
use crate::quad::Quadrature1D;
use crate::thin::LabeledFactor;
use crate::verify::Certificate;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaFlags {
    pub equal_weight: bool,
    pub positive: bool,
    /// Geometric-topology locus (the paper's convention: points on a sphere
    /// count as interior to it).
    pub locus: Locus,
    /// General-topology locus, kept alongside for the sphere.
    pub locus_general: Locus,
}

/// Construction record sufficient to certify degree structurally: the
/// per-coordinate 1-D formulas, the labeled factors and the array.
#[derive(Debug, Clone)]
pub struct ThinProvenance {
    /// For each coordinate that carries factors: the combined 1-D quadrature
    /// the factors convolve to.
    pub coord_quads: Vec<(usize, Quadrature1D)>,
    pub factors: Vec<LabeledFactor>,
    pub array: OrthogonalArray,
    /// Strength the thinning relied on.
    pub required_strength: u32,
    /// Whether the odd-degree symmetric refinement was used.
    pub symmetric_mode: bool,
}

#[derive(Debug, Clone)]
pub struct CubatureFormula {
    pub measure: MeasureSpec,
    /// Row-major point storage, `count * dim`.
    points: Vec<f64>,
    weights: Vec<f64>,
    pub degree: u32,
    pub flags: FormulaFlags,
    pub provenance: Option<ThinProvenance>,
    pub certificate: Option<Certificate>,
}

/// Tolerance band used when classifying points against the support.
const LOCUS_TOL: f64 = 1e-9;

impl CubatureFormula {
    pub fn new(
        measure: MeasureSpec,
        points: Vec<f64>,
        weights: Vec<f64>,
        degree: u32,
    ) -> Result<Self> {
        measure.validate()?;
        let dim = measure.ambient_dim();
        if weights.is_empty() || points.len() != weights.len() * dim {
            return Err(Error::InvalidParameter("points/weights shape mismatch".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 * weights.len() as f64 {
            return Err(Error::ConstructionCheck(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        let mut f = CubatureFormula {
            measure,
            points,
            weights,
            degree,
            flags: FormulaFlags {
                equal_weight: false,
                positive: false,
                locus: Locus::Interior,
                locus_general: Locus::Interior,
            },
            provenance: None,
            certificate: None,
        };
        f.recompute_flags();
        Ok(f)
    }

    pub fn dim(&self) -> usize {
        self.measure.ambient_dim()
    }
    pub fn count(&self) -> usize {
        self.weights.len()
    }
    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.points[i * d..(i + 1) * d]
    }
    pub fn points_flat(&self) -> &[f64] {
        &self.points
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    /// Recomputes the equal-weight/positive/locus flags from the data.
    pub fn recompute_flags(&mut self) {
        let w0 = self.weights[0];
        let equal_weight = self
            .weights
            .iter()
            .all(|&w| (w - w0).abs() <= 1e-13 * w0.abs().max(1e-300));
        let positive = self.weights.iter().all(|&w| w > 0.0);
        let mut locus = Locus::Interior;
        let mut locus_general = Locus::Interior;
        for i in 0..self.count() {
            let p = self.point(i);
            match self.measure.classify(p, LOCUS_TOL) {
                Locus::Exterior => {
                    locus = Locus::Exterior;
                }
                Locus::Boundary if locus == Locus::Interior => {
                    locus = Locus::Boundary;
                }
                _ => {}
            }
            match self.measure.classify_general(p, LOCUS_TOL) {
                Locus::Exterior => {
                    locus_general = Locus::Exterior;
                }
                Locus::Boundary if locus_general == Locus::Interior => {
                    locus_general = Locus::Boundary;
                }
                _ => {}
            }
        }
        self.flags = FormulaFlags { equal_weight, positive, locus, locus_general };
    }

    /// True when the point multiset is invariant under negation (matched by
    /// exact coordinate comparison after normalizing signed zeros).
    pub fn centrally_symmetric_points(&self) -> bool {
        use std::collections::HashMap;
        let d = self.dim();
        let key = |p: &[f64]| -> Vec<u64> {
            p.iter().map(|&v| (if v == 0.0 { 0.0f64 } else { v }).to_bits()).collect()
        };
        let mut bag: HashMap<Vec<u64>, i64> = HashMap::new();
        for i in 0..self.count() {
            *bag.entry(key(self.point(i))).or_insert(0) += 1;
        }
        for i in 0..self.count() {
            let neg: Vec<f64> = self.point(i).iter().map(|&v| -v).collect();
            match bag.get(&key(&neg)) {
                Some(&c) if c > 0 => {}
                _ => return false,
            }
        }
        let _ = d;
        true
    }

    /// Weighted sum of the monomial with exponent vector `k`.
    pub fn monomial_sum(&self, k: &[u32]) -> f64 {
        let d = self.dim();
        let active: Vec<(usize, i32)> = k
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i, e as i32))
            .collect();
        // Neumaier compensated summation
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for i in 0..self.count() {
            let p = &self.points[i * d..(i + 1) * d];
            let mut v = self.weights[i];
            for &(j, e) in &active {
                v *= p[j].powi(e);
            }
            let t = sum + v;
            if sum.abs() >= v.abs() {
                comp += (sum - t) + v;
            } else {
                comp += (v - t) + sum;
            }
            sum = t;
        }
        sum + comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_recomputed_from_data() {
        let m = MeasureSpec::Cube { n: 2 };
        let pts = vec![0.5, 0.5, -0.5, -0.5];
        let f = CubatureFormula::new(m, pts, vec![0.5, 0.5], 1).unwrap();
        assert!(f.flags.equal_weight);
        assert!(f.flags.positive);
        assert_eq!(f.flags.locus, Locus::Interior);
        assert!(f.centrally_symmetric_points());
    }

    #[test]
    fn boundary_flag() {
        let m = MeasureSpec::Cube { n: 2 };
        let pts = vec![1.0, 0.0, -1.0, 0.0];
        let f = CubatureFormula::new(m, pts, vec![0.5, 0.5], 1).unwrap();
        assert_eq!(f.flags.locus, Locus::Boundary);
    }

    #[test]
    fn weight_sum_enforced() {
        let m = MeasureSpec::Cube { n: 1 };
        assert!(CubatureFormula::new(m, vec![0.0, 0.5], vec![0.4, 0.4], 1).is_err());
    }

    #[test]
    fn monomial_sum_compensated() {
        let m = MeasureSpec::Cube { n: 1 };
        let f = CubatureFormula::new(
            m,
            vec![-0.5, 0.5],
            vec![0.5, 0.5],
            1,
        )
        .unwrap();
        assert_eq!(f.monomial_sum(&[1]), 0.0);
        assert!((f.monomial_sum(&[2]) - 0.25).abs() < 1e-16);
    }
}
