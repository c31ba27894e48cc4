//! Target measures and their exact normalized monomial moments.
//!
//! Every measure is normalized to total mass 1; moments come from closed
//! forms assembled out of small-integer products, so they are exact up to
//! the final floating divisions.  The simplex is parameterized by its
//! barycentric coordinate count (`coords = n + 1` for the n-dimensional
//! simplex); all other measures live in ambient dimension `n`.

use crate::{Error, Result};
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Uniform on `[-1, 1]^n`.
    Cube { n: usize },
    /// Uniform on `[-1,1]^n` minus `[-r, r]^n`, `0 < r < 1`.
    CubicalShell { n: usize, r: f64 },
    /// Density proportional to `exp(-|x|_2^2)` on all of `R^n`.
    Gaussian { n: usize },
    /// Uniform surface measure on the unit sphere `S^{n-1}`.
    Sphere { n: usize },
    /// Uniform on the unit ball.
    Ball { n: usize },
    /// Uniform on the unit ball minus the ball of radius `r`.
    SphericalShell { n: usize, r: f64 },
    /// Uniform on the simplex in barycentric coordinates (`coords` of them,
    /// nonnegative and summing to 1).
    Simplex { coords: usize },
    /// Uniform on `{x : |x|_1 <= 1}`.
    CrossPolytope { n: usize },
    /// Density proportional to `exp(-|x|_1)` on the nonnegative orthant.
    ExponentialOrthant { n: usize },
    /// Density proportional to `exp(-|x|_2)` on `R^n`.
    RadialExponential { n: usize },
}

/// Support classification of a point, with a tolerance band for "on the
/// boundary".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locus {
    Interior,
    Boundary,
    Exterior,
}

impl MeasureSpec {
    /// Number of coordinates a point of this measure carries.
    pub fn ambient_dim(&self) -> usize {
        match *self {
            MeasureSpec::Cube { n }
            | MeasureSpec::CubicalShell { n, .. }
            | MeasureSpec::Gaussian { n }
            | MeasureSpec::Sphere { n }
            | MeasureSpec::Ball { n }
            | MeasureSpec::SphericalShell { n, .. }
            | MeasureSpec::CrossPolytope { n }
            | MeasureSpec::ExponentialOrthant { n }
            | MeasureSpec::RadialExponential { n } => n,
            MeasureSpec::Simplex { coords } => coords,
        }
    }

    pub fn centrally_symmetric(&self) -> bool {
        matches!(
            self,
            MeasureSpec::Cube { .. }
                | MeasureSpec::CubicalShell { .. }
                | MeasureSpec::Gaussian { .. }
                | MeasureSpec::Sphere { .. }
                | MeasureSpec::Ball { .. }
                | MeasureSpec::SphericalShell { .. }
                | MeasureSpec::CrossPolytope { .. }
                | MeasureSpec::RadialExponential { .. }
        )
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.ambient_dim();
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        match *self {
            MeasureSpec::CubicalShell { r, .. } | MeasureSpec::SphericalShell { r, .. } => {
                if !(0.0 < r && r < 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "shell ratio must lie in (0, 1), got {r}"
                    )));
                }
            }
            MeasureSpec::Simplex { coords }
                if coords < 2 => {
                    return Err(Error::InvalidParameter(
                        "simplex needs at least 2 barycentric coordinates".into(),
                    ));
                }
            _ => {}
        }
        Ok(())
    }

    /// Exact normalized moment of the monomial `prod x_i^{k_i}`.
    pub fn moment(&self, k: &[u32]) -> Result<f64> {
        if k.len() != self.ambient_dim() {
            return Err(Error::InvalidParameter(format!(
                "multi-index length {} != dimension {}",
                k.len(),
                self.ambient_dim()
            )));
        }
        let total: u64 = k.iter().map(|&v| v as u64).sum();
        if total > 64 {
            return Err(Error::InvalidParameter("moment degree capped at 64".into()));
        }
        let deg = total as u32;
        let all_even = k.iter().all(|&v| v % 2 == 0);
        let n = self.ambient_dim() as u32;
        let v = match *self {
            MeasureSpec::Cube { .. } => {
                if !all_even {
                    0.0
                } else {
                    k.iter().map(|&ki| 1.0 / (ki as f64 + 1.0)).product()
                }
            }
            MeasureSpec::CubicalShell { r, .. } => {
                if !all_even {
                    0.0
                } else {
                    let solid: f64 = k.iter().map(|&ki| 1.0 / (ki as f64 + 1.0)).product();
                    solid * shell_ratio_factor(r, n, deg)
                }
            }
            MeasureSpec::Gaussian { .. } => {
                if !all_even {
                    0.0
                } else {
                    // per coordinate (k-1)!! / 2^{k/2} for exp(-x^2)
                    k.iter()
                        .map(|&ki| double_factorial(ki.saturating_sub(1)) / 2f64.powi(ki as i32 / 2))
                        .product()
                }
            }
            MeasureSpec::Sphere { .. } => {
                if !all_even {
                    0.0
                } else {
                    sphere_moment(n, k)
                }
            }
            MeasureSpec::Ball { .. } => {
                if !all_even {
                    0.0
                } else {
                    sphere_moment(n, k) * n as f64 / (n + deg) as f64
                }
            }
            MeasureSpec::SphericalShell { r, .. } => {
                if !all_even {
                    0.0
                } else {
                    sphere_moment(n, k) * n as f64 / (n + deg) as f64 * shell_ratio_factor(r, n, deg)
                }
            }
            MeasureSpec::Simplex { coords } => {
                // Dirichlet(1,...,1): (c-1)! prod k_i! / (c-1+|k|)!
                let c = coords as u32;
                let mut v = 1.0;
                for &ki in k {
                    v *= factorial(ki);
                }
                for j in c..(c + deg) {
                    v /= j as f64;
                }
                v
            }
            MeasureSpec::CrossPolytope { .. } => {
                if !all_even {
                    0.0
                } else {
                    let mut v = 1.0;
                    for &ki in k {
                        v *= factorial(ki);
                    }
                    for j in (n + 1)..=(n + deg) {
                        v /= j as f64;
                    }
                    v
                }
            }
            MeasureSpec::ExponentialOrthant { .. } => k.iter().map(|&ki| factorial(ki)).product(),
            MeasureSpec::RadialExponential { .. } => {
                if !all_even {
                    0.0
                } else {
                    let mut v = sphere_moment(n, k);
                    for j in 0..deg {
                        v *= (n + j) as f64;
                    }
                    v
                }
            }
        };
        Ok(v)
    }

    /// Support classification with absolute tolerance `tol`.
    ///
    /// For the sphere the support has empty interior in `R^n`; points on it
    /// are classified `Interior` following the geometric-topology convention
    /// (the sphere is a manifold without boundary).  The general-topology
    /// label is tracked separately by the formula flags.
    pub fn classify(&self, x: &[f64], tol: f64) -> Locus {
        match *self {
            MeasureSpec::Cube { .. } => {
                let m = x.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
                band(m, 1.0, tol)
            }
            MeasureSpec::CubicalShell { r, .. } => {
                let m = x.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
                band_interval(m, r, 1.0, tol)
            }
            MeasureSpec::Gaussian { .. } | MeasureSpec::RadialExponential { .. } => Locus::Interior,
            MeasureSpec::Sphere { .. } => {
                let d = (norm2(x) - 1.0).abs();
                if d <= tol {
                    Locus::Interior
                } else {
                    Locus::Exterior
                }
            }
            MeasureSpec::Ball { .. } => band(norm2(x), 1.0, tol),
            MeasureSpec::SphericalShell { r, .. } => band_interval(norm2(x), r, 1.0, tol),
            MeasureSpec::Simplex { .. } => {
                let s: f64 = x.iter().sum();
                if (s - 1.0).abs() > tol {
                    return Locus::Exterior;
                }
                let min = x.iter().fold(f64::INFINITY, |a, &v| a.min(v));
                if min < -tol {
                    Locus::Exterior
                } else if min <= tol {
                    Locus::Boundary
                } else {
                    Locus::Interior
                }
            }
            MeasureSpec::CrossPolytope { .. } => {
                let s: f64 = x.iter().map(|v| v.abs()).sum();
                band(s, 1.0, tol)
            }
            MeasureSpec::ExponentialOrthant { .. } => {
                let min = x.iter().fold(f64::INFINITY, |a, &v| a.min(v));
                if min < -tol {
                    Locus::Exterior
                } else if min <= tol {
                    Locus::Boundary
                } else {
                    Locus::Interior
                }
            }
        }
    }

    /// Classification under the general-topology boundary convention, which
    /// differs only for the sphere (every point of `S^{n-1}` is boundary in
    /// `R^n`).
    pub fn classify_general(&self, x: &[f64], tol: f64) -> Locus {
        match self {
            MeasureSpec::Sphere { .. } => {
                if (norm2(x) - 1.0).abs() <= tol {
                    Locus::Boundary
                } else {
                    Locus::Exterior
                }
            }
            _ => self.classify(x, tol),
        }
    }

    /// Moments `m_0..m_{len-1}` of the radial factor `rho^{n-1} d rho`
    /// restricted as the measure demands; used for radial separation of
    /// variables.
    pub fn radial_moments(&self, len: usize) -> Result<Vec<f64>> {
        let n = self.ambient_dim() as u32;
        match *self {
            MeasureSpec::Ball { .. } => {
                Ok((0..len).map(|k| n as f64 / (n as f64 + k as f64)).collect())
            }
            MeasureSpec::SphericalShell { r, .. } => Ok((0..len)
                .map(|k| n as f64 / (n as f64 + k as f64) * shell_ratio_factor(r, n, k as u32))
                .collect()),
            MeasureSpec::RadialExponential { .. } => {
                let mut out = Vec::with_capacity(len);
                let mut v = 1.0;
                out.push(v);
                for k in 0..len.saturating_sub(1) {
                    v *= (n + k as u32) as f64;
                    out.push(v);
                }
                Ok(out)
            }
            MeasureSpec::CubicalShell { r, .. } => Ok((0..len)
                .map(|k| n as f64 / (n as f64 + k as f64) * shell_ratio_factor(r, n, k as u32))
                .collect()),
            _ => Err(Error::InvalidParameter(
                "radial moments only defined for radially decomposable measures".into(),
            )),
        }
    }

    /// Short tag for files and reports.
    pub fn region_tag(&self) -> &'static str {
        match self {
            MeasureSpec::Cube { .. } => "cube",
            MeasureSpec::CubicalShell { .. } => "cubical-shell",
            MeasureSpec::Gaussian { .. } => "gaussian",
            MeasureSpec::Sphere { .. } => "sphere",
            MeasureSpec::Ball { .. } => "ball",
            MeasureSpec::SphericalShell { .. } => "spherical-shell",
            MeasureSpec::Simplex { .. } => "simplex",
            MeasureSpec::CrossPolytope { .. } => "cross-polytope",
            MeasureSpec::ExponentialOrthant { .. } => "exponential-orthant",
            MeasureSpec::RadialExponential { .. } => "radial-exponential",
        }
    }

    pub fn shell_ratio(&self) -> Option<f64> {
        match *self {
            MeasureSpec::CubicalShell { r, .. } | MeasureSpec::SphericalShell { r, .. } => Some(r),
            _ => None,
        }
    }
}

/// `(1 - r^{n+deg}) / (1 - r^n)`: differencing of scaled solid moments.
fn shell_ratio_factor(r: f64, n: u32, deg: u32) -> f64 {
    (1.0 - r.powi((n + deg) as i32)) / (1.0 - r.powi(n as i32))
}

/// `E[prod x_i^{k_i}]` on `S^{n-1}` for an all-even multi-index:
/// `prod (k_i - 1)!! / prod_{j<deg/2} (n + 2j)`.
fn sphere_moment(n: u32, k: &[u32]) -> f64 {
    let deg: u32 = k.iter().sum();
    let mut num = 1.0;
    for &ki in k {
        num *= double_factorial(ki.saturating_sub(1));
    }
    let mut den = 1.0;
    for j in 0..(deg / 2) {
        den *= (n + 2 * j) as f64;
    }
    num / den
}

fn double_factorial(k: u32) -> f64 {
    let mut v = 1.0;
    let mut i = k as i64;
    while i > 1 {
        v *= i as f64;
        i -= 2;
    }
    v
}

fn factorial(k: u32) -> f64 {
    (2..=k as u64).map(|v| v as f64).product()
}

fn norm2(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn band(v: f64, hi: f64, tol: f64) -> Locus {
    if v > hi + tol {
        Locus::Exterior
    } else if v >= hi - tol {
        Locus::Boundary
    } else {
        Locus::Interior
    }
}

fn band_interval(v: f64, lo: f64, hi: f64, tol: f64) -> Locus {
    if v > hi + tol || v < lo - tol {
        Locus::Exterior
    } else if v >= hi - tol || v <= lo + tol {
        Locus::Boundary
    } else {
        Locus::Interior
    }
}

/// Memoizing wrapper around [`MeasureSpec::moment`].
///
/// Keys are canonicalized by sorting the exponents (all in-scope measures
/// are exchangeable), so permuted multi-indices share a cache entry; a value
/// once computed is never recomputed or altered.
pub struct MomentOracle {
    spec: MeasureSpec,
    cache: Mutex<HashMap<Vec<u32>, f64>>,
}

impl MomentOracle {
    pub fn new(spec: MeasureSpec) -> Self {
        MomentOracle { spec, cache: Mutex::new(HashMap::new()) }
    }

    pub fn spec(&self) -> &MeasureSpec {
        &self.spec
    }

    pub fn moment(&self, k: &[u32]) -> Result<f64> {
        let mut key: Vec<u32> = k.iter().copied().filter(|&v| v > 0).collect();
        key.sort_unstable_by(|a, b| b.cmp(a));
        if let Some(&v) = self.cache.lock().unwrap().get(&key) {
            return Ok(v);
        }
        let v = self.spec.moment(k)?;
        self.cache.lock().unwrap().insert(key, v);
        Ok(v)
    }
}
