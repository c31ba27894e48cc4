//! Region builders: cube, Gaussian space, sphere/ball/shells, simplex,
//! cross-polytope, exponential orthant, and the point-count bounds.
//!
//! All builders go through the thinning engine or explicit orbit
//! constructions; quality flags on the results are recomputed from the data.

use crate::bch::{bch_dual_array_with, ArrayBuildOptions};
use crate::formula::CubatureFormula;
use crate::hadamard::{available_orders, hadamard_matrix, hadamard_to_oa};
use crate::kerdock::kerdock_array_seeded;
use crate::measure::MeasureSpec;
use crate::oa::{self, OrthogonalArray};
use crate::quad::{
    convolutional_chebyshev, equal_weight_find, gauss_from_moments, QuadMeasure, Quadrature1D,
};
use crate::thin::{thin_convolution, LabeledFactor, SymmetryMode};
use crate::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Which array family backs a thinning.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayFamily {
    /// Pick per the case analysis: Hadamard for degree-3 thinnings, Kerdock
    /// where it beats BCH, BCH otherwise.
    Auto,
    Bch,
    Kerdock,
    Hadamard,
}

/// Builder knobs shared by the region constructions.
#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub family: ArrayFamily,
    /// Override for the factor alphabet size where one is probed.
    pub q: Option<u32>,
    pub array: ArrayBuildOptions,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { family: ArrayFamily::Auto, q: None, array: ArrayBuildOptions::default() }
    }
}

fn ceil_log2(n: usize) -> u32 {
    debug_assert!(n >= 1);
    usize::BITS - (n - 1).leading_zeros()
}

/// Prime powers in increasing order for the factor-size probe.
fn prime_power_probe(from: u32, cap: u32) -> impl Iterator<Item = u32> {
    (from.max(2)..=cap).filter(|&q| crate::field::prime_power(q).is_some())
}

// ---------------------------------------------------------------------------
// cube
// ---------------------------------------------------------------------------

/// Equal-weight interior `t`-cubature on `[-1,1]^n` with `O(n^{t/2})`
/// points: the n-th power of the convolutional Chebyshev rule, thinned as
/// `s n` sign pairs.
pub fn build_cube(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidParameter("need n >= 1, t >= 1".into()));
    }
    let s = (t / 2).max(1);
    let quad = convolutional_chebyshev(s)?;
    let z = quad.pair_offsets.clone().expect("chebyshev rules carry offsets");
    let ell = s as usize * n;
    let strength = 2 * s; // t-1 for odd t, t for even t
    let array = cube_array(ell, strength, opts)?;

    let mut factors = Vec::with_capacity(ell);
    for c in 0..n {
        for &zj in &z {
            factors.push(LabeledFactor::on_coordinate(c, vec![zj, -zj], SymmetryMode::EvenAddOne));
        }
    }
    let quads = (0..n).map(|c| (c, quad.clone())).collect();
    let mut f = thin_convolution(&factors, &array, MeasureSpec::Cube { n }, 2 * s + 1, quads)?;
    f.degree = t;
    Ok(f)
}

fn cube_array(ell: usize, strength: u32, opts: &BuildOptions) -> Result<OrthogonalArray> {
    let pick = match opts.family {
        ArrayFamily::Auto => {
            if strength <= 3 && !available_orders(ell, ell + 64).is_empty() {
                ArrayFamily::Hadamard
            } else {
                let mbits = ceil_log2(ell).max(2);
                if strength <= 5 && mbits.is_multiple_of(2) && mbits >= 4 {
                    ArrayFamily::Kerdock
                } else {
                    ArrayFamily::Bch
                }
            }
        }
        f => f,
    };
    let array = match pick {
        ArrayFamily::Hadamard => {
            if strength > 3 {
                return Err(Error::InvalidParameter(
                    "Hadamard arrays have strength 3; degree too high".into(),
                ));
            }
            let order = *available_orders(ell, ell + 64).first().ok_or_else(|| {
                Error::Infeasible(format!("no Hadamard order in [{ell}, {}]", ell + 64))
            })?;
            hadamard_to_oa(&hadamard_matrix(order)?)?
        }
        ArrayFamily::Kerdock => {
            if strength > 5 {
                return Err(Error::InvalidParameter(
                    "Kerdock arrays have strength 5; degree too high".into(),
                ));
            }
            let mut m = ceil_log2(ell).max(4);
            if m % 2 == 1 {
                m += 1;
            }
            kerdock_array_seeded(m, opts.array.seed)?
        }
        ArrayFamily::Bch | ArrayFamily::Auto => {
            let m = ceil_log2(ell).max(1);
            bch_dual_array_with(2, m, strength, &opts.array)?
        }
    };
    if array.len() > ell {
        oa::project_array(&array, &(0..ell).collect::<Vec<_>>())
    } else {
        Ok(array)
    }
}

// ---------------------------------------------------------------------------
// gaussian and exponential product spaces
// ---------------------------------------------------------------------------

/// Equal-weight `t`-cubature for the density `exp(-|x|^2)` on `R^n`
/// (`t` odd): one symmetric `q`-point factor per coordinate, thinned by a
/// strength-`(t-1)` array in a symmetric labeling.
pub fn build_gaussian(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    if t.is_multiple_of(2) || t < 3 {
        return Err(Error::InvalidParameter(
            "the Gaussian product path needs odd t >= 3".into(),
        ));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("n >= 1".into()));
    }
    let (q, unit) = probe_equal_weight(QuadMeasure::GaussianUnit, t, opts)?;
    let quad = unit.scaled(1.0 / 2f64.sqrt(), QuadMeasure::GaussianExpSq)?;

    let m = smallest_power_exponent(q, n);
    let array = bch_dual_array_with(q, m, t - 1, &opts.array)?;
    let array = if array.len() > n {
        oa::project_array(&array, &(0..n).collect::<Vec<_>>())?
    } else {
        array
    };

    let mut factors = Vec::with_capacity(n);
    for c in 0..n {
        factors.push(symmetric_labeling(c, q, &quad.points)?);
    }
    let quads = (0..n).map(|c| (c, quad.clone())).collect();
    let mut f = thin_convolution(&factors, &array, MeasureSpec::Gaussian { n }, t, quads)?;
    f.degree = t;
    Ok(f)
}

/// Equal-weight `t`-cubature for `exp(-|x|_1)` on the nonnegative orthant
/// (no symmetry; plain strength-`t` thinning).
pub fn build_orthant(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    if n == 0 || t == 0 {
        return Err(Error::InvalidParameter("need n >= 1, t >= 1".into()));
    }
    let (q, quad) = probe_equal_weight(QuadMeasure::ExponentialRay, t, opts)?;
    let m = smallest_power_exponent(q, n);
    let array = bch_dual_array_with(q, m, t, &opts.array)?;
    let array = if array.len() > n {
        oa::project_array(&array, &(0..n).collect::<Vec<_>>())?
    } else {
        array
    };
    let mut factors = Vec::with_capacity(n);
    for c in 0..n {
        factors.push(LabeledFactor::on_coordinate(c, quad.points.clone(), SymmetryMode::None));
    }
    let quads = (0..n).map(|c| (c, quad.clone())).collect();
    let mut f =
        thin_convolution(&factors, &array, MeasureSpec::ExponentialOrthant { n }, t, quads)?;
    f.degree = t;
    Ok(f)
}

fn probe_equal_weight(
    measure: QuadMeasure,
    t: u32,
    opts: &BuildOptions,
) -> Result<(u32, Quadrature1D)> {
    if let Some(q) = opts.q {
        let quad = equal_weight_find(measure, q, t)?;
        return Ok((q, quad));
    }
    let mut failures = Vec::new();
    for q in prime_power_probe(2, 64) {
        match equal_weight_find(measure.clone(), q, t) {
            Ok(quad) => return Ok((q, quad)),
            Err(e) => failures.push(format!("q={q}: {e}")),
        }
    }
    Err(Error::Infeasible(format!(
        "no equal-weight factor found for degree {t} with q <= 64"
    )))
}

fn smallest_power_exponent(q: u32, n: usize) -> u32 {
    let mut m = 1u32;
    let mut v = q as u128;
    while v < n as u128 {
        v *= q as u128;
        m += 1;
    }
    m
}

/// Symmetric labeling of `GF(q)` onto a symmetric point multiset: negation
/// pairs of the field map to sign pairs of the points.
fn symmetric_labeling(coord: usize, q: u32, points: &[f64]) -> Result<LabeledFactor> {
    let (p, e) = crate::field::prime_power(q).unwrap();
    let mut mags: Vec<f64> = points.iter().copied().filter(|&v| v > 0.0).collect();
    mags.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let zeros = points.iter().filter(|&&v| v == 0.0).count();
    if mags.len() * 2 + zeros != points.len() {
        return Err(Error::InvalidParameter("factor multiset is not symmetric".into()));
    }
    let mut values = vec![0.0f64; q as usize];
    if q.is_multiple_of(2) {
        // pairs {a, a+1}: labeling(a+1) = -labeling(a)
        let mut pair_values = mags.clone();
        pair_values.extend(std::iter::repeat_n(0.0, zeros / 2));
        let mut pv = pair_values.into_iter();
        for a in (0..q).step_by(2) {
            let v = pv.next().ok_or_else(|| {
                Error::InvalidParameter("multiset does not fill the alphabet".into())
            })?;
            values[a as usize] = v;
            values[(a + 1) as usize] = -v;
        }
        Ok(LabeledFactor::on_coordinate(coord, values, SymmetryMode::EvenAddOne))
    } else {
        // zero element takes a zero point; pairs {a, -a} take sign pairs
        if zeros == 0 {
            return Err(Error::InvalidParameter(
                "odd alphabet needs a zero point in the factor".into(),
            ));
        }
        let mut pair_values = mags.clone();
        pair_values.extend(std::iter::repeat_n(0.0, (zeros - 1) / 2));
        let mut pv = pair_values.into_iter();
        values[0] = 0.0;
        let mut seen = vec![false; q as usize];
        seen[0] = true;
        for a in 1..q {
            if seen[a as usize] {
                continue;
            }
            let na = neg_index(a, p, e);
            let v = pv.next().ok_or_else(|| {
                Error::InvalidParameter("multiset does not fill the alphabet".into())
            })?;
            values[a as usize] = v;
            values[na as usize] = -v;
            seen[a as usize] = true;
            seen[na as usize] = true;
        }
        Ok(LabeledFactor::on_coordinate(coord, values, SymmetryMode::OddNegation))
    }
}

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

// ---------------------------------------------------------------------------
// radial projections
// ---------------------------------------------------------------------------

/// Projects a centrally symmetric Gaussian `t`-formula (odd `t`) radially
/// onto the unit sphere: `p -> p/|p|`, `w -> w |p|^e / M_e` with `e = t-1`
/// and `M_e` the Gaussian moment of `|x|^e`.  Any point at the origin is
/// discarded (its homogenized contribution is zero) and the weights are
/// renormalized.
pub fn radial_project_sphere(f: &CubatureFormula, t: u32) -> Result<CubatureFormula> {
    let n = match f.measure {
        MeasureSpec::Gaussian { n } => n,
        _ => {
            return Err(Error::InvalidParameter(
                "sphere projection expects a Gaussian-weight formula".into(),
            ))
        }
    };
    if t.is_multiple_of(2) {
        return Err(Error::InvalidParameter("sphere projection needs odd t".into()));
    }
    if !f.centrally_symmetric_points() {
        return Err(Error::InvalidParameter(
            "sphere projection needs a centrally symmetric formula".into(),
        ));
    }
    let e = t - 1;
    // M_e = E[|x|^e] for exp(-|x|^2): product of (n/2 + j)
    let mut m_e = 1.0f64;
    for j in 0..(e / 2) {
        m_e *= n as f64 / 2.0 + j as f64;
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut discarded = 0.0;
    for i in 0..f.count() {
        let p = f.point(i);
        let r = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r < 1e-12 {
            discarded += f.weight(i);
            continue;
        }
        points.extend(p.iter().map(|&v| v / r));
        weights.push(f.weight(i) * r.powi(e as i32) / m_e);
    }
    if weights.is_empty() {
        return Err(Error::ConstructionCheck("all points were at the origin".into()));
    }
    let _ = discarded;
    let sum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= sum;
    }
    CubatureFormula::new(MeasureSpec::Sphere { n }, points, weights, t)
}

/// Projects a formula for the exponential orthant radially onto the
/// simplex: `p -> p/|p|_1`, `w -> w |p|_1^t / E[|x|_1^t]`.
pub fn radial_project_simplex(f: &CubatureFormula, t: u32) -> Result<CubatureFormula> {
    let coords = match f.measure {
        MeasureSpec::ExponentialOrthant { n } => n,
        _ => {
            return Err(Error::InvalidParameter(
                "simplex projection expects an exponential-orthant formula".into(),
            ))
        }
    };
    // E[|x|_1^t] with |x|_1 ~ Gamma(coords): product of (coords + j)
    let mut e_t = 1.0f64;
    for j in 0..t {
        e_t *= (coords as u32 + j) as f64;
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for i in 0..f.count() {
        let p = f.point(i);
        let s: f64 = p.iter().sum();
        if s < 1e-12 {
            continue; // origin: homogeneous contribution is zero
        }
        points.extend(p.iter().map(|&v| v / s));
        weights.push(f.weight(i) * s.powi(t as i32) / e_t);
    }
    if weights.is_empty() {
        return Err(Error::ConstructionCheck("all points were at the origin".into()));
    }
    let sum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= sum;
    }
    CubatureFormula::new(MeasureSpec::Simplex { coords }, points, weights, t)
}

// ---------------------------------------------------------------------------
// simplex
// ---------------------------------------------------------------------------

/// Positive `t`-cubature on the n-dimensional simplex (barycentric, `n + 1`
/// coordinates) with `O(n^{t-1})` points: orthant thinning followed by
/// radial projection.
pub fn build_simplex(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    let orthant = build_orthant(n + 1, t, opts)?;
    radial_project_simplex(&orthant, t)
}

/// The `3n - 1`-point positive boundary 3-cubature on the simplex with `n`
/// barycentric coordinates: vertices, Hadamard-design points and the
/// centroid.  When no Hadamard matrix of order `n` exists the formula is
/// built on a larger simplex and projected down.
pub fn build_simplex3(n: usize) -> Result<CubatureFormula> {
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 barycentric coordinates".into()));
    }
    let ell = *available_orders(n, n + 64).first().ok_or_else(|| {
        Error::Infeasible(format!("no Hadamard order in [{n}, {}]", n + 64))
    })?;
    let f = simplex3_exact_order(ell)?;
    if ell == n {
        return Ok(f);
    }
    project_simplex_coords(&f, n, 3)
}

fn simplex3_exact_order(n: usize) -> Result<CubatureFormula> {
    let h = hadamard_matrix(n)?;
    let nf = n as f64;
    let w_vertex = 2.0 / (nf * (nf + 1.0) * (nf + 2.0));
    let w_design = nf / (2.0 * (nf + 1.0) * (nf + 2.0));
    let w_centroid = 4.0 * nf / ((nf + 1.0) * (nf + 2.0));

    let mut points = Vec::new();
    let mut weights = Vec::new();
    for i in 0..n {
        let mut p = vec![0.0; n];
        p[i] = 1.0;
        points.extend(p);
        weights.push(w_vertex);
    }
    // Hadamard design blocks: the +1 positions of each non-initial row of
    // the column-normalized matrix and of its negation.
    let signs = h[0].clone();
    for negate in [1i8, -1i8] {
        for row in h.iter().skip(1) {
            let mut p = vec![0.0; n];
            for (j, (&x, &s)) in row.iter().zip(&signs).enumerate() {
                if x * s * negate == 1 {
                    p[j] = 2.0 / nf;
                }
            }
            points.extend(p);
            weights.push(w_design);
        }
    }
    points.extend(std::iter::repeat_n(1.0 / nf, n));
    weights.push(w_centroid);

    debug_assert_eq!(weights.len(), 3 * n - 1);
    CubatureFormula::new(MeasureSpec::Simplex { coords: n }, points, weights, 3)
}

/// Projects a degree-`t` simplex formula onto the sub-simplex of its first
/// `keep` barycentric coordinates: `p -> p_head/s`, `w -> w s^t / E[s^t]`
/// with `s` the head sum (Beta-distributed under the uniform measure).
pub fn project_simplex_coords(
    f: &CubatureFormula,
    keep: usize,
    t: u32,
) -> Result<CubatureFormula> {
    let coords = match f.measure {
        MeasureSpec::Simplex { coords } => coords,
        _ => return Err(Error::InvalidParameter("expects a simplex formula".into())),
    };
    if keep == 0 || keep > coords {
        return Err(Error::InvalidParameter("bad coordinate count".into()));
    }
    // E[s^t] for s ~ Beta(keep, coords - keep): prod (keep + j)/(coords + j)
    let mut e_t = 1.0f64;
    for j in 0..t {
        e_t *= (keep as u32 + j) as f64 / (coords as u32 + j) as f64;
    }
    use std::collections::HashMap;
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut points: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    for i in 0..f.count() {
        let p = f.point(i);
        let s: f64 = p[..keep].iter().sum();
        if s < 1e-12 {
            continue; // supported on the dropped face
        }
        let proj: Vec<f64> = p[..keep].iter().map(|&v| v / s).collect();
        let w = f.weight(i) * s.powi(t as i32) / e_t;
        let key: Vec<u64> =
            proj.iter().map(|&v| (if v == 0.0 { 0.0f64 } else { v }).to_bits()).collect();
        match index.get(&key) {
            Some(&j) => weights[j] += w,
            None => {
                index.insert(key, weights.len());
                points.extend(proj);
                weights.push(w);
            }
        }
    }
    let sum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= sum;
    }
    CubatureFormula::new(MeasureSpec::Simplex { coords: keep }, points, weights, t)
}

// ---------------------------------------------------------------------------
// cross-polytope
// ---------------------------------------------------------------------------

/// Positive `t`-cubature on `{|x|_1 <= 1}` with `O(n^{3t/2 - 1})` points:
/// a simplex formula on the corner simplex replicated over the sign
/// patterns of a zero-sum binary array.  The degree claim is checked
/// numerically before the formula is released (structural certification is
/// deliberately refused for this construction).
pub fn build_cross_polytope(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    if n == 0 || t < 2 {
        return Err(Error::InvalidParameter("need n >= 1, t >= 2".into()));
    }
    let simplex = build_simplex(n, t, opts)?;
    // odd t rides the zero-sum structure at strength t-1; even t needs t
    let strength = if t % 2 == 1 { t - 1 } else { t };
    let m = ceil_log2(n.max(2));
    let array = bch_dual_array_with(2, m, strength, &opts.array)?;
    let array = if array.len() > n {
        oa::project_array(&array, &(0..n).collect::<Vec<_>>())?
    } else {
        array
    };

    use std::collections::HashMap;
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut points: Vec<f64> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let rows = array.rows_count();
    for r in 0..rows {
        let eps = array.row(r);
        for i in 0..simplex.count() {
            let v = simplex.point(i); // barycentric, n + 1 coordinates
            let x: Vec<f64> = (0..n)
                .map(|j| {
                    let mag = v[j + 1];
                    if eps[j] == 1 {
                        -mag
                    } else {
                        mag
                    }
                })
                .collect();
            let w = simplex.weight(i) / rows as f64;
            let key: Vec<u64> =
                x.iter().map(|&c| (if c == 0.0 { 0.0f64 } else { c }).to_bits()).collect();
            match index.get(&key) {
                Some(&j) => weights[j] += w,
                None => {
                    index.insert(key, weights.len());
                    points.extend(x);
                    weights.push(w);
                }
            }
        }
    }
    let mut f =
        CubatureFormula::new(MeasureSpec::CrossPolytope { n }, points, weights, t)?;
    // numerical check of the replication claim
    let cert = match crate::verify::verify_exhaustive_budgeted(
        &f,
        t,
        crate::verify::TOL_EXHAUSTIVE,
        100_000_000,
    ) {
        Ok(c) => c,
        Err(Error::BudgetExceeded(_)) => {
            crate::verify::verify_sampled(&f, t, crate::verify::TOL_SAMPLED, 2_000, 0x0C)?
        }
        Err(e) => return Err(e),
    };
    if !cert.pass {
        return Err(Error::VerificationFailed(format!(
            "cross-polytope replication missed degree {t}: worst monomial {:?} dev {:.3e}",
            cert.worst_monomial, cert.max_abs_deviation
        )));
    }
    f.certificate = Some(cert);
    Ok(f)
}

// ---------------------------------------------------------------------------
// degree-5 sphere family (two-orbit Stroud layout, thinned vertices)
// ---------------------------------------------------------------------------

/// Which measure the two-orbit degree-5 construction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sphere5Kind {
    Sphere,
    Gaussian,
    Ball,
}

/// Positive interior 5-cubature with `2^k + 2n` points on the sphere,
/// Gaussian space or ball (`n >= 6`): axis points `+-r e_i` and a thinned
/// class of scaled cube vertices `s (+-1, ..., +-1)`.
///
/// The vertex class is cut to a Kerdock array when `ceil(log2 n)` is even,
/// otherwise to a strength-5 BCH dual of length `2 ceil`, reduced by an
/// annihilating projection when `n` is at most `2^{2m} + 2^m`.
pub fn build_sphere5(n: usize, kind: Sphere5Kind, opts: &BuildOptions) -> Result<CubatureFormula> {
    if n < 6 {
        return Err(Error::InvalidParameter("the two-orbit layout needs n >= 6".into()));
    }
    let measure = match kind {
        Sphere5Kind::Sphere => MeasureSpec::Sphere { n },
        Sphere5Kind::Gaussian => MeasureSpec::Gaussian { n },
        Sphere5Kind::Ball => MeasureSpec::Ball { n },
    };
    let params = solve_two_orbit_moments(n, kind)?;

    let (array, k_exp) = sphere5_array(n, opts)?;
    if array.rows_count() != 1usize << k_exp {
        return Err(Error::ConstructionCheck(format!(
            "vertex array has {} rows, case table promises 2^{k_exp}",
            array.rows_count()
        )));
    }

    let r = params.rho.sqrt();
    let s = params.sigma.sqrt();
    let mut points = Vec::with_capacity((2 * n + array.rows_count()) * n);
    let mut weights = Vec::with_capacity(2 * n + array.rows_count());
    for i in 0..n {
        for sign in [1.0f64, -1.0] {
            let mut p = vec![0.0; n];
            p[i] = sign * r;
            points.extend(p);
            weights.push(params.axis_weight);
        }
    }
    let w_vertex = params.vertex_mass / array.rows_count() as f64;
    for row in 0..array.rows_count() {
        let syms = array.row(row);
        points.extend(syms.iter().map(|&b| if b == 0 { s } else { -s }));
        weights.push(w_vertex);
    }
    let mut f = CubatureFormula::new(measure, points, weights, 5)?;
    f.degree = 5;
    if f.count() != (1usize << k_exp) + 2 * n {
        return Err(Error::ConstructionCheck(format!(
            "point count {} != 2^{k_exp} + 2n",
            f.count()
        )));
    }
    if !f.flags.positive {
        return Err(Error::ConstructionCheck("two-orbit weights not positive".into()));
    }
    Ok(f)
}

struct TwoOrbitParams {
    rho: f64,
    sigma: f64,
    axis_weight: f64,
    vertex_mass: f64,
}

/// Solves the degree-5 moment system for the two-orbit layout exactly in
/// rationals: mass, `x1^2`, `x1^4`, `x1^2 x2^2`.
fn solve_two_orbit_moments(n: usize, kind: Sphere5Kind) -> Result<TwoOrbitParams> {
    let nr = BigRational::from_integer(BigInt::from(n as i64));
    let one = BigRational::one();
    let (m2, m4, m22) = match kind {
        Sphere5Kind::Sphere => {
            let np2 = &nr + BigRational::from_integer(BigInt::from(2));
            (
                one.clone() / nr.clone(),
                BigRational::from_integer(BigInt::from(3)) / (&nr * &np2),
                one.clone() / (&nr * &np2),
            )
        }
        Sphere5Kind::Gaussian => (
            BigRational::new(BigInt::from(1), BigInt::from(2)),
            BigRational::new(BigInt::from(3), BigInt::from(4)),
            BigRational::new(BigInt::from(1), BigInt::from(4)),
        ),
        Sphere5Kind::Ball => {
            let np2 = &nr + BigRational::from_integer(BigInt::from(2));
            let np4 = &nr + BigRational::from_integer(BigInt::from(4));
            (
                one.clone() / np2.clone(),
                BigRational::from_integer(BigInt::from(3)) / (&np2 * &np4),
                one.clone() / (&np2 * &np4),
            )
        }
    };
    // Quadratic for sigma = s^2:
    // (m4 - m22 - n m2^2) sigma^2 + 2 n m2 m22 sigma - m22 (n m22 + m4 - m22) = 0
    let a2 = &m4 - &m22 - &nr * &m2 * &m2;
    let a1 = BigRational::from_integer(BigInt::from(2)) * &nr * &m2 * &m22;
    let a0 = -&m22 * (&nr * &m22 + &m4 - &m22);
    let mut candidates: Vec<f64> = Vec::new();
    if a2.is_zero() {
        if !a1.is_zero() {
            candidates.push((-&a0 / &a1).to_f64().unwrap());
        }
    } else {
        let disc = &a1 * &a1 - BigRational::from_integer(BigInt::from(4)) * &a2 * &a0;
        if disc.is_negative() {
            return Err(Error::Infeasible(
                "two-orbit moment system has no real solution".into(),
            ));
        }
        let sq = disc.to_f64().unwrap().sqrt();
        let a1f = a1.to_f64().unwrap();
        let a2f = a2.to_f64().unwrap();
        candidates.push((-a1f + sq) / (2.0 * a2f));
        candidates.push((-a1f - sq) / (2.0 * a2f));
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    candidates.dedup();
    let m2f = m2.to_f64().unwrap();
    let m4f = m4.to_f64().unwrap();
    let m22f = m22.to_f64().unwrap();
    let nf = n as f64;
    for sigma in candidates.into_iter().rev() {
        if !(sigma > 1e-12) {
            continue;
        }
        let vertex_mass = m22f / (sigma * sigma);
        let axis_weight = (1.0 - vertex_mass) / (2.0 * nf);
        let denom = m2f - m22f / sigma;
        if denom.abs() < 1e-300 {
            continue;
        }
        let rho = (m4f - m22f) / denom;
        if vertex_mass > 0.0 && axis_weight > 0.0 && rho > 0.0 {
            return Ok(TwoOrbitParams { rho, sigma, axis_weight, vertex_mass });
        }
    }
    Err(Error::Infeasible(
        "no positive-weight solution of the two-orbit moment system".into(),
    ))
}

/// Case table for the vertex array: `k` with `2^k` surviving vertices.
fn sphere5_array(n: usize, opts: &BuildOptions) -> Result<(OrthogonalArray, u32)> {
    let mbits = ceil_log2(n);
    if mbits.is_multiple_of(2) {
        // 2^{2m-1} < n <= 2^{2m}: Kerdock, k = 4m = 2 mbits
        let array = kerdock_array_seeded(mbits.max(4), opts.array.seed)?;
        let array = if array.len() > n {
            oa::project_array(&array, &(0..n).collect::<Vec<_>>())?
        } else {
            array
        };
        if count_distinct_rows(&array) != array.rows_count() {
            return Err(Error::ConstructionCheck(
                "Kerdock projection collapsed rows; point count would drop".into(),
            ));
        }
        Ok((array, 2 * mbits.max(4)))
    } else {
        let m = (mbits - 1) / 2; // length 2^{2m+1}
        let array = bch_dual_array_with(2, mbits, 5, &opts.array)?;
        let boundary = (1usize << (2 * m)) + (1usize << m);
        if n <= boundary {
            // annihilate a weight-(2^{2m} - 2^m) row and halve the array
            let target_weight = (1usize << (2 * m)) - (1usize << m);
            let kill = (0..array.rows_count())
                .map(|r| array.row(r))
                .find(|row| row.iter().filter(|&&s| s != 0).count() == target_weight)
                .map(|row| row.to_vec())
                .ok_or_else(|| {
                    Error::ConstructionCheck(format!(
                        "no weight-{target_weight} row available to annihilate"
                    ))
                })?;
            let reduced = oa::project_annihilating(&array, n, &[kill])?;
            Ok((reduced, (4 * m + 2)))
        } else {
            let array = oa::project_array(&array, &(0..n).collect::<Vec<_>>())?;
            if count_distinct_rows(&array) != array.rows_count() {
                return Err(Error::ConstructionCheck(
                    "BCH projection collapsed rows; point count would drop".into(),
                ));
            }
            Ok((array, (4 * m + 3)))
        }
    }
}

fn count_distinct_rows(a: &OrthogonalArray) -> usize {
    use std::collections::HashSet;
    let mut set = HashSet::new();
    for r in 0..a.rows_count() {
        set.insert(a.row(r));
    }
    set.len()
}

// ---------------------------------------------------------------------------
// radial separation of variables: ball, shells, radial exponential
// ---------------------------------------------------------------------------

fn sphere_factor(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    if t == 5 && n >= 6 {
        return build_sphere5(n, Sphere5Kind::Sphere, opts);
    }
    if t.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "sphere factors need odd t (projection path)".into(),
        ));
    }
    let g = build_gaussian(n, t, opts)?;
    radial_project_sphere(&g, t)
}

/// Product of a sphere `t`-formula with an interior Gauss rule for the
/// radial density of the given solid measure.
fn radial_product(
    measure: MeasureSpec,
    sphere: &CubatureFormula,
    t: u32,
) -> Result<CubatureFormula> {
    let n = measure.ambient_dim();
    let r_pts = (t.div_ceil(2) + 1).max(1) as usize;
    let radial_moments = measure.radial_moments(2 * r_pts)?;
    let radial = gauss_from_moments(&radial_moments, r_pts)?;
    let mut points = Vec::with_capacity(sphere.count() * r_pts * n);
    let mut weights = Vec::with_capacity(sphere.count() * r_pts);
    for (ri, &rad) in radial.points.iter().enumerate() {
        for i in 0..sphere.count() {
            points.extend(sphere.point(i).iter().map(|&v| rad * v));
            weights.push(radial.weights[ri] * sphere.weight(i));
        }
    }
    CubatureFormula::new(measure, points, weights, t)
}

/// `t`-cubature on the unit ball (`t` odd, or `t = 5` via the two-orbit
/// interior layout for `n >= 6`).
pub fn build_ball(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    if t == 5 && n >= 6 {
        return build_sphere5(n, Sphere5Kind::Ball, opts);
    }
    let sphere = sphere_factor(n, t, opts)?;
    radial_product(MeasureSpec::Ball { n }, &sphere, t)
}

pub fn build_spherical_shell(
    n: usize,
    t: u32,
    r: f64,
    opts: &BuildOptions,
) -> Result<CubatureFormula> {
    let sphere = sphere_factor(n, t, opts)?;
    radial_product(MeasureSpec::SphericalShell { n, r }, &sphere, t)
}

pub fn build_radial_exponential(n: usize, t: u32, opts: &BuildOptions) -> Result<CubatureFormula> {
    let sphere = sphere_factor(n, t, opts)?;
    radial_product(MeasureSpec::RadialExponential { n }, &sphere, t)
}

/// `t`-cubature on the cubical shell: the `C_{n-1}` formula repeated on the
/// `2n` facets, times a radial rule for `rho^{n-1}` on `[r, 1]`.
pub fn build_cubical_shell(n: usize, t: u32, r: f64, opts: &BuildOptions) -> Result<CubatureFormula> {
    if n < 2 {
        return Err(Error::InvalidParameter("shell needs n >= 2".into()));
    }
    let face = build_cube(n - 1, t, opts)?;
    let measure = MeasureSpec::CubicalShell { n, r };
    let r_pts = (t.div_ceil(2) + 1).max(1) as usize;
    let radial_moments = measure.radial_moments(2 * r_pts)?;
    let radial = gauss_from_moments(&radial_moments, r_pts)?;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let facet_w = 1.0 / (2 * n) as f64;
    for (ri, &rad) in radial.points.iter().enumerate() {
        for d in 0..n {
            for sign in [1.0f64, -1.0] {
                for i in 0..face.count() {
                    let fp = face.point(i);
                    let mut p = Vec::with_capacity(n);
                    p.extend_from_slice(&fp[..d]);
                    p.push(sign);
                    p.extend_from_slice(&fp[d..]);
                    points.extend(p.iter().map(|&v| rad * v));
                    weights.push(radial.weights[ri] * facet_w * face.weight(i));
                }
            }
        }
    }
    CubatureFormula::new(measure, points, weights, t)
}

// ---------------------------------------------------------------------------
// bounds
// ---------------------------------------------------------------------------

/// Point-count bounds for degree-`t` formulas in dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsReport {
    /// `C(n + t, t)`: the non-constructive positive-interior bound.
    pub tchakaloff: u128,
    /// For odd `t`: twice the number of even monomials of degree < t.
    pub tchakaloff_symmetric: Option<u128>,
    /// `C(n + floor(t/2), floor(t/2))`: dimension of degree-`t/2`
    /// polynomials (lower bound for any formula).
    pub stroud_lower_dim: u128,
    /// `C(n + floor(t/2) - 1, floor(t/2))`: the homogeneous count, reported
    /// alongside because published tables sometimes use this convention.
    pub stroud_lower_homogeneous: u128,
    /// Point count at which formula parameters meet the moment constraints:
    /// `ceil(dim / (n + 1))` of the relevant polynomial space.
    pub exact_determination: u128,
}

pub fn bounds(n: usize, t: u32, centrally_symmetric: bool) -> BoundsReport {
    let nn = n as u128;
    let tchakaloff = oa::binomial_u128(nn + t as u128, t as u128);
    let tchakaloff_symmetric = if centrally_symmetric && t % 2 == 1 {
        let mut dim = 0u128;
        let mut j = 0u32;
        while j < t {
            dim += oa::binomial_u128(nn + j as u128 - 1, j as u128);
            j += 2;
        }
        Some(2 * dim)
    } else {
        None
    };
    let s = (t / 2) as u128;
    let stroud_lower_dim = oa::binomial_u128(nn + s, s);
    let stroud_lower_homogeneous = oa::binomial_u128(nn + s - 1, s);
    let relevant = tchakaloff_symmetric.unwrap_or(tchakaloff);
    let exact_determination = relevant.div_ceil(nn + 1);
    BoundsReport {
        tchakaloff,
        tchakaloff_symmetric,
        stroud_lower_dim,
        stroud_lower_homogeneous,
        exact_determination,
    }
}
