//! One-dimensional equal-weight building blocks: the convolutional
//! Chebyshev-type quadrature on `[-1, 1]`, small explicit rules, a numerical
//! equal-weight finder for Gaussian and exponential weights, and Gauss rules
//! from raw moments for radial factors.
//!
//! Every constructor runs the degree gate (moment match to `1e-12`) before
//! returning, so no unverified formula leaves this module.

use crate::{Error, Result};

/// Moment tolerance of the degree gate (absolute, on normalized moments).
pub const GATE_TOL: f64 = 1e-12;

/// 1-D reference measures for quadrature formulas.
#[derive(Debug, Clone, PartialEq)]
pub enum QuadMeasure {
    /// Uniform on `[-1, 1]`.
    Uniform,
    /// Standard normal (unit variance): even moments `(k-1)!!`.
    GaussianUnit,
    /// Density proportional to `exp(-x^2)`: even moments `(k-1)!!/2^{k/2}`.
    GaussianExpSq,
    /// Density `exp(-x)` on `[0, inf)`: moments `k!`.
    ExponentialRay,
    /// Explicit moment list `m_0, m_1, ...`.
    Moments(Vec<f64>),
}

impl QuadMeasure {
    pub fn moment(&self, k: u32) -> Result<f64> {
        let v = match self {
            QuadMeasure::Uniform => {
                if k % 2 == 1 {
                    0.0
                } else {
                    1.0 / (k as f64 + 1.0)
                }
            }
            QuadMeasure::GaussianUnit => {
                if k % 2 == 1 {
                    0.0
                } else {
                    double_factorial(k.saturating_sub(1))
                }
            }
            QuadMeasure::GaussianExpSq => {
                if k % 2 == 1 {
                    0.0
                } else {
                    double_factorial(k.saturating_sub(1)) / 2f64.powi(k as i32 / 2)
                }
            }
            QuadMeasure::ExponentialRay => (2..=k as u64).map(|v| v as f64).product(),
            QuadMeasure::Moments(m) => *m.get(k as usize).ok_or_else(|| {
                Error::InvalidParameter(format!("moment {k} beyond supplied list"))
            })?,
        };
        Ok(v)
    }
}

/// A multiset of real points with weights, a measure tag and a verified
/// degree; optionally the convolution decomposition into +-z_i pairs.
#[derive(Debug, Clone)]
pub struct Quadrature1D {
    pub measure: QuadMeasure,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
    pub degree: u32,
    /// `z_1 > z_2 > ... > z_s` when the rule is a convolution of sign pairs.
    pub pair_offsets: Option<Vec<f64>>,
    pub symmetric: bool,
    pub equal_weight: bool,
}

impl Quadrature1D {
    /// Builds and gates a quadrature; fails if any invariant is violated.
    pub fn checked(
        measure: QuadMeasure,
        points: Vec<f64>,
        weights: Vec<f64>,
        degree: u32,
        pair_offsets: Option<Vec<f64>>,
    ) -> Result<Self> {
        if points.len() != weights.len() || points.is_empty() {
            return Err(Error::InvalidParameter("points/weights mismatch".into()));
        }
        let wsum: f64 = weights.iter().sum();
        if (wsum - 1.0).abs() > 1e-14 {
            return Err(Error::ConstructionCheck(format!("weights sum to {wsum}, not 1")));
        }
        let w0 = weights[0];
        let equal_weight = weights.iter().all(|&w| (w - w0).abs() <= 1e-15);
        let symmetric = is_symmetric_multiset(&points);
        let q = Quadrature1D {
            measure,
            points,
            weights,
            degree,
            pair_offsets,
            symmetric,
            equal_weight,
        };
        q.check_degree_gate(GATE_TOL)?;
        Ok(q)
    }

    /// Weighted power sum `sum w_a p_a^k`.
    pub fn power_sum(&self, k: u32) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(&p, &w)| w * p.powi(k as i32))
            .sum()
    }

    /// Checks `sum w p^k = m_k` for all `k <= degree`; returns the worst
    /// deviation on success.
    pub fn check_degree_gate(&self, tol: f64) -> Result<f64> {
        let mut worst = 0.0f64;
        for k in 0..=self.degree {
            let m = self.measure.moment(k)?;
            let dev = (self.power_sum(k) - m).abs();
            if dev > tol * m.abs().max(1.0) {
                return Err(Error::VerificationFailed(format!(
                    "degree gate: moment {k} off by {dev:.3e}"
                )));
            }
            worst = worst.max(dev);
        }
        Ok(worst)
    }

    /// True if the rule misses the degree-`k` moment, for sharpness checks.
    pub fn fails_at_degree(&self, k: u32) -> bool {
        match self.measure.moment(k) {
            Ok(m) => (self.power_sum(k) - m).abs() > GATE_TOL * m.abs().max(1.0) * 10.0,
            Err(_) => true,
        }
    }

    /// Same points scaled by `c`, re-gated against `new_measure` (whose
    /// moments must be the `c^k`-scaled originals).
    pub fn scaled(&self, c: f64, new_measure: QuadMeasure) -> Result<Quadrature1D> {
        Quadrature1D::checked(
            new_measure,
            self.points.iter().map(|&p| c * p).collect(),
            self.weights.clone(),
            self.degree,
            self.pair_offsets.as_ref().map(|z| z.iter().map(|&v| c * v).collect()),
        )
    }
}

fn is_symmetric_multiset(points: &[f64]) -> bool {
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    (0..n).all(|i| (sorted[i] + sorted[n - 1 - i]).abs() <= 1e-13)
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

/// The 2-point Gauss rule on `[-1, 1]`: points `+-1/sqrt(3)`, degree 3.
pub fn gauss_2point_uniform() -> Quadrature1D {
    let z = 1.0 / 3f64.sqrt();
    Quadrature1D::checked(QuadMeasure::Uniform, vec![-z, z], vec![0.5, 0.5], 3, Some(vec![z]))
        .expect("fixed rule gates")
}

/// Equal-weight 2-point rule for `exp(-x)` on the ray: points `{0, 2}`,
/// degree 2.
pub fn exp_ray_2point() -> Quadrature1D {
    Quadrature1D::checked(
        QuadMeasure::ExponentialRay,
        vec![0.0, 2.0],
        vec![0.5, 0.5],
        2,
        None,
    )
    .expect("fixed rule gates")
}

/// The equal-weight `(2s+1)`-quadrature on `[-1, 1]` whose `2^s` points are
/// the sign sums `+-z_1 +- ... +- z_s`; the squared offsets are the roots of
/// `Q(x) = x^s - x^{s-1}/3 + x^{s-2}/45 - ...` with
/// `c_k = (-1)^k / prod_{j<=k} (4^j - 1)`.
pub fn convolutional_chebyshev(s: u32) -> Result<Quadrature1D> {
    if s == 0 || s > 12 {
        return Err(Error::InvalidParameter(format!(
            "convolution order {s} outside the conditioned range 1..=12"
        )));
    }
    let s_us = s as usize;
    // Descending-power coefficients c_0 = 1, c_k = -c_{k-1} / (4^k - 1).
    let mut coeffs = Vec::with_capacity(s_us + 1);
    let mut c = 1.0f64;
    coeffs.push(c);
    for j in 1..=s_us {
        c = -c / ((4f64.powi(j as i32)) - 1.0);
        coeffs.push(c);
    }
    let roots = poly_roots_positive(&coeffs, s_us)?;
    // all roots real, simple, in (0, 1), strictly decreasing
    for w in roots.windows(2) {
        if w[1] >= w[0] {
            return Err(Error::ConstructionCheck("roots not strictly decreasing".into()));
        }
    }
    if roots.iter().any(|&r| !(0.0 < r && r < 1.0)) {
        return Err(Error::ConstructionCheck(
            "root outside (0,1); contradicts the coefficient pattern".into(),
        ));
    }
    let sum: f64 = roots.iter().sum();
    if (sum - 1.0 / 3.0).abs() > 1e-12 {
        return Err(Error::ConstructionCheck(format!(
            "sum of squared offsets is {sum}, expected 1/3"
        )));
    }
    let z: Vec<f64> = roots.iter().map(|&r| r.sqrt()).collect();
    let count = 1usize << s_us;
    let mut points = Vec::with_capacity(count);
    for mask in 0..count {
        let mut x = 0.0;
        for (j, &zj) in z.iter().enumerate() {
            x += if mask >> j & 1 == 1 { -zj } else { zj };
        }
        points.push(x);
    }
    if points.iter().any(|&p| p.abs() >= 1.0) {
        return Err(Error::ConstructionCheck("points escape (-1, 1)".into()));
    }
    let w = 1.0 / count as f64;
    Quadrature1D::checked(QuadMeasure::Uniform, points, vec![w; count], 2 * s + 1, Some(z))
}

/// Roots of a descending-coefficient polynomial with `deg` simple positive
/// roots: geometric-grid bracketing, bisection, Newton polish.
fn poly_roots_positive(coeffs: &[f64], deg: usize) -> Result<Vec<f64>> {
    let eval = |x: f64| -> f64 {
        let mut acc = 0.0;
        for &c in coeffs {
            acc = acc * x + c;
        }
        acc
    };
    let deriv = |x: f64| -> f64 {
        let n = coeffs.len() - 1;
        let mut acc = 0.0;
        for (i, &c) in coeffs[..n].iter().enumerate() {
            acc = acc * x + c * (n - i) as f64;
        }
        acc
    };
    // Smallest root is near |c_s/c_{s-1}|, largest below 1/2.
    let lo = (coeffs[deg] / coeffs[deg - 1]).abs() / 16.0;
    let hi = 0.5;
    let mut samples = 256 * deg;
    for _attempt in 0..4 {
        let ratio = (hi / lo).powf(1.0 / samples as f64);
        let mut brackets = Vec::with_capacity(deg);
        let mut x_prev = lo;
        let mut f_prev = eval(lo);
        for i in 1..=samples {
            let x = lo * ratio.powi(i as i32);
            let f = eval(x);
            if f_prev == 0.0 {
                brackets.push((x_prev, x_prev));
            } else if f_prev * f < 0.0 {
                brackets.push((x_prev, x));
            }
            x_prev = x;
            f_prev = f;
        }
        if brackets.len() == deg {
            let mut roots = Vec::with_capacity(deg);
            for (mut a, mut b) in brackets {
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if mid <= a || mid >= b {
                        break;
                    }
                    if eval(a) * eval(mid) <= 0.0 {
                        b = mid;
                    } else {
                        a = mid;
                    }
                }
                let mut r = 0.5 * (a + b);
                for _ in 0..4 {
                    let d = deriv(r);
                    if d != 0.0 {
                        r -= eval(r) / d;
                    }
                }
                roots.push(r);
            }
            roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
            return Ok(roots);
        }
        samples *= 8;
    }
    Err(Error::NonConvergence(format!(
        "expected {deg} positive roots, bracketing found a different count"
    )))
}

/// Gauss rule with `r` points from the moments `m_0..m_{2r-1}`: recurrence
/// coefficients by the Chebyshev algorithm, nodes as eigenvalues of the
/// Jacobi matrix (Sturm bisection), weights by the Christoffel formula.
pub fn gauss_from_moments(moments: &[f64], r: usize) -> Result<Quadrature1D> {
    if r == 0 || moments.len() < 2 * r {
        return Err(Error::InvalidParameter(format!(
            "need 2r = {} moments, got {}",
            2 * r,
            moments.len()
        )));
    }
    let (alpha, beta) = chebyshev_recurrence(moments, r)?;
    let nodes = jacobi_eigenvalues(&alpha, &beta);
    // Christoffel weights from the orthonormal recurrence.
    let mut weights = Vec::with_capacity(r);
    for &x in &nodes {
        let mut p_prev = 0.0f64;
        let mut p = 1.0 / beta[0].sqrt();
        let mut sum = p * p;
        for k in 0..r - 1 {
            let p_next = ((x - alpha[k]) * p - beta[k].sqrt() * p_prev) / beta[k + 1].sqrt();
            p_prev = p;
            p = p_next;
            sum += p * p;
        }
        weights.push(1.0 / sum);
    }
    if weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::ConstructionCheck("non-positive Gauss weight".into()));
    }
    let quad = Quadrature1D {
        measure: QuadMeasure::Moments(moments.to_vec()),
        points: nodes,
        weights,
        degree: (2 * r - 1) as u32,
        pair_offsets: None,
        symmetric: false,
        equal_weight: false,
    };
    let mut q = quad;
    q.symmetric = is_symmetric_multiset(&q.points);
    let w0 = q.weights[0];
    q.equal_weight = q.weights.iter().all(|&w| (w - w0).abs() <= 1e-15);
    let tol = GATE_TOL;
    for k in 0..=q.degree {
        let m = q.measure.moment(k)?;
        let dev = (q.power_sum(k) - m).abs();
        if dev > tol * m.abs().max(1.0) {
            return Err(Error::VerificationFailed(format!(
                "Gauss rule misses moment {k} by {dev:.3e}"
            )));
        }
    }
    Ok(q)
}

/// Moments -> three-term recurrence (`alpha_k`, `beta_k`); fails when the
/// Hankel form is not positive definite.
fn chebyshev_recurrence(m: &[f64], r: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let cols = 2 * r;
    let mut alpha = vec![0.0f64; r];
    let mut beta = vec![0.0f64; r];
    if m[0] <= 0.0 {
        return Err(Error::InvalidParameter("mass m_0 must be positive".into()));
    }
    alpha[0] = m[1] / m[0];
    beta[0] = m[0];
    if r == 1 {
        return Ok((alpha, beta));
    }
    let mut sigma_prev: Vec<f64> = vec![0.0; cols]; // sigma_{k-2}
    let mut sigma: Vec<f64> = m.to_vec(); // sigma_{k-1}, starts at k=1
    for k in 1..r {
        let mut next = vec![0.0f64; cols];
        for l in k..=(cols - k - 1) {
            next[l] = sigma[l + 1] - alpha[k - 1] * sigma[l]
                - if k >= 2 { beta[k - 1] * sigma_prev[l] } else { 0.0 };
        }
        let denom = next[k];
        let denom_prev = sigma[k - 1];
        if denom <= 0.0 || denom_prev <= 0.0 {
            return Err(Error::InvalidParameter(
                "moment sequence is not positive definite".into(),
            ));
        }
        alpha[k] = next[k + 1] / next[k] - sigma[k] / sigma[k - 1];
        beta[k] = next[k] / sigma[k - 1];
        sigma_prev = sigma;
        sigma = next;
    }
    Ok((alpha, beta))
}

/// Eigenvalues of the symmetric tridiagonal Jacobi matrix with diagonal
/// `alpha` and off-diagonal `sqrt(beta_k)`, by Sturm-count bisection.
fn jacobi_eigenvalues(alpha: &[f64], beta: &[f64]) -> Vec<f64> {
    let r = alpha.len();
    let off2: Vec<f64> = (1..r).map(|k| beta[k]).collect(); // squared off-diagonals
    // Gershgorin bounds
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..r {
        let b_left = if i > 0 { off2[i - 1].sqrt() } else { 0.0 };
        let b_right = if i < r - 1 { off2[i].sqrt() } else { 0.0 };
        lo = lo.min(alpha[i] - b_left - b_right);
        hi = hi.max(alpha[i] + b_left + b_right);
    }
    let count_below = |x: f64| -> usize {
        let mut count = 0;
        let mut d = alpha[0] - x;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..r {
            let denom = if d.abs() < 1e-300 { 1e-300f64.copysign(d) } else { d };
            d = (alpha[i] - x) - off2[i - 1] / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let mut out = Vec::with_capacity(r);
    for j in 0..r {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if count_below(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
        }
        out.push(0.5 * (a + b));
    }
    out
}

/// Multiset of `q` points with equal weight `1/q` matching moments `0..=t`
/// of the measure, found by a damped Newton scan over multiplicity patterns
/// (deterministic order, deterministic seeds: output is reproducible
/// bit-for-bit).
pub fn equal_weight_find(measure: QuadMeasure, q: u32, t: u32) -> Result<Quadrature1D> {
    match measure {
        QuadMeasure::GaussianUnit => equal_weight_gaussian(q, t),
        QuadMeasure::ExponentialRay => equal_weight_exponential(q, t),
        _ => Err(Error::InvalidParameter(
            "equal-weight finder supports the Gaussian and exponential-ray measures".into(),
        )),
    }
}

fn equal_weight_gaussian(q: u32, t: u32) -> Result<Quadrature1D> {
    if q < 2 {
        return Err(Error::InvalidParameter("q must be at least 2".into()));
    }
    let s = (t / 2).max(1) as usize; // moment equations (even moments 2..2s)
    let targets: Vec<f64> = (1..=s).map(|i| double_factorial(2 * i as u32 - 1)).collect();
    let mut tried = 0usize;
    // Patterns: z zeros plus d >= s magnitude pairs with multiplicities m_j,
    // z = q - 2*sum(m); scanned with the fewest distinct magnitudes and the
    // smallest support first.  d > s mirrors the perturbation argument: one
    // extra pair solved by least-norm steps near the Gauss-Hermite seed.
    let max_pairs = (q as usize) / 2;
    for d in s..=(s + 1).min(max_pairs) {
        for total_pairs in d..=max_pairs {
            let z = q as usize - 2 * total_pairs;
            for m in compositions(total_pairs, d) {
                tried += 1;
                let c: Vec<f64> = m.iter().map(|&mj| 2.0 * mj as f64 / q as f64).collect();
                let seeds = hermite_seeds(d, z > 0)?;
                if let Some(y) = newton_power_system(&c, &targets, &seeds) {
                    if y.iter().all(|&v| v > 1e-9) {
                        let mut points = vec![0.0f64; z];
                        for (j, &yj) in y.iter().enumerate() {
                            let a = yj.sqrt();
                            for _ in 0..m[j] {
                                points.push(a);
                                points.push(-a);
                            }
                        }
                        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
                        let w = 1.0 / q as f64;
                        if let Ok(quad) = Quadrature1D::checked(
                            QuadMeasure::GaussianUnit,
                            points,
                            vec![w; q as usize],
                            t,
                            None,
                        ) {
                            return Ok(quad);
                        }
                    }
                }
            }
        }
    }
    Err(Error::Infeasible(format!(
        "no equal-weight Gaussian {t}-quadrature with q={q} ({tried} patterns tried)"
    )))
}

fn equal_weight_exponential(q: u32, t: u32) -> Result<Quadrature1D> {
    if q < t {
        return Err(Error::Infeasible(format!(
            "q={q} cannot carry {t} distinct support points"
        )));
    }
    let eqs = t as usize;
    let targets: Vec<f64> =
        (1..=eqs).map(|i| (1..=i as u64).map(|v| v as f64).product()).collect();
    let mut tried = 0usize;
    for d in eqs..=(eqs + 1).min(q as usize) {
        for m in compositions(q as usize, d) {
            tried += 1;
            let c: Vec<f64> = m.iter().map(|&mj| mj as f64 / q as f64).collect();
            let seeds = laguerre_seeds(d)?;
            if let Some(x) = newton_power_system(&c, &targets, &seeds) {
                if x.iter().all(|&v| v > -1e-9) {
                    let mut points = Vec::with_capacity(q as usize);
                    for (j, &xj) in x.iter().enumerate() {
                        let v = if xj.abs() < 1e-9 { 0.0 } else { xj };
                        for _ in 0..m[j] {
                            points.push(v);
                        }
                    }
                    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let w = 1.0 / q as f64;
                    if let Ok(quad) = Quadrature1D::checked(
                        QuadMeasure::ExponentialRay,
                        points,
                        vec![w; q as usize],
                        t,
                        None,
                    ) {
                        return Ok(quad);
                    }
                }
            }
        }
    }
    Err(Error::Infeasible(format!(
        "no equal-weight exponential {t}-quadrature with q={q} ({tried} patterns tried)"
    )))
}

/// Positive Gauss-Hermite nodes squared, used to seed the Newton iteration.
fn hermite_seeds(s: usize, with_zero: bool) -> Result<Vec<f64>> {
    let r = 2 * s + usize::from(with_zero);
    let moments: Vec<f64> =
        (0..2 * r).map(|k| QuadMeasure::GaussianUnit.moment(k as u32).unwrap()).collect();
    let gh = gauss_from_moments(&moments, r)?;
    let mut pos: Vec<f64> = gh.points.iter().copied().filter(|&x| x > 1e-9).collect();
    pos.sort_by(|a, b| b.partial_cmp(a).unwrap());
    if pos.len() < s {
        return Err(Error::NonConvergence("not enough positive Hermite nodes".into()));
    }
    Ok(pos[..s].iter().map(|&x| x * x).collect())
}

fn laguerre_seeds(d: usize) -> Result<Vec<f64>> {
    let moments: Vec<f64> =
        (0..2 * d).map(|k| QuadMeasure::ExponentialRay.moment(k as u32).unwrap()).collect();
    let gl = gauss_from_moments(&moments, d)?;
    let mut pts = gl.points.clone();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(pts)
}

/// Damped Newton for `sum_j c_j y_j^i = targets[i-1]`, `i = 1..=s`, in `d`
/// unknowns with `d >= s`: square systems take plain Newton steps,
/// underdetermined ones the least-norm step `J^T (J J^T)^{-1} (-r)` (the
/// extra points are perturbed as little as possible away from the seed).
fn newton_power_system(c: &[f64], targets: &[f64], seed: &[f64]) -> Option<Vec<f64>> {
    let s = targets.len();
    let d = c.len();
    debug_assert!(d >= s && seed.len() == d);
    let mut y = seed.to_vec();
    let scale = targets.iter().fold(1.0f64, |a, &b| a.max(b.abs()));
    let residual = |y: &[f64]| -> Vec<f64> {
        (1..=s)
            .map(|i| {
                y.iter().zip(c).map(|(&yj, &cj)| cj * yj.powi(i as i32)).sum::<f64>()
                    - targets[i - 1]
            })
            .collect()
    };
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    let mut r = residual(&y);
    for _ in 0..200 {
        if norm(&r) <= 1e-13 * scale {
            return Some(y);
        }
        // Jacobian J[i][j] = i c_j y_j^{i-1}
        let mut jac = vec![vec![0.0f64; d]; s];
        for (i, row) in jac.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (i as f64 + 1.0) * c[j] * y[j].powi(i as i32);
            }
        }
        let rhs: Vec<f64> = r.iter().map(|&v| -v).collect();
        let delta = if d == s {
            solve_dense(jac, rhs)?
        } else {
            // least-norm: delta = J^T u with (J J^T) u = rhs
            let mut jjt = vec![vec![0.0f64; s]; s];
            for i in 0..s {
                for k in 0..s {
                    jjt[i][k] = (0..d).map(|j| jac[i][j] * jac[k][j]).sum();
                }
            }
            let u = solve_dense(jjt, rhs)?;
            (0..d).map(|j| (0..s).map(|i| jac[i][j] * u[i]).sum()).collect()
        };
        let mut lambda = 1.0f64;
        let mut improved = false;
        for _ in 0..30 {
            let trial: Vec<f64> =
                y.iter().zip(&delta).map(|(&yi, &di)| yi + lambda * di).collect();
            let rt = residual(&trial);
            if norm(&rt) < norm(&r) {
                y = trial;
                r = rt;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if !improved {
            return None;
        }
    }
    if norm(&r) <= 1e-13 * scale {
        Some(y)
    } else {
        None
    }
}

/// Gaussian elimination with partial pivoting for the small Newton systems.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap()
        })?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for i in col + 1..n {
            let f = a[i][col] / a[col][col];
            if f != 0.0 {
                for j in col..n {
                    a[i][j] -= f * a[col][j];
                }
                b[i] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut v = b[i];
        for j in i + 1..n {
            v -= a[i][j] * x[j];
        }
        x[i] = v / a[i][i];
    }
    Some(x)
}

/// Compositions of `total` into exactly `parts` positive summands, in
/// lexicographic order.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=(total - (parts - 1)) {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 || total < parts {
        return out;
    }
    let mut prefix = Vec::new();
    rec(total, parts, &mut prefix, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_2point_degree_exactly_3() {
        let g = gauss_2point_uniform();
        assert!((g.power_sum(2) - 1.0 / 3.0).abs() < 1e-15);
        assert!(g.power_sum(3).abs() < 1e-15);
        // x^4: 1/9 != 1/5
        assert!(g.fails_at_degree(4));
        assert!(g.symmetric && g.equal_weight);
    }

    #[test]
    fn exp_ray_degree_exactly_2() {
        let e = exp_ray_2point();
        assert_eq!(e.power_sum(1), 1.0);
        assert_eq!(e.power_sum(2), 2.0);
        assert!(e.fails_at_degree(3)); // 4 != 6
    }

    #[test]
    fn chebyshev_s1_is_gauss_2point() {
        let q = convolutional_chebyshev(1).unwrap();
        assert_eq!(q.points.len(), 2);
        let z = q.pair_offsets.as_ref().unwrap()[0];
        assert!((z - 1.0 / 3f64.sqrt()).abs() < 1e-14);
        assert_eq!(q.degree, 3);
    }

    #[test]
    fn chebyshev_s2_closed_form() {
        // z^2 in {(5+sqrt5)/30, (5-sqrt5)/30}
        let q = convolutional_chebyshev(2).unwrap();
        let z = q.pair_offsets.as_ref().unwrap();
        let hi = ((5.0 + 5f64.sqrt()) / 30.0).sqrt();
        let lo = ((5.0 - 5f64.sqrt()) / 30.0).sqrt();
        assert!((z[0] - hi).abs() < 1e-12, "{} vs {}", z[0], hi);
        assert!((z[1] - lo).abs() < 1e-12);
        assert!(q.check_degree_gate(1e-12).is_ok());
        assert!(q.fails_at_degree(6));
    }

    #[test]
    fn chebyshev_s3_matches_published_digits() {
        let q = convolutional_chebyshev(3).unwrap();
        let z = q.pair_offsets.as_ref().unwrap();
        assert!((z[0] - 0.500128).abs() < 5e-7, "{}", z[0]);
        assert!((z[1] - 0.243941).abs() < 5e-7, "{}", z[1]);
        assert!((z[2] - 0.153942).abs() < 5e-7, "{}", z[2]);
        assert_eq!(q.degree, 7);
        assert!(q.fails_at_degree(8));
    }

    #[test]
    fn chebyshev_offsets_square_sum_third_up_to_s12() {
        for s in 1..=12 {
            let q = convolutional_chebyshev(s).unwrap();
            let z = q.pair_offsets.as_ref().unwrap();
            let sum: f64 = z.iter().map(|v| v * v).sum();
            assert!((sum - 1.0 / 3.0).abs() < 1e-11, "s={s}: {sum}");
            assert!(q.points.iter().all(|&p| p.abs() < 1.0), "interior at s={s}");
        }
    }

    #[test]
    fn gauss_from_moments_reproduces_legendre() {
        let m: Vec<f64> =
            (0..4).map(|k| QuadMeasure::Uniform.moment(k).unwrap()).collect();
        let g = gauss_from_moments(&m, 2).unwrap();
        let z = 1.0 / 3f64.sqrt();
        assert!((g.points[0] + z).abs() < 1e-12);
        assert!((g.points[1] - z).abs() < 1e-12);
        assert!((g.weights[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn gauss_from_moments_radial_weight() {
        // weight r^{n-1} on [0,1] with n=3: m_k = 3/(3+k); r=2 exact to k<=3
        let m: Vec<f64> = (0..4).map(|k| 3.0 / (3.0 + k as f64)).collect();
        let g = gauss_from_moments(&m, 2).unwrap();
        for k in 0..4u32 {
            assert!(
                (g.power_sum(k) - 3.0 / (3.0 + k as f64)).abs() < 1e-13,
                "k={k}"
            );
        }
        assert!(g.points.iter().all(|&p| 0.0 < p && p < 1.0));
    }

    #[test]
    fn gauss_from_moments_laguerre_closed_form() {
        let m: Vec<f64> =
            (0..4).map(|k| QuadMeasure::ExponentialRay.moment(k).unwrap()).collect();
        let g = gauss_from_moments(&m, 2).unwrap();
        let lo = 2.0 - 2f64.sqrt();
        let hi = 2.0 + 2f64.sqrt();
        assert!((g.points[0] - lo).abs() < 1e-12);
        assert!((g.points[1] - hi).abs() < 1e-12);
        assert!((g.weights[0] - (2.0 + 2f64.sqrt()) / 4.0).abs() < 1e-12);
        assert!((g.weights[1] - (2.0 - 2f64.sqrt()) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_from_moments_rejects_indefinite() {
        let m = vec![1.0, 0.0, -1.0, 0.0];
        assert!(gauss_from_moments(&m, 2).is_err());
    }

    #[test]
    fn equal_weight_gaussian_q2_t3() {
        let q = equal_weight_find(QuadMeasure::GaussianUnit, 2, 3).unwrap();
        assert_eq!(q.points.len(), 2);
        assert!((q.points[0] + 1.0).abs() < 1e-12);
        assert!((q.points[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn equal_weight_gaussian_q7_t5_closed_form() {
        // multiset {0,0,0,+-a,+-b}: a^2 = (3.5+sqrt(8.75))/2, b^2 the mate
        let q = equal_weight_find(QuadMeasure::GaussianUnit, 7, 5).unwrap();
        let a2 = (3.5 + 8.75f64.sqrt()) / 2.0;
        let b2 = (3.5 - 8.75f64.sqrt()) / 2.0;
        let zeros = q.points.iter().filter(|&&p| p == 0.0).count();
        assert_eq!(zeros, 3);
        let mut mags: Vec<f64> = q.points.iter().filter(|&&p| p > 0.0).map(|&p| p * p).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((mags[0] - b2).abs() < 1e-9, "{} vs {}", mags[0], b2);
        assert!((mags[1] - a2).abs() < 1e-9);
        assert!(q.symmetric && q.equal_weight);
        assert!(q.check_degree_gate(1e-12).is_ok());
    }

    #[test]
    fn equal_weight_gaussian_q5_t5_has_no_solution() {
        // a^2 b^2 would be negative (discriminant analysis)
        assert!(matches!(
            equal_weight_find(QuadMeasure::GaussianUnit, 5, 5),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn equal_weight_exponential_q2_t2() {
        let q = equal_weight_find(QuadMeasure::ExponentialRay, 2, 2).unwrap();
        assert_eq!(q.points.len(), 2);
        assert_eq!(q.points[0], 0.0);
        assert!((q.points[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn equal_weight_exponential_t3_lands_at_q7() {
        // q in {3,4,5} have no nonnegative solution; q = 7 does, with one
        // five-fold repeated interior point.
        for q in [3, 4, 5] {
            assert!(matches!(
                equal_weight_find(QuadMeasure::ExponentialRay, q, 3),
                Err(Error::Infeasible(_))
            ));
        }
        let f = equal_weight_find(QuadMeasure::ExponentialRay, 7, 3).unwrap();
        assert_eq!(f.points.len(), 7);
        assert!(f.points.iter().all(|&p| p >= 0.0));
        assert!(f.check_degree_gate(1e-12).is_ok());
    }

    #[test]
    fn equal_weight_is_reproducible() {
        let a = equal_weight_find(QuadMeasure::GaussianUnit, 7, 5).unwrap();
        let b = equal_weight_find(QuadMeasure::GaussianUnit, 7, 5).unwrap();
        assert_eq!(a.points, b.points);
        assert_eq!(a.weights, b.weights);
    }

    #[test]
    fn scaled_gaussian_matches_exp_sq_convention() {
        let unit = equal_weight_find(QuadMeasure::GaussianUnit, 2, 3).unwrap();
        let scaled = unit.scaled(1.0 / 2f64.sqrt(), QuadMeasure::GaussianExpSq).unwrap();
        assert!((scaled.power_sum(2) - 0.5).abs() < 1e-14);
    }
}
