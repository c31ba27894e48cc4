//! Hadamard matrices by Sylvester doubling and Paley's type-I construction,
//! and their reading as binary strength-3 orthogonal arrays.

use crate::field::is_prime;
use crate::oa::{self, OrthogonalArray, Provenance, VerifyMode};
use crate::{Error, Result};

/// A +-1 matrix with pairwise orthogonal rows, `H H^T = n I`.
pub type HadamardMatrix = Vec<Vec<i8>>;

/// True if the implemented constructions reach order `n`.
pub fn constructible(n: usize) -> bool {
    if n == 1 || n == 2 {
        return true;
    }
    if !n.is_multiple_of(4) {
        return false;
    }
    if is_paley_order(n) {
        return true;
    }
    n.is_multiple_of(2) && constructible(n / 2)
}

fn is_paley_order(n: usize) -> bool {
    n >= 4 && n.is_multiple_of(4) && is_prime((n - 1) as u64)
}

/// Constructible orders in `[lo, hi]`, for error reporting and order probing.
pub fn available_orders(lo: usize, hi: usize) -> Vec<usize> {
    (lo..=hi).filter(|&n| constructible(n)).collect()
}

/// Builds a Hadamard matrix of order `n` and checks `H H^T = n I` exactly.
pub fn hadamard_matrix(n: usize) -> Result<HadamardMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter("order must be positive".into()));
    }
    if !constructible(n) {
        let nearby = available_orders(n.saturating_sub(8), n + 16);
        return Err(Error::Infeasible(format!(
            "no Sylvester/Paley construction for order {n}; available orders nearby: {nearby:?}"
        )));
    }
    let h = build_order(n);
    check_orthogonal(&h)?;
    Ok(h)
}

fn build_order(n: usize) -> HadamardMatrix {
    if n == 1 {
        return vec![vec![1]];
    }
    if n == 2 {
        return vec![vec![1, 1], vec![1, -1]];
    }
    // Powers of two stay on the Sylvester chain; otherwise prefer Paley at
    // this order and fall back to doubling.
    if !n.is_power_of_two() && is_paley_order(n) {
        return paley(n);
    }
    sylvester_double(&build_order(n / 2))
}

fn sylvester_double(h: &HadamardMatrix) -> HadamardMatrix {
    let n = h.len();
    let mut out = vec![vec![0i8; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = h[i][j];
            out[i][j + n] = h[i][j];
            out[i + n][j] = h[i][j];
            out[i + n][j + n] = -h[i][j];
        }
    }
    out
}

/// Paley type I: for `p = n - 1` prime with `p = 3 (mod 4)`, `H = I + S`
/// with `S` the skew matrix built from the quadratic character.
fn paley(n: usize) -> HadamardMatrix {
    let p = n - 1;
    let mut chi = vec![0i8; p];
    for a in 1..p {
        chi[a * a % p] = 1;
    }
    for a in 1..p {
        if chi[a] == 0 {
            chi[a] = -1;
        }
    }
    let mut h = vec![vec![0i8; n]; n];
    h[0][0] = 1;
    for j in 1..n {
        h[0][j] = 1;
        h[j][0] = -1;
    }
    for i in 1..n {
        for j in 1..n {
            h[i][j] = if i == j { 1 } else { chi[(p + j - i) % p] };
        }
    }
    h
}

fn check_orthogonal(h: &HadamardMatrix) -> Result<()> {
    let n = h.len();
    for i in 0..n {
        for j in i..n {
            let dot: i64 = (0..n).map(|k| h[i][k] as i64 * h[j][k] as i64).sum();
            let expect = if i == j { n as i64 } else { 0 };
            if dot != expect {
                return Err(Error::ConstructionCheck(format!(
                    "rows {i} and {j} are not orthogonal"
                )));
            }
        }
    }
    Ok(())
}

/// Reads a Hadamard matrix of order `n` as an `OA(2n, n, 2, 3)`: columns are
/// sign-normalized so the first row is all `+1`, then the rows of `H` and
/// `-H` are mapped by `+1 -> 0`, `-1 -> 1`.
///
/// For the degenerate orders `n < 4` the verified strength is `min(3, n)`.
pub fn hadamard_to_oa(h: &HadamardMatrix) -> Result<OrthogonalArray> {
    check_orthogonal(h)?;
    let n = h.len();
    let signs: Vec<i8> = h[0].clone();
    let mut rows = Vec::with_capacity(2 * n * n);
    for negate in [false, true] {
        for row in h {
            for (x, &s) in row.iter().zip(&signs) {
                let v = x * s * if negate { -1 } else { 1 };
                rows.push(if v == 1 { 0u8 } else { 1u8 });
            }
        }
    }
    let mut array = OrthogonalArray::from_rows(2, n, rows, Provenance::Hadamard { order: n })?;
    let t = 3.min(n as u32);
    let report = oa::verify_strength_default(&array, t, VerifyMode::Exhaustive)?;
    if !report.passes {
        return Err(Error::ConstructionCheck(format!(
            "Hadamard-derived array failed the strength-{t} check"
        )));
    }
    array.set_strength(&report);
    Ok(array)
}
