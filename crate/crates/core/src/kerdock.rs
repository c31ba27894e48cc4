//! Kerdock arrays: non-linear binary `OA(2^{2m}, 2^m, 2, 5)` for even
//! `m >= 4`, with half the rows of the comparable BCH dual.
//!
//! The rows are the Gray images of the quaternary code over `GR(4, m-1)`
//! whose codewords are `x -> Tr(lambda x) + eps` on the Teichmueller
//! coordinate set (zero included), with `lambda` ranging over the ring and
//! `eps` over `Z/4`.  The Gray map is `0 -> 00, 1 -> 01, 2 -> 11, 3 -> 10`,
//! so adding 2 to `eps` complements a row: the array is closed under
//! complementation, which is what the symmetric labeling of the thinning
//! theorem needs.
//!
//! Verification is mandatory before the strength flag is set: exhaustive for
//! `m = 4`, sampled (100000 projections) beyond that.  A failed check aborts
//! the construction; no unverified strength ever escapes.

use crate::galois_ring::galois_ring_build;
use crate::oa::{self, OrthogonalArray, Provenance, VerifyMode};
use crate::{Error, Result};

const GRAY: [(u8, u8); 4] = [(0, 0), (0, 1), (1, 1), (1, 0)];

/// Builds the Kerdock `OA(2^{2m}, 2^m, 2, 5)`.
pub fn kerdock_array(m: u32) -> Result<OrthogonalArray> {
    kerdock_array_seeded(m, 0xC0DE)
}

pub fn kerdock_array_seeded(m: u32, seed: u64) -> Result<OrthogonalArray> {
    if !m.is_multiple_of(2) || m < 4 {
        return Err(Error::InvalidParameter(format!(
            "Kerdock arrays need even m >= 4, got {m}"
        )));
    }
    if m > 8 {
        return Err(Error::InvalidParameter(format!("2^{} rows exceed the budget", 2 * m)));
    }
    let ring = galois_ring_build(m - 1)?;
    let coords = ring.teichmuller().to_vec();
    let quat_len = coords.len(); // 2^{m-1}
    let bin_len = 2 * quat_len; // 2^m
    let rows_count = 1usize << (2 * m);

    let mut rows = vec![0u8; rows_count * bin_len];
    let mut r = 0usize;
    for lambda in 0..ring.size() {
        // Tr(lambda x) for each coordinate; eps only shifts it.
        let base: Vec<u8> = coords.iter().map(|&x| ring.trace(ring.mul(lambda, x))).collect();
        for eps in 0..4u8 {
            let out = &mut rows[r * bin_len..(r + 1) * bin_len];
            for (j, &b) in base.iter().enumerate() {
                let (g0, g1) = GRAY[((b + eps) % 4) as usize];
                out[2 * j] = g0;
                out[2 * j + 1] = g1;
            }
            r += 1;
        }
    }

    let mut array = OrthogonalArray::from_rows(2, bin_len, rows, Provenance::Kerdock { m })?;
    let report = if m == 4 {
        oa::verify_strength_default(&array, 5, VerifyMode::Exhaustive)?
    } else {
        oa::verify_strength_default(
            &array,
            5,
            VerifyMode::Sampled { count: 100_000, seed },
        )?
    };
    if !report.passes {
        return Err(Error::ConstructionCheck(
            "Kerdock array failed its strength-5 verification; refusing to emit it".into(),
        ));
    }
    array.set_strength(&report);
    Ok(array)
}
