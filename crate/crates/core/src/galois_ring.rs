//! The Galois ring `GR(4, m)`: the degree-`m` extension of the integers mod 4
//! by a Hensel-lifted primitive polynomial.  Substrate for the Kerdock
//! arrays.
//!
//! Elements are indices `0..4^m` whose base-4 digits are the coefficients of
//! the residue polynomial.  Every element factors uniquely as `a + 2b` with
//! `a`, `b` in the Teichmueller set, which gives the Frobenius map and the
//! trace down to `Z/4`.


use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct GaloisRingTable {
    m: u32,
    size: u32,
    /// Lifted modulus mod 4, ascending degree, length `m + 1`, monic.
    modulus: Vec<u8>,
    /// `{0} ∪ {xi^i}`: exactly `2^m` element indices, first `0`, then the
    /// powers of `xi` starting at `xi^0 = 1`.
    teichmuller: Vec<u32>,
    /// `z -> (a, b)` with `z = a + 2b`, `a, b` Teichmueller.
    two_adic: Vec<(u32, u32)>,
    /// Trace to `Z/4` for every element.
    trace: Vec<u8>,
}

/// Builds `GR(4, m)` for odd `m` (the Kerdock substrate; `GR(4, 1)` is the
/// plain ring of integers mod 4).
pub fn galois_ring_build(m: u32) -> Result<GaloisRingTable> {
    if m == 0 || m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "GR(4, m) requires odd m, got {m}"
        )));
    }
    if m > 9 {
        return Err(Error::InvalidParameter(format!("GR(4, {m}) exceeds the size budget")));
    }

    // Scan monic irreducible polynomials over GF(2) in lexicographic order
    // and take the first whose lift is primitive.
    let mut last_err = None;
    for base in candidate_irreducibles(m) {
        match try_build(m, &base) {
            Ok(t) => return Ok(t),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::ConstructionCheck("no primitive modulus found".into())))
}

fn candidate_irreducibles(m: u32) -> Vec<Vec<u8>> {
    if m == 1 {
        return vec![vec![1, 1]]; // x + 1, the only monic linear with nonzero constant
    }
    let mut out = Vec::new();
    for low in 0..(1u64 << m) {
        let mut coeffs: Vec<u8> = (0..m).map(|i| ((low >> i) & 1) as u8).collect();
        coeffs.push(1);
        if gf2_irreducible(&coeffs) {
            out.push(coeffs);
        }
    }
    out
}

fn gf2_irreducible(poly: &[u8]) -> bool {
    let deg = poly.len() - 1;
    if poly[0] == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        for low in 0..(1u64 << d) {
            let mut div: Vec<u8> = (0..d).map(|i| ((low >> i) & 1) as u8).collect();
            div.push(1);
            if gf2_rem_is_zero(poly, &div) {
                return false;
            }
        }
    }
    true
}

fn gf2_rem_is_zero(num: &[u8], den: &[u8]) -> bool {
    let mut rem: Vec<u8> = num.to_vec();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let top = rem.len() - 1;
        if rem[top] != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[top - dd + j] ^= dj;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

fn try_build(m: u32, base: &[u8]) -> Result<GaloisRingTable> {
    let modulus = hensel_lift(base)?;
    let size = 4u32.pow(m);
    let mut table = GaloisRingTable {
        m,
        size,
        modulus,
        teichmuller: Vec::new(),
        two_adic: Vec::new(),
        trace: Vec::new(),
    };

    // xi = class of x; its order must be 2^m - 1 for the Teichmueller set to
    // close up, which is exactly primitivity of the base polynomial.
    let order = (1u32 << m) - 1;
    let xi = if m == 1 { 1 } else { 4 }; // index of x (digit 1 at position 1)
    let mut teich = vec![0u32];
    let mut pw = 1u32;
    for _ in 0..order {
        teich.push(pw);
        pw = table.mul(pw, xi);
    }
    if pw != 1 {
        return Err(Error::ConstructionCheck(
            "lifted modulus is not primitive (xi order mismatch)".into(),
        ));
    }
    // tau^{2^m} = tau for every Teichmueller element.
    for &t in &teich {
        if table.pow(t, 1u64 << m) != t {
            return Err(Error::ConstructionCheck("Teichmueller closure failed".into()));
        }
    }
    let mut sorted = teich.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != (1usize << m) || !teich.contains(&1) {
        return Err(Error::ConstructionCheck("Teichmueller set has wrong cardinality".into()));
    }
    table.teichmuller = teich;

    table.build_two_adic()?;
    table.build_trace();
    Ok(table)
}

/// One Graeffe root-squaring step mod 4, iterated to a fixed point:
/// `h(x^2) = (-1)^m h0(x) h0(-x)`.  For primitive inputs the fixed point is
/// the Hensel lift dividing `x^{2^m - 1} - 1` mod 4.
fn hensel_lift(base: &[u8]) -> Result<Vec<u8>> {
    let m = base.len() - 1;
    let mut h: Vec<u8> = base.to_vec(); // coefficients mod 4 (lift 0/1)
    for _ in 0..8 {
        let next = graeffe_step(&h, m)?;
        if next == h {
            return Ok(h);
        }
        h = next;
    }
    Err(Error::ConstructionCheck("Graeffe iteration did not stabilize".into()))
}

fn graeffe_step(h: &[u8], m: usize) -> Result<Vec<u8>> {
    // h(-x): negate odd coefficients mod 4.
    let neg: Vec<u8> = h
        .iter()
        .enumerate()
        .map(|(i, &c)| if i % 2 == 1 { (4 - c as u16) as u8 % 4 } else { c })
        .collect();
    let mut prod = vec![0u8; 2 * m + 1];
    for (i, &a) in h.iter().enumerate() {
        for (j, &b) in neg.iter().enumerate() {
            prod[i + j] = ((prod[i + j] as u16 + a as u16 * b as u16) % 4) as u8;
        }
    }
    let mut out = vec![0u8; m + 1];
    for (i, &c) in prod.iter().enumerate() {
        if i % 2 == 0 {
            out[i / 2] = c;
        } else if c != 0 {
            return Err(Error::ConstructionCheck("Graeffe product has odd-power term".into()));
        }
    }
    if m % 2 == 1 {
        for c in out.iter_mut() {
            *c = ((4 - *c as u16) % 4) as u8;
        }
    }
    Ok(out)
}

impl GaloisRingTable {
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn size(&self) -> u32 {
        self.size
    }
    /// Lifted modulus coefficients mod 4, ascending degree.
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
    /// The Teichmueller set: `[0, 1, xi, xi^2, ...]`, `2^m` elements.
    pub fn teichmuller(&self) -> &[u32] {
        &self.teichmuller
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let mut out = 0u32;
        let mut shift = 0;
        for i in 0..self.m {
            let da = (a >> (2 * i)) & 3;
            let db = (b >> (2 * i)) & 3;
            out |= ((da + db) & 3) << shift;
            shift += 2;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let mut out = 0u32;
        for i in 0..self.m {
            let da = (a >> (2 * i)) & 3;
            out |= ((4 - da) & 3) << (2 * i);
        }
        out
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let mut conv = [0u16; 25];
        for i in 0..m {
            let da = ((a >> (2 * i)) & 3) as u16;
            if da == 0 {
                continue;
            }
            for j in 0..m {
                let db = ((b >> (2 * j)) & 3) as u16;
                conv[i + j] = (conv[i + j] + da * db) & 3;
            }
        }
        // reduce by the monic modulus: x^m = -(h_0 + ... + h_{m-1} x^{m-1})
        for i in (m..=2 * m - 2).rev() {
            let c = conv[i];
            if c == 0 {
                continue;
            }
            conv[i] = 0;
            for j in 0..m {
                let hj = self.modulus[j] as u16;
                if hj != 0 {
                    conv[i - m + j] = (conv[i - m + j] + 16 - (c * hj) % 4) & 3;
                }
            }
        }
        let mut out = 0u32;
        for (i, &c) in conv[..m].iter().enumerate() {
            out |= (c as u32) << (2 * i);
        }
        out
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// The 2-adic coordinates of `z`: the unique `(a, b)` in the Teichmueller
    /// set with `z = a + 2b`.
    pub fn two_adic(&self, z: u32) -> (u32, u32) {
        self.two_adic[z as usize]
    }

    /// Frobenius `phi(a + 2b) = a^2 + 2 b^2`; generates the Galois group and
    /// fixes `Z/4`.
    pub fn frobenius(&self, z: u32) -> u32 {
        let (a, b) = self.two_adic[z as usize];
        let b2 = self.mul(b, b);
        self.add(self.mul(a, a), self.add(b2, b2))
    }

    /// Trace to `Z/4`, from the precomputed table.
    #[inline]
    pub fn trace(&self, z: u32) -> u8 {
        self.trace[z as usize]
    }

    /// Reduction mod 2 of an element, as the coefficient bit-vector of the
    /// residue field `GF(2^m)` in digit representation.
    pub fn mod2(&self, z: u32) -> u32 {
        let mut out = 0u32;
        for i in 0..self.m {
            out |= ((z >> (2 * i)) & 1) << i;
        }
        out
    }

    fn build_two_adic(&mut self) -> Result<()> {
        let mut map = vec![u32::MAX; self.size as usize];
        let teich = self.teichmuller.clone();
        let mut pairs = vec![(0u32, 0u32); self.size as usize];
        for &a in &teich {
            for &b in &teich {
                let z = self.add(a, self.add(b, b));
                if map[z as usize] != u32::MAX {
                    return Err(Error::ConstructionCheck("2-adic decomposition not unique".into()));
                }
                map[z as usize] = 1;
                pairs[z as usize] = (a, b);
            }
        }
        if map.contains(&u32::MAX) {
            return Err(Error::ConstructionCheck("2-adic decomposition not onto".into()));
        }
        self.two_adic = pairs;
        Ok(())
    }

    fn build_trace(&mut self) {
        let mut tbl = vec![0u8; self.size as usize];
        for z in 0..self.size {
            let mut acc = 0u32;
            let mut term = z;
            for _ in 0..self.m {
                acc = self.add(acc, term);
                term = self.frobenius(term);
            }
            debug_assert!(acc < 4, "trace landed outside Z/4");
            tbl[z as usize] = acc as u8;
        }
        self.trace = tbl;
    }
}
