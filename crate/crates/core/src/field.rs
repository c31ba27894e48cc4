//! Exact arithmetic over prime-power finite fields `GF(p^e)`.
//!
//! Elements are dense integer indices `0..q`: the base-`p` digits of an index
//! are the coefficients of the residue polynomial, so `0` and `1` are the
//! additive and multiplicative identities for every field.  Multiplication
//! runs through log/antilog tables built from a primitive element, which makes
//! it O(1); the array constructions enumerate all `q^m` field points, so this
//! dominates.

use crate::{Error, Result};
use std::collections::HashMap;

const MAX_ORDER: u64 = 1 << 20;

/// Complete arithmetic tables for `GF(p^e)`.
///
/// The modulus is the lexicographically least monic irreducible polynomial of
/// degree `e` over `GF(p)` (coefficients compared low-degree-last), which
/// makes builds deterministic.  Immutable after construction.
#[derive(Debug, Clone)]
pub struct FieldTable {
    p: u32,
    e: u32,
    q: u32,
    /// Modulus coefficients, ascending degree, length `e + 1`, monic.
    modulus: Vec<u8>,
    /// `antilog[i] = g^i` for the primitive element `g`; length `q - 1`.
    antilog: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
    primitive: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Factor `q` as `p^e` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= q as u64 {
        if q.is_multiple_of(p) {
            let mut v = q;
            let mut e = 0;
            while v.is_multiple_of(p) {
                v /= p;
                e += 1;
            }
            return if v == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Builds the field table for `GF(p^e)`.
pub fn field_build(p: u32, e: u32) -> Result<FieldTable> {
    FieldTable::build(p, e)
}

impl FieldTable {
    pub fn build(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::InvalidParameter(format!("field order {p}^{e} exceeds 2^20"))
        })? as u32;

        let modulus = least_irreducible(p, e);
        let mut table = FieldTable {
            p,
            e,
            q,
            modulus,
            antilog: Vec::new(),
            log: Vec::new(),
            primitive: 0,
        };
        table.build_log_tables()?;
        table.spot_check()?;
        Ok(table)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Modulus coefficients in ascending degree (length `e + 1`).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }
    pub fn primitive_element(&self) -> u32 {
        self.primitive
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if self.p == 2 {
            return a ^ b;
        }
        let mut out = 0u32;
        let mut scale = 1u32;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.e {
            out += ((a + b) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        debug_assert!(a < self.q);
        if self.p == 2 {
            return a;
        }
        let mut out = 0u32;
        let mut scale = 1u32;
        let mut a = a;
        for _ in 0..self.e {
            out += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.q && b < self.q);
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q as u64 - 1;
        let idx = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % n;
        self.antilog[idx as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::InvalidParameter("inverse of zero".into()));
        }
        let n = self.q - 1;
        Ok(self.antilog[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if a == 0 {
            return if k == 0 { 1 } else { 0 };
        }
        let n = self.q as u64 - 1;
        let idx = (self.log[a as usize] as u64 as u128 * (k % n) as u128 % n as u128) as usize;
        self.antilog[idx]
    }

    /// Horner evaluation of `P(x)` with coefficients ascending in degree.
    pub fn poly_eval(&self, coeffs: &[u32], x: u32) -> u32 {
        let mut acc = 0u32;
        for &c in coeffs.iter().rev() {
            acc = self.add(self.mul(acc, x), c);
        }
        acc
    }

    /// Relative trace onto the subfield with `sub_q` elements:
    /// `Tr(x) = x + x^{sub_q} + ... + x^{sub_q^{m-1}}` where `q = sub_q^m`.
    ///
    /// The result is returned as an element index of `GF(sub_q)` via the
    /// canonical subfield identification of [`FieldTable::subfield`].
    pub fn trace_to_subfield(&self, x: u32, sub_q: u32) -> Result<u32> {
        let view = self.subfield(sub_q)?;
        view.collapse(self.trace_raw(x, sub_q))
    }

    /// Trace as an element of the subfield copy inside this field.
    pub fn trace_raw(&self, x: u32, sub_q: u32) -> u32 {
        let m = self.tower_height(sub_q).expect("checked by caller");
        let mut acc = 0u32;
        let mut term = x;
        for _ in 0..m {
            acc = self.add(acc, term);
            term = self.pow(term, sub_q as u64);
        }
        acc
    }

    fn tower_height(&self, sub_q: u32) -> Result<u32> {
        let (sp, se) = prime_power(sub_q)
            .ok_or_else(|| Error::InvalidParameter(format!("{sub_q} is not a prime power")))?;
        if sp != self.p || !self.e.is_multiple_of(se) {
            return Err(Error::InvalidParameter(format!(
                "GF({sub_q}) is not a subfield of GF({})",
                self.q
            )));
        }
        Ok(self.e / se)
    }

    /// Canonical identification of the subfield copy `{y : y^sub_q = y}` with
    /// the standalone table for `GF(sub_q)`.
    pub fn subfield(&self, sub_q: u32) -> Result<SubfieldView> {
        self.tower_height(sub_q)?;
        let (_, se) = prime_power(sub_q).unwrap();
        if se == 1 {
            // Prime subfield: constants already carry their canonical index.
            let embed: Vec<u32> = (0..sub_q).collect();
            let collapse = embed.iter().map(|&v| (v, v)).collect();
            return Ok(SubfieldView { sub_q, embed, collapse });
        }
        let sub = FieldTable::build(self.p, se)?;
        // Root of the subfield's own modulus inside this field; its powers
        // give a digit-compatible embedding.
        let mod_lifted: Vec<u32> = sub.modulus.iter().map(|&c| c as u32).collect();
        let eta = (1..self.q)
            .find(|&y| self.poly_eval(&mod_lifted, y) == 0)
            .ok_or_else(|| Error::ConstructionCheck("subfield modulus has no root".into()))?;
        let mut embed = vec![0u32; sub_q as usize];
        for idx in 0..sub_q {
            let mut val = 0u32;
            let mut digits = idx;
            let mut pw = 1u32; // eta^i
            for _ in 0..se {
                let d = digits % self.p;
                for _ in 0..d {
                    val = self.add(val, pw);
                }
                digits /= self.p;
                pw = self.mul(pw, eta);
            }
            embed[idx as usize] = val;
        }
        let collapse: HashMap<u32, u32> =
            embed.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        if collapse.len() != sub_q as usize {
            return Err(Error::ConstructionCheck("subfield embedding not injective".into()));
        }
        Ok(SubfieldView { sub_q, embed, collapse })
    }

    /// An `F_sub`-basis of this field: powers `g^0..g^{m-1}` of the primitive
    /// element, where `q = sub_q^m`.
    pub fn subfield_basis(&self, sub_q: u32) -> Result<Vec<u32>> {
        let m = self.tower_height(sub_q)?;
        Ok((0..m).map(|i| self.pow(self.primitive, i as u64)).collect())
    }

    // ---- construction internals ----

    fn build_log_tables(&mut self) -> Result<()> {
        let q = self.q as usize;
        let mut antilog = Vec::with_capacity(q - 1);
        let mut log = vec![0u32; q];
        let g = self.find_primitive()?;
        let mut x = 1u32;
        for i in 0..(q - 1) {
            antilog.push(x);
            log[x as usize] = i as u32;
            x = self.mul_poly(x, g);
        }
        if x != 1 {
            return Err(Error::ConstructionCheck("primitive element order mismatch".into()));
        }
        self.antilog = antilog;
        self.log = log;
        self.primitive = g;
        Ok(())
    }

    fn find_primitive(&self) -> Result<u32> {
        if self.q == 2 {
            return Ok(1);
        }
        let n = (self.q - 1) as u64;
        let factors = prime_factors(n);
        'cand: for g in 2..self.q {
            for &f in &factors {
                if self.pow_poly(g, n / f) == 1 {
                    continue 'cand;
                }
            }
            return Ok(g);
        }
        Err(Error::ConstructionCheck("no primitive element found".into()))
    }

    /// Table-free polynomial multiplication, used while bootstrapping.
    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let e = self.e as usize;
        let p = self.p;
        let mut conv = vec![0u32; 2 * e - 1];
        let ad = index_digits(a, p, e);
        let bd = index_digits(b, p, e);
        for (i, &ai) in ad.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in bd.iter().enumerate() {
                conv[i + j] = (conv[i + j] + ai * bj) % p;
            }
        }
        // Reduce by the monic modulus.
        for i in (e..2 * e - 1).rev() {
            let c = conv[i];
            if c == 0 {
                continue;
            }
            conv[i] = 0;
            for j in 0..e {
                let m = self.modulus[j] as u32;
                if m != 0 {
                    let k = i - e + j;
                    conv[k] = (conv[k] + p * p - ((c * m) % p)) % p;
                }
            }
        }
        digits_index(&conv[..e], p)
    }

    fn pow_poly(&self, a: u32, mut k: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_poly(acc, base);
            }
            base = self.mul_poly(base, base);
            k >>= 1;
        }
        acc
    }

    /// Light build-time sanity checks: a deterministic sample of
    /// associativity/commutativity triples plus a full inverse scan.
    fn spot_check(&self) -> Result<()> {
        let q = self.q as u64;
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..100 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = (state >> 11) % q;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let b = (state >> 11) % q;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let c = (state >> 11) % q;
            let (a, b, c) = (a as u32, b as u32, c as u32);
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                || self.mul(a, b) != self.mul(b, a)
                || self.mul(self.add(a, b), c) != self.add(self.mul(a, c), self.mul(b, c))
                || self.mul(a, 1) != a
            {
                return Err(Error::ConstructionCheck("field axiom spot-check failed".into()));
            }
        }
        for a in 1..self.q {
            if self.mul(a, self.inv(a)?) != 1 {
                return Err(Error::ConstructionCheck(format!("element {a} has no inverse")));
            }
        }
        Ok(())
    }
}

/// Subfield identification: `embed` maps `GF(sub_q)` indices into the big
/// field; `collapse` inverts it on the subfield copy.
#[derive(Debug, Clone)]
pub struct SubfieldView {
    sub_q: u32,
    embed: Vec<u32>,
    collapse: HashMap<u32, u32>,
}

impl SubfieldView {
    pub fn sub_q(&self) -> u32 {
        self.sub_q
    }
    pub fn embed(&self, sub_idx: u32) -> u32 {
        self.embed[sub_idx as usize]
    }
    pub fn collapse(&self, big_idx: u32) -> Result<u32> {
        self.collapse.get(&big_idx).copied().ok_or_else(|| {
            Error::ConstructionCheck(format!("element {big_idx} not in subfield copy"))
        })
    }
}

fn index_digits(idx: u32, p: u32, e: usize) -> Vec<u32> {
    let mut d = vec![0u32; e];
    let mut v = idx;
    for digit in d.iter_mut() {
        *digit = v % p;
        v /= p;
    }
    d
}

fn digits_index(digits: &[u32], p: u32) -> u32 {
    let mut v = 0u32;
    for &d in digits.iter().rev() {
        v = v * p + d;
    }
    v
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Lexicographically least monic irreducible polynomial of degree `e` over
/// `GF(p)`, coefficients ascending; irreducibility by trial division against
/// all monic polynomials of degree `<= e/2`.
fn least_irreducible(p: u32, e: u32) -> Vec<u8> {
    if e == 1 {
        return vec![0, 1]; // x
    }
    let e = e as usize;
    let count = (p as u64).pow(e as u32);
    for low in 0..count {
        let mut coeffs: Vec<u8> = Vec::with_capacity(e + 1);
        let mut v = low;
        for _ in 0..e {
            coeffs.push((v % p as u64) as u8);
            v /= p as u64;
        }
        coeffs.push(1);
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

fn is_irreducible(poly: &[u8], p: u32) -> bool {
    let deg = poly.len() - 1;
    if deg == 0 {
        return false;
    }
    if poly[0] == 0 {
        return false; // divisible by x
    }
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for low in 0..count {
            let mut div: Vec<u8> = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                div.push((v % p as u64) as u8);
                v /= p as u64;
            }
            div.push(1);
            if poly_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

fn poly_rem_is_zero(num: &[u8], den: &[u8], p: u32) -> bool {
    let mut rem: Vec<u32> = num.iter().map(|&c| c as u32).collect();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let top = rem.len() - 1;
        if lead != 0 {
            for j in 0..=dd {
                let idx = top - dd + j;
                rem[idx] = (rem[idx] + p * p - lead * den[j] as u32 % p) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
