//! Allocation-free Legendre symbols for the Euler-product loop.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::field::{fp, monic_irreducibles, Poly};

const CAP: usize = 40;

/// Quadratic character and inverse tables for F_p.
pub(crate) struct FieldTables {
    pub p: u32,
    chi: Vec<i8>,
    inv: Vec<u32>,
}

impl FieldTables {
    fn new(p: u32) -> Self {
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        for x in 1..p as u64 {
            chi[(x * x % p as u64) as usize] = 1;
        }
        let inv = (0..p).map(|x| if x == 0 { 0 } else { fp::inv(x, p) }).collect();
        FieldTables { p, chi, inv }
    }
}

pub(crate) fn tables(p: u32) -> Arc<FieldTables> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FieldTables>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.read().unwrap().get(&p) {
        return t.clone();
    }
    let t = Arc::new(FieldTables::new(p));
    cache.write().unwrap().entry(p).or_insert(t).clone()
}

/// Monic irreducibles of degree `d`, shared across calls.
pub(crate) fn primes_of_degree(d: usize, p: u32) -> Arc<Vec<Poly>> {
    static CACHE: OnceLock<RwLock<HashMap<(u32, usize), Arc<Vec<Poly>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.read().unwrap().get(&(p, d)) {
        return v.clone();
    }
    let v = Arc::new(monic_irreducibles(d, p));
    cache.write().unwrap().entry((p, d)).or_insert(v).clone()
}

#[derive(Clone, Copy)]
struct Small {
    c: [u32; CAP],
    len: usize,
}

impl Small {
    fn from(c: &[u32]) -> Self {
        let mut s = Small { c: [0; CAP], len: c.len() };
        s.c[..c.len()].copy_from_slice(c);
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.len > 0 && self.c[self.len - 1] == 0 {
            self.len -= 1;
        }
    }

    /// self mod b, b monic.
    fn reduce(&mut self, b: &Small, p: u64) {
        let db = b.len - 1;
        while self.len > db {
            let top = self.len - 1;
            let c = self.c[top] as u64;
            if c != 0 {
                let off = top - db;
                for j in 0..db {
                    let t = c * b.c[j] as u64 % p;
                    self.c[off + j] = ((self.c[off + j] as u64 + p - t) % p) as u32;
                }
            }
            self.c[top] = 0;
            self.len -= 1;
            self.trim();
        }
    }
}

/// `(a / b)` for `b` monic of positive degree, both with coefficient
/// slices shorter than 40.
pub(crate) fn jacobi_fast(a: &[u32], b: &[u32], t: &FieldTables) -> i8 {
    let p = t.p as u64;
    let mut a = Small::from(a);
    let mut b = Small::from(b);
    let mut s = 1i8;
    loop {
        if b.len == 1 {
            return s;
        }
        a.reduce(&b, p);
        if a.len == 0 {
            return 0;
        }
        let u = a.c[a.len - 1];
        if (b.len - 1) % 2 == 1 && t.chi[u as usize] == -1 {
            s = -s;
        }
        let ui = t.inv[u as usize] as u64;
        for k in 0..a.len {
            a.c[k] = (a.c[k] as u64 * ui % p) as u32;
        }
        // reciprocity between monic polynomials is sign-free for p = 1 mod 4
        std::mem::swap(&mut a, &mut b);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::jacobi;

    #[test]
    fn fast_path_matches_reference() {
        let p = 13;
        let t = tables(p);
        let mut k = 1u64;
        for _ in 0..2000 {
            k = k.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let a = Poly::from_index(k >> 40, p);
            let b = Poly::from_index((k >> 17) % 3_000_000 + 1, p).monic();
            if b.degree() < 1 {
                continue;
            }
            assert_eq!(jacobi_fast(a.coeffs(), b.coeffs(), &t), jacobi(&a, &b).unwrap(), "{a} / {b}");
        }
    }
}
