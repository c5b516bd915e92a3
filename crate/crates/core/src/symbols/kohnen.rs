//! The Kohnen symbol `W_D(Q)`.

use super::jacobi;
use crate::error::{precondition, Error, Result};
use crate::field::Poly;
use crate::qform::TernaryForm;

/// How many coprime witnesses are compared for the consistency flag.
const WITNESSES: usize = 10;
const SEARCH_CAP: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KohnenSymbol {
    /// `(Q(v0)/D)` for the first coprime witness `v0`, or 0.
    pub value: i8,
    pub witness: Option<[Poly; 3]>,
    /// Whether every witness found (up to ten) gives the same symbol.
    pub consistent: bool,
    pub witnesses_checked: usize,
    /// The value 0 was certified: `Q` vanishes identically mod some `P | D`.
    pub certified_zero: bool,
}

/// Vectors whose coordinates have index < `n` (base-p encoding), ordered by
/// the largest coordinate index, then by where it first occurs, so the
/// unit vectors `e1, e2, e3` come first.
fn shells(n: u64, p: u32) -> impl Iterator<Item = [Poly; 3]> {
    (0..n).flat_map(move |s| {
        let mut out = Vec::new();
        for a in 0..=s {
            for b in 0..=s {
                for c in 0..=s {
                    if a.max(b).max(c) == s {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out.sort_by_key(|v| (v.iter().position(|&x| x == s), *v));
        out.into_iter().map(move |v| v.map(|k| Poly::from_index(k, p)))
    })
}

/// `W_D(Q)`. Searches vectors with coordinate degree `<= deg disc + 2`.
pub fn kohnen_symbol(q: &TernaryForm, d: &Poly) -> Result<KohnenSymbol> {
    let p = q.p();
    if d.is_zero() || !d.is_squarefree() {
        return precondition("Kohnen symbol needs a square-free nonzero D");
    }
    let d = d.monic();
    if d.is_one() {
        return Ok(KohnenSymbol { value: 1, witness: None, consistent: true, witnesses_checked: 0, certified_zero: false });
    }
    let vanishes_mod = d.prime_divisors().into_iter().any(|pp| q.gram().iter().flatten().all(|x| pp.divides(x)));
    if vanishes_mod {
        return Ok(KohnenSymbol { value: 0, witness: None, consistent: true, witnesses_checked: 0, certified_zero: true });
    }
    let maxdeg = q.disc().degree() as u32 + 2;
    let n = (p as u64).saturating_pow(maxdeg + 1);
    let mut first: Option<([Poly; 3], i8)> = None;
    let mut consistent = true;
    let mut found = 0;
    for (visited, v) in shells(n, p).enumerate() {
        if visited as u64 >= SEARCH_CAP {
            break;
        }
        let val = q.eval(&v);
        if val.is_zero() || !val.gcd(&d).is_one() {
            continue;
        }
        let s = jacobi(&val, &d)?;
        match &first {
            None => first = Some((v, s)),
            Some((_, s0)) => consistent &= *s0 == s,
        }
        found += 1;
        if found >= WITNESSES {
            break;
        }
    }
    match first {
        Some((v, s)) => Ok(KohnenSymbol { value: s, witness: Some(v), consistent, witnesses_checked: found, certified_zero: false }),
        // unreachable in exact arithmetic: a nonzero form mod each P takes a
        // unit value, and CRT glues those inside the searched box
        None => Err(Error::Budget("no coprime value found in the Kohnen search box".into())),
    }
}
