//! Local representation densities at finite places.

use num_rational::Ratio;

use super::form::TernaryForm;
use crate::error::{precondition, Error, Result};
use crate::field::Poly;
use crate::symbols::{legendre_unchecked, Place};

/// Refuse counts over more than this many residue triples by default.
pub const DEFAULT_COUNT_BUDGET: f64 = 3.0e7;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMethod {
    ClosedForm,
    Counted,
    /// Closed form where it applies, counting otherwise.
    Auto,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DensitySource {
    ClosedForm,
    /// Counts at the listed levels `r` agreed.
    Counted(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityFactor {
    pub place: Place,
    pub value: Ratio<i64>,
    pub source: DensitySource,
}

fn norm(w: &Poly) -> i64 {
    (w.p() as i64).pow(w.degree() as u32)
}

/// `1 + |w|^-1`, `1 - |w|^-1` or `1 - |w|^-2` for `w` not dividing the
/// discriminant and `v_w(D) <= 1`.
pub fn closed_form_density(q: &TernaryForm, w: &Poly, d: &Poly) -> Result<Ratio<i64>> {
    let disc = q.disc();
    let vd = d.valuation(w).ok_or_else(|| Error::Precondition("D = 0".into()))?;
    if w.divides(&disc) || vd > 1 {
        return precondition(format!("closed form needs v_w(disc) = 0 and v_w(D) <= 1 at w = {w}"));
    }
    let nw = norm(w);
    if vd == 1 {
        return Ok(Ratio::new(nw * nw - 1, nw * nw));
    }
    // (D disc, w)_w for a unit is the residue symbol
    let s = legendre_unchecked(&(d * &disc), w);
    Ok(Ratio::new(nw + s as i64, nw))
}

/// Addition and multiplication tables of `R / w^r`, elements indexed by
/// `Poly::index`.
struct LocalRing {
    n: usize,
    modulus: Poly,
    add: Vec<u32>,
    mul: Vec<u32>,
}

impl LocalRing {
    fn new(w: &Poly, r: u32) -> Self {
        let p = w.p();
        let modulus = w.pow(r as u64);
        let n = (p as usize).pow(modulus.degree() as u32);
        let elems: Vec<Poly> = (0..n as u64).map(|k| Poly::from_index(k, p)).collect();
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in i..n {
                let s = (&elems[i] + &elems[j]).index() as u32;
                let m = (&elems[i] * &elems[j]).rem(&modulus).index() as u32;
                add[i * n + j] = s;
                add[j * n + i] = s;
                mul[i * n + j] = m;
                mul[j * n + i] = m;
            }
        }
        LocalRing { n, modulus, add, mul }
    }

    fn idx(&self, x: &Poly) -> usize {
        x.rem(&self.modulus).index() as usize
    }

    #[inline]
    fn a(&self, x: u32, y: u32) -> u32 {
        self.add[x as usize * self.n + y as usize]
    }

    #[inline]
    fn m(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.n + y as usize]
    }
}

/// `|w|^{-2r} #{l mod w^r : Q(l) = D mod w^r}`.
pub fn counted_density_at(q: &TernaryForm, w: &Poly, d: &Poly, r: u32, budget: f64) -> Result<Ratio<i64>> {
    let nw = norm(w) as f64;
    if nw.powi(3 * r as i32) > budget {
        return Err(Error::Budget(format!("counting mod w^{r} at w = {w} exceeds the budget")));
    }
    let ring = LocalRing::new(w, r);
    let g = |i: usize, j: usize| ring.idx(q.entry(i, j)) as u32;
    let two = |x: u32| ring.a(x, x);
    let (a11, a22, a33) = (g(0, 0), g(1, 1), g(2, 2));
    let (b12, b13, b23) = (two(g(0, 1)), two(g(0, 2)), two(g(1, 2)));
    let target = ring.idx(d) as u32;
    let n = ring.n as u32;
    let sq33: Vec<u32> = (0..n).map(|z| ring.m(a33, ring.m(z, z))).collect();
    let mut count: i64 = 0;
    for x in 0..n {
        let xx = ring.m(a11, ring.m(x, x));
        let lx = ring.m(b13, x);
        for y in 0..n {
            let partial = ring.a(ring.a(xx, ring.m(b12, ring.m(x, y))), ring.m(a22, ring.m(y, y)));
            let lin = ring.a(lx, ring.m(b23, y));
            for z in 0..n {
                if ring.a(ring.a(partial, ring.m(lin, z)), sq33[z as usize]) == target {
                    count += 1;
                }
            }
        }
    }
    let denom = (norm(w)).pow(2 * r);
    Ok(Ratio::new(count, denom))
}

/// Count at `r` and `r + 1` and require the two to agree.
pub fn counted_density(q: &TernaryForm, w: &Poly, d: &Poly, r: u32, budget: f64) -> Result<(Ratio<i64>, Vec<u32>)> {
    let a = counted_density_at(q, w, d, r, budget)?;
    let b = counted_density_at(q, w, d, r + 1, budget)?;
    if a != b {
        return Err(Error::Numerical(format!("density at w = {w} did not stabilize: {a} at r = {r}, {b} at r = {}", r + 1)));
    }
    Ok((a, vec![r, r + 1]))
}

pub fn local_density(q: &TernaryForm, place: &Place, d: &Poly, method: DensityMethod, budget: f64) -> Result<DensityFactor> {
    let Place::Finite(w) = place else {
        return precondition("the density at infinity is handled by square-class arithmetic");
    };
    let w = w.monic();
    if !w.is_irreducible() {
        return precondition(format!("{w} is not irreducible"));
    }
    if d.is_zero() {
        return precondition("D = 0");
    }
    let vdisc = q.disc().valuation(&w).unwrap();
    let vd = d.valuation(&w).unwrap();
    let closed_ok = vdisc == 0 && vd <= 1;
    let use_closed = match method {
        DensityMethod::ClosedForm => true,
        DensityMethod::Counted => false,
        DensityMethod::Auto => closed_ok,
    };
    let place = Place::Finite(w.clone());
    if use_closed {
        let value = closed_form_density(q, &w, d)?;
        return Ok(DensityFactor { place, value, source: DensitySource::ClosedForm });
    }
    if vdisc == 1 && vd == 0 && method == DensityMethod::Auto {
        // the unimodular part mod w is a nondegenerate binary form and every
        // solution mod w is smooth, so Hensel lifting fixes the level-1 count
        let value = counted_density_at(q, &w, d, 1, budget)?;
        return Ok(DensityFactor { place, value, source: DensitySource::Counted(vec![1]) });
    }
    let (value, levels) = counted_density(q, &w, d, vd + vdisc + 1, budget)?;
    Ok(DensityFactor { place, value, source: DensitySource::Counted(levels) })
}

/// Density at a prime with `v_w(disc) = 1` and a unit `D`:
/// `1 - chi_w(-u1 u2) / |w|` with `u1 u2` the determinant of the unimodular
/// part. Independent of `D`.
pub fn bad_place_density(q: &TernaryForm, w: &Poly) -> Result<Ratio<i64>> {
    if !w.is_irreducible() || q.disc().valuation(w) != Some(1) {
        return precondition(format!("need v_w(disc) = 1 at w = {w}"));
    }
    let one = Poly::one(q.p());
    counted_density_at(q, w, &one, 1, f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> Poly {
        Poly::parse(s, 5).unwrap()
    }

    #[test]
    fn closed_forms_match_counts_at_a_linear_place() {
        let q = TernaryForm::diagonal(&pp("1"), &pp("T^3+T+1"), &pp("2")).unwrap();
        let w = pp("T");
        let mut seen = std::collections::BTreeSet::new();
        for d in ["1", "2", "T+1", "T", "T^2+T", "3T+5"] {
            let d = pp(d);
            let c = closed_form_density(&q, &w, &d).unwrap();
            let vd = d.valuation(&w).unwrap();
            let (k, _) = counted_density(&q, &w, &d, vd + 1, DEFAULT_COUNT_BUDGET).unwrap();
            assert_eq!(c, k, "D = {d}");
            seen.insert(c);
        }
        assert!(seen.contains(&Ratio::new(24, 25)));
        assert!(seen.contains(&Ratio::new(6, 5)) || seen.contains(&Ratio::new(4, 5)));
    }

    #[test]
    fn bad_place_is_hensel_stable() {
        let q = TernaryForm::diagonal(&pp("1"), &pp("T+1"), &pp("2")).unwrap();
        let w = pp("T+1");
        let a = counted_density_at(&q, &w, &pp("1"), 1, 1e9).unwrap();
        let b = counted_density_at(&q, &w, &pp("1"), 2, 1e9).unwrap();
        assert_eq!(a, b);
        assert_eq!(bad_place_density(&q, &w).unwrap(), a);
    }
}
