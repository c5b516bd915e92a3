//! Genus membership and Kneser neighbor walks.

use num_rational::Ratio;

use super::diag::InftyDiagonalization;
use super::form::{unit_vec, TernaryForm, Vec3};
use super::isometry::{automorphism_count, is_isometric, reduce};
use super::lattice::hnf;
use crate::error::{precondition, Error, Result};
use crate::field::{fp, Poly, ResidueField};
use crate::symbols::{kohnen_symbol, KohnenSymbol};

/// Local invariant at a prime `P` with `v_P(disc) = 1`: the radical of the
/// form mod `P` is a line spanned by `r`, and `chi_P(Q(r)/P)` classifies the
/// `P`-adic lattice among those of the same discriminant.
pub fn radical_invariant(q: &TernaryForm, pp: &Poly) -> Result<i8> {
    let f = ResidueField::new(pp)?;
    if q.disc().valuation(pp) != Some(1) {
        return precondition(format!("v_P(disc) != 1 at P = {pp}"));
    }
    let r = radical_vector(q, &f).ok_or_else(|| Error::Numerical("no radical vector mod P".into()))?;
    let v = q.eval(&r);
    let w = v.div_exact(pp).ok_or_else(|| Error::Assertion("Q(r) not divisible by P".into()))?;
    let c = f.chi(&f.reduce(&w));
    if c == 0 {
        return Err(Error::Assertion("Q(r)/P divisible by P although v_P(disc) = 1".into()));
    }
    Ok(c)
}

/// A nonzero `r` (entries of degree < deg P) with `A r = 0 mod P`.
fn radical_vector(q: &TernaryForm, f: &ResidueField) -> Option<Vec3> {
    let p = q.p();
    let mut m: Vec<Vec<Poly>> = q.gram().iter().map(|row| row.iter().map(|x| f.reduce(x)).collect()).collect();
    // row echelon form over F_P
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(pr) = (row..3).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, pr);
        let inv = f.inv(&m[row][col])?;
        for k in 0..3 {
            m[row][k] = f.mul(&m[row][k], &inv);
        }
        for r in 0..3 {
            if r != row && !m[r][col].is_zero() {
                let c = m[r][col].clone();
                for k in 0..3 {
                    let t = f.mul(&c, &m[row][k]);
                    m[r][k] = f.reduce(&(&m[r][k] - &t));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..3).find(|c| !pivots.contains(c))?;
    let mut v: Vec3 = std::array::from_fn(|_| Poly::zero(p));
    v[free] = Poly::one(p);
    for (r, &c) in pivots.iter().enumerate() {
        v[c] = f.reduce(&-&m[r][free]);
    }
    Some(v)
}

#[derive(Clone, Debug)]
pub struct GenusComparison {
    pub same: bool,
    pub disc_match: bool,
    /// `(P, invariant of Q1, invariant of Q2)` for each `P | disc`.
    pub local: Vec<(Poly, i8, i8)>,
    pub infty_match: bool,
    /// Kohnen symbols with respect to the monic discriminant (reported, not
    /// used for the decision).
    pub kohnen: Option<(KohnenSymbol, KohnenSymbol)>,
}

/// Full comparison of the local invariants of two forms.
pub fn compare_genus(q1: &TernaryForm, q2: &TernaryForm) -> Result<GenusComparison> {
    let (d1, d2) = (q1.disc(), q2.disc());
    if !d1.is_squarefree() || !d2.is_squarefree() {
        return Err(Error::Precondition("genus test supports square-free discriminants only".into()));
    }
    let p = q1.p();
    let disc_match = q1.p() == q2.p() && d1.monic() == d2.monic() && fp::chi(fp::mul(d1.lead(), d2.lead(), p), p) == 1;
    let mut local = Vec::new();
    let mut infty_match = false;
    let mut kohnen = None;
    if disc_match {
        for pp in d1.prime_divisors() {
            local.push((pp.clone(), radical_invariant(q1, &pp)?, radical_invariant(q2, &pp)?));
        }
        let a1 = InftyDiagonalization::new(q1)?;
        let a2 = InftyDiagonalization::new(q2)?;
        infty_match = a1.is_anisotropic() == a2.is_anisotropic();
        if d1.degree() > 0 {
            kohnen = Some((kohnen_symbol(q1, &d1)?, kohnen_symbol(q2, &d1)?));
        }
    }
    let same = disc_match && infty_match && local.iter().all(|(_, a, b)| a == b);
    Ok(GenusComparison { same, disc_match, local, infty_match, kohnen })
}

pub fn same_genus(q1: &TernaryForm, q2: &TernaryForm) -> Result<bool> {
    Ok(compare_genus(q1, q2)?.same)
}

/// All `P`-neighbors of `Q` (one per isotropic line mod `P`).
pub fn neighbors(q: &TernaryForm, pp: &Poly) -> Result<Vec<TernaryForm>> {
    let p = q.p();
    let pp = pp.monic();
    let f = ResidueField::new(&pp)?;
    if pp.divides(&q.disc()) {
        return precondition(format!("P = {pp} divides the discriminant"));
    }
    let p2 = &pp * &pp;
    let elems: Vec<Poly> = f.elements().collect();
    let mut out = Vec::new();
    // projective points: first nonzero coordinate equal to 1
    for lead in 0..3 {
        let tails = elems.len().pow((2 - lead) as u32);
        for t in 0..tails {
            let mut x0: Vec3 = std::array::from_fn(|_| Poly::zero(p));
            x0[lead] = Poly::one(p);
            let mut k = t;
            for slot in x0.iter_mut().skip(lead + 1) {
                *slot = elems[k % elems.len()].clone();
                k /= elems.len();
            }
            if !pp.divides(&q.eval(&x0)) {
                continue;
            }
            out.push(neighbor_at(q, &pp, &p2, &f, x0)?);
        }
    }
    Ok(out)
}

fn neighbor_at(q: &TernaryForm, pp: &Poly, p2: &Poly, f: &ResidueField, x0: Vec3) -> Result<TernaryForm> {
    let p = q.p();
    // beta_i = B(x0, e_i) mod P; nondegeneracy mod P gives some beta_j != 0
    let beta: Vec<Poly> = (0..3).map(|i| f.reduce(&q.bilinear(&x0, &unit_vec(i, p)))).collect();
    let j = (0..3).find(|&i| !beta[i].is_zero()).ok_or_else(|| Error::Assertion("isotropic vector in the radical".into()))?;
    // lift so that Q(x) = 0 mod P^2: x = x0 + P t e_j with
    // Q(x) = Q(x0) + 2 P t beta_j (mod P^2)
    let q0 = q.eval(&x0).div_exact(pp).unwrap();
    let two_beta = f.reduce(&beta[j].scale(2));
    let t = f.mul(&f.reduce(&-&q0), &f.inv(&two_beta).unwrap());
    let mut x = x0;
    x[j] = &x[j] + &(pp * &t);
    debug_assert!(p2.divides(&q.eval(&x)));
    // generators of P * L', where L' = L_x + R x/P and
    // L_x = <e_i - (beta_i/beta_j) e_j (i != j), P e_j>
    let bj_inv = f.inv(&beta[j]).unwrap();
    let mut gens: Vec<Vec3> = Vec::new();
    for i in 0..3 {
        if i == j {
            continue;
        }
        let mut g = unit_vec(i, p);
        g[j] = f.reduce(&-&f.mul(&beta[i], &bj_inv));
        gens.push(g.map(|c| pp * &c));
    }
    gens.push(unit_vec(j, p).map(|c| p2 * &c));
    gens.push(x);
    let b = hnf(&gens)?;
    let mut gram: [[Poly; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| Poly::zero(p)));
    for r in 0..3 {
        for c in 0..3 {
            let v = q.bilinear(&b[r], &b[c]);
            gram[r][c] = v.div_exact(p2).ok_or_else(|| Error::Assertion("neighbor is not integral".into()))?;
        }
    }
    let nb = TernaryForm::new(gram)?;
    let (d0, d1) = (q.disc(), nb.disc());
    if d0.monic() != d1.monic() {
        return Err(Error::Assertion("neighbor changed the discriminant".into()));
    }
    Ok(nb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    CertifiedClosed,
    Heuristic,
}

#[derive(Clone, Debug)]
pub struct GenusClass {
    pub form: TernaryForm,
    pub automorphisms: u64,
}

#[derive(Clone, Debug)]
pub struct GenusSet {
    pub classes: Vec<GenusClass>,
    /// `sum 1/n_Q`.
    pub weight: Ratio<i64>,
    pub completeness: Completeness,
    /// Primes whose single-prime walk from the start form reached every class.
    pub closing_primes: Vec<Poly>,
    pub primes: Vec<Poly>,
}

impl GenusSet {
    /// The genus of a single form, with no walk.
    pub fn singleton(q: &TernaryForm) -> Result<Self> {
        let n = automorphism_count(q)?;
        Ok(GenusSet {
            classes: vec![GenusClass { form: q.clone(), automorphisms: n }],
            weight: Ratio::new(1, n as i64),
            completeness: Completeness::Heuristic,
            closing_primes: Vec::new(),
            primes: Vec::new(),
        })
    }

    pub fn index_of(&self, q: &TernaryForm) -> Result<Option<usize>> {
        for (i, c) in self.classes.iter().enumerate() {
            if is_isometric(&c.form, q)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

fn find_class(classes: &[TernaryForm], q: &TernaryForm) -> Result<Option<usize>> {
    for (i, c) in classes.iter().enumerate() {
        if is_isometric(c, q)?.is_some() {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Breadth-first closure under `P`-neighbors for `P` in `primes`.
fn walk(start: &TernaryForm, primes: &[Poly], classes: &mut Vec<TernaryForm>, limit: usize) -> Result<Vec<usize>> {
    let mut reached = vec![find_class(classes, start)?.unwrap_or_else(|| {
        classes.push(start.clone());
        classes.len() - 1
    })];
    let mut head = 0;
    while head < reached.len() {
        let cur = classes[reached[head]].clone();
        head += 1;
        for pp in primes {
            for nb in neighbors(&cur, pp)? {
                let nb = reduce(&nb)?.form;
                let idx = match find_class(classes, &nb)? {
                    Some(i) => i,
                    None => {
                        if classes.len() >= limit {
                            return Err(Error::Budget(format!("genus walk exceeded {limit} classes")));
                        }
                        classes.push(nb);
                        classes.len() - 1
                    }
                };
                if !reached.contains(&idx) {
                    reached.push(idx);
                }
            }
        }
    }
    reached.sort_unstable();
    Ok(reached)
}

/// Enumerate the genus of `Q` by neighbor walks at `primes`. The result is
/// certified closed when at least two primes each reach every class found
/// by the joint walk on their own.
pub fn genus_enumerate(q: &TernaryForm, primes: &[Poly]) -> Result<GenusSet> {
    let start = reduce(q)?.form;
    let mut classes = Vec::new();
    walk(&start, primes, &mut classes, 500)?;
    let total = classes.len();
    let mut closing = Vec::new();
    for pp in primes {
        let mut cls = classes.clone();
        let reached = walk(&start, std::slice::from_ref(pp), &mut cls, 500)?;
        if cls.len() == total && reached.len() == total {
            closing.push(pp.clone());
        }
    }
    let mut out = Vec::new();
    let mut weight = Ratio::new(0, 1);
    for f in classes {
        let n = automorphism_count(&f)?;
        weight += Ratio::new(1, n as i64);
        out.push(GenusClass { form: f, automorphisms: n });
    }
    let completeness = if closing.len() >= 2 { Completeness::CertifiedClosed } else { Completeness::Heuristic };
    Ok(GenusSet { classes: out, weight, completeness, closing_primes: closing, primes: primes.to_vec() })
}

/// Monic primes of degree `deg` not dividing `disc`.
pub fn good_primes(q: &TernaryForm, deg: usize) -> Vec<Poly> {
    let d = q.disc();
    crate::field::monic_irreducibles(deg, q.p()).into_iter().filter(|pp| !pp.divides(&d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> Poly {
        Poly::parse(s, 5).unwrap()
    }

    fn q1() -> TernaryForm {
        TernaryForm::diagonal(&pp("1"), &pp("T^3+T+1"), &pp("2")).unwrap()
    }

    fn q2() -> TernaryForm {
        TernaryForm::from_coefficients(&pp("T^2-T-1"), &pp("T"), &pp("2"), &pp("T+1"), &pp("0"), &pp("0")).unwrap()
    }

    #[test]
    fn example_forms_share_a_genus() {
        let c = compare_genus(&q1(), &q2()).unwrap();
        assert!(c.same);
        assert_eq!(c.local.len(), 1);
        assert!(same_genus(&q1(), &q1()).unwrap());
        let other = TernaryForm::diagonal(&pp("1"), &pp("T^3+T+2"), &pp("2")).unwrap();
        assert!(!same_genus(&q1(), &other).unwrap());
        let sq = TernaryForm::diagonal(&pp("1"), &pp("T^2"), &pp("2")).unwrap();
        assert!(same_genus(&sq, &sq).is_err());
    }

    #[test]
    fn neighbors_stay_in_the_genus() {
        let pr = pp("T");
        let nbs = neighbors(&q1(), &pr).unwrap();
        assert_eq!(nbs.len(), 6);
        for nb in &nbs {
            assert!(same_genus(&q1(), nb).unwrap());
        }
    }
}
