//! Lattice reduction, isometry testing and automorphism groups.

use super::enumerate::{representations_with, DEFAULT_BUDGET};
use super::form::{column, det3, from_columns, identity, inverse_unimodular, mat_mul, PolyMat3, TernaryForm, Vec3};
use crate::error::{precondition, Result};
use crate::field::{Poly, RationalFunction};

/// A basis change `u` with `reduced = u^t A u`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub form: TernaryForm,
    pub u: PolyMat3,
    /// `sum deg Q(b_i) = deg disc`, i.e. the basis is orthogonal for the
    /// ultrametric norm `|Q|^{1/2}`.
    pub orthogonal: bool,
}

fn deg_q(q: &TernaryForm, v: &Vec3) -> i64 {
    q.eval(v).degree()
}

/// Solve the 1x1 or 2x2 rational system `G mu = rhs`.
fn project(q: &TernaryForm, prev: &[Vec3], v: &Vec3) -> Vec<RationalFunction> {
    let r = |x: Poly| RationalFunction::from_poly(x);
    match prev.len() {
        1 => vec![&r(q.bilinear(&prev[0], v)) / &r(q.eval(&prev[0]))],
        2 => {
            let g00 = r(q.eval(&prev[0]));
            let g11 = r(q.eval(&prev[1]));
            let g01 = r(q.bilinear(&prev[0], &prev[1]));
            let b0 = r(q.bilinear(&prev[0], v));
            let b1 = r(q.bilinear(&prev[1], v));
            let det = &(&g00 * &g11) - &(&g01 * &g01);
            let m0 = &(&(&g11 * &b0) - &(&g01 * &b1)) / &det;
            let m1 = &(&(&g00 * &b1) - &(&g01 * &b0)) / &det;
            vec![m0, m1]
        }
        _ => Vec::new(),
    }
}

/// Size-reduce against the Gram-Schmidt span of shorter vectors until no
/// vector shrinks, keeping the basis sorted by `deg Q`.
pub fn reduce(q: &TernaryForm) -> Result<Reduced> {
    let p = q.p();
    let mut basis: [Vec3; 3] = [column(&identity(p), 0), column(&identity(p), 1), column(&identity(p), 2)];
    for _round in 0..200 {
        basis.sort_by_key(|b| (deg_q(q, b), b.clone()));
        let mut changed = false;
        for j in 1..3 {
            let mu = project(q, &basis[..j], &basis[j]);
            let mut w = basis[j].clone();
            for (i, m) in mu.iter().enumerate() {
                let r = m.poly_part();
                if r.is_zero() {
                    continue;
                }
                for k in 0..3 {
                    w[k] = &w[k] - &(&r * &basis[i][k]);
                }
            }
            if deg_q(q, &w) < deg_q(q, &basis[j]) {
                basis[j] = w;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    basis.sort_by_key(|b| (deg_q(q, b), b.clone()));
    let mut u = from_columns(&basis);
    if det3(&u).degree() != 0 {
        return precondition("reduction produced a non-unimodular basis");
    }
    let d = det3(&u).coeff(0);
    if d != 1 {
        let di = crate::field::fp::inv(d, p);
        for row in u.iter_mut() {
            row[2] = row[2].scale(di);
        }
    }
    let form = q.transform(&u);
    let total: i64 = (0..3).map(|i| form.entry(i, i).degree()).sum();
    let orthogonal = total == form.disc().degree();
    Ok(Reduced { form, u, orthogonal })
}

/// All `g` with `g^t A1 g = A2` (columns are images of the basis of Q2),
/// restricted to `det g = 1` when `special` is set. Stops after `limit`.
fn isometries(q1: &TernaryForm, q2: &TernaryForm, special: bool, limit: usize) -> Result<Vec<PolyMat3>> {
    let mut cands: Vec<Vec<Vec3>> = Vec::new();
    for i in 0..3 {
        let target = q2.entry(i, i);
        cands.push(representations_with(q1, target, 0, DEFAULT_BUDGET)?.vectors);
    }
    let mut out = Vec::new();
    for w0 in &cands[0] {
        for w1 in &cands[1] {
            if &q1.bilinear(w0, w1) != q2.entry(0, 1) {
                continue;
            }
            for w2 in &cands[2] {
                if &q1.bilinear(w0, w2) != q2.entry(0, 2) || &q1.bilinear(w1, w2) != q2.entry(1, 2) {
                    continue;
                }
                let g = from_columns(&[w0.clone(), w1.clone(), w2.clone()]);
                let d = det3(&g);
                if d.degree() != 0 || (special && !d.is_one()) {
                    continue;
                }
                out.push(g);
                if out.len() >= limit {
                    return Ok(out);
                }
            }
        }
    }
    Ok(out)
}

/// `|SO_Q(R)|`.
pub fn automorphism_count(q: &TernaryForm) -> Result<u64> {
    let r = reduce(q)?;
    Ok(isometries(&r.form, &r.form, true, usize::MAX)?.len() as u64)
}

/// The automorphisms of determinant 1, in the original basis.
pub fn automorphisms(q: &TernaryForm) -> Result<Vec<PolyMat3>> {
    let r = reduce(q)?;
    let ui = inverse_unimodular(&r.u).unwrap();
    Ok(isometries(&r.form, &r.form, true, usize::MAX)?
        .into_iter()
        .map(|g| mat_mul(&r.u, &mat_mul(&g, &ui)))
        .collect())
}

/// Some `g` in GL_3(R) with `g^t A1 g = A2`, if one exists.
pub fn is_isometric(q1: &TernaryForm, q2: &TernaryForm) -> Result<Option<PolyMat3>> {
    if q1.p() != q2.p() {
        return Ok(None);
    }
    let (d1, d2) = (q1.disc(), q2.disc());
    if d1.monic() != d2.monic() || crate::field::fp::chi(crate::field::fp::mul(d1.lead(), d2.lead(), q1.p()), q1.p()) != 1 {
        return Ok(None);
    }
    let r1 = reduce(q1)?;
    let r2 = reduce(q2)?;
    let found = isometries(&r1.form, &r2.form, false, 1)?;
    Ok(found.into_iter().next().map(|g| {
        // g^t (u1^t A1 u1) g = u2^t A2 u2  =>  h = u1 g u2^{-1}
        let u2i = inverse_unimodular(&r2.u).unwrap();
        mat_mul(&r1.u, &mat_mul(&g, &u2i))
    }))
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
    fn example_automorphisms() {
        assert_eq!(automorphism_count(&q1()).unwrap(), 12);
        let n2 = automorphism_count(&q2()).unwrap();
        assert!(n2 >= 2 && n2.is_multiple_of(2), "n(Q2) = {n2}");
        for g in automorphisms(&q2()).unwrap() {
            assert_eq!(&q2().transform(&g), &q2());
        }
    }

    #[test]
    fn reduction_is_orthogonal_on_examples() {
        assert!(reduce(&q1()).unwrap().orthogonal);
        assert!(reduce(&q2()).unwrap().orthogonal);
    }

    #[test]
    fn planted_isometry_is_found() {
        let g = [[pp("1"), pp("T"), pp("0")], [pp("0"), pp("1"), pp("T^2+1")], [pp("2"), pp("2T"), pp("3")]];
        let q = q2().transform(&g);
        let h = is_isometric(&q2(), &q).unwrap().expect("isometry");
        assert_eq!(q2().transform(&h), q);
        assert!(is_isometric(&q1(), &q2()).unwrap().is_none());
    }
}
