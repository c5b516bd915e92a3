//! Diagonalization over k and the local theory at the infinite place.

use super::form::{to_rational, transpose, RatMat3, TernaryForm};
use crate::error::{precondition, Result};
use crate::field::{fp, Poly, RationalFunction};
use crate::symbols::hilbert_infty;

/// Square class of an element of k_inf^x: parity of the degree and whether
/// the leading coefficient is a square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub odd_degree: bool,
    pub square_lead: bool,
}

impl SquareClass {
    pub fn of(x: &RationalFunction) -> Option<Self> {
        let d = x.degree()?;
        Some(SquareClass { odd_degree: d.rem_euclid(2) == 1, square_lead: fp::chi(x.lead_infty(), x.p()) == 1 })
    }

    pub fn of_poly(x: &Poly) -> Option<Self> {
        SquareClass::of(&RationalFunction::from_poly(x.clone()))
    }

    /// The four classes, represented by `1, u, T, uT` (u a non-residue).
    pub fn all() -> [SquareClass; 4] {
        [
            SquareClass { odd_degree: false, square_lead: true },
            SquareClass { odd_degree: false, square_lead: false },
            SquareClass { odd_degree: true, square_lead: true },
            SquareClass { odd_degree: true, square_lead: false },
        ]
    }

    pub fn representative(self, p: u32) -> RationalFunction {
        let u = if self.square_lead { 1 } else { crate::field::PrimeModulus::new(p).unwrap().nonresidue() };
        let x = if self.odd_degree { Poly::monomial(1, u, p) } else { Poly::constant(u, p) };
        RationalFunction::from_poly(x)
    }

    pub fn label(self) -> &'static str {
        match (self.odd_degree, self.square_lead) {
            (false, true) => "1",
            (false, false) => "u",
            (true, true) => "T",
            (true, false) => "uT",
        }
    }
}

/// `S^t A S = diag(d)` over k; the columns of `S` are the new basis.
#[derive(Clone, Debug)]
pub struct InftyDiagonalization {
    pub diag: [RationalFunction; 3],
    pub s: RatMat3,
}

impl InftyDiagonalization {
    pub fn new(q: &TernaryForm) -> Result<Self> {
        let p = q.p();
        let a = to_rational(q.gram());
        let mut s: RatMat3 = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { RationalFunction::one(p) } else { RationalFunction::zero(p) })
        });
        let congr = |s: &RatMat3| super::form::rat_mul(&transpose(s), &super::form::rat_mul(&a, s));
        for k in 0..3 {
            let mut cur = congr(&s);
            if cur[k][k].is_zero() {
                // bring a nonzero diagonal entry to position k, or make one
                if let Some(i) = (k + 1..3).find(|&i| !cur[i][i].is_zero()) {
                    swap_cols(&mut s, k, i);
                } else if let Some(j) = (k + 1..3).find(|&j| !cur[k][j].is_zero()) {
                    add_col(&mut s, k, j, &RationalFunction::one(p));
                } else {
                    return precondition("degenerate form");
                }
                cur = congr(&s);
            }
            for j in k + 1..3 {
                if !cur[k][j].is_zero() {
                    let m = -&(&cur[k][j] / &cur[k][k]);
                    add_col(&mut s, j, k, &m);
                }
            }
        }
        let fin = congr(&s);
        let diag = [fin[0][0].clone(), fin[1][1].clone(), fin[2][2].clone()];
        debug_assert!((0..3).all(|i| (0..3).all(|j| i == j || fin[i][j].is_zero())));
        Ok(InftyDiagonalization { diag, s })
    }

    /// `(-d1 d3, -d2 d3)_inf = -1`.
    pub fn is_anisotropic(&self) -> bool {
        let [d1, d2, d3] = &self.diag;
        let x = -&(d1 * d3);
        let y = -&(d2 * d3);
        hilbert_infty(&x, &y).unwrap() == -1
    }

    pub fn degrees(&self) -> [i64; 3] {
        std::array::from_fn(|i| self.diag[i].degree().unwrap())
    }

    /// Whether `c != 0` is represented by the form over k_inf.
    pub fn represents_at_infinity(&self, c: &RationalFunction) -> bool {
        let [d1, d2, d3] = &self.diag;
        SquareClass::all().iter().any(|t| {
            let t = t.representative(c.p());
            binary_represents(d1, d2, &t) && binary_represents(&-d3, c, &t)
        })
    }

    /// Square classes of k_inf represented by the form.
    pub fn represented_classes(&self, p: u32) -> Vec<SquareClass> {
        SquareClass::all().into_iter().filter(|c| self.represents_at_infinity(&c.representative(p))).collect()
    }
}

/// `<a, b>` represents `t` over k_inf iff `(a t, b t)_inf = 1`.
fn binary_represents(a: &RationalFunction, b: &RationalFunction, t: &RationalFunction) -> bool {
    hilbert_infty(&(a * t), &(b * t)).unwrap() == 1
}

fn swap_cols(s: &mut RatMat3, a: usize, b: usize) {
    for row in s.iter_mut() {
        row.swap(a, b);
    }
}

/// column `dst` += m * column `src`
fn add_col(s: &mut RatMat3, dst: usize, src: usize, m: &RationalFunction) {
    for row in s.iter_mut() {
        let add = m * &row[src];
        row[dst] = &row[dst] + &add;
    }
}
