//! The Kubota cocycle on SL_2(k) and its two splittings.

use std::ops::Mul;

use super::{hilbert_infty, jacobi};
use crate::error::{precondition, Result};
use crate::field::{Poly, RationalFunction};

/// A 2x2 matrix `[[a, b], [c, d]]` over k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: RationalFunction,
    pub b: RationalFunction,
    pub c: RationalFunction,
    pub d: RationalFunction,
}

impl Mat2 {
    pub fn new(a: RationalFunction, b: RationalFunction, c: RationalFunction, d: RationalFunction) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_polys(a: Poly, b: Poly, c: Poly, d: Poly) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity(p: u32) -> Self {
        let (o, z) = (RationalFunction::one(p), RationalFunction::zero(p));
        Mat2::new(o.clone(), z.clone(), z, o)
    }

    /// `[[0, -1], [1, 0]]`.
    pub fn weyl(p: u32) -> Self {
        let (o, z) = (RationalFunction::one(p), RationalFunction::zero(p));
        Mat2::new(z.clone(), -&o, o, z)
    }

    pub fn upper(x: RationalFunction) -> Self {
        let p = x.p();
        Mat2::new(RationalFunction::one(p), x, RationalFunction::zero(p), RationalFunction::one(p))
    }

    pub fn lower(x: RationalFunction) -> Self {
        let p = x.p();
        Mat2::new(RationalFunction::one(p), RationalFunction::zero(p), x, RationalFunction::one(p))
    }

    pub fn diag(u: RationalFunction) -> Result<Self> {
        let p = u.p();
        let ui = u.inv()?;
        Ok(Mat2::new(u, RationalFunction::zero(p), RationalFunction::zero(p), ui))
    }

    pub fn det(&self) -> RationalFunction {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn is_sl2(&self) -> bool {
        self.det() == RationalFunction::one(self.a.p())
    }

    /// `X(g)`: the lower-left entry if nonzero, else the lower-right.
    pub fn x_value(&self) -> &RationalFunction {
        if self.c.is_zero() {
            &self.d
        } else {
            &self.c
        }
    }

    pub fn entries(&self) -> [&RationalFunction; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| x.is_polynomial())
    }

    /// All entries in O_inf (degree <= 0).
    pub fn is_infty_integral(&self) -> bool {
        self.entries().iter().all(|x| x.degree().is_none_or(|d| d <= 0))
    }
}

impl Mul for &Mat2 {
    type Output = Mat2;
    fn mul(self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }
}

/// `eps(g1, g2) = (X1, X2)(X2, X3)(X1, X3)` with `g3 = g1 g2`, symbols at
/// infinity.
pub fn cocycle_eps(g1: &Mat2, g2: &Mat2) -> Result<i8> {
    if !g1.is_sl2() || !g2.is_sl2() {
        return precondition("cocycle arguments must lie in SL_2(k)");
    }
    let g3 = g1 * g2;
    let (x1, x2, x3) = (g1.x_value(), g2.x_value(), g3.x_value());
    Ok(hilbert_infty(x1, x2)? * hilbert_infty(x2, x3)? * hilbert_infty(x1, x3)?)
}

/// The splitting over SL_2(O_inf): `(c, d)_inf` when `c` is a nonzero
/// non-unit of O_inf, and 1 otherwise.
pub fn kappa_split(g: &Mat2) -> Result<i8> {
    if !g.is_sl2() || !g.is_infty_integral() {
        return precondition("kappa is defined on SL_2(O_inf)");
    }
    match g.c.degree() {
        Some(dc) if dc < 0 => hilbert_infty(&g.c, &g.d),
        _ => Ok(1),
    }
}

/// The splitting over SL_2(R): the Jacobi symbol `(d/c)`, with value 1
/// when `c = 0`.
pub fn eta_split(g: &Mat2) -> Result<i8> {
    if !g.is_sl2() || !g.is_integral() {
        return precondition("eta is defined on SL_2(F_p[T])");
    }
    let c = g.c.num();
    if c.is_zero() {
        return Ok(1);
    }
    jacobi(g.d.num(), c)
}

/// A pair `(g, delta)` in the double cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaplecticElement {
    pub g: Mat2,
    pub sign: i8,
}

impl MetaplecticElement {
    pub fn new(g: Mat2, sign: i8) -> Result<Self> {
        if !g.is_sl2() || (sign != 1 && sign != -1) {
            return precondition("need det g = 1 and sign = +-1");
        }
        Ok(MetaplecticElement { g, sign })
    }

    /// `(g1, d1)(g2, d2) = (g1 g2, d1 d2 eps(g1, g2))`.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        let e = cocycle_eps(&self.g, &o.g)?;
        Ok(MetaplecticElement { g: &self.g * &o.g, sign: self.sign * o.sign * e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_square() {
        let s = Mat2::weyl(5);
        assert_eq!(cocycle_eps(&s, &s).unwrap(), 1);
        let id = Mat2::identity(5);
        assert_eq!(cocycle_eps(&id, &s).unwrap(), 1);
    }

    #[test]
    fn eta_on_generators() {
        let t = Poly::t(5);
        let g = &Mat2::lower(t.clone().into()) * &Mat2::upper(Poly::constant(2, 5).into());
        // [[1, 2], [T, 2T + 1]]
        assert!(g.is_sl2());
        let h = &Mat2::upper(t.into()) * &g;
        let e = cocycle_eps(&Mat2::upper(Poly::t(5).into()), &g).unwrap();
        assert_eq!(eta_split(&Mat2::upper(Poly::t(5).into())).unwrap() * eta_split(&g).unwrap() * e, eta_split(&h).unwrap());
    }
}
