//! Residue fields F_p[T]/(P) and the finite fields F_{p^s}.

use super::fp;
use super::poly::{enumerate_below, Poly};
use crate::error::{precondition, Result};

/// The field `F_p[T]/(P)` for a monic irreducible `P`.
#[derive(Clone, Debug)]
pub struct ResidueField {
    modulus: Poly,
    q: u128,
}

impl ResidueField {
    pub fn new(modulus: &Poly) -> Result<Self> {
        if !modulus.is_irreducible() {
            return precondition(format!("{modulus} is not irreducible"));
        }
        let m = modulus.monic();
        let q = (m.p() as u128).pow(m.deg().unwrap() as u32);
        Ok(ResidueField { modulus: m, q })
    }

    /// The field with `p^s` elements, realized modulo the first monic
    /// irreducible of degree `s` in enumeration order.
    pub fn extension(p: u32, s: usize) -> Self {
        let m = super::poly::enumerate_monic(s, p).find(|f| f.is_irreducible()).unwrap();
        let q = (p as u128).pow(s as u32);
        ResidueField { modulus: m, q }
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    pub fn p(&self) -> u32 {
        self.modulus.p()
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg().unwrap()
    }

    pub fn order(&self) -> u128 {
        self.q
    }

    pub fn reduce(&self, a: &Poly) -> Poly {
        a.rem(&self.modulus)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        a.mul_mod(b, &self.modulus)
    }

    pub fn pow(&self, a: &Poly, e: u128) -> Poly {
        a.pow_mod(e, &self.modulus)
    }

    pub fn inv(&self, a: &Poly) -> Option<Poly> {
        a.inv_mod(&self.modulus)
    }

    /// Quadratic character by Euler's criterion.
    pub fn chi(&self, a: &Poly) -> i8 {
        let a = self.reduce(a);
        if a.is_zero() {
            return 0;
        }
        let r = self.pow(&a, (self.q - 1) / 2);
        if r.is_one() {
            1
        } else {
            debug_assert_eq!(r, Poly::constant(self.p() - 1, self.p()));
            -1
        }
    }

    /// Absolute trace to F_p.
    pub fn trace(&self, a: &Poly) -> u32 {
        let p = self.p() as u128;
        let mut x = self.reduce(a);
        let mut s = x.clone();
        for _ in 1..self.degree() {
            x = self.pow(&x, p);
            s = &s + &x;
        }
        let s = self.reduce(&s);
        debug_assert!(s.is_constant());
        s.coeff(0)
    }

    /// Norm to F_p.
    pub fn norm(&self, a: &Poly) -> u32 {
        let p = self.p() as u128;
        let e = (self.q - 1) / (p - 1);
        let r = self.pow(a, e);
        debug_assert!(r.is_constant());
        r.coeff(0)
    }

    pub fn elements(&self) -> impl Iterator<Item = Poly> {
        enumerate_below(self.degree(), self.p())
    }

    /// Square root, if one exists (by search over a Tonelli-Shanks step).
    pub fn sqrt(&self, a: &Poly) -> Option<Poly> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Some(a);
        }
        if self.chi(&a) != 1 {
            return None;
        }
        let p = self.p();
        if self.degree() == 1 {
            return fp::sqrt(a.coeff(0), p).map(|r| Poly::constant(r, p));
        }
        // Tonelli-Shanks in the multiplicative group of order q - 1
        let mut qq = self.q - 1;
        let mut s = 0u32;
        while qq.is_multiple_of(2) {
            qq /= 2;
            s += 1;
        }
        let z = self.elements().find(|z| self.chi(z) == -1)?;
        let mut m = s;
        let mut c = self.pow(&z, qq);
        let mut t = self.pow(&a, qq);
        let mut r = self.pow(&a, qq.div_ceil(2));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = self.mul(&t2, &t2);
                i += 1;
            }
            let b = self.pow(&c, 1u128 << (m - i - 1));
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        Some(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_norm_and_squares() {
        let f = ResidueField::extension(5, 2);
        let mut squares = 0;
        for a in f.elements().skip(1) {
            let c = f.chi(&a);
            if c == 1 {
                squares += 1;
                let r = f.sqrt(&a).unwrap();
                assert_eq!(f.mul(&r, &r), f.reduce(&a));
            }
            // chi on F_q restricted through the norm
            assert_eq!(c, fp::chi(f.norm(&a), 5));
        }
        assert_eq!(squares, 12);
        let total: u32 = f.elements().map(|a| f.trace(&a)).fold(0, |s, t| (s + t) % 5);
        assert_eq!(total, 0);
    }
}
