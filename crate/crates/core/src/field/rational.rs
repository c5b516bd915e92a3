//! The rational function field k = F_p(T) and its completion at infinity.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::fp;
use super::poly::Poly;
use crate::error::{Error, Result};

/// A reduced fraction `num / den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        num.try_same_field(&den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = num.p();
        if num.is_zero() {
            return Ok(RationalFunction { num, den: Poly::one(p) });
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap());
        let l = fp::inv(d.lead(), p);
        n = n.scale(l);
        d = d.scale(l);
        Ok(RationalFunction { num: n, den: d })
    }

    pub fn from_poly(f: Poly) -> Self {
        let p = f.p();
        RationalFunction { num: f, den: Poly::one(p) }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_poly(Poly::zero(p))
    }

    pub fn one(p: u32) -> Self {
        Self::from_poly(Poly::one(p))
    }

    pub fn constant(a: u32, p: u32) -> Self {
        Self::from_poly(Poly::constant(a, p))
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    /// `deg num - deg den`, i.e. minus the valuation at infinity.
    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.num.degree() - self.den.degree())
    }

    /// Valuation at infinity with uniformizer 1/T (None for zero).
    pub fn v_infty(&self) -> Option<i64> {
        self.degree().map(|d| -d)
    }

    /// Residue at infinity of `x * T^{v(x)}`: the leading coefficient ratio.
    pub fn lead_infty(&self) -> u32 {
        if self.is_zero() {
            return 0;
        }
        fp::mul(self.num.lead(), fp::inv(self.den.lead(), self.p()), self.p())
    }

    /// Valuation at a monic irreducible `q`.
    pub fn v_at(&self, q: &Poly) -> Option<i64> {
        let a = self.num.valuation(q)? as i64;
        let b = self.den.valuation(q).unwrap() as i64;
        Some(a - b)
    }

    /// Polynomial part (the quotient of num by den).
    pub fn poly_part(&self) -> Poly {
        self.num.divmod(&self.den).unwrap().0
    }

    /// Expansion in the uniformizer `1/T`: returns `(v, c)` with
    /// `x = T^{-v} (c_0 + c_1 T^{-1} + ... )`, first `n` coefficients.
    pub fn laurent_at_infinity(&self, n: usize) -> Option<(i64, Vec<u32>)> {
        let v = self.v_infty()?;
        let p = self.p();
        let dn = self.num.deg().unwrap();
        let dd = self.den.deg().unwrap();
        // in X = 1/T: num = T^dn ñ(X), den = T^dd d̃(X), d̃(0) = 1
        let nr: Vec<u32> = (0..=dn).map(|i| self.num.coeff(dn - i)).collect();
        let dr: Vec<u32> = (0..=dd).map(|i| self.den.coeff(dd - i)).collect();
        let inv0 = fp::inv(dr[0], p);
        let mut out = vec![0u32; n];
        for k in 0..n {
            let mut s = if k < nr.len() { nr[k] } else { 0 };
            for j in 1..=k.min(dd) {
                s = fp::sub(s, fp::mul(dr[j], out[k - j], p), p);
            }
            out[k] = fp::mul(s, inv0, p);
        }
        Some((v, out))
    }

    /// Coefficient `a_1` of `T^1` in the expansion at infinity.
    pub fn infinity_coeff(&self, power: i64) -> u32 {
        let Some(v) = self.v_infty() else { return 0 };
        // x = sum_j c_j T^{-v-j}; want -v-j = power
        let j = -v - power;
        if j < 0 {
            return 0;
        }
        self.laurent_at_infinity(j as usize + 1).unwrap().1[j as usize]
    }

    /// Additive character index: `e(x) = exp(2 pi i a_1 / p)` where `a_1` is
    /// the coefficient of `T` at infinity. Returns `a_1` in F_p.
    pub fn additive_char(&self) -> u32 {
        self.infinity_coeff(1)
    }

    /// `e(x)` as a complex number.
    pub fn additive_char_value(&self) -> num_complex::Complex64 {
        let a = self.additive_char();
        num_complex::Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * a as f64 / self.p() as f64)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let e = e.unsigned_abs();
        RationalFunction::new(base.num.pow(e), base.den.pow(e))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "({})", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Poly> for RationalFunction {
    fn from(f: Poly) -> Self {
        RationalFunction::from_poly(f)
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, o: &RationalFunction) -> RationalFunction {
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RationalFunction::new(n, &self.den * &o.den).unwrap()
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, o: &RationalFunction) -> RationalFunction {
        let n = &(&self.num * &o.den) - &(&o.num * &self.den);
        RationalFunction::new(n, &self.den * &o.den).unwrap()
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, o: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &o.num, &self.den * &o.den).unwrap()
    }
}

impl Div for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::inv`] to check.
    fn div(self, o: &RationalFunction) -> RationalFunction {
        assert!(!o.is_zero(), "division by zero rational function");
        RationalFunction::new(&self.num * &o.den, &self.den * &o.num).unwrap()
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}
