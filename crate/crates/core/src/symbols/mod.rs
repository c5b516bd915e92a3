//! Quadratic residue symbols, local Hilbert symbols, Gauss sums and the
//! metaplectic cocycle.

pub mod gauss;
pub mod kohnen;
pub mod metaplectic;

use crate::error::{precondition, Error, Result};
use crate::field::{fp, Poly, RationalFunction, ResidueField};

pub use gauss::{finite_field_gauss, gauss_sum_rational, hasse_davenport_check, GaussSumValue};
pub use kohnen::{kohnen_symbol, KohnenSymbol};
pub use metaplectic::{cocycle_eps, eta_split, kappa_split, Mat2, MetaplecticElement};

/// A place of k = F_p(T): a monic irreducible or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

/// Legendre symbol `(d/P)` for irreducible `P` by Euler's criterion.
pub fn legendre(d: &Poly, big_p: &Poly) -> Result<i8> {
    d.try_same_field(big_p)?;
    let f = ResidueField::new(big_p)?;
    Ok(f.chi(d))
}

/// Euler's criterion without the irreducibility check.
pub fn legendre_unchecked(d: &Poly, big_p: &Poly) -> i8 {
    let r = d.rem(big_p);
    if r.is_zero() {
        return 0;
    }
    let q = (d.p() as u128).pow(big_p.deg().unwrap() as u32);
    let x = r.pow_mod((q - 1) / 2, big_p);
    if x.is_one() {
        1
    } else {
        -1
    }
}

/// Jacobi symbol `(d/c)`, multiplicative in `c`; `(d/unit) = 1`.
///
/// Computed by a Euclidean descent with the reciprocity law: for monic
/// coprime `a, b` one has `(a/b) = (b/a)` because `p = 1 mod 4`, and a
/// constant `u` contributes `chi(u)^{deg b}`.
pub fn jacobi(d: &Poly, c: &Poly) -> Result<i8> {
    d.try_same_field(c)?;
    if c.is_zero() {
        return precondition("jacobi symbol with zero modulus");
    }
    let p = d.p();
    let mut b = c.monic();
    let mut a = d.clone();
    let mut acc = 1i8;
    loop {
        if b.degree() == 0 {
            return Ok(acc);
        }
        a = a.rem(&b);
        if a.is_zero() {
            return Ok(0);
        }
        let u = a.lead();
        if b.degree() % 2 == 1 {
            acc *= fp::chi(u, p);
        }
        let a_monic = a.scale(fp::inv(u, p));
        a = b;
        b = a_monic;
    }
}

/// Jacobi symbol from the factorization of `c`.
pub fn jacobi_slow(d: &Poly, c: &Poly) -> Result<i8> {
    d.try_same_field(c)?;
    let (_, fac) = c.factor()?;
    let mut acc = 1i8;
    for (q, m) in fac {
        let s = legendre_unchecked(d, &q);
        if s == 0 {
            return Ok(0);
        }
        if m % 2 == 1 {
            acc *= s;
        }
    }
    Ok(acc)
}

/// `(x, y)_inf = chi(lead x)^{v(y)} chi(lead y)^{v(x)}`.
pub fn hilbert_infty(x: &RationalFunction, y: &RationalFunction) -> Result<i8> {
    let (Some(vx), Some(vy)) = (x.v_infty(), y.v_infty()) else {
        return precondition("Hilbert symbol of zero");
    };
    let p = x.p();
    let mut s = 1i8;
    if vy.rem_euclid(2) == 1 {
        s *= fp::chi(x.lead_infty(), p);
    }
    if vx.rem_euclid(2) == 1 {
        s *= fp::chi(y.lead_infty(), p);
    }
    Ok(s)
}

/// Quadratic character at `P` of a rational function that is a unit at `P`.
fn chi_at_unit(x: &RationalFunction, big_p: &Poly) -> i8 {
    legendre_unchecked(x.num(), big_p) * legendre_unchecked(x.den(), big_p)
}

/// Unit part `x / P^{v_P(x)}`.
fn unit_part(x: &RationalFunction, big_p: &Poly, v: i64) -> RationalFunction {
    let pv = RationalFunction::from_poly(big_p.clone()).pow(v).unwrap();
    x / &pv
}

/// Tame symbol at a finite place `P` (monic irreducible).
pub fn hilbert_finite(x: &RationalFunction, y: &RationalFunction, big_p: &Poly) -> Result<i8> {
    if x.is_zero() || y.is_zero() {
        return precondition("Hilbert symbol of zero");
    }
    if !big_p.is_irreducible() {
        return precondition(format!("{big_p} is not irreducible"));
    }
    let big_p = big_p.monic();
    let vx = x.v_at(&big_p).unwrap();
    let vy = y.v_at(&big_p).unwrap();
    let mut s = 1i8;
    if vy.rem_euclid(2) == 1 {
        s *= chi_at_unit(&unit_part(x, &big_p, vx), &big_p);
    }
    if vx.rem_euclid(2) == 1 {
        s *= chi_at_unit(&unit_part(y, &big_p, vy), &big_p);
    }
    Ok(s)
}

pub fn hilbert(x: &RationalFunction, y: &RationalFunction, v: &Place) -> Result<i8> {
    match v {
        Place::Infinity => hilbert_infty(x, y),
        Place::Finite(q) => hilbert_finite(x, y, q),
    }
}

/// Finite places where `x` or `y` is not a unit, sorted.
pub fn support(x: &RationalFunction, y: &RationalFunction) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    for f in [x.num(), x.den(), y.num(), y.den()] {
        if f.is_zero() {
            return precondition("zero in support");
        }
        out.extend(f.prime_divisors());
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// All nontrivial local symbols `(x, y)_v`, with infinity last.
pub fn local_symbols(x: &RationalFunction, y: &RationalFunction) -> Result<Vec<(Place, i8)>> {
    let mut out = Vec::new();
    for q in support(x, y)? {
        let s = hilbert_finite(x, y, &q)?;
        out.push((Place::Finite(q), s));
    }
    out.push((Place::Infinity, hilbert_infty(x, y)?));
    Ok(out)
}

/// `(a/b)(b/a) = (a, b)_inf` for coprime nonzero `a`, `b`.
pub fn verify_reciprocity(a: &Poly, b: &Poly) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return precondition("zero argument");
    }
    if !a.gcd(b).is_one() {
        return Err(Error::Precondition(format!("{a} and {b} are not coprime")));
    }
    let lhs = jacobi(a, b)? * jacobi(b, a)?;
    let rhs = hilbert_infty(&a.clone().into(), &b.clone().into())?;
    Ok(lhs == rhs)
}

/// Product of `(x, y)_v` over every place is 1.
pub fn verify_product_formula(x: &RationalFunction, y: &RationalFunction) -> Result<bool> {
    let prod: i8 = local_symbols(x, y)?.iter().map(|(_, s)| *s).product();
    Ok(prod == 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> Poly {
        Poly::parse(s, 5).unwrap()
    }
    fn rf(s: &str) -> RationalFunction {
        pp(s).into()
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(&pp("T"), &pp("T+1")).unwrap(), 1);
        assert_eq!(legendre(&pp("T+1"), &pp("T+1")).unwrap(), 0);
        assert_eq!(legendre(&pp("2"), &pp("T")).unwrap(), -1);
        assert!(legendre(&pp("2"), &pp("T^2+1")).is_err());
    }

    #[test]
    fn jacobi_examples() {
        let c = pp("T+1");
        assert_eq!(jacobi(&pp("1"), &c).unwrap(), 1);
        assert_eq!(jacobi(&pp("T"), &(&pp("T+1") * &pp("T+2"))).unwrap(), -1);
        assert_eq!(jacobi(&pp("T^2+T"), &pp("T+1")).unwrap(), 0);
        assert_eq!(jacobi(&pp("3"), &pp("4")).unwrap(), 1);
        assert!(jacobi(&pp("3"), &Poly::zero(5)).is_err());
    }

    #[test]
    fn hilbert_examples() {
        let eps = rf("2");
        assert_eq!(hilbert_infty(&rf("T"), &rf("T")).unwrap(), 1);
        assert_eq!(hilbert_infty(&eps, &rf("T")).unwrap(), -1);
        assert_eq!(hilbert_finite(&rf("T"), &rf("2"), &pp("T")).unwrap(), -1);
        assert_eq!(hilbert_finite(&rf("T+2"), &rf("3"), &pp("T")).unwrap(), 1);
        assert!(verify_product_formula(&rf("T"), &rf("2T+2")).unwrap());
        assert!(verify_reciprocity(&pp("T"), &pp("T+1")).unwrap());
        assert!(verify_reciprocity(&pp("T"), &pp("T^2")).is_err());
    }
}
