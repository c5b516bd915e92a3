//! Quadratic Gauss sums over R/DR and over finite fields.
//!
//! Sums are accumulated exactly in Z[zeta_p] as a vector of multiplicities
//! `c_k` (the coefficient of `zeta_p^k`); when the vector has the shape of
//! `a + b*sqrt(p)` the exact pair is reported as well.

use num_complex::Complex64;

use super::jacobi;
use crate::error::{precondition, Result};
use crate::field::{enumerate_below, fp, Poly, ResidueField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    DirectSum,
    ClosedForm,
}

/// A Gauss sum value.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussSumValue {
    pub value: Complex64,
    /// `(a, b)` with value `a + b*sqrt(p)`, when that form applies.
    pub exact: Option<(i64, i64)>,
    /// Multiplicities of each `zeta_p^k` (direct sums only).
    pub cyclotomic: Vec<i64>,
    pub provenance: Provenance,
}

impl GaussSumValue {
    pub fn from_cyclotomic(c: Vec<i64>) -> Self {
        let p = c.len();
        let value = c
            .iter()
            .enumerate()
            .map(|(k, &m)| Complex64::from_polar(m as f64, 2.0 * std::f64::consts::PI * k as f64 / p as f64))
            .sum();
        let exact = sqrt_p_form(&c);
        GaussSumValue { value, exact, cyclotomic: c, provenance: Provenance::DirectSum }
    }

    pub fn closed_form(a: i64, b: i64, p: u32) -> Self {
        let v = a as f64 + b as f64 * (p as f64).sqrt();
        GaussSumValue {
            value: Complex64::new(v, 0.0),
            exact: Some((a, b)),
            cyclotomic: Vec::new(),
            provenance: Provenance::ClosedForm,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.value.norm_sqr()
    }

    /// Exact test of `|value|^2 = n` in Z[zeta_p].
    pub fn norm_sqr_is(&self, n: i64) -> bool {
        let c = &self.cyclotomic;
        let p = c.len();
        if p == 0 {
            return (self.norm_sqr() - n as f64).abs() <= 1e-10 * (n as f64).max(1.0);
        }
        // value * conj(value) = sum_m (sum_k c_k c_{k-m}) zeta^m
        let v: Vec<i64> = (0..p).map(|m| (0..p).map(|k| c[k] * c[(k + p - m) % p]).sum()).collect();
        // equals n iff v_0 - n = v_1 = ... = v_{p-1}
        v[1..].iter().all(|&x| x == v[0] - n)
    }
}

/// Recognize `sum c_k zeta^k` as `a + b sqrt(p)` using `sum_k zeta^k = 0`
/// and `sum_k chi(k) zeta^k = sqrt(p)` (p = 1 mod 4).
fn sqrt_p_form(c: &[i64]) -> Option<(i64, i64)> {
    let p = c.len() as u32;
    let mut res = None;
    let mut non = None;
    for k in 1..p {
        let slot = if fp::chi(k, p) == 1 { &mut res } else { &mut non };
        match *slot {
            None => *slot = Some(c[k as usize]),
            Some(x) if x == c[k as usize] => {}
            _ => return None,
        }
    }
    let (r, n) = (res?, non?);
    if (r - n) % 2 != 0 {
        return None;
    }
    let b = (r - n) / 2;
    let m = (r + n) / 2;
    Some((c[0] - m, b))
}

/// `G_a(D) = sum_{j mod D} (j/D) e(T^2 a j / D)` by direct summation.
///
/// The character value of `T^2 a j / D` only depends on `a j mod D`: it is
/// the `T^{-1}` coefficient of `(a j mod D)/D`.
pub fn gauss_sum_rational(a: &Poly, d: &Poly) -> Result<GaussSumValue> {
    a.try_same_field(d)?;
    if d.degree() < 1 || !d.is_monic() {
        return precondition("Gauss sum modulus must be monic of positive degree");
    }
    let p = d.p();
    let n = d.deg().unwrap();
    let a = a.rem(d);
    let mut c = vec![0i64; p as usize];
    for j in enumerate_below(n, p) {
        let s = jacobi(&j, d)?;
        if s == 0 {
            continue;
        }
        let r = (&a * &j).rem(d);
        let k = if r.degree() == n as i64 - 1 { r.lead() } else { 0 };
        c[k as usize] += s as i64;
    }
    Ok(GaussSumValue::from_cyclotomic(c))
}

/// `tau(psi o Tr, chi o N)` over F_{p^s}, psi(x) = exp(2 pi i x / p).
pub fn finite_field_gauss(p: u32, s: usize) -> Result<GaussSumValue> {
    if s == 0 {
        return precondition("extension degree must be positive");
    }
    let f = ResidueField::extension(p, s);
    let mut c = vec![0i64; p as usize];
    for x in f.elements().skip(1) {
        let chi = fp::chi(f.norm(&x), p);
        c[f.trace(&x) as usize] += chi as i64;
    }
    Ok(GaussSumValue::from_cyclotomic(c))
}

/// `(-tau_1)^s = -tau_s`, checked exactly when both sides have the form
/// `a + b sqrt(p)` and otherwise to 1e-9 relative.
pub fn hasse_davenport_check(p: u32, s: usize) -> Result<bool> {
    let t1 = finite_field_gauss(p, 1)?;
    let ts = finite_field_gauss(p, s)?;
    if let (Some((a1, b1)), Some((a_s, b_s))) = (t1.exact, ts.exact) {
        // (x + y sqrt p)^s with x = -a1, y = -b1
        let (x, y) = (-(a1 as i128), -(b1 as i128));
        let (mut u, mut v) = (1i128, 0i128);
        for _ in 0..s {
            (u, v) = (u * x + v * y * p as i128, u * y + v * x);
        }
        return Ok(u == -(a_s as i128) && v == -(b_s as i128));
    }
    let lhs = (-t1.value).powu(s as u32);
    let rhs = -ts.value;
    Ok((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0))
}

/// Normalized local quadratic Gauss sum at a place of degree `s`:
/// `q^{-1/2} sum_{x in F_q} psi(Tr(c x^2))` for a unit `c` of F_q.
pub fn local_quadratic_gauss(p: u32, s: usize, c: &Poly) -> Result<f64> {
    let f = ResidueField::extension(p, s);
    let c = f.reduce(c);
    if c.is_zero() {
        return precondition("c must be a unit");
    }
    let mut z = Complex64::new(0.0, 0.0);
    for x in f.elements() {
        let t = f.trace(&f.mul(&c, &f.mul(&x, &x)));
        z += Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t as f64 / p as f64);
    }
    let q = (p as f64).powi(s as i32);
    Ok(z.re / q.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(s: &str) -> Poly {
        Poly::parse(s, 5).unwrap()
    }

    #[test]
    fn classical_gauss_sum_mod_t() {
        let g = gauss_sum_rational(&pp("1"), &pp("T")).unwrap();
        assert_eq!(g.exact, Some((0, 1)));
        assert!((g.value.re - 5f64.sqrt()).abs() < 1e-12);
        assert!(g.norm_sqr_is(5));
        let z = gauss_sum_rational(&pp("T"), &pp("T")).unwrap();
        assert_eq!(z.exact, Some((0, 0)));
    }

    #[test]
    fn finite_field_values() {
        let t1 = finite_field_gauss(5, 1).unwrap();
        assert_eq!(t1.exact, Some((0, 1)));
        let t2 = finite_field_gauss(5, 2).unwrap();
        assert_eq!(t2.exact, Some((-5, 0)));
        assert!(hasse_davenport_check(5, 1).unwrap());
        assert!(hasse_davenport_check(5, 2).unwrap());
        assert!(hasse_davenport_check(5, 3).unwrap());
    }
}
