//! Quadratic L-functions `L(s, chi_D)` as integer polynomials in `t = p^-s`.

mod family;
mod kernel;

use std::collections::HashMap;
use std::sync::RwLock;

use nalgebra::{DMatrix, Schur};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{precondition, Error, Result};
use crate::field::{enumerate_monic, Poly};

pub use family::{
    family_discrepancy, family_members, family_rows, star_discrepancy, Analysis, FamilyRow, FamilySample, FamilyStats,
};
pub(crate) use kernel::{jacobi_fast, primes_of_degree, tables};

/// A square-free `D` of positive degree, the conductor of `chi_D`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticDiscriminant {
    d: Poly,
}

impl QuadraticDiscriminant {
    pub fn new(d: &Poly) -> Result<Self> {
        if d.degree() < 1 {
            return precondition("D must have positive degree");
        }
        if !d.is_squarefree() {
            return precondition(format!("D = {d} is not square-free"));
        }
        Ok(QuadraticDiscriminant { d: d.clone() })
    }

    pub fn poly(&self) -> &Poly {
        &self.d
    }

    pub fn p(&self) -> u32 {
        self.d.p()
    }

    pub fn degree(&self) -> usize {
        self.d.deg().unwrap()
    }

    pub fn unit(&self) -> u32 {
        self.d.lead()
    }

    /// Half the degree of the pure part: `floor((deg D - 1) / 2)`.
    pub fn g(&self) -> usize {
        (self.degree() - 1) / 2
    }

    /// `g` with `deg D in {2g, 2g+1}`, as used by the central-value bound.
    pub fn g_bound(&self) -> usize {
        self.degree() / 2
    }
}

/// `sum over monic a of degree n of (D / a)`.
pub fn char_sum(d: &QuadraticDiscriminant, n: usize) -> i64 {
    let t = tables(d.p());
    enumerate_monic(n, d.p()).map(|a| jacobi_fast(d.poly().coeffs(), a.coeffs(), &t) as i64).sum()
}

/// Concurrent memo table for `char_sum`, keyed by `(p, D, n)`.
#[derive(Default)]
pub struct CharSumCache {
    map: RwLock<HashMap<(u32, Vec<u32>, usize), i64>>,
}

impl CharSumCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn char_sum(&self, d: &QuadraticDiscriminant, n: usize) -> i64 {
        let key = (d.p(), d.poly().coeffs().to_vec(), n);
        if let Some(v) = self.map.read().unwrap().get(&key) {
            return *v;
        }
        let v = char_sum(d, n);
        *self.map.write().unwrap().entry(key).or_insert(v)
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn entries(&self) -> Vec<((u32, Vec<u32>, usize), i64)> {
        let mut v: Vec<_> = self.map.read().unwrap().iter().map(|(k, v)| (k.clone(), *v)).collect();
        v.sort();
        v
    }

    pub fn insert(&self, key: (u32, Vec<u32>, usize), value: i64) {
        self.map.write().unwrap().insert(key, value);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LPolynomial {
    pub p: u32,
    pub coeffs: Vec<i64>,
}

impl LPolynomial {
    pub fn new(p: u32, coeffs: Vec<i64>) -> Self {
        LPolynomial { p, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval_int(&self, t: i64) -> i64 {
        self.coeffs.iter().rev().fold(0i64, |acc, &a| acc * t + a)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * t + a as f64)
    }
}

/// Coefficients of `L(t, chi_D)` from the Euler product: power sums
/// `s_n = sum_{d | n} d sum_{deg P = d} chi(P)^{n/d}` and Newton's identities.
pub fn l_polynomial(d: &QuadraticDiscriminant) -> LPolynomial {
    let p = d.p();
    let n = d.degree() - 1;
    let t = tables(p);
    let mut s = vec![0i64; n + 1];
    for deg in 1..=n {
        for pr in primes_of_degree(deg, p).iter() {
            let c = jacobi_fast(d.poly().coeffs(), pr.coeffs(), &t) as i64;
            if c == 0 {
                continue;
            }
            let mut ck = 1;
            for k in 1..=n / deg {
                ck *= c;
                s[deg * k] += deg as i64 * ck;
            }
        }
    }
    let mut a = vec![1i64];
    for m in 1..=n {
        let acc: i64 = (1..=m).map(|k| s[k] * a[m - k]).sum();
        debug_assert_eq!(acc % m as i64, 0);
        a.push(acc / m as i64);
    }
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    LPolynomial::new(p, a)
}

/// The same coefficients summed directly over monic polynomials.
pub fn l_polynomial_direct(d: &QuadraticDiscriminant, cache: Option<&CharSumCache>) -> LPolynomial {
    let mut a: Vec<i64> =
        (0..d.degree()).map(|n| cache.map_or_else(|| char_sum(d, n), |c| c.char_sum(d, n))).collect();
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
    LPolynomial::new(d.p(), a)
}

/// `char_sum(D, n) = 0` for `deg D <= n <= deg D + extra`.
pub fn vanishing_check(d: &QuadraticDiscriminant, extra: usize) -> bool {
    (d.degree()..=d.degree() + extra).all(|n| char_sum(d, n) == 0)
}

/// Divide out the roots at `t = 1` and `t = -1`. The stripped list holds
/// the root of each removed linear factor.
pub fn pure_part(l: &LPolynomial) -> (LPolynomial, Vec<i8>) {
    let mut c = l.coeffs.clone();
    let mut stripped = Vec::new();
    for root in [1i64, -1] {
        while c.len() > 1 && LPolynomial::new(l.p, c.clone()).eval_int(root) == 0 {
            // divide by (1 - root t)
            let mut q = Vec::with_capacity(c.len() - 1);
            let mut prev = 0i64;
            for &a in &c[..c.len() - 1] {
                prev = a + root * prev;
                q.push(prev);
            }
            c = q;
            stripped.push(root as i8);
        }
    }
    (LPolynomial::new(l.p, c), stripped)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FeCheck {
    pub holds: bool,
    pub epsilon: Option<i8>,
}

/// `a_{2g-i} = eps p^{g-i} a_i` for all `i`, for a pure part of degree `2g`.
pub fn functional_equation_check(l: &LPolynomial) -> Result<FeCheck> {
    let n = l.degree();
    if n % 2 == 1 {
        return precondition(format!("pure part has odd degree {n}"));
    }
    let g = n / 2;
    let p = BigInt::from(l.p);
    let a: Vec<BigInt> = l.coeffs.iter().map(|&x| BigInt::from(x)).collect();
    let pg = num_traits::pow(p.clone(), g);
    let epsilon = if a[n] == pg * &a[0] {
        1
    } else if a[n] == -num_traits::pow(p.clone(), g) * &a[0] {
        -1
    } else {
        return Ok(FeCheck { holds: false, epsilon: None });
    };
    // p^{g-i} may be fractional: compare p^{i-g} a_{2g-i} with eps a_i for i > g
    let holds = (0..=n).all(|i| {
        let lhs = &a[n - i] * num_traits::pow(p.clone(), i.saturating_sub(g));
        let rhs = &a[i] * num_traits::pow(p.clone(), g.saturating_sub(i)) * epsilon;
        lhs == rhs
    });
    Ok(FeCheck { holds, epsilon: Some(epsilon) })
}

#[derive(Clone, Debug)]
pub struct ZeroSet {
    pub p: u32,
    /// Roots in `t`.
    pub roots: Vec<Complex64>,
    /// `arg t` in `[0, 2 pi)`, ascending.
    pub angles: Vec<f64>,
}

/// Roots of a polynomial with `a_0 = 1`, by companion-matrix eigenvalues
/// polished with Newton steps.
pub fn zeros(l: &LPolynomial) -> Result<ZeroSet> {
    let n = l.degree();
    if n == 0 {
        return Ok(ZeroSet { p: l.p, roots: Vec::new(), angles: Vec::new() });
    }
    let lead = l.coeffs[n] as f64;
    let comp = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -(l.coeffs[n - 1 - j] as f64) / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    let start: Vec<Complex64> = match Schur::try_new(comp, 1e-13, 300) {
        Some(s) => s.complex_eigenvalues().iter().copied().collect(),
        None => aberth(l)?,
    };
    let deriv: Vec<f64> = (1..=n).map(|k| k as f64 * l.coeffs[k] as f64).collect();
    let eval_d = |t: Complex64| deriv.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * t + a);
    let mut roots = Vec::with_capacity(n);
    for mut z in start {
        for _ in 0..8 {
            let d = eval_d(z);
            if d.norm() == 0.0 {
                break;
            }
            let step = l.eval(z) / d;
            z -= step;
            if step.norm() < 1e-16 * z.norm().max(1e-300) {
                break;
            }
        }
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Numerical("root polishing diverged".into()));
        }
        roots.push(z);
    }
    let tau = std::f64::consts::TAU;
    let mut angles: Vec<f64> = roots.iter().map(|z| z.arg().rem_euclid(tau)).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(ZeroSet { p: l.p, roots, angles })
}

/// Simultaneous Aberth-Ehrlich iteration, used when QR stalls (roots of
/// equal modulus make the companion matrix close to unitary).
fn aberth(l: &LPolynomial) -> Result<Vec<Complex64>> {
    let n = l.degree();
    let deriv: Vec<f64> = (1..=n).map(|k| k as f64 * l.coeffs[k] as f64).collect();
    let eval_d = |t: Complex64| deriv.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * t + a);
    let r = (l.coeffs[0] as f64 / l.coeffs[n] as f64).abs().powf(1.0 / n as f64);
    let mut z: Vec<Complex64> =
        (0..n).map(|k| Complex64::from_polar(r, std::f64::consts::TAU * (k as f64 + 0.25) / n as f64)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let ratio = l.eval(z[i]) / eval_d(z[i]);
            let rep: Complex64 = (0..n).filter(|&j| j != i).map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * rep);
            z[i] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    if z.iter().all(|t| l.eval(*t).norm() < 1e-9) {
        return Ok(z);
    }
    Err(Error::Numerical("root finder did not converge".into()))
}

/// Every root has modulus `p^{-1/2}` within `tol`.
pub fn rh_check(z: &ZeroSet, tol: f64) -> bool {
    let r = (z.p as f64).powf(-0.5);
    z.roots.iter().all(|t| (t.norm() - r).abs() <= tol)
}

/// `sum alpha_i^r` with `alpha_i = e^{-i theta_i}`.
pub fn power_sums(z: &ZeroSet, r: u32) -> f64 {
    z.angles.iter().map(|th| (r as f64 * th).cos()).sum()
}

/// `L(1/2)` and `L(1)`, exactly and as floats.
#[derive(Clone, Debug)]
pub struct CentralEdge {
    /// `L(1/2) = a + b sqrt(p)`.
    pub central_exact: (BigRational, BigRational),
    pub central: f64,
    pub edge_exact: BigRational,
    pub edge: f64,
}

pub fn central_edge_values(l: &LPolynomial) -> CentralEdge {
    let p = BigInt::from(l.p);
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    let mut e = BigRational::zero();
    for (n, &c) in l.coeffs.iter().enumerate() {
        let c = BigInt::from(c);
        let half = num_traits::pow(p.clone(), n / 2);
        if n % 2 == 0 {
            a += BigRational::new(c.clone(), half);
        } else {
            // p^{-(2k+1)/2} = sqrt(p) / p^{k+1}
            b += BigRational::new(c.clone(), half * &p);
        }
        e += BigRational::new(c, num_traits::pow(p.clone(), n));
    }
    let sp = (l.p as f64).sqrt();
    let central = a.to_f64().unwrap() + b.to_f64().unwrap() * sp;
    let edge = e.to_f64().unwrap();
    CentralEdge { central_exact: (a, b), central, edge_exact: e, edge }
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub g: usize,
    pub central_abs: f64,
    /// `ln` of `exp(2g / log_p g + 4 sqrt(p g))`.
    pub log_bound: f64,
    /// `None` below `g = 2`, where the bound is not asserted.
    pub holds: Option<bool>,
    pub edge: f64,
    /// `|L(1)| (log_p g)^3` and `|L(1)| / (log_p g)^3`.
    pub window: Option<(f64, f64)>,
}

/// `2g / log_p g + 4 (p g)^{1/2}`, the log of the central-value bound, for
/// `g >= 2`.
pub fn log_central_bound(g: usize, p: u32) -> Option<f64> {
    if g < 2 {
        return None;
    }
    let (g, p) = (g as f64, p as f64);
    Some(2.0 * g / (g.ln() / p.ln()) + 4.0 * (p * g).sqrt())
}

pub fn bound_checks(d: &QuadraticDiscriminant) -> BoundReport {
    let l = l_polynomial(d);
    let ce = central_edge_values(&l);
    let g = d.g_bound();
    let p = d.p() as f64;
    let (log_bound, holds, window) = if let Some(lb) = log_central_bound(g, d.p()) {
        let lg = (g as f64).ln() / p.ln();
        let ok = ce.central == 0.0 || ce.central.abs().ln() <= lb;
        (lb, Some(ok), Some((ce.edge.abs() * lg.powi(3), ce.edge.abs() / lg.powi(3))))
    } else {
        (f64::NAN, None, None)
    };
    BoundReport { g, central_abs: ce.central.abs(), log_bound, holds, edge: ce.edge, window }
}

/// `max |L(t)|` on `|t| = p^{-1/2}`: 4096 samples, then golden-section
/// refinement around the best sample.
pub fn max_on_circle(l: &LPolynomial) -> f64 {
    const N: usize = 4096;
    let r = (l.p as f64).powf(-0.5);
    let f = |th: f64| l.eval(Complex64::from_polar(r, th)).norm();
    let step = std::f64::consts::TAU / N as f64;
    let (mut best_k, mut best) = (0, f64::MIN);
    for k in 0..N {
        let v = f(k as f64 * step);
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let (mut lo, mut hi) = ((best_k as f64 - 1.0) * step, (best_k as f64 + 1.0) * step);
    let gr = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..60 {
        let m1 = hi - gr * (hi - lo);
        let m2 = lo + gr * (hi - lo);
        if f(m1) < f(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    best.max(f((lo + hi) / 2.0))
}

/// Everything computed for one member of a family.
pub fn analyze(d: &QuadraticDiscriminant, tol: f64) -> Result<family::Analysis> {
    family::analyze(d, tol)
}

pub(crate) fn rational_to_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qd(s: &str) -> QuadraticDiscriminant {
        QuadraticDiscriminant::new(&Poly::parse(s, 5).unwrap()).unwrap()
    }

    #[test]
    fn worked_cubic() {
        let d = qd("T^3+T+1");
        assert_eq!(char_sum(&d, 0), 1);
        assert_eq!(char_sum(&d, 1), 3);
        assert_eq!(char_sum(&qd("T"), 1), 0);
        let l = l_polynomial(&d);
        assert_eq!(l.coeffs, vec![1, 3, 5]);
        assert_eq!(l, l_polynomial_direct(&d, None));
        assert!(vanishing_check(&d, 2));
        let fe = functional_equation_check(&l).unwrap();
        assert_eq!(fe, FeCheck { holds: true, epsilon: Some(1) });
        assert!(!functional_equation_check(&LPolynomial::new(5, vec![1, 3, 4])).unwrap().holds);
        let z = zeros(&l).unwrap();
        assert!(rh_check(&z, 1e-9));
        assert!((power_sums(&z, 1) + 3.0 / 5f64.sqrt()).abs() < 1e-12);
        let ce = central_edge_values(&l);
        assert!((ce.central - (2.0 + 3.0 / 5f64.sqrt())).abs() < 1e-12);
        assert_eq!(rational_to_string(&ce.edge_exact), "9/5");
        assert!(max_on_circle(&l) <= 2.0 + 3.0 / 5f64.sqrt() + 1e-12);
    }

    #[test]
    fn linear_and_even_degree() {
        assert_eq!(l_polynomial(&qd("T")).coeffs, vec![1]);
        let l = l_polynomial(&qd("T^2+2"));
        assert!(l.eval_int(1) == 0 || l.eval_int(-1) == 0);
        let (pure, stripped) = pure_part(&l);
        assert_eq!(stripped.len(), 1);
        assert_eq!(pure.degree(), 0);
        let (same, none) = pure_part(&LPolynomial::new(5, vec![1, 3, 5]));
        assert!(none.is_empty());
        assert_eq!(same.coeffs, vec![1, 3, 5]);
    }
}
