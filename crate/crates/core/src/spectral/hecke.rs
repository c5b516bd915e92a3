//! Hecke relations on Fourier coefficient tables.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::halfweight::monomial;
use crate::error::{precondition, Result};
use crate::field::{enumerate_monic, Poly, RationalFunction};
use crate::symbols::{gauss_sum_rational, hilbert_infty, legendre_unchecked};

/// Coefficients `F_a(v)` for `v = T^-m`, keyed by `(a, m)`; absent keys are
/// zero. `m` must be even so that `sqrt(v) = T^{-m/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffFamily {
    pub p: u32,
    pub entries: BTreeMap<(Poly, i64), Complex64>,
}

impl CoeffFamily {
    pub fn new(p: u32) -> Self {
        CoeffFamily { p, entries: BTreeMap::new() }
    }

    pub fn get(&self, a: &Poly, m: i64) -> Complex64 {
        self.entries.get(&(a.clone(), m)).copied().unwrap_or_default()
    }

    pub fn insert(&mut self, a: Poly, m: i64, value: Complex64) -> Result<()> {
        if m % 2 != 0 {
            return precondition("v must be a square: m even");
        }
        if value != Complex64::default() {
            self.entries.insert((a, m), value);
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.values().all(|v| v.norm() == 0.0)
    }

    pub fn scale(&self, c: Complex64) -> CoeffFamily {
        let mut out = CoeffFamily::new(self.p);
        for ((a, m), v) in &self.entries {
            out.insert(a.clone(), *m, v * c).unwrap();
        }
        out
    }

    pub fn add(&self, o: &CoeffFamily) -> CoeffFamily {
        let mut out = self.clone();
        for (k, v) in &o.entries {
            let e = out.entries.entry(k.clone()).or_default();
            *e += v;
        }
        out.entries.retain(|_, v| *v != Complex64::default());
        out
    }

    /// Largest `|self - o|` over the union of supports.
    pub fn distance(&self, o: &CoeffFamily) -> f64 {
        let keys: BTreeSet<_> = self.entries.keys().chain(o.entries.keys()).collect();
        keys.into_iter().map(|(a, m)| (self.get(a, *m) - o.get(a, *m)).norm()).fold(0.0, f64::max)
    }
}

fn norm(big_p: &Poly) -> f64 {
    (big_p.p() as f64).powi(big_p.degree() as i32)
}

/// `(P, sqrt v)_inf` with `sqrt v = T^{-m/2}`.
fn hecke_sign(big_p: &Poly, m: i64) -> Result<f64> {
    let root = monomial(1, -m / 2, big_p.p());
    Ok(hilbert_infty(&RationalFunction::from_poly(big_p.clone()), &root)? as f64)
}

/// The metaplectic Hecke operator at `P^2` on a coefficient table:
///
/// `(T F)_a(v) = (P, sqrt v) |P|^2 F_{aP^2}(P^-2 v) + G_1(P) [P !| a] (a/P) F_a(v) + (P, sqrt v) F_{a/P^2}(P^2 v)`
///
/// with the last term present only when `P^2 | a`. `G_1(P)` is summed
/// directly. Keys are computed wherever one of the three terms can be
/// nonzero.
pub fn apply_metaplectic_hecke(f: &CoeffFamily, big_p: &Poly) -> Result<CoeffFamily> {
    if !big_p.is_monic() || !big_p.is_irreducible() {
        return precondition("P must be monic irreducible");
    }
    let p = f.p;
    let d = big_p.degree();
    let np = norm(big_p);
    let g1 = gauss_sum_rational(&Poly::one(p), big_p)?.value;
    let p2 = big_p * big_p;
    let mut keys = BTreeSet::new();
    for (a, m) in f.entries.keys() {
        keys.insert((a.clone(), *m));
        keys.insert((&p2 * a, m + 2 * d));
        if let Some(q) = a.div_exact(&p2) {
            keys.insert((q, m - 2 * d));
        }
    }
    let mut out = CoeffFamily::new(p);
    for (a, m) in keys {
        let s = hecke_sign(big_p, m)?;
        // |P^-2| = |P|^-2 multiplies |v|, i.e. v_inf rises by 2 deg P
        let up = f.get(&(&p2 * &a), m + 2 * d) * (s * np * np);
        let mid = match legendre_unchecked(&a, big_p) {
            0 => Complex64::default(),
            chi => g1 * f.get(&a, m) * chi as f64,
        };
        let down = match a.div_exact(&p2) {
            Some(q) => f.get(&q, m - 2 * d) * s,
            None => Complex64::default(),
        };
        out.insert(a, m, up + mid + down)?;
    }
    Ok(out)
}

/// The unary theta coefficients
/// `F_a(v) = |v|^{1/4} (sqrt v, pi)^{v(v)/2} #{l : l^2 = a} chi_O(a v)`
/// for monic `a = l^2`, `deg l <= max_l`, and even `0 <= m <= max_m`. Monic
/// keys form a block the operator preserves.
pub fn unary_theta_family(p: u32, max_l: usize, max_m: i64) -> Result<CoeffFamily> {
    let mut f = CoeffFamily::new(p);
    let pi = monomial(1, -1, p);
    let mut squares = BTreeSet::new();
    for deg in 0..=max_l {
        for l in enumerate_monic(deg, p) {
            squares.insert(&l * &l);
        }
    }
    for a in squares {
        for m in (0..=max_m).step_by(2) {
            if m < a.degree() {
                continue;
            }
            let root = monomial(1, -m / 2, p);
            let sign = (hilbert_infty(&root, &pi)? as f64).powi((m / 2) as i32);
            let val = 2.0 * (p as f64).powf(-(m as f64) / 4.0) * sign;
            f.insert(a.clone(), m, Complex64::new(val, 0.0))?;
        }
    }
    Ok(f)
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct UnaryThetaReport {
    pub p: u32,
    pub big_p: String,
    /// `G_1(P)`, real and imaginary parts.
    pub gauss: (f64, f64),
    /// Ratio `(T F)_a / F_a` at the first interior key with `P !| a`.
    pub eigenvalue: Option<(f64, f64)>,
    pub is_eigenvector: bool,
    /// Largest `|(T F)_a - eigenvalue F_a|` over interior keys.
    pub max_residual: f64,
    pub checked_keys: usize,
}

/// Applies the operator to a truncated unary theta table and measures how
/// far it is from an eigenvector on the keys whose images stay inside the
/// table.
pub fn unary_theta_eigen_check(p: u32, big_p: &Poly) -> Result<UnaryThetaReport> {
    let d = big_p.degree();
    let max_l = d as usize + 2;
    let max_m = 2 * max_l as i64 + 2 * d + 2;
    let f = unary_theta_family(p, max_l, max_m)?;
    let tf = apply_metaplectic_hecke(&f, big_p)?;
    let interior: Vec<&(Poly, i64)> =
        f.entries.keys().filter(|(a, m)| a.degree() + 2 * d <= 2 * max_l as i64 && m + 2 * d <= max_m).collect();
    let eigen = interior
        .iter()
        .find(|(a, _)| !big_p.divides(a))
        .map(|(a, m)| tf.get(a, *m) / f.get(a, *m));
    let mut max_residual: f64 = 0.0;
    if let Some(lam) = eigen {
        for (a, m) in &interior {
            max_residual = max_residual.max((tf.get(a, *m) - lam * f.get(a, *m)).norm());
        }
        // keys outside the support must stay zero
        for ((a, m), v) in &tf.entries {
            if a.degree() + 2 * d <= 2 * max_l as i64 && m + 2 * d <= max_m && f.get(a, *m).norm() == 0.0 {
                max_residual = max_residual.max(v.norm());
            }
        }
    }
    let g = gauss_sum_rational(&Poly::one(p), big_p)?.value;
    Ok(UnaryThetaReport {
        p,
        big_p: big_p.to_text(),
        gauss: (g.re, g.im),
        eigenvalue: eigen.map(|z| (z.re, z.im)),
        is_eigenvector: eigen.is_some() && max_residual < 1e-9,
        max_residual,
        checked_keys: interior.len(),
    })
}

/// Fourier-Whittaker coefficients `lambda(a)` of a synthetic depth-0 Hecke
/// eigenform, for monic `a` up to a degree.
///
/// Hecke eigenvalues `lambda_P` are drawn from a seed; `lambda(P^{e+1}) =
/// lambda_P lambda(P^e) - |P|^-1 lambda(P^{e-1})` for `P !| N`, powers of
/// `lambda_P` for `P | N`, and `lambda` is multiplicative.
#[derive(Clone, Debug)]
pub struct HeckeTable {
    pub p: u32,
    pub level: Poly,
    pub max_deg: usize,
    pub eigenvalues: BTreeMap<Poly, f64>,
    pub values: BTreeMap<Poly, f64>,
}

impl HeckeTable {
    pub fn synthetic(p: u32, level: &Poly, max_deg: usize, seed: u64) -> Result<Self> {
        if !level.is_monic() {
            return precondition("level must be monic");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut eigenvalues = BTreeMap::new();
        for deg in 1..=max_deg {
            for q in crate::field::monic_irreducibles(deg, p) {
                let t: f64 = rng.random_range(0.0..std::f64::consts::PI);
                eigenvalues.insert(q.clone(), 2.0 * t.cos() / norm(&q).sqrt());
            }
        }
        let mut values = BTreeMap::new();
        for deg in 0..=max_deg {
            for a in enumerate_monic(deg, p) {
                let (_, fac) = a.factor()?;
                let mut v = 1.0;
                for (q, e) in fac {
                    let lq = eigenvalues[&q];
                    let pe = if q.divides(level) {
                        lq.powi(e as i32)
                    } else {
                        let (mut prev, mut cur) = (0.0, 1.0);
                        for _ in 0..e {
                            (prev, cur) = (cur, lq * cur - prev / norm(&q));
                        }
                        cur
                    };
                    v *= pe;
                }
                values.insert(a, v);
            }
        }
        Ok(HeckeTable { p, level: level.clone(), max_deg, eigenvalues, values })
    }

    pub fn lambda(&self, a: &Poly) -> Option<f64> {
        self.values.get(&a.monic()).copied()
    }

    /// `lambda_P lambda(a) = lambda(aP) + |P|^-1 lambda(a/P)` for `P !| N`,
    /// relative residual.
    pub fn relation_residual(&self, big_p: &Poly, a: &Poly) -> Result<f64> {
        let (lp, la, lap) = self.triple(big_p, a)?;
        let below = a.div_exact(big_p).map_or(0.0, |q| self.lambda(&q).unwrap_or(0.0));
        let rhs = lap + below / norm(big_p);
        Ok((lp * la - rhs).abs() / 1f64.max(rhs.abs()))
    }

    fn triple(&self, big_p: &Poly, a: &Poly) -> Result<(f64, f64, f64)> {
        let lp = *self.eigenvalues.get(big_p).ok_or_else(|| crate::Error::Precondition(format!("no eigenvalue for {big_p}")))?;
        let la = self.lambda(a).ok_or_else(|| crate::Error::Precondition(format!("{a} outside the table")))?;
        let lap = self.lambda(&(a * big_p)).ok_or_else(|| crate::Error::Precondition(format!("{a} * {big_p} outside the table")))?;
        Ok((lp, la, lap))
    }
}

/// `lambda(aP) = lambda_P lambda(a)` for `gcd(aN, P) = 1`.
pub fn integral_hecke_multiplicativity_check(table: &HeckeTable, big_p: &Poly, a: &Poly) -> Result<bool> {
    if !(a * &table.level).gcd(big_p).is_one() {
        return precondition("need gcd(aN, P) = 1");
    }
    let (lp, la, lap) = table.triple(big_p, a)?;
    Ok((lap - lp * la).abs() <= 1e-12 * 1f64.max(lap.abs()))
}
