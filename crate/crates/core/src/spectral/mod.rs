//! Whittaker functions at infinity and the identities they satisfy.
//!
//! Everything here is algebraic in `e^{i theta}`, so `theta` is allowed to be
//! any complex number.

use num_complex::Complex64;

use crate::error::{precondition, Result};

pub mod halfweight;
pub mod hecke;
pub mod suite;

pub use halfweight::{
    depth1_constraint_check, metaplectic_recursion_check, metaplectic_whittaker0, whittaker1, Depth1Constraint, Xi,
};
pub use hecke::{
    apply_metaplectic_hecke, integral_hecke_multiplicativity_check, unary_theta_eigen_check, CoeffFamily, HeckeTable,
    UnaryThetaReport,
};
pub use suite::{identity_suite, IdentityResult, IdentitySuiteReport};

/// Recursions are checked to this relative tolerance.
pub const RECURSION_TOL: f64 = 1e-10;

/// Below this `|e^{i theta} - e^{-i theta}|` the limit formula is used.
const DEGENERATE: f64 = 1e-7;

/// A spectral parameter `theta` together with the prime `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralParam {
    pub p: u32,
    pub theta: Complex64,
}

impl SpectralParam {
    pub fn new(p: u32, theta: Complex64) -> Self {
        SpectralParam { p, theta }
    }

    pub fn real(p: u32, theta: f64) -> Self {
        SpectralParam { p, theta: Complex64::new(theta, 0.0) }
    }

    pub fn exp_i(&self) -> Complex64 {
        (Complex64::i() * self.theta).exp()
    }

    /// `lambda = p^{-1/2} (e^{i theta} + e^{-i theta})`.
    pub fn lambda(&self) -> Complex64 {
        let z = self.exp_i();
        (z + z.inv()) / (self.p as f64).sqrt()
    }

    /// `gamma` with `p^{i gamma} = e^{i theta}`.
    pub fn gamma(&self) -> Complex64 {
        self.theta / (self.p as f64).ln()
    }

    pub fn is_degenerate(&self) -> bool {
        let z = self.exp_i();
        (z - z.inv()).norm() < DEGENERATE
    }
}

/// The depth-0 Whittaker function `W_{0, i theta}` at `y` with
/// `v_inf(y) = n`:
///
/// `c(n) = p^{1/2} / (e^{i theta} - e^{-i theta}) * [(e^{i theta}/p^{1/2})^{n-1} - (e^{-i theta}/p^{1/2})^{n-1}]`
/// for `n >= 2`, and 0 below. At `e^{i theta} = e^{-i theta} = z` (so
/// `z = +-1`) the limit `(n - 1) z^{n-2} p^{-(n-2)/2}` is used.
pub fn whittaker0(n: i64, param: &SpectralParam) -> Complex64 {
    if n < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let sp = (param.p as f64).sqrt();
    let z = param.exp_i();
    let zi = z.inv();
    if param.is_degenerate() {
        // the bracket over the difference is the complete homogeneous sum
        // sum_k x^k y^{n-2-k}, which stays accurate near the branch point
        let (x, y) = (z / sp, zi / sp);
        return (0..=n - 2).map(|k| x.powi(k as i32) * y.powi((n - 2 - k) as i32)).sum();
    }
    let m = (n - 1) as i32;
    sp / (z - zi) * ((z / sp).powi(m) - (zi / sp).powi(m))
}

/// `c(0..=n_max + 1)`.
pub fn whittaker0_table(param: &SpectralParam, n_max: usize) -> Vec<Complex64> {
    (0..=n_max as i64 + 1).map(|n| whittaker0(n, param)).collect()
}

/// Largest relative residual of `lambda c(n) = p^{-1} c(n-1) + c(n+1)` over
/// `2 <= n <= N` for a table `c(0..=N+1)`.
pub fn whittaker0_recursion_residual(param: &SpectralParam, c: &[Complex64]) -> f64 {
    let lam = param.lambda();
    let pinv = 1.0 / param.p as f64;
    let mut worst: f64 = 0.0;
    for n in 2..c.len() - 1 {
        let lhs = lam * c[n];
        let rhs = c[n - 1] * pinv + c[n + 1];
        let scale = 1.0f64.max(lhs.norm()).max(c[n + 1].norm());
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    worst
}

/// Evaluates the closed form for `0 <= n <= N + 1` and verifies the depth-0
/// recursion for `2 <= n <= N` at the recursion tolerance.
pub fn whittaker0_recursion_check(param: &SpectralParam, n_max: usize) -> Result<bool> {
    if n_max < 3 {
        return precondition("need N >= 3");
    }
    let c = whittaker0_table(param, n_max);
    let values_ok = c[0].norm() == 0.0 && c[1].norm() == 0.0 && (c[2] - 1.0).norm() < RECURSION_TOL;
    Ok(values_ok && whittaker0_recursion_residual(param, &c) <= RECURSION_TOL)
}

/// `Gamma_k(s) = 1 / (1 - p^{-s})`.
pub fn gamma_k(p: u32, s: Complex64) -> Complex64 {
    let ps = (-s * (p as f64).ln()).exp();
    (Complex64::new(1.0, 0.0) - ps).inv()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MellinCheck {
    /// `sum_{2 <= n <= N} c(n) p^{-ns}`.
    pub lhs: Complex64,
    /// `p^{-2s} Gamma_k(s + 1/2 + i gamma) Gamma_k(s + 1/2 - i gamma)`.
    pub rhs: Complex64,
    pub residual: f64,
    /// Bound on the dropped terms `n > N`.
    pub tail_bound: f64,
}

impl MellinCheck {
    pub fn holds(&self, tol: f64) -> bool {
        self.residual < tol
    }
}

/// Compares the truncated Mellin transform of the depth-0 Whittaker function
/// with its Gamma-factor product.
pub fn whittaker_mellin_check(param: &SpectralParam, s: Complex64, n_max: usize) -> Result<MellinCheck> {
    let p = param.p as f64;
    let sp = p.sqrt();
    let z = param.exp_i();
    let ps = (-s * p.ln()).exp();
    // the series is a combination of geometric series in e^{+-i theta} p^{-1/2-s}
    let r = (z / sp * ps).norm().max((z.inv() / sp * ps).norm());
    if r >= 1.0 {
        return precondition(format!("Mellin series diverges at s = {s}"));
    }
    let n = n_max as f64;
    // |c(n)| <= (n - 1) max(|x|, |y|)^{n-2}, so the tail is below this
    let tail_bound = ps.norm().powi(2) * r.powf(n - 1.0) * (n / (1.0 - r) + 1.0 / (1.0 - r).powi(2));
    if tail_bound > 1e-12 {
        return precondition(format!("truncation N = {n_max} leaves a tail up to {tail_bound:e}"));
    }
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut pw = ps * ps;
    for k in 2..=n_max as i64 {
        lhs += whittaker0(k, param) * pw;
        pw *= ps;
    }
    let half = Complex64::new(0.5, 0.0);
    let ig = Complex64::i() * param.gamma();
    let rhs = ps * ps * gamma_k(param.p, s + half + ig) * gamma_k(param.p, s + half - ig);
    Ok(MellinCheck { lhs, rhs, residual: (lhs - rhs).norm(), tail_bound })
}

/// Smallest truncation with a tail below `1e-12`, capped at 4000.
pub fn mellin_truncation(param: &SpectralParam, s: Complex64) -> usize {
    let mut n = 16;
    while n < 4000 {
        match whittaker_mellin_check(param, s, n) {
            Err(crate::Error::Precondition(m)) if m.contains("tail") => n *= 2,
            _ => return n,
        }
    }
    n
}
