//! Seeded grid over every spectral identity, with a JSON-ready report.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::halfweight::{
    depth1_constraint_check, depth1_integral_residual, depth1_system_residual, metaplectic_recursion_residual,
    Depth1Constraint, Xi,
};
use super::hecke::{
    apply_metaplectic_hecke, integral_hecke_multiplicativity_check, unary_theta_eigen_check, CoeffFamily, HeckeTable,
    UnaryThetaReport,
};
use super::{
    mellin_truncation, whittaker0, whittaker0_recursion_residual, whittaker0_table, whittaker_mellin_check,
    SpectralParam, RECURSION_TOL,
};
use crate::error::Result;
use crate::field::{enumerate_monic, monic_irreducibles, Poly, PrimeModulus, RationalFunction};
use crate::symbols::metaplectic::{cocycle_eps, eta_split, kappa_split, Mat2};

pub const MELLIN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, serde::Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub grid: String,
    pub cases: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityResult {
    fn new(name: &str, grid: String, tolerance: f64) -> Self {
        IdentityResult { name: name.into(), grid, cases: 0, failures: 0, max_residual: 0.0, tolerance, pass: true }
    }

    fn record(&mut self, residual: f64) {
        self.cases += 1;
        self.max_residual = self.max_residual.max(residual);
        if !(residual <= self.tolerance) {
            self.failures += 1;
            self.pass = false;
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { f64::INFINITY });
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct IdentitySuiteReport {
    pub seed: u64,
    pub primes: Vec<u32>,
    pub identities: Vec<IdentityResult>,
    /// Measured, not asserted.
    pub unary_theta: Vec<UnaryThetaReport>,
    pub depth1: Vec<Depth1Constraint>,
    pub pass: bool,
}

impl IdentitySuiteReport {
    pub fn failures(&self) -> usize {
        self.identities.iter().map(|i| i.failures).sum()
    }
}

fn rand_poly(rng: &mut ChaCha8Rng, p: u32, max_deg: usize) -> Poly {
    let c: Vec<u32> = (0..=max_deg).map(|_| rng.random_range(0..p)).collect();
    Poly::new(c, p)
}

fn elementary(rng: &mut ChaCha8Rng, x: RationalFunction) -> Mat2 {
    if rng.random_bool(0.5) {
        Mat2::upper(x)
    } else {
        Mat2::lower(x)
    }
}

fn random_sl2_r(rng: &mut ChaCha8Rng, p: u32) -> Mat2 {
    let mut g = Mat2::identity(p);
    for _ in 0..rng.random_range(1..4) {
        let x = rand_poly(rng, p, 2).into();
        g = &g * &elementary(rng, x);
    }
    if rng.random_bool(0.3) {
        g = &g * &Mat2::weyl(p);
    }
    g
}

fn random_o_inf(rng: &mut ChaCha8Rng, p: u32) -> RationalFunction {
    let k = rng.random_range(0..3usize);
    let num = rand_poly(rng, p, k);
    RationalFunction::new(num, Poly::monomial(k, 1, p)).unwrap()
}

fn random_sl2_o_inf(rng: &mut ChaCha8Rng, p: u32) -> Mat2 {
    let mut g = Mat2::identity(p);
    for _ in 0..rng.random_range(1..4) {
        let x = random_o_inf(rng, p);
        g = &g * &elementary(rng, x);
    }
    if rng.random_bool(0.3) {
        let u = rng.random_range(1..p);
        g = &g * &Mat2::diag(RationalFunction::constant(u, p)).unwrap();
    }
    if rng.random_bool(0.3) {
        g = &g * &Mat2::weyl(p);
    }
    g
}

fn random_sl2_k(rng: &mut ChaCha8Rng, p: u32) -> Mat2 {
    let mut g = if rng.random_bool(0.5) { random_sl2_r(rng, p) } else { random_sl2_o_inf(rng, p) };
    if rng.random_bool(0.5) {
        let j = rng.random_range(1..3usize);
        let u = rng.random_range(1..p);
        g = &g * &Mat2::diag(Poly::monomial(j, u, p).into()).unwrap();
    }
    &g * &random_sl2_o_inf(rng, p)
}

fn random_family(rng: &mut ChaCha8Rng, p: u32) -> CoeffFamily {
    let mut f = CoeffFamily::new(p);
    for _ in 0..30 {
        let deg = rng.random_range(0..4usize);
        let a = &rand_poly(rng, p, deg.saturating_sub(1)) + &Poly::monomial(deg, 1, p);
        let m = 2 * rng.random_range(0..6i64);
        f.insert(a, m, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).unwrap();
    }
    f
}

/// Runs every identity over a seeded grid for each prime.
pub fn identity_suite(primes: &[u32], seed: u64) -> Result<IdentitySuiteReport> {
    for &p in primes {
        PrimeModulus::new(p)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plist = format!("{primes:?}");
    let mut out = Vec::new();

    let mut rec = IdentityResult::new(
        "whittaker0-recursion",
        format!("p in {plist}; 1000 theta per p with Re in [-pi, pi], Im in [-0.5, 0.5]; 2 <= n <= 50"),
        RECURSION_TOL,
    );
    let mut sym = IdentityResult::new("whittaker0-symmetry", format!("p in {plist}; same theta; 0 <= n <= 50"), 1e-12);
    for &p in primes {
        for k in 0..1000 {
            let theta = if k == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI), rng.random_range(-0.5..0.5))
            };
            let t = SpectralParam::new(p, theta);
            let c = whittaker0_table(&t, 50);
            rec.record(whittaker0_recursion_residual(&t, &c));
            let neg = SpectralParam::new(p, -theta);
            let worst = (0..=50).map(|n| (whittaker0(n, &t) - whittaker0(n, &neg)).norm()).fold(0.0, f64::max);
            sym.record(worst);
        }
    }
    out.push(rec);
    out.push(sym);

    let svals = [Complex64::new(2.0, 0.0), Complex64::new(2.5, 0.0), Complex64::new(3.0, 0.0), Complex64::new(2.0, 1.0), Complex64::new(4.0, -2.0)];
    let mut mel = IdentityResult::new(
        "mellin",
        format!("p in {plist}; 20 theta per p (12 real, 8 complex); s in {{2, 2.5, 3, 2+i, 4-2i}}; tail < 1e-12"),
        MELLIN_TOL,
    );
    for &p in primes {
        for k in 0..20 {
            let im = if k < 12 { 0.0 } else { rng.random_range(-0.5..0.5) };
            let t = SpectralParam::new(p, Complex64::new(rng.random_range(0.0..std::f64::consts::PI), im));
            for s in svals {
                let n = mellin_truncation(&t, s);
                mel.record(whittaker_mellin_check(&t, s, n)?.residual);
            }
        }
    }
    out.push(mel);

    let mut met = IdentityResult::new(
        "metaplectic-recursion",
        format!("p in {plist}; 25 gamma per p (20 real, 5 complex); xi in {{1, eps, 1/T, eps/T}}; u in {{1, eps}}; 1 <= n <= 30"),
        RECURSION_TOL,
    );
    for &p in primes {
        let eps = PrimeModulus::new(p)?.nonresidue();
        for k in 0..25 {
            let im = if k < 20 { 0.0 } else { rng.random_range(-0.3..0.3) };
            let g = SpectralParam::new(p, Complex64::new(rng.random_range(0.0..std::f64::consts::PI), im));
            for xi in Xi::ALL {
                for u in [1, eps] {
                    met.record(metaplectic_recursion_residual(&g, xi, u, 30)?);
                }
            }
        }
    }
    out.push(met);

    let mut d1 = IdentityResult::new("depth1-integral", format!("p in {plist}; w in {{1, -1}}; 0 <= n <= 40"), 1e-12);
    let mut d1m = IdentityResult::new(
        "depth1-metaplectic",
        format!("p in {plist}; w~ in {{sqrt p, -sqrt p}}; odd classes of a, both w~; unit classes, w~ = (xi, pi) sqrt p; n <= 20"),
        RECURSION_TOL,
    );
    let mut d1c = IdentityResult::new("depth1-constraint", format!("p in {plist}; roots of the eliminated quadratic are +-sqrt p"), 0.0);
    let mut depth1 = Vec::new();
    for &p in primes {
        for w in [1.0, -1.0] {
            d1.record(depth1_integral_residual(p, w, 40));
        }
        let sp = (p as f64).sqrt();
        let eps = PrimeModulus::new(p)?.nonresidue();
        for (xi, ws) in [(Xi::One, vec![sp]), (Xi::Eps, vec![-sp]), (Xi::Pi, vec![sp, -sp]), (Xi::EpsPi, vec![sp, -sp])] {
            for w in ws {
                for u in [1, eps] {
                    d1m.record(depth1_system_residual(p, w, xi, u, 20)?);
                }
            }
        }
        let c = depth1_constraint_check(p)?;
        d1c.record_bool(c.holds);
        depth1.push(c);
    }
    out.push(d1);
    out.push(d1m);
    out.push(d1c);

    let mut coc = IdentityResult::new(
        "cocycle",
        format!("p in {plist}; 200 random triples in SL_2(k) per p"),
        0.0,
    );
    let mut eta = IdentityResult::new("eta-splitting", format!("p in {plist}; 200 random pairs in SL_2(R) per p"), 0.0);
    let mut kap = IdentityResult::new("kappa-splitting", format!("p in {plist}; 200 random pairs in SL_2(O_inf) per p"), 0.0);
    for &p in primes {
        for _ in 0..200 {
            let (g1, g2, g3) = (random_sl2_k(&mut rng, p), random_sl2_k(&mut rng, p), random_sl2_k(&mut rng, p));
            let lhs = cocycle_eps(&g1, &g2)? * cocycle_eps(&(&g1 * &g2), &g3)?;
            let rhs = cocycle_eps(&g2, &g3)? * cocycle_eps(&g1, &(&g2 * &g3))?;
            coc.record_bool(lhs == rhs);

            let (h1, h2) = (random_sl2_r(&mut rng, p), random_sl2_r(&mut rng, p));
            let l = eta_split(&h1)? * eta_split(&h2)? * cocycle_eps(&h1, &h2)?;
            eta.record_bool(l == eta_split(&(&h1 * &h2))?);

            let (k1, k2) = (random_sl2_o_inf(&mut rng, p), random_sl2_o_inf(&mut rng, p));
            let l = kappa_split(&k1)? * kappa_split(&k2)? * cocycle_eps(&k1, &k2)?;
            kap.record_bool(l == kappa_split(&(&k1 * &k2))?);
        }
    }
    out.push(coc);
    out.push(eta);
    out.push(kap);

    let mut lin = IdentityResult::new(
        "metaplectic-hecke-linearity",
        format!("p in {plist}; 10 random pairs of 30-entry tables and complex scalars per p; P of degree 1 and 2"),
        1e-10,
    );
    for &p in primes {
        let ps: Vec<Poly> = [1, 2].iter().map(|&d| monic_irreducibles(d, p)[0].clone()).collect();
        for _ in 0..10 {
            let (f, g) = (random_family(&mut rng, p), random_family(&mut rng, p));
            let a = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let b = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            for big_p in &ps {
                let lhs = apply_metaplectic_hecke(&f.scale(a).add(&g.scale(b)), big_p)?;
                let rhs = apply_metaplectic_hecke(&f, big_p)?.scale(a).add(&apply_metaplectic_hecke(&g, big_p)?.scale(b));
                lin.record(lhs.distance(&rhs));
            }
        }
    }
    out.push(lin);

    let mut mult = IdentityResult::new(
        "integral-hecke-multiplicativity",
        format!("p in {plist}; synthetic eigen-tables up to degree 4 (p = 5) or 3; all P, a with gcd(aN, P) = 1"),
        0.0,
    );
    let mut rel = IdentityResult::new("integral-hecke-relation", format!("p in {plist}; same tables; all P !| N and a"), 1e-12);
    for &p in primes {
        let max_deg = if p <= 5 { 4 } else { 3 };
        let level = monic_irreducibles(2, p)[0].clone();
        let table = HeckeTable::synthetic(p, &level, max_deg, rng.random())?;
        for dp in 1..=2 {
            for big_p in monic_irreducibles(dp, p) {
                if big_p.divides(&level) {
                    continue;
                }
                for da in 0..=max_deg - dp {
                    for a in enumerate_monic(da, p) {
                        rel.record(table.relation_residual(&big_p, &a)?);
                        if (&a * &level).gcd(&big_p).is_one() {
                            mult.record_bool(integral_hecke_multiplicativity_check(&table, &big_p, &a)?);
                        }
                    }
                }
            }
        }
    }
    out.push(mult);
    out.push(rel);

    let mut neg = IdentityResult::new(
        "negative-controls",
        "perturbed c(5) by 1e-6; depth-1 w~ = 2; perturbed Hecke table entry".into(),
        0.0,
    );
    for &p in primes {
        let t = SpectralParam::real(p, std::f64::consts::FRAC_PI_3);
        let mut c = whittaker0_table(&t, 40);
        c[5] += 1e-6;
        neg.record_bool(whittaker0_recursion_residual(&t, &c) > RECURSION_TOL);
        neg.record_bool(depth1_system_residual(p, 2.0, Xi::Pi, 1, 12)? > RECURSION_TOL);
        let level = monic_irreducibles(2, p)[0].clone();
        let mut table = HeckeTable::synthetic(p, &level, 3, 1)?;
        let big_p = Poly::parse("T", p)?;
        let a = Poly::parse("T+1", p)?;
        *table.values.get_mut(&(&a * &big_p)).unwrap() += 0.5;
        neg.record_bool(!integral_hecke_multiplicativity_check(&table, &big_p, &a)?);
    }
    out.push(neg);

    let mut unary_theta = Vec::new();
    for &p in primes {
        for big_p in [Poly::parse("T+1", p)?, monic_irreducibles(2, p)[0].clone()] {
            unary_theta.push(unary_theta_eigen_check(p, &big_p)?);
        }
    }

    let pass = out.iter().all(|r| r.pass);
    Ok(IdentitySuiteReport { seed, primes: primes.to_vec(), identities: out, unary_theta, depth1, pass })
}
