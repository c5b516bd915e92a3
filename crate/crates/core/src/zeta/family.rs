//! Zero statistics over families of square-free `D`.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    central_edge_values, functional_equation_check, l_polynomial, log_central_bound, max_on_circle, pure_part, rational_to_string,
    rh_check, zeros, CentralEdge, FeCheck, LPolynomial, QuadraticDiscriminant, ZeroSet,
};
use crate::error::{Error, Result};
use crate::field::{enumerate_monic, Poly};

#[derive(Clone, Debug)]
pub struct Analysis {
    pub d: QuadraticDiscriminant,
    pub l: LPolynomial,
    pub pure: LPolynomial,
    pub stripped: Vec<i8>,
    pub fe: FeCheck,
    pub zeros: ZeroSet,
    pub rh: bool,
    pub values: CentralEdge,
    pub max_m: f64,
}

pub(super) fn analyze(d: &QuadraticDiscriminant, tol: f64) -> Result<Analysis> {
    let l = l_polynomial(d);
    let (pure, stripped) = pure_part(&l);
    let fe = functional_equation_check(&pure)?;
    let z = zeros(&pure)?;
    let rh = rh_check(&z, tol);
    let values = central_edge_values(&l);
    let max_m = max_on_circle(&l);
    Ok(Analysis { d: d.clone(), l, pure, stripped, fe, zeros: z, rh, values, max_m })
}

/// Star discrepancy of points in `[0, 1)` against the uniform law.
pub fn star_discrepancy(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| ((i as f64 + 1.0) / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max)
}

fn angle_points(angles: &[f64]) -> Vec<f64> {
    angles.iter().map(|a| a / std::f64::consts::TAU).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilySample {
    /// Every square-free monic polynomial of the degree.
    Full,
    /// Distinct square-free monic polynomials drawn uniformly with a seed.
    Seeded { n: usize, seed: u64 },
}

/// The members of a family, in a deterministic order.
pub fn family_members(p: u32, degree: usize, sample: FamilySample) -> Vec<Poly> {
    match sample {
        FamilySample::Full => enumerate_monic(degree, p).filter(|d| d.is_squarefree()).collect(),
        FamilySample::Seeded { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut seen = BTreeSet::new();
            let mut out = Vec::with_capacity(n);
            let total = (p as u64).saturating_pow(degree as u32);
            let mut tries = 0u64;
            while out.len() < n && tries < 50 * n as u64 + 1000 {
                tries += 1;
                let k = rng.random_range(0..total);
                let d = &Poly::from_index(k, p) + &Poly::monomial(degree, 1, p);
                if d.is_squarefree() && seen.insert(k) {
                    out.push(d);
                }
            }
            out
        }
    }
}

/// One CSV row per family member.
#[derive(Clone, Debug)]
pub struct FamilyRow {
    pub d: Poly,
    pub degree: usize,
    pub coeffs: Vec<i64>,
    pub epsilon: Option<i8>,
    pub stripped: Vec<i8>,
    pub angles: Vec<f64>,
    pub central: f64,
    pub central_exact: String,
    pub edge: f64,
    pub edge_exact: String,
    pub max_m: f64,
    pub rh: bool,
    pub fe: bool,
    /// `|L(1/2)|` against the explicit bound, when `g >= 2`.
    pub bound_ok: Option<bool>,
    /// Star discrepancy of this member's own zero angles.
    pub discrepancy: f64,
}

impl FamilyRow {
    pub fn from_analysis(a: &Analysis) -> Self {
        let (ca, cb) = &a.values.central_exact;
        FamilyRow {
            d: a.d.poly().clone(),
            degree: a.d.degree(),
            coeffs: a.l.coeffs.clone(),
            epsilon: a.fe.epsilon,
            stripped: a.stripped.clone(),
            angles: a.zeros.angles.clone(),
            central: a.values.central,
            central_exact: format!("{} + {}*sqrt({})", rational_to_string(ca), rational_to_string(cb), a.d.p()),
            edge: a.values.edge,
            edge_exact: rational_to_string(&a.values.edge_exact),
            max_m: a.max_m,
            rh: a.rh,
            fe: a.fe.holds,
            bound_ok: log_central_bound(a.d.g_bound(), a.d.p())
                .map(|lb| a.values.central == 0.0 || a.values.central.abs().ln() <= lb),
            discrepancy: star_discrepancy(&angle_points(&a.zeros.angles)),
        }
    }

    pub fn csv_header() -> &'static str {
        "D,deg,coefficients,epsilon,stripped,angles,L_half,L_half_exact,L_one,L_one_exact,M,rh,fe,bound_ok,discrepancy"
    }

    /// Floats are written in shortest round-trip form, so `from_csv`
    /// recovers the row exactly.
    pub fn to_csv(&self) -> String {
        fn join<T: std::fmt::Display>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.d.to_text(),
            self.degree,
            join(&self.coeffs),
            self.epsilon.map_or("NA".to_string(), |e| e.to_string()),
            join(&self.stripped),
            join(&self.angles),
            self.central,
            self.central_exact,
            self.edge,
            self.edge_exact,
            self.max_m,
            self.rh,
            self.fe,
            self.bound_ok.map_or("NA".to_string(), |b| b.to_string()),
            self.discrepancy
        )
    }

    pub fn from_csv(line: &str, p: u32) -> Result<Self> {
        let bad = |why: &str| Error::Parse(line.to_string(), why.to_string());
        let f: Vec<&str> = line.trim_end().split(',').collect();
        if f.len() != 15 {
            return Err(bad("expected 15 fields"));
        }
        fn list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
            if s.is_empty() {
                return Some(Vec::new());
            }
            s.split(';').map(|x| x.parse().ok()).collect()
        }
        fn opt<T: std::str::FromStr>(s: &str) -> Option<Option<T>> {
            if s == "NA" {
                Some(None)
            } else {
                s.parse().ok().map(Some)
            }
        }
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad float"));
        let flag = |s: &str| s.parse::<bool>().map_err(|_| bad("bad flag"));
        Ok(FamilyRow {
            d: Poly::parse(f[0], p)?,
            degree: f[1].parse().map_err(|_| bad("bad degree"))?,
            coeffs: list(f[2]).ok_or_else(|| bad("bad coefficients"))?,
            epsilon: opt(f[3]).ok_or_else(|| bad("bad epsilon"))?,
            stripped: list(f[4]).ok_or_else(|| bad("bad stripped roots"))?,
            angles: list(f[5]).ok_or_else(|| bad("bad angles"))?,
            central: num(f[6])?,
            central_exact: f[7].to_string(),
            edge: num(f[8])?,
            edge_exact: f[9].to_string(),
            max_m: num(f[10])?,
            rh: flag(f[11])?,
            fe: flag(f[12])?,
            bound_ok: opt(f[13]).ok_or_else(|| bad("bad bound flag"))?,
            discrepancy: num(f[14])?,
        })
    }
}

/// Analyze every member, in parallel, keeping member order.
pub fn family_rows(p: u32, degree: usize, sample: FamilySample, tol: f64) -> Result<Vec<FamilyRow>> {
    let members = family_members(p, degree, sample);
    members
        .par_iter()
        .map(|d| {
            let qd = QuadraticDiscriminant::new(d)?;
            Ok(FamilyRow::from_analysis(&analyze(&qd, tol)?))
        })
        .collect()
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct FamilyStats {
    pub p: u32,
    pub degree: usize,
    pub sample_size: usize,
    pub zero_count: usize,
    /// Star discrepancy of all zero angles pooled together.
    pub discrepancy: f64,
    pub max_m: f64,
    pub min_central: f64,
    pub max_central: f64,
    pub rh_failures: usize,
    pub fe_failures: usize,
    /// Members with `g >= 2`, where the central-value bound applies.
    pub bound_checked: usize,
    pub bound_violations: usize,
}

impl FamilyStats {
    pub fn from_rows(p: u32, degree: usize, rows: &[FamilyRow]) -> Self {
        let pooled: Vec<f64> = rows.iter().flat_map(|r| angle_points(&r.angles)).collect();
        FamilyStats {
            p,
            degree,
            sample_size: rows.len(),
            zero_count: pooled.len(),
            discrepancy: star_discrepancy(&pooled),
            max_m: rows.iter().map(|r| r.max_m).fold(0.0, f64::max),
            min_central: rows.iter().map(|r| r.central.abs()).fold(f64::INFINITY, f64::min),
            max_central: rows.iter().map(|r| r.central.abs()).fold(0.0, f64::max),
            rh_failures: rows.iter().filter(|r| !r.rh).count(),
            fe_failures: rows.iter().filter(|r| !r.fe).count(),
            bound_checked: rows.iter().filter(|r| r.bound_ok.is_some()).count(),
            bound_violations: rows.iter().filter(|r| r.bound_ok == Some(false)).count(),
        }
    }
}

pub fn family_discrepancy(p: u32, degree: usize, sample: FamilySample, tol: f64) -> Result<FamilyStats> {
    let rows = family_rows(p, degree, sample, tol)?;
    Ok(FamilyStats::from_rows(p, degree, &rows))
}
