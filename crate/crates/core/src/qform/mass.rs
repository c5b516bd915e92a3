//! Genus averages, the Siegel mass formula and representation errors.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};

use super::density::{bad_place_density, local_density, DensityMethod, DEFAULT_COUNT_BUDGET};
use super::diag::{InftyDiagonalization, SquareClass};
use super::enumerate::{representation_count, theta_series, ThetaSeries, DEFAULT_BUDGET};
use super::form::TernaryForm;
use super::genus::{Completeness, GenusSet};
use crate::error::{precondition, Result};
use crate::field::{enumerate_below, Poly, RationalFunction};
use crate::symbols::Place;
use crate::zeta::{central_edge_values, l_polynomial, QuadraticDiscriminant};

/// `n_G^{-1} sum_i r_{Q_i}(D) / n_{Q_i}` from per-class counts.
fn weighted(genus: &GenusSet, counts: &[u64]) -> Ratio<i64> {
    let s: Ratio<i64> =
        genus.classes.iter().zip(counts).map(|(c, &r)| Ratio::new(r as i64, c.automorphisms as i64)).sum();
    s / genus.weight
}

/// `r_G(D)` by enumerating each class.
pub fn genus_rep_count(genus: &GenusSet, d: &Poly) -> Result<Ratio<i64>> {
    let counts: Vec<u64> = genus.classes.iter().map(|c| representation_count(&c.form, d)).collect::<Result<_>>()?;
    Ok(weighted(genus, &counts))
}

/// Theta series of every class of a genus up to a degree, for scans.
pub struct GenusTheta {
    pub genus: GenusSet,
    pub maxdeg: i64,
    thetas: Vec<ThetaSeries>,
}

impl GenusTheta {
    pub fn new(genus: &GenusSet, maxdeg: i64) -> Result<Self> {
        let thetas = genus.classes.iter().map(|c| theta_series(&c.form, maxdeg, DEFAULT_BUDGET)).collect::<Result<_>>()?;
        Ok(GenusTheta { genus: genus.clone(), maxdeg, thetas })
    }

    pub fn class_counts(&self, d: &Poly) -> Vec<u64> {
        self.thetas.iter().map(|t| t.get(d)).collect()
    }

    pub fn r_g(&self, d: &Poly) -> Ratio<i64> {
        weighted(&self.genus, &self.class_counts(d))
    }
}

/// Why a `D` was left out of a scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Skip {
    NotSquarefree,
    SharesFactorWithDisc,
    WrongParity,
    NotRepresentedAtInfinity,
}

pub fn admissibility(q: &TernaryForm, d: &Poly, parity: bool) -> std::result::Result<(), Skip> {
    if d.is_zero() || !d.is_squarefree() {
        return Err(Skip::NotSquarefree);
    }
    if !d.gcd(&q.disc()).is_one() {
        return Err(Skip::SharesFactorWithDisc);
    }
    if parity && (d.degree() - q.disc().degree()) % 2 != 0 {
        return Err(Skip::WrongParity);
    }
    Ok(())
}

/// `c` or `c / sqrt(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtPRational {
    pub rational: BigRational,
    pub over_sqrt_p: bool,
}

impl SqrtPRational {
    pub fn to_f64(&self, p: u32) -> f64 {
        let v = self.rational.to_f64().unwrap_or(f64::NAN);
        if self.over_sqrt_p {
            v / (p as f64).sqrt()
        } else {
            v
        }
    }
}

impl std::fmt::Display for SqrtPRational {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.rational)?;
        if self.over_sqrt_p {
            write!(f, "/sqrt(p)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct SiegelRow {
    pub d: Poly,
    pub r_g: Ratio<i64>,
    pub infinity_class: SquareClass,
    /// Product of the finite local densities.
    pub local_product: BigRational,
    /// `r_G(D) / (|D|^{1/2} prod_w alpha_w(D))`.
    pub ratio: SqrtPRational,
}

#[derive(Clone, Debug)]
pub struct SiegelReport {
    pub rows: Vec<SiegelRow>,
    pub skipped: Vec<(Poly, Skip)>,
    /// `(infinity class, constant ratio if the class is constant, members)`.
    pub by_class: Vec<(SquareClass, Option<SqrtPRational>, usize)>,
    pub constant: bool,
    pub completeness: Completeness,
}

fn big(r: Ratio<i64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Product of the finite densities `prod_w alpha_w(D)` for admissible `D`.
/// Places not dividing `M = D disc` contribute
/// `L(1, chi_M) (1 - 1/p) / prod_{w | M} (1 - |w|^-2)`.
pub fn finite_density_product(q: &TernaryForm, d: &Poly, bad: &[(Poly, Ratio<i64>)]) -> Result<BigRational> {
    let p = q.p();
    let m = d * &q.disc();
    let l = l_polynomial(&QuadraticDiscriminant::new(&m)?);
    let mut prod = central_edge_values(&l).edge_exact * big(Ratio::new(p as i64 - 1, p as i64));
    for w in m.prime_divisors() {
        let nw = BigInt::from(p).pow(w.degree() as u32);
        let euler = BigRational::new(&nw * &nw - 1, &nw * &nw);
        prod /= euler.clone();
        if let Some((_, a)) = bad.iter().find(|(b, _)| *b == w) {
            prod *= big(*a);
        } else {
            // v_w(D) = 1 here
            prod *= euler;
        }
    }
    Ok(prod)
}

pub fn bad_densities(q: &TernaryForm) -> Result<Vec<(Poly, Ratio<i64>)>> {
    let disc = q.disc();
    if !disc.is_squarefree() {
        return precondition("mass computations need a square-free discriminant");
    }
    disc.prime_divisors().into_iter().map(|w| Ok((w.clone(), bad_place_density(q, &w)?))).collect()
}

/// Siegel ratio over the given `D` (admissible ones only, no parity filter).
pub fn siegel_ratio_scan(q: &TernaryForm, gt: &GenusTheta, ds: &[Poly]) -> Result<SiegelReport> {
    let p = q.p();
    let bad = bad_densities(q)?;
    let diag = InftyDiagonalization::new(q)?;
    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for d in ds {
        if let Err(s) = admissibility(q, d, false) {
            skipped.push((d.clone(), s));
            continue;
        }
        let rd = RationalFunction::from_poly(d.clone());
        if !diag.represents_at_infinity(&rd) {
            skipped.push((d.clone(), Skip::NotRepresentedAtInfinity));
            continue;
        }
        let r_g = gt.r_g(d);
        let local_product = finite_density_product(q, d, &bad)?;
        let deg = d.degree() as u32;
        let scale = BigRational::from_integer(BigInt::from(p).pow(deg / 2));
        let ratio = SqrtPRational { rational: big(r_g) / (scale * &local_product), over_sqrt_p: deg % 2 == 1 };
        rows.push(SiegelRow { d: d.clone(), r_g, infinity_class: SquareClass::of(&rd).unwrap(), local_product, ratio });
    }
    let mut by_class = Vec::new();
    for cls in SquareClass::all() {
        let members: Vec<&SiegelRow> = rows.iter().filter(|r| r.infinity_class == cls).collect();
        if members.is_empty() {
            continue;
        }
        let first = &members[0].ratio;
        let constant = members.iter().all(|r| &r.ratio == first);
        by_class.push((cls, constant.then(|| first.clone()), members.len()));
    }
    let constant = !by_class.is_empty() && by_class.iter().all(|(_, c, _)| c.is_some());
    Ok(SiegelReport { rows, skipped, by_class, constant, completeness: gt.genus.completeness })
}

#[derive(Clone, Debug)]
pub struct ResidualRow {
    pub d: Poly,
    pub r_q: u64,
    pub r_g: Ratio<i64>,
    pub e: Ratio<i64>,
    /// `log_p |e(D)| / deg D`, absent when `e = 0`.
    pub exponent: Option<f64>,
}

impl ResidualRow {
    pub fn csv_header() -> &'static str {
        "D,deg,r_Q,r_G_num,r_G_den,e,log_p_abs_e_over_deg"
    }

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.d.to_text(),
            self.d.degree(),
            self.r_q,
            self.r_g.numer(),
            self.r_g.denom(),
            self.e,
            self.exponent.map_or("NA".into(), |x| format!("{x:.9}"))
        )
    }
}

#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub rows: Vec<ResidualRow>,
    pub skipped: Vec<(Skip, usize)>,
    /// `max log_p |e| / deg` over all rows.
    pub max_exponent: Option<f64>,
    pub max_exponent_by_degree: Vec<(usize, Option<f64>)>,
    /// `min r_G(D) log_p log_p |D| / |D|^{1/2}` over rows with `r_G > 0`
    /// and `deg D >= 3` (the statistic vanishes identically at degree 1).
    pub lower_bound: Option<f64>,
}

/// `e(D) = r_Q(D) - r_G(D)` over every `D` of the given degrees (all
/// leading coefficients), with the square-free, coprimality and optional
/// parity filters.
pub fn residual_scan(q: &TernaryForm, gt: &GenusTheta, degrees: &[usize], parity: bool) -> Result<ResidualReport> {
    let p = q.p();
    let tq = theta_series(q, gt.maxdeg, DEFAULT_BUDGET)?;
    let mut rows = Vec::new();
    let mut skipped: std::collections::BTreeMap<Skip, usize> = Default::default();
    for &deg in degrees {
        if deg as i64 > gt.maxdeg {
            return precondition(format!("degree {deg} exceeds the theta series range {}", gt.maxdeg));
        }
        let lo = (p as u64).pow(deg as u32);
        for k in lo..lo * p as u64 {
            let d = Poly::from_index(k, p);
            if let Err(s) = admissibility(q, &d, parity) {
                *skipped.entry(s).or_default() += 1;
                continue;
            }
            let r_q = tq.get(&d);
            let r_g = gt.r_g(&d);
            let e = Ratio::from_integer(r_q as i64) - r_g;
            let exponent = (!e.is_zero()).then(|| (e.numer().abs() as f64 / *e.denom() as f64).ln() / (p as f64).ln() / deg as f64);
            rows.push(ResidualRow { d, r_q, r_g, e, exponent });
        }
    }
    let fmax = |it: &mut dyn Iterator<Item = f64>| it.fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.max(x))));
    let max_exponent = fmax(&mut rows.iter().filter_map(|r| r.exponent));
    let max_exponent_by_degree = degrees
        .iter()
        .map(|&d| (d, fmax(&mut rows.iter().filter(|r| r.d.degree() == d as i64).filter_map(|r| r.exponent))))
        .collect();
    let lp = (p as f64).ln();
    let lower_bound = rows
        .iter()
        .filter(|r| r.d.degree() >= 3 && !r.r_g.is_zero())
        .map(|r| {
            let deg = r.d.degree() as f64;
            r.r_g.to_f64().unwrap() * (deg.ln() / lp) / (p as f64).powf(deg / 2.0)
        })
        .fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))));
    Ok(ResidualReport { rows, skipped: skipped.into_iter().collect(), max_exponent, max_exponent_by_degree, lower_bound })
}

#[derive(Clone, Debug)]
pub struct PlaceVerdict {
    pub place: Option<Place>,
    pub represented: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ObstructionReport {
    /// One verdict per special place; `place: None` summarizes the rest.
    pub verdicts: Vec<PlaceVerdict>,
    pub locally_represented: bool,
}

/// Local solvability of `Q(v) = D` at every place.
pub fn local_obstruction_check(q: &TernaryForm, d: &Poly) -> Result<ObstructionReport> {
    if d.is_zero() {
        return precondition("D = 0");
    }
    let mut verdicts = Vec::new();
    let disc = q.disc();
    let mut special: Vec<Poly> = disc.prime_divisors();
    for w in d.prime_divisors() {
        if !special.contains(&w) {
            special.push(w);
        }
    }
    special.sort();
    for w in special {
        let place = Place::Finite(w.clone());
        let f = local_density(q, &place, d, DensityMethod::Auto, DEFAULT_COUNT_BUDGET)?;
        verdicts.push(PlaceVerdict {
            place: Some(place),
            represented: f.value > Ratio::from_integer(0),
            detail: format!("density {} ({:?})", f.value, f.source),
        });
    }
    verdicts.push(PlaceVerdict {
        place: None,
        represented: true,
        detail: "other finite places: closed-form density >= 1 - 1/|w| > 0".into(),
    });
    let diag = InftyDiagonalization::new(q)?;
    let rd = RationalFunction::from_poly(d.clone());
    let cls = SquareClass::of(&rd).unwrap();
    let classes: Vec<&str> = diag.represented_classes(q.p()).into_iter().map(|c| c.label()).collect();
    verdicts.push(PlaceVerdict {
        place: Some(Place::Infinity),
        represented: diag.represents_at_infinity(&rd),
        detail: format!("D has class {} at infinity; the form represents {{{}}}", cls.label(), classes.join(", ")),
    });
    let locally_represented = verdicts.iter().all(|v| v.represented);
    Ok(ObstructionReport { verdicts, locally_represented })
}

/// All polynomials of exact degree `deg` (every leading coefficient).
pub fn polys_of_degree(deg: usize, p: u32) -> impl Iterator<Item = Poly> {
    enumerate_below(deg + 1, p).filter(move |f| f.degree() == deg as i64)
}
