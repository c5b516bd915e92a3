use std::path::PathBuf;
use std::time::Instant;

use arqft_core::qform::enumerate::{box_size, coordinate_bounds, representations_with};
use arqft_core::qform::genus::good_primes;
use arqft_core::qform::mass::{polys_of_degree, ResidualRow};
use arqft_core::qform::{
    automorphism_count, genus_enumerate, residual_scan, run_example, siegel_ratio_scan, theta_series, Completeness,
    GenusSet, GenusTheta, InftyDiagonalization, TernaryForm,
};
use arqft_core::spectral;
use arqft_core::symbols::jacobi;
use arqft_core::zeta::{
    analyze, char_sum, family_members, FamilyRow, FamilySample, FamilyStats, QuadraticDiscriminant,
};
use arqft_core::{Poly, PrimeModulus};
use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{precondition, Failure, RunConfig};
use crate::output::{csv, json};

/// Which polynomials `D` to run over.
#[derive(Args, Debug, Clone)]
pub struct Select {
    /// A single polynomial, e.g. `1+1T+0T^2+1T^3` or `T^3+T+1`.
    #[arg(long = "D", value_name = "POLY")]
    pub d: Option<String>,
    #[arg(long, conflicts_with = "d")]
    pub deg: Option<usize>,
    /// Every polynomial of the degree.
    #[arg(long, requires = "deg")]
    pub all: bool,
    /// This many seeded polynomials of the degree.
    #[arg(long, requires = "deg", conflicts_with = "all")]
    pub sample: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    /// Form JSON: `{"p": 5, "gram": [[..], [..], [..]]}` with polynomial strings.
    #[arg(long)]
    pub form: PathBuf,
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), Failure> {
    if ok {
        Ok(())
    } else {
        Err(Failure::Check(msg()))
    }
}

// ---- L-functions ----

/// Square-free monic members of a zeta family.
fn zeta_members(cfg: &RunConfig, s: &Select) -> Result<(Vec<Poly>, String), Failure> {
    if let Some(d) = &s.d {
        let d = Poly::parse(d, cfg.p)?;
        return Ok((vec![d.clone()], format!("D={}", d.to_text())));
    }
    let deg = s.deg.ok_or_else(|| precondition("give --D or --deg"))?;
    let sample = match (s.all, s.sample) {
        (true, _) => FamilySample::Full,
        (false, Some(n)) => FamilySample::Seeded { n, seed: cfg.seed },
        (false, None) => return Err(precondition("--deg needs --all or --sample N")),
    };
    Ok((family_members(cfg.p, deg, sample), format!("deg={deg}")))
}

fn zeta_row(cfg: &RunConfig, d: &Poly) -> Result<FamilyRow, Failure> {
    let args = format!("p={};D={};tol={:e}", cfg.p, d.to_text(), cfg.tol);
    let line = cfg.cache.get_or("zeta-row", &args, || -> Result<String, Failure> {
        let qd = QuadraticDiscriminant::new(d)?;
        Ok(FamilyRow::from_analysis(&analyze(&qd, cfg.tol)?).to_csv())
    })?;
    // warm and cold runs both go through the text form
    Ok(FamilyRow::from_csv(&line, cfg.p)?)
}

fn zeta_rows(cfg: &RunConfig, ds: &[Poly]) -> Result<Vec<FamilyRow>, Failure> {
    ds.par_iter().map(|d| zeta_row(cfg, d)).collect()
}

fn hard_checks(rows: &[FamilyRow]) -> Result<(), Failure> {
    let rh = rows.iter().filter(|r| !r.rh).count();
    let fe = rows.iter().filter(|r| !r.fe).count();
    check(rh == 0 && fe == 0, || format!("{rh} RH failures and {fe} functional-equation failures"))
}

pub fn lfun(cfg: &RunConfig, s: &Select) -> Result<(), Failure> {
    let (ds, _) = zeta_members(cfg, s)?;
    let rows = zeta_rows(cfg, &ds)?;
    let lines: Vec<String> = rows.iter().map(FamilyRow::to_csv).collect();
    cfg.sink.emit("lfun.csv", &csv(FamilyRow::csv_header(), &lines))?;
    hard_checks(&rows)
}

pub fn zeros(cfg: &RunConfig, s: &Select) -> Result<(), Failure> {
    let (ds, _) = zeta_members(cfg, s)?;
    let per_d: Vec<Result<(Vec<String>, bool), Failure>> = ds
        .par_iter()
        .map(|d| {
            let a = analyze(&QuadraticDiscriminant::new(d)?, cfg.tol)?;
            let tau = std::f64::consts::TAU;
            let mut roots = a.zeros.roots.clone();
            roots.sort_by(|x, y| x.arg().rem_euclid(tau).total_cmp(&y.arg().rem_euclid(tau)));
            let mut out = Vec::new();
            for (i, z) in roots.iter().enumerate() {
                out.push(format!("{},nontrivial,{i},{},{},{},{}", d.to_text(), z.re, z.im, z.norm(), z.arg().rem_euclid(tau)));
            }
            for (i, r) in a.stripped.iter().enumerate() {
                // (1 - r t) vanishes at t = r
                out.push(format!("{},trivial,{i},{r},0,1,{}", d.to_text(), if *r == 1 { 0.0 } else { std::f64::consts::PI }));
            }
            Ok((out, a.rh))
        })
        .collect();
    let mut lines = Vec::new();
    let mut rh_bad = 0;
    for r in per_d {
        let (l, rh) = r?;
        lines.extend(l);
        rh_bad += usize::from(!rh);
    }
    cfg.sink.emit("zeros.csv", &csv("D,kind,index,re,im,modulus,angle", &lines))?;
    check(rh_bad == 0, || format!("{rh_bad} members have a zero off |t| = p^-1/2"))
}

pub fn family(cfg: &RunConfig, s: &Select) -> Result<(), Failure> {
    let (ds, label) = zeta_members(cfg, s)?;
    let rows = zeta_rows(cfg, &ds)?;
    let degree = s.deg.unwrap_or_else(|| ds.first().map_or(0, |d| d.degree().max(0) as usize));
    let stats = FamilyStats::from_rows(cfg.p, degree, &rows);
    let lines: Vec<String> = rows.iter().map(FamilyRow::to_csv).collect();
    let stem = format!("family_p{}_{}", cfg.p, label.replace('=', ""));
    cfg.sink.emit(&format!("{stem}.csv"), &csv(FamilyRow::csv_header(), &lines))?;
    let mut summary = serde_json::to_value(&stats).expect("stats serialize");
    summary["seed"] = json!(s.sample.is_some().then_some(cfg.seed));
    cfg.sink.emit(&format!("{stem}.json"), &json(&summary))?;
    hard_checks(&rows)?;
    check(stats.bound_violations == 0, || format!("{} central values exceed the explicit bound", stats.bound_violations))
}

// ---- ternary forms ----

fn load_form(cfg: &RunConfig, f: &FormArgs) -> Result<TernaryForm, Failure> {
    let text = std::fs::read_to_string(&f.form)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| precondition(format!("{}: {e}", f.form.display())))?;
    let q = TernaryForm::from_json(&v)?;
    if cfg.p_given && q.p() != cfg.p {
        return Err(precondition(format!("form is over F_{} but --p {} was given", q.p(), cfg.p)));
    }
    if q.disc().is_zero() {
        return Err(precondition("degenerate form"));
    }
    if !InftyDiagonalization::new(&q)?.is_anisotropic() {
        return Err(precondition("form is isotropic at infinity; representation sets are infinite"));
    }
    Ok(q)
}

fn form_text(q: &TernaryForm) -> String {
    serde_json::to_string(&q.to_json()).unwrap()
}

fn vec_text(v: &[Poly; 3]) -> String {
    format!("{}|{}|{}", v[0].to_text(), v[1].to_text(), v[2].to_text())
}

pub fn rep(cfg: &RunConfig, f: &FormArgs, s: &Select) -> Result<(), Failure> {
    let q = load_form(cfg, f)?;
    let p = q.p();
    let ds: Vec<Poly> = match (&s.d, s.deg) {
        (Some(d), _) => vec![Poly::parse(d, p)?],
        (None, Some(deg)) if s.all => polys_of_degree(deg, p).collect(),
        (None, Some(_)) => return Err(precondition("rep --deg needs --all")),
        (None, None) => return Err(precondition("give --D or --deg")),
    };
    let form = form_text(&q);
    let lines: Vec<String> = ds
        .par_iter()
        .map(|d| {
            let args = format!("form={form};D={}", d.to_text());
            cfg.cache.get_or("rep", &args, || -> Result<String, Failure> {
                let r = representations_with(&q, d, 0, cfg.budget)?;
                let vs: Vec<String> = r.vectors.iter().map(vec_text).collect();
                Ok(format!("{},{},{},{},{}", d.to_text(), d.degree(), r.count(), r.complete, vs.join(";")))
            })
        })
        .collect::<Result<_, _>>()?;
    cfg.sink.emit("rep.csv", &csv("D,deg,r_Q,complete,vectors", &lines))
        .map_err(Failure::from)
}

pub fn auto(cfg: &RunConfig, f: &FormArgs) -> Result<(), Failure> {
    let q = load_form(cfg, f)?;
    let n = automorphism_count(&q)?;
    cfg.sink.emit("auto.json", &json(&json!({ "form": q.to_json(), "automorphisms": n })))?;
    Ok(())
}

fn genus_of(q: &TernaryForm, prime_deg: usize) -> Result<GenusSet, Failure> {
    let primes = good_primes(q, prime_deg);
    if primes.is_empty() {
        return Err(precondition(format!("no good primes of degree {prime_deg}")));
    }
    Ok(genus_enumerate(q, &primes)?)
}

fn completeness_text(c: Completeness) -> &'static str {
    match c {
        Completeness::CertifiedClosed => "certified-closed",
        Completeness::Heuristic => "heuristic",
    }
}

fn genus_json(g: &GenusSet) -> Value {
    let classes: Vec<Value> =
        g.classes.iter().map(|c| json!({ "form": c.form.to_json(), "automorphisms": c.automorphisms })).collect();
    json!({
        "classes": classes,
        "class_count": g.classes.len(),
        "weight_num": g.weight.numer(),
        "weight_den": g.weight.denom(),
        "completeness": completeness_text(g.completeness),
        "primes": g.primes.iter().map(Poly::to_text).collect::<Vec<_>>(),
        "closing_primes": g.closing_primes.iter().map(Poly::to_text).collect::<Vec<_>>(),
    })
}

fn flag_heuristic(g: &GenusSet) {
    if g.completeness != Completeness::CertifiedClosed {
        eprintln!("warning: the genus walk is not certified closed; results below are conditional");
    }
}

pub fn genus(cfg: &RunConfig, f: &FormArgs, prime_deg: usize) -> Result<(), Failure> {
    let q = load_form(cfg, f)?;
    let g = genus_of(&q, prime_deg)?;
    flag_heuristic(&g);
    cfg.sink.emit("genus.json", &json(&genus_json(&g)))?;
    Ok(())
}

pub fn mass(cfg: &RunConfig, f: &FormArgs, degrees: &[usize], stride: usize, prime_deg: usize) -> Result<(), Failure> {
    let q = load_form(cfg, f)?;
    if degrees.is_empty() || stride == 0 {
        return Err(precondition("need at least one degree and a positive stride"));
    }
    let g = genus_of(&q, prime_deg)?;
    flag_heuristic(&g);
    let maxdeg = *degrees.iter().max().unwrap() as i64;
    let gt = GenusTheta::new(&g, maxdeg)?;
    let ds: Vec<Poly> = degrees.iter().flat_map(|&d| polys_of_degree(d, q.p()).step_by(stride)).collect();
    let rep = siegel_ratio_scan(&q, &gt, &ds)?;
    let lines: Vec<String> = rep
        .rows
        .iter()
        .map(|r| {
            format!(
                "{},{},{},{},{},{},{},{},{},{}",
                r.d.to_text(),
                r.d.degree(),
                u8::from(r.infinity_class.odd_degree),
                u8::from(r.infinity_class.square_lead),
                r.r_g.numer(),
                r.r_g.denom(),
                r.local_product.numer(),
                r.local_product.denom(),
                r.ratio.rational,
                r.ratio.over_sqrt_p
            )
        })
        .collect();
    let header = "D,deg,inf_odd_degree,inf_square_lead,r_G_num,r_G_den,density_num,density_den,ratio,ratio_over_sqrt_p";
    cfg.sink.emit("siegel.csv", &csv(header, &lines))?;
    let classes: Vec<Value> = rep
        .by_class
        .iter()
        .map(|(c, r, n)| {
            json!({
                "odd_degree": c.odd_degree,
                "square_lead": c.square_lead,
                "members": n,
                "ratio": r.as_ref().map(|r| r.to_string()),
            })
        })
        .collect();
    let mut skipped = serde_json::Map::new();
    for (_, s) in &rep.skipped {
        let k = serde_json::to_value(s).unwrap().as_str().unwrap().to_string();
        *skipped.entry(k).or_insert(json!(0)) = json!(skipped.get(&k).and_then(Value::as_u64).unwrap_or(0) + 1);
    }
    let summary = json!({
        "genus": genus_json(&g),
        "rows": rep.rows.len(),
        "skipped": skipped,
        "by_class": classes,
        "constant": rep.constant,
        "conditional": g.completeness != Completeness::CertifiedClosed,
    });
    cfg.sink.emit("siegel.json", &json(&summary))?;
    check(rep.constant, || "the Siegel ratio is not constant on an infinity class".into())
}

pub fn residual(
    cfg: &RunConfig,
    f: &FormArgs,
    maxdeg: usize,
    max_exponent: f64,
    parity: bool,
    prime_deg: usize,
) -> Result<(), Failure> {
    let q = load_form(cfg, f)?;
    let g = genus_of(&q, prime_deg)?;
    flag_heuristic(&g);
    let gt = GenusTheta::new(&g, maxdeg as i64)?;
    let degrees: Vec<usize> = (1..=maxdeg).collect();
    let rep = residual_scan(&q, &gt, &degrees, parity)?;
    let lines: Vec<String> = rep.rows.iter().map(ResidualRow::to_csv).collect();
    cfg.sink.emit("residual.csv", &csv(ResidualRow::csv_header(), &lines))?;
    let by: Vec<Value> =
        rep.max_exponent_by_degree.iter().filter(|(_, e)| e.is_some()).map(|(d, e)| json!({ "degree": d, "max_exponent": e })).collect();
    let fit_ok = rep.max_exponent.is_some_and(|e| e <= max_exponent);
    let lower_ok = rep.lower_bound.is_some_and(|c| c > 0.0);
    let summary = json!({
        "rows": rep.rows.len(),
        "skipped": rep.skipped.iter().map(|(s, n)| json!({ "reason": s, "count": n })).collect::<Vec<_>>(),
        "max_exponent": rep.max_exponent,
        "max_exponent_by_degree": by,
        "threshold": max_exponent,
        "lower_bound": rep.lower_bound,
        "genus_completeness": completeness_text(g.completeness),
        "pass": fit_ok && lower_ok,
    });
    cfg.sink.emit("residual.json", &json(&summary))?;
    check(fit_ok && lower_ok, || {
        format!(
            "max log_p|e(D)|/deg D = {} against {max_exponent}, lower-bound constant {}",
            rep.max_exponent.map_or("NA".into(), |e| format!("{e:.4}")),
            rep.lower_bound.map_or("NA".into(), |c| format!("{c:.4}"))
        )
    })
}

// ---- suites ----

pub fn identity_suite(cfg: &RunConfig, primes: &[u32]) -> Result<(), Failure> {
    let rep = spectral::identity_suite(primes, cfg.seed)?;
    cfg.sink.emit("identity_suite.json", &json(&serde_json::to_value(&rep).expect("report serializes")))?;
    check(rep.pass, || format!("{} identity failures", rep.failures()))
}

pub fn example7(cfg: &RunConfig) -> Result<(), Failure> {
    let r = run_example()?;
    let mut text = String::new();
    for c in &r.checks {
        text += &format!("{} {}: {}\n", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let n = r.checks.len();
    text += &format!("{} ({n} sub-checks)\n", if r.pass() { "PASS" } else { "FAIL" });
    cfg.sink.emit("example7.txt", &text)?;
    check(r.pass(), || "the example storyline did not reproduce".into())
}

pub fn bench(cfg: &RunConfig) -> Result<(), Failure> {
    let p = cfg.p;
    let eps = PrimeModulus::new(p)?.nonresidue();
    let q = TernaryForm::diagonal(&Poly::one(p), &Poly::constant(eps, p), &Poly::parse("T^3+T+1", p)?)?;
    let maxdeg = 5;
    let visited = box_size(p, &coordinate_bounds(&q, maxdeg)?);
    let t = Instant::now();
    let theta = theta_series(&q, maxdeg, cfg.budget)?;
    let enum_secs = t.elapsed().as_secs_f64();

    let ds = family_members(p, 5, FamilySample::Seeded { n: 200, seed: cfg.seed });
    let t = Instant::now();
    let mut sums = 0u64;
    for d in &ds {
        let qd = QuadraticDiscriminant::new(d)?;
        for n in 0..5 {
            std::hint::black_box(char_sum(&qd, n));
            sums += 1;
        }
    }
    let char_secs = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let mut symbols = 0u64;
    for (i, a) in ds.iter().enumerate() {
        let b = &ds[(i + 1) % ds.len()];
        if a != b {
            std::hint::black_box(jacobi(a, b)?);
            symbols += 1;
        }
    }
    let jac_secs = t.elapsed().as_secs_f64();
    let report = json!({
        "p": p,
        "enumeration": { "box_points": visited, "represented_values": theta.counts.len(), "seconds": enum_secs, "vectors_per_sec": visited / enum_secs },
        "char_sums": { "count": sums, "seconds": char_secs, "per_sec": sums as f64 / char_secs },
        "jacobi": { "count": symbols, "seconds": jac_secs, "per_sec": symbols as f64 / jac_secs },
    });
    cfg.sink.emit("bench.json", &json(&report))?;
    Ok(())
}
