//! The pair of ternary forms of discriminant `2(T^3 + T + 1)` over F_5 that
//! share a genus while only one of them represents `T`.

use super::enumerate::representations;
use super::form::TernaryForm;
use super::genus::same_genus;
use super::mass::{local_obstruction_check, polys_of_degree, ObstructionReport};
use crate::error::Result;
use crate::field::Poly;
use crate::symbols::{kohnen_symbol, KohnenSymbol};

pub const EXAMPLE_P: u32 = 5;

fn pp(s: &str) -> Poly {
    Poly::parse(s, EXAMPLE_P).unwrap()
}

/// `x^2 + (T^3 + T + 1) y^2 + 2 z^2`.
pub fn example_q1() -> TernaryForm {
    TernaryForm::diagonal(&pp("1"), &pp("T^3+T+1"), &pp("2")).unwrap()
}

/// `(T^2 - T - 1) x^2 + T y^2 + 2 z^2 + (T + 1) xy`.
pub fn example_q2() -> TernaryForm {
    let z = pp("0");
    TernaryForm::from_coefficients(&pp("T^2-T-1"), &pp("T"), &pp("2"), &pp("T+1"), &z, &z).unwrap()
}

#[derive(Clone, Debug)]
pub struct SubCheck {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct ExampleReport {
    pub checks: Vec<SubCheck>,
    pub kohnen: (KohnenSymbol, KohnenSymbol),
    pub r_q2_t: u64,
    /// `r_{Q1}(D)` for every degree-1 `D`.
    pub q1_degree_one: Vec<(Poly, u64)>,
    pub local_t: ObstructionReport,
}

impl ExampleReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Runs the four sub-checks: same genus with matching Kohnen symbols, `Q2`
/// represents `T` via `(0, 1, 0)`, `Q1` misses every degree-1 polynomial,
/// and `T` is represented by `Q1` everywhere locally but not globally.
pub fn run_example() -> Result<ExampleReport> {
    let (q1, q2) = (example_q1(), example_q2());
    let d = q1.disc();
    let t = pp("T");
    let genus = same_genus(&q1, &q2)?;
    let kohnen = (kohnen_symbol(&q1, &d)?, kohnen_symbol(&q2, &d)?);
    let mut checks = vec![SubCheck {
        name: "same-genus",
        pass: genus && kohnen.0.value == 1 && kohnen.1.value == 1,
        detail: format!("same_genus = {genus}, Kohnen symbols {} and {}", kohnen.0.value, kohnen.1.value),
    }];

    let reps = representations(&q2, &t)?;
    let witness = [pp("0"), pp("1"), pp("0")];
    let has_witness = reps.vectors.contains(&witness);
    checks.push(SubCheck {
        name: "q2-represents-T",
        pass: reps.complete && reps.count() >= 1 && has_witness,
        detail: format!("r_Q2(T) = {}, witness (0,1,0) found: {has_witness}", reps.count()),
    });

    let mut q1_degree_one = Vec::new();
    for dd in polys_of_degree(1, EXAMPLE_P) {
        let r = representations(&q1, &dd)?;
        q1_degree_one.push((dd, if r.complete { r.count() } else { u64::MAX }));
    }
    let misses = q1_degree_one.iter().all(|(_, c)| *c == 0);
    checks.push(SubCheck {
        name: "q1-misses-degree-1",
        pass: misses && q1_degree_one.len() == 20,
        detail: format!("{} degree-1 D checked, all counts zero: {misses}", q1_degree_one.len()),
    });

    let local_t = local_obstruction_check(&q1, &t)?;
    let r_q1_t = q1_degree_one.iter().find(|(dd, _)| *dd == t).map_or(u64::MAX, |x| x.1);
    checks.push(SubCheck {
        name: "no-local-global",
        pass: local_t.locally_represented && r_q1_t == 0,
        detail: format!("T locally represented by Q1 at every place: {}, r_Q1(T) = {r_q1_t}", local_t.locally_represented),
    });

    Ok(ExampleReport { checks, kohnen, r_q2_t: reps.count(), q1_degree_one, local_t })
}
