#![allow(dead_code)]

use arqft_core::qform::form::{identity, mat_mul, PolyMat3};
use arqft_core::qform::{reduce, InftyDiagonalization, TernaryForm};
use arqft_core::symbols::Mat2;
use arqft_core::{Poly, RationalFunction};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pp(s: &str, p: u32) -> Poly {
    Poly::parse(s, p).unwrap()
}

/// Uniform over polynomials of degree `<= max_deg` (zero included).
pub fn poly(rng: &mut ChaCha8Rng, p: u32, max_deg: usize) -> Poly {
    let c: Vec<u32> = (0..=max_deg).map(|_| rng.random_range(0..p)).collect();
    Poly::new(c, p)
}

pub fn nonzero_poly(rng: &mut ChaCha8Rng, p: u32, max_deg: usize) -> Poly {
    loop {
        let f = poly(rng, p, max_deg);
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn monic(rng: &mut ChaCha8Rng, p: u32, deg: usize) -> Poly {
    let low = if deg == 0 { Poly::zero(p) } else { poly(rng, p, deg - 1) };
    &low + &Poly::monomial(deg, 1, p)
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng, p: u32, max_deg: usize) -> RationalFunction {
    RationalFunction::new(nonzero_poly(rng, p, max_deg), nonzero_poly(rng, p, max_deg)).unwrap()
}

/// Product of elementary matrices and a constant diagonal; determinant a unit.
pub fn unimodular(rng: &mut ChaCha8Rng, p: u32, steps: usize, max_deg: usize) -> PolyMat3 {
    let mut g = identity(p);
    for _ in 0..steps {
        let i = rng.random_range(0..3);
        let j = (i + rng.random_range(1..3)) % 3;
        let mut e = identity(p);
        e[i][j] = poly(rng, p, max_deg);
        g = mat_mul(&g, &e);
    }
    let mut d = identity(p);
    let k = rng.random_range(0..3);
    d[k][k] = Poly::constant(rng.random_range(1..p), p);
    mat_mul(&g, &d)
}

/// A reduced form that is anisotropic at infinity, with small coefficients.
pub fn anisotropic_form(rng: &mut ChaCha8Rng, p: u32) -> TernaryForm {
    loop {
        let a = nonzero_poly(rng, p, 1);
        let b = nonzero_poly(rng, p, 2);
        let c = nonzero_poly(rng, p, 3);
        let z = Poly::zero(p);
        let (d, e, f) = if rng.random_bool(0.5) { (poly(rng, p, 1), z.clone(), poly(rng, p, 1)) } else { (z.clone(), z.clone(), z) };
        let Ok(q) = TernaryForm::from_coefficients(&a, &b, &c, &d, &e, &f) else { continue };
        if q.disc().is_zero() {
            continue;
        }
        let Ok(diag) = InftyDiagonalization::new(&q) else { continue };
        if diag.is_anisotropic() {
            return reduce(&q).unwrap().form;
        }
    }
}

fn elementary(rng: &mut ChaCha8Rng, x: RationalFunction) -> Mat2 {
    if rng.random_bool(0.5) {
        Mat2::upper(x)
    } else {
        Mat2::lower(x)
    }
}

pub fn sl2_r(rng: &mut ChaCha8Rng, p: u32) -> Mat2 {
    let mut g = Mat2::identity(p);
    for _ in 0..rng.random_range(1..4) {
        let x = poly(rng, p, 2).into();
        g = &g * &elementary(rng, x);
    }
    if rng.random_bool(0.3) {
        g = &g * &Mat2::weyl(p);
    }
    g
}

fn o_inf(rng: &mut ChaCha8Rng, p: u32) -> RationalFunction {
    let k = rng.random_range(0..3usize);
    RationalFunction::new(poly(rng, p, k), Poly::monomial(k, 1, p)).unwrap()
}

pub fn sl2_o_inf(rng: &mut ChaCha8Rng, p: u32) -> Mat2 {
    let mut g = Mat2::identity(p);
    for _ in 0..rng.random_range(1..4) {
        let x = o_inf(rng, p);
        g = &g * &elementary(rng, x);
    }
    if rng.random_bool(0.3) {
        g = &g * &Mat2::diag(RationalFunction::constant(rng.random_range(1..p), p)).unwrap();
    }
    if rng.random_bool(0.3) {
        g = &g * &Mat2::weyl(p);
    }
    g
}

pub fn sl2_k(rng: &mut ChaCha8Rng, p: u32) -> Mat2 {
    let mut g = if rng.random_bool(0.5) { sl2_r(rng, p) } else { sl2_o_inf(rng, p) };
    if rng.random_bool(0.5) {
        let m = Poly::monomial(rng.random_range(1..3usize), rng.random_range(1..p), p);
        g = &g * &Mat2::diag(m.into()).unwrap();
    }
    &g * &sl2_o_inf(rng, p)
}
