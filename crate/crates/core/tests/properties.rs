mod common;

use arqft_core::field::{enumerate_monic, monic_irreducibles};
use arqft_core::qform::density::{closed_form_density, counted_density};
use arqft_core::qform::enumerate::representations_with;
use arqft_core::qform::genus::good_primes;
use arqft_core::qform::{
    automorphism_count, genus_enumerate, representation_count, representations, same_genus, GenusTheta,
    InftyDiagonalization, TernaryForm,
};
use arqft_core::spectral::{self, apply_metaplectic_hecke, CoeffFamily, SpectralParam};
use arqft_core::symbols::{
    cocycle_eps, eta_split, gauss_sum_rational, hilbert, jacobi, jacobi_slow, kappa_split, verify_product_formula,
    verify_reciprocity, Place,
};
use arqft_core::zeta::{
    functional_equation_check, l_polynomial, l_polynomial_direct, pure_part, rh_check, vanishing_check, zeros,
    QuadraticDiscriminant,
};
use arqft_core::{Poly, RationalFunction};
use common::{pp, rng};
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::Rng;

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![5u32, 13])
}

fn poly_in(p: u32, max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..p, 0..=max_deg + 1).prop_map(move |c| Poly::new(c, p))
}

fn nonzero_in(p: u32, max_deg: usize) -> impl Strategy<Value = Poly> {
    poly_in(p, max_deg).prop_filter("nonzero", |f| !f.is_zero())
}

fn monic_in(p: u32, deg: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Poly> {
    deg.prop_flat_map(move |d| {
        prop::collection::vec(0..p, d).prop_map(move |mut c| {
            c.push(1);
            Poly::new(c, p)
        })
    })
}

fn rational_in(p: u32, max_deg: usize) -> impl Strategy<Value = RationalFunction> {
    (nonzero_in(p, max_deg), monic_in(p, 0..=max_deg)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn squarefree_monic(p: u32, deg: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Poly> {
    monic_in(p, deg).prop_filter("square-free", |d| d.is_squarefree())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn norm_is_multiplicative((a, b) in prime().prop_flat_map(|p| (nonzero_in(p, 6), nonzero_in(p, 6)))) {
        let p = a.p() as f64;
        prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        prop_assert_eq!(a.norm(), p.powi(a.degree() as i32));
    }

    #[test]
    fn division_round_trips((a, b) in prime().prop_flat_map(|p| (poly_in(p, 8), nonzero_in(p, 4)))) {
        let (q, r) = a.divmod(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree() < b.degree());
    }

    #[test]
    fn laurent_expansion_times_denominator_is_numerator(x in prime().prop_flat_map(|p| rational_in(p, 4))) {
        let p = x.p();
        let n = 8;
        let (v, c) = x.laurent_at_infinity(n).unwrap();
        let (vn, cn) = RationalFunction::from_poly(x.num().clone()).laurent_at_infinity(n).unwrap();
        let (vd, cd) = RationalFunction::from_poly(x.den().clone()).laurent_at_infinity(n).unwrap();
        prop_assert_eq!(v, vn - vd);
        for k in 0..n {
            let s = (0..=k).map(|j| c[j] as u64 * cd[k - j] as u64).sum::<u64>() % p as u64;
            prop_assert_eq!(s as u32, cn[k]);
        }
        let (_, longer) = x.laurent_at_infinity(n + 5).unwrap();
        prop_assert_eq!(&longer[..n], &c[..]);
    }

    #[test]
    fn additive_character((x, y) in prime().prop_flat_map(|p| (rational_in(p, 3), rational_in(p, 3)))) {
        let p = x.p();
        let sum = &x + &y;
        prop_assert_eq!(sum.additive_char(), (x.additive_char() + y.additive_char()) % p);
        // trivial on O_inf
        let small = RationalFunction::new(x.num().clone(), &(x.den() * x.num()) * &Poly::t(p)).unwrap();
        prop_assert_eq!(small.additive_char(), 0);
        let t_multiple = &RationalFunction::from_poly(Poly::t(p)) * &RationalFunction::constant(x.lead_infty(), p);
        prop_assert_eq!(t_multiple.additive_char(), x.lead_infty());
    }

    #[test]
    fn jacobi_is_multiplicative((d1, d2, c1, c2) in prime().prop_flat_map(|p| (poly_in(p, 5), poly_in(p, 5), monic_in(p, 1..=4), monic_in(p, 1..=4)))) {
        let j = |d: &Poly, c: &Poly| jacobi(d, c).unwrap();
        prop_assert_eq!(j(&(&d1 * &d2), &c1), j(&d1, &c1) * j(&d2, &c1));
        prop_assert_eq!(j(&d1, &(&c1 * &c2)), j(&d1, &c1) * j(&d1, &c2));
        prop_assert_eq!(j(&d1, &c1), jacobi_slow(&d1, &c1).unwrap());
    }

    #[test]
    fn reciprocity_and_product_formula((a, b, x, y) in prime().prop_flat_map(|p| (monic_in(p, 1..=6), monic_in(p, 1..=6), rational_in(p, 3), rational_in(p, 3)))) {
        prop_assume!(a.gcd(&b).is_one());
        prop_assert!(verify_reciprocity(&a, &b).unwrap());
        prop_assert!(verify_product_formula(&x, &y).unwrap());
    }

    #[test]
    fn hilbert_symbol_laws((x1, x2, y, w) in prime().prop_flat_map(|p| (rational_in(p, 3), rational_in(p, 3), rational_in(p, 3), monic_in(p, 1..=2)))) {
        let p = y.p();
        let places: Vec<Place> = std::iter::once(Place::Infinity)
            .chain(w.prime_divisors().into_iter().map(Place::Finite))
            .collect();
        let one = RationalFunction::one(p);
        for v in &places {
            let h = |a: &RationalFunction, b: &RationalFunction| hilbert(a, b, v).unwrap();
            prop_assert_eq!(h(&x1, &y), h(&y, &x1));
            prop_assert_eq!(h(&(&x1 * &x2), &y), h(&x1, &y) * h(&x2, &y));
            prop_assert_eq!(h(&x1, &-&x1), 1);
            let rest = &one - &x1;
            if !rest.is_zero() {
                prop_assert_eq!(h(&x1, &rest), 1);
            }
        }
    }

    #[test]
    fn reduced_forms_are_ultrametric(seed in any::<u64>(), p in prime()) {
        let mut r = rng(seed);
        let q = common::anisotropic_form(&mut r, p);
        let diag = InftyDiagonalization::new(&q).unwrap();
        let c: Vec<RationalFunction> = (0..3).map(|_| common::nonzero_rational(&mut r, p, 2)).collect();
        let terms: Vec<RationalFunction> = (0..3).map(|i| &diag.diag[i] * &(&c[i] * &c[i])).collect();
        let total = &(&terms[0] + &terms[1]) + &terms[2];
        let min_v = terms.iter().map(|t| t.v_infty().unwrap()).min().unwrap();
        prop_assert_eq!(total.v_infty(), Some(min_v));
    }

    #[test]
    fn whittaker_symmetry_and_recursion(theta in -3.2f64..3.2, im in -0.3f64..0.3, p in prime()) {
        let a = SpectralParam::new(p, Complex64::new(theta, im));
        let b = SpectralParam::new(p, Complex64::new(-theta, -im));
        for n in 0..25 {
            let (x, y) = (spectral::whittaker0(n, &a), spectral::whittaker0(n, &b));
            prop_assert!((x - y).norm() <= 1e-9 * x.norm().max(1.0));
        }
        prop_assert!(spectral::whittaker0_recursion_check(&a, 25).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn cocycle_and_splittings(seed in any::<u64>(), p in prime()) {
        let mut r = rng(seed);
        let (g1, g2, g3) = (common::sl2_k(&mut r, p), common::sl2_k(&mut r, p), common::sl2_k(&mut r, p));
        let lhs = cocycle_eps(&g1, &g2).unwrap() * cocycle_eps(&(&g1 * &g2), &g3).unwrap();
        let rhs = cocycle_eps(&g2, &g3).unwrap() * cocycle_eps(&g1, &(&g2 * &g3)).unwrap();
        prop_assert_eq!(lhs, rhs);

        let (h1, h2) = (common::sl2_r(&mut r, p), common::sl2_r(&mut r, p));
        let e = eta_split(&h1).unwrap() * eta_split(&h2).unwrap() * cocycle_eps(&h1, &h2).unwrap();
        prop_assert_eq!(e, eta_split(&(&h1 * &h2)).unwrap());

        let (k1, k2) = (common::sl2_o_inf(&mut r, p), common::sl2_o_inf(&mut r, p));
        let k = kappa_split(&k1).unwrap() * kappa_split(&k2).unwrap() * cocycle_eps(&k1, &k2).unwrap();
        prop_assert_eq!(k, kappa_split(&(&k1 * &k2)).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gauss_sum_magnitude(d in prop_oneof![squarefree_monic(5, 1..=5), squarefree_monic(13, 1..=3)]) {
        let g = gauss_sum_rational(&Poly::one(d.p()), &d).unwrap();
        prop_assert!(g.norm_sqr_is(d.norm() as i64));
    }

    #[test]
    fn l_polynomial_structure(d in prop_oneof![squarefree_monic(5, 1..=6), squarefree_monic(13, 1..=4)]) {
        let qd = QuadraticDiscriminant::new(&d).unwrap();
        prop_assert!(vanishing_check(&qd, 2));
        let l = l_polynomial(&qd);
        prop_assert_eq!(l.degree(), qd.degree() - 1);
        prop_assert_eq!(&l.coeffs, &l_polynomial_direct(&qd, None).coeffs);
        let (pure, stripped) = pure_part(&l);
        prop_assert_eq!(pure.degree() % 2, 0);
        prop_assert_eq!(pure.degree() + stripped.len(), l.degree());
        prop_assert!(functional_equation_check(&pure).unwrap().holds);
        let z = zeros(&pure).unwrap();
        prop_assert_eq!(z.roots.len(), pure.degree());
        prop_assert!(rh_check(&z, 1e-8));
        // real coefficients: the zero set is closed under conjugation
        for t in &z.roots {
            prop_assert!(z.roots.iter().any(|s| (s - t.conj()).norm() < 1e-7));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn enumeration_is_complete_and_invariant(seed in any::<u64>()) {
        let p = 5;
        let mut r = rng(seed);
        let q = common::anisotropic_form(&mut r, p);
        let d = common::nonzero_poly(&mut r, p, 3);
        let reps = representations(&q, &d).unwrap();
        let wide = representations_with(&q, &d, 2, 1e9).unwrap();
        prop_assert_eq!(&wide.vectors, &reps.vectors);
        for v in &reps.vectors {
            prop_assert_eq!(&q.eval(v), &d);
            let neg = [-&v[0], -&v[1], -&v[2]];
            prop_assert!(reps.vectors.contains(&neg));
        }
        let g = common::unimodular(&mut r, p, 2, 1);
        let moved = q.transform(&g);
        prop_assert_eq!(representation_count(&moved, &d).unwrap(), reps.count());
        prop_assert_eq!(automorphism_count(&moved).unwrap(), automorphism_count(&q).unwrap());
    }

    #[test]
    fn closed_form_density_matches_counting(seed in any::<u64>()) {
        let p = 5;
        let mut r = rng(seed);
        let q = common::anisotropic_form(&mut r, p);
        let disc = q.disc();
        let w = common::monic(&mut r, p, 1);
        let d = common::nonzero_poly(&mut r, p, 4);
        let vd = d.valuation(&w).unwrap();
        prop_assume!(!w.divides(&disc) && vd <= 1);
        let closed = closed_form_density(&q, &w, &d).unwrap();
        // counts mod w^r are stable from r = v_w(D) + 1 on
        let (counted, _) = counted_density(&q, &w, &d, vd + 1, 1e9).unwrap();
        prop_assert_eq!(closed, counted);
        prop_assert!([Ratio::new(6, 5), Ratio::new(4, 5), Ratio::new(24, 25)].contains(&closed));
    }
}

#[test]
fn hecke_operator_is_linear() {
    let p = 5;
    let mut r = rng(11);
    let family = |r: &mut rand_chacha::ChaCha8Rng| {
        let mut f = CoeffFamily::new(p);
        for _ in 0..20 {
            let deg = r.random_range(0..4);
            let a = common::monic(r, p, deg);
            let m = 2 * r.random_range(0..5i64);
            f.insert(a, m, Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).unwrap();
        }
        f
    };
    for big_p in monic_irreducibles(1, p).into_iter().chain(monic_irreducibles(2, p).into_iter().take(3)) {
        for _ in 0..5 {
            let (f, g) = (family(&mut r), family(&mut r));
            let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(-2.0, 0.5));
            let lhs = apply_metaplectic_hecke(&f.scale(a).add(&g.scale(b)), &big_p).unwrap();
            let rhs = apply_metaplectic_hecke(&f, &big_p).unwrap().scale(a).add(&apply_metaplectic_hecke(&g, &big_p).unwrap().scale(b));
            assert!(lhs.distance(&rhs) < 1e-9, "P = {big_p}");
        }
    }
}

#[test]
fn same_genus_is_an_equivalence() {
    let p = 5;
    let q1 = TernaryForm::diagonal(&pp("1", p), &pp("T^3+T+1", p), &pp("2", p)).unwrap();
    let q2 = arqft_core::qform::example_q2();
    let g = genus_enumerate(&q1, &good_primes(&q1, 1)).unwrap();
    let mut r = rng(3);
    let mut pool: Vec<TernaryForm> = g.classes.iter().map(|c| c.form.clone()).take(3).collect();
    pool.push(q2.clone());
    pool.push(q1.transform(&common::unimodular(&mut r, p, 3, 1)));
    pool.push(TernaryForm::diagonal(&pp("1", p), &pp("T^3+T+1", p), &pp("1", p)).unwrap());
    pool.push(TernaryForm::diagonal(&pp("2", p), &pp("T^3+T+1", p), &pp("2", p)).unwrap());
    pool.push(TernaryForm::diagonal(&pp("1", p), &pp("T^3+T+2", p), &pp("2", p)).unwrap());
    let n = pool.len();
    let rel: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| same_genus(&pool[i], &pool[j]).unwrap()).collect()).collect();
    for i in 0..n {
        assert!(rel[i][i]);
        for j in 0..n {
            assert_eq!(rel[i][j], rel[j][i]);
            for k in 0..n {
                assert!(!(rel[i][j] && rel[j][k]) || rel[i][k], "{i} {j} {k}");
            }
        }
    }
    // the first five forms share a genus, the last one has another discriminant
    assert!((0..5).all(|j| rel[0][j]));
    assert!(!rel[0][7]);
}

#[test]
fn theta_constant_terms_agree() {
    let p = 5;
    let q1 = TernaryForm::diagonal(&pp("1", p), &pp("T^3+T+1", p), &pp("2", p)).unwrap();
    let g = genus_enumerate(&q1, &good_primes(&q1, 1)).unwrap();
    let gt = GenusTheta::new(&g, 2).unwrap();
    let zero = Poly::zero(p);
    assert!(gt.class_counts(&zero).iter().all(|&c| c == 1));
    assert_eq!(gt.r_g(&zero), Ratio::from_integer(1));
}

#[test]
fn every_small_discriminant_satisfies_the_functional_equation() {
    for d in (1..=4).flat_map(|n| enumerate_monic(n, 5)).filter(|d| d.is_squarefree()) {
        let qd = QuadraticDiscriminant::new(&d).unwrap();
        let (pure, _) = pure_part(&l_polynomial(&qd));
        assert!(functional_equation_check(&pure).unwrap().holds, "D = {d}");
    }
}

/// Dual numbers `F_p[e]/e^2`, a model of `O_w / w^2` at a degree-one place.
type Dual = (u64, u64);

fn dual_mul(a: Dual, b: Dual, p: u64) -> Dual {
    (a.0 * b.0 % p, (a.0 * b.1 + a.1 * b.0) % p)
}

/// `x` modulo `w^2` after stripping an even power of `w`, with `w = T - alpha`.
fn reduce_mod_w2(x: &Poly, alpha: u32) -> Dual {
    let p = x.p();
    let w = &Poly::t(p) - &Poly::constant(alpha, p);
    let v = x.valuation(&w).unwrap();
    let x = x.div_exact(&w.pow(2 * (v / 2) as u64)).unwrap();
    (x.eval(alpha) as u64, x.derivative().eval(alpha) as u64)
}

/// For odd `p` and `v_w(x), v_w(y)` in `{0, 1}`, `x a^2 + y b^2 = c^2` has a
/// nontrivial zero over the completion iff it has a primitive zero mod `w^2`.
fn locally_solvable(x: Dual, y: Dual, p: u64) -> bool {
    let all: Vec<Dual> = (0..p).flat_map(|a| (0..p).map(move |b| (a, b))).collect();
    for &a in &all {
        let xa = dual_mul(x, dual_mul(a, a, p), p);
        for &b in &all {
            let s = dual_mul(y, dual_mul(b, b, p), p);
            let s = ((xa.0 + s.0) % p, (xa.1 + s.1) % p);
            for &c in &all {
                if a.0 == 0 && b.0 == 0 && c.0 == 0 {
                    continue;
                }
                if dual_mul(c, c, p) == s {
                    return true;
                }
            }
        }
    }
    false
}

#[test]
fn hilbert_closed_form_matches_solvability_search() {
    let p = 5;
    let mut r = rng(41);
    let mut minus = 0;
    for _ in 0..500 {
        let x = common::nonzero_poly(&mut r, p, 3);
        let y = common::nonzero_poly(&mut r, p, 3);
        let alpha = r.random_range(0..p);
        let w = &Poly::t(p) - &Poly::constant(alpha, p);
        let h = hilbert(&x.clone().into(), &y.clone().into(), &Place::Finite(w)).unwrap();
        let solvable = locally_solvable(reduce_mod_w2(&x, alpha), reduce_mod_w2(&y, alpha), p as u64);
        assert_eq!(h == 1, solvable, "x = {}, y = {}, alpha = {alpha}", x.to_text(), y.to_text());
        minus += (h == -1) as usize;
    }
    assert!(minus > 20, "only {minus} instances with symbol -1");
}
