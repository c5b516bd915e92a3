//! Complete enumeration of representations by anisotropic forms.
//!
//! Write `v = S c` with `S^t A S = diag(d)`. Anisotropy at infinity means the
//! leading terms of `d_i c_i^2` cannot cancel, so `deg Q(v) = max deg(d_i c_i^2)`
//! and every solution of `Q(v) = D` has `deg c_i <= (deg D - deg d_i)/2`. That
//! bounds each coordinate of `v` by `B_j = max_i(floor((deg D - deg d_i)/2) + deg S_ji)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::diag::InftyDiagonalization;
use super::form::{Vec3, TernaryForm};
use crate::error::{precondition, Error, Result};
use crate::field::{fp, Poly};

/// A list of solutions with a completeness flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepSet {
    pub vectors: Vec<Vec3>,
    pub complete: bool,
    /// Number of candidate points visited.
    pub visited: u64,
}

impl RepSet {
    pub fn count(&self) -> u64 {
        self.vectors.len() as u64
    }
}

/// Coordinate degree bounds for solutions of `Q(v) = D` with `deg D = n`
/// (`-1` means the coordinate is forced to vanish).
pub fn coordinate_bounds(q: &TernaryForm, n: i64) -> Result<[i64; 3]> {
    let dg = InftyDiagonalization::new(q)?;
    if !dg.is_anisotropic() {
        return precondition("form is isotropic at infinity; representation sets are infinite");
    }
    Ok(bounds_from(&dg, n))
}

fn bounds_from(dg: &InftyDiagonalization, n: i64) -> [i64; 3] {
    let degs = dg.degrees();
    std::array::from_fn(|j| {
        let mut b = -1i64;
        for (i, &di) in degs.iter().enumerate() {
            if let Some(sd) = dg.s[j][i].degree() {
                if n >= di {
                    b = b.max((n - di).div_euclid(2) + sd);
                }
            }
        }
        b
    })
}

/// Number of points in a box with the given degree bounds.
pub fn box_size(p: u32, bounds: &[i64]) -> f64 {
    bounds.iter().map(|&b| (p as f64).powi((b + 1) as i32)).product()
}

/// Square root in F_p[T], if `f` is a square.
pub fn poly_sqrt(f: &Poly) -> Option<Poly> {
    let p = f.p();
    let Some(n) = f.deg() else { return Some(f.clone()) };
    if n % 2 == 1 {
        return None;
    }
    let m = n / 2;
    let s0 = fp::sqrt(f.lead(), p)?;
    let inv2s = fp::inv(fp::mul(2, s0, p), p);
    // s = sum s_k T^{m-k}; determine s_k from the coefficient of T^{n-k}
    let mut s = vec![0u32; m + 1];
    s[0] = s0;
    for k in 1..=m {
        let mut acc = f.coeff(n - k);
        for i in 1..k {
            acc = fp::sub(acc, fp::mul(s[i], s[k - i], p), p);
        }
        s[k] = fp::mul(acc, inv2s, p);
    }
    let root = Poly::new(s.into_iter().rev().collect(), p);
    (&root * &root == *f).then_some(root)
}

/// Which coordinate is solved as a quadratic instead of enumerated.
fn solved_coordinate(q: &TernaryForm, bounds: &[i64; 3]) -> usize {
    let mut best = 0;
    for j in 0..3 {
        if bounds[j] > bounds[best] && !q.entry(j, j).is_zero() {
            best = j;
        }
    }
    best
}

/// All `v` with `Q(v) = D`, enumerating two coordinates inside the box and
/// solving the remaining quadratic exactly. `extra` widens every box bound.
pub fn representations_with(q: &TernaryForm, d: &Poly, extra: i64, budget: f64) -> Result<RepSet> {
    q.disc().try_same_field(d)?;
    let p = q.p();
    if d.is_zero() {
        return Ok(RepSet { vectors: vec![super::form::zero_vec(p)], complete: true, visited: 1 });
    }
    let mut bounds = coordinate_bounds(q, d.degree())?;
    for b in bounds.iter_mut() {
        if *b >= 0 || extra > 0 {
            *b += extra;
        }
    }
    let c = solved_coordinate(q, &bounds);
    let (i, j) = match c {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let size = box_size(p, &[bounds[i], bounds[j]]);
    if size > budget {
        return Err(Error::Budget(format!("{size:.3e} candidate pairs exceed budget {budget:.3e}")));
    }
    let ni = (p as u64).pow((bounds[i] + 1).max(0) as u32);
    let nj = (p as u64).pow((bounds[j] + 1).max(0) as u32);
    let acc = q.entry(c, c).clone();
    let chunks: Vec<Vec<Vec3>> = (0..ni)
        .into_par_iter()
        .map(|ki| {
            let mut out = Vec::new();
            let vi = Poly::from_index(ki, p);
            for kj in 0..nj {
                let vj = Poly::from_index(kj, p);
                let mut v = super::form::zero_vec(p);
                v[i] = vi.clone();
                v[j] = vj;
                // Q(v + x e_c) = a x^2 + 2 L x + K
                let k = q.eval(&v);
                let l = &(q.entry(c, i) * &v[i]) + &(q.entry(c, j) * &v[j]);
                let disc = &(&l * &l) - &(&acc * &(&k - d));
                let Some(r) = poly_sqrt(&disc) else { continue };
                let mut roots = vec![&(-&l) + &r];
                if !r.is_zero() {
                    roots.push(&(-&l) - &r);
                }
                for num in roots {
                    if let Some(x) = num.div_exact(&acc) {
                        let mut w = v.clone();
                        w[c] = x;
                        debug_assert_eq!(&q.eval(&w), d);
                        out.push(w);
                    }
                }
            }
            out
        })
        .collect();
    let mut vectors: Vec<Vec3> = chunks.into_iter().flatten().collect();
    vectors.sort();
    Ok(RepSet { vectors, complete: true, visited: ni * nj })
}

pub const DEFAULT_BUDGET: f64 = 5.0e7;

pub fn representations(q: &TernaryForm, d: &Poly) -> Result<RepSet> {
    representations_with(q, d, 0, DEFAULT_BUDGET)
}

pub fn representation_count(q: &TernaryForm, d: &Poly) -> Result<u64> {
    Ok(representations(q, d)?.count())
}

/// Plain box enumeration of every `v` in the box for `deg D = n`, widened by
/// `extra`, returning all solutions of `Q(v) = D`. Used as an oracle.
pub fn representations_bruteforce(q: &TernaryForm, d: &Poly, extra: i64, budget: f64) -> Result<RepSet> {
    let p = q.p();
    let mut bounds = coordinate_bounds(q, d.degree().max(0))?;
    for b in bounds.iter_mut() {
        *b += extra;
    }
    let size = box_size(p, &bounds);
    if size > budget {
        return Err(Error::Budget(format!("{size:.3e} points exceed budget")));
    }
    let target: Vec<u32> = d.coeffs().to_vec();
    let walker = BoxWalker::new(q, bounds);
    let found: Vec<Vec<[u64; 3]>> = (0..walker.n[0])
        .into_par_iter()
        .map(|a| {
            let mut out = Vec::new();
            walker.walk_slab(a, |idx, val| {
                if val == target.as_slice() {
                    out.push(idx);
                }
            });
            out
        })
        .collect();
    let mut vectors: Vec<Vec3> = found
        .into_iter()
        .flatten()
        .map(|idx| std::array::from_fn(|j| Poly::from_index(idx[j], p)))
        .collect();
    vectors.sort();
    Ok(RepSet { vectors, complete: true, visited: size as u64 })
}

/// Allocation-free walk over a coordinate box, evaluating
/// `Q(x, y, z) = A(x, y) + 2 L(x, y) z + a_33 z^2` incrementally in `z`.
pub struct BoxWalker {
    p: u32,
    g: [[Vec<u32>; 3]; 3],
    len: [usize; 3],
    pub n: [u64; 3],
    zs: Vec<Vec<u32>>,
    zsq: Vec<Vec<u32>>,
}

fn digits(mut k: u64, p: u32, out: &mut [u32]) {
    for x in out.iter_mut() {
        *x = (k % p as u64) as u32;
        k /= p as u64;
    }
}

fn trim(v: &[u32]) -> &[u32] {
    let mut n = v.len();
    while n > 0 && v[n - 1] == 0 {
        n -= 1;
    }
    &v[..n]
}

/// out += s * a * b (coefficients mod p)
fn conv_add(a: &[u32], b: &[u32], s: u32, p: u32, out: &mut [u32]) {
    let pp = p as u64;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let xs = x as u64 * s as u64 % pp;
        for (j, &y) in b.iter().enumerate() {
            let k = i + j;
            out[k] = ((out[k] as u64 + xs * y as u64) % pp) as u32;
        }
    }
}

impl BoxWalker {
    pub fn new(q: &TernaryForm, bounds: [i64; 3]) -> Self {
        let p = q.p();
        let g = std::array::from_fn(|i| std::array::from_fn(|j| q.entry(i, j).coeffs().to_vec()));
        let len: [usize; 3] = std::array::from_fn(|j| (bounds[j] + 1).max(0) as usize);
        let n = std::array::from_fn(|j| (p as u64).pow(len[j] as u32));
        let mut zs = Vec::new();
        let mut zsq = Vec::new();
        let g22: Vec<u32> = q.entry(2, 2).coeffs().to_vec();
        for c in 0..n[2] {
            let mut z = vec![0u32; len[2]];
            digits(c, p, &mut z);
            let mut zz = vec![0u32; 2 * len[2] + 1];
            conv_add(&z, &z, 1, p, &mut zz);
            let mut sq = vec![0u32; zz.len() + g22.len()];
            conv_add(&g22, &zz, 1, p, &mut sq);
            zs.push(z);
            zsq.push(sq);
        }
        BoxWalker { p, g, len, n, zs, zsq }
    }

    fn width(&self) -> usize {
        let gl = self.g.iter().flatten().map(|v| v.len()).max().unwrap_or(0);
        2 * self.len.iter().max().copied().unwrap_or(0) + gl + 2
    }

    /// Visit every `(a, b, c)` with first coordinate index `a`.
    pub fn walk_slab(&self, a: u64, mut f: impl FnMut([u64; 3], &[u32])) {
        let p = self.p;
        let w = self.width();
        let mut x = vec![0u32; self.len[0]];
        let mut y = vec![0u32; self.len[1]];
        digits(a, p, &mut x);
        let mut tmp = vec![0u32; w];
        let mut av = vec![0u32; w];
        let mut l2 = vec![0u32; w];
        let mut val = vec![0u32; w];
        for b in 0..self.n[1] {
            digits(b, p, &mut y);
            av.iter_mut().for_each(|t| *t = 0);
            l2.iter_mut().for_each(|t| *t = 0);
            // A = g00 x^2 + g11 y^2 + 2 g01 x y
            for (u, v, gij, s) in [(&x, &x, &self.g[0][0], 1), (&y, &y, &self.g[1][1], 1), (&x, &y, &self.g[0][1], 2)] {
                tmp.iter_mut().for_each(|t| *t = 0);
                conv_add(u, v, 1, p, &mut tmp);
                let t = trim(&tmp).to_vec();
                conv_add(gij, &t, s, p, &mut av);
            }
            // 2L = 2 (g02 x + g12 y)
            conv_add(&self.g[0][2], &x, 2, p, &mut l2);
            conv_add(&self.g[1][2], &y, 2, p, &mut l2);
            let l2t = trim(&l2).to_vec();
            for c in 0..self.n[2] {
                val.copy_from_slice(&av);
                conv_add(&l2t, &self.zs[c as usize], 1, p, &mut val);
                for (k, &s) in self.zsq[c as usize].iter().enumerate() {
                    val[k] = crate::field::fp::add(val[k], s, p);
                }
                f([a, b, c], trim(&val));
            }
        }
    }
}

/// Visit every vector whose coordinates have degree at most the bounds.
pub fn for_each_in_box(p: u32, bounds: &[i64; 3], mut f: impl FnMut(&Vec3)) {
    let n: [u64; 3] = std::array::from_fn(|j| (p as u64).pow((bounds[j] + 1).max(0) as u32));
    for a in 0..n[0] {
        let x = Poly::from_index(a, p);
        for b in 0..n[1] {
            let y = Poly::from_index(b, p);
            for c in 0..n[2] {
                let v = [x.clone(), y.clone(), Poly::from_index(c, p)];
                f(&v);
            }
        }
    }
}

/// Representation numbers `r_Q(D)` for every `D` with `deg D <= maxdeg`
/// (zero counts omitted), from one box enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeries {
    pub maxdeg: i64,
    pub counts: BTreeMap<Poly, u64>,
}

impl ThetaSeries {
    pub fn get(&self, d: &Poly) -> u64 {
        assert!(d.degree() <= self.maxdeg, "theta series truncated below deg {}", d.degree());
        self.counts.get(d).copied().unwrap_or(0)
    }
}

pub fn theta_series(q: &TernaryForm, maxdeg: i64, budget: f64) -> Result<ThetaSeries> {
    let p = q.p();
    let bounds = coordinate_bounds(q, maxdeg)?;
    let size = box_size(p, &bounds);
    if size > budget {
        return Err(Error::Budget(format!("theta series box {size:.3e} exceeds budget {budget:.3e}")));
    }
    let slots = (p as u64).pow((maxdeg + 1) as u32) as usize;
    let walker = BoxWalker::new(q, bounds);
    let partial: Vec<Vec<u64>> = (0..walker.n[0])
        .into_par_iter()
        .map(|a| {
            let mut m = vec![0u64; slots];
            walker.walk_slab(a, |_, val| {
                if val.len() as i64 <= maxdeg + 1 {
                    let k = val.iter().rev().fold(0u64, |acc, &c| acc * p as u64 + c as u64);
                    m[k as usize] += 1;
                }
            });
            m
        })
        .collect();
    let mut dense = vec![0u64; slots];
    for m in partial {
        for (d, x) in dense.iter_mut().zip(m) {
            *d += x;
        }
    }
    let counts = dense
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(k, c)| (Poly::from_index(k as u64, p), c))
        .collect();
    Ok(ThetaSeries { maxdeg, counts })
}
