//! Dense polynomials over F_p.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::fp;
use crate::error::{Error, Result};

/// A polynomial in F_p[T], stored low-degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: u32,
    c: Vec<u32>,
}

impl Poly {
    pub fn zero(p: u32) -> Self {
        Poly { p, c: Vec::new() }
    }

    pub fn one(p: u32) -> Self {
        Poly::constant(1, p)
    }

    /// The variable `T`.
    pub fn t(p: u32) -> Self {
        Poly { p, c: vec![0, 1] }
    }

    pub fn constant(a: u32, p: u32) -> Self {
        Poly::new(vec![a], p)
    }

    /// `T^k`.
    pub fn monomial(k: usize, a: u32, p: u32) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = a % p;
        Poly::new(c, p)
    }

    /// Build from coefficients `c0, c1, ...`; entries are reduced mod p.
    pub fn new(mut c: Vec<u32>, p: u32) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        let mut f = Poly { p, c };
        f.trim();
        f
    }

    pub fn from_i64(c: &[i64], p: u32) -> Self {
        Poly::new(c.iter().map(|&a| fp::from_i64(a, p)).collect(), p)
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn coeffs(&self) -> &[u32] {
        &self.c
    }

    /// Coefficient of `T^i` (zero past the degree).
    #[inline]
    pub fn coeff(&self, i: usize) -> u32 {
        self.c.get(i).copied().unwrap_or(0)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    /// Degree, or `None` for the zero polynomial.
    #[inline]
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Degree with the convention deg 0 = -1.
    #[inline]
    pub fn degree(&self) -> i64 {
        self.c.len() as i64 - 1
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    /// Leading coefficient (0 for the zero polynomial).
    #[inline]
    pub fn lead(&self) -> u32 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    /// `|f| = p^deg f`, as a float (0 for zero).
    pub fn norm(&self) -> f64 {
        match self.deg() {
            None => 0.0,
            Some(d) => (self.p as f64).powi(d as i32),
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(fp::inv(self.lead(), self.p))
    }

    pub fn scale(&self, a: u32) -> Poly {
        let p = self.p;
        Poly::new(self.c.iter().map(|&x| fp::mul(x, a, p)).collect(), p)
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        Poly { p: self.p, c }
    }

    pub fn derivative(&self) -> Poly {
        let p = self.p;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| fp::mul(a, (i as u32) % p, p))
            .collect();
        Poly::new(c, p)
    }

    pub fn eval(&self, x: u32) -> u32 {
        let p = self.p;
        self.c.iter().rev().fold(0, |acc, &a| fp::add(fp::mul(acc, x, p), a, p))
    }

    /// Reverse the coefficient list of length `n` (`T^{n-1} f(1/T)`).
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c = vec![0; n];
        for (i, &a) in self.c.iter().enumerate().take(n) {
            c[n - 1 - i] = a;
        }
        Poly::new(c, self.p)
    }

    fn check(&self, other: &Poly) {
        assert_eq!(self.p, other.p, "mixing F_{} and F_{}", self.p, other.p);
    }

    pub fn try_same_field(&self, other: &Poly) -> Result<()> {
        if self.p != other.p {
            Err(Error::PrimeMismatch(self.p, other.p))
        } else {
            Ok(())
        }
    }

    /// Quotient and remainder. Errors on division by zero.
    pub fn divmod(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let dd = d.c.len() - 1;
        if self.c.len() <= dd {
            return Ok((Poly::zero(p), self.clone()));
        }
        let li = fp::inv(d.lead(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u32; r.len() - dd];
        for k in (0..q.len()).rev() {
            let a = fp::mul(r[k + dd], li, p);
            q[k] = a;
            if a != 0 {
                for (j, &b) in d.c.iter().enumerate() {
                    r[k + j] = fp::sub(r[k + j], fp::mul(a, b, p), p);
                }
            }
        }
        r.truncate(dd);
        Ok((Poly::new(q, p), Poly::new(r, p)))
    }

    /// Remainder mod a nonzero polynomial. Panics on zero divisor.
    pub fn rem(&self, d: &Poly) -> Poly {
        self.divmod(d).expect("remainder by zero").1
    }

    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.divmod(d).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, f: &Poly) -> bool {
        !self.is_zero() && f.rem(self).is_zero()
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let p = self.p;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(p), Poly::zero(p));
        let (mut t0, mut t1) = (Poly::zero(p), Poly::one(p));
        while !r1.is_zero() {
            let (q, r) = r0.divmod(&r1).unwrap();
            r0 = r1;
            r1 = r;
            let s = &s0 - &(&q * &s1);
            s0 = s1;
            s1 = s;
            let t = &t0 - &(&q * &t1);
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = fp::inv(r0.lead(), p);
        (r0.scale(li), s0.scale(li), t0.scale(li))
    }

    /// Inverse modulo `m`, if `gcd(self, m) = 1`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = self.rem(m).ext_gcd(m);
        g.is_one().then(|| s.rem(m))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Poly {
        (self * other).rem(m)
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut r = Poly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        r
    }

    /// `self^e mod m`; `e` given as a big-endian list of u64 limbs is not
    /// needed at the sizes used here, so `u128` suffices.
    pub fn pow_mod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut r = Poly::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        r
    }

    pub fn is_squarefree(&self) -> bool {
        match self.deg() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).is_one(),
        }
    }

    /// Rabin's test. Constants and zero are not irreducible.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.deg() {
            None | Some(0) => return false,
            Some(n) => n,
        };
        if n == 1 {
            return true;
        }
        let p = self.p as u128;
        let t = Poly::t(self.p);
        // T^{p^n} = T mod f
        let frob = |x: &Poly, k: usize| -> Poly {
            let mut y = x.clone();
            for _ in 0..k {
                y = y.pow_mod(p, self);
            }
            y
        };
        if frob(&t, n) != t.rem(self) {
            return false;
        }
        for q in prime_divisors(n) {
            let h = &frob(&t, n / q) - &t;
            if !self.gcd(&h).is_one() {
                return false;
            }
        }
        true
    }

    /// Factorization into monic irreducibles with multiplicity, plus the
    /// leading unit. Factors are sorted.
    pub fn factor(&self) -> Result<(u32, Vec<(Poly, u32)>)> {
        if self.is_zero() {
            return Err(Error::Precondition("factor of zero".into()));
        }
        let unit = self.lead();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        for (sqf, mult) in squarefree_decomposition(&self.monic()) {
            for (g, d) in distinct_degree(&sqf) {
                for f in equal_degree(&g, d) {
                    out.push((f, mult));
                }
            }
        }
        out.sort();
        Ok((unit, out))
    }

    /// Distinct monic irreducible divisors.
    pub fn prime_divisors(&self) -> Vec<Poly> {
        match self.factor() {
            Ok((_, f)) => f.into_iter().map(|(q, _)| q).collect(),
            Err(_) => Vec::new(),
        }
    }

    /// Valuation at a nonconstant `q` (None for the zero polynomial).
    pub fn valuation(&self, q: &Poly) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut f = self.clone();
        while let Some(g) = f.div_exact(q) {
            f = g;
            v += 1;
        }
        Some(v)
    }

    /// Encode a polynomial of degree < n as the integer sum c_i p^i.
    pub fn index(&self) -> u64 {
        self.c.iter().rev().fold(0u64, |acc, &a| acc * self.p as u64 + a as u64)
    }

    /// Inverse of [`Poly::index`].
    pub fn from_index(mut k: u64, p: u32) -> Poly {
        let mut c = Vec::new();
        while k > 0 {
            c.push((k % p as u64) as u32);
            k /= p as u64;
        }
        Poly::new(c, p)
    }

    /// Canonical text form `c0+c1*T+c2*T^2+...`, all coefficients listed.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, &a) in self.c.iter().enumerate() {
            if i > 0 {
                s.push('+');
            }
            match i {
                0 => s += &a.to_string(),
                1 => s += &format!("{a}*T"),
                _ => s += &format!("{a}*T^{i}"),
            }
        }
        s
    }

    /// Parse a sum of terms such as `1+1*T+0*T^2+1*T^3`, `T^3+T+1`,
    /// `2T^2-T-1` or `T`. Coefficients are reduced mod p.
    pub fn parse(s: &str, p: u32) -> Result<Poly> {
        let bad = |why: &str| Error::Parse(s.to_string(), why.to_string());
        let src: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if src.is_empty() {
            return Err(bad("empty"));
        }
        let mut c: Vec<i64> = Vec::new();
        let bytes = src.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1i64;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(bad("expected + or -"));
            }
            let start = i;
            while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
                i += 1;
            }
            let term = &src[start..i];
            if term.is_empty() {
                return Err(bad("empty term"));
            }
            let (coef, exp) = match term.find(['T', 't', 'x', 'X']) {
                None => (term, 0usize),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let tail = &term[pos + 1..];
                    let e = if tail.is_empty() {
                        1
                    } else if let Some(e) = tail.strip_prefix('^') {
                        e.parse::<usize>().map_err(|_| bad("bad exponent"))?
                    } else {
                        return Err(bad("junk after variable"));
                    };
                    if e > 4096 {
                        return Err(bad("exponent too large"));
                    }
                    (if head.is_empty() { "1" } else { head }, e)
                }
            };
            let a: i64 = coef.parse().map_err(|_| bad("bad coefficient"))?;
            if c.len() <= exp {
                c.resize(exp + 1, 0);
            }
            c[exp] = (c[exp] + sign * a.rem_euclid(p as i64)).rem_euclid(p as i64);
        }
        Ok(Poly::from_i64(&c, p))
    }
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Square-free decomposition of a monic polynomial: pairs (f_i, i) with
/// `f = prod f_i^i`, each f_i square-free.
fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, u32)> {
    let p = f.p;
    if f.is_constant() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let df = f.derivative();
    if df.is_zero() {
        // f = g(T^p) = g^(p) since Frobenius is the identity on F_p
        let g = Poly::new(f.c.iter().step_by(p as usize).copied().collect(), p);
        for (h, m) in squarefree_decomposition(&g) {
            out.push((h, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c).unwrap();
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y).unwrap();
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).unwrap();
    }
    if !c.is_one() {
        for (h, m) in squarefree_decomposition(&c) {
            out.push((h, m));
        }
    }
    // merge equal multiplicity entries coming from the p-th power branch
    out.sort_by_key(|(_, m)| *m);
    out
}

/// Distinct-degree factorization of a monic square-free polynomial.
fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut f = f.clone();
    let t = Poly::t(p);
    let mut h = t.rem(&f);
    let mut d = 0;
    while f.degree() >= 2 * (d as i64 + 1) {
        d += 1;
        h = h.pow_mod(p as u128, &f);
        let g = f.gcd(&(&h - &t));
        if !g.is_one() {
            f = f.div_exact(&g).unwrap();
            h = h.rem(&f);
            out.push((g, d));
        }
    }
    if f.degree() >= 1 {
        let n = f.deg().unwrap();
        out.push((f, n));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of irreducibles of degree `d`.
/// The random splitting polynomial is replaced by a deterministic sweep.
fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let n = f.deg().unwrap();
    if n == d {
        return vec![f.clone()];
    }
    let p = f.p;
    let q = (p as u128).pow(d as u32);
    let e = (q - 1) / 2;
    let mut k: u64 = p as u64; // start at T
    loop {
        let a = Poly::from_index(k, p);
        k += 1;
        if a.degree() >= n as i64 {
            k = p as u64;
            continue;
        }
        let b = &a.pow_mod(e, f) - &Poly::one(p);
        let g = f.gcd(&b);
        if g.degree() > 0 && g.degree() < n as i64 {
            let h = f.div_exact(&g).unwrap();
            let mut out = equal_degree(&g, d);
            out.extend(equal_degree(&h, d));
            return out;
        }
    }
}

/// All monic polynomials of degree `d`, in order of increasing
/// [`Poly::index`] of the lower part.
pub fn enumerate_monic(d: usize, p: u32) -> impl Iterator<Item = Poly> {
    let count = (p as u64).pow(d as u32);
    (0..count).map(move |k| {
        let mut c = vec![0u32; d + 1];
        let mut k = k;
        for x in c.iter_mut().take(d) {
            *x = (k % p as u64) as u32;
            k /= p as u64;
        }
        c[d] = 1;
        Poly { p, c }
    })
}

/// All polynomials of degree < n (including zero).
pub fn enumerate_below(n: usize, p: u32) -> impl Iterator<Item = Poly> {
    (0..(p as u64).pow(n as u32)).map(move |k| Poly::from_index(k, p))
}

/// Monic irreducibles of degree exactly `d`.
pub fn monic_irreducibles(d: usize, p: u32) -> Vec<Poly> {
    enumerate_monic(d, p).filter(|f| f.is_irreducible()).collect()
}

impl Ord for Poly {
    /// Degree first, then coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.p
            .cmp(&other.p)
            .then(self.c.len().cmp(&other.c.len()))
            .then_with(|| self.c.iter().rev().cmp(other.c.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[F_{}]({})", self.p, self.to_text())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.check(o);
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| fp::add(self.coeff(i), o.coeff(i), p)).collect();
        Poly::new(c, p)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.check(o);
        let p = self.p;
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| fp::sub(self.coeff(i), o.coeff(i), p)).collect();
        Poly::new(c, p)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let p = self.p;
        Poly::new(self.c.iter().map(|&a| fp::neg(a, p)).collect(), p)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.check(o);
        let p = self.p;
        if self.is_zero() || o.is_zero() {
            return Poly::zero(p);
        }
        let mut acc = vec![0u64; self.c.len() + o.c.len() - 1];
        let pp = p as u64;
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                acc[i + j] += a as u64 * b as u64;
                if acc[i + j] >= 1 << 62 {
                    acc[i + j] %= pp;
                }
            }
        }
        Poly::new(acc.into_iter().map(|x| (x % pp) as u32).collect(), p)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, o: &Poly) -> Poly {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
