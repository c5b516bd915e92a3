//! Scalar arithmetic in the prime field F_p.

use crate::error::{Error, Result};

/// A validated odd prime `p` with `p = 1 mod 4`.
///
/// The restriction makes `-1` a square in F_p, which the sign conventions of
/// the Hilbert symbol and the reciprocity law rely on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u32) -> Result<Self> {
        if !(5..=65_521).contains(&p) || p % 4 != 1 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Smallest quadratic non-residue; used as the canonical non-square unit.
    pub fn nonresidue(self) -> u32 {
        (2..self.0).find(|&a| chi(a, self.0) == -1).unwrap()
    }

    /// Smallest primitive root mod p.
    pub fn generator(self) -> u32 {
        let p = self.0;
        let mut factors = Vec::new();
        let mut m = p - 1;
        let mut q = 2;
        while q * q <= m {
            if m.is_multiple_of(q) {
                factors.push(q);
                while m.is_multiple_of(q) {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..p)
            .find(|&g| factors.iter().all(|&q| pow(g, ((p - 1) / q) as u64, p) != 1))
            .unwrap()
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u32 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse by the extended Euclidean algorithm. Panics on zero.
pub fn inv(a: u32, p: u32) -> u32 {
    let a = a % p;
    assert!(a != 0, "inverse of zero in F_{p}");
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

/// Quadratic character of F_p: 0, 1 or -1.
pub fn chi(a: u32, p: u32) -> i8 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow(a, ((p - 1) / 2) as u64, p) == 1 {
        1
    } else {
        -1
    }
}

/// Reduce a signed integer into [0, p).
#[inline]
pub fn from_i64(a: i64, p: u32) -> u32 {
    a.rem_euclid(p as i64) as u32
}

/// A square root of `a` in F_p, if one exists (Tonelli-Shanks).
pub fn sqrt(a: u32, p: u32) -> Option<u32> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if chi(a, p) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| chi(z, p) == -1).unwrap();
    let mut m = s;
    let mut c = pow(z, q as u64, p);
    let mut t = pow(a, q as u64, p);
    let mut r = pow(a, q.div_ceil(2) as u64, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul(t2, t2, p);
            i += 1;
        }
        let b = pow(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mul(b, b, p);
        t = mul(t, c, p);
        r = mul(r, b, p);
    }
    Some(r.min(p - r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_validation() {
        assert!(PrimeModulus::new(5).is_ok());
        assert!(PrimeModulus::new(13).is_ok());
        assert!(PrimeModulus::new(7).is_err());
        assert!(PrimeModulus::new(3).is_err());
        assert!(PrimeModulus::new(9).is_err());
        assert!(PrimeModulus::new(2).is_err());
    }

    #[test]
    fn inverses_and_roots() {
        for p in [5u32, 13, 17, 29] {
            for a in 1..p {
                assert_eq!(mul(a, inv(a, p), p), 1);
                if let Some(r) = sqrt(a, p) {
                    assert_eq!(mul(r, r, p), a);
                    assert_eq!(chi(a, p), 1);
                } else {
                    assert_eq!(chi(a, p), -1);
                }
            }
        }
        assert_eq!(PrimeModulus::new(5).unwrap().nonresidue(), 2);
        assert_eq!(PrimeModulus::new(5).unwrap().generator(), 2);
    }
}
