//! Integral ternary quadratic forms over R = F_p[T].

use std::fmt;

use serde_json::{json, Value};

use crate::error::{precondition, Error, Result};
use crate::field::{fp, Poly, RationalFunction};

pub type Vec3 = [Poly; 3];
pub type PolyMat3 = [[Poly; 3]; 3];
pub type RatMat3 = [[RationalFunction; 3]; 3];

/// `Q(v) = v^t A v` for a symmetric Gram matrix `A` over R.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryForm {
    p: u32,
    gram: PolyMat3,
}

impl TernaryForm {
    pub fn new(gram: PolyMat3) -> Result<Self> {
        let p = gram[0][0].p();
        for row in &gram {
            for x in row {
                x.try_same_field(&gram[0][0])?;
            }
        }
        for i in 0..3 {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return precondition("Gram matrix is not symmetric");
                }
            }
        }
        let f = TernaryForm { p, gram };
        if f.disc().is_zero() {
            return precondition("degenerate form (zero discriminant)");
        }
        Ok(f)
    }

    /// `a x^2 + b y^2 + c z^2 + d xy + e xz + f yz`.
    pub fn from_coefficients(a: &Poly, b: &Poly, c: &Poly, d: &Poly, e: &Poly, f: &Poly) -> Result<Self> {
        let h = fp::inv(2, a.p());
        let (d, e, f) = (d.scale(h), e.scale(h), f.scale(h));
        TernaryForm::new([
            [a.clone(), d.clone(), e.clone()],
            [d, b.clone(), f.clone()],
            [e, f, c.clone()],
        ])
    }

    pub fn diagonal(a: &Poly, b: &Poly, c: &Poly) -> Result<Self> {
        let z = Poly::zero(a.p());
        TernaryForm::from_coefficients(a, b, c, &z, &z, &z)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn gram(&self) -> &PolyMat3 {
        &self.gram
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.gram[i][j]
    }

    pub fn bilinear(&self, u: &Vec3, v: &Vec3) -> Poly {
        let mut s = Poly::zero(self.p);
        for i in 0..3 {
            if u[i].is_zero() {
                continue;
            }
            let mut t = Poly::zero(self.p);
            for j in 0..3 {
                if !v[j].is_zero() {
                    t = &t + &(&self.gram[i][j] * &v[j]);
                }
            }
            s = &s + &(&u[i] * &t);
        }
        s
    }

    pub fn eval(&self, v: &Vec3) -> Poly {
        self.bilinear(v, v)
    }

    /// Determinant of the Gram matrix.
    pub fn disc(&self) -> Poly {
        det3(&self.gram)
    }

    /// The form `g^t A g` (new basis vectors are the columns of `g`).
    pub fn transform(&self, g: &PolyMat3) -> TernaryForm {
        let gram = mat_mul(&transpose(g), &mat_mul(&self.gram, g));
        TernaryForm { p: self.p, gram }
    }

    pub fn to_json(&self) -> Value {
        let g: Vec<Vec<String>> = self.gram.iter().map(|r| r.iter().map(|x| x.to_text()).collect()).collect();
        json!({ "p": self.p, "gram": g })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Precondition(format!("form JSON: {m}"));
        let p = v.get("p").and_then(Value::as_u64).ok_or_else(|| bad("missing p"))? as u32;
        crate::field::PrimeModulus::new(p)?;
        let rows = v.get("gram").and_then(Value::as_array).ok_or_else(|| bad("missing gram"))?;
        if rows.len() != 3 {
            return Err(bad("gram must be 3x3"));
        }
        let mut gram: Vec<[Poly; 3]> = Vec::new();
        for r in rows {
            let r = r.as_array().ok_or_else(|| bad("gram row"))?;
            if r.len() != 3 {
                return Err(bad("gram must be 3x3"));
            }
            let mut out = Vec::new();
            for x in r {
                let s = match x {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(bad("entries must be polynomial strings")),
                };
                out.push(Poly::parse(&s, p)?);
            }
            gram.push([out[0].clone(), out[1].clone(), out[2].clone()]);
        }
        TernaryForm::new([gram[0].clone(), gram[1].clone(), gram[2].clone()])
    }
}

impl fmt::Debug for TernaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TernaryForm[F_{}](", self.p)?;
        for (i, r) in self.gram.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}, {}, {}", r[0], r[1], r[2])?;
        }
        write!(f, ")")
    }
}

pub fn zero_vec(p: u32) -> Vec3 {
    [Poly::zero(p), Poly::zero(p), Poly::zero(p)]
}

pub fn unit_vec(i: usize, p: u32) -> Vec3 {
    let mut v = zero_vec(p);
    v[i] = Poly::one(p);
    v
}

pub fn identity(p: u32) -> PolyMat3 {
    [unit_vec(0, p), unit_vec(1, p), unit_vec(2, p)]
}

pub fn transpose<T: Clone>(m: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i].clone()))
}

pub fn mat_mul(a: &PolyMat3, b: &PolyMat3) -> PolyMat3 {
    let p = a[0][0].p();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(Poly::zero(p), |s, k| &s + &(&a[i][k] * &b[k][j])))
    })
}

pub fn mat_vec(a: &PolyMat3, v: &Vec3) -> Vec3 {
    let p = a[0][0].p();
    std::array::from_fn(|i| (0..3).fold(Poly::zero(p), |s, k| &s + &(&a[i][k] * &v[k])))
}

/// Column `j` of a matrix.
pub fn column(a: &PolyMat3, j: usize) -> Vec3 {
    std::array::from_fn(|i| a[i][j].clone())
}

pub fn from_columns(c: &[Vec3; 3]) -> PolyMat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| c[j][i].clone()))
}

pub fn det3(m: &PolyMat3) -> Poly {
    let t = |a: usize, b: usize, c: usize| &(&m[0][a] * &m[1][b]) * &m[2][c];
    let pos = &(&t(0, 1, 2) + &t(1, 2, 0)) + &t(2, 0, 1);
    let neg = &(&t(2, 1, 0) + &t(0, 2, 1)) + &t(1, 0, 2);
    &pos - &neg
}

/// Inverse of a matrix in GL_3(R) (unit determinant).
pub fn inverse_unimodular(m: &PolyMat3) -> Option<PolyMat3> {
    let d = det3(m);
    if d.degree() != 0 {
        return None;
    }
    let di = fp::inv(d.coeff(0), d.p());
    let c = |i: usize, j: usize| {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
    };
    // adjugate is the transposed cofactor matrix
    Some(std::array::from_fn(|i| std::array::from_fn(|j| c(j, i).scale(di))))
}

pub fn to_rational(m: &PolyMat3) -> RatMat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| RationalFunction::from_poly(m[i][j].clone())))
}

pub fn rat_mul(a: &RatMat3, b: &RatMat3) -> RatMat3 {
    let p = a[0][0].p();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(RationalFunction::zero(p), |s, k| &s + &(&a[i][k] * &b[k][j])))
    })
}
