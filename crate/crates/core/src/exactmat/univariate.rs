use std::fmt;

use super::Mat;
use crate::field::{Field, Scalar};

/// Univariate polynomial, coefficients from the constant term up. Never has a
/// zero leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: Field, coeffs: Vec<Scalar>) -> Self {
        let mut p = UniPoly { field, coeffs };
        p.trim();
        p
    }

    pub fn zero(field: Field) -> Self {
        UniPoly::new(field, Vec::new())
    }

    pub fn one(field: Field) -> Self {
        UniPoly::new(field, vec![field.one()])
    }

    /// `x - root`.
    pub fn linear(root: &Scalar) -> Self {
        let f = root.field();
        UniPoly::new(f, vec![-root, f.one()])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UniPoly {
        match self.lead() {
            None => self.clone(),
            Some(l) => {
                let inv = l.inv().unwrap();
                UniPoly::new(self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let z = self.field.zero();
        UniPoly::new(
            self.field,
            (0..len)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::new(self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(self.field, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.lead().unwrap().inv().unwrap();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree().filter(|&s| s >= dd) else {
            return (UniPoly::zero(self.field), self.clone());
        };
        let mut quot = vec![self.field.zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.coeffs.iter().enumerate() {
                rem[k + i] = &rem[k + i] - &(&c * di);
            }
            quot[k] = c;
        }
        (UniPoly::new(self.field, quot), UniPoly::new(self.field, rem))
    }

    /// Monic gcd; the gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.field,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &self.field.int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }

    /// Horner evaluation at a matrix.
    pub fn eval_mat(&self, a: &Mat) -> Mat {
        let n = a.n();
        self.coeffs.iter().rev().fold(Mat::zeros(self.field, n), |acc, c| {
            &(&acc * a) + &Mat::scalar(n, c.clone())
        })
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `det(xI - a)` from an upper Hessenberg form similar to `a`.
pub(super) fn charpoly_hessenberg(a: &Mat) -> UniPoly {
    let field = a.field();
    let n = a.n();
    let mut h: Vec<Vec<Scalar>> = a.rows().map(<[Scalar]>::to_vec).collect();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        let inv = h[m][m - 1].inv().unwrap();
        for i in m + 1..n {
            if h[i][m - 1].is_zero() {
                continue;
            }
            let t = &h[i][m - 1] * &inv;
            for c in 0..n {
                let v = &h[i][c] - &(&t * &h[m][c]);
                h[i][c] = v;
            }
            for row in h.iter_mut() {
                let v = &row[m] + &(&t * &row[i]);
                row[m] = v;
            }
        }
    }
    // p_k = (x - h_kk) p_{k-1} - sum_i h_ik (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
    let mut ps: Vec<UniPoly> = vec![UniPoly::one(field)];
    for k in 0..n {
        let mut pk = ps[k].mul(&UniPoly::linear(&h[k][k]));
        let mut prod = field.one();
        for i in (0..k).rev() {
            prod = &prod * &h[i + 1][i];
            if prod.is_zero() {
                break;
            }
            let c = &prod * &h[i][k];
            pk = pk.sub(&ps[i].scale(&c));
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn up(c: &[i64]) -> UniPoly {
        UniPoly::new(Q, c.iter().map(|&v| Q.int(v)).collect())
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(Mat::identity(Q, 2).charpoly(), up(&[1, -2, 1]));
        assert_eq!(Mat::unit(Q, 2, 0, 1).charpoly(), up(&[0, 0, 1]));
        assert_eq!(Mat::diag(Q, &[Q.int(1), Q.int(-1)]).charpoly(), up(&[-1, 0, 1]));
    }

    #[test]
    fn charpoly_dense_3x3() {
        // det(xI - a) expanded by hand for a = [[2,1,0],[1,3,1],[0,1,4]].
        let a = Mat::from_i64(Q, &[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.charpoly(), up(&[-18, 24, -9, 1]));
        assert!(a.charpoly().eval_mat(&a).is_zero());
    }

    #[test]
    fn division_and_gcd() {
        let a = up(&[-1, 0, 1]);
        let b = up(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, up(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&up(&[-1, 1]).mul(&up(&[2, 1]))), up(&[-1, 1]));
        assert_eq!(up(&[1, 0, 3]).derivative(), up(&[0, 6]));
    }
}
