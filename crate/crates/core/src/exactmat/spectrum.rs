//! Eigenvalue multiplicities and rational eigenvalues, without numerical root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Mat, UniPoly};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// Largest algebraic multiplicity of an eigenvalue over the algebraic closure.
///
/// Uses the chain `g_0 = charpoly`, `g_{k+1} = gcd(g_k, g_k')`: `g_k` is
/// nonconstant exactly while some root has multiplicity greater than `k`.
pub fn max_root_multiplicity(a: &Mat) -> Result<usize> {
    require_rational(a)?;
    let mut g = a.charpoly();
    let mut k = 0;
    while g.degree().unwrap_or(0) > 0 {
        g = g.gcd(&g.derivative());
        k += 1;
    }
    Ok(k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSpectrum {
    /// Distinct rational eigenvalues in increasing order, with algebraic multiplicity.
    pub eigenvalues: Vec<(Scalar, usize)>,
    /// The characteristic polynomial is a product of rational linear factors.
    pub splits: bool,
}

impl RationalSpectrum {
    pub fn max_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|(_, m)| *m).max().unwrap_or(0)
    }
}

pub fn rational_spectrum(a: &Mat) -> Result<RationalSpectrum> {
    require_rational(a)?;
    let chi = a.charpoly();
    let sqfree = squarefree_part(&chi);
    let mut eigenvalues = Vec::new();
    for root in rational_roots_squarefree(&sqfree) {
        let lin = UniPoly::linear(&root);
        let mut rest = chi.clone();
        let mut mult = 0;
        loop {
            let (q, r) = rest.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            rest = q;
            mult += 1;
        }
        eigenvalues.push((root, mult));
    }
    let total: usize = eigenvalues.iter().map(|(_, m)| m).sum();
    Ok(RationalSpectrum {
        splits: total == a.n(),
        eigenvalues,
    })
}

fn require_rational(a: &Mat) -> Result<()> {
    if a.field() != Field::Rational {
        return Err(Error::pre("spectral computations need the rationals"));
    }
    Ok(())
}

pub(crate) fn squarefree_part(f: &UniPoly) -> UniPoly {
    if f.degree().unwrap_or(0) == 0 {
        return f.monic();
    }
    let g = f.gcd(&f.derivative());
    f.div_rem(&g).0.monic()
}

/// Rational roots of a squarefree polynomial over Q, sorted.
///
/// With `D` the common denominator of the monic input, `D^d s(y/D)` is a monic
/// integer polynomial whose rational roots are integers. Those are isolated by
/// Sturm counts on half-integer endpoints, which can never be roots.
fn rational_roots_squarefree(s: &UniPoly) -> Vec<Scalar> {
    let Some(d) = s.degree() else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    let s = s.monic();
    let coeffs: Vec<BigRational> = s
        .coeffs()
        .iter()
        .map(|c| c.as_rational().unwrap().clone())
        .collect();
    let denom = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    // coefficient of y^i is c_i * D^(d-i)
    let int_coeffs: Vec<BigRational> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * BigRational::from_integer(num_traits::pow(denom.clone(), d - i)))
        .collect();
    debug_assert!(int_coeffs.iter().all(|c| c.is_integer()));
    let t = UniPoly::new(
        Field::Rational,
        int_coeffs.iter().cloned().map(Scalar::Rational).collect(),
    );
    let bound = int_coeffs
        .iter()
        .take(d)
        .map(|c| c.numer().abs())
        .max()
        .unwrap_or_else(BigInt::zero)
        + BigInt::one();
    let chain = sturm_chain(&t);
    let mut roots = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&chain, &half_below(&lo)) - sign_changes(&chain, &half_above(&hi));
        if count == 0 {
            continue;
        }
        if lo == hi {
            let y = Scalar::Rational(BigRational::from_integer(lo.clone()));
            if t.eval(&y).is_zero() {
                roots.push(BigRational::new(lo, denom.clone()));
            }
            continue;
        }
        let mid = (&lo + &hi).div_floor(&BigInt::from(2));
        stack.push((lo, mid.clone()));
        stack.push((mid + BigInt::one(), hi));
    }
    roots.sort();
    roots.into_iter().map(Scalar::Rational).collect()
}

fn half_below(k: &BigInt) -> Scalar {
    Scalar::Rational(BigRational::new(BigInt::from(2) * k - 1, BigInt::from(2)))
}

fn half_above(k: &BigInt) -> Scalar {
    Scalar::Rational(BigRational::new(BigInt::from(2) * k + 1, BigInt::from(2)))
}

fn sturm_chain(p: &UniPoly) -> Vec<UniPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let k = chain.len();
        let r = chain[k - 2].div_rem(&chain[k - 1]).1;
        chain.push(r.scale(&Field::Rational.int(-1)));
    }
    chain.pop();
    chain
}

fn sign_changes(chain: &[UniPoly], x: &Scalar) -> usize {
    let signs: Vec<bool> = chain
        .iter()
        .map(|p| p.eval(x))
        .filter(|v| !v.is_zero())
        .map(|v| v.is_negative())
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn diag(v: &[i64]) -> Mat {
        Mat::diag(Q, &v.iter().map(|&x| Q.int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn multiplicity_examples() {
        assert_eq!(max_root_multiplicity(&Mat::identity(Q, 3)).unwrap(), 3);
        assert_eq!(max_root_multiplicity(&diag(&[1, 1, 2])).unwrap(), 2);
        assert_eq!(max_root_multiplicity(&diag(&[1, -1])).unwrap(), 1);
        assert!(max_root_multiplicity(&Mat::identity(Field::Prime(5), 2)).is_err());
    }

    #[test]
    fn spectrum_examples() {
        let s = rational_spectrum(&diag(&[1, 2, 3])).unwrap();
        assert!(s.splits);
        assert_eq!(s.eigenvalues, vec![(Q.int(1), 1), (Q.int(2), 1), (Q.int(3), 1)]);

        let rot = Mat::from_i64(Q, &[&[0, 1], &[-1, 0]]);
        let s = rational_spectrum(&rot).unwrap();
        assert!(!s.splits);
        assert!(s.eigenvalues.is_empty());

        let swap = Mat::from_i64(Q, &[&[0, 1], &[1, 0]]);
        let s = rational_spectrum(&swap).unwrap();
        assert!(s.splits);
        assert_eq!(s.eigenvalues, vec![(Q.int(-1), 1), (Q.int(1), 1)]);
    }

    #[test]
    fn fractional_and_repeated_eigenvalues() {
        let half = Q.parse_scalar("1/2").unwrap();
        let third = Q.parse_scalar("-7/3").unwrap();
        let a = Mat::diag(Q, &[half.clone(), third.clone(), half.clone(), Q.int(0)]);
        // conjugate to hide the diagonal
        let p = Mat::from_i64(Q, &[&[1, 2, 0, 1], &[0, 1, 3, 0], &[1, 0, 1, 0], &[0, 0, 1, 1]]);
        let b = &(&p * &a) * &p.inverse().unwrap();
        let s = rational_spectrum(&b).unwrap();
        assert!(s.splits);
        assert_eq!(s.eigenvalues, vec![(third, 1), (Q.int(0), 1), (half, 2)]);
        assert_eq!(max_root_multiplicity(&b).unwrap(), 2);
    }

    #[test]
    fn partially_rational_spectrum() {
        // x^2 - 2 block plus eigenvalue 5
        let a = Mat::from_i64(Q, &[&[0, 2, 0], &[1, 0, 0], &[0, 0, 5]]);
        let s = rational_spectrum(&a).unwrap();
        assert!(!s.splits);
        assert_eq!(s.eigenvalues, vec![(Q.int(5), 1)]);
    }
}
