//! Similarity transforms into normal forms, all with exact inverses attached.

use super::{extend_independent, rank_of_vectors, standard_basis, Mat};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// An invertible matrix together with its exact inverse.
///
/// The normal-form routines below return `c` with `c.p_inv · a · c.p` in
/// normal form. [`Mat::conjugate`] applies the opposite direction, `p · a · p_inv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjugator {
    pub p: Mat,
    pub p_inv: Mat,
}

impl Conjugator {
    pub fn identity(field: Field, n: usize) -> Self {
        let i = Mat::identity(field, n);
        Conjugator {
            p: i.clone(),
            p_inv: i,
        }
    }

    /// `None` when `p` is singular.
    pub fn new(p: Mat) -> Option<Self> {
        let p_inv = p.inverse()?;
        Some(Conjugator { p, p_inv })
    }

    pub fn inverse(&self) -> Conjugator {
        Conjugator {
            p: self.p_inv.clone(),
            p_inv: self.p.clone(),
        }
    }

    /// Conjugating by the result equals conjugating by `inner`, then by `self`.
    pub fn compose(&self, inner: &Conjugator) -> Conjugator {
        Conjugator {
            p: &self.p * &inner.p,
            p_inv: &inner.p_inv * &self.p_inv,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.p.check_compatible(&self.p_inv).is_ok() && (&self.p * &self.p_inv).is_identity()
    }

    /// `p_inv · a · p`.
    pub fn pull_back(&self, a: &Mat) -> Mat {
        &(&self.p_inv * a) * &self.p
    }
}

fn is_nilpotent(u: &Mat) -> bool {
    u.pow(u.n() as u32).is_zero()
}

/// A basis in which `u` is in nilpotent Jordan form: ones on some superdiagonal
/// positions, zeros elsewhere.
pub fn nilpotent_jordan_basis(u: &Mat) -> Result<Conjugator> {
    if !is_nilpotent(u) {
        return Err(Error::pre("matrix is not nilpotent"));
    }
    let field = u.field();
    let n = u.n();
    if u.is_zero() {
        return Ok(Conjugator::identity(field, n));
    }
    // kernels[j] = basis of ker u^j
    let mut kernels: Vec<Vec<Vec<Scalar>>> = vec![Vec::new()];
    let mut power = Mat::identity(field, n);
    while kernels.last().unwrap().len() < n {
        power = &power * u;
        kernels.push(power.kernel());
    }
    let index = kernels.len() - 1;

    // Each chain is stored top first: v, uv, ..., u^(h-1) v.
    let mut chains: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for level in (1..=index).rev() {
        let mut span = kernels[level - 1].clone();
        for chain in &chains {
            span.push(chain[chain.len() - level].clone());
        }
        for top in extend_independent(&span, kernels[level].iter().cloned(), n) {
            let mut chain = vec![top];
            for _ in 1..level {
                let next = u.mul_vec(chain.last().unwrap());
                chain.push(next);
            }
            chains.push(chain);
        }
    }
    let basis: Vec<Vec<Scalar>> = chains
        .into_iter()
        .flat_map(|c| c.into_iter().rev())
        .collect();
    debug_assert_eq!(basis.len(), n);
    Ok(Conjugator::new(Mat::from_columns(field, &basis)).expect("Jordan chains form a basis"))
}

/// A conjugator taking a traceless matrix to one with zero diagonal.
pub fn zero_diagonal_conjugator(a: &Mat) -> Result<Conjugator> {
    if !a.trace().is_zero() {
        return Err(Error::pre("matrix has nonzero trace"));
    }
    let p = zero_diagonal_basis(a)?;
    Ok(Conjugator::new(p).expect("basis change is invertible"))
}

fn zero_diagonal_basis(a: &Mat) -> Result<Mat> {
    let field = a.field();
    let n = a.n();
    if (0..n).all(|i| a.get(i, i).is_zero()) {
        return Ok(Mat::identity(field, n));
    }
    if a.as_scalar().is_some() {
        return Err(Error::FieldTooSmall(format!(
            "nonzero scalar matrix of size {n} is traceless in characteristic {}",
            field.characteristic()
        )));
    }
    let unit = |i: usize| {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        v
    };
    let moved = (0..n).find(|&i| (0..n).any(|k| k != i && !a.get(k, i).is_zero()));
    let v = match moved {
        Some(i) => unit(i),
        None => {
            // diagonal, not scalar
            let j = (1..n).find(|&j| a.get(j, j) != a.get(0, 0)).unwrap();
            let mut v = unit(0);
            v[j] = field.one();
            v
        }
    };
    let av = a.mul_vec(&v);
    let mut basis = vec![v, av];
    let rest = extend_independent(&basis, standard_basis(field, n), n);
    basis.extend(rest);
    let p = Mat::from_columns(field, &basis);
    let b = &(&p.inverse().unwrap() * a) * &p;
    debug_assert!(b.get(0, 0).is_zero());
    let q = zero_diagonal_basis(&trailing_block(&b, 1))?;
    Ok(&p * &embed_trailing(&q, 1))
}

fn trailing_block(a: &Mat, skip: usize) -> Mat {
    let m = a.n() - skip;
    let rows = (0..m)
        .map(|i| (0..m).map(|j| a.get(i + skip, j + skip).clone()).collect())
        .collect();
    Mat::from_rows(a.field(), rows).unwrap()
}

/// `diag(I_skip, q)`.
fn embed_trailing(q: &Mat, skip: usize) -> Mat {
    let n = q.n() + skip;
    let mut m = Mat::identity(q.field(), n);
    for i in 0..q.n() {
        for j in 0..q.n() {
            m.set(i + skip, j + skip, q.get(i, j).clone());
        }
    }
    m
}

/// Basis `(s w_1, w_1, ..., s w_r, w_r, k_1, ...)` putting a square-zero matrix
/// into the form `⊕ [[0,1],[0,0]] ⊕ 0`.
fn square_zero_basis(s: &Mat) -> Mat {
    let field = s.field();
    let n = s.n();
    let mut images: Vec<Vec<Scalar>> = Vec::new();
    let mut basis = Vec::new();
    for j in 0..n {
        let col = s.column(j);
        images.push(col.clone());
        if rank_of_vectors(&images, n) == images.len() {
            let mut w = vec![field.zero(); n];
            w[j] = field.one();
            basis.push(col);
            basis.push(w);
        } else {
            images.pop();
        }
    }
    let rest = extend_independent(&images, s.kernel(), n);
    basis.extend(rest);
    Mat::from_columns(field, &basis)
}

/// `c` with `c.p_inv · s · c.p = t` for square-zero `s`, `t` of equal rank.
pub fn square_zero_conjugator(s: &Mat, t: &Mat) -> Result<Conjugator> {
    s.check_compatible(t)?;
    if !(s * s).is_zero() || !(t * t).is_zero() {
        return Err(Error::pre("matrices must square to zero"));
    }
    if s.rank() != t.rank() {
        return Err(Error::pre(format!(
            "square-zero matrices of ranks {} and {} are not similar",
            s.rank(),
            t.rank()
        )));
    }
    let ps = Conjugator::new(square_zero_basis(s)).unwrap();
    let pt = Conjugator::new(square_zero_basis(t)).unwrap();
    Ok(ps.compose(&pt.inverse()))
}

/// Triangularizes `t` over its own field given its full spectrum in the desired
/// block order: `p_inv · t · p` is upper triangular with diagonal
/// `λ_1 (m_1 times), λ_2 (m_2 times), ...`, and block diagonal across eigenvalues.
pub fn triangularize_split(t: &Mat, spectrum: &[(Scalar, usize)]) -> Result<Conjugator> {
    let n = t.n();
    let field = t.field();
    if spectrum.iter().map(|(_, m)| m).sum::<usize>() != n {
        return Err(Error::pre("spectrum does not account for every eigenvalue"));
    }
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for (lambda, mult) in spectrum {
        let shifted = t - &Mat::scalar(n, lambda.clone());
        let mut block: Vec<Vec<Scalar>> = Vec::new();
        let mut power = Mat::identity(field, n);
        for _ in 0..*mult {
            power = &power * &shifted;
            let added = extend_independent(&block, power.kernel(), n);
            block.extend(added);
        }
        if block.len() != *mult {
            return Err(Error::pre(format!(
                "eigenvalue {lambda} has generalized eigenspace of dimension {} instead of {mult}",
                block.len()
            )));
        }
        basis.extend(block);
    }
    Conjugator::new(Mat::from_columns(field, &basis))
        .ok_or_else(|| Error::pre("generalized eigenvectors are dependent"))
}
