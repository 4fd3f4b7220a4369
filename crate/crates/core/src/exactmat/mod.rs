//! Dense square matrices over an exact field.

mod normal_forms;
mod spectrum;
mod univariate;

pub use normal_forms::{
    nilpotent_jordan_basis, square_zero_conjugator, triangularize_split, zero_diagonal_conjugator,
    Conjugator,
};
pub use spectrum::{max_root_multiplicity, rational_spectrum, RationalSpectrum};
pub use univariate::UniPoly;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    field: Field,
    n: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: Field, n: usize) -> Self {
        Mat {
            field,
            n,
            data: vec![field.zero(); n * n],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Mat::scalar(n, field.one())
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        let field = c.field();
        let mut m = Mat::zeros(field, n);
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    /// Matrix unit `e_ij` (0-based).
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zeros(field, n);
        m.data[i * n + j] = field.one();
        m
    }

    pub fn diag(field: Field, entries: &[Scalar]) -> Self {
        let n = entries.len();
        let mut m = Mat::zeros(field, n);
        for (i, c) in entries.iter().enumerate() {
            assert_eq!(c.field(), field, "scalar field mismatch");
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for c in row {
                if c.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: c.field(),
                    });
                }
                data.push(c);
            }
        }
        Ok(Mat { field, n, data })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let n = rows.len();
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), n, "matrix must be square");
                r.iter().map(|&v| field.int(v)).collect()
            })
            .collect();
        Mat::from_rows(field, rows).expect("square integer matrix")
    }

    /// Builds the matrix whose columns are `cols`.
    pub fn from_columns(field: Field, cols: &[Vec<Scalar>]) -> Self {
        let n = cols.len();
        let mut m = Mat::zeros(field, n);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), n);
            for (i, c) in col.iter().enumerate() {
                m.data[i * n + j] = c.clone();
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Scalar) {
        assert_eq!(c.field(), self.field, "scalar field mismatch");
        self.data[i * self.n + j] = c;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.data.chunks(self.n.max(1)).take(self.n)
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.field, self.n)
    }

    /// `Some(c)` when the matrix equals `c·I`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        if self.n == 0 {
            return Some(self.field.zero());
        }
        let c = self.get(0, 0).clone();
        (*self == Mat::scalar(self.n, c.clone())).then_some(c)
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn transpose(&self) -> Mat {
        let mut m = Mat::zeros(self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.data[j * self.n + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat {
            field: self.field,
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Mat {
        let mut acc = Mat::identity(self.field, self.n);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Mat) -> Mat {
        &(self * other) - &(other * self)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.n)
            .map(|i| {
                (0..self.n).fold(self.field.zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect()
    }

    /// Checks that `other` has the same size and field.
    pub fn check_compatible(&self, other: &Mat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        Echelon::of_rows(self.rows().map(<[Scalar]>::to_vec).collect(), self.n).pivots.len()
    }

    pub fn det(&self) -> Scalar {
        let mut a: Vec<Vec<Scalar>> = self.rows().map(<[Scalar]>::to_vec).collect();
        let n = self.n;
        let mut det = self.field.one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return self.field.zero();
            };
            if p != col {
                a.swap(p, col);
                det = -det;
            }
            det = &det * &a[col][col];
            let inv = a[col][col].inv().unwrap();
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] * &inv;
                for c in col..n {
                    let v = &a[r][c] - &(&factor * &a[col][c]);
                    a[r][c] = v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Mat> {
        let n = self.n;
        let rows: Vec<Vec<Scalar>> = self
            .rows()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.to_vec();
                row.extend((0..n).map(|j| {
                    if i == j {
                        self.field.one()
                    } else {
                        self.field.zero()
                    }
                }));
                row
            })
            .collect();
        let e = Echelon::of_rows(rows, 2 * n);
        if e.pivots.len() < n || e.pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut inv = Mat::zeros(self.field, n);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = e.rows[i][n + j].clone();
            }
        }
        Some(inv)
    }

    /// A basis of the null space, as column vectors.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let n = self.n;
        let e = Echelon::of_rows(self.rows().map(<[Scalar]>::to_vec).collect(), n);
        let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); n];
                v[f] = self.field.one();
                for (r, &p) in e.pivots.iter().enumerate() {
                    v[p] = -&e.rows[r][f];
                }
                v
            })
            .collect()
    }

    /// Characteristic polynomial `det(xI - a)`, via reduction to Hessenberg form.
    pub fn charpoly(&self) -> UniPoly {
        univariate::charpoly_hessenberg(self)
    }

    /// Entry-wise conjugation `p · self · p_inv`.
    pub fn conjugate(&self, c: &Conjugator) -> Mat {
        &(&c.p * self) * &c.p_inv
    }
}

/// Reduced row echelon form over a field.
pub(crate) struct Echelon {
    pub rows: Vec<Vec<Scalar>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn of_rows(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let inv = rows[r][col].inv().unwrap();
            for c in col..ncols {
                let v = &rows[r][c] * &inv;
                rows[r][c] = v;
            }
            for i in 0..rows.len() {
                if i == r || rows[i][col].is_zero() {
                    continue;
                }
                let factor = rows[i][col].clone();
                for c in col..ncols {
                    let v = &rows[i][c] - &(&factor * &rows[r][c]);
                    rows[i][c] = v;
                }
            }
            pivots.push(col);
            r += 1;
        }
        Echelon { rows, pivots }
    }
}

/// Rank of a list of vectors of length `len`.
pub(crate) fn rank_of_vectors(vectors: &[Vec<Scalar>], len: usize) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Echelon::of_rows(vectors.to_vec(), len).pivots.len()
}

/// Extends `start` greedily by members of `candidates` to an independent set.
pub(crate) fn extend_independent(
    start: &[Vec<Scalar>],
    candidates: impl IntoIterator<Item = Vec<Scalar>>,
    len: usize,
) -> Vec<Vec<Scalar>> {
    let mut set = start.to_vec();
    let mut rank = rank_of_vectors(&set, len);
    for v in candidates {
        set.push(v);
        let r = rank_of_vectors(&set, len);
        if r > rank {
            rank = r;
        } else {
            set.pop();
        }
    }
    set.split_off(start.len())
}

pub(crate) fn standard_basis(field: Field, n: usize) -> impl Iterator<Item = Vec<Scalar>> {
    (0..n).map(move |i| {
        let mut v = vec![field.zero(); n];
        v[i] = field.one();
        v
    })
}

impl<'a> Add<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        self.check_compatible(rhs).expect("incompatible matrices");
        Mat {
            field: self.field,
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.check_compatible(rhs).expect("incompatible matrices");
        Mat {
            field: self.field,
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a Mat> for &'a Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.check_compatible(rhs).expect("incompatible matrices");
        let n = self.n;
        let mut out = Mat::zeros(self.field, n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &rhs.data[k * n + j];
                    if !b.is_zero() {
                        let v = &out.data[i * n + j] + &(a * b);
                        out.data[i * n + j] = v;
                    }
                }
            }
        }
        out
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat {
            field: self.field,
            n: self.n,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}
