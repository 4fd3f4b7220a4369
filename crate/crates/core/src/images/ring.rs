//! Evaluation machinery shared by the exact and the modular paths.
//!
//! Randomized searches over the rationals first evaluate at the reduction of an
//! integer point modulo a 61-bit prime. Reduction is a ring homomorphism on
//! `p`-integral values, so a nonzero (or non-scalar, or nonsingular) residue
//! proves the same for the exact value; the exact value is then recomputed for
//! the witness.

use crate::exactmat::Mat;
use crate::field::{add_mod, inv_mod, mul_mod, Field, Scalar};
use crate::freealg::Poly;

/// 2^61 - 1.
pub(crate) const SCREEN_PRIME: u64 = (1 << 61) - 1;

pub(crate) trait Ring: Clone {
    type Coeff: Clone;
    fn mul(&self, rhs: &Self) -> Self;
    fn add_scaled(&mut self, c: &Self::Coeff, rhs: &Self);
    /// Adds `c·I`.
    fn add_scalar(&mut self, c: &Self::Coeff);
    fn zero_like(&self) -> Self;
    fn coeff_int(&self, v: i64) -> Self::Coeff;
}

impl Ring for Mat {
    type Coeff = Scalar;
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn add_scaled(&mut self, c: &Scalar, rhs: &Self) {
        *self = &*self + &rhs.scale(c);
    }
    fn add_scalar(&mut self, c: &Scalar) {
        *self = &*self + &Mat::scalar(self.n(), c.clone());
    }
    fn zero_like(&self) -> Self {
        Mat::zeros(self.field(), self.n())
    }
    fn coeff_int(&self, v: i64) -> Scalar {
        self.field().int(v)
    }
}

/// A square matrix over `F_p` with machine-word entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct ModMat {
    pub n: usize,
    pub p: u64,
    pub data: Vec<u64>,
}

impl ModMat {
    pub fn zeros(n: usize, p: u64) -> Self {
        ModMat {
            n,
            p,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize, p: u64) -> Self {
        let mut m = ModMat::zeros(n, p);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// `None` if some entry's denominator vanishes mod `p`.
    #[cfg(test)]
    pub fn reduce(a: &Mat, p: u64) -> Option<Self> {
        let data = a
            .entries()
            .iter()
            .map(|c| c.reduce_mod(p))
            .collect::<Option<Vec<_>>>()?;
        Some(ModMat { n: a.n(), p, data })
    }

    pub fn to_mat(&self) -> Mat {
        let field = Field::Prime(self.p);
        let rows = self
            .data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.iter().map(|&v| field.int(v as i64)).collect())
            .collect();
        Mat::from_rows(field, rows).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let v = self.data[i * n + j];
                if i == j {
                    v == self.data[0]
                } else {
                    v == 0
                }
            })
        })
    }

    pub fn trace(&self) -> u64 {
        (0..self.n).fold(0, |acc, i| add_mod(acc, self.data[i * self.n + i], self.p))
    }

    pub fn det(&self) -> u64 {
        let n = self.n;
        let p = self.p;
        let mut a = self.data.clone();
        let mut det = 1 % p;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return 0;
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                }
                det = (p - det) % p;
            }
            let d = a[col * n + col];
            det = mul_mod(det, d, p);
            let inv = inv_mod(d, p);
            for r in col + 1..n {
                let f = mul_mod(a[r * n + col], inv, p);
                if f == 0 {
                    continue;
                }
                for c in col..n {
                    let sub = mul_mod(f, a[col * n + c], p);
                    a[r * n + c] = add_mod(a[r * n + c], p - sub, p);
                }
            }
        }
        det
    }
}

impl Ring for ModMat {
    type Coeff = u64;
    fn mul(&self, rhs: &Self) -> Self {
        let n = self.n;
        let p = self.p as u128;
        let mut out = ModMat::zeros(n, self.p);
        for i in 0..n {
            for j in 0..n {
                let mut acc: u128 = 0;
                for k in 0..n {
                    acc = (acc + self.data[i * n + k] as u128 * rhs.data[k * n + j] as u128) % p;
                }
                out.data[i * n + j] = acc as u64;
            }
        }
        out
    }
    fn add_scaled(&mut self, c: &u64, rhs: &Self) {
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a = add_mod(*a, mul_mod(*c, *b, self.p), self.p);
        }
    }
    fn add_scalar(&mut self, c: &u64) {
        for i in 0..self.n {
            let k = i * self.n + i;
            self.data[k] = add_mod(self.data[k], *c, self.p);
        }
    }
    fn zero_like(&self) -> Self {
        ModMat::zeros(self.n, self.p)
    }
    fn coeff_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
}

/// Terms sorted lexicographically so that consecutive words share prefixes.
#[derive(Clone, Debug)]
pub(crate) struct Compiled<C> {
    terms: Vec<(Vec<u32>, C)>,
}

impl Compiled<Scalar> {
    pub fn exact(f: &Poly) -> Self {
        let mut terms: Vec<(Vec<u32>, Scalar)> = f
            .terms()
            .map(|(w, c)| (w.letters().to_vec(), c.clone()))
            .collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Compiled { terms }
    }
}

impl Compiled<u64> {
    /// `None` when a coefficient is not `p`-integral, or the fields disagree.
    pub fn modular(f: &Poly, p: u64) -> Option<Self> {
        let mut terms = Vec::with_capacity(f.num_terms());
        for (w, c) in f.terms() {
            terms.push((w.letters().to_vec(), c.reduce_mod(p)?));
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Some(Compiled { terms })
    }
}

/// Evaluates with a stack of prefix products; `one` fixes the dimension.
pub(crate) fn eval_compiled<R: Ring>(f: &Compiled<R::Coeff>, args: &[R], one: &R) -> R {
    let mut acc = one.zero_like();
    let mut stack: Vec<R> = Vec::new();
    let mut prev: &[u32] = &[];
    for (word, c) in &f.terms {
        if word.is_empty() {
            acc.add_scalar(c);
            continue;
        }
        let common = prev.iter().zip(word).take_while(|(a, b)| a == b).count();
        stack.truncate(common);
        for &l in &word[stack.len()..] {
            let x = &args[l as usize - 1];
            let next = match stack.last() {
                Some(top) => top.mul(x),
                None => x.clone(),
            };
            stack.push(next);
        }
        acc.add_scaled(c, stack.last().unwrap());
        prev = word;
    }
    acc
}

/// `c_s(b_1..b_s; y_1..y_{s-1})` by a subset recursion, `s·2^s` products.
pub(crate) fn capelli_value<R: Ring>(bs: &[R], ys: &[R]) -> R {
    let s = bs.len();
    assert!(s >= 1 && ys.len() + 1 == s);
    assert!(s <= 20, "Capelli evaluation is exponential in s");
    let full = (1usize << s) - 1;
    // value[S] = sum over orderings of S (sign relative to sorted order) of
    // b_{π1} y_{s-|S|+1} b_{π2} ... b_{π|S|}
    let mut value: Vec<Option<R>> = vec![None; 1 << s];
    for mask in 1..=full {
        let size = mask.count_ones() as usize;
        let mut acc: Option<R> = None;
        let mut below = 0;
        for i in 0..s {
            if mask & (1 << i) == 0 {
                continue;
            }
            let rest = mask & !(1 << i);
            let term = if rest == 0 {
                bs[i].clone()
            } else {
                let y = &ys[s - size];
                bs[i].mul(y).mul(value[rest].as_ref().unwrap())
            };
            let sign = if below % 2 == 0 { 1 } else { -1 };
            below += 1;
            let coeff = term.coeff_int(sign);
            match acc.as_mut() {
                Some(a) => a.add_scaled(&coeff, &term),
                None => {
                    let mut z = term.zero_like();
                    z.add_scaled(&coeff, &term);
                    acc = Some(z);
                }
            }
        }
        value[mask] = acc;
    }
    value[full].take().unwrap()
}
