//! Noncommutative polynomials over an exact field.
//!
//! A [`Poly`] is a finitely supported map from [`Word`]s in the variables
//! `X1, X2, ...` to nonzero [`Scalar`]s. Every constructor goes through the same
//! canonicalization, so structural equality is polynomial equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

/// A monomial: a sequence of variable indices (1-based). The empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u32>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Panics on index 0; variables are numbered from 1.
    pub fn new(letters: Vec<u32>) -> Self {
        assert!(letters.iter().all(|&l| l >= 1), "variable indices start at 1");
        Word(letters)
    }

    pub fn var(i: u32) -> Self {
        Word::new(vec![i])
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    fn shifted(&self, by: u32) -> Word {
        Word(self.0.iter().map(|l| l + by).collect())
    }

    /// Lexicographically least rotation.
    pub fn least_rotation(&self) -> Word {
        let n = self.0.len();
        if n < 2 {
            return self.clone();
        }
        (0..n)
            .map(|k| {
                let mut v = self.0[k..].to_vec();
                v.extend_from_slice(&self.0[..k]);
                v
            })
            .min()
            .map(Word)
            .unwrap()
    }

    pub fn max_var(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

/// Degree first, then lexicographic on indices.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A noncommutative polynomial in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    terms: BTreeMap<Word, Scalar>,
}

impl Poly {
    pub fn zero(field: Field) -> Self {
        Poly {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::monomial(Word::empty(), c)
    }

    pub fn one(field: Field) -> Self {
        Poly::constant(field.one())
    }

    pub fn var(field: Field, i: u32) -> Self {
        Poly::monomial(Word::var(i), field.one())
    }

    pub fn monomial(w: Word, c: Scalar) -> Self {
        let mut p = Poly::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(w, c);
        }
        p
    }

    /// Merges like terms and drops zeros. All scalars must live in `field`.
    pub fn normalize(field: Field, raw: impl IntoIterator<Item = (Word, Scalar)>) -> Result<Self> {
        let mut p = Poly::zero(field);
        for (w, c) in raw {
            if c.field() != field {
                return Err(Error::FieldMismatch {
                    left: field,
                    right: c.field(),
                });
            }
            p.add_term(w, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in degree-then-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Word) -> Option<&Scalar> {
        self.terms.get(w)
    }

    /// Largest variable index that occurs; 0 for constants.
    pub fn nvars(&self) -> usize {
        self.terms.keys().map(Word::max_var).max().unwrap_or(0) as usize
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::degree).max()
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Word::empty())
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Every variable `X1..X_nvars` occurs exactly once in every monomial.
    pub fn is_multilinear(&self) -> bool {
        let m = self.nvars();
        !self.is_zero()
            && self.terms.keys().all(|w| {
                let mut seen = vec![false; m + 1];
                w.degree() == m
                    && w.letters().iter().all(|&l| {
                        let fresh = !seen[l as usize];
                        seen[l as usize] = true;
                        fresh
                    })
            })
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        }
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let mut out = Poly::zero(self.field);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        assert_eq!(c.field(), self.field, "scalar field mismatch");
        let mut out = Poly::zero(self.field);
        for (w, a) in &self.terms {
            out.add_term(w.clone(), a * c);
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            field: self.field,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Renames every variable `Xi` to `X(i+by)`.
    pub fn shift_vars(&self, by: u32) -> Poly {
        Poly {
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.shifted(by), c.clone()))
                .collect(),
        }
    }

    /// Replaces `Xi` by `subs[i-1]`.
    pub fn substitute(&self, subs: &[Poly]) -> Result<Poly> {
        if subs.len() < self.nvars() {
            return Err(Error::Arity {
                expected: self.nvars(),
                found: subs.len(),
            });
        }
        let mut out = Poly::zero(self.field);
        for (w, c) in &self.terms {
            let mut term = Poly::constant(c.clone());
            for &l in w.letters() {
                term = term.try_mul(&subs[l as usize - 1])?;
            }
            out = out.try_add(&term)?;
        }
        Ok(out)
    }
}

impl std::ops::Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomial field mismatch")
    }
}

impl std::ops::Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomial field mismatch")
    }
}

impl std::ops::Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomial field mismatch")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_poly(self))
    }
}

/// `fg - gf`.
pub fn commutator_of(f: &Poly, g: &Poly) -> Result<Poly> {
    f.try_mul(g)?.try_sub(&g.try_mul(f)?)
}

/// `[f(X1..Xm), f(X(m+1)..X(2m))]` with `m = nvars(f)`.
pub fn hat_of(f: &Poly) -> Poly {
    let second = f.shift_vars(f.nvars() as u32);
    commutator_of(f, &second).expect("same field")
}

/// The Capelli polynomial `c_s`: alternating slots `X1..Xs`, separator slots `X(s+1)..X(2s-1)`.
pub fn capelli(field: Field, s: usize) -> Poly {
    assert!(s >= 1, "Capelli polynomial needs s >= 1");
    let mut raw = Vec::new();
    for perm in permutations(s) {
        let sign = if inversions(&perm).is_multiple_of(2) {
            field.one()
        } else {
            -field.one()
        };
        let mut letters = Vec::with_capacity(2 * s - 1);
        for (pos, &i) in perm.iter().enumerate() {
            if pos > 0 {
                letters.push((s + pos) as u32);
            }
            letters.push(i as u32 + 1);
        }
        raw.push((Word::new(letters), sign));
    }
    Poly::normalize(field, raw).expect("single field")
}

/// `ad_f^k(X(m+1))` with `m = nvars(f)`.
pub fn ad_power(f: &Poly, k: u32) -> Poly {
    let mut g = Poly::var(f.field(), f.nvars() as u32 + 1);
    for _ in 0..k {
        g = commutator_of(f, &g).expect("same field");
    }
    g
}

/// Canonical representative modulo the span of commutators: each word becomes its
/// least rotation.
pub fn cyclic_normal_form(f: &Poly) -> Poly {
    Poly::normalize(
        f.field(),
        f.terms().map(|(w, c)| (w.least_rotation(), c.clone())),
    )
    .expect("single field")
}

pub(crate) fn permutations(s: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                go(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; s], &mut out);
    out
}

pub(crate) fn inversions(perm: &[usize]) -> usize {
    let mut c = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                c += 1;
            }
        }
    }
    c
}
