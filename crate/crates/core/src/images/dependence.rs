//! Local linear dependence through the Capelli polynomial: `f_1..f_s` are
//! locally dependent on `M_n` iff `c_s(f_1, ..., f_s; Y_1, ..., Y_{s-1})` is an
//! identity there.

use std::ops::ControlFlow;

use super::classify::{classify_on_mn, Confidence, ImageClass};
use super::exhaustive::{for_each_point, ENUMERATION_CAP};
use super::ring::{capelli_value, eval_compiled, Compiled, ModMat, Ring, SCREEN_PRIME};
use super::sampling::{derive_seed, ints_to_mats, ints_to_modmats, random_ints, trial_rng, STREAM_DEPENDENCE};
use super::{arity, evaluate, EvalPoint};
use crate::error::{Error, Result};
use crate::exactmat::{rank_of_vectors, Mat};
use crate::field::Field;
use crate::freealg::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dependence {
    Dependent { confidence: Confidence },
    Independent(Box<IndependenceWitness>),
}

impl Dependence {
    pub fn is_dependent(&self) -> bool {
        matches!(self, Dependence::Dependent { .. })
    }
}

/// A point where the Capelli value is nonzero, so the `s` values are linearly
/// independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceWitness {
    pub point: EvalPoint,
    pub ys: Vec<Mat>,
    pub values: Vec<Mat>,
    pub capelli_value: Mat,
}

impl IndependenceWitness {
    /// Re-evaluates everything and checks the rank of the values.
    pub fn check(&self, fs: &[Poly]) -> bool {
        let Ok(values) = fs.iter().map(|f| evaluate(f, &self.point)).collect::<Result<Vec<_>>>() else {
            return false;
        };
        if values != self.values || self.ys.len() + 1 != values.len() {
            return false;
        }
        let n = self.point.n();
        if self.ys.iter().any(|y| y.n() != n || y.field() != self.point.field()) {
            return false;
        }
        let c = capelli_value(&values, &self.ys);
        let flat: Vec<_> = values.iter().map(|v| v.entries().to_vec()).collect();
        c == self.capelli_value && !c.is_zero() && rank_of_vectors(&flat, n * n) == values.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerIndex {
    pub k: usize,
    pub dependence: Confidence,
    /// The consistency check on `f, ..., f^k`.
    pub independence: Dependence,
}

#[derive(Clone, Copy)]
enum Family<'a> {
    Polys(&'a [Poly]),
    /// `f^from, ..., f^to`.
    Powers(&'a Poly, u32, u32),
}

impl Family<'_> {
    fn field(&self) -> Field {
        match self {
            Family::Polys(fs) => fs[0].field(),
            Family::Powers(f, ..) => f.field(),
        }
    }

    fn arity(&self) -> usize {
        match self {
            Family::Polys(fs) => fs.iter().map(arity).max().unwrap_or(1),
            Family::Powers(f, ..) => arity(f),
        }
    }

    fn size(&self) -> usize {
        match self {
            Family::Polys(fs) => fs.len(),
            Family::Powers(_, from, to) => (to - from + 1) as usize,
        }
    }

    fn degree(&self) -> usize {
        match self {
            Family::Polys(fs) => fs.iter().filter_map(Poly::degree).max().unwrap_or(0),
            Family::Powers(f, _, to) => f.degree().unwrap_or(0) * *to as usize,
        }
    }

    fn polys(&self) -> Vec<&Poly> {
        match self {
            Family::Polys(fs) => fs.iter().collect(),
            Family::Powers(f, ..) => vec![*f],
        }
    }

    fn compile_exact(&self) -> Vec<Compiled<crate::field::Scalar>> {
        self.polys().into_iter().map(Compiled::exact).collect()
    }

    fn compile_mod(&self, p: u64) -> Option<Vec<Compiled<u64>>> {
        self.polys().into_iter().map(|f| Compiled::modular(f, p)).collect()
    }

    fn values<R: Ring>(&self, compiled: &[Compiled<R::Coeff>], args: &[R], one: &R) -> Vec<R> {
        match self {
            Family::Polys(_) => compiled.iter().map(|c| eval_compiled(c, args, one)).collect(),
            Family::Powers(_, from, to) => {
                let v = eval_compiled(&compiled[0], args, one);
                let mut power = one.clone();
                let mut out = Vec::new();
                for e in 0..=*to {
                    if e >= *from {
                        out.push(power.clone());
                    }
                    if e < *to {
                        power = power.mul(&v);
                    }
                }
                out
            }
        }
    }
}

pub fn capelli_dependence_test(fs: &[Poly], n: usize, budget: usize, seed: u64) -> Result<Dependence> {
    let Some(first) = fs.first() else {
        return Err(Error::pre("need at least one polynomial"));
    };
    for f in &fs[1..] {
        if f.field() != first.field() {
            return Err(Error::FieldMismatch {
                left: first.field(),
                right: f.field(),
            });
        }
    }
    dependence_search(Family::Polys(fs), n, budget, seed)
}

fn dependence_search(fam: Family<'_>, n: usize, budget: usize, seed: u64) -> Result<Dependence> {
    if n == 0 {
        return Err(Error::pre("matrix size must be at least 1"));
    }
    let s = fam.size();
    if s > n * n {
        return Ok(Dependence::Dependent {
            confidence: Confidence::Proven,
        });
    }
    let field = fam.field();
    let m = fam.arity();
    let count = m + s - 1;
    let exact = fam.compile_exact();
    let one = Mat::identity(field, n);

    let witness_at = |mats: Vec<Mat>| -> Result<Dependence> {
        let mut mats = mats;
        let ys = mats.split_off(m);
        let values = fam.values(&exact, &mats, &one);
        let capelli_value = capelli_value(&values, &ys);
        debug_assert!(!capelli_value.is_zero());
        Ok(Dependence::Independent(Box::new(IndependenceWitness {
            point: EvalPoint::new(mats)?,
            ys,
            values,
            capelli_value,
        })))
    };

    if let Field::Prime(p) = field {
        let size = (p as u128).checked_pow((n * n * count) as u32);
        if size.is_some_and(|sz| sz <= ENUMERATION_CAP) {
            let compiled = fam.compile_mod(p).expect("coefficients already live in F_p");
            let one_mod = ModMat::identity(n, p);
            let mut hit = None;
            for_each_point(n, p, count, |args| {
                let values = fam.values(&compiled, &args[..m], &one_mod);
                if !capelli_value(&values, &args[m..]).is_zero() {
                    hit = Some(args.to_vec());
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            })?;
            return match hit {
                Some(args) => witness_at(args.iter().map(ModMat::to_mat).collect()),
                None => Ok(Dependence::Dependent {
                    confidence: Confidence::Proven,
                }),
            };
        }
    }

    let modulus = match field {
        Field::Rational => SCREEN_PRIME,
        Field::Prime(p) => p,
    };
    let screen = fam.compile_mod(modulus);
    let one_mod = ModMat::identity(n, modulus);
    let range = (2 * (fam.degree() + s) * n * n).max(1 << 20) as i64;
    for trial in 0..budget {
        let ints = random_ints(&mut trial_rng(seed, STREAM_DEPENDENCE, trial), field, count * n * n, range);
        let nonzero = match &screen {
            Some(c) => {
                let args = ints_to_modmats(modulus, n, &ints);
                let values = fam.values(c, &args[..m], &one_mod);
                !capelli_value(&values, &args[m..]).is_zero()
            }
            None => {
                let args = ints_to_mats(field, n, &ints);
                let values = fam.values(&exact, &args[..m], &one);
                !capelli_value(&values, &args[m..]).is_zero()
            }
        };
        if nonzero {
            return witness_at(ints_to_mats(field, n, &ints));
        }
    }
    Ok(Dependence::Dependent {
        confidence: Confidence::Randomized {
            seed,
            trials: budget,
        },
    })
}

/// Least `k` with `1, f, ..., f^k` locally dependent on `M_n`.
pub fn power_dependence_index(f: &Poly, n: usize, budget: usize, seed: u64) -> Result<PowerIndex> {
    let class = classify_on_mn(f, n, budget, seed)?;
    if class.class == ImageClass::Identity {
        return Err(Error::Identity { n });
    }
    let mut found = None;
    for k in 1..n {
        let dep = dependence_search(Family::Powers(f, 0, k as u32), n, budget, derive_seed(seed, k as u64))?;
        if let Dependence::Dependent { confidence } = dep {
            found = Some((k, confidence));
            break;
        }
    }
    // Cayley-Hamilton settles k = n.
    let (k, dependence) = found.unwrap_or((n, Confidence::Proven));
    let independence = dependence_search(
        Family::Powers(f, 1, k as u32),
        n,
        budget,
        derive_seed(seed, (n + k) as u64),
    )?;
    Ok(PowerIndex {
        k,
        dependence,
        independence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_poly, parse_poly_in};

    fn polys(src: &[&str]) -> Vec<Poly> {
        src.iter().map(|s| parse_poly(s).unwrap()).collect()
    }

    #[test]
    fn capelli_examples_on_m2() {
        let fs = polys(&["1", "X1", "X1^2"]);
        assert!(capelli_dependence_test(&fs, 2, 200, 3).unwrap().is_dependent());

        for src in [&["1", "X1"][..], &["X1", "X1^2"][..]] {
            let fs = polys(src);
            match capelli_dependence_test(&fs, 2, 50, 3).unwrap() {
                Dependence::Independent(w) => assert!(w.check(&fs)),
                other => panic!("expected independence, got {other:?}"),
            }
        }
    }

    #[test]
    fn too_many_polys_are_dependent() {
        let fs = polys(&["X1", "X2", "X3", "X4", "X5"]);
        let d = capelli_dependence_test(&fs, 2, 0, 0).unwrap();
        assert_eq!(
            d,
            Dependence::Dependent {
                confidence: Confidence::Proven
            }
        );
    }

    #[test]
    fn exhaustive_over_f2() {
        let f2 = Field::Prime(2);
        let fs: Vec<Poly> = ["1", "X1", "X1^2"].iter().map(|s| parse_poly_in(s, f2).unwrap()).collect();
        let d = capelli_dependence_test(&fs, 2, 0, 0).unwrap();
        assert_eq!(
            d,
            Dependence::Dependent {
                confidence: Confidence::Proven
            }
        );
    }

    #[test]
    fn power_index_examples() {
        let x = parse_poly("X1").unwrap();
        let r = power_dependence_index(&x, 2, 100, 9).unwrap();
        assert_eq!(r.k, 2);
        assert!(!r.independence.is_dependent());
        assert_eq!(power_dependence_index(&x, 3, 100, 9).unwrap().k, 3);

        let central = parse_poly("[X1,X2]^2").unwrap();
        let r = power_dependence_index(&central, 2, 100, 9).unwrap();
        assert_eq!(r.k, 1);
        assert!(!r.independence.is_dependent());

        let comm = parse_poly("[X1,X2]").unwrap();
        assert!(matches!(
            power_dependence_index(&comm, 1, 10, 0),
            Err(Error::Identity { n: 1 })
        ));
    }
}
