use std::ops::ControlFlow;

use super::exhaustive::{for_each_point, ENUMERATION_CAP};
use super::ring::{eval_compiled, Compiled, ModMat, SCREEN_PRIME};
use super::sampling::{ints_to_mats, ints_to_modmats, random_ints, trial_rng, STREAM_CLASSIFY};
use super::{arity, EvalPoint, ImageWitness};
use crate::error::{Error, Result};
use crate::exactmat::Mat;
use crate::field::{Field, Scalar};
use crate::freealg::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ImageClass {
    /// `f(M_n) = {0}`.
    Identity,
    /// `f(M_n)` consists of scalars and is not `{0}`.
    Central,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Confidence {
    Proven,
    Randomized { seed: u64, trials: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub class: ImageClass,
    pub confidence: Confidence,
    /// A non-scalar value for `Neither`, a nonzero scalar value for `Central`.
    pub witness: Option<ImageWitness>,
}

/// Multilinear polynomials with at most this many matrix-unit tuples are
/// classified exhaustively.
pub const UNIT_TUPLE_CAP: u128 = 1 << 16;

pub fn classify_on_mn(f: &Poly, n: usize, budget: usize, seed: u64) -> Result<Classification> {
    if n == 0 {
        return Err(Error::pre("matrix size must be at least 1"));
    }
    let field = f.field();
    let m = arity(f);
    if f.degree().unwrap_or(0) == 0 {
        let c = f.constant_term();
        let point = EvalPoint::new(vec![Mat::identity(field, n); m])?;
        let class = if c.is_zero() {
            ImageClass::Identity
        } else {
            ImageClass::Central
        };
        return Ok(Classification {
            class,
            confidence: Confidence::Proven,
            witness: (class == ImageClass::Central)
                .then(|| ImageWitness::new(f, point))
                .transpose()?,
        });
    }
    if f.is_multilinear() {
        if let Some(size) = (n as u128 * n as u128).checked_pow(m as u32) {
            if size <= UNIT_TUPLE_CAP {
                return classify_unit_tuples(f, n);
            }
        }
    }
    if let Field::Prime(p) = field {
        if let Some(size) = (p as u128).checked_pow((n * n * m) as u32) {
            if size <= ENUMERATION_CAP {
                return classify_exhaustive(f, n, p);
            }
        }
    }
    classify_random(f, n, budget, seed)
}

fn summarize(
    f: &Poly,
    non_scalar: Option<EvalPoint>,
    nonzero: Option<EvalPoint>,
    confidence: Confidence,
) -> Result<Classification> {
    let (class, point) = match (non_scalar, nonzero) {
        (Some(p), _) => (ImageClass::Neither, Some(p)),
        (None, Some(p)) => (ImageClass::Central, Some(p)),
        (None, None) => (ImageClass::Identity, None),
    };
    Ok(Classification {
        class,
        confidence,
        witness: point.map(|p| ImageWitness::new(f, p)).transpose()?,
    })
}

/// Multilinear `f` is determined by its values on tuples of matrix units, and
/// a product of matrix units is again a matrix unit or zero.
fn classify_unit_tuples(f: &Poly, n: usize) -> Result<Classification> {
    let field = f.field();
    let m = f.nvars();
    let terms: Vec<(&[u32], &Scalar)> = f.terms().map(|(w, c)| (w.letters(), c)).collect();
    let total = (n * n).pow(m as u32);
    let mut value = vec![field.zero(); n * n];
    let mut nonzero = None;
    for code in 0..total {
        // variable a is e_{i_a j_a}
        let mut units = Vec::with_capacity(m);
        let mut rest = code;
        for _ in 0..m {
            units.push((rest % (n * n) / n, rest % n));
            rest /= n * n;
        }
        value.iter_mut().for_each(|v| *v = field.zero());
        for (letters, c) in &terms {
            let first = units[letters[0] as usize - 1];
            let mut end = first.1;
            let mut alive = true;
            for &l in &letters[1..] {
                let (i, j) = units[l as usize - 1];
                if i != end {
                    alive = false;
                    break;
                }
                end = j;
            }
            if alive {
                let k = first.0 * n + end;
                value[k] = &value[k] + *c;
            }
        }
        let scalar = (0..n * n).all(|k| {
            let (i, j) = (k / n, k % n);
            if i == j {
                value[k] == value[0]
            } else {
                value[k].is_zero()
            }
        });
        let point = || {
            let args = units.iter().map(|&(i, j)| Mat::unit(field, n, i, j)).collect();
            EvalPoint::new(args)
        };
        if !scalar {
            return summarize(f, Some(point()?), None, Confidence::Proven);
        }
        if nonzero.is_none() && !value[0].is_zero() {
            nonzero = Some(point()?);
        }
    }
    summarize(f, None, nonzero, Confidence::Proven)
}

fn classify_exhaustive(f: &Poly, n: usize, p: u64) -> Result<Classification> {
    let compiled = Compiled::modular(f, p).expect("coefficients already live in F_p");
    let one = ModMat::identity(n, p);
    let mut non_scalar = None;
    let mut nonzero = None;
    for_each_point(n, p, arity(f), |args| {
        let v = eval_compiled(&compiled, args, &one);
        if !v.is_scalar() {
            non_scalar = Some(args.to_vec());
            return ControlFlow::Break(());
        }
        if nonzero.is_none() && !v.is_zero() {
            nonzero = Some(args.to_vec());
        }
        ControlFlow::Continue(())
    })?;
    let lift = |args: Vec<ModMat>| EvalPoint::new(args.iter().map(ModMat::to_mat).collect());
    summarize(
        f,
        non_scalar.map(lift).transpose()?,
        nonzero.map(lift).transpose()?,
        Confidence::Proven,
    )
}

fn sample_range(f: &Poly, n: usize) -> i64 {
    let deg = f.degree().unwrap_or(0) as i64;
    (2 * deg * (n * n) as i64).max(1 << 20)
}

fn classify_random(f: &Poly, n: usize, budget: usize, seed: u64) -> Result<Classification> {
    let field = f.field();
    let m = arity(f);
    let range = sample_range(f, n);
    let modulus = match field {
        Field::Rational => SCREEN_PRIME,
        Field::Prime(p) => p,
    };
    let screen = Compiled::modular(f, modulus);
    let exact = Compiled::exact(f);
    let one_mod = ModMat::identity(n, modulus);
    let one = Mat::identity(field, n);
    let mut nonzero: Option<EvalPoint> = None;
    for trial in 0..budget {
        let ints = random_ints(&mut trial_rng(seed, STREAM_CLASSIFY, trial), field, m * n * n, range);
        let (is_scalar, is_zero) = match &screen {
            Some(c) => {
                let v = eval_compiled(c, &ints_to_modmats(modulus, n, &ints), &one_mod);
                (v.is_scalar(), v.is_zero())
            }
            None => {
                let v = eval_compiled(&exact, &ints_to_mats(field, n, &ints), &one);
                (v.as_scalar().is_some(), v.is_zero())
            }
        };
        if is_scalar && (is_zero || nonzero.is_some()) {
            continue;
        }
        let point = EvalPoint::new(ints_to_mats(field, n, &ints))?;
        let value = eval_compiled(&exact, point.args(), &one);
        if value.as_scalar().is_none() {
            return summarize(f, Some(point), None, Confidence::Proven);
        }
        if nonzero.is_none() && !value.is_zero() {
            nonzero = Some(point);
        }
    }
    summarize(
        f,
        None,
        nonzero,
        Confidence::Randomized {
            seed,
            trials: budget,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_poly, parse_poly_in};

    #[test]
    fn central_square_of_commutator() {
        let f = parse_poly("[X1,X2]^2").unwrap();
        let c = classify_on_mn(&f, 2, 50, 1).unwrap();
        assert_eq!(c.class, ImageClass::Central);
        assert!(matches!(c.confidence, Confidence::Randomized { trials: 50, .. }));
        let v = &c.witness.unwrap().value;
        assert!(v.as_scalar().is_some() && !v.is_zero());

        let c = classify_on_mn(&f, 3, 50, 1).unwrap();
        assert_eq!(c.class, ImageClass::Neither);
        assert_eq!(c.confidence, Confidence::Proven);
        let w = c.witness.unwrap();
        assert!(w.check(&f));
        assert!(w.value.as_scalar().is_none());
    }

    #[test]
    fn commutator_on_m1_and_m2() {
        let f = parse_poly("[X1,X2]").unwrap();
        let c = classify_on_mn(&f, 1, 10, 0).unwrap();
        assert_eq!(c.class, ImageClass::Identity);
        assert_eq!(c.confidence, Confidence::Proven);
        assert_eq!(classify_on_mn(&f, 2, 10, 0).unwrap().class, ImageClass::Neither);
    }

    #[test]
    fn standard_polynomial_s4_is_identity_of_m2() {
        let mut terms = Vec::new();
        for perm in crate::freealg::permutations(4) {
            let sign = if crate::freealg::inversions(&perm).is_multiple_of(2) { 1 } else { -1 };
            let w = perm.iter().map(|&i| format!("X{}", i + 1)).collect::<Vec<_>>().join("*");
            terms.push(format!("{}{}", if sign < 0 { "-" } else { "+" }, w));
        }
        let s4 = parse_poly(terms.concat().trim_start_matches('+')).unwrap();
        let c = classify_on_mn(&s4, 2, 0, 0).unwrap();
        assert_eq!(c.class, ImageClass::Identity);
        assert_eq!(c.confidence, Confidence::Proven);
    }

    #[test]
    fn exhaustive_over_small_field() {
        let f = parse_poly_in("X1^2 - X1", Field::Prime(2)).unwrap();
        let c = classify_on_mn(&f, 1, 0, 0).unwrap();
        assert_eq!(c.class, ImageClass::Identity);
        assert_eq!(c.confidence, Confidence::Proven);
        let c = classify_on_mn(&f, 2, 0, 0).unwrap();
        assert_eq!(c.class, ImageClass::Neither);
    }

    #[test]
    fn constants() {
        let f = parse_poly("1/3").unwrap();
        let c = classify_on_mn(&f, 3, 0, 0).unwrap();
        assert_eq!((c.class, c.confidence), (ImageClass::Central, Confidence::Proven));
        let z = parse_poly("0").unwrap();
        assert_eq!(classify_on_mn(&z, 3, 0, 0).unwrap().class, ImageClass::Identity);
    }

    #[test]
    fn a_variable_is_central_on_m1() {
        let x = parse_poly("X1").unwrap();
        let c = classify_on_mn(&x, 1, 0, 0).unwrap();
        assert_eq!((c.class, c.confidence), (ImageClass::Central, Confidence::Proven));
    }
}
