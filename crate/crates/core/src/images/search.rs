use super::classify::{classify_on_mn, ImageClass};
use super::ring::{eval_compiled, Compiled, ModMat, SCREEN_PRIME};
use super::sampling::{
    ints_to_mats, ints_to_modmats, structured_ints, trial_rng, STREAM_INVERTIBLE, STREAM_SPECTRUM, STREAM_TRACE,
};
use super::{arity, EvalPoint, ImageWitness};
use crate::error::{Error, Result};
use crate::exactmat::{max_root_multiplicity, rational_spectrum, triangularize_split, Conjugator, Mat};
use crate::field::{Field, Scalar};
use crate::freealg::Poly;

/// Trials spent improving a split-spectrum witness after the first one is found.
const SPECTRUM_PATIENCE: usize = 24;

/// Structured search for a value accepted by both predicates. `screen` runs on
/// the reduction modulo a large prime and must imply `accept` on the lift.
fn screened_search(
    f: &Poly,
    n: usize,
    budget: usize,
    seed: u64,
    stream: u64,
    screen: impl Fn(&ModMat) -> bool,
    accept: impl Fn(&Mat) -> bool,
) -> Result<Option<ImageWitness>> {
    if n == 0 {
        return Err(Error::pre("matrix size must be at least 1"));
    }
    let field = f.field();
    let m = arity(f);
    let modulus = match field {
        Field::Rational => SCREEN_PRIME,
        Field::Prime(p) => p,
    };
    let compiled = Compiled::modular(f, modulus);
    let exact = Compiled::exact(f);
    let one_mod = ModMat::identity(n, modulus);
    let one = Mat::identity(field, n);
    for trial in 0..budget {
        let ints = structured_ints(&mut trial_rng(seed, stream, trial), field, m, n, trial);
        if let Some(c) = &compiled {
            if !screen(&eval_compiled(c, &ints_to_modmats(modulus, n, &ints), &one_mod)) {
                continue;
            }
        }
        let args = ints_to_mats(field, n, &ints);
        let value = eval_compiled(&exact, &args, &one);
        if accept(&value) {
            return Ok(Some(ImageWitness {
                value,
                point: EvalPoint::new(args)?,
                conjugator: None,
            }));
        }
    }
    Ok(None)
}

/// A point where `det f(point) != 0`.
pub fn find_invertible_witness(f: &Poly, n: usize, budget: usize, seed: u64) -> Result<ImageWitness> {
    screened_search(f, n, budget, seed, STREAM_INVERTIBLE, |v| v.det() != 0, |v| !v.det().is_zero())?
        .ok_or_else(|| Error::SearchFailure {
            what: "no invertible value found".into(),
            trials: budget,
        })
}

/// A point where `tr f(point) != 0`.
pub fn find_nonzero_trace_witness(f: &Poly, n: usize, budget: usize, seed: u64) -> Result<ImageWitness> {
    screened_search(f, n, budget, seed, STREAM_TRACE, |v| v.trace() != 0, |v| !v.trace().is_zero())?
        .ok_or_else(|| Error::SearchFailure {
            what: "no value with nonzero trace found".into(),
            trials: budget,
        })
}

/// A value that triangularizes over Q with every eigenvalue multiplicity at most `n/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitWitness {
    pub witness: ImageWitness,
    /// Eigenvalues in block order: the largest block first, the second largest last.
    pub spectrum: Vec<(Scalar, usize)>,
    /// `p_inv · value · p` is upper triangular and block diagonal in `spectrum` order.
    pub triangularizer: Conjugator,
}

fn entry_height(a: &Mat) -> u64 {
    a.entries().iter().map(Scalar::height).max().unwrap_or(0)
}

fn block_order(mut eigs: Vec<(Scalar, usize)>) -> Vec<(Scalar, usize)> {
    eigs.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    if eigs.len() > 2 {
        let second = eigs.remove(1);
        eigs.push(second);
    }
    eigs
}

/// Score, witness and spectrum of the best accepted candidate.
type Scored = ((usize, std::cmp::Reverse<u64>), ImageWitness, Vec<(Scalar, usize)>);

pub fn find_split_spectrum_witness(f: &Poly, n: usize, budget: usize, seed: u64) -> Result<SplitWitness> {
    if f.field() != Field::Rational {
        return Err(Error::pre("split-spectrum search works over the rationals"));
    }
    match classify_on_mn(f, n, budget, seed)?.class {
        ImageClass::Identity => return Err(Error::Identity { n }),
        ImageClass::Central => return Err(Error::Central { n }),
        ImageClass::Neither => {}
    }
    let field = f.field();
    let m = arity(f);
    let exact = Compiled::exact(f);
    let one = Mat::identity(field, n);
    let mut best: Option<Scored> = None;
    let mut fallback: Option<(usize, ImageWitness)> = None;
    let mut first_hit = None;
    let mut trials = 0;
    for trial in 0..budget {
        if first_hit.is_some_and(|t| trial >= t + SPECTRUM_PATIENCE) {
            break;
        }
        trials = trial + 1;
        let ints = structured_ints(&mut trial_rng(seed, STREAM_SPECTRUM, trial), field, m, n, trial);
        let args = ints_to_mats(field, n, &ints);
        let value = eval_compiled(&exact, &args, &one);
        let witness = || -> Result<ImageWitness> {
            Ok(ImageWitness {
                value: value.clone(),
                point: EvalPoint::new(args.clone())?,
                conjugator: None,
            })
        };
        let spec = rational_spectrum(&value)?;
        if spec.splits && 2 * spec.max_multiplicity() <= n {
            let score = (spec.eigenvalues.len(), std::cmp::Reverse(entry_height(&value)));
            if best.as_ref().is_none_or(|(s, ..)| score > *s) {
                best = Some((score, witness()?, spec.eigenvalues));
            }
            first_hit.get_or_insert(trial);
            if score.0 == n {
                break;
            }
        } else {
            let mult = if spec.splits {
                spec.max_multiplicity()
            } else {
                max_root_multiplicity(&value)?
            };
            if fallback.as_ref().is_none_or(|(b, _)| mult < *b) {
                fallback = Some((mult, witness()?));
            }
        }
    }
    let Some((_, witness, eigs)) = best else {
        return Err(Error::SpectrumSearch {
            trials,
            best: fallback.map(|(k, w)| (k, Box::new(w))),
        });
    };
    let spectrum = block_order(eigs);
    let triangularizer = triangularize_split(&witness.value, &spectrum)?;
    Ok(SplitWitness {
        witness,
        spectrum,
        triangularizer,
    })
}
