//! Image sets `f(M_n)`: evaluation, classification, local dependence and
//! witness searches.

mod classify;
mod dependence;
mod exhaustive;
pub(crate) mod ring;
pub(crate) mod sampling;
mod search;

pub use classify::{classify_on_mn, Classification, Confidence, ImageClass};
pub use dependence::{
    capelli_dependence_test, power_dependence_index, Dependence, IndependenceWitness, PowerIndex,
};
pub use exhaustive::{exhaustive_image, ENUMERATION_CAP};
pub use search::{
    find_invertible_witness, find_nonzero_trace_witness, find_split_spectrum_witness, SplitWitness,
};

use crate::error::{Error, Result};
use crate::exactmat::{Conjugator, Mat};
use crate::field::Field;
use crate::freealg::Poly;
use ring::{eval_compiled, Compiled};

/// A tuple of same-size matrices over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoint {
    args: Vec<Mat>,
}

impl EvalPoint {
    pub fn new(args: Vec<Mat>) -> Result<Self> {
        let Some(first) = args.first() else {
            return Err(Error::pre("an evaluation point needs at least one matrix"));
        };
        for a in &args[1..] {
            first.check_compatible(a)?;
        }
        Ok(EvalPoint { args })
    }

    pub fn args(&self) -> &[Mat] {
        &self.args
    }

    pub fn len(&self) -> usize {
        self.args.len()
    }

    pub fn is_empty(&self) -> bool {
        self.args.is_empty()
    }

    pub fn n(&self) -> usize {
        self.args[0].n()
    }

    pub fn field(&self) -> Field {
        self.args[0].field()
    }

    pub fn conjugate(&self, c: &Conjugator) -> EvalPoint {
        EvalPoint {
            args: self.args.iter().map(|a| a.conjugate(c)).collect(),
        }
    }
}

/// A certified element of the image: `value = p · f(point) · p_inv`, or just
/// `f(point)` without a conjugator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageWitness {
    pub value: Mat,
    pub point: EvalPoint,
    pub conjugator: Option<Conjugator>,
}

impl ImageWitness {
    pub fn new(f: &Poly, point: EvalPoint) -> Result<Self> {
        let value = evaluate(f, &point)?;
        Ok(ImageWitness {
            value,
            point,
            conjugator: None,
        })
    }

    /// Recomputes the certified value from scratch.
    pub fn recompute(&self, f: &Poly) -> Result<Mat> {
        let v = evaluate(f, &self.point)?;
        Ok(match &self.conjugator {
            Some(c) => v.conjugate(c),
            None => v,
        })
    }

    pub fn check(&self, f: &Poly) -> bool {
        let conj_ok = self.conjugator.as_ref().is_none_or(Conjugator::is_valid);
        conj_ok && self.recompute(f).is_ok_and(|v| v == self.value)
    }

    /// The witness for `c.p · value · c.p_inv`.
    pub fn conjugated(&self, c: &Conjugator) -> ImageWitness {
        let conjugator = match &self.conjugator {
            Some(old) => c.compose(old),
            None => c.clone(),
        };
        ImageWitness {
            value: self.value.conjugate(c),
            point: self.point.clone(),
            conjugator: Some(conjugator),
        }
    }
}

/// `f(a_1, ..., a_m)`; the constant term contributes `c·I`.
pub fn evaluate(f: &Poly, point: &EvalPoint) -> Result<Mat> {
    if f.field() != point.field() {
        return Err(Error::FieldMismatch {
            left: f.field(),
            right: point.field(),
        });
    }
    if point.len() < f.nvars() {
        return Err(Error::Arity {
            expected: f.nvars(),
            found: point.len(),
        });
    }
    let one = Mat::identity(point.field(), point.n());
    Ok(eval_compiled(&Compiled::exact(f), point.args(), &one))
}

/// Number of matrix arguments a search has to supply for `f`.
pub(crate) fn arity(f: &Poly) -> usize {
    f.nvars().max(1)
}
