use std::collections::BTreeSet;
use std::ops::ControlFlow;

use super::arity;
use super::ring::{eval_compiled, Compiled, ModMat};
use crate::error::{Error, Result};
use crate::exactmat::Mat;
use crate::field::Field;
use crate::freealg::Poly;

/// Largest number of points any exhaustive enumeration will visit.
pub const ENUMERATION_CAP: u128 = 1 << 22;

/// Visits every `m`-tuple of `n×n` matrices over `F_p`.
pub(crate) fn for_each_point(
    n: usize,
    p: u64,
    m: usize,
    mut visit: impl FnMut(&[ModMat]) -> ControlFlow<()>,
) -> Result<()> {
    let digits = n * n * m;
    let size = (p as u128).checked_pow(digits as u32).unwrap_or(u128::MAX);
    if size > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            size,
            cap: ENUMERATION_CAP,
        });
    }
    let mut args = vec![ModMat::zeros(n, p); m];
    loop {
        if visit(&args).is_break() {
            return Ok(());
        }
        // odometer increment
        let mut k = 0;
        loop {
            if k == digits {
                return Ok(());
            }
            let cell = &mut args[k / (n * n)].data[k % (n * n)];
            *cell += 1;
            if *cell < p {
                break;
            }
            *cell = 0;
            k += 1;
        }
    }
}

/// The exact image `f(M_n(F_p))`. A polynomial over Q is read modulo `p`.
pub fn exhaustive_image(f: &Poly, n: usize, p: u64) -> Result<BTreeSet<Mat>> {
    let field = Field::prime(p)?;
    if f.field() != Field::Rational && f.field() != field {
        return Err(Error::FieldMismatch {
            left: f.field(),
            right: field,
        });
    }
    let compiled = Compiled::modular(f, p)
        .ok_or_else(|| Error::pre(format!("a coefficient has a denominator divisible by {p}")))?;
    let one = ModMat::identity(n, p);
    let mut seen = BTreeSet::new();
    for_each_point(n, p, arity(f), |args| {
        seen.insert(eval_compiled(&compiled, args, &one).data);
        ControlFlow::Continue(())
    })?;
    Ok(seen
        .into_iter()
        .map(|data| ModMat { n, p, data }.to_mat())
        .collect())
}
