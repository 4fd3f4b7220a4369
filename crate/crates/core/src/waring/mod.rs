//! Certified Waring-type decompositions: targets written as exact signed sums
//! of elements of `f(M_n)`, each carrying its own evaluation witness.

mod bound;
mod flow;
mod pipelines;

pub use bound::{bound_formula, BoundReport, Regime};
pub use flow::{conjugation_flow_demo, loglog_slope, FlowRow};
pub use pipelines::{
    commutator_via_image, linear_combination_nine, target_square_zero_certificate,
    three_term_expansion, traceless_waring_certificate,
};

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactmat::{Conjugator, Mat};
use crate::field::{Field, Scalar};
use crate::freealg::Poly;
use crate::images::ImageWitness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertTerm {
    pub coeff: Scalar,
    pub witness: ImageWitness,
    /// Which construction step produced the term.
    pub origin: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WaringCertificate {
    pub f: Poly,
    pub n: usize,
    pub field: Field,
    pub target: Mat,
    pub terms: Vec<CertTerm>,
    pub meta: BTreeMap<String, String>,
}

impl WaringCertificate {
    pub fn empty(f: &Poly, target: &Mat, pipeline: &str) -> Self {
        let mut meta = BTreeMap::new();
        meta.insert("pipeline".to_string(), pipeline.to_string());
        WaringCertificate {
            f: f.clone(),
            n: target.n(),
            field: target.field(),
            target: target.clone(),
            terms: Vec::new(),
            meta,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of `(+1, -1)` pairs when the certificate is in difference form.
    pub fn difference_pairs(&self) -> Option<usize> {
        let one = self.field.one();
        let minus = -&one;
        let paired = self.terms.len().is_multiple_of(2)
            && self
                .terms
                .chunks(2)
                .all(|p| p[0].coeff == one && p[1].coeff == minus);
        paired.then_some(self.terms.len() / 2)
    }

    pub(crate) fn push_pair(&mut self, pair: (ImageWitness, ImageWitness), origin: &str) {
        let one = self.field.one();
        self.terms.push(CertTerm {
            coeff: one.clone(),
            witness: pair.0,
            origin: format!("{origin} (+)"),
        });
        self.terms.push(CertTerm {
            coeff: -&one,
            witness: pair.1,
            origin: format!("{origin} (-)"),
        });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        *self == Verdict::Valid
    }
}

/// Rechecks a certificate from scratch: the stored sum, every witness
/// evaluation and every conjugator.
pub fn verify_certificate(cert: &WaringCertificate) -> Verdict {
    let bad = |msg: String| Verdict::Invalid(msg);
    let n = cert.n;
    if cert.target.n() != n || cert.target.field() != cert.field || cert.f.field() != cert.field {
        return bad("malformed: target or polynomial does not match the declared ring".into());
    }
    for (i, t) in cert.terms.iter().enumerate() {
        let w = &t.witness;
        let shapes_ok = t.coeff.field() == cert.field
            && w.value.n() == n
            && w.value.field() == cert.field
            && w.point.n() == n
            && w.point.field() == cert.field
            && w.point.len() >= cert.f.nvars()
            && w.conjugator.as_ref().is_none_or(|c| {
                c.p.n() == n && c.p_inv.n() == n && c.p.field() == cert.field && c.p_inv.field() == cert.field
            });
        if !shapes_ok {
            return bad(format!("malformed: term {i} does not match the declared ring"));
        }
    }
    let mut sum = Mat::zeros(cert.field, n);
    for t in &cert.terms {
        sum = &sum + &t.witness.value.scale(&t.coeff);
    }
    if sum != cert.target {
        return bad("sum mismatch".into());
    }
    for (i, t) in cert.terms.iter().enumerate() {
        match t.witness.recompute(&cert.f) {
            Ok(v) if v == t.witness.value => {}
            _ => return bad(format!("witness mismatch in term {i}")),
        }
    }
    for (i, t) in cert.terms.iter().enumerate() {
        if !t.witness.conjugator.as_ref().is_none_or(Conjugator::is_valid) {
            return bad(format!("conjugator mismatch in term {i}: p·p_inv is not the identity"));
        }
    }
    Verdict::Valid
}

/// Witnesses for `(1 - u/2) t (1 + u/2)` and `(1 + u/2) t (1 - u/2)`, whose
/// difference is `[t, u]` when `u^2 = 0`.
pub fn conj_difference_pair(t: &ImageWitness, u: &Mat) -> Result<(ImageWitness, ImageWitness)> {
    t.value.check_compatible(u)?;
    let field = u.field();
    if !(u * u).is_zero() {
        return Err(Error::pre("u must square to zero"));
    }
    if !field.admits_division_by(2) {
        return Err(Error::FieldTooSmall("characteristic 2".into()));
    }
    let one = Mat::identity(field, u.n());
    let half = u.scale(&field.one().div(&field.int(2)));
    let minus = &one - &half;
    let plus = &one + &half;
    let c1 = Conjugator {
        p: minus.clone(),
        p_inv: plus.clone(),
    };
    let c2 = Conjugator { p: plus, p_inv: minus };
    Ok((t.conjugated(&c1), t.conjugated(&c2)))
}
