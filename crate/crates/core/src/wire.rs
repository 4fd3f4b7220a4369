//! JSON file formats for matrices, decompositions and certificates.
//!
//! Scalars travel as strings (`"p/q"` over Q, a residue over F_p), so every
//! value round-trips exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::decompose::{CommutatorForm, SquareZeroSum};
use crate::error::{Error, Result};
use crate::exactmat::{Conjugator, Mat};
use crate::field::Field;
use crate::images::{EvalPoint, ImageWitness};
use crate::parser::{parse_poly_in, render_poly};
use crate::waring::{CertTerm, WaringCertificate};

pub const CERTIFICATE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRepr {
    pub n: usize,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub rows: Vec<Vec<String>>,
}

fn field_parts(field: Field) -> (String, Option<u64>) {
    match field {
        Field::Rational => ("Q".into(), None),
        Field::Prime(p) => ("Fp".into(), Some(p)),
    }
}

fn field_from_parts(tag: &str, p: Option<u64>) -> Result<Field> {
    match (tag, p) {
        ("Q", None) => Ok(Field::Rational),
        ("Fp", Some(p)) => Field::prime(p),
        _ => Err(Error::Format(format!("bad field {tag:?} with p = {p:?}"))),
    }
}

impl From<&Mat> for MatrixRepr {
    fn from(a: &Mat) -> Self {
        let (field, p) = field_parts(a.field());
        MatrixRepr {
            n: a.n(),
            field,
            p,
            rows: a.rows().map(|r| r.iter().map(ToString::to_string).collect()).collect(),
        }
    }
}

impl MatrixRepr {
    pub fn to_mat(&self) -> Result<Mat> {
        let field = field_from_parts(&self.field, self.p)?;
        if self.rows.len() != self.n || self.rows.iter().any(|r| r.len() != self.n) {
            return Err(Error::Format(format!("rows do not form a {0}x{0} matrix", self.n)));
        }
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|s| field.parse_scalar(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Mat::from_rows(field, rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjugatorRepr {
    pub p: MatrixRepr,
    pub p_inv: MatrixRepr,
}

impl From<&Conjugator> for ConjugatorRepr {
    fn from(c: &Conjugator) -> Self {
        ConjugatorRepr {
            p: (&c.p).into(),
            p_inv: (&c.p_inv).into(),
        }
    }
}

impl ConjugatorRepr {
    /// No validity check here; verification does that.
    pub fn to_conjugator(&self) -> Result<Conjugator> {
        Ok(Conjugator {
            p: self.p.to_mat()?,
            p_inv: self.p_inv.to_mat()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareZeroSumRepr {
    pub parts: Vec<MatrixRepr>,
    pub target: MatrixRepr,
}

impl From<&SquareZeroSum> for SquareZeroSumRepr {
    fn from(s: &SquareZeroSum) -> Self {
        SquareZeroSumRepr {
            parts: s.parts.iter().map(Into::into).collect(),
            target: (&s.target).into(),
        }
    }
}

impl SquareZeroSumRepr {
    pub fn to_sum(&self) -> Result<SquareZeroSum> {
        Ok(SquareZeroSum {
            parts: self.parts.iter().map(MatrixRepr::to_mat).collect::<Result<_>>()?,
            target: self.target.to_mat()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommutatorFormRepr {
    pub x: MatrixRepr,
    pub y: MatrixRepr,
    pub target: MatrixRepr,
}

impl From<&CommutatorForm> for CommutatorFormRepr {
    fn from(c: &CommutatorForm) -> Self {
        CommutatorFormRepr {
            x: (&c.x).into(),
            y: (&c.y).into(),
            target: (&c.target).into(),
        }
    }
}

impl CommutatorFormRepr {
    pub fn to_form(&self) -> Result<CommutatorForm> {
        Ok(CommutatorForm {
            x: self.x.to_mat()?,
            y: self.y.to_mat()?,
            target: self.target.to_mat()?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub coeff: String,
    pub point: Vec<MatrixRepr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugator: Option<ConjugatorRepr>,
    pub value: MatrixRepr,
    #[serde(default)]
    pub origin: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRepr {
    pub version: u32,
    pub polynomial: String,
    pub n: usize,
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub target: MatrixRepr,
    pub terms: Vec<TermRepr>,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

impl From<&WaringCertificate> for CertificateRepr {
    fn from(c: &WaringCertificate) -> Self {
        let (field, p) = field_parts(c.field);
        CertificateRepr {
            version: CERTIFICATE_VERSION,
            polynomial: render_poly(&c.f),
            n: c.n,
            field,
            p,
            target: (&c.target).into(),
            terms: c
                .terms
                .iter()
                .map(|t| TermRepr {
                    coeff: t.coeff.to_string(),
                    point: t.witness.point.args().iter().map(Into::into).collect(),
                    conjugator: t.witness.conjugator.as_ref().map(Into::into),
                    value: (&t.witness.value).into(),
                    origin: t.origin.clone(),
                })
                .collect(),
            meta: c.meta.clone(),
        }
    }
}

impl CertificateRepr {
    pub fn to_certificate(&self) -> Result<WaringCertificate> {
        if self.version != CERTIFICATE_VERSION {
            return Err(Error::Format(format!("unsupported certificate version {}", self.version)));
        }
        let field = field_from_parts(&self.field, self.p)?;
        let f = parse_poly_in(&self.polynomial, field)?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(CertTerm {
                    coeff: field.parse_scalar(&t.coeff)?,
                    witness: ImageWitness {
                        value: t.value.to_mat()?,
                        point: EvalPoint::new(t.point.iter().map(MatrixRepr::to_mat).collect::<Result<_>>()?)?,
                        conjugator: t.conjugator.as_ref().map(ConjugatorRepr::to_conjugator).transpose()?,
                    },
                    origin: t.origin.clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WaringCertificate {
            f,
            n: self.n,
            field,
            target: self.target.to_mat()?,
            terms,
            meta: self.meta.clone(),
        })
    }
}

fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
}

pub fn matrix_to_string(a: &Mat) -> String {
    to_pretty(&MatrixRepr::from(a))
}

pub fn matrix_from_str(text: &str) -> Result<Mat> {
    from_json::<MatrixRepr>(text)?.to_mat()
}

pub fn certificate_to_string(c: &WaringCertificate) -> String {
    to_pretty(&CertificateRepr::from(c))
}

pub fn certificate_from_str(text: &str) -> Result<WaringCertificate> {
    from_json::<CertificateRepr>(text)?.to_certificate()
}

pub fn square_zero_sum_to_string(s: &SquareZeroSum) -> String {
    to_pretty(&SquareZeroSumRepr::from(s))
}

pub fn square_zero_sum_from_str(text: &str) -> Result<SquareZeroSum> {
    from_json::<SquareZeroSumRepr>(text)?.to_sum()
}

pub fn commutator_form_to_string(c: &CommutatorForm) -> String {
    to_pretty(&CommutatorFormRepr::from(c))
}

pub fn commutator_form_from_str(text: &str) -> Result<CommutatorForm> {
    from_json::<CommutatorFormRepr>(text)?.to_form()
}
