use super::{conj_difference_pair, CertTerm, WaringCertificate};
use crate::decompose::traceless_four_square_zero;
use crate::error::{Error, Result};
use crate::exactmat::{square_zero_conjugator, Mat};
use crate::field::Field;
use crate::freealg::{cyclic_normal_form, hat_of, Poly};
use crate::images::sampling::derive_seed;
use crate::images::{
    classify_on_mn, find_invertible_witness, find_nonzero_trace_witness, find_split_spectrum_witness, EvalPoint, ImageClass, ImageWitness, SplitWitness,
};

type Pair = (ImageWitness, ImageWitness);

fn require_rational(f: &Poly, target: &Mat) -> Result<()> {
    for field in [f.field(), target.field()] {
        if field != Field::Rational {
            return Err(Error::FieldMismatch {
                left: Field::Rational,
                right: field,
            });
        }
    }
    Ok(())
}

fn require_noncentral(f: &Poly, n: usize, budget: usize, seed: u64) -> Result<()> {
    match classify_on_mn(f, n, budget, seed)?.class {
        ImageClass::Identity => Err(Error::Identity { n }),
        ImageClass::Central => Err(Error::Central { n }),
        ImageClass::Neither => Ok(()),
    }
}

/// A pair of conjugates of the split witness whose difference is `s`.
///
/// With `t` triangularized into `[[A, B], [0, C]]` (top block of size `n/2`)
/// and `u = [[0, D], [0, 0]]` for a diagonal strip `D`, `[t, u] = [[0, AD - DC], [0, 0]]`
/// is square-zero, and its rank is the number of ones in `D` because the
/// diagonal entries of `A` and `C` pair up distinct eigenvalues.
fn square_zero_pair(sw: &SplitWitness, s: &Mat) -> Result<Pair> {
    let n = s.n();
    let field = s.field();
    let r = s.rank();
    let h = n / 2;
    assert!(r <= h, "a square-zero matrix has rank at most n/2");
    let t = sw.witness.conjugated(&sw.triangularizer.inverse());
    let mut u = Mat::zeros(field, n);
    for i in 0..r {
        u.set(i, h + i, field.one());
    }
    let (c1, c2) = conj_difference_pair(&t, &u)?;
    let bracket = &c1.value - &c2.value;
    debug_assert_eq!(bracket.rank(), r);
    let g = square_zero_conjugator(s, &bracket)?;
    Ok((c1.conjugated(&g), c2.conjugated(&g)))
}

/// `s = t - t'` with `t, t'` in `f(M_n)`, for a square-zero `s`.
pub fn target_square_zero_certificate(f: &Poly, s: &Mat, budget: usize, seed: u64) -> Result<WaringCertificate> {
    require_rational(f, s)?;
    if !(s * s).is_zero() {
        return Err(Error::pre("target must square to zero"));
    }
    let mut cert = WaringCertificate::empty(f, s, "square-zero");
    cert.meta.insert("bound".into(), "1 difference".into());
    if s.is_zero() {
        return Ok(cert);
    }
    let sw = find_split_spectrum_witness(f, s.n(), budget, seed)?;
    cert.push_pair(square_zero_pair(&sw, s)?, "square-zero target");
    Ok(cert)
}

fn traceless_pairs(f: &Poly, x: &Mat, budget: usize, seed: u64, cert: &mut WaringCertificate) -> Result<()> {
    let parts = traceless_four_square_zero(x)?.parts;
    cert.meta.insert("square-zero parts".into(), parts.len().to_string());
    if parts.is_empty() {
        return Ok(());
    }
    let sw = find_split_spectrum_witness(f, x.n(), budget, seed)?;
    for (i, s) in parts.iter().enumerate() {
        cert.push_pair(square_zero_pair(&sw, s)?, &format!("square-zero part {}", i + 1));
    }
    Ok(())
}

/// A traceless matrix as a sum of at most four differences of image elements.
pub fn traceless_waring_certificate(f: &Poly, x: &Mat, budget: usize, seed: u64) -> Result<WaringCertificate> {
    require_rational(f, x)?;
    if !x.trace().is_zero() {
        return Err(Error::pre(format!("trace is {}, not 0", x.trace())));
    }
    let mut cert = WaringCertificate::empty(f, x, "traceless");
    cert.meta.insert("bound".into(), "4 differences".into());
    traceless_pairs(f, x, budget, seed, &mut cert)?;
    Ok(cert)
}

/// Any matrix as a rational linear combination of at most nine image elements.
pub fn linear_combination_nine(f: &Poly, x: &Mat, budget: usize, seed: u64) -> Result<WaringCertificate> {
    require_rational(f, x)?;
    if cyclic_normal_form(f).is_zero() {
        return Err(Error::pre("polynomial is cyclically equivalent to zero"));
    }
    let n = x.n();
    require_noncentral(f, n, budget, seed)?;
    let mut cert = WaringCertificate::empty(f, x, "linear-nine");
    cert.meta.insert("bound".into(), "9 terms".into());
    let mut rest = x.clone();
    if !x.trace().is_zero() {
        let a = find_nonzero_trace_witness(f, n, budget, derive_seed(seed, 1))?;
        let coeff = x.trace().div(&a.value.trace());
        rest = x - &a.value.scale(&coeff);
        cert.terms.push(CertTerm {
            coeff,
            witness: a,
            origin: "nonzero-trace term".into(),
        });
    }
    traceless_pairs(f, &rest, budget, derive_seed(seed, 2), &mut cert)?;
    Ok(cert)
}

/// The three signed terms of
/// `[w,z] = [[t2, w c⁻¹], t1 z] - [[t2, w c⁻¹ t1], z] + [t1, z [t2, w c⁻¹]]`, `c = [t1, t2]`.
pub fn three_term_expansion(t1: &Mat, t2: &Mat, w: &Mat, z: &Mat) -> Result<[Mat; 3]> {
    let c_inv = t1
        .commutator(t2)
        .inverse()
        .ok_or_else(|| Error::pre("[t1, t2] is singular"))?;
    let a = w * &c_inv;
    Ok([
        t2.commutator(&a).commutator(&(t1 * z)),
        -&t2.commutator(&(&a * t1)).commutator(z),
        t1.commutator(&(z * &t2.commutator(&a))),
    ])
}

/// `[t, y]` as differences of conjugates of `t`, through square-zero parts of
/// the traceless part of `y`.
fn reduce_bracket(t: &ImageWitness, y: &Mat) -> Result<Vec<Pair>> {
    let n = y.n();
    let field = y.field();
    let shift = Mat::scalar(n, y.trace().div(&field.int(n as i64)));
    traceless_four_square_zero(&(y - &shift))?
        .parts
        .iter()
        .map(|s| conj_difference_pair(t, s))
        .collect()
}

/// `[[t, a], b]` with `t` in the image: expand `[t, a]` into differences, then
/// bracket each element with `b`. `negate` flips the sign of the result.
fn reduce_nested(t: &ImageWitness, a: &Mat, b: &Mat, negate: bool) -> Result<Vec<Pair>> {
    let mut out = Vec::new();
    for (plus, minus) in reduce_bracket(t, a)? {
        for (elem, flip) in [(plus, negate), (minus, !negate)] {
            for (p, q) in reduce_bracket(&elem, b)? {
                out.push(if flip { (q, p) } else { (p, q) });
            }
        }
    }
    Ok(out)
}

/// `[w, z]` as differences of image elements, following the three-term identity
/// with `t1, t2` from an invertible value of `[f(X), f(X')]`.
pub fn commutator_via_image(f: &Poly, w: &Mat, z: &Mat, budget: usize, seed: u64) -> Result<WaringCertificate> {
    require_rational(f, w)?;
    w.check_compatible(z)?;
    let n = w.n();
    let target = w.commutator(z);
    let mut cert = WaringCertificate::empty(f, &target, "commutator");
    cert.meta.insert("bound".into(), "68 differences".into());
    if target.is_zero() {
        return Ok(cert);
    }
    require_noncentral(f, n, budget, seed)?;
    let hat = hat_of(f);
    let inv = find_invertible_witness(&hat, n, budget, derive_seed(seed, 1))?;
    let m = f.nvars();
    let args = inv.point.args();
    let t1 = ImageWitness::new(f, EvalPoint::new(args[..m].to_vec())?)?;
    let t2 = ImageWitness::new(f, EvalPoint::new(args[m..2 * m].to_vec())?)?;
    let c_inv = inv.value.inverse().expect("witness is invertible");
    let a = w * &c_inv;
    let sections = [
        ("first term", reduce_nested(&t2, &a, &(&t1.value * z), false)?),
        ("second term", reduce_nested(&t2, &(&a * &t1.value), z, true)?),
        ("third term", reduce_bracket(&t1, &(z * &t2.value.commutator(&a)))?),
    ];
    for (name, pairs) in sections {
        cert.meta.insert(format!("{name} differences"), pairs.len().to_string());
        for (i, pair) in pairs.into_iter().enumerate() {
            cert.push_pair(pair, &format!("{name}, difference {}", i + 1));
        }
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::waring::{verify_certificate, Verdict};

    const Q: Field = Field::Rational;

    #[test]
    fn square_zero_target_for_cubed_commutator() {
        let f = parse_poly("[X1,X2]^3").unwrap();
        let e12 = Mat::unit(Q, 2, 0, 1);
        let cert = target_square_zero_certificate(&f, &e12, 200, 1).unwrap();
        assert_eq!(cert.difference_pairs(), Some(1));
        assert_eq!(verify_certificate(&cert), Verdict::Valid);

        let zero = target_square_zero_certificate(&f, &Mat::zeros(Q, 2), 10, 1).unwrap();
        assert!(zero.is_empty());
        assert_eq!(verify_certificate(&zero), Verdict::Valid);

        let central = parse_poly("[X1,X2]^2").unwrap();
        assert!(matches!(
            target_square_zero_certificate(&central, &e12, 50, 1),
            Err(Error::Central { n: 2 })
        ));
    }

    #[test]
    fn square_zero_targets_of_every_rank() {
        let f = parse_poly("[X1,X2]").unwrap();
        for n in 2..=5 {
            for r in 0..=n / 2 {
                let mut s = Mat::zeros(Q, n);
                for i in 0..r {
                    s.set(i, n - 1 - i, Q.int(i as i64 + 2));
                }
                let mut p = Mat::identity(Q, n);
                for i in 0..n {
                    for j in i + 1..n {
                        p.set(i, j, Q.int((i * j % 3) as i64 - 1));
                    }
                }
                let s = &(&p * &s) * &p.inverse().unwrap();
                let cert = target_square_zero_certificate(&f, &s, 200, 7).unwrap();
                assert_eq!(verify_certificate(&cert), Verdict::Valid, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn traceless_examples() {
        let f = parse_poly("[X1,X2]").unwrap();
        let e12 = Mat::unit(Q, 2, 0, 1);
        let cert = traceless_waring_certificate(&f, &e12, 100, 3).unwrap();
        assert_eq!(cert.difference_pairs(), Some(1));
        assert!(verify_certificate(&cert).is_valid());

        let d = Mat::diag(Q, &[Q.int(1), Q.int(-1)]);
        let cert = traceless_waring_certificate(&f, &d, 100, 3).unwrap();
        assert!(cert.difference_pairs().unwrap() <= 2);
        assert!(verify_certificate(&cert).is_valid());

        assert!(traceless_waring_certificate(&f, &Mat::unit(Q, 2, 0, 0), 100, 3).is_err());
    }

    #[test]
    fn nine_examples() {
        let x = parse_poly("X1").unwrap();
        let cert = linear_combination_nine(&x, &Mat::identity(Q, 2), 50, 0).unwrap();
        assert_eq!(cert.len(), 1);
        assert_eq!(cert.terms[0].coeff, Q.one());
        assert!(cert.terms[0].witness.value.is_identity());

        let f = parse_poly("[X1,X2] + 1/2").unwrap();
        let cert = linear_combination_nine(&f, &Mat::unit(Q, 2, 0, 0), 100, 0).unwrap();
        assert_eq!(cert.terms[0].witness.value.trace(), Q.one());
        assert!(cert.len() <= 9);
        assert!(verify_certificate(&cert).is_valid());

        // traceless image, traceless target: no trace witness is needed
        let cube = parse_poly("[X1,X2]^3").unwrap();
        let cert = linear_combination_nine(&cube, &Mat::unit(Q, 2, 1, 0), 100, 0).unwrap();
        assert!(cert.len() <= 8);
        assert!(verify_certificate(&cert).is_valid());

        let c = parse_poly("[X1,X2]").unwrap();
        assert!(linear_combination_nine(&c, &Mat::unit(Q, 2, 1, 0), 100, 0).is_err());
    }

    #[test]
    fn three_term_identity() {
        let t1 = Mat::from_i64(Q, &[&[1, 2, 0], &[0, -1, 3], &[4, 0, 2]]);
        let t2 = Mat::from_i64(Q, &[&[0, 1, 1], &[2, 0, -1], &[1, 5, 0]]);
        let w = Mat::from_i64(Q, &[&[3, 0, 1], &[1, 1, 0], &[0, -2, 4]]);
        let z = Mat::from_i64(Q, &[&[0, 0, 1], &[7, 1, 0], &[1, 0, -3]]);
        let [a, b, c] = three_term_expansion(&t1, &t2, &w, &z).unwrap();
        assert_eq!(&(&a + &b) + &c, w.commutator(&z));
    }

    #[test]
    fn commutator_route() {
        let f = parse_poly("[X1,X2]").unwrap();
        let w = Mat::from_i64(Q, &[&[1, 2], &[3, -1]]);
        let z = Mat::from_i64(Q, &[&[0, 5], &[-2, 4]]);
        let cert = commutator_via_image(&f, &w, &z, 100, 2).unwrap();
        assert!(cert.difference_pairs().unwrap() <= 68);
        assert_eq!(verify_certificate(&cert), Verdict::Valid);

        let same = commutator_via_image(&f, &w, &w, 100, 2).unwrap();
        assert!(same.is_empty());
    }
}
