use std::fs;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use polyimage::decompose::{commutator_realization, traceless_four_square_zero};
use polyimage::images::{
    capelli_dependence_test, classify_on_mn, find_invertible_witness, find_split_spectrum_witness,
    power_dependence_index, ImageClass,
};
use polyimage::waring::{
    bound_formula, commutator_via_image, conjugation_flow_demo, linear_combination_nine, loglog_slope,
    target_square_zero_certificate, traceless_waring_certificate, verify_certificate, Regime, Verdict,
    WaringCertificate,
};
use polyimage::wire::{
    certificate_from_str, certificate_to_string, commutator_form_to_string, matrix_from_str,
    square_zero_sum_to_string, CertificateRepr,
};
use polyimage::{parse_poly_in, Field, Mat, Poly};

use crate::report::{self, class_name, confidence, confidence_text, join};
use crate::{Command, Common, Failure, Format};

struct Report {
    text: String,
    json: Value,
    /// Replaces `json` in the `--out` file.
    artifact: Option<String>,
    /// Printed normally, then turned into exit status 1.
    negative: Option<String>,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            artifact: None,
            negative: None,
        }
    }
}

fn read_arg(value: &str) -> Result<String, Failure> {
    match value.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {path}: {e}"))),
        None => Ok(value.to_string()),
    }
}

fn field(c: &Common) -> Result<Field, Failure> {
    Ok(Field::parse_tag(&c.field)?)
}

fn polys(c: &Common) -> Result<Vec<Poly>, Failure> {
    let field = field(c)?;
    if c.poly.is_empty() {
        return Err(Failure::Usage("--poly is required".into()));
    }
    c.poly
        .iter()
        .map(|p| Ok(parse_poly_in(read_arg(p)?.trim(), field)?))
        .collect()
}

fn poly(c: &Common) -> Result<Poly, Failure> {
    let mut ps = polys(c)?;
    if ps.len() != 1 {
        return Err(Failure::Usage("expected exactly one --poly".into()));
    }
    Ok(ps.remove(0))
}

fn matrix(value: &str) -> Result<Mat, Failure> {
    Ok(matrix_from_str(&read_arg(value)?)?)
}

fn target(c: &Common) -> Result<Mat, Failure> {
    let t = matrix(c.target.as_deref().ok_or_else(|| Failure::Usage("--target is required".into()))?)?;
    if t.field() != field(c)? {
        return Err(Failure::Usage(format!(
            "target is over {} but --field is {}",
            t.field(),
            c.field
        )));
    }
    Ok(t)
}

fn header(name: &str, c: &Common) -> Value {
    json!({"command": name, "seed": c.seed, "budget": c.budget})
}

fn with(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn seed_line(c: &Common) -> String {
    format!("seed {}, budget {}", c.seed, c.budget)
}

fn certificate_report(name: &str, c: &Common, mut cert: WaringCertificate) -> Result<Report, Failure> {
    cert.meta.insert("seed".into(), c.seed.to_string());
    cert.meta.insert("budget".into(), c.budget.to_string());
    if let Verdict::Invalid(reason) = verify_certificate(&cert) {
        return Err(Failure::Negative(format!("refusing to emit an invalid certificate: {reason}")));
    }
    let pairs = cert.difference_pairs();
    let mut text = format!(
        "certificate verified: {} terms{}\ntarget: {}\n{}",
        cert.len(),
        pairs.map(|p| format!(", {p} differences")).unwrap_or_default(),
        cert.target,
        seed_line(c)
    );
    for t in &cert.terms {
        text.push_str(&format!("\n  {} * {}   [{}]", t.coeff, t.witness.value, t.origin));
    }
    let json = with(
        header(name, c),
        json!({
            "verified": true,
            "terms": cert.len(),
            "difference_pairs": pairs,
            "certificate": serde_json::to_value(CertificateRepr::from(&cert)).expect("certificate serializes"),
        }),
    );
    Ok(Report {
        artifact: Some(certificate_to_string(&cert)),
        ..Report::new(text, json)
    })
}

fn execute(cmd: &Command) -> Result<(Report, &Common), Failure> {
    let report = match cmd {
        Command::Parse(c) => {
            let f = poly(c)?;
            let text = f.to_string();
            let json = json!({
                "command": "parse",
                "polynomial": text,
                "field": f.field().to_string(),
                "nvars": f.nvars(),
                "degree": f.degree(),
                "terms": f.num_terms(),
                "multilinear": f.is_multilinear(),
            });
            (Report::new(text, json), c)
        }
        Command::Classify(c) => {
            let f = poly(c)?;
            let r = classify_on_mn(&f, c.n, c.budget, c.seed)?;
            let name = class_name(r.class);
            let mut text = format!("{name}\nconfidence: {}", confidence_text(&r.confidence));
            if let Some(w) = &r.witness {
                text.push_str(&format!("\nwitness point: {}\nwitness value: {}", join(w.point.args()), w.value));
            }
            let json = with(
                header("classify", c),
                json!({
                    "polynomial": f.to_string(),
                    "n": c.n,
                    "class": name,
                    "confidence": confidence(&r.confidence),
                    "witness": r.witness.as_ref().map(report::witness),
                }),
            );
            let mut rep = Report::new(text, json);
            if r.class == ImageClass::Identity {
                rep.negative = Some(format!("{f} is an identity of M_{}", c.n));
            }
            (rep, c)
        }
        Command::CapelliDep(c) => {
            let fs = polys(c)?;
            let d = capelli_dependence_test(&fs, c.n, c.budget, c.seed)?;
            let json = with(
                header("capelli-dep", c),
                json!({
                    "polynomials": fs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "n": c.n,
                    "dependence": report::dependence(&d),
                }),
            );
            (Report::new(report::dependence_text(&d), json), c)
        }
        Command::PowerIndex(c) => {
            let f = poly(c)?;
            let r = power_dependence_index(&f, c.n, c.budget, c.seed)?;
            let text = format!(
                "k = {}\ndependence of 1..f^k: {}\nf..f^k: {}",
                r.k,
                confidence_text(&r.dependence),
                report::dependence_text(&r.independence)
            );
            let json = with(
                header("power-index", c),
                json!({
                    "polynomial": f.to_string(),
                    "n": c.n,
                    "k": r.k,
                    "dependence_confidence": confidence(&r.dependence),
                    "powers_independence": report::dependence(&r.independence),
                }),
            );
            (Report::new(text, json), c)
        }
        Command::FindInvertible(c) => {
            let f = poly(c)?;
            let w = find_invertible_witness(&f, c.n, c.budget, c.seed)?;
            let text = format!(
                "point: {}\nvalue: {}\ndet: {}",
                join(w.point.args()),
                w.value,
                w.value.det()
            );
            let json = with(
                header("find-invertible", c),
                json!({"polynomial": f.to_string(), "n": c.n, "witness": report::witness(&w), "det": w.value.det().to_string()}),
            );
            (Report::new(text, json), c)
        }
        Command::FindSpectrum(c) => {
            let f = poly(c)?;
            let s = find_split_spectrum_witness(&f, c.n, c.budget, c.seed)?;
            let spectrum: Vec<Value> = s
                .spectrum
                .iter()
                .map(|(l, m)| json!({"eigenvalue": l.to_string(), "multiplicity": m}))
                .collect();
            let text = format!(
                "point: {}\nvalue: {}\nspectrum: {}",
                join(s.witness.point.args()),
                s.witness.value,
                s.spectrum
                    .iter()
                    .map(|(l, m)| format!("{l} (x{m})"))
                    .collect::<Vec<_>>()
                    .join(", ")
            );
            let json = with(
                header("find-spectrum", c),
                json!({
                    "polynomial": f.to_string(),
                    "n": c.n,
                    "witness": report::witness(&s.witness),
                    "spectrum": spectrum,
                    "triangularizer": serde_json::to_value(polyimage::wire::ConjugatorRepr::from(&s.triangularizer)).expect("serializes"),
                }),
            );
            (Report::new(text, json), c)
        }
        Command::DecomposeSq0(c) => {
            let a = target(c)?;
            let s = traceless_four_square_zero(&a)?;
            let text = format!("{} square-zero parts\n{}", s.parts.len(), s.parts.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"));
            let artifact = square_zero_sum_to_string(&s);
            let json = with(
                json!({"command": "decompose-sq0"}),
                json!({"parts": report::mats(&s.parts), "target": report::mat(&s.target)}),
            );
            (
                Report {
                    artifact: Some(artifact),
                    ..Report::new(text, json)
                },
                c,
            )
        }
        Command::CommutatorRealize(c) => {
            let a = target(c)?;
            let form = commutator_realization(&a)?;
            let text = format!("x: {}\ny: {}", form.x, form.y);
            let json = json!({"command": "commutator-realize", "x": report::mat(&form.x), "y": report::mat(&form.y), "target": report::mat(&form.target)});
            (
                Report {
                    artifact: Some(commutator_form_to_string(&form)),
                    ..Report::new(text, json)
                },
                c,
            )
        }
        Command::Sq0Cert(c) => {
            let cert = target_square_zero_certificate(&poly(c)?, &target(c)?, c.budget, c.seed)?;
            (certificate_report("sq0-cert", c, cert)?, c)
        }
        Command::Waring(c) => {
            let cert = traceless_waring_certificate(&poly(c)?, &target(c)?, c.budget, c.seed)?;
            (certificate_report("waring", c, cert)?, c)
        }
        Command::Nine(c) => {
            let cert = linear_combination_nine(&poly(c)?, &target(c)?, c.budget, c.seed)?;
            (certificate_report("nine", c, cert)?, c)
        }
        Command::CommutatorCert { common: c, w, z } => {
            let cert = commutator_via_image(&poly(c)?, &matrix(w)?, &matrix(z)?, c.budget, c.seed)?;
            (certificate_report("commutator-cert", c, cert)?, c)
        }
        Command::Bound { common: c, k, regime } => {
            if *k == 0 {
                return Err(Failure::Usage("--k must be positive".into()));
            }
            let regimes = match regime {
                Some(tag) => vec![Regime::from_tag(tag).ok_or_else(|| Failure::Usage(format!("unknown regime {tag:?}")))?],
                None => Regime::ALL.to_vec(),
            };
            let reports: Vec<_> = regimes.iter().map(|r| bound_formula(*k, *r)).collect();
            let formula = reports[0].formula;
            let mut text = format!("1936k^2 + 22k at k = {k}: {formula}");
            for r in &reports {
                text.push_str(&format!("\n{}: {}  ({})", r.regime, r.constant, r.hypothesis));
            }
            let json = json!({
                "command": "bound",
                "k": k,
                "formula": formula,
                "regimes": reports.iter().map(|r| json!({"regime": r.regime.tag(), "constant": r.constant, "hypothesis": r.hypothesis})).collect::<Vec<_>>(),
            });
            (Report::new(text, json), c)
        }
        Command::Verify { common: c, cert } => {
            let cert = certificate_from_str(&read_arg(cert)?)?;
            let verdict = verify_certificate(&cert);
            let (text, json) = match &verdict {
                Verdict::Valid => (
                    format!("valid ({} terms)", cert.len()),
                    json!({"command": "verify", "valid": true, "terms": cert.len()}),
                ),
                Verdict::Invalid(reason) => (
                    format!("invalid: {reason}"),
                    json!({"command": "verify", "valid": false, "reason": reason}),
                ),
            };
            let mut rep = Report::new(text, json);
            if let Verdict::Invalid(reason) = verdict {
                rep.negative = Some(format!("certificate is invalid: {reason}"));
            }
            (rep, c)
        }
        Command::FlowDemo(c) => {
            let n = c.n;
            let d: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { (i + 1) as f64 } else { 0.0 }).collect())
                .collect();
            let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
            let x: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
            let lambdas: Vec<f64> = (2..=6).map(|k| 10f64.powi(-k)).collect();
            let rows = conjugation_flow_demo(&d, &x, &lambdas)?;
            let slope = loglog_slope(&rows);
            let mut text = String::from("lambda        residual");
            for r in &rows {
                text.push_str(&format!("\n{:<13e} {:e}", r.lambda, r.residual));
            }
            text.push_str(&format!(
                "\nlog-log slope: {}\nseed {}",
                slope.map_or("n/a".into(), |s| format!("{s:.4}")),
                c.seed
            ));
            let json = json!({
                "command": "flow-demo",
                "seed": c.seed,
                "x": x,
                "rows": rows.iter().map(|r| json!({"lambda": r.lambda, "residual": r.residual})).collect::<Vec<_>>(),
                "slope": slope,
            });
            (Report::new(text, json), c)
        }
    };
    Ok(report)
}

pub fn run(cmd: &Command) -> Result<(), Failure> {
    let (rep, c) = execute(cmd)?;
    let pretty = |v: &Value| serde_json::to_string_pretty(v).expect("json serializes") + "\n";
    match c.format {
        Format::Text => println!("{}", rep.text),
        Format::Structured => print!("{}", pretty(&rep.json)),
    }
    if let Some(out) = &c.out {
        let path = out.strip_prefix('@').unwrap_or(out);
        let body = rep.artifact.unwrap_or_else(|| pretty(&rep.json));
        fs::write(path, body).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
    }
    match rep.negative {
        Some(msg) => Err(Failure::Negative(msg)),
        None => Ok(()),
    }
}
