use serde_json::{json, Value};

use polyimage::images::{Confidence, Dependence, ImageClass, ImageWitness, IndependenceWitness};
use polyimage::wire::{ConjugatorRepr, MatrixRepr};
use polyimage::Mat;

pub fn mat(a: &Mat) -> Value {
    serde_json::to_value(MatrixRepr::from(a)).expect("matrix serializes")
}

pub fn mats(ms: &[Mat]) -> Value {
    Value::Array(ms.iter().map(mat).collect())
}

pub fn witness(w: &ImageWitness) -> Value {
    let mut v = json!({
        "point": mats(w.point.args()),
        "value": mat(&w.value),
    });
    if let Some(c) = &w.conjugator {
        v["conjugator"] = serde_json::to_value(ConjugatorRepr::from(c)).expect("conjugator serializes");
    }
    v
}

pub fn class_name(c: ImageClass) -> &'static str {
    match c {
        ImageClass::Identity => "identity",
        ImageClass::Central => "central",
        ImageClass::Neither => "neither",
    }
}

pub fn confidence(c: &Confidence) -> Value {
    match c {
        Confidence::Proven => json!({"kind": "proven"}),
        Confidence::Randomized { seed, trials } => json!({"kind": "randomized", "seed": seed, "trials": trials}),
    }
}

pub fn confidence_text(c: &Confidence) -> String {
    match c {
        Confidence::Proven => "proven".into(),
        Confidence::Randomized { seed, trials } => format!("randomized, seed {seed}, {trials} trials"),
    }
}

pub fn independence(w: &IndependenceWitness) -> Value {
    json!({
        "point": mats(w.point.args()),
        "ys": mats(&w.ys),
        "values": mats(&w.values),
        "capelli_value": mat(&w.capelli_value),
    })
}

pub fn dependence(d: &Dependence) -> Value {
    match d {
        Dependence::Dependent { confidence: c } => json!({"result": "dependent", "confidence": confidence(c)}),
        Dependence::Independent(w) => json!({"result": "independent", "witness": independence(w)}),
    }
}

pub fn dependence_text(d: &Dependence) -> String {
    match d {
        Dependence::Dependent { confidence: c } => format!("dependent ({})", confidence_text(c)),
        Dependence::Independent(w) => format!(
            "independent\npoint: {}\ncapelli value: {}",
            join(w.point.args()),
            w.capelli_value
        ),
    }
}

pub fn join(ms: &[Mat]) -> String {
    ms.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}
