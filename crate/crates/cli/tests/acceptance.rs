use std::fs;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyimage::decompose::traceless_four_square_zero;
use polyimage::freealg::{ad_power, capelli};
use polyimage::images::{
    capelli_dependence_test, classify_on_mn, evaluate, exhaustive_image, Confidence, Dependence, EvalPoint,
    ImageClass, ImageWitness,
};
use polyimage::waring::{
    bound_formula, conj_difference_pair, conjugation_flow_demo, loglog_slope, target_square_zero_certificate,
    three_term_expansion, traceless_waring_certificate, verify_certificate, Regime, Verdict,
};
use polyimage::{parse_poly, parse_poly_in, Field, Mat, Poly, Word};

const Q: Field = Field::Rational;
const POLYS: [&str; 4] = ["[X1,X2]", "X1*X2", "[X1,X2]^3", "X1^2"];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn random_mat(rng: &mut impl Rng, field: Field, n: usize, h: i64) -> Mat {
    let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-h..=h)).collect()).collect();
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Mat::from_i64(field, &refs)
}

/// Entries in [-h, h], trace zero.
fn random_traceless(rng: &mut impl Rng, n: usize, h: i64) -> Mat {
    loop {
        let mut a = random_mat(rng, Q, n, h);
        let mut diag: Vec<i64> = (0..n - 1).map(|_| rng.gen_range(-h..=h)).collect();
        let last = -diag.iter().sum::<i64>();
        if last.abs() > h {
            continue;
        }
        diag.push(last);
        for (i, d) in diag.into_iter().enumerate() {
            a.set(i, i, Q.int(d));
        }
        return a;
    }
}

fn random_poly(rng: &mut impl Rng, field: Field, vars: u32, max_len: usize) -> Poly {
    loop {
        let raw: Vec<(Word, _)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let len = rng.gen_range(0..=max_len);
                let w = Word::new((0..len).map(|_| rng.gen_range(1..=vars)).collect());
                let mut c = rng.gen_range(-3..=3);
                if c == 0 {
                    c = 1;
                }
                (w, field.int(c))
            })
            .collect();
        let f = Poly::normalize(field, raw).expect("one field");
        if !f.is_zero() {
            return f;
        }
    }
}

fn point(rng: &mut impl Rng, m: usize, n: usize, h: i64) -> EvalPoint {
    EvalPoint::new((0..m.max(1)).map(|_| random_mat(rng, Q, n, h)).collect()).expect("nonempty")
}

fn canonical_square_zero(n: usize, r: usize) -> Mat {
    let mut u = Mat::zeros(Q, n);
    for i in 0..r {
        u.set(i, n / 2 + i, Q.one());
    }
    u
}

fn binomial(k: u32, i: u32) -> i64 {
    (0..i).fold(1i64, |acc, j| acc * (k - j) as i64 / (j + 1) as i64)
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for text in POLYS {
        let f = parse_poly(text).map_err(err)?;
        for n in 2..=4 {
            for i in 0..25 {
                let x = random_traceless(&mut rng, n, 10);
                let start = Instant::now();
                let cert = traceless_waring_certificate(&f, &x, 200, i).map_err(|e| format!("{text} n={n}: {e}"))?;
                slowest = slowest.max(start.elapsed());
                let pairs = cert.difference_pairs();
                ensure(matches!(pairs, Some(p) if p <= 4), || format!("{text} n={n}: pairs {pairs:?}"))?;
                ensure(verify_certificate(&cert) == Verdict::Valid, || format!("{text} n={n}: invalid"))?;
                ensure(cert.target == x, || "target changed".into())?;
                count += 1;
            }
        }
    }
    ensure(slowest < Duration::from_secs(5), || format!("slowest target took {slowest:?}"))?;
    Ok(format!("{count} certificates, slowest {:.2}s", slowest.as_secs_f64()))
}

fn criterion_2() -> Outcome {
    let mut slowest = Duration::ZERO;
    let mut count = 0;
    for text in POLYS {
        let f = parse_poly(text).map_err(err)?;
        for n in 2..=4 {
            for r in 0..=n / 2 {
                let s = canonical_square_zero(n, r);
                let start = Instant::now();
                let cert = target_square_zero_certificate(&f, &s, 200, r as u64)
                    .map_err(|e| format!("{text} n={n} r={r}: {e}"))?;
                slowest = slowest.max(start.elapsed());
                let expected = if r == 0 { 0 } else { 2 };
                ensure(cert.len() == expected, || format!("{text} n={n} r={r}: {} terms", cert.len()))?;
                ensure(verify_certificate(&cert) == Verdict::Valid, || format!("{text} n={n} r={r}: invalid"))?;
                count += 1;
            }
        }
    }
    ensure(slowest < Duration::from_secs(2), || format!("slowest took {slowest:?}"))?;
    Ok(format!("{count} ranks certified, slowest {:.2}s", slowest.as_secs_f64()))
}

fn criterion_3() -> Outcome {
    let checks = [
        (2, Regime::Commutative, 7788),
        (1, Regime::Commutative, 1958),
        (1, Regime::Hilbert, 3916),
        (1, Regime::Field, 68),
    ];
    for (k, regime, want) in checks {
        let got = bound_formula(k, regime).constant;
        ensure(got == want, || format!("k={k} {regime}: {got} != {want}"))?;
    }
    ensure(bound_formula(2, Regime::Field).formula == 7788, || "formula at k=2".into())?;
    Ok("7788 1958 3916 68".into())
}

fn criterion_4() -> Outcome {
    let sq = parse_poly("[X1,X2]^2").map_err(err)?;
    let c = classify_on_mn(&sq, 2, 200, 0).map_err(err)?;
    ensure(c.class == ImageClass::Central, || format!("[X1,X2]^2 on M2: {:?}", c.class))?;

    let c = classify_on_mn(&sq, 3, 200, 0).map_err(err)?;
    ensure(c.class == ImageClass::Neither, || format!("[X1,X2]^2 on M3: {:?}", c.class))?;
    let w = c.witness.ok_or("no witness on M3")?;
    ensure(w.check(&sq) && w.value.as_scalar().is_none(), || "bad M3 witness".into())?;

    let br = parse_poly("[X1,X2]").map_err(err)?;
    let c = classify_on_mn(&br, 1, 200, 0).map_err(err)?;
    ensure(c.class == ImageClass::Identity, || "[X1,X2] on M1".into())?;

    let c5 = capelli(Q, 5);
    let c = classify_on_mn(&c5, 2, 10_000, 0).map_err(err)?;
    ensure(c.class == ImageClass::Identity, || format!("c_5 on M2: {:?}", c.class))?;
    ensure(
        c.confidence == Confidence::Randomized { seed: 0, trials: 10_000 },
        || format!("c_5 confidence {:?}", c.confidence),
    )?;

    let x = parse_poly("X1").map_err(err)?;
    for n in [2usize, 3] {
        let powers: Vec<Poly> = (0..=n as u32).map(|k| x.pow(k)).collect();
        let d = capelli_dependence_test(&powers, n, 200, 0).map_err(err)?;
        ensure(d.is_dependent(), || format!("1, X1, .., X1^{n} independent on M{n}"))?;
        let fewer = capelli_dependence_test(&powers[..n], n, 200, 0).map_err(err)?;
        match fewer {
            Dependence::Independent(w) => ensure(w.check(&powers[..n]), || "bad independence witness".into())?,
            _ => return Err(format!("1, .., X1^{} dependent on M{n}", n - 1)),
        }
    }
    Ok("central / neither / identity / c_5 (10^4 trials) / power dependence".into())
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = parse_poly("[X1,X2]").map_err(err)?;
    for _ in 0..100 {
        let t = ImageWitness::new(&f, point(&mut rng, 2, 3, 5)).map_err(err)?;
        let v: Vec<i64> = (0..3).map(|_| rng.gen_range(-4..=4)).collect();
        let mut w: Vec<i64> = (0..3).map(|_| rng.gen_range(-4..=4)).collect();
        let dot: i64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        // Make w orthogonal to v so that v w^T squares to zero.
        let pivot = (0..3).find(|&i| v[i] != 0);
        if let Some(i) = pivot {
            w = w.iter().map(|&wj| wj * v[i]).collect();
            w[i] -= dot;
        }
        let rows: Vec<Vec<i64>> = v.iter().map(|&a| w.iter().map(|&b| a * b).collect()).collect();
        let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        let u = Mat::from_i64(Q, &refs);
        ensure((&u * &u).is_zero(), || "u^2 != 0".into())?;
        let (c1, c2) = conj_difference_pair(&t, &u).map_err(err)?;
        ensure(c1.check(&f) && c2.check(&f), || "conjugated witness does not re-evaluate".into())?;
        ensure(&c1.value - &c2.value == t.value.commutator(&u), || "ls(a) identity fails".into())?;
    }
    let mut done = 0;
    while done < 100 {
        let [t1, t2, w, z] = [0; 4].map(|_| random_mat(&mut rng, Q, 3, 5));
        if t1.commutator(&t2).det().is_zero() {
            continue;
        }
        let [a, b, c] = three_term_expansion(&t1, &t2, &w, &z).map_err(err)?;
        ensure(&(&a + &b) + &c == w.commutator(&z), || "three-term identity fails".into())?;
        done += 1;
    }
    for text in ["X1", "X1*X2", "[X1,X2]"] {
        let f = parse_poly(text).map_err(err)?;
        let m = f.nvars();
        for k in 0..=5u32 {
            let pt = point(&mut rng, m + 1, 3, 4);
            let a = evaluate(&f, &EvalPoint::new(pt.args()[..m].to_vec()).map_err(err)?).map_err(err)?;
            let x = &pt.args()[m];
            let mut expected = Mat::zeros(Q, 3);
            for i in 0..=k {
                let term = &(&a.pow(k - i) * x) * &a.pow(i);
                let c = Q.int(if i % 2 == 0 { 1 } else { -1 } * binomial(k, i));
                expected = &expected + &term.scale(&c);
            }
            let got = evaluate(&ad_power(&f, k), &pt).map_err(err)?;
            ensure(got == expected, || format!("ad_power({text}, {k}) mismatch"))?;
        }
    }
    Ok("100 ls(a), 100 three-term, ad powers k <= 5".into())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut families = 0;
    let mut attempts = 0;
    while families < 50 {
        attempts += 1;
        if attempts > 2000 {
            return Err(format!("only {families} independent families sampled"));
        }
        let n = if families % 2 == 0 { 2 } else { 3 };
        let s = rng.gen_range(1..=3);
        let fs: Vec<Poly> = (0..s).map(|_| random_poly(&mut rng, Q, 2, 3)).collect();
        let seed = attempts as u64;
        let Dependence::Independent(w) = capelli_dependence_test(&fs, n, 200, seed).map_err(err)? else {
            continue;
        };
        ensure(w.check(&fs), || "bad witness for f family".into())?;
        let h = random_poly(&mut rng, Q, 2, 3);
        let hfs: Vec<Poly> = fs.iter().map(|f| &h * f).collect();
        match capelli_dependence_test(&hfs, n, 200, seed).map_err(err)? {
            Dependence::Independent(w) => ensure(w.check(&hfs), || "bad witness for h family".into())?,
            Dependence::Dependent { .. } => {
                return Err(format!(
                    "counterexample on M{n}: h = {h}, fs = [{}]",
                    fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
                ))
            }
        }
        families += 1;
    }
    Ok(format!("{families} families, {attempts} sampled"))
}

fn exhaustive_dependent(fs: &[Poly], p: u64) -> bool {
    let field = Field::Prime(p);
    let all: Vec<Mat> = (0..p.pow(4))
        .map(|mut k| {
            let mut e = [0i64; 4];
            for slot in &mut e {
                *slot = (k % p) as i64;
                k /= p;
            }
            Mat::from_i64(field, &[&e[..2], &e[2..]])
        })
        .collect();
    let m = fs.iter().map(Poly::nvars).max().unwrap_or(0).max(1);
    let mut idx = vec![0usize; m];
    loop {
        let pt = EvalPoint::new(idx.iter().map(|&i| all[i].clone()).collect()).expect("nonempty");
        let mut cols: Vec<Vec<_>> = fs.iter().map(|f| evaluate(f, &pt).unwrap().entries().to_vec()).collect();
        while cols.len() < 4 {
            cols.push(vec![field.zero(); 4]);
        }
        if Mat::from_columns(field, &cols).rank() == fs.len() {
            return false;
        }
        let mut j = 0;
        loop {
            if j == m {
                return true;
            }
            idx[j] += 1;
            if idx[j] < all.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn criterion_7() -> Outcome {
    let f2 = Field::Prime(2);
    let squares = exhaustive_image(&parse_poly_in("X1^2", f2).map_err(err)?, 2, 2).map_err(err)?;
    ensure(!squares.contains(&Mat::unit(f2, 2, 0, 1)), || "e12 is a square over F_2".into())?;
    ensure(squares.contains(&Mat::identity(f2, 2)), || "identity missing".into())?;

    let f3 = Field::Prime(3);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut dep, mut indep) = (0, 0);
    for i in 0..20 {
        let s = rng.gen_range(2..=4);
        let mut fs: Vec<Poly> = (0..s).map(|_| random_poly(&mut rng, f3, 2, 3)).collect();
        if i % 3 == 0 {
            let c = f3.int(rng.gen_range(1..=2));
            fs[s - 1] = &fs[0] + &fs[1].scale(&c);
        }
        let want = exhaustive_dependent(&fs, 3);
        let got = capelli_dependence_test(&fs, 2, 200, i).map_err(err)?;
        ensure(got.is_dependent() == want, || {
            format!(
                "family [{}]: test says {}, enumeration says {}",
                fs.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "),
                got.is_dependent(),
                want
            )
        })?;
        if let Dependence::Independent(w) = &got {
            ensure(w.check(&fs), || "bad witness".into())?;
        }
        if want {
            dep += 1;
        } else {
            indep += 1;
        }
    }
    Ok(format!("e12 not a square over F_2; 20 families agree ({dep} dependent, {indep} independent)"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [2usize, 3] {
        let f = parse_poly(&format!("[X1,X2] + 1/{n}")).map_err(err)?;
        let mut values = Vec::new();
        for _ in 0..500 {
            let v = evaluate(&f, &point(&mut rng, 2, n, 20)).map_err(err)?;
            ensure(v.trace() == Q.one(), || format!("trace {} on M{n}", v.trace()))?;
            values.push(v);
        }
        // A combination with positive coefficients has trace equal to their sum,
        // so it never reaches a traceless target such as 0.
        for chunk in values.chunks(5) {
            let coeffs: Vec<i64> = chunk.iter().map(|_| rng.gen_range(1..=9)).collect();
            let mut sum = Mat::zeros(Q, n);
            for (c, v) in coeffs.iter().zip(chunk) {
                sum = &sum + &v.scale(&Q.int(*c));
            }
            let total: i64 = coeffs.iter().sum();
            ensure(sum.trace() == Q.int(total), || "trace bookkeeping".into())?;
            ensure(!sum.trace().is_zero() && !sum.is_zero(), || "reached a traceless matrix".into())?;
        }
    }
    Ok("1000 evaluations with trace 1".into())
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..100 {
        let n = 2 + i % 4;
        let a = random_traceless(&mut rng, n, 10);
        let s = traceless_four_square_zero(&a).map_err(err)?;
        ensure(s.parts.len() <= 4, || format!("{} parts", s.parts.len()))?;
        let mut sum = Mat::zeros(Q, n);
        for u in &s.parts {
            ensure((u * u).is_zero(), || "part does not square to zero".into())?;
            ensure(u.rank() <= n / 2, || format!("rank {} > {}", u.rank(), n / 2))?;
            sum = &sum + u;
        }
        ensure(sum == a && s.check(), || "sum mismatch".into())?;
    }
    Ok("100 decompositions".into())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let d: Vec<Vec<f64>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { (i + 1) as f64 } else { 0.0 }).collect())
        .collect();
    let x: Vec<Vec<f64>> = (0..3).map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let lambdas: Vec<f64> = (2..=6).map(|k| 10f64.powi(-k)).collect();
    let rows = conjugation_flow_demo(&d, &x, &lambdas).map_err(err)?;
    ensure(
        rows.windows(2).all(|w| w[1].residual < w[0].residual),
        || "residuals do not decrease".into(),
    )?;
    let slope = loglog_slope(&rows).ok_or("no slope")?;
    ensure((slope - 1.0).abs() <= 0.2, || format!("slope {slope}"))?;
    Ok(format!("slope {slope:.4}"))
}

fn criterion_11() -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let target = dir.path().join("target.json");
    fs::write(
        &target,
        r#"{"n": 3, "field": "Q", "rows": [["1", "2", "0"], ["3", "-4", "1"], ["0", "5", "3"]]}"#,
    )
    .map_err(err)?;
    let target_arg = format!("@{}", target.display());
    let runs: Vec<Vec<&str>> = vec![
        vec!["classify", "--poly", "[X1,X2]^2", "--n", "3", "--seed", "11"],
        vec!["capelli-dep", "--poly", "X1", "--poly", "X1^2", "--n", "2", "--seed", "3"],
        vec!["find-spectrum", "--poly", "X1*X2 + X2", "--n", "4", "--seed", "5"],
        vec!["waring", "--poly", "[X1,X2]", "--n", "3", "--seed", "7", "--target", &target_arg],
        vec!["nine", "--poly", "X1^2", "--n", "3", "--seed", "9", "--target", &target_arg],
        vec!["flow-demo", "--n", "3", "--seed", "2"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for round in 0..2 {
            let out = dir.path().join(format!("out-{i}-{round}.json"));
            let o = Command::new(env!("CARGO_BIN_EXE_polyimage"))
                .args(args)
                .args(["--format", "structured", "--out"])
                .arg(&out)
                .output()
                .map_err(err)?;
            ensure(o.status.success(), || format!("{args:?}: {}", String::from_utf8_lossy(&o.stderr)))?;
            outputs.push((o.stdout, fs::read(&out).map_err(err)?));
        }
        ensure(outputs[0] == outputs[1], || format!("{args:?} differs between runs"))?;
    }
    Ok(format!("{} commands byte-identical", runs.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("four-pair Waring certificates", criterion_1),
        ("square-zero totality", criterion_2),
        ("bound arithmetic", criterion_3),
        ("classification regressions", criterion_4),
        ("identity verifications", criterion_5),
        ("left multiplication keeps independence", criterion_6),
        ("finite-field oracles", criterion_7),
        ("trace negative control", criterion_8),
        ("four-square-zero decomposer", criterion_9),
        ("flow demo slope", criterion_10),
        ("reproducibility", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
