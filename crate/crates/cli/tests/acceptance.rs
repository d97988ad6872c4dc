//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tower::ServiceExt;
use tropical_ahp::document::{parse_problem, rate_document, DocOptions, Entry};
use tropical_ahp::semiring::spectral_radius;
use tropical_ahp::{
    best_diff_solutions, least_diff_solutions, solve_min_form, PosMatrix, SolutionSet, Tolerance,
};
use tropical_ahp_cli::server::{router, ServerConfig};

const VACATION_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/examples/vacation.json");
const VACATION: &str = include_str!("../../../docs/examples/vacation.json");
const REL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, rel: f64, what: &str) -> Result<(), String> {
    ensure(oracle::rel_close(a, b, rel), || format!("{what}: {a} vs {b}"))
}

fn within(limit: Duration, started: Instant, what: &str) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn p5(e: f64) -> f64 {
    5f64.powf(e)
}

fn vector(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

fn matrix(v: &Value) -> oracle::Mat {
    v.as_array().unwrap().iter().map(vector).collect()
}

fn vacation_golden() -> Outcome {
    let started = Instant::now();
    let doc = rate_document(VACATION.as_bytes(), &DocOptions::default()).map_err(|e| e.to_string())?;
    let v = serde_json::to_value(&doc).unwrap();

    close(doc.criteria.optimum.unwrap_or(0.0), p5(0.75), REL, "lambda")?;
    let weights = [1.0, p5(0.25), p5(0.5), p5(0.75), 3.0 * p5(-0.75)];
    ensure(oracle::collinear(&doc.criteria.combining_weights, &weights, REL), || {
        format!("weights {:?}", doc.criteria.combining_weights)
    })?;

    let mu = 2.0 * p5(5.0 / 8.0) * 7f64.sqrt();
    close(doc.optimum, mu, REL, "mu")?;

    let r = 2.0 * 7f64.sqrt() * p5(-1.0 / 8.0);
    let b = vec![
        vec![1.0, r / 4.0, 0.75],
        vec![3.0 / r, 1.0, 3.0 / r],
        vec![4.0 / r, 1.0, 3.0 / r],
        vec![1.0, r / 4.0, 1.0],
    ];
    let got = matrix(&v["generators"]);
    for j in 0..got[0].len() {
        ensure(oracle::in_span(&b, &oracle::column(&got, j), REL), || format!("generator {} outside B", j + 1))?;
    }
    for j in 0..3 {
        ensure(oracle::in_span(&got, &oracle::column(&b, j), REL), || format!("B column {} not generated", j + 1))?;
    }

    let rounded = |x: &[f64]| x.iter().map(|v| format!("{v:.4}")).collect::<Vec<_>>().join(", ");
    let most = &doc.most_differentiating;
    close(most.value, r / 3.0, REL, "best delta")?;
    let most_reps: Vec<String> = most.representatives.iter().map(|x| rounded(&x.scores)).collect();
    ensure(
        most_reps == ["1.0000, 0.6933, 0.9244, 1.0000", "0.7500, 0.6933, 0.6933, 1.0000"],
        || format!("most differentiating {most_reps:?}"),
    )?;
    let least = &doc.least_differentiating;
    close(least.value, r / 4.0, REL, "least delta")?;
    let least_reps: Vec<String> = least.representatives.iter().map(|x| rounded(&x.scores)).collect();
    ensure(least_reps == ["1.0000, 0.9244, 0.9244, 1.0000"], || {
        format!("least differentiating {least_reps:?}")
    })?;
    ensure(doc.combined_order == "(4) >= (1) > (3) >= (2)", || {
        format!("combined order {}", doc.combined_order)
    })?;
    within(Duration::from_secs(1), started, "vacation run")?;
    Ok(format!("mu = {:.6}, order {}", doc.optimum, doc.combined_order))
}

fn spectral_radius_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for case in 0..500 {
        let n = rng.random_range(1..=5);
        let a = oracle::random_positive(&mut rng, n, n);
        let lambda = spectral_radius(&PosMatrix::from_rows(&a).unwrap()).map_err(|e| e.to_string())?;
        close(lambda, oracle::cycle_radius(&a), REL, &format!("case {case} (n = {n})"))?;
    }
    within(Duration::from_secs(10), started, "500 matrices")?;
    Ok(format!("500 matrices in {:?}", started.elapsed()))
}

fn optimality() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut generated = 0usize;
    for case in 0..200 {
        let n = rng.random_range(2..=6);
        let a = oracle::random_reciprocal(&mut rng, n);
        let s = solve_min_form(&PosMatrix::from_rows(&a).unwrap(), &tol).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let x = oracle::random_vector(&mut rng, n, 2.0);
            let v = oracle::conj_form(&a, &x);
            ensure(v >= s.optimum * (1.0 - REL), || format!("case {case}: {v} below {}", s.optimum))?;
        }
        let p = s.generators.cols();
        let mut solutions = s.generators.columns();
        for _ in 0..100 {
            solutions.push(s.member(&oracle::random_vector(&mut rng, p, 3.0)).unwrap());
        }
        for x in &solutions {
            close(oracle::conj_form(&a, x), s.optimum, REL, &format!("case {case} solution"))?;
        }
        generated += solutions.len();
    }
    Ok(format!("200 matrices, 200000 trial vectors, {generated} solutions checked"))
}

fn seminorm_bracketing() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut worst_gap = 0.0f64;
    for case in 0..100 {
        let n = rng.random_range(3..=6);
        let p = rng.random_range(1..=4);
        let b = oracle::random_positive(&mut rng, n, p);
        let s = SolutionSet {
            optimum: 1.0,
            generators: PosMatrix::from_rows(&b).unwrap(),
        };
        let best = best_diff_solutions(&s, &tol).map_err(|e| e.to_string())?.value;
        let least = least_diff_solutions(&s, &tol).map_err(|e| e.to_string())?.value;
        let mut sampled_max = 0.0f64;
        let mut u = vec![0.0; p];
        for _ in 0..100_000 {
            for x in u.iter_mut() {
                *x = oracle::log_uniform(&mut rng, 4.0);
            }
            let d = oracle::contrast(&oracle::apply(&b, &u));
            ensure(d <= best * (1.0 + REL), || format!("case {case}: sample {d} above best {best}"))?;
            ensure(d >= least * (1.0 - REL), || format!("case {case}: sample {d} below least {least}"))?;
            sampled_max = sampled_max.max(d);
        }
        let gap = 1.0 - sampled_max / best;
        ensure(gap <= 0.01, || format!("case {case}: sampled maximum {sampled_max} vs best {best}"))?;
        worst_gap = worst_gap.max(gap);
    }
    Ok(format!("100 sets, 10^5 samples each, worst shortfall {:.2e}", worst_gap))
}

fn consistent_fixed_point() -> Outcome {
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for case in 0..100 {
        let n = rng.random_range(2..=8);
        let x = oracle::random_vector(&mut rng, n, 2.0);
        let a = PosMatrix::from_rows(&oracle::consistent(&x)).unwrap();
        let s = solve_min_form(&a, &tol).map_err(|e| e.to_string())?;
        close(s.optimum, 1.0, REL, &format!("case {case} lambda"))?;
        ensure(s.is_unique(), || format!("case {case}: {} generators", s.generators.cols()))?;
        ensure(oracle::collinear(&s.generators.column(0), &x, REL), || format!("case {case}: generator not collinear"))?;
    }
    Ok("100 vectors".into())
}

fn io_round_trip() -> Outcome {
    let doc = parse_problem(VACATION.as_bytes()).map_err(|e| e.to_string())?;
    let s = 1.0 / 7.0;
    let printed: [[[f64; 4]; 4]; 5] = [
        [[1.0, 3.0, 7.0, 9.0], [1.0 / 3.0, 1.0, 6.0, 7.0], [s, 1.0 / 6.0, 1.0, 3.0], [1.0 / 9.0, s, 1.0 / 3.0, 1.0]],
        [[1.0, 0.2, 1.0 / 6.0, 0.25], [5.0, 1.0, 2.0, 4.0], [6.0, 0.5, 1.0, 6.0], [4.0, 0.25, 1.0 / 6.0, 1.0]],
        [[1.0, 7.0, 7.0, 0.5], [s, 1.0, 1.0, s], [s, 1.0, 1.0, s], [2.0, 7.0, 7.0, 1.0]],
        [[1.0, 4.0, 0.25, 1.0 / 3.0], [0.25, 1.0, 0.5, 3.0], [4.0, 2.0, 1.0, 3.0], [3.0, 1.0 / 3.0, 1.0 / 3.0, 1.0]],
        [[1.0, 1.0, 7.0, 4.0], [1.0, 1.0, 6.0, 3.0], [s, 1.0 / 6.0, 1.0, 0.25], [0.25, 1.0 / 3.0, 4.0, 1.0]],
    ];
    let a0: [[f64; 5]; 5] = [
        [1.0, 0.2, 0.2, 1.0, 1.0 / 3.0],
        [5.0, 1.0, 0.2, 0.2, 1.0],
        [5.0, 5.0, 1.0, 0.2, 1.0],
        [1.0, 5.0, 5.0, 1.0, 5.0],
        [3.0, 1.0, 1.0, 0.2, 1.0],
    ];
    let exact = |e: Entry, what: &str| -> Result<f64, String> {
        match e {
            Entry::Exact(r) if *r.numer() > 0 => Ok(e.value()),
            _ => Err(format!("{what} is not an exact positive ratio")),
        }
    };
    let m0 = doc.criteria_matrix.as_ref().ok_or("criteria matrix missing")?;
    for i in 0..5 {
        for j in 0..5 {
            let v = exact(m0.entry(i, j), "criteria entry")?;
            ensure(v == a0[i][j], || format!("criteria ({}, {}): {v}", i + 1, j + 1))?;
        }
    }
    for (k, m) in doc.matrices.iter().enumerate() {
        for i in 0..4 {
            for j in 0..4 {
                let v = exact(m.entry(i, j), "alternative entry")?;
                ensure(v == printed[k][i][j], || format!("matrix {} ({}, {}): {v}", k + 1, i + 1, j + 1))?;
            }
        }
    }

    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = tropical_ahp_cli::run(["tropahp", "rate", "--format", "json", VACATION_PATH], &mut out, &mut err);
    ensure(code == 0, || String::from_utf8_lossy(&err).into_owned())?;
    let cli: Value = serde_json::from_slice(&out).map_err(|e| e.to_string())?;

    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    let (status, http) = runtime.block_on(async {
        let req = Request::builder()
            .method("POST")
            .uri("/v1/rate")
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(VACATION))
            .unwrap();
        let resp = router(&ServerConfig::default()).oneshot(req).await.unwrap();
        let status = resp.status();
        let bytes = resp.into_body().collect().await.unwrap().to_bytes();
        (status, serde_json::from_slice::<Value>(&bytes))
    });
    ensure(status == StatusCode::OK, || format!("HTTP status {status}"))?;
    let http = http.map_err(|e| e.to_string())?;
    ensure(cli == http, || "CLI and HTTP documents differ".into())?;
    Ok("6 matrices exact, CLI and HTTP documents identical".into())
}

fn main() {
    let criteria: [(&str, Check); 6] = [
        ("vacation golden", vacation_golden),
        ("spectral radius vs cycle enumeration", spectral_radius_oracle),
        ("optimality of the minimum", optimality),
        ("seminorm bracketing", seminorm_bracketing),
        ("consistent matrix fixed point", consistent_fixed_point),
        ("upper-triangle input and CLI/HTTP agreement", io_round_trip),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let t = started.elapsed();
        match outcome {
            Ok(detail) => println!("PASS  {name}  [{detail}] ({t:.2?})"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}  [{why}] ({t:.2?})");
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
