//! Acceptance suite. Each criterion runs sequentially (so the timing criterion
//! is not disturbed by concurrent work), prints one PASS/FAIL line, and the
//! process exits nonzero if any criterion fails or overruns its time budget.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use hamming_angle::angle::{angle_fast, is_max_angle, scalar_distances};
use hamming_angle::code::LinearCode;
use hamming_angle::experiments::{self, DecodingSuite};
use hamming_angle::vec::{nonzero_vectors, FqVector};
use hamming_angle::{cli, FieldElement, FieldSpec};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn field(q: u32) -> Arc<FieldSpec> {
    Arc::new(FieldSpec::with_order(q).expect("valid field order"))
}

fn parse(spec: &Arc<FieldSpec>, s: &str) -> FqVector {
    FqVector::parse(spec, s).expect("valid vector")
}

fn run_cli(args: &[&str]) -> (i32, serde_json::Value) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(std::iter::once("hangle").chain(args.iter().copied()), &mut out, &mut err);
    let doc = serde_json::from_slice(&out).unwrap_or(serde_json::Value::Null);
    (code, doc)
}

/// The worked example in F_3^3 through the `angle` command.
fn ac1_worked_example() -> Outcome {
    let (code, doc) = run_cli(&["angle", "--q", "3", "--u", "1,2,0", "--v", "1,1,2", "--verbose"]);
    ensure!(code == 0, "exit code {code}");
    ensure!(doc["angle"] == 2, "angle {}", doc["angle"]);
    ensure!(doc["argmin_c"] == 1, "argmin_c {}", doc["argmin_c"]);
    let trace = &doc["trace"];
    ensure!(
        *trace == serde_json::json!([{ "c": 1, "distance": 2 }, { "c": 2, "distance": 2 }]),
        "trace {trace}"
    );
    Ok("angle 2; c=1 -> 2, c=2 -> 2".into())
}

/// Over F_2 the angle is the Hamming distance.
fn ac2_binary_collapse() -> Outcome {
    let f2 = field(2);
    let mut pairs = 0u64;
    for n in 1..=8 {
        let all: Vec<_> = nonzero_vectors(&f2, n).collect();
        for u in &all {
            for v in &all {
                let a = angle_fast(u, v).map_err(|e| e.to_string())?;
                let d = u.hamming_distance(v).map_err(|e| e.to_string())?;
                ensure!(a == d, "n={n} u={u} v={v}: angle {a} != d_H {d}");
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs, n <= 8"))
}

fn ac3_metric_axioms() -> Outcome {
    let mut triples = 0;
    for (q, n) in [(2, 4), (3, 3), (4, 2), (5, 2), (7, 2)] {
        let r = experiments::verify_metric_axioms(&field(q), n).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "(q={q}, n={n}): {:?}", r.failures);
        ensure!(r.tallies["triples"] == r.checks_run, "(q={q}, n={n}) triple count");
        triples += r.checks_run;
    }
    Ok(format!("{triples} ordered triples, 0 failures"))
}

fn ac4_projective_descent() -> Outcome {
    let mut checks = 0;
    for (q, n) in [(3, 3), (4, 2)] {
        let r = experiments::verify_projective_descent(&field(q), n).map_err(|e| e.to_string())?;
        ensure!(r.passed(), "(q={q}, n={n}): {:?}", r.failures);
        checks += r.checks_run;
    }
    Ok(format!("{checks} checks, 0 failures"))
}

fn ac5_oracle_equivalence() -> Outcome {
    let mut pairs = 0;
    for q in [3, 5, 7, 8, 9, 16, 251] {
        let spec = field(q);
        for n in [10, 100, 1000] {
            let r = experiments::verify_oracle_equivalence(&spec, n, 10_000, 20_260_101 + u64::from(q))
                .map_err(|e| e.to_string())?;
            ensure!(r.checks_run == 10_000, "q={q} n={n}: {} checks", r.checks_run);
            ensure!(r.passed(), "q={q} n={n}: {:?}", r.failures);
            pairs += r.checks_run;
        }
    }
    Ok(format!("{pairs} pairs, 0 mismatches"))
}

fn ac6_performance() -> Outcome {
    let spec = field(251);
    let mut rng = experiments::trial_rng(6, 0);
    let u2 = experiments::random_nonzero_vector(&spec, 200_000, &mut rng);
    let v2 = experiments::random_nonzero_vector(&spec, 200_000, &mut rng);
    let prefix = |x: &FqVector| FqVector::from_elements(&spec, x.coords()[..100_000].to_vec()).unwrap();
    let (u1, v1) = (prefix(&u2), prefix(&v2));

    let bench = |algo, u, v, reps| experiments::bench_pair(algo, u, v, reps).map_err(|e| e.to_string());
    // Alternate the two lengths so both see the same machine conditions.
    let mut ratios = Vec::new();
    let (mut fast_1, mut fast_2) = (Vec::new(), Vec::new());
    for _ in 0..7 {
        let short = bench("fast", &u1, &v1, 9)?.median_ns;
        let long = bench("fast", &u2, &v2, 9)?.median_ns;
        ratios.push(long as f64 / short as f64);
        fast_1.push(short);
        fast_2.push(long);
    }
    ratios.sort_by(f64::total_cmp);
    fast_1.sort_unstable();
    fast_2.sort_unstable();
    let (scaling, fast_1, fast_2) = (ratios[3], fast_1[3], fast_2[3]);
    ensure!(
        (1.5..=3.0).contains(&scaling),
        "fast n=2e5 / n=1e5 = {scaling:.2} ({fast_2} ns / {fast_1} ns)"
    );

    let naive_1 = bench("naive", &u1, &v1, 9)?;
    let speedup = naive_1.median_ns as f64 / fast_1 as f64;
    ensure!(speedup.total_cmp(&20.0).is_ge(), "naive / fast at q=251, n=1e5 = {speedup:.1}");
    Ok(format!(
        "scaling {scaling:.2} (fast {fast_1} ns -> {fast_2} ns), naive/fast {speedup:.0}x"
    ))
}

fn ac7_max_angle() -> Outcome {
    let mut pairs = 0;
    for (q, n) in [(3, 3), (4, 2)] {
        let spec = field(q);
        let all: Vec<_> = nonzero_vectors(&spec, n).collect();
        for u in &all {
            for v in &all {
                let m = is_max_angle(u, v).map_err(|e| e.to_string())?;
                let a = angle_fast(u, v).map_err(|e| e.to_string())?;
                ensure!(m == (a == n), "q={q} u={u} v={v}: is_max {m}, angle {a}");
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn ac8_angle_vs_distance() -> Outcome {
    let f3 = field(3);
    let rep = LinearCode::repetition(&f3, 3).map_err(|e| e.to_string())?;
    let u = parse(&f3, "1,0,0");
    let dist = rep.dist_to_code(&u).map_err(|e| e.to_string())?;
    let angle = rep.angle_to_code(&u).map_err(|e| e.to_string())?;
    ensure!(dist == 1 && angle == 2, "repetition code: dist {dist}, angle {angle}");

    let rs = LinearCode::reed_solomon(&field(7), 7, 3, None).map_err(|e| e.to_string())?;
    let r = experiments::angle_vs_dist_census(&rs, 1000, 8).map_err(|e| e.to_string())?;
    ensure!(r.checks_run == 1000 && r.passed(), "RS(7,7,3): {:?}", r.failures);
    Ok(format!(
        "dist 1 < angle 2; RS(7,7,3) census {:?}",
        r.tallies
    ))
}

fn ac9_angular_decoding() -> Outcome {
    let f7 = field(7);
    let rs = LinearCode::reed_solomon(&f7, 7, 3, None).map_err(|e| e.to_string())?;
    let d = rs.min_distance().map_err(|e| e.to_string())?;
    ensure!(d == 5 && d == rs.n() - rs.k() + 1, "min distance {d}");

    let opts = DecodingSuite {
        seed: 9,
        all_scalars: true,
        exhaustive_limit: 1 << 20,
        ..DecodingSuite::default()
    };
    let r = experiments::verify_angular_decoding(&rs, &opts).map_err(|e| e.to_string())?;
    ensure!(r.tallies["exhaustive"] == 1, "decoding ran sampled, not exhaustive");
    ensure!(r.tallies["cases"] == 57 * (1 + 7 * 6 + 21 * 36), "cases {}", r.tallies["cases"]);
    ensure!(r.passed(), "{:?}", r.failures);

    let mut max_list = 0;
    for trial in 0..1000 {
        let mut rng = experiments::trial_rng(99, trial);
        let u = experiments::random_nonzero_vector(&f7, 7, &mut rng);
        for rho in 0..=2 {
            let list = rs.projective_list_decode(&u, rho).map_err(|e| e.to_string())?;
            ensure!(list.len() <= 1, "u={u} rho={rho}: list of {}", list.len());
            max_list = max_list.max(list.len());
        }
    }
    Ok(format!(
        "d=5; {} decodes over 57 directions x 799 patterns x 6 scalars; max list size {max_list}",
        r.checks_run / 2
    ))
}

fn ac10_one_way_orthogonality() -> Outcome {
    let f3 = field(3);
    let all: Vec<_> = nonzero_vectors(&f3, 3).collect();
    let mut max_pairs = 0;
    for u in &all {
        for v in &all {
            if is_max_angle(u, v).map_err(|e| e.to_string())? {
                let dot = u.dot(v).map_err(|e| e.to_string())?;
                ensure!(dot == FieldElement::ZERO, "u={u} v={v}: max angle but dot {dot}");
                max_pairs += 1;
            }
        }
    }
    let (u, v) = (parse(&f3, "1,2,0"), parse(&f3, "1,1,2"));
    let dot = u.dot(&v).map_err(|e| e.to_string())?;
    let angle = angle_fast(&u, &v).map_err(|e| e.to_string())?;
    ensure!(dot == FieldElement::ZERO && angle == 2, "witness: dot {dot}, angle {angle}");
    let dists = scalar_distances(&u, &v).map_err(|e| e.to_string())?;
    ensure!(dists.iter().all(|&(_, d)| d < 3), "witness distances {dists:?}");
    Ok(format!("{max_pairs} max-angle pairs all dot 0; witness dot 0, angle 2 < 3"))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion { name: "AC1 worked example in F_3^3", budget: Duration::from_millis(1), run: ac1_worked_example },
        Criterion { name: "AC2 q=2 collapse to Hamming distance", budget: Duration::from_secs(5), run: ac2_binary_collapse },
        Criterion { name: "AC3 metric axioms exhaustive", budget: Duration::from_secs(60), run: ac3_metric_axioms },
        Criterion { name: "AC4 projective well-definedness", budget: Duration::from_secs(10), run: ac4_projective_descent },
        Criterion { name: "AC5 fast equals naive", budget: Duration::from_secs(60), run: ac5_oracle_equivalence },
        Criterion { name: "AC6 linear scaling and speedup", budget: Duration::from_secs(120), run: ac6_performance },
        Criterion { name: "AC7 max-angle predicate", budget: Duration::from_secs(5), run: ac7_max_angle },
        Criterion { name: "AC8 angle vs distance to code", budget: Duration::from_secs(10), run: ac8_angle_vs_distance },
        Criterion { name: "AC9 angular unique decoding", budget: Duration::from_secs(120), run: ac9_angular_decoding },
        Criterion { name: "AC10 one-way orthogonality", budget: Duration::from_secs(5), run: ac10_one_way_orthogonality },
    ];

    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(c.run))
            .unwrap_or_else(|p| Err(format!("panicked: {p:?}")));
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= c.budget => ("PASS", detail),
            Ok(detail) => ("FAIL", format!("{detail}; over budget {:?}", c.budget)),
            Err(why) => ("FAIL", why),
        };
        if verdict.0 == "FAIL" {
            failed += 1;
        }
        println!("[{}] {} ({:.3?}): {}", verdict.0, c.name, elapsed, verdict.1);
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
