//! Exhaustive and randomized verification suites, plus timing of the two angle
//! algorithms.
//!
//! Every suite is deterministic in its parameters and seed. Randomized suites
//! draw each trial from its own ChaCha stream `(seed, trial index)`, so a
//! failing trial can be replayed in isolation.

use std::collections::BTreeMap;
use std::hint::black_box;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::angle::{
    angle_fast, angle_naive, build_census, projective_distance, projectivize, ProjectivePoint,
};
use crate::code::{DecodeKind, LinearCode};
use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldSpec};
use crate::vec::{nonzero_vectors, FqVector};

/// Largest number of nonzero vectors the exhaustive suites enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 10;

/// At most this many failures are kept verbatim; `failures_total` counts all.
const MAX_RECORDED_FAILURES: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub q: u32,
    pub n: usize,
    pub k: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub checks_run: u64,
    pub failures: Vec<String>,
    /// Suite-specific counters (pairs visited, decode outcomes, ...).
    pub tallies: BTreeMap<String, u64>,
    pub wall_time_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algo: String,
    pub q: u32,
    pub n: usize,
    pub repetitions: usize,
    pub median_ns: u64,
    /// Coordinates processed per second at the median.
    pub throughput: f64,
}

struct Recorder {
    report: SuiteReport,
    started: Instant,
}

impl Recorder {
    fn new(suite: &str, q: u32, n: usize) -> Self {
        Recorder {
            report: SuiteReport {
                suite: suite.to_string(),
                q,
                n,
                k: None,
                trials: None,
                seed: None,
                checks_run: 0,
                failures: Vec::new(),
                tallies: BTreeMap::new(),
                wall_time_ms: 0.0,
            },
            started: Instant::now(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.report.checks_run += 1;
        if !ok {
            self.fail(describe());
        }
    }

    /// A failure that is not tied to a counted check.
    fn fail(&mut self, msg: String) {
        *self.report.tallies.entry("failures_total".into()).or_default() += 1;
        if self.report.failures.len() < MAX_RECORDED_FAILURES {
            self.report.failures.push(msg);
        }
    }

    fn tally(&mut self, key: &str, by: u64) {
        *self.report.tallies.entry(key.into()).or_default() += by;
    }

    fn finish(mut self) -> SuiteReport {
        self.report.wall_time_ms = self.started.elapsed().as_secs_f64() * 1e3;
        self.report
    }
}

/// The generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

pub fn random_vector(spec: &Arc<FieldSpec>, n: usize, rng: &mut impl Rng) -> FqVector {
    let coords = (0..n)
        .map(|_| FieldElement(rng.gen_range(0..spec.order()) as u16))
        .collect();
    FqVector::from_parts(Arc::clone(spec), coords)
}

pub fn random_nonzero_vector(spec: &Arc<FieldSpec>, n: usize, rng: &mut impl Rng) -> FqVector {
    loop {
        let v = random_vector(spec, n, rng);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_nonzero_scalar(spec: &FieldSpec, rng: &mut impl Rng) -> FieldElement {
    FieldElement(rng.gen_range(1..spec.order()) as u16)
}

fn nonzero_universe(spec: &Arc<FieldSpec>, n: usize) -> Result<Vec<FqVector>> {
    let count = u64::from(spec.order())
        .checked_pow(n as u32)
        .map(|c| c - 1)
        .unwrap_or(u64::MAX);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::SuiteTooLarge {
            count,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    Ok(nonzero_vectors(spec, n).collect())
}

/// `u = c v` for some nonzero `c`, decided by trying every scalar.
fn is_scalar_multiple(u: &FqVector, v: &FqVector) -> bool {
    u.spec().nonzero_elements().any(|c| v.scalar_mul(c) == *u)
}

/// Scalar identifiability, symmetry and the triangle inequality over every
/// ordered pair and triple of nonzero vectors in `F_q^n`.
///
/// `checks_run` counts ordered triples; the pair-level checks are tallied
/// under `pairs`.
pub fn verify_metric_axioms(spec: &Arc<FieldSpec>, n: usize) -> Result<SuiteReport> {
    let all = nonzero_universe(spec, n)?;
    let size = all.len();
    let mut rec = Recorder::new("metric", spec.order(), n);

    let mut table = vec![0usize; size * size];
    for (i, u) in all.iter().enumerate() {
        for (j, v) in all.iter().enumerate() {
            table[i * size + j] = angle_fast(u, v)?;
        }
    }

    let mut pair_failures = Vec::new();
    for (i, u) in all.iter().enumerate() {
        for (j, v) in all.iter().enumerate() {
            let a = table[i * size + j];
            if (a == 0) != is_scalar_multiple(u, v) {
                pair_failures.push(format!("identity: u={u} v={v} angle={a}"));
            }
            if a != table[j * size + i] {
                pair_failures.push(format!(
                    "symmetry: u={u} v={v} angle(u,v)={a} angle(v,u)={}",
                    table[j * size + i]
                ));
            }
        }
    }
    rec.tally("pairs", (size * size) as u64);
    for msg in pair_failures {
        rec.fail(msg);
    }

    for i in 0..size {
        for j in 0..size {
            let a_ij = table[i * size + j];
            for k in 0..size {
                let (a_jk, a_ik) = (table[j * size + k], table[i * size + k]);
                rec.check(a_ik <= a_ij + a_jk, || {
                    format!(
                        "triangle: u={} v={} w={} angle(u,w)={a_ik} > {a_ij}+{a_jk}",
                        all[i], all[j], all[k]
                    )
                });
            }
        }
    }
    rec.tally("triples", (size * size * size) as u64);
    Ok(rec.finish())
}

/// Bi-scalar invariance `angle(a u, b v) = angle(u, v)` for all nonzero
/// `a, b`, and agreement of the projective distance on canonical
/// representatives with the brute-force angle.
pub fn verify_projective_descent(spec: &Arc<FieldSpec>, n: usize) -> Result<SuiteReport> {
    let all = nonzero_universe(spec, n)?;
    let mut rec = Recorder::new("projective", spec.order(), n);
    let scalars: Vec<_> = spec.nonzero_elements().collect();

    for u in &all {
        let pu = projectivize(u)?;
        for &alpha in &scalars {
            let scaled = u.scalar_mul(alpha);
            let ps = projectivize(&scaled)?;
            rec.check(ps == pu, || format!("normalization: u={u} alpha={alpha} gives {ps} vs {pu}"));
        }
    }

    for u in &all {
        let pu = projectivize(u)?;
        for v in &all {
            let base = angle_naive(u, v)?;
            let pd = projective_distance(&pu, &projectivize(v)?)?;
            rec.check(pd == base, || format!("projective: u={u} v={v} projective={pd} naive={base}"));
            for &alpha in &scalars {
                let su = u.scalar_mul(alpha);
                for &beta in &scalars {
                    let got = angle_fast(&su, &v.scalar_mul(beta))?;
                    rec.check(got == base, || {
                        format!("bi-scalar: u={u} v={v} alpha={alpha} beta={beta} got={got} expected={base}")
                    });
                }
            }
        }
    }
    rec.tally("pairs", (all.len() * all.len()) as u64);
    Ok(rec.finish())
}

/// Random pair for oracle trials: even trials are independent uniform
/// vectors, odd trials are a rescaled copy of `u` with a random fraction of
/// positions resampled, which exercises large agreement counts and ties.
fn oracle_pair(spec: &Arc<FieldSpec>, n: usize, trial: u64, rng: &mut impl Rng) -> (FqVector, FqVector) {
    let u = random_nonzero_vector(spec, n, rng);
    if trial.is_multiple_of(2) {
        return (u, random_nonzero_vector(spec, n, rng));
    }
    let alpha = random_nonzero_scalar(spec, rng);
    let noise: f64 = rng.gen();
    loop {
        let coords: Vec<_> = u
            .coords()
            .iter()
            .map(|&x| {
                if rng.gen_bool(noise) {
                    FieldElement(rng.gen_range(0..spec.order()) as u16)
                } else {
                    spec.mul(alpha, x)
                }
            })
            .collect();
        let v = FqVector::from_parts(Arc::clone(spec), coords);
        if !v.is_zero() {
            return (u, v);
        }
    }
}

/// `angle_fast == angle_naive` on `trials` random nonzero pairs.
pub fn verify_oracle_equivalence(
    spec: &Arc<FieldSpec>,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<SuiteReport> {
    if n == 0 {
        return Err(Error::EmptyVector);
    }
    let mut rec = Recorder::new("oracle", spec.order(), n);
    rec.report.trials = Some(trials);
    rec.report.seed = Some(seed);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let (u, v) = oracle_pair(spec, n, trial, &mut rng);
        let fast = angle_fast(&u, &v)?;
        let naive = angle_naive(&u, &v)?;
        let census = build_census(&u, &v)?.angle();
        rec.check(fast == naive && census == naive, || {
            format!("trial={trial} u={u} v={v} fast={fast} census={census} naive={naive}")
        });
    }
    Ok(rec.finish())
}

/// Options for [`verify_angular_decoding`].
#[derive(Debug, Clone)]
pub struct DecodingSuite {
    pub seed: u64,
    /// Decode every nonzero rescaling of each received word instead of one
    /// random rescaling.
    pub all_scalars: bool,
    /// Enumerate every (direction, error pattern) case when there are at most
    /// this many; otherwise sample.
    pub exhaustive_limit: u64,
    /// Number of sampled cases when not exhaustive.
    pub samples: u64,
    /// Extra cases with error weight at or beyond `d/2`. Outcomes are tallied,
    /// never counted as failures.
    pub overshoot_samples: u64,
}

impl Default for DecodingSuite {
    fn default() -> Self {
        DecodingSuite {
            seed: 0,
            all_scalars: false,
            exhaustive_limit: 1 << 16,
            samples: 1000,
            overshoot_samples: 0,
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n - i) / u128::from(i + 1))
}

/// Calls `f` with every error vector of Hamming weight `w`.
fn for_each_error(spec: &Arc<FieldSpec>, n: usize, w: usize, mut f: impl FnMut(FqVector)) {
    let q = spec.order() as u16;
    let mut support: Vec<usize> = (0..w).collect();
    loop {
        let mut values = vec![1u16; w];
        loop {
            let mut coords = vec![FieldElement::ZERO; n];
            for (&pos, &val) in support.iter().zip(&values) {
                coords[pos] = FieldElement(val);
            }
            f(FqVector::from_parts(Arc::clone(spec), coords));
            // Next value assignment in 1..q.
            let Some(i) = values.iter().rposition(|&x| x + 1 < q) else { break };
            values[i] += 1;
            values[i + 1..].iter_mut().for_each(|x| *x = 1);
        }
        // Next support in lexicographic order.
        let Some(i) = (0..w).rposition(|i| support[i] < n - w + i) else { break };
        support[i] += 1;
        for j in i + 1..w {
            support[j] = support[j - 1] + 1;
        }
    }
}

fn random_error(spec: &Arc<FieldSpec>, n: usize, w: usize, rng: &mut impl Rng) -> FqVector {
    let mut coords = vec![FieldElement::ZERO; n];
    for pos in rand::seq::index::sample(rng, n, w) {
        coords[pos] = random_nonzero_scalar(spec, rng);
    }
    FqVector::from_parts(Arc::clone(spec), coords)
}

fn random_direction(code: &LinearCode, rng: &mut impl Rng) -> Result<ProjectivePoint> {
    let k = code.k();
    let lead = rng.gen_range(0..k);
    let mut message = vec![FieldElement::ZERO; k];
    message[lead] = FieldElement::ONE;
    for slot in &mut message[lead + 1..] {
        *slot = FieldElement(rng.gen_range(0..code.spec().order()) as u16);
    }
    projectivize(&code.encode(&message)?)
}

/// Decodes rescaled, corrupted codewords and checks that the original
/// direction comes back as the unique answer, and that the projective list at
/// radius `ceil(d/2)` holds at most that one direction.
pub fn verify_angular_decoding(code: &LinearCode, opts: &DecodingSuite) -> Result<SuiteReport> {
    let spec = code.spec();
    let n = code.n();
    let d = code.min_distance()?;
    let max_weight = (d - 1) / 2;
    let list_rho = d.div_ceil(2);

    let mut rec = Recorder::new("decoding", spec.order(), n);
    rec.report.k = Some(code.k());
    rec.report.seed = Some(opts.seed);

    let patterns: u128 = (0..=max_weight)
        .map(|w| binomial(n as u64, w as u64) * u128::from(spec.order() - 1).pow(w as u32))
        .sum();
    let directions: Vec<ProjectivePoint> = code.projective_codewords()?.collect();
    let cases = patterns.saturating_mul(directions.len() as u128);
    let exhaustive = cases <= u128::from(opts.exhaustive_limit);
    rec.tally("directions", directions.len() as u64);
    rec.tally("exhaustive", u64::from(exhaustive));
    rec.tally("min_distance", d as u64);

    let mut case_index = 0u64;
    let mut run_case = |rec: &mut Recorder, dir: &ProjectivePoint, err: &FqVector| -> Result<()> {
        let received = dir.rep().add(err)?;
        let mut rng = trial_rng(opts.seed, case_index);
        case_index += 1;
        let scalars: Vec<FieldElement> = if opts.all_scalars {
            spec.nonzero_elements().collect()
        } else {
            vec![random_nonzero_scalar(spec, &mut rng)]
        };
        for alpha in scalars {
            let u = received.scalar_mul(alpha);
            match code.angular_decode(&u) {
                Ok(out) => rec.check(
                    out.kind == DecodeKind::UniqueDirection && out.direction() == Some(dir),
                    || format!("decode: direction={dir} error={err} alpha={alpha} got {:?}", out.best),
                ),
                Err(e) => rec.check(false, || format!("decode: direction={dir} error={err} alpha={alpha}: {e}")),
            }
            let list = code.projective_list_decode(&u, list_rho)?;
            rec.check(list.len() == 1 && list[0].point == *dir, || {
                format!("list: direction={dir} error={err} alpha={alpha} rho={list_rho} size={}", list.len())
            });
        }
        Ok(())
    };

    if exhaustive {
        for dir in &directions {
            for w in 0..=max_weight {
                let mut errors = Vec::new();
                for_each_error(spec, n, w, |e| errors.push(e));
                for e in &errors {
                    run_case(&mut rec, dir, e)?;
                }
            }
        }
        rec.tally("cases", cases as u64);
    } else {
        rec.report.trials = Some(opts.samples);
        for trial in 0..opts.samples {
            let mut rng = trial_rng(opts.seed ^ 0x5eed_0001, trial);
            let dir = random_direction(code, &mut rng)?;
            let w = rng.gen_range(0..=max_weight);
            let e = random_error(spec, n, w, &mut rng);
            run_case(&mut rec, &dir, &e)?;
        }
        rec.tally("cases", opts.samples);
    }

    for trial in 0..opts.overshoot_samples {
        let mut rng = trial_rng(opts.seed ^ 0x5eed_0002, trial);
        let dir = random_direction(code, &mut rng)?;
        let w = rng.gen_range(d.div_ceil(2)..=n);
        let e = random_error(spec, n, w, &mut rng);
        let u = dir.rep().add(&e)?;
        if u.is_zero() {
            rec.tally("overshoot_zero", 1);
            continue;
        }
        match code.angular_decode(&u) {
            Ok(out) if out.kind == DecodeKind::BeyondRadius => rec.tally("beyond_radius", 1),
            Ok(out) if out.direction() == Some(&dir) => rec.tally("overshoot_recovered", 1),
            Ok(_) => rec.tally("overshoot_other_direction", 1),
            Err(e) => rec.fail(format!("overshoot: direction={dir} error={e}")),
        }
    }
    Ok(rec.finish())
}

/// Samples nonzero words and checks `angle_to_code >= dist_to_code`, with
/// equality exactly when a nonzero codeword attains the classical distance.
pub fn angle_vs_dist_census(code: &LinearCode, sample_size: u64, seed: u64) -> Result<SuiteReport> {
    let spec = code.spec();
    let mut rec = Recorder::new("census", spec.order(), code.n());
    rec.report.k = Some(code.k());
    rec.report.trials = Some(sample_size);
    rec.report.seed = Some(seed);
    let words: Vec<FqVector> = code.codewords()?.collect();

    for trial in 0..sample_size {
        let mut rng = trial_rng(seed, trial);
        let u = random_nonzero_vector(spec, code.n(), &mut rng);
        let (angle, dist) = (code.angle_to_code(&u)?, code.dist_to_code(&u)?);
        let attained_nonzero = words
            .iter()
            .filter(|c| !c.is_zero())
            .any(|c| c.hamming_distance(&u).is_ok_and(|x| x == dist));
        rec.check(angle >= dist && (angle == dist) == attained_nonzero, || {
            format!("u={u} angle={angle} dist={dist} attained_nonzero={attained_nonzero}")
        });
        rec.tally(if angle == dist { "equal" } else { "strict" }, 1);
    }
    Ok(rec.finish())
}

fn median(mut xs: Vec<u64>) -> u64 {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

/// Times `f` over `reps` warm runs and reports the median.
pub fn time_median(reps: usize, mut f: impl FnMut()) -> u64 {
    let reps = reps.max(5);
    for _ in 0..2 {
        f();
    }
    let times = (0..reps)
        .map(|_| {
            let start = Instant::now();
            f();
            start.elapsed().as_nanos() as u64
        })
        .collect();
    median(times)
}

/// Median time of one angle evaluation by `algo` ("fast" or "naive").
pub fn bench_pair(algo: &str, u: &FqVector, v: &FqVector, reps: usize) -> Result<BenchRecord> {
    let run: fn(&FqVector, &FqVector) -> Result<usize> = match algo {
        "fast" => angle_fast,
        "naive" => angle_naive,
        other => return Err(Error::Parse(format!("unknown algorithm {other:?}"))),
    };
    run(u, v)?;
    let median_ns = time_median(reps, || {
        black_box(run(black_box(u), black_box(v)).expect("validated above"));
    });
    Ok(BenchRecord {
        algo: algo.to_string(),
        q: u.spec().order(),
        n: u.len(),
        repetitions: reps.max(5),
        median_ns,
        throughput: u.len() as f64 / (median_ns.max(1) as f64 * 1e-9),
    })
}

/// Times both algorithms on the same random nonzero pair for each length.
pub fn bench_angle(
    spec: &Arc<FieldSpec>,
    n_values: &[usize],
    repetitions: usize,
    seed: u64,
) -> Result<Vec<BenchRecord>> {
    let mut out = Vec::new();
    for (i, &n) in n_values.iter().enumerate() {
        if n == 0 {
            return Err(Error::EmptyVector);
        }
        let mut rng = trial_rng(seed, i as u64);
        let u = random_nonzero_vector(spec, n, &mut rng);
        let v = random_nonzero_vector(spec, n, &mut rng);
        out.push(bench_pair("fast", &u, &v, repetitions)?);
        out.push(bench_pair("naive", &u, &v, repetitions)?);
    }
    Ok(out)
}
