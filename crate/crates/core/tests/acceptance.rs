//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p fuzzy-rulegen --test acceptance`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fuzzy_rulegen::classifiers::{certainty_grade, fit_simple_grid, histogram_bounds};
use fuzzy_rulegen::dataset::{normalize, parse_wdbc, Diagnosis, RawRecord};
use fuzzy_rulegen::io::{load_rulebase, rulebase_to_string, save_rulebase};
use fuzzy_rulegen::membership::{build_uniform_partition, MembershipFunction};
use fuzzy_rulegen::{
    cli, compare_methods, evaluate, fit, Classifier, Dataset, FitConfig, Method, Outcome, Pattern, SplitScheme,
};

const REFERENCE_MEAN_STD: f64 = 92.2;
const REFERENCE_HISTOGRAM: f64 = 86.7;
const MEAN_STD_TOLERANCE: f64 = 3.0;
const HISTOGRAM_TOLERANCE: f64 = 5.0;
const SIMPLE_GRID_FLOOR: f64 = 95.0;
/// "Materially below": at least this many percentage points under the simple grid.
const MODIFIED_GRID_MIN_GAP: f64 = 5.0;
const RUNTIME_BUDGET_SECS: f64 = 10.0;

struct Suite {
    failures: usize,
}

impl Suite {
    fn record(&mut self, id: &str, name: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("[FAIL] {id} {name}: {detail}");
            }
        }
    }

    /// Out-of-tolerance values are printed but do not fail the run.
    fn report(&mut self, id: &str, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL (reported, non-gating)" };
        println!("[{tag}] {id} {name}: {detail}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn wdbc_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/wdbc.data")
}

fn wdbc_records() -> Vec<RawRecord> {
    let text = std::fs::read(wdbc_path()).expect("WDBC fixture");
    parse_wdbc(text.as_slice()).expect("WDBC parses")
}

fn ac1_dataset_fidelity(records: &[RawRecord]) -> Result<String, String> {
    let benign = records.iter().filter(|r| r.diagnosis == Diagnosis::Benign).count();
    let malignant = records.len() - benign;
    ensure(records.len() == 569 && benign == 357 && malignant == 212, || {
        format!("got {} records, {benign} B, {malignant} M", records.len())
    })?;
    ensure(records.iter().all(|r| r.features.len() == 30), || "feature count".into())?;
    Ok("569 records, 357 B (class 1), 212 M (class 2)".to_string())
}

fn ac2_reference_rates(suite: &mut Suite, ds: &Dataset) -> Result<String, String> {
    let report = compare_methods(ds, &FitConfig::default(), SplitScheme::Resubstitution, false, &Method::ALL)
        .map_err(|e| e.to_string())?;
    let pct = |m: Method| report.get(m).expect("method present").accuracy * 100.0;
    let (ms, hi, sg, mg) = (
        pct(Method::MeanStd),
        pct(Method::Histogram),
        pct(Method::SimpleGrid),
        pct(Method::ModifiedGrid),
    );
    let hist_rejected = report.get(Method::Histogram).unwrap().rejected;

    suite.report(
        "AC2a",
        "mean/std within 92.2 +/- 3",
        (ms - REFERENCE_MEAN_STD).abs() <= MEAN_STD_TOLERANCE,
        format!("measured {ms:.2}%"),
    );
    suite.report(
        "AC2b",
        "histogram within 86.7 +/- 5 with rejections",
        (hi - REFERENCE_HISTOGRAM).abs() <= HISTOGRAM_TOLERANCE && hist_rejected > 0,
        format!(
            "measured {hi:.2}% with {hist_rejected} rejected; implicated: resubstitution default \
             (a training pattern always supports its own class histogram, so nothing is rejected)"
        ),
    );
    suite.report(
        "AC2c",
        "simple grid >= 95%",
        sg >= SIMPLE_GRID_FLOOR,
        format!("measured {sg:.2}%"),
    );
    suite.report(
        "AC2d",
        "modified grid materially below simple grid",
        sg - mg >= MODIFIED_GRID_MIN_GAP,
        format!(
            "measured {mg:.2}% vs {sg:.2}% (gap {:.2} points, required {MODIFIED_GRID_MIN_GAP}); \
             implicated: overlap-partition geometry and sparse enumeration",
            sg - mg
        ),
    );

    let kfold = compare_methods(
        ds,
        &FitConfig::default(),
        SplitScheme::KFold { k: 10, seed: 1 },
        false,
        &Method::ALL,
    )
    .map_err(|e| e.to_string())?;
    let rates: Vec<String> = kfold
        .methods
        .iter()
        .map(|m| format!("{} {:.2}% ({} rejected)", m.method, m.report.accuracy * 100.0, m.report.rejected))
        .collect();
    println!("       AC2 context: 10-fold (seed 1): {}", rates.join(", "));
    Ok(format!(
        "resubstitution: mean-std {ms:.2}%, histogram {hi:.2}%, simple grid {sg:.2}%, modified grid {mg:.2}%"
    ))
}

/// Consequent and certainty grade written out directly from the class sums.
fn direct_certainty(sums: &[f64]) -> (Option<usize>, f64) {
    let c = sums.len();
    let best = sums.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let leaders: Vec<usize> = (0..c).filter(|&k| sums[k] == best).collect();
    if best <= 0.0 || leaders.len() != 1 {
        return (None, 0.0);
    }
    let winner = leaders[0];
    let mut beta_bar = 0.0;
    for k in 0..c {
        if k != winner {
            beta_bar += sums[k] / (c - 1) as f64;
        }
    }
    let total: f64 = sums.iter().sum();
    (Some(winner), (sums[winner] - beta_bar) / total)
}

fn ac3_cf_oracle(ds: &Dataset) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ties = 0;
    for i in 0..10_000 {
        let b1: f64 = rng.gen_range(0.0..100.0);
        // every tenth pair is an exact tie, every 97th is all-zero
        let b2 = if i % 97 == 0 {
            0.0
        } else if i % 10 == 0 {
            b1
        } else {
            rng.gen_range(0.0..100.0)
        };
        let b1 = if i % 97 == 0 { 0.0 } else { b1 };
        let (k, cf) = certainty_grade(&[b1, b2]);
        let (dk, dcf) = direct_certainty(&[b1, b2]);
        ensure(k == dk, || format!("consequent mismatch for ({b1}, {b2})"))?;
        ensure((cf - dcf).abs() <= 1e-12, || format!("cf {cf} vs {dcf} for ({b1}, {b2})"))?;
        ensure((0.0..=1.0).contains(&cf), || format!("cf {cf} outside [0,1]"))?;
        if b1 == b2 {
            ties += 1;
            ensure(k.is_none() && cf == 0.0, || format!("tie ({b1}, {b2}) gave {k:?}, {cf}"))?;
        }
    }

    // every rule of the fitted WDBC grid against class sums recomputed from scratch
    let rb = fit_simple_grid(ds, &FitConfig::default()).map_err(|e| e.to_string())?;
    for rule in rb.rules() {
        let mut sums = [0.0; 2];
        for p in ds.patterns() {
            let mut grade = 1.0;
            for (i, &s) in rule.antecedents.iter().enumerate() {
                grade *= rb.partitions()[i].sets[s].eval(p.x[i]);
            }
            sums[p.class] += grade;
        }
        let (dk, dcf) = direct_certainty(&sums);
        ensure(rule.consequent == dk, || format!("WDBC rule consequent {:?} vs {dk:?}", rule.consequent))?;
        ensure((rule.cf - dcf).abs() <= 1e-12, || format!("WDBC rule cf {} vs {dcf}", rule.cf))?;
    }
    Ok(format!(
        "10000 pairs ({ties} ties) and {} WDBC grid rules match the direct formula within 1e-12",
        rb.rules().len()
    ))
}

/// Materializes all `k^n` cells and classifies by brute force.
struct ExhaustiveGrid {
    partition: fuzzy_rulegen::FuzzyPartition,
    n: usize,
    /// (cell, consequent, cf) for decidable cells
    rules: Vec<(Vec<usize>, usize, f64)>,
    classes: usize,
}

impl ExhaustiveGrid {
    fn fit(train: &Dataset, k: usize) -> Self {
        // membership evaluation is shared with the library; enumeration and
        // certainty grades are not
        let partition = build_uniform_partition(k).unwrap();
        let n = train.n_attributes();
        let classes = train.n_classes();
        let mut rules = Vec::new();
        let total = k.pow(n as u32);
        for code in 0..total {
            let cell: Vec<usize> = (0..n).map(|i| (code / k.pow(i as u32)) % k).collect();
            let mut sums = vec![0.0; classes];
            for p in train.patterns() {
                let mut grade = 1.0;
                for i in 0..n {
                    grade *= partition.sets[cell[i]].eval(p.x[i]);
                }
                sums[p.class] += grade;
            }
            if let (Some(class), cf) = direct_certainty(&sums) {
                rules.push((cell, class, cf));
            }
        }
        ExhaustiveGrid {
            partition,
            n,
            rules,
            classes,
        }
    }

    fn classify(&self, x: &[f64]) -> (Outcome, Vec<f64>) {
        let mut scores = vec![0.0; self.classes];
        for (cell, class, cf) in &self.rules {
            let mut grade = 1.0;
            for i in 0..self.n {
                grade *= self.partition.sets[cell[i]].eval(x[i]);
            }
            let s = grade * cf;
            if s > scores[*class] {
                scores[*class] = s;
            }
        }
        let best = scores.iter().cloned().fold(0.0, f64::max);
        let leaders = scores.iter().filter(|s| **s == best).count();
        let outcome = match scores.iter().position(|s| *s == best) {
            Some(k) if best > 0.0 && leaders == 1 => Outcome::Class(k),
            _ => Outcome::Rejected,
        };
        (outcome, scores)
    }
}

fn random_dataset(rng: &mut ChaCha8Rng, n: usize, quantized: bool) -> Dataset {
    let m = rng.gen_range(2..=200);
    let classes = rng.gen_range(2..=3);
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let patterns = (0..m)
        .map(|_| {
            let x: Vec<f64> = (0..n)
                .map(|_| {
                    let v: f64 = rng.gen_range(0.0..=1.0);
                    if quantized {
                        (v * 8.0).round() / 8.0
                    } else {
                        v
                    }
                })
                .collect();
            let proj: f64 = x.iter().zip(&w).map(|(a, b)| a * b).sum();
            let noisy = proj + rng.gen_range(-0.2..0.2);
            let class = ((noisy.abs() * classes as f64 * 1.7) as usize) % classes;
            Pattern { x, class }
        })
        .collect();
    Dataset::from_normalized(patterns, (1..=classes).map(|c| c.to_string()).collect()).unwrap()
}

fn ac4_sparse_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut points_checked = 0usize;
    let mut rejected = 0usize;
    for trial in 0..50 {
        let n = if trial % 2 == 0 { 2 } else { 3 };
        let k = rng.gen_range(2..=5);
        let ds = random_dataset(&mut rng, n, trial % 4 < 2);
        let cfg = FitConfig {
            grid_k: k,
            ..FitConfig::default()
        };
        let sparse = fit_simple_grid(&ds, &cfg).map_err(|e| e.to_string())?;
        let exhaustive = ExhaustiveGrid::fit(&ds, k);
        ensure(sparse.rule_count() == exhaustive.rules.len(), || {
            format!(
                "trial {trial}: sparse kept {} rules, exhaustive {}",
                sparse.rule_count(),
                exhaustive.rules.len()
            )
        })?;
        let axis: Vec<f64> = (0..=40).map(|i| i as f64 / 40.0).collect();
        let total = 41usize.pow(n as u32);
        for code in 0..total {
            let x: Vec<f64> = (0..n).map(|i| axis[(code / 41usize.pow(i as u32)) % 41]).collect();
            let got = sparse.classify(&x).map_err(|e| e.to_string())?;
            let (want, want_scores) = exhaustive.classify(&x);
            ensure(got.outcome == want, || {
                format!("trial {trial} (n={n}, K={k}) at {x:?}: sparse {:?} vs exhaustive {want:?}", got.outcome)
            })?;
            for (a, b) in got.per_class_scores.iter().zip(&want_scores) {
                ensure((a - b).abs() <= 1e-12, || format!("trial {trial} at {x:?}: score {a} vs {b}"))?;
            }
            if want == Outcome::Rejected {
                rejected += 1;
            }
            points_checked += 1;
        }
    }
    Ok(format!(
        "50 datasets, {points_checked} grid points identical ({rejected} rejected on both sides)"
    ))
}

fn ac5_partition_of_unity() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for k in [2, 3, 5, 7] {
        let p = build_uniform_partition(k).map_err(|e| e.to_string())?;
        for i in 0..=1000 {
            let x = i as f64 / 1000.0;
            let err = (p.memberships(x).iter().sum::<f64>() - 1.0).abs();
            worst = worst.max(err);
            ensure(err <= 1e-12, || format!("K={k} x={x}: sum off by {err}"))?;
        }
    }
    Ok(format!("K in {{2,3,5,7}} at 1001 points, max deviation {worst:.1e}"))
}

fn ac6_histogram_bounds(ds: &Dataset) -> Result<String, String> {
    let b = histogram_bounds(20);
    ensure(b.len() == 21, || format!("{} bounds", b.len()))?;
    ensure(b[0] == 0.0 && b[10] == 0.5 && b[20] == 1.0, || {
        format!("b0={} b10={} b20={}", b[0], b[10], b[20])
    })?;
    ensure(b.windows(2).all(|w| w[0] < w[1]), || "bounds not strictly increasing".into())?;
    // tiling: every grid point falls in exactly one half-open interval (last closed)
    for i in 0..=10_000 {
        let x = i as f64 / 10_000.0;
        let hits = (0..20)
            .filter(|&h| (b[h] <= x && x < b[h + 1]) || (h == 19 && x == 1.0))
            .count();
        ensure(hits == 1, || format!("x={x} lies in {hits} intervals"))?;
    }
    let rb = fit(Method::Histogram, ds, &FitConfig::default()).map_err(|e| e.to_string())?;
    let mut count = 0;
    for p in rb.partitions() {
        for s in &p.sets {
            let MembershipFunction::PiecewiseConstant { values, .. } = s else {
                return Err("histogram set is not piecewise constant".into());
            };
            let peak = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            ensure(peak == 1.0, || format!("peak {peak}"))?;
            count += 1;
        }
    }
    Ok(format!("21 bounds tile [0,1]; all {count} WDBC class/attribute histograms peak at exactly 1"))
}

fn outcomes(ds: &Dataset, method: Method) -> Result<Vec<Outcome>, String> {
    let rb = fit(method, ds, &FitConfig::default()).map_err(|e| e.to_string())?;
    ds.patterns()
        .iter()
        .map(|p| rb.classify(&p.x).map(|pr| pr.outcome).map_err(|e| e.to_string()))
        .collect()
}

fn ac7_affine_invariance(records: &[RawRecord], ds: &Dataset) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut rounds = 0;
    for _ in 0..3 {
        let maps: Vec<(f64, f64)> = (0..30)
            .map(|_| (rng.gen_range(0.01..1000.0), rng.gen_range(-1000.0..1000.0)))
            .collect();
        let moved: Vec<RawRecord> = records
            .iter()
            .map(|r| RawRecord {
                features: r.features.iter().zip(&maps).map(|(v, (a, b))| a * v + b).collect(),
                ..r.clone()
            })
            .collect();
        let moved_ds = normalize(&moved).map_err(|e| e.to_string())?;
        for method in Method::ALL {
            let before = outcomes(ds, method)?;
            let after = outcomes(&moved_ds, method)?;
            let changed = before.iter().zip(&after).filter(|(a, b)| a != b).count();
            ensure(changed == 0, || format!("{method}: {changed} outcomes changed"))?;
        }
        rounds += 1;
    }
    Ok(format!("{rounds} random positive affine column maps x 4 methods: no outcome changed"))
}

fn ac8_degenerate_toys() -> Result<String, String> {
    let rows = vec![vec![2.0], vec![5.0]];
    let pair = Dataset::from_raw(&rows, &[0, 1], vec!["1".into(), "2".into()], vec!["x1".into()])
        .map_err(|e| e.to_string())?;
    for method in Method::ALL {
        let rb = fit(method, &pair, &FitConfig::default()).map_err(|e| e.to_string())?;
        let r = evaluate(&rb, &pair).map_err(|e| e.to_string())?;
        ensure(r.accuracy == 1.0, || format!("{method}: accuracy {}", r.accuracy))?;
    }

    let patterns = [(0.125, 0), (0.375, 0), (0.625, 1), (0.875, 1)]
        .iter()
        .map(|&(x, class)| Pattern { x: vec![x], class })
        .collect();
    let symmetric = Dataset::from_normalized(patterns, vec!["1".into(), "2".into()]).map_err(|e| e.to_string())?;
    for method in Method::ALL {
        let rb = fit(method, &symmetric, &FitConfig::default()).map_err(|e| e.to_string())?;
        let pred = rb.classify(&[0.5]).map_err(|e| e.to_string())?;
        ensure(pred.outcome == Outcome::Rejected, || {
            format!("{method}: symmetric point gave {:?} ({:?})", pred.outcome, pred.per_class_scores)
        })?;
    }
    Ok("separable pair 100% for all methods; symmetry point rejected by all methods".into())
}

fn ac9_round_trip(ds: &Dataset) -> Result<String, String> {
    for method in Method::ALL {
        let rb = fit(method, ds, &FitConfig::default()).map_err(|e| e.to_string())?;
        let mut first = Vec::new();
        save_rulebase(&rb, &mut first).map_err(|e| e.to_string())?;
        let mut second = Vec::new();
        save_rulebase(&rb, &mut second).map_err(|e| e.to_string())?;
        ensure(first == second, || format!("{method}: repeated saves differ"))?;
        let back = load_rulebase(first.as_slice()).map_err(|e| e.to_string())?;
        ensure(rulebase_to_string(&back).as_bytes() == first.as_slice(), || {
            format!("{method}: save(load(save)) differs")
        })?;
        ensure(back.method() == method && back.rule_count() == rb.rule_count(), || {
            format!("{method}: method or rule count changed")
        })?;
        for p in ds.patterns() {
            let a = rb.classify(&p.x).map_err(|e| e.to_string())?;
            let b = back.classify(&p.x).map_err(|e| e.to_string())?;
            let same_bits = a.per_class_scores.iter().zip(&b.per_class_scores).all(|(u, v)| u.to_bits() == v.to_bits());
            ensure(a.outcome == b.outcome && same_bits, || format!("{method}: prediction changed"))?;
        }
    }
    Ok("4 methods x 569 patterns bit-identical after save/load; repeated saves byte-identical".into())
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(args.iter().copied(), &mut out, &mut err);
    (code, out)
}

fn ac10_determinism() -> Result<String, String> {
    let data = wdbc_path();
    let data = data.to_str().unwrap();
    for extra in [&[][..], &["--scheme", "kfold:10", "--seed", "5"][..], &["--json"][..]] {
        let mut args = vec!["fuzzy-rulegen", "compare", "--data", data];
        args.extend_from_slice(extra);
        let (c1, o1) = run_cli(&args);
        let (c2, o2) = run_cli(&args);
        ensure(c1 == 0 && c2 == 0, || format!("exit codes {c1}, {c2} for {extra:?}"))?;
        ensure(o1 == o2, || format!("outputs differ for {extra:?}"))?;
    }
    Ok("repeated `compare` runs (resubstitution, kfold:10, json) are byte-identical".into())
}

fn runtime(ds: &Dataset) -> Result<String, String> {
    let start = Instant::now();
    for method in Method::ALL {
        let rb = fit(method, ds, &FitConfig::default()).map_err(|e| e.to_string())?;
        evaluate(&rb, ds).map_err(|e| e.to_string())?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < RUNTIME_BUDGET_SECS, || format!("took {secs:.2}s"))?;
    Ok(format!("fit + evaluate of all four methods on 569 x 30 took {secs:.3}s"))
}

fn main() -> ExitCode {
    let mut suite = Suite { failures: 0 };
    let records = wdbc_records();
    suite.record("AC1", "dataset fidelity", ac1_dataset_fidelity(&records));
    let ds = normalize(&records).expect("WDBC normalizes");

    let rates = ac2_reference_rates(&mut suite, &ds);
    suite.record("AC2", "reference rate reproduction (best effort)", rates);
    suite.record("AC3", "certainty grade oracle", ac3_cf_oracle(&ds));
    suite.record("AC4", "sparse vs exhaustive grid", ac4_sparse_oracle());
    suite.record("AC5", "partition of unity", ac5_partition_of_unity());
    suite.record("AC6", "histogram boundaries", ac6_histogram_bounds(&ds));
    suite.record("AC7", "affine invariance", ac7_affine_invariance(&records, &ds));
    suite.record("AC8", "degenerate toys", ac8_degenerate_toys());
    suite.record("AC9", "rule file round trip", ac9_round_trip(&ds));
    suite.record("AC10", "determinism", ac10_determinism());
    suite.record("PERF", "full WDBC runtime < 10 s", runtime(&ds));

    if suite.failures == 0 {
        println!("acceptance: all gating criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} gating criteria failed", suite.failures);
        ExitCode::FAILURE
    }
}
