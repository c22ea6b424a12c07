use std::process::Command;

use lrp::harness::{estimate_block_goodness, run_ratio_experiment, ExperimentPlan};
use lrp::{chemical_distance, sample_configuration, Backend, Distance, Params};

fn plan(d: usize, s: f64, beta: f64, distances: Vec<u64>, trials: u64, seed: u64) -> ExperimentPlan {
    let params = Params::builder(d, s, beta).force_nn(true).build().unwrap();
    let mut direction = vec![0.0; d];
    direction[0] = 1.0;
    ExperimentPlan::new(params, distances, direction, trials, seed).unwrap().box_margin(16)
}

#[test]
fn forced_bonds_keep_ratios_in_unit_interval() {
    for (d, s) in [(1, 1.5), (1, 3.0), (2, 4.5)] {
        let p = plan(d, s, 1.0, vec![5, 12, 30], 20, 8);
        let r = run_ratio_experiment(&p).unwrap();
        for rec in &r.records {
            assert_eq!(rec.n_unreachable, 0);
            assert_eq!(rec.n_finite, 20);
            assert!(rec.ratio.q05 > 0.0 && rec.ratio.q95 <= 1.0, "{rec:?}");
            assert!(rec.ratio.q05 <= rec.ratio.median && rec.ratio.median <= rec.ratio.q95);
        }
    }
}

/// Lower order statistic at level `p`, by counting.
fn naive_quantile(values: &[u32], p: f64) -> u32 {
    let n = values.len();
    *values
        .iter()
        .filter(|&&v| values.iter().filter(|&&w| w <= v).count() as f64 >= p * n as f64)
        .min()
        .unwrap()
}

#[test]
fn records_match_pairwise_recomputation() {
    let p = plan(1, 1.5, 0.8, vec![40, 7, 100], 25, 77);
    let r = run_ratio_experiment(&p).unwrap();
    let bx = p.lattice_box().unwrap();
    assert_eq!(bx.side(), 2 * 100 + 16);
    let mut per_distance = vec![Vec::new(); 3];
    for t in 0..p.trials() {
        let config = sample_configuration(p.params(), &bx, 0, p.trial_seed(t), Backend::Skip).unwrap();
        for (i, &n) in [7u64, 40, 100].iter().enumerate() {
            match chemical_distance(&config, &[0], &[n as i64], false).unwrap().value {
                Distance::Finite(v) => per_distance[i].push(v),
                Distance::Unreachable => panic!("forced bonds connect everything"),
            }
        }
    }
    for (rec, vals) in r.records.iter().zip(&per_distance) {
        let mean = vals.iter().map(|&v| f64::from(v)).sum::<f64>() / vals.len() as f64;
        assert!((rec.distance.mean - mean).abs() < 1e-9);
        assert_eq!(rec.distance.median, f64::from(naive_quantile(vals, 0.5)));
        assert_eq!(rec.distance.q05, f64::from(naive_quantile(vals, 0.05)));
        assert_eq!(rec.distance.q95, f64::from(naive_quantile(vals, 0.95)));
        assert_eq!(rec.ratio.median, f64::from(naive_quantile(vals, 0.5)) / rec.x_norm as f64);
    }
}

#[test]
fn experiments_are_deterministic_and_order_free() {
    let a = run_ratio_experiment(&plan(2, 3.0, 0.6, vec![9, 3, 20], 12, 5)).unwrap();
    let b = run_ratio_experiment(&plan(2, 3.0, 0.6, vec![20, 9, 3, 9], 12, 5)).unwrap();
    assert_eq!(a.to_csv(), b.to_csv());
    let c = run_ratio_experiment(&plan(2, 3.0, 0.6, vec![3, 9, 20], 12, 6)).unwrap();
    assert_ne!(a.to_csv(), c.to_csv());
}

/// Probability that `[0, m)` holds an open edge longer than `m / 100`, by
/// direct product over lengths.
fn bad_level0_1d(s: f64, beta: f64, m: u64) -> f64 {
    let keep: f64 = (1..m)
        .filter(|&k| 100 * k > m)
        .map(|k| (1.0 - (beta * (k as f64).powf(-s)).min(1.0)).powf((m - k) as f64))
        .product();
    1.0 - keep
}

#[test]
fn level0_goodness_matches_closed_form() {
    let params = Params::builder(1, 3.0, 0.02).build().unwrap();
    let rows = estimate_block_goodness(&params, 200, 0, 4000, 42).unwrap();
    let row = &rows[0];
    let want = bad_level0_1d(3.0, 0.02, 200);
    assert!((row.exact.unwrap() - want).abs() < 1e-12);
    assert!(row.ci_low <= want && want <= row.ci_high, "{row:?} vs {want}");
}

#[test]
fn goodness_degrades_with_beta() {
    let est = |beta: f64| {
        let params = Params::builder(1, 3.0, beta).build().unwrap();
        estimate_block_goodness(&params, 200, 1, 10_000, 9).unwrap()
    };
    let (lo, hi) = (est(0.005), est(0.02));
    for (a, b) in lo.iter().zip(&hi) {
        assert!(a.p_hat <= b.p_hat + 2.0 * b.std_error.max(a.std_error), "{a:?} vs {b:?}");
    }
    assert!(lo[0].p_hat < hi[0].p_hat);
}

fn lrp(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lrp")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("c.bundle");
    let bundle = bundle.to_str().unwrap();
    let model = ["--d", "1", "--s", "2", "--beta", "0.5", "--force-nn"];
    let sample: Vec<&str> =
        ["sample"].iter().chain(&model).chain(&["--box", "64", "--seed", "3", "--out", bundle]).copied().collect();
    assert_eq!(lrp(&sample).0, 0);
    let (code, out) = lrp(&["dist", "--bundle", bundle, "--from", "0", "--to", "63"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let hops: u64 = v["distance"].as_str().unwrap().parse().unwrap();
    assert!((1..=63).contains(&hops));

    assert_eq!(lrp(&["verify-constants", "--d", "1", "--s", "3", "--sprime", "1.5", "--beta", "1", "--lnM", "10"]).0, 2);
    assert_eq!(lrp(&["frobnicate"]).0, 2);
    assert_eq!(lrp(&["sample", "--d", "2", "--s", "2.5", "--beta", "1", "--box", "60000", "--out", bundle]).0, 3);
    assert_eq!(lrp(&["dist", "--bundle", "/nonexistent/c.bundle", "--from", "0", "--to", "1"]).0, 4);

    let (code, out) = lrp(&["recursion", "--d", "1", "--kmax", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next().unwrap(), "k,ln_pk_bound,inductive_bound,ok");
    assert_eq!(out.lines().count(), 5);
}
