use lrp::sampler::split_seed;
use lrp::{sample_configuration, Backend, Boundary, Configuration, LatticeBox, Params};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn class_counts(configs: impl Iterator<Item = Configuration>, len: usize) -> Vec<f64> {
    let mut counts = vec![0.0; len];
    for config in configs {
        for (x, y) in config.edges() {
            let k = config.displacement(&x, &y)[0].unsigned_abs() as usize;
            counts[k] += 1.0;
        }
    }
    counts
}

fn p_value(stat: f64, bins: usize) -> f64 {
    1.0 - ChiSquared::new(bins as f64).unwrap().cdf(stat)
}

#[test]
fn skip_and_hash_agree_in_distribution() {
    let l = 512u64;
    let seeds = 200u64;
    let params = Params::builder(1, 2.5, 1.0).build().unwrap();
    let bx = LatticeBox::origin(1, l).unwrap();
    let run = |backend: Backend, salt: u64| {
        class_counts(
            (0..seeds).map(|i| {
                sample_configuration(&params, &bx, 0, split_seed(salt, i), backend).unwrap()
            }),
            l as usize,
        )
    };
    let skip = run(Backend::Skip, 11);
    let hash = run(Backend::Hash, 12);
    let trials = |k: u64| (seeds * (l - k)) as f64;
    assert_eq!(skip[1], trials(1));
    assert_eq!(hash[1], trials(1));

    let mut stat = 0.0;
    let mut bins = 0;
    let (mut tx, mut ty, mut tn) = (0.0, 0.0, 0.0);
    for k in 2..l {
        let (x, y, n) = (skip[k as usize], hash[k as usize], trials(k));
        if (x + y) / 2.0 >= 5.0 {
            let p = (x + y) / (2.0 * n);
            stat += (x - y).powi(2) / (2.0 * n * p * (1.0 - p));
            bins += 1;
        } else {
            tx += x;
            ty += y;
            tn += n;
        }
    }
    let p = (tx + ty) / (2.0 * tn);
    stat += (tx - ty).powi(2) / (2.0 * tn * p * (1.0 - p));
    bins += 1;
    let pv = p_value(stat, bins);
    assert!(pv >= 1e-3, "two-sample chi2 {stat} on {bins} bins, p = {pv}");
}

#[test]
fn torus_class_counts_match_binomial() {
    let l = 64u64;
    let seeds = 200u64;
    let params = Params::builder(1, 1.5, 0.8).boundary(Boundary::Torus).build().unwrap();
    let bx = LatticeBox::origin(1, l).unwrap();
    let counts = class_counts(
        (0..seeds).map(|i| sample_configuration(&params, &bx, 0, split_seed(5, i), Backend::Skip).unwrap()),
        (l / 2 + 1) as usize,
    );
    let mut stat = 0.0;
    let mut bins = 0;
    for k in 1..=l / 2 {
        // the antipodal class pairs each vertex with one partner, counted once
        let pairs = if k == l / 2 { l / 2 } else { l };
        let n = (seeds * pairs) as f64;
        let p = (0.8 * (k as f64).powf(-1.5)).min(1.0);
        stat += (counts[k as usize] - n * p).powi(2) / (n * p * (1.0 - p));
        bins += 1;
    }
    let pv = p_value(stat, bins);
    assert!(pv >= 1e-3, "chi2 {stat} on {bins} bins, p = {pv}");
}

#[test]
fn hash_decisions_do_not_depend_on_the_window() {
    let params = Params::builder(2, 2.0, 0.7).build().unwrap();
    let a = sample_configuration(&params, &LatticeBox::origin(2, 10).unwrap(), 0, 99, Backend::Hash).unwrap();
    let b = sample_configuration(&params, &LatticeBox::new(vec![-3, 2], 14).unwrap(), 0, 99, Backend::Hash)
        .unwrap();
    let inside = |p: &[i64]| p.iter().all(|&c| (2..10).contains(&c));
    let pick = |c: &Configuration| -> Vec<_> {
        c.edges().filter(|(x, y)| inside(x) && inside(y)).collect()
    };
    let (ea, eb) = (pick(&a), pick(&b));
    assert!(!ea.is_empty());
    assert_eq!(ea, eb);
}

#[test]
fn halo_edges_touch_the_box() {
    let params = Params::builder(2, 3.0, 1.0).force_nn(true).build().unwrap();
    let bx = LatticeBox::new(vec![5, -5], 8).unwrap();
    let config = sample_configuration(&params, &bx, 3, 4, Backend::Skip).unwrap();
    let outer = bx.expanded(3).unwrap();
    for (x, y) in config.edges() {
        assert!(bx.contains(&x) || bx.contains(&y));
        assert!(outer.contains(&x) && outer.contains(&y));
    }
    // every forced bond with an endpoint in the box is present
    for x0 in 5..13 {
        for x1 in -5..3 {
            assert!(config.contains_edge(&[x0, x1], &[x0 + 1, x1]));
            assert!(config.contains_edge(&[x0, x1], &[x0, x1 - 1]));
        }
    }
}
