//! Seeded Monte Carlo experiments: the distance ratio `D(0, [nv]) / ‖nv‖`
//! along a fixed direction, regime fits of the median distance, and empirical
//! bad-block frequencies.

use std::fmt::Write as _;
use std::io;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificates::exact_p0;
use crate::error::{domain, Error, Result};
use crate::lattice_model::{Block, BlockHierarchy, Boundary, LatticeBox, Params, Point};
use crate::metric::{bfs_from, Distance};
use crate::renorm::Classifier;
use crate::sampler::{split_seed, Backend, Sampler};

pub const DEFAULT_BOX_MARGIN: u64 = 64;

pub const CSV_HEADER: &str = "x_norm,n_finite,n_unreachable,d_mean,d_median,d_q05,d_q95,\
ratio_mean,ratio_median,ratio_q05,ratio_q95";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    params: Params,
    distances: Vec<u64>,
    direction: Vec<f64>,
    trials: u64,
    seed: u64,
    box_margin: u64,
}

impl ExperimentPlan {
    /// `direction` is rescaled to unit length in the model norm.
    pub fn new(
        params: Params,
        mut distances: Vec<u64>,
        direction: Vec<f64>,
        trials: u64,
        seed: u64,
    ) -> Result<Self> {
        if params.boundary() != Boundary::Free {
            return Err(domain("ratio experiments use a free boundary"));
        }
        if direction.len() != params.d() {
            return Err(domain(format!(
                "direction has {} coordinates, expected {}",
                direction.len(),
                params.d()
            )));
        }
        if trials == 0 {
            return Err(domain("trials must be at least 1"));
        }
        distances.sort_unstable();
        distances.dedup();
        if distances.is_empty() || distances[0] == 0 {
            return Err(domain("distances must be a non-empty list of positive integers"));
        }
        let len = norm_f64(&params, &direction);
        if !(len.is_finite() && len > 0.0) {
            return Err(domain("direction must be a finite non-zero vector"));
        }
        let direction = direction.iter().map(|x| x / len).collect();
        Ok(ExperimentPlan { params, distances, direction, trials, seed, box_margin: DEFAULT_BOX_MARGIN })
    }

    pub fn box_margin(mut self, margin: u64) -> Self {
        self.box_margin = margin;
        self
    }

    pub fn params(&self) -> &Params {
        &self.params
    }
    pub fn distances(&self) -> &[u64] {
        &self.distances
    }
    pub fn direction(&self) -> &[f64] {
        &self.direction
    }
    pub fn trials(&self) -> u64 {
        self.trials
    }
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn trial_seed(&self, trial: u64) -> u64 {
        split_seed(self.seed, trial)
    }

    /// Origin-centred box of side `2 max(distances) + margin`.
    pub fn lattice_box(&self) -> Result<LatticeBox> {
        let max = *self.distances.last().expect("non-empty");
        let side = max
            .checked_mul(2)
            .and_then(|x| x.checked_add(self.box_margin.max(1)))
            .ok_or_else(|| Error::Overflow("experiment box side".into()))?;
        let half = i64::try_from(side / 2).map_err(|_| Error::Overflow("experiment box".into()))?;
        LatticeBox::new(vec![-half; self.params.d()], side)
    }

    /// The lattice point nearest to `n v`.
    pub fn target(&self, n: u64) -> Point {
        self.direction.iter().map(|v| (n as f64 * v).round() as i64).collect()
    }
}

fn norm_f64(params: &Params, v: &[f64]) -> f64 {
    use crate::lattice_model::Norm;
    match params.norm() {
        Norm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        Norm::Sup => v.iter().fold(0.0, |m, x| m.max(x.abs())),
        Norm::L1 => v.iter().map(|x| x.abs()).sum(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    pub q05: f64,
    pub q95: f64,
}

impl Summary {
    /// Type-1 (lower order statistic) quantiles of `sorted`; NaN when empty.
    pub fn of_sorted(sorted: &[f64]) -> Summary {
        if sorted.is_empty() {
            return Summary { mean: f64::NAN, median: f64::NAN, q05: f64::NAN, q95: f64::NAN };
        }
        Summary {
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
            median: quantile(sorted, 0.5),
            q05: quantile(sorted, 0.05),
            q95: quantile(sorted, 0.95),
        }
    }
}

pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = (p * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub x_norm: u64,
    pub target: Point,
    pub n_finite: u64,
    pub n_unreachable: u64,
    pub distance: Summary,
    pub ratio: Summary,
}

impl DistanceRecord {
    /// Aggregates one distance across trials; the result does not depend on
    /// the order of `samples`.
    pub fn from_samples(x_norm: u64, target: Point, samples: &[Distance]) -> Self {
        let mut finite: Vec<f64> = samples.iter().filter_map(|d| d.finite()).map(f64::from).collect();
        finite.sort_by(f64::total_cmp);
        let ratios: Vec<f64> = finite.iter().map(|d| d / x_norm as f64).collect();
        DistanceRecord {
            x_norm,
            target,
            n_finite: finite.len() as u64,
            n_unreachable: (samples.len() - finite.len()) as u64,
            distance: Summary::of_sorted(&finite),
            ratio: Summary::of_sorted(&ratios),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub plan: ExperimentPlan,
    pub box_side: u64,
    pub records: Vec<DistanceRecord>,
    pub wall_time_secs: f64,
}

impl ExperimentResult {
    pub fn write_csv(&self, mut out: impl io::Write) -> io::Result<()> {
        out.write_all(self.to_csv().as_bytes())
    }

    /// CSV without timing data, so equal plans give equal bytes.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.records {
            let _ = write!(s, "{},{},{}", r.x_norm, r.n_finite, r.n_unreachable);
            for v in [
                r.distance.mean,
                r.distance.median,
                r.distance.q05,
                r.distance.q95,
                r.ratio.mean,
                r.ratio.median,
                r.ratio.q05,
                r.ratio.q95,
            ] {
                s.push(',');
                s.push_str(&format_sig(v, 9));
            }
            s.push('\n');
        }
        s
    }

    pub fn medians(&self) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.n_finite > 0)
            .map(|r| (r.x_norm as f64, r.distance.median))
            .collect()
    }
}

/// Fixed-point decimal with `digits` significant digits.
pub fn format_sig(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return "NaN".into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let magnitude = v.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    let s = format!("{v:.decimals$}");
    // Rounding can carry into a new leading digit (9.99.. -> 10.0).
    let carried = s.trim_start_matches('-').parse::<f64>().is_ok_and(|x| x >= 10f64.powi(magnitude as i32 + 1));
    if carried && decimals > 0 {
        format!("{:.*}", decimals - 1, v)
    } else {
        s
    }
}

pub fn run_ratio_experiment(plan: &ExperimentPlan) -> Result<ExperimentResult> {
    run_ratio_experiment_with(plan, &Sampler::new(Backend::Skip))
}

pub fn run_ratio_experiment_with(plan: &ExperimentPlan, sampler: &Sampler) -> Result<ExperimentResult> {
    let start = Instant::now();
    let bx = plan.lattice_box()?;
    let estimate = sampler.expected_edges(&plan.params, &bx, 0)?;
    if estimate > sampler.budget() as f64 {
        return Err(Error::BudgetExceeded { estimate, budget: sampler.budget() });
    }
    let origin = vec![0i64; plan.params.d()];
    let targets: Vec<Point> = plan.distances.iter().map(|&n| plan.target(n)).collect();
    let per_trial: Vec<Vec<Distance>> = (0..plan.trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<Distance>> {
            let config = sampler.sample(&plan.params, &bx, 0, plan.trial_seed(t))?;
            let field = bfs_from(&config, &origin)?;
            Ok(targets.iter().map(|x| field.get(x)).collect())
        })
        .collect::<Result<_>>()?;
    let records = plan
        .distances
        .iter()
        .zip(&targets)
        .enumerate()
        .map(|(i, (&n, x))| {
            let samples: Vec<Distance> = per_trial.iter().map(|row| row[i]).collect();
            DistanceRecord::from_samples(n, x.clone(), &samples)
        })
        .collect();
    Ok(ExperimentResult {
        plan: plan.clone(),
        box_side: bx.side(),
        records,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// Parses `2^9..2^13` (powers of two), `a..b` (inclusive integer range) or a
/// comma-separated list.
pub fn parse_distances(text: &str) -> Result<Vec<u64>> {
    let bad = || domain(format!("cannot parse distances {text:?}"));
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let pow = |s: &str| s.trim().strip_prefix("2^").map(|e| e.parse::<u32>());
        return match (pow(a), pow(b)) {
            (Some(Ok(a)), Some(Ok(b))) if a <= b && b < 63 => Ok((a..=b).map(|e| 1u64 << e).collect()),
            (None, None) => {
                let a: u64 = a.trim().parse().map_err(|_| bad())?;
                let b: u64 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                Ok((a..=b).collect())
            }
            _ => Err(bad()),
        };
    }
    text.split(',')
        .map(|s| {
            let s = s.trim();
            match s.strip_prefix("2^") {
                Some(e) => e.parse::<u32>().ok().filter(|&e| e < 63).map(|e| 1u64 << e),
                None => s.parse().ok(),
            }
            .ok_or_else(bad)
        })
        .collect()
}

/// Qualitative behaviour of `D(0, x)` by the position of `s` relative to
/// `d` and `2d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `s < d`: bounded distances.
    Bounded,
    /// `s = d`: `log x / log log x`.
    LogOverLogLog,
    /// `d < s < 2d`: `(log x)^Delta`.
    Polylog,
    /// `s = 2d`: no fitted form.
    Critical,
    /// `s > 2d`: linear.
    Linear,
}

impl Regime {
    pub fn of(d: usize, s: f64) -> Regime {
        let d = d as f64;
        if s < d {
            Regime::Bounded
        } else if s == d {
            Regime::LogOverLogLog
        } else if s < 2.0 * d {
            Regime::Polylog
        } else if s == 2.0 * d {
            Regime::Critical
        } else {
            Regime::Linear
        }
    }
}

/// Ordinary least squares `y = slope x + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub residuals: Vec<f64>,
}

pub fn least_squares(points: &[(f64, f64)]) -> Result<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::InsufficientData("need at least two points for a line".into()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("all abscissae coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = points.iter().map(|p| p.1 - (slope * p.0 + intercept)).collect();
    let sse: f64 = residuals.iter().map(|r| r * r).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LinearFit { slope, intercept, r_squared, residuals })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegimeDiagnostic {
    pub regime: Regime,
    /// Human-readable form of the fitted model.
    pub model: String,
    pub points: usize,
    /// Present for every regime except [`Regime::Critical`].
    pub fit: Option<LinearFit>,
    /// Fitted exponent for the polylogarithmic regime.
    pub exponent: Option<f64>,
    /// Mean median distance and its spread, for the bounded regime.
    pub constant: Option<f64>,
    pub spread: f64,
    /// `ceil(s / (d - s))` and `ceil(d / (d - s))`, for the bounded regime.
    pub candidate_constants: Option<(u64, u64)>,
}

pub fn regime_diagnostics(result: &ExperimentResult, regime: Regime) -> Result<RegimeDiagnostic> {
    let params = result.plan.params();
    let mut diag = fit_regime(&result.medians(), regime)?;
    if regime == Regime::Bounded {
        let (d, s) = (params.d() as f64, params.s());
        diag.candidate_constants = Some(((s / (d - s)).ceil() as u64, (d / (d - s)).ceil() as u64));
    }
    Ok(diag)
}

/// Fits `(x, median D)` pairs against the regime's functional form.
pub fn fit_regime(points: &[(f64, f64)], regime: Regime) -> Result<RegimeDiagnostic> {
    if points.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "regime fits need at least 4 finite medians, have {}",
            points.len()
        )));
    }
    let ys = points.iter().map(|p| p.1);
    let spread = ys.clone().fold(f64::NEG_INFINITY, f64::max) - ys.fold(f64::INFINITY, f64::min);
    let mut diag = RegimeDiagnostic {
        regime,
        model: String::new(),
        points: points.len(),
        fit: None,
        exponent: None,
        constant: None,
        spread,
        candidate_constants: None,
    };
    let transformed = |fx: &dyn Fn(f64) -> f64, fy: &dyn Fn(f64) -> f64| -> Vec<(f64, f64)> {
        points.iter().map(|&(x, y)| (fx(x), fy(y))).collect()
    };
    match regime {
        Regime::Bounded => {
            diag.model = "D = c".into();
            let c = points.iter().map(|p| p.1).sum::<f64>() / points.len() as f64;
            let residuals: Vec<f64> = points.iter().map(|p| p.1 - c).collect();
            diag.fit = Some(LinearFit { slope: 0.0, intercept: c, r_squared: f64::NAN, residuals });
            diag.constant = Some(c);
        }
        Regime::LogOverLogLog => {
            diag.model = "D = a log x / log log x + b".into();
            diag.fit = Some(least_squares(&transformed(&|x| x.ln() / x.ln().ln(), &|y| y))?);
        }
        Regime::Polylog => {
            diag.model = "log D = Delta log log x + c".into();
            if points.iter().any(|p| p.1 <= 0.0 || p.0 <= std::f64::consts::E) {
                return Err(domain("polylog fit needs x > e and D > 0"));
            }
            let fit = least_squares(&transformed(&|x| x.ln().ln(), &f64::ln))?;
            diag.exponent = Some(fit.slope);
            diag.fit = Some(fit);
        }
        Regime::Critical => {
            diag.model = "none".into();
        }
        Regime::Linear => {
            diag.model = "D = a x + b".into();
            diag.fit = Some(least_squares(&transformed(&|x| x, &|y| y))?);
        }
    }
    Ok(diag)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodnessRow {
    pub level: u32,
    pub block_side: u64,
    pub trials: u64,
    pub bad: u64,
    pub p_hat: f64,
    pub std_error: f64,
    /// 95% Wilson score interval.
    pub ci_low: f64,
    pub ci_high: f64,
    /// Closed-form value, level 0 only.
    pub exact: Option<f64>,
}

/// Frequency with which the origin block at each level `0..=level` is bad.
/// One window per trial serves every level.
pub fn estimate_block_goodness(
    params: &Params,
    m: u64,
    level: u32,
    trials: u64,
    seed: u64,
) -> Result<Vec<GoodnessRow>> {
    estimate_block_goodness_with(params, m, level, trials, seed, &Sampler::new(Backend::Skip))
}

pub fn estimate_block_goodness_with(
    params: &Params,
    m: u64,
    level: u32,
    trials: u64,
    seed: u64,
    sampler: &Sampler,
) -> Result<Vec<GoodnessRow>> {
    if trials == 0 {
        return Err(domain("trials must be at least 1"));
    }
    if params.boundary() != Boundary::Free {
        return Err(domain("block goodness estimates use a free boundary"));
    }
    let hierarchy = BlockHierarchy::new(m, level)?;
    let d = params.d();
    let bx = LatticeBox::origin(d, hierarchy.block_side(level)?)?;
    let halo = hierarchy.classification_margin(level)?;
    let estimate = sampler.expected_edges(params, &bx, halo)?;
    if estimate > sampler.budget() as f64 {
        return Err(Error::BudgetExceeded { estimate, budget: sampler.budget() });
    }
    let levels = level as usize + 1;
    let bad = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<u64>> {
            let config = sampler.sample(params, &bx, halo, split_seed(seed, t))?;
            let mut classifier = Classifier::new(&config, hierarchy);
            (0..=level)
                .map(|k| Ok(u64::from(!classifier.classify(&Block::new(k, vec![0; d]))?.is_good())))
                .collect()
        })
        .try_reduce(
            || vec![0; levels],
            |a, b| Ok(a.iter().zip(&b).map(|(x, y)| x + y).collect()),
        )?;
    let n = trials as f64;
    (0..=level)
        .map(|k| {
            let p = bad[k as usize] as f64 / n;
            let (ci_low, ci_high) = wilson(bad[k as usize], trials);
            Ok(GoodnessRow {
                level: k,
                block_side: hierarchy.block_side(k)?,
                trials,
                bad: bad[k as usize],
                p_hat: p,
                std_error: (p * (1.0 - p) / n).sqrt(),
                ci_low,
                ci_high,
                exact: if k == 0 { Some(exact_p0(params, m)?) } else { None },
            })
        })
        .collect()
}

fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nn_only() -> Params {
        Params::builder(1, 3.0, 0.0).force_nn(true).build().unwrap()
    }

    #[test]
    fn nearest_neighbour_ratio_is_one() {
        let plan = ExperimentPlan::new(nn_only(), vec![16, 4, 64], vec![1.0], 5, 3).unwrap();
        let result = run_ratio_experiment(&plan).unwrap();
        assert_eq!(plan.distances(), &[4, 16, 64]);
        for r in &result.records {
            assert_eq!(r.n_finite, 5);
            assert_eq!(r.ratio.mean, 1.0);
            assert_eq!(r.ratio.q05, 1.0);
            assert_eq!(r.ratio.q95, 1.0);
            assert_eq!(r.distance.median, r.x_norm as f64);
        }
    }

    #[test]
    fn direction_normalised_and_rounded() {
        let params = Params::builder(2, 5.0, 0.0).force_nn(true).build().unwrap();
        let plan = ExperimentPlan::new(params, vec![10], vec![3.0, 4.0], 1, 0).unwrap();
        assert_eq!(plan.target(10), vec![6, 8]);
        assert!((plan.direction()[0] - 0.6).abs() < 1e-15);
        let result = run_ratio_experiment(&plan).unwrap();
        assert_eq!(result.records[0].distance.median, 14.0);
    }

    #[test]
    fn plan_validation() {
        assert!(ExperimentPlan::new(nn_only(), vec![], vec![1.0], 1, 0).is_err());
        assert!(ExperimentPlan::new(nn_only(), vec![0, 4], vec![1.0], 1, 0).is_err());
        assert!(ExperimentPlan::new(nn_only(), vec![4], vec![1.0, 0.0], 1, 0).is_err());
        assert!(ExperimentPlan::new(nn_only(), vec![4], vec![0.0], 1, 0).is_err());
        assert!(ExperimentPlan::new(nn_only(), vec![4], vec![1.0], 0, 0).is_err());
    }

    #[test]
    fn quantiles_are_lower_order_statistics() {
        let v: Vec<f64> = (1..=10).map(f64::from).collect();
        assert_eq!(quantile(&v, 0.5), 5.0);
        assert_eq!(quantile(&v, 0.05), 1.0);
        assert_eq!(quantile(&v, 0.95), 10.0);
        assert_eq!(quantile(&[7.0], 0.5), 7.0);
    }

    #[test]
    fn record_ignores_sample_order() {
        let a = [Distance::Finite(3), Distance::Unreachable, Distance::Finite(9), Distance::Finite(1)];
        let mut b = a;
        b.reverse();
        let ra = DistanceRecord::from_samples(4, vec![4], &a);
        assert_eq!(ra, DistanceRecord::from_samples(4, vec![4], &b));
        assert_eq!((ra.n_finite, ra.n_unreachable), (3, 1));
        assert_eq!(ra.distance.median, 3.0);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0, 9), "1.00000000");
        assert_eq!(format_sig(0.125, 9), "0.125000000");
        assert_eq!(format_sig(8192.0, 9), "8192.00000");
        assert_eq!(format_sig(9.9999999999, 9), "10.0000000");
        assert_eq!(format_sig(123456789012.0, 9), "123456789012");
        assert_eq!(format_sig(f64::NAN, 9), "NaN");
        assert_eq!(format_sig(0.0, 9), "0");
    }

    #[test]
    fn distance_lists() {
        assert_eq!(parse_distances("2^9..2^11").unwrap(), vec![512, 1024, 2048]);
        assert_eq!(parse_distances("3..5").unwrap(), vec![3, 4, 5]);
        assert_eq!(parse_distances("8, 2^4,100").unwrap(), vec![8, 16, 100]);
        assert!(parse_distances("2^9..7").is_err());
        assert!(parse_distances("x").is_err());
    }

    #[test]
    fn linear_fit_exact() {
        let pts: Vec<(f64, f64)> = (4..10).map(|e| (2f64.powi(e), 2f64.powi(e))).collect();
        let diag = fit_regime(&pts, Regime::Linear).unwrap();
        let fit = diag.fit.unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-9));
    }

    #[test]
    fn polylog_exponent_exact() {
        let pts: Vec<(f64, f64)> = (4..12).map(|e| {
            let x = 2f64.powi(e);
            (x, x.ln().powi(2))
        }).collect();
        let diag = fit_regime(&pts, Regime::Polylog).unwrap();
        assert!((diag.exponent.unwrap() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn fits_need_four_points() {
        let pts = [(2.0, 1.0), (4.0, 1.0), (8.0, 1.0)];
        assert!(matches!(fit_regime(&pts, Regime::Bounded), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn regimes_by_exponent() {
        assert_eq!(Regime::of(1, 0.5), Regime::Bounded);
        assert_eq!(Regime::of(1, 1.0), Regime::LogOverLogLog);
        assert_eq!(Regime::of(1, 1.5), Regime::Polylog);
        assert_eq!(Regime::of(1, 2.0), Regime::Critical);
        assert_eq!(Regime::of(1, 4.0), Regime::Linear);
    }

    #[test]
    fn goodness_with_zero_beta() {
        let params = Params::builder(1, 3.0, 0.0).build().unwrap();
        let rows = estimate_block_goodness(&params, 100, 2, 10, 1).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.bad == 0));
        assert_eq!(rows[0].exact, Some(0.0));
    }

    #[test]
    fn goodness_budget_error() {
        let params = Params::builder(2, 3.0, 1.0).build().unwrap();
        let sampler = Sampler::new(Backend::Skip).edge_budget(10);
        let err = estimate_block_goodness_with(&params, 100, 1, 1, 0, &sampler).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
