//! Log-space checks of the scale constants and of the bad-block
//! probability recursion.
//!
//! `M` only ever appears through `ln M`: the inequalities below force it far
//! beyond any native integer. Margins are reported so that a positive value
//! means the inequality holds, and a check passes when its margin exceeds
//! [`LOG_SLACK`].

use std::f64::consts::LN_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::error::{domain, Error, Result};
use crate::lattice_model::{kernel, BlockHierarchy, Block, Boundary, LatticeBox, Params};
use crate::renorm::Classifier;
use crate::sampler::{split_seed, Backend, Sampler};

pub const LOG_SLACK: f64 = 1e-9;

const LN_100: f64 = 4.605_170_185_988_092;
const LN_1000: f64 = 6.907_755_278_982_137;
const MAX_ITERATIONS: usize = 2200;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsSpec {
    pub d: usize,
    pub s: f64,
    pub s_prime: f64,
    pub beta: f64,
    #[serde(rename = "lnM")]
    pub ln_m: f64,
}

impl ConstantsSpec {
    pub fn new(d: usize, s: f64, s_prime: f64, beta: f64, ln_m: f64) -> Result<Self> {
        let spec = ConstantsSpec { d, s, s_prime, beta, ln_m };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        validate_exponents(self.d, self.s, self.s_prime, self.beta)?;
        if !(self.ln_m.is_finite() && self.ln_m > 0.0) {
            return Err(domain(format!("lnM must be positive and finite, got {}", self.ln_m)));
        }
        Ok(())
    }

    fn with_ln_m(&self, ln_m: f64) -> Self {
        ConstantsSpec { ln_m, ..*self }
    }

    fn dd(&self) -> f64 {
        self.d as f64
    }

    /// `s ln 100 + ln beta`, shared by the first and third inequalities.
    fn prefactor(&self) -> f64 {
        self.s * LN_100 + self.beta.ln()
    }

    /// `100^s beta M^{2d-s} < 1 / (1000 2^d)`.
    pub fn margin3(&self) -> f64 {
        let d = self.dd();
        -LN_1000 - d * LN_2 - (self.prefactor() + (2.0 * d - self.s) * self.ln_m)
    }

    /// `(M n!)^{s-s'} > n^{2s}`.
    pub fn margin4(&self, n: f64) -> f64 {
        (self.s - self.s_prime) * (self.ln_m + ln_gamma(n + 1.0)) - 2.0 * self.s * n.ln()
    }

    /// `100^s beta M^{2d-s'} (k!)^{4d-2s'} < e^{-30dk}`.
    pub fn margin5(&self, k: f64) -> f64 {
        let d = self.dd();
        -30.0 * d * k
            - (self.prefactor()
                + (2.0 * d - self.s_prime) * self.ln_m
                + (4.0 * d - 2.0 * self.s_prime) * ln_gamma(k + 1.0))
    }

    /// Derivative of `margin4` in `n`; increasing, so `margin4` is convex.
    fn slope4(&self, n: f64) -> f64 {
        (self.s - self.s_prime) * digamma(n + 1.0) - 2.0 * self.s / n
    }

    /// Derivative of `margin5` in `k`; increasing, so `margin5` is convex.
    fn slope5(&self, k: f64) -> f64 {
        let d = self.dd();
        -30.0 * d - (4.0 * d - 2.0 * self.s_prime) * digamma(k + 1.0)
    }

    /// Point where `margin4` is smallest over `[1, inf)`.
    pub fn critical_n(&self) -> Result<f64> {
        increasing_root(|n| self.slope4(n), 1.0)
    }

    /// Point where `margin5` is smallest over `[1, inf)`: the solution of
    /// `psi(k + 1) = 30d / (2s' - 4d)`.
    pub fn critical_k(&self) -> Result<f64> {
        let d = self.dd();
        let target = 30.0 * d / (2.0 * self.s_prime - 4.0 * d);
        // psi(x) lies in (ln x - 1/x, ln x), so the root x = k + 1 is near e^target.
        if target > 700.0 {
            return Err(Error::OutOfRange(format!(
                "critical k is near e^{target:.1}, beyond f64 range"
            )));
        }
        increasing_root(|k| self.slope5(k), 1.0)
    }
}

fn validate_exponents(d: usize, s: f64, s_prime: f64, beta: f64) -> Result<()> {
    if d == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    let two_d = 2.0 * d as f64;
    if !(s.is_finite() && s_prime.is_finite() && two_d < s_prime && s_prime < s) {
        return Err(domain(format!("need 2d < s' < s, got d={d}, s'={s_prime}, s={s}")));
    }
    if !(beta.is_finite() && beta > 0.0) {
        return Err(domain(format!("beta must be positive and finite, got {beta}")));
    }
    Ok(())
}

/// Smallest representable `x >= lo` with `f(x) >= 0` for an increasing `f`,
/// located by doubling then bisection. The returned point satisfies
/// `f(x) >= 0`.
fn increasing_root(f: impl Fn(f64) -> f64, lo: f64) -> Result<f64> {
    if f(lo) >= 0.0 {
        return Ok(lo);
    }
    let (a, b) = bracket(|x| f(x) >= 0.0, lo)?;
    Ok(bisect(|x| f(x) >= 0.0, a, b))
}

/// Doubles from `lo` until `pass` holds, returning `(failing, passing)`.
fn bracket(mut pass: impl FnMut(f64) -> bool, lo: f64) -> Result<(f64, f64)> {
    let mut a = lo;
    let mut b = lo.max(f64::MIN_POSITIVE) * 2.0;
    while !pass(b) {
        a = b;
        b *= 2.0;
        if !b.is_finite() {
            return Err(Error::NonConvergence { lo: a, hi: b });
        }
    }
    Ok((a, b))
}

/// Bisects a monotone predicate down to adjacent floats; returns the
/// passing end.
fn bisect(mut pass: impl FnMut(f64) -> bool, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_ITERATIONS {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if pass(mid) {
            b = mid;
        } else {
            a = mid;
        }
    }
    b
}

/// Result for one inequality: the smallest log-margin found and where.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub ok: bool,
    /// Minimising `n` or `k`; absent for the inequality without an index.
    pub witness: Option<f64>,
    pub log_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub spec: ConstantsSpec,
    pub slack: f64,
    pub ineq3: InequalityCheck,
    pub ineq4: InequalityCheck,
    pub ineq5: InequalityCheck,
    /// Both margins are non-decreasing beyond the checked range.
    pub tails_monotone: bool,
}

impl InequalityReport {
    pub fn all_ok(&self) -> bool {
        self.ineq3.ok && self.ineq4.ok && self.ineq5.ok && self.tails_monotone
    }
}

fn worst(points: impl Iterator<Item = f64>, margin: impl Fn(f64) -> f64) -> InequalityCheck {
    let mut best = (f64::NAN, f64::INFINITY);
    for x in points {
        let m = margin(x);
        if m < best.1 || m.is_nan() {
            best = (x, m);
        }
    }
    InequalityCheck { ok: best.1 > LOG_SLACK, witness: Some(best.0), log_margin: best.1 }
}

/// Integer neighbours of a real critical point, at least 1.
fn around(x: f64) -> [f64; 2] {
    [x.floor().max(1.0), x.ceil().max(1.0)]
}

/// Evaluates all three inequalities, scanning every `n <= n_max` and
/// `k <= k_max` and adding the integer neighbours of each analytic extremum.
pub fn check_inequalities(spec: &ConstantsSpec, n_max: u64, k_max: u64) -> Result<InequalityReport> {
    spec.validate()?;
    if n_max == 0 || k_max == 0 {
        return Err(domain("n_max and k_max must be at least 1"));
    }
    let n_star = spec.critical_n()?;
    let k_star = spec.critical_k()?;

    let m3 = spec.margin3();
    let ineq3 = InequalityCheck { ok: m3 > LOG_SLACK, witness: None, log_margin: m3 };
    let ineq4 = worst(
        (1..=n_max).map(|n| n as f64).chain(around(n_star)),
        |n| spec.margin4(n),
    );
    let ineq5 = worst(
        (1..=k_max).map(|k| k as f64).chain(around(k_star)),
        |k| spec.margin5(k),
    );
    let n_tail = (n_max as f64).max(n_star.ceil());
    let k_tail = (k_max as f64).max(k_star.ceil());
    let tails_monotone = spec.slope4(n_tail) >= 0.0 && spec.slope5(k_tail) >= 0.0;
    Ok(InequalityReport { spec: *spec, slack: LOG_SLACK, ineq3, ineq4, ineq5, tails_monotone })
}

/// Smallest `ln M` (to floating-point resolution) at which
/// [`check_inequalities`] passes.
pub fn find_min_ln_m(d: usize, s: f64, s_prime: f64, beta: f64, k_max: u64) -> Result<f64> {
    validate_exponents(d, s, s_prime, beta)?;
    let base = ConstantsSpec { d, s, s_prime, beta, ln_m: 1.0 };
    let mut failure = None;
    let mut passes = |ln_m: f64| match check_inequalities(&base.with_ln_m(ln_m), k_max, k_max) {
        Ok(r) => r.all_ok(),
        Err(e) => {
            failure.get_or_insert(e);
            true
        }
    };
    let dd = d as f64;
    let necessary = (LN_1000 + dd * LN_2 + base.prefactor()) / (s - 2.0 * dd);
    let (lo, hi) = bracket(&mut passes, necessary.max(f64::MIN_POSITIVE))?;
    let found = bisect(&mut passes, lo, hi);
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionRow {
    pub k: u64,
    pub ln_pk_bound: f64,
    /// `ln(2^{-d} (k+1)^{-4d} e^{-2k})`.
    pub inductive_bound: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionTable {
    pub d: usize,
    pub rows: Vec<RecursionRow>,
    /// `sum_{k >= 1} P_k` over the computed rows.
    pub sum: f64,
    pub inductive_ok: bool,
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Iterates the bad-block probability bound
/// `P_k <= e^{-30dk} + 2^d k^{4d} P_{k-1}^2` from `P_0 = 2^{-d} / 1000`.
pub fn iterate_recursion(d: usize, k_max: u64) -> Result<RecursionTable> {
    if d == 0 {
        return Err(domain("dimension must be at least 1"));
    }
    if k_max == 0 {
        return Err(domain("k_max must be at least 1"));
    }
    let dd = d as f64;
    let inductive = |k: f64| -dd * LN_2 - 4.0 * dd * (k + 1.0).ln() - 2.0 * k;
    let mut ln_p = -dd * LN_2 - LN_1000;
    let mut rows = Vec::with_capacity(k_max as usize + 1);
    rows.push(RecursionRow { k: 0, ln_pk_bound: ln_p, inductive_bound: inductive(0.0), ok: true });
    let mut sum = 0.0;
    for k in 1..=k_max {
        let kf = k as f64;
        ln_p = log_add_exp(-30.0 * dd * kf, dd * LN_2 + 4.0 * dd * kf.ln() + 2.0 * ln_p);
        let bound = inductive(kf);
        sum += ln_p.exp();
        rows.push(RecursionRow { k, ln_pk_bound: ln_p, inductive_bound: bound, ok: ln_p + LOG_SLACK < bound });
    }
    rows[0].ok = rows[0].ln_pk_bound + LOG_SLACK < rows[0].inductive_bound;
    let inductive_ok = rows.iter().all(|r| r.ok);
    Ok(RecursionTable { d, rows, sum, inductive_ok })
}

/// Inequality checks and recursion together.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub spec: ConstantsSpec,
    pub slack: f64,
    pub ineq3: InequalityCheck,
    pub ineq4: InequalityCheck,
    pub ineq5: InequalityCheck,
    pub tails_monotone: bool,
    /// `ln P_k` bounds for `k = 0..=k_max`.
    pub recursion: Vec<f64>,
    pub recursion_sum: f64,
    pub inductive_ok: bool,
}

impl Certificate {
    pub fn ok(&self) -> bool {
        self.ineq3.ok && self.ineq4.ok && self.ineq5.ok && self.tails_monotone && self.inductive_ok
    }
}

pub fn certify(spec: &ConstantsSpec, n_max: u64, k_max: u64) -> Result<Certificate> {
    let report = check_inequalities(spec, n_max, k_max)?;
    let table = iterate_recursion(spec.d, k_max)?;
    Ok(Certificate {
        spec: *spec,
        slack: report.slack,
        ineq3: report.ineq3,
        ineq4: report.ineq4,
        ineq5: report.ineq5,
        tails_monotone: report.tails_monotone,
        recursion: table.rows.iter().map(|r| r.ln_pk_bound).collect(),
        recursion_sum: table.sum,
        inductive_ok: table.inductive_ok,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct P0Estimate {
    pub trials: u64,
    pub bad: u64,
    pub empirical: f64,
    pub exact: f64,
    /// Binomial standard error at the exact probability.
    pub std_error: f64,
}

/// Probability that a level-0 block `[0, M)^d` contains an open edge longer
/// than `M / 100`, computed as `1 - prod (1 - p)` over those pairs.
pub fn exact_p0(params: &Params, m: u64) -> Result<f64> {
    if m == 0 {
        return Err(domain("block side must be positive"));
    }
    let d = params.d();
    let mi = i64::try_from(m).map_err(|_| Error::Overflow("block side".into()))?;
    let mut k = vec![-(mi - 1); d];
    let mut log_keep = 0.0;
    loop {
        if is_lex_positive(&k) && params.norm().exceeds(&k, m, 100) {
            let p = kernel(params, &k);
            if p >= 1.0 {
                return Ok(1.0);
            }
            let count: f64 = k.iter().map(|&x| (mi - x.abs()) as f64).product();
            log_keep += count * (-p).ln_1p();
        }
        let mut axis = d;
        loop {
            if axis == 0 {
                return Ok(-log_keep.exp_m1());
            }
            axis -= 1;
            if k[axis] < mi - 1 {
                k[axis] += 1;
                break;
            }
            k[axis] = -(mi - 1);
        }
    }
}

fn is_lex_positive(k: &[i64]) -> bool {
    k.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Samples `trials` independent copies of `[0, M)^d` and counts how many are
/// bad at level 0.
pub fn empirical_p0(params: &Params, m: u64, trials: u64, seed: u64) -> Result<P0Estimate> {
    if trials == 0 {
        return Err(domain("trials must be at least 1"));
    }
    if params.boundary() != Boundary::Free {
        return Err(domain("level-0 estimates use a free boundary"));
    }
    let exact = exact_p0(params, m)?;
    let bx = LatticeBox::origin(params.d(), m)?;
    let hierarchy = BlockHierarchy::new(m, 0)?;
    let block = Block::new(0, vec![0; params.d()]);
    let sampler = Sampler::new(Backend::Skip);
    let bad = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<u64> {
            let config = sampler.sample(params, &bx, 0, split_seed(seed, t))?;
            let status = Classifier::new(&config, hierarchy).classify(&block)?;
            Ok(u64::from(!status.is_good()))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let n = trials as f64;
    Ok(P0Estimate {
        trials,
        bad,
        empirical: bad as f64 / n,
        exact,
        std_error: (exact * (1.0 - exact) / n).sqrt(),
    })
}
