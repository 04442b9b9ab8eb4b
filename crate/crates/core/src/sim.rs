//! Seeded Monte-Carlo experiments and parameter sweeps.
//!
//! Trial `i` of a run with master seed `s` owns the seed `derive_seed(s, i)`.
//! The matrix of that trial is built from the substream
//! `derive_seed(trial, STREAM_MATRIX)` and its defective set from
//! `stream(trial, STREAM_DEFECTIVES)`. Trials are evaluated in parallel and
//! reduced by index, so a report depends only on its parameters, the trial
//! count and the seed.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::bits;
use crate::bounds::{self, BoundValue, Regime};
use crate::combinatorics::{binomial, binomial_sum};
use crate::construct::rand_matrix;
use crate::construct::{
    bernoulli_column, qnagt_sample, ColumnSampler, SchemeParams, DEFAULT_QNAGT_ATTEMPTS,
};
use crate::decode::{WeightMode, DEFAULT_ENUMERATION_CAP};
use crate::error::{invalid, Error, Result};
use crate::matrix::{count_outcome, SparseSupport, TestMatrix};
use crate::rng::{self, derive_seed, uniform_subset, STREAM_DEFECTIVES, STREAM_MATRIX};
use crate::verify::{is_k_disjunct, qnagt_zero_error_check, DisjunctMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Experiment {
    /// RandMatrix, failure iff not k-disjunct (exhaustive check).
    ZeroError,
    /// RandMatrix with COMP on a uniform weight-k defective set.
    AvgCase,
    /// I.i.d. `Ber(1/k)` matrix (`1/2` for `k = 1`) with COMP; the
    /// unconstrained reference for [`Experiment::AvgCase`] at `d = 0`.
    AvgCaseBernoulli,
    /// Weight-constrained QNAGT matrix, failure iff some pair of weight-k
    /// inputs collides.
    Qnagt,
    /// Weight-constrained QNAGT matrix and a uniform weight-k input `x`,
    /// failure iff another weight-k input has the same count outcome.
    QnagtFixedInput,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::ZeroError,
        Experiment::AvgCase,
        Experiment::AvgCaseBernoulli,
        Experiment::Qnagt,
        Experiment::QnagtFixedInput,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::ZeroError => "zero-error",
            Experiment::AvgCase => "avg-case",
            Experiment::AvgCaseBernoulli => "avg-case-bernoulli",
            Experiment::Qnagt => "qnagt",
            Experiment::QnagtFixedInput => "qnagt-fixed-input",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|e| e.name() == s)
    }

    fn is_qnagt(self) -> bool {
        matches!(self, Experiment::Qnagt | Experiment::QnagtFixedInput)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub experiment: Experiment,
    pub params: SchemeParams,
    pub trials: u64,
    pub failures: u64,
    pub empirical_rate: f64,
    /// Wilson score interval at 95%.
    pub wilson_interval: (f64, f64),
    pub analytical_bound: Option<BoundValue>,
    pub seed: u64,
    pub wall_time: f64,
    /// Notes on the parameter point, e.g. `t` below a lower bound.
    pub flags: Vec<String>,
}

impl SimulationReport {
    /// Whether the bound is compatible with the observed failures, i.e. lies
    /// above the lower end of the Wilson interval. `None` without a bound.
    pub fn within_bound(&self) -> Option<bool> {
        self.analytical_bound
            .as_ref()
            .map(|b| self.wilson_interval.0 <= b.value)
    }
}

/// Wilson score interval for `failures` out of `trials` at confidence
/// `1 - 2 (1 - Φ(z))`, `z = Φ⁻¹(0.975)`.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = Normal::standard().inverse_cdf(0.975);
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Runs `f` on a dedicated pool with `workers` threads.
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| invalid(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn count_failures(
    trials: u64,
    seed: u64,
    trial: impl Fn(u64) -> Result<bool> + Sync,
) -> Result<u64> {
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|i| trial(derive_seed(seed, i)))
        .collect::<Result<_>>()?;
    Ok(outcomes.into_iter().filter(|&f| f).count() as u64)
}

fn report(
    experiment: Experiment,
    params: &SchemeParams,
    trials: u64,
    failures: u64,
    bound: Option<BoundValue>,
    started: Instant,
    flags: Vec<String>,
) -> SimulationReport {
    SimulationReport {
        experiment,
        params: params.clone(),
        trials,
        failures,
        empirical_rate: failures as f64 / trials as f64,
        wilson_interval: wilson_interval(failures, trials),
        analytical_bound: bound,
        seed: params.seed,
        wall_time: started.elapsed().as_secs_f64(),
        flags,
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(invalid("trials must be at least 1"));
    }
    Ok(())
}

fn randmatrix_flags(p: &SchemeParams) -> Vec<String> {
    let mut flags = Vec::new();
    let lb = bounds::lemma1_lb(p.n, p.k, p.d);
    if (p.t as f64) < lb.value {
        flags.push(format!("t = {} is below the lower bound {}", p.t, lb.value));
    }
    let nominal = bounds::nominal_alpha(p.n, p.k);
    if p.alpha < nominal {
        flags.push(format!("alpha = {} is clamped below {nominal}", p.alpha));
    }
    flags
}

/// Per trial: a fresh RandMatrix, checked exhaustively for k-disjunctness.
pub fn run_zero_error_experiment(params: &SchemeParams, trials: u64) -> Result<SimulationReport> {
    check_trials(trials)?;
    params.validate_randmatrix()?;
    let started = Instant::now();
    let (n, k) = (params.n, params.k);
    let required = (n as u128).saturating_mul(binomial((n - 1) as u64, k.min(n - 1) as u64));
    if required > DEFAULT_ENUMERATION_CAP {
        return Err(Error::Infeasible {
            required,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let failures = count_failures(trials, params.seed, |ts| {
        let p = SchemeParams {
            seed: derive_seed(ts, STREAM_MATRIX),
            ..params.clone()
        };
        let m = rand_matrix(&p)?;
        Ok(!is_k_disjunct(&m, k, DisjunctMode::exhaustive())?.passed())
    })?;
    let bound = bounds::disjunct_fail_ub(n, k, params.d, params.t, params.alpha)?;
    Ok(report(
        Experiment::ZeroError,
        params,
        trials,
        failures,
        Some(bound),
        started,
        randmatrix_flags(params),
    ))
}

/// COMP misdecodes `x` iff some column outside `x` has its support inside
/// the union `u` of the defective columns. Columns are generated only as far
/// as needed: the first one placed outside `u` settles a column. Columns are
/// drawn from the same streams as [`rand_matrix`], so the verdict equals the
/// one on the fully generated matrix.
fn randmatrix_comp_fails(p: &SchemeParams, matrix_seed: u64, x: &[usize]) -> bool {
    let mut u = vec![0u64; bits::words_for(p.t)];
    for &j in x {
        let mut s = ColumnSampler::new(p.t, p.d, rng::stream(matrix_seed, j as u64));
        for _ in 0..p.alpha {
            bits::set(&mut u, s.pick().expect("alpha is admissible"));
        }
    }
    (0..p.n).filter(|j| x.binary_search(j).is_err()).any(|j| {
        let mut s = ColumnSampler::new(p.t, p.d, rng::stream(matrix_seed, j as u64));
        (0..p.alpha).all(|_| bits::get(&u, s.pick().expect("alpha is admissible")))
    })
}

/// Per trial: a fresh RandMatrix and a uniform weight-k defective set;
/// failure iff COMP does not return exactly that set.
pub fn run_avg_case_experiment(params: &SchemeParams, trials: u64) -> Result<SimulationReport> {
    check_trials(trials)?;
    params.validate_randmatrix()?;
    let started = Instant::now();
    let failures = count_failures(trials, params.seed, |ts| {
        let x = uniform_subset(&mut rng::stream(ts, STREAM_DEFECTIVES), params.n, params.k);
        Ok(randmatrix_comp_fails(
            params,
            derive_seed(ts, STREAM_MATRIX),
            &x,
        ))
    })?;
    let bound = bounds::avg_fail_ub(params.n, params.k, params.d, params.t, params.alpha)?;
    Ok(report(
        Experiment::AvgCase,
        params,
        trials,
        failures,
        Some(bound),
        started,
        randmatrix_flags(params),
    ))
}

/// Entry probability of the i.i.d. reference matrix.
pub fn bernoulli_reference_p(k: usize) -> f64 {
    if k <= 1 {
        0.5
    } else {
        1.0 / k as f64
    }
}

/// As [`run_avg_case_experiment`] on an i.i.d. `t × n` matrix; `d` and
/// `alpha` are ignored. There is no analytical bound for this experiment.
pub fn run_avg_case_bernoulli_experiment(
    params: &SchemeParams,
    trials: u64,
) -> Result<SimulationReport> {
    check_trials(trials)?;
    if params.k == 0 || params.k > params.n || params.t == 0 {
        return Err(invalid("need 1 <= k <= n and t >= 1"));
    }
    let started = Instant::now();
    let q = bernoulli_reference_p(params.k);
    let failures = count_failures(trials, params.seed, |ts| {
        let x = uniform_subset(&mut rng::stream(ts, STREAM_DEFECTIVES), params.n, params.k);
        let ms = derive_seed(ts, STREAM_MATRIX);
        let mut u = vec![0u64; bits::words_for(params.t)];
        for &j in &x {
            bits::or_assign(
                &mut u,
                &bernoulli_column(params.t, q, rng::stream(ms, j as u64)),
            );
        }
        Ok((0..params.n)
            .filter(|j| x.binary_search(j).is_err())
            .any(|j| {
                bits::is_subset(
                    &bernoulli_column(params.t, q, rng::stream(ms, j as u64)),
                    &u,
                )
            }))
    })?;
    Ok(report(
        Experiment::AvgCaseBernoulli,
        params,
        trials,
        failures,
        None,
        started,
        Vec::new(),
    ))
}

fn qnagt_matrix(params: &SchemeParams, ts: u64) -> Result<TestMatrix> {
    let w = params
        .w
        .ok_or_else(|| invalid("QNAGT experiments need w"))?;
    Ok(qnagt_sample(
        params.n,
        params.t,
        w,
        derive_seed(ts, STREAM_MATRIX),
        DEFAULT_QNAGT_ATTEMPTS,
    )?
    .matrix)
}

fn qnagt_setup(params: &SchemeParams) -> Result<(usize, BoundValue, Vec<String>)> {
    params.validate_qnagt()?;
    let w = params.w.expect("validated");
    let mut flags = Vec::new();
    if w > params.t {
        flags.push(format!(
            "w = {w} exceeds t = {}, so p = w/(2t) > 1/2",
            params.t
        ));
    }
    Ok((
        w,
        bounds::qnagt_fail_ub(params.n, params.k, w, params.t)?,
        flags,
    ))
}

/// Per trial: a weight-constrained QNAGT matrix with `params.t` rows;
/// failure iff the exactly-k pair check finds a collision.
pub fn run_qnagt_experiment(params: &SchemeParams, trials: u64) -> Result<SimulationReport> {
    check_trials(trials)?;
    let (_, bound, flags) = qnagt_setup(params)?;
    let started = Instant::now();
    let (n, k) = (params.n, params.k);
    let required = binomial_sum(n as u64, 0..=k.min(n - k) as u64);
    if required > DEFAULT_ENUMERATION_CAP {
        return Err(Error::Infeasible {
            required,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let failures = count_failures(trials, params.seed, |ts| {
        let m = qnagt_matrix(params, ts)?;
        Ok(
            !qnagt_zero_error_check(&m, params.k, WeightMode::ExactlyK, DEFAULT_ENUMERATION_CAP)?
                .pass,
        )
    })?;
    Ok(report(
        Experiment::Qnagt,
        params,
        trials,
        failures,
        Some(bound),
        started,
        flags,
    ))
}

/// Per trial: a weight-constrained QNAGT matrix and a uniform weight-k input
/// `x`; failure iff some other weight-k input has the same count outcome.
pub fn run_qnagt_fixed_input_experiment(
    params: &SchemeParams,
    trials: u64,
) -> Result<SimulationReport> {
    use itertools::Itertools;
    check_trials(trials)?;
    let (_, bound, flags) = qnagt_setup(params)?;
    let (n, k) = (params.n, params.k);
    let required = binomial(n as u64, k as u64);
    if required > DEFAULT_ENUMERATION_CAP {
        return Err(Error::Infeasible {
            required,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let started = Instant::now();
    let failures = count_failures(trials, params.seed, |ts| {
        let m = qnagt_matrix(params, ts)?;
        let x = uniform_subset(&mut rng::stream(ts, STREAM_DEFECTIVES), n, k);
        let y = count_outcome(&m, &SparseSupport::new(x.clone(), n)?)?;
        for other in (0..n).combinations(k) {
            if other != x && count_outcome(&m, &SparseSupport::new(other, n)?)? == y {
                return Ok(true);
            }
        }
        Ok(false)
    })?;
    Ok(report(
        Experiment::QnagtFixedInput,
        params,
        trials,
        failures,
        Some(bound),
        started,
        flags,
    ))
}

pub fn run_experiment(
    experiment: Experiment,
    params: &SchemeParams,
    trials: u64,
) -> Result<SimulationReport> {
    match experiment {
        Experiment::ZeroError => run_zero_error_experiment(params, trials),
        Experiment::AvgCase => run_avg_case_experiment(params, trials),
        Experiment::AvgCaseBernoulli => run_avg_case_bernoulli_experiment(params, trials),
        Experiment::Qnagt => run_qnagt_experiment(params, trials),
        Experiment::QnagtFixedInput => run_qnagt_fixed_input_experiment(params, trials),
    }
}

pub const CSV_HEADER: &str =
    "experiment,n,k,d,w,t,alpha,trials,failures,rate,wilson_lo,wilson_hi,bound,seed";

impl SimulationReport {
    /// One CSV row (no trailing newline); `-1` marks fields that do not apply.
    pub fn csv_row(&self) -> String {
        let p = &self.params;
        let randmatrix = matches!(self.experiment, Experiment::ZeroError | Experiment::AvgCase);
        let (d, alpha) = if !randmatrix {
            (-1, -1)
        } else {
            (p.d as i64, p.alpha as i64)
        };
        let w = p.w.map_or(-1, |w| w as i64);
        let bound = self.analytical_bound.as_ref().map_or(-1.0, |b| b.value);
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.experiment.name(),
            p.n,
            p.k,
            d,
            w,
            p.t,
            alpha,
            self.trials,
            self.failures,
            self.empirical_rate,
            self.wilson_interval.0,
            self.wilson_interval.1,
            bound,
            self.seed
        )
    }
}

/// Header plus one row per report, LF-terminated.
pub fn to_csv(reports: &[SimulationReport]) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

/// How a sweep cell chooses `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SweepTests {
    /// Fixed number of tests for every cell.
    Fixed(usize),
    /// Bound inversion at the given target (RandMatrix experiments), or the
    /// construction's own test count (QNAGT experiments, target ignored).
    Target(f64),
}

/// Axes of a sweep. `d` is used by the RandMatrix experiments and `w` by the
/// QNAGT ones; the other axis is ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepGrid {
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub d: Vec<usize>,
    pub w: Vec<usize>,
    pub tests: SweepTests,
    pub delta: f64,
    pub gamma: f64,
}

impl SweepGrid {
    /// The cells in row-major order over `(n, k, d or w)`.
    pub fn cells(&self, experiment: Experiment) -> Vec<(usize, usize, usize)> {
        let third = if experiment.is_qnagt() {
            &self.w
        } else {
            &self.d
        };
        let mut out = Vec::new();
        for &n in &self.n {
            for &k in &self.k {
                for &x in third {
                    out.push((n, k, x));
                }
            }
        }
        out
    }
}

/// Parameters of one sweep cell with seed `seed`.
pub fn cell_params(
    grid: &SweepGrid,
    experiment: Experiment,
    (n, k, x): (usize, usize, usize),
    seed: u64,
) -> Result<SchemeParams> {
    if experiment.is_qnagt() {
        let mut p = SchemeParams::qnagt(n, k, x, grid.delta, grid.gamma, seed)?;
        if let SweepTests::Fixed(t) = grid.tests {
            p.t = t;
        }
        return Ok(p);
    }
    let regime = match experiment {
        Experiment::ZeroError => Regime::ZeroError,
        _ => Regime::AvgCase,
    };
    let tests = match grid.tests {
        SweepTests::Fixed(t) => crate::construct::TestCount::Fixed(t),
        SweepTests::Target(p) => crate::construct::TestCount::Target(p),
    };
    Ok(crate::construct::resolve_randmatrix(regime, n, k, x, tests, None, seed)?.params)
}

/// Runs `experiment` on every grid cell; cell `c` uses seed
/// `derive_seed(seed, c)`, recorded in its report.
pub fn sweep(
    grid: &SweepGrid,
    trials: u64,
    experiment: Experiment,
    seed: u64,
) -> Result<Vec<SimulationReport>> {
    let cells = grid.cells(experiment);
    if cells.is_empty() {
        return Err(invalid("the sweep grid is empty"));
    }
    cells
        .into_iter()
        .enumerate()
        .map(|(c, cell)| {
            let p = cell_params(grid, experiment, cell, derive_seed(seed, c as u64))?;
            run_experiment(experiment, &p, trials)
        })
        .collect()
}
