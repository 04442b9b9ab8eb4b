//! `rlgt`: construct, verify and decode group-testing matrices, evaluate the
//! bounds and run seeded simulations.
//!
//! Exit status: 0 success or pass, 1 verified failure, 2 usage error,
//! 3 infeasible enumeration scale.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rlgt_core::bounds::{self, BoundValue, Regime};
use rlgt_core::construct::{
    bernoulli_matrix, qnagt_construct, rand_matrix, resolve_randmatrix, spacer_embed, TestCount,
    DEFAULT_DELTA, DEFAULT_GAMMA,
};
use rlgt_core::decode::{
    brute_force_nagt_decode, brute_force_qnagt_decode, comp_decode, WeightMode,
    DEFAULT_ENUMERATION_CAP,
};
use rlgt_core::matrix::{check_runlength, check_weight, Check, RunlengthMode};
use rlgt_core::sim::{self, Experiment, SweepGrid, SweepTests};
use rlgt_core::verify::{is_k_disjunct, qnagt_zero_error_check, DisjunctMode};
use rlgt_core::{Error, Outcome, OutcomeKind, TestMatrix};

#[derive(Parser)]
#[command(
    name = "rlgt",
    version,
    about = "Runlength-constrained group testing toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a test matrix and write it in the text format.
    Construct(ConstructArgs),
    /// Check a structural property of a matrix file.
    Verify(VerifyArgs),
    /// Recover the defective set from a matrix and an outcome file.
    Decode(DecodeArgs),
    /// Print lower bounds, failure bounds and minimal test counts.
    Bounds(BoundsArgs),
    /// Run one Monte-Carlo experiment and print a CSV row.
    Simulate(SimulateArgs),
    /// Run an experiment over a parameter grid and print CSV.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Scheme {
    Randmatrix,
    Spacer,
    Bernoulli,
    Qnagt,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    ZeroError,
    AvgCase,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::ZeroError => Regime::ZeroError,
            RegimeArg::AvgCase => Regime::AvgCase,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    ExactlyK,
    AtMostK,
}

impl From<ModeArg> for WeightMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ExactlyK => WeightMode::ExactlyK,
            ModeArg::AtMostK => WeightMode::AtMostK,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    scheme: Scheme,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Runlength gap.
    #[arg(long, default_value_t = 0)]
    d: usize,
    /// Column-weight cap (qnagt).
    #[arg(long)]
    w: Option<usize>,
    /// Number of tests; for spacer, the number of base rows.
    #[arg(long)]
    t: Option<usize>,
    /// Failure probability that fixes t by bound inversion (default 1/n).
    #[arg(long)]
    target: Option<f64>,
    /// Derive t as c_t times the order-of-growth expression.
    #[arg(long)]
    c_t: Option<f64>,
    #[arg(long)]
    alpha: Option<usize>,
    /// Entry probability (bernoulli; default 1/k).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value = "zero-error")]
    regime: RegimeArg,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Runlength,
    Weight,
    Disjunct,
    QnagtZeroError,
}

#[derive(Args)]
struct VerifyArgs {
    /// Matrix file.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum)]
    check: CheckKind,
    /// Runlength gap; defaults to the file's claim.
    #[arg(long)]
    d: Option<usize>,
    /// Also check the wrap-around gap between the last and the first one.
    #[arg(long)]
    cyclic: bool,
    /// Weight cap; defaults to the file's claim.
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "exactly-k")]
    mode: ModeArg,
    /// Check this many random (column, set) pairs instead of all of them.
    #[arg(long)]
    sampled: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderKind {
    Comp,
    Brute,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// File with one line of space-separated outcome values.
    #[arg(long)]
    outcome: PathBuf,
    #[arg(long, value_enum, default_value = "comp")]
    decoder: DecoderKind,
    /// Treat the outcome as test counts (quantitative testing).
    #[arg(long)]
    counts: bool,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value = "at-most-k")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u128,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    d: usize,
    #[arg(long)]
    w: Option<usize>,
    /// Evaluate the failure bounds at this t as well.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    alpha: Option<usize>,
    /// Target probability for the minimal test counts (default 1/n).
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentArg {
    ZeroError,
    AvgCase,
    AvgCaseBernoulli,
    Qnagt,
    QnagtFixedInput,
}

impl From<ExperimentArg> for Experiment {
    fn from(e: ExperimentArg) -> Self {
        match e {
            ExperimentArg::ZeroError => Experiment::ZeroError,
            ExperimentArg::AvgCase => Experiment::AvgCase,
            ExperimentArg::AvgCaseBernoulli => Experiment::AvgCaseBernoulli,
            ExperimentArg::Qnagt => Experiment::Qnagt,
            ExperimentArg::QnagtFixedInput => Experiment::QnagtFixedInput,
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    experiment: ExperimentArg,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    d: usize,
    #[arg(long)]
    w: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    target: Option<f64>,
    #[arg(long)]
    alpha: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    experiment: ExperimentArg,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    d: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    w: Vec<usize>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long)]
    target: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure modes of a command, mapped to exit statuses.
enum Failure {
    Verified(String),
    Usage(String),
    Infeasible(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible { .. } => Failure::Infeasible(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn echo(pairs: &[(&str, String)]) {
    let line: Vec<String> = pairs.iter().map(|(k, v)| format!("{k}={v}")).collect();
    eprintln!("# {}", line.join(" "));
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or("-".into(), |v| v.to_string())
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let s = rand::random::<u64>();
        eprintln!("# no --seed given, using seed={s}");
        s
    })
}

fn write_output(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn read_matrix(path: &Path) -> Result<TestMatrix, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(TestMatrix::from_text(&text)?)
}

fn default_target(n: usize) -> f64 {
    1.0 / n as f64
}

fn construct(a: ConstructArgs) -> CmdResult {
    let seed = resolve_seed(a.seed);
    let m = match a.scheme {
        Scheme::Randmatrix => {
            let tests = match (a.t, a.c_t, a.target) {
                (Some(t), None, None) => TestCount::Fixed(t),
                (None, Some(c), None) => TestCount::Order(c),
                (None, None, target) => TestCount::Target(target.unwrap_or(default_target(a.n))),
                _ => return Err(usage("give at most one of --t, --c-t, --target")),
            };
            let r = resolve_randmatrix(a.regime.into(), a.n, a.k, a.d, tests, a.alpha, seed)?;
            let p = &r.params;
            echo(&[
                ("scheme", "randmatrix".into()),
                ("n", p.n.to_string()),
                ("k", p.k.to_string()),
                ("d", p.d.to_string()),
                ("t", p.t.to_string()),
                ("alpha", p.alpha.to_string()),
                ("c_t", opt(p.c_t)),
                ("seed", seed.to_string()),
            ]);
            for note in &r.notes {
                eprintln!("# {note}");
            }
            rand_matrix(p)?
        }
        Scheme::Spacer => {
            let (t_base, target) = match (a.t, a.target) {
                (Some(t), None) => (t, None),
                (None, target) => {
                    let target = target.unwrap_or(default_target(a.n));
                    (
                        bounds::spacer_min_tests(a.n, a.k, a.d, target)?.t_base,
                        Some(target),
                    )
                }
                _ => return Err(usage("give at most one of --t, --target")),
            };
            let p = a.p.unwrap_or(sim::bernoulli_reference_p(a.k));
            echo(&[
                ("scheme", "spacer".into()),
                ("n", a.n.to_string()),
                ("k", a.k.to_string()),
                ("d", a.d.to_string()),
                ("t_base", t_base.to_string()),
                ("t", ((a.d + 1) * t_base - a.d).to_string()),
                ("p", p.to_string()),
                ("target", opt(target)),
                ("seed", seed.to_string()),
            ]);
            spacer_embed(&bernoulli_matrix(t_base, a.n, p, seed)?, a.d)
        }
        Scheme::Bernoulli => {
            let t = a.t.ok_or_else(|| usage("bernoulli needs --t"))?;
            let p = a.p.unwrap_or(sim::bernoulli_reference_p(a.k));
            echo(&[
                ("scheme", "bernoulli".into()),
                ("n", a.n.to_string()),
                ("t", t.to_string()),
                ("p", p.to_string()),
                ("seed", seed.to_string()),
            ]);
            bernoulli_matrix(t, a.n, p, seed)?
        }
        Scheme::Qnagt => {
            let w = a.w.ok_or_else(|| usage("qnagt needs --w"))?;
            let q = qnagt_construct(a.n, a.k, w, a.delta, a.gamma, seed)?;
            echo(&[
                ("scheme", "qnagt".into()),
                ("n", a.n.to_string()),
                ("k", a.k.to_string()),
                ("w", w.to_string()),
                ("t", q.t.to_string()),
                ("p", q.p.to_string()),
                ("delta", a.delta.to_string()),
                ("gamma", a.gamma.to_string()),
                ("attempts", q.attempts.to_string()),
                ("seed", seed.to_string()),
            ]);
            q.matrix
        }
    };
    write_output(a.out.as_deref(), &m.to_text())?;
    Ok(())
}

fn verify(a: VerifyArgs) -> CmdResult {
    let m = read_matrix(&a.matrix)?;
    match a.check {
        CheckKind::Runlength => {
            let d =
                a.d.or(m.d_claimed())
                    .ok_or_else(|| usage("runlength check needs --d or a claim in the file"))?;
            let mode = if a.cyclic {
                RunlengthMode::Cyclic
            } else {
                RunlengthMode::Linear
            };
            echo(&[
                ("check", "runlength".into()),
                ("d", d.to_string()),
                ("cyclic", a.cyclic.to_string()),
            ]);
            match check_runlength(&m, d, mode) {
                Check::Pass => println!("pass"),
                Check::Fail(v) => return Err(Failure::Verified(format!("fail: {v}"))),
            }
        }
        CheckKind::Weight => {
            let w =
                a.w.or(m.w_claimed())
                    .ok_or_else(|| usage("weight check needs --w or a claim in the file"))?;
            echo(&[("check", "weight".into()), ("w", w.to_string())]);
            match check_weight(&m, w) {
                Check::Pass => println!("pass"),
                Check::Fail(v) => return Err(Failure::Verified(format!("fail: {v}"))),
            }
        }
        CheckKind::Disjunct => {
            let k = a.k.ok_or_else(|| usage("disjunct check needs --k"))?;
            let mode = match a.sampled {
                Some(trials) => DisjunctMode::Sampled {
                    trials,
                    seed: resolve_seed(a.seed),
                },
                None => DisjunctMode::Exhaustive { cap: a.cap },
            };
            echo(&[
                ("check", "disjunct".into()),
                ("k", k.to_string()),
                ("mode", format!("{mode:?}")),
            ]);
            let zero = m.zero_columns();
            if !zero.is_empty() {
                eprintln!("# all-zero columns: {zero:?}");
            }
            let r = is_k_disjunct(&m, k, mode)?;
            eprintln!("# subsets checked: {}", r.subsets_checked);
            match r.witness {
                None => println!(
                    "{}",
                    if matches!(mode, DisjunctMode::Sampled { .. }) {
                        "pass (sampled, probabilistic)"
                    } else {
                        "pass"
                    }
                ),
                Some((j, s)) => {
                    return Err(Failure::Verified(format!(
                        "fail: column {j} is covered by columns {s:?}"
                    )))
                }
            }
        }
        CheckKind::QnagtZeroError => {
            let k =
                a.k.ok_or_else(|| usage("qnagt-zero-error check needs --k"))?;
            let mode: WeightMode = a.mode.into();
            echo(&[
                ("check", "qnagt-zero-error".into()),
                ("k", k.to_string()),
                ("mode", format!("{mode:?}")),
            ]);
            let r = qnagt_zero_error_check(&m, k, mode, a.cap)?;
            match r.witness {
                None => println!("pass"),
                Some((x, y)) => {
                    return Err(Failure::Verified(format!(
                        "fail: supports {x} and {y} have equal count outcomes"
                    )))
                }
            }
        }
    }
    Ok(())
}

fn decode(a: DecodeArgs) -> CmdResult {
    let m = read_matrix(&a.matrix)?;
    let text = fs::read_to_string(&a.outcome)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.outcome.display())))?;
    let kind = if a.counts {
        OutcomeKind::Count
    } else {
        OutcomeKind::Boolean
    };
    let y = Outcome::parse(text.trim_end_matches('\n'), kind)?;
    let r = match a.decoder {
        DecoderKind::Comp => {
            if a.counts {
                return Err(usage("the comp decoder takes a boolean outcome"));
            }
            echo(&[("decoder", "comp".into())]);
            comp_decode(&m, &y)?
        }
        DecoderKind::Brute => {
            let k = a.k.ok_or_else(|| usage("the brute decoder needs --k"))?;
            let mode: WeightMode = a.mode.into();
            echo(&[
                ("decoder", "brute".into()),
                ("k", k.to_string()),
                ("mode", format!("{mode:?}")),
                ("counts", a.counts.to_string()),
            ]);
            if a.counts {
                brute_force_qnagt_decode(&m, &y, k, mode, a.cap)?
            } else {
                brute_force_nagt_decode(&m, &y, k, mode, a.cap)?
            }
        }
    };
    println!("{}", r.estimate);
    if r.ambiguous {
        eprintln!("# ambiguous: another support is consistent with the outcome");
    }
    Ok(())
}

fn bound_line(name: &str, b: &Result<BoundValue, Error>) {
    match b {
        Ok(b) => {
            let flags = b.violations();
            println!(
                "{name:<22} {:>14} raw={:<22} {}",
                b.value,
                b.raw,
                if flags.is_empty() {
                    String::new()
                } else {
                    format!("violated: {}", flags.join("; "))
                }
            );
        }
        Err(e) => println!("{name:<22} {:>14} ({e})", "n/a"),
    }
}

fn bounds_cmd(a: BoundsArgs) -> CmdResult {
    let target = a.target.unwrap_or(default_target(a.n));
    echo(&[
        ("n", a.n.to_string()),
        ("k", a.k.to_string()),
        ("d", a.d.to_string()),
        ("w", opt(a.w)),
        ("t", opt(a.t)),
        ("target", target.to_string()),
        ("delta", a.delta.to_string()),
    ]);
    println!("lower bounds on t");
    bound_line("lemma1", &Ok(bounds::lemma1_lb(a.n, a.k, a.d)));
    bound_line("zero-error", &bounds::zero_error_lb(a.n, a.k, a.d));
    bound_line("avg-case", &bounds::avg_case_lb(a.n, a.k, a.d));
    bound_line(
        "qnagt-entropy",
        &bounds::qnagt_entropy_lb(a.n, a.k, a.d, a.delta, None),
    );
    bound_line("qnagt-counting", &bounds::qnagt_counting_lb(a.n, a.k, a.d));
    println!("minimal t at target {target}");
    for (name, regime, param) in [
        ("zero-error", Regime::ZeroError, Some(a.d)),
        ("avg-case", Regime::AvgCase, Some(a.d)),
        ("qnagt", Regime::Qnagt, a.w),
    ] {
        let Some(param) = param else { continue };
        match bounds::min_tests(regime, a.n, a.k, param, target) {
            Ok(mt) => println!(
                "{name:<22} {:>14} alpha={} bound={}",
                mt.t,
                opt(mt.alpha),
                mt.bound.value
            ),
            Err(e) => println!("{name:<22} {:>14} ({e})", "n/a"),
        }
    }
    match bounds::spacer_min_tests(a.n, a.k, a.d, target) {
        Ok(s) => println!(
            "{:<22} {:>14} t_base={} bound={}",
            "spacer", s.t, s.t_base, s.bound.value
        ),
        Err(e) => println!("{:<22} {:>14} ({e})", "spacer", "n/a"),
    }
    if let Some(t) = a.t {
        println!("failure bounds at t = {t}");
        match a.alpha.or_else(|| bounds::default_alpha(a.n, a.k, t, a.d)) {
            Some(alpha) => {
                bound_line(
                    &format!("disjunct (alpha={alpha})"),
                    &bounds::disjunct_fail_ub(a.n, a.k, a.d, t, alpha),
                );
                bound_line(
                    &format!("avg-case (alpha={alpha})"),
                    &bounds::avg_fail_ub(a.n, a.k, a.d, t, alpha),
                );
            }
            None => println!("no admissible alpha: t < 2d+1"),
        }
        if let Some(w) = a.w {
            bound_line("qnagt", &bounds::qnagt_fail_ub(a.n, a.k, w, t));
            bound_line(
                "qnagt-entropy (weight)",
                &bounds::qnagt_entropy_lb_weight(a.n, a.k, w, t, a.delta, None),
            );
        }
    }
    Ok(())
}

fn with_optional_workers<T: Send>(
    workers: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, Failure> {
    match workers {
        Some(w) => Ok(sim::with_workers(w, f)?),
        None => Ok(f()),
    }
}

fn simulate(a: SimulateArgs) -> CmdResult {
    let seed = resolve_seed(a.seed);
    let experiment: Experiment = a.experiment.into();
    let grid = SweepGrid {
        n: vec![a.n],
        k: vec![a.k],
        d: vec![a.d],
        w: a.w.into_iter().collect(),
        tests: match (a.t, a.target) {
            (Some(t), None) => SweepTests::Fixed(t),
            (None, target) => SweepTests::Target(target.unwrap_or(default_target(a.n))),
            _ => return Err(usage("give at most one of --t, --target")),
        },
        delta: a.delta,
        gamma: a.gamma,
    };
    let cell = *grid
        .cells(experiment)
        .first()
        .ok_or_else(|| usage("this experiment needs --w"))?;
    let mut params = sim::cell_params(&grid, experiment, cell, seed)?;
    if let Some(alpha) = a.alpha {
        params.alpha = alpha;
    }
    echo(&[
        ("experiment", experiment.name().into()),
        ("n", params.n.to_string()),
        ("k", params.k.to_string()),
        ("d", params.d.to_string()),
        ("w", opt(params.w)),
        ("t", params.t.to_string()),
        ("alpha", params.alpha.to_string()),
        ("trials", a.trials.to_string()),
        ("seed", seed.to_string()),
        ("workers", opt(a.workers)),
    ]);
    let report = with_optional_workers(a.workers, || {
        sim::run_experiment(experiment, &params, a.trials)
    })??;
    for f in &report.flags {
        eprintln!("# flag: {f}");
    }
    eprintln!("# wall_time={:.3}s", report.wall_time);
    write_output(a.out.as_deref(), &sim::to_csv(&[report]))?;
    Ok(())
}

fn sweep(a: SweepArgs) -> CmdResult {
    let seed = resolve_seed(a.seed);
    let experiment: Experiment = a.experiment.into();
    let grid = SweepGrid {
        n: a.n,
        k: a.k,
        d: a.d,
        w: a.w,
        tests: match (a.t, a.target) {
            (Some(t), None) => SweepTests::Fixed(t),
            (None, Some(p)) => SweepTests::Target(p),
            (None, None) => return Err(usage("sweep needs --t or --target")),
            _ => return Err(usage("give at most one of --t, --target")),
        },
        delta: a.delta,
        gamma: a.gamma,
    };
    echo(&[
        ("experiment", experiment.name().into()),
        ("n", format!("{:?}", grid.n)),
        ("k", format!("{:?}", grid.k)),
        ("d", format!("{:?}", grid.d)),
        ("w", format!("{:?}", grid.w)),
        ("tests", format!("{:?}", grid.tests)),
        ("trials", a.trials.to_string()),
        ("seed", seed.to_string()),
        ("cells", grid.cells(experiment).len().to_string()),
    ]);
    let reports =
        with_optional_workers(a.workers, || sim::sweep(&grid, a.trials, experiment, seed))??;
    write_output(a.out.as_deref(), &sim::to_csv(&reports))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => construct(a),
        Command::Verify(a) => verify(a),
        Command::Decode(a) => decode(a),
        Command::Bounds(a) => bounds_cmd(a),
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verified(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("infeasible: {msg}");
            ExitCode::from(3)
        }
    }
}
