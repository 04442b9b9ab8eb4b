//! Closed-form lower bounds on the number of tests, union-bound failure
//! probabilities for the random constructions, and their inversion to a
//! minimal number of tests.
//!
//! Probabilities are evaluated in the natural-log domain and clamped to
//! `[0, 1]` only at the end; the unclamped logarithm is kept in
//! [`BoundValue::raw`]. Entropies and all logarithms that appear inside the
//! formulas are base 2.
//!
//! Every asymptotic statement is realised as an explicit inequality. Whatever
//! was dropped to get there (an `o(1)` slack, an unspecified constant, an
//! asymptotic regime) is recorded as an [`Assumption`] on the result rather
//! than silently ignored.

use std::f64::consts::{E, PI};

use statrs::function::factorial::ln_binomial;

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// A lower bound on the number of tests `t`.
    LowerBoundT,
    /// An upper bound on a failure probability.
    UpperBoundProbability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssumptionKind {
    /// A hypothesis of the underlying theorem, checkable at the given point.
    Precondition,
    /// An asymptotic regime condition that can only be flagged at finite size.
    Regime,
    /// A slack term that was dropped, or a constant chosen by this crate.
    Realization,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assumption {
    pub description: String,
    pub kind: AssumptionKind,
    pub holds: bool,
}

impl Assumption {
    fn precondition(description: impl Into<String>, holds: bool) -> Self {
        Self {
            description: description.into(),
            kind: AssumptionKind::Precondition,
            holds,
        }
    }

    fn regime(description: impl Into<String>, holds: bool) -> Self {
        Self {
            description: description.into(),
            kind: AssumptionKind::Regime,
            holds,
        }
    }

    fn realization(description: impl Into<String>) -> Self {
        Self {
            description: description.into(),
            kind: AssumptionKind::Realization,
            holds: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundValue {
    pub kind: BoundKind,
    /// For `LowerBoundT`: the rounded-up bound on `t`. For
    /// `UpperBoundProbability`: the probability clamped to `[0, 1]`.
    pub value: f64,
    /// For `LowerBoundT`: the unrounded expression. For
    /// `UpperBoundProbability`: the natural log of the unclamped bound.
    pub raw: f64,
    pub assumptions: Vec<Assumption>,
}

impl BoundValue {
    fn lower(value: f64, raw: f64, assumptions: Vec<Assumption>) -> Self {
        Self {
            kind: BoundKind::LowerBoundT,
            value,
            raw,
            assumptions,
        }
    }

    fn probability(ln: f64, assumptions: Vec<Assumption>) -> Self {
        Self {
            kind: BoundKind::UpperBoundProbability,
            value: ln.exp().clamp(0.0, 1.0),
            raw: ln,
            assumptions,
        }
    }

    /// Whether every checkable hypothesis of the theorem holds.
    pub fn preconditions_hold(&self) -> bool {
        self.assumptions
            .iter()
            .filter(|a| a.kind == AssumptionKind::Precondition)
            .all(|a| a.holds)
    }

    /// Whether every hypothesis and regime flag holds.
    pub fn all_hold(&self) -> bool {
        self.assumptions.iter().all(|a| a.holds)
    }

    /// Failing assumptions, for reports.
    pub fn violations(&self) -> Vec<&str> {
        self.assumptions
            .iter()
            .filter(|a| !a.holds)
            .map(|a| a.description.as_str())
            .collect()
    }

    /// The bound as a test count (lower bounds only).
    pub fn tests(&self) -> usize {
        debug_assert_eq!(self.kind, BoundKind::LowerBoundT);
        self.value as usize
    }
}

/// `h(p) = -p log2 p - (1-p) log2 (1-p)`, with `0 log 0 = 0`. NaN outside `[0, 1]`.
pub fn binary_entropy(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) {
        return f64::NAN;
    }
    let term = |q: f64| if q == 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Natural log of the collision probability of `Bin(l, p)`.
pub fn ln_collision_prob(l: u64, p: f64) -> f64 {
    if l == 0 || p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    log_sum_exp((0..=l).map(|i| 2.0 * (ln_binomial(l, i) + i as f64 * lp + (l - i) as f64 * lq)))
}

/// `P{X = Y}` for `X, Y` i.i.d. `Bin(l, p)`: the sum of the squared pmf.
pub fn collision_prob(l: u64, p: f64) -> f64 {
    ln_collision_prob(l, p).exp()
}

/// `1 / sqrt(2 l p (1-p))`, flagged when `l p (1-p) < 5`.
pub fn collision_prob_ub(l: u64, p: f64) -> BoundValue {
    let var = l as f64 * p * (1.0 - p);
    let ln = -0.5 * (2.0 * var).ln();
    BoundValue::probability(
        ln,
        vec![Assumption::regime(
            format!("l p (1-p) = {var:.4} >= 5 (large-l regime)"),
            var >= 5.0,
        )],
    )
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    Ok(())
}

/// `t >= min(n, 1 + k(d+1))` for any d-runlength k-disjunct matrix.
pub fn lemma1_lb(n: usize, k: usize, d: usize) -> BoundValue {
    let v = n.min(1 + k * (d + 1)) as f64;
    BoundValue::lower(v, v, vec![Assumption::precondition("k >= 1", k >= 1)])
}

/// Zero-error lower bound from the private-set counting argument:
/// `min(n, ceil(k(d+1) log2 n / (log2(k(d+1)) - 1)))`.
pub fn zero_error_lb(n: usize, k: usize, d: usize) -> Result<BoundValue> {
    check_nk(n, k)?;
    let kd = (k * (d + 1)) as f64;
    let denom = kd.log2() - 1.0;
    if denom <= 0.0 {
        return Err(invalid(format!(
            "k(d+1) = {kd} leaves log2(k(d+1)) - 1 <= 0"
        )));
    }
    let raw = kd * (n as f64).log2() / denom;
    let v = (n as f64).min(raw.ceil());
    Ok(BoundValue::lower(
        v,
        raw,
        vec![Assumption::precondition(
            format!("k(d+1) = {kd} >= 4"),
            kd >= 4.0,
        )],
    ))
}

/// Average-case lower bound from the low-weight outcome argument:
/// `ceil(k log2(n/k) / h(k/(d+1)))`.
pub fn avg_case_lb(n: usize, k: usize, d: usize) -> Result<BoundValue> {
    check_nk(n, k)?;
    if k > d {
        return Err(invalid(format!("k/(d+1) = {k}/{} must be below 1", d + 1)));
    }
    let q = k as f64 / (d + 1) as f64;
    let raw = k as f64 * (n as f64 / k as f64).log2() / binary_entropy(q);
    Ok(BoundValue::lower(
        raw.ceil(),
        raw,
        vec![
            Assumption::precondition(format!("d = {d} >= 2k = {}", 2 * k), d >= 2 * k),
            Assumption::precondition(format!("k = {k} < n = {n}"), k < n),
            Assumption::realization("(1 - o(1)) Fano slack dropped"),
        ],
    ))
}

/// Default for the unspecified QNAGT constant `c_δ`: `12 / δ²`.
pub fn default_c_delta(delta: f64) -> f64 {
    12.0 / (delta * delta)
}

const TWO_PI_E: f64 = 2.0 * PI * E;

/// Unrounded entropy lower bound, runlength form:
/// `2(1-δ) k log2(1 + n/k) / log2(2πe k/(d+1) + 2)`.
pub fn qnagt_entropy_rhs_runlength(n: usize, k: usize, d: usize, delta: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    2.0 * (1.0 - delta) * k * (1.0 + n / k).log2() / (TWO_PI_E * k / (d as f64 + 1.0) + 2.0).log2()
}

/// Unrounded entropy lower bound, column-weight form (`w` ones per column
/// spread over `t` rows): `2(1-δ) k log2(1 + n/k) / log2(2πe k w / t + 2)`.
/// Equal to the runlength form when `w = t/(d+1)`.
pub fn qnagt_entropy_rhs_weight(n: usize, k: usize, w: f64, t: f64, delta: f64) -> f64 {
    let (n, k) = (n as f64, k as f64);
    2.0 * (1.0 - delta) * k * (1.0 + n / k).log2() / (TWO_PI_E * k * w / t + 2.0).log2()
}

fn qnagt_entropy_assumptions(
    n: usize,
    k: usize,
    delta: f64,
    c_delta: Option<f64>,
) -> Vec<Assumption> {
    let c = c_delta.unwrap_or_else(|| default_c_delta(delta));
    let need = c * (n as f64).log2();
    vec![
        Assumption::precondition(
            format!("0 < delta = {delta} < 1"),
            delta > 0.0 && delta < 1.0,
        ),
        Assumption::regime(
            format!("k = {k} >= c_delta log2 n = {need:.2} (c_delta = {c:.3})"),
            k as f64 >= need,
        ),
    ]
}

/// Entropy lower bound for d-runlength QNAGT.
pub fn qnagt_entropy_lb(
    n: usize,
    k: usize,
    d: usize,
    delta: f64,
    c_delta: Option<f64>,
) -> Result<BoundValue> {
    check_nk(n, k)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta = {delta} must lie in (0, 1)")));
    }
    let raw = qnagt_entropy_rhs_runlength(n, k, d, delta);
    Ok(BoundValue::lower(
        raw.ceil(),
        raw,
        qnagt_entropy_assumptions(n, k, delta, c_delta),
    ))
}

/// The same bound phrased for a `w`-constrained scheme with `t` tests. The
/// right-hand side depends on `t`, so the result is the value of the
/// inequality's right side at the queried `t`; `t` satisfies the bound iff
/// `t >= value`.
pub fn qnagt_entropy_lb_weight(
    n: usize,
    k: usize,
    w: usize,
    t: usize,
    delta: f64,
    c_delta: Option<f64>,
) -> Result<BoundValue> {
    check_nk(n, k)?;
    if !(delta > 0.0 && delta < 1.0) || t == 0 {
        return Err(invalid(format!(
            "need 0 < delta < 1 and t >= 1, got delta={delta} t={t}"
        )));
    }
    let raw = qnagt_entropy_rhs_weight(n, k, w as f64, t as f64, delta);
    Ok(BoundValue::lower(
        raw.ceil(),
        raw,
        qnagt_entropy_assumptions(n, k, delta, c_delta),
    ))
}

/// Counting lower bound for d-runlength QNAGT, from outcomes of weight at
/// most `tk/(d+1)` with entries in `[0, k]`:
/// `ceil(k log2(n/k) / (h(q) + q log2 k))`, `q = k/(d+1)`.
pub fn qnagt_counting_lb(n: usize, k: usize, d: usize) -> Result<BoundValue> {
    check_nk(n, k)?;
    if k > d {
        return Err(invalid(format!("k/(d+1) = {k}/{} must be below 1", d + 1)));
    }
    let q = k as f64 / (d + 1) as f64;
    let denom = binary_entropy(q) + q * (k as f64).log2();
    let raw = k as f64 * (n as f64 / k as f64).log2() / denom;
    Ok(BoundValue::lower(
        raw.ceil(),
        raw,
        vec![
            Assumption::precondition(format!("d = {d} >= 2k = {}", 2 * k), d >= 2 * k),
            Assumption::realization("explicit constant from the counting argument"),
            Assumption::realization("(1 - o(1)) Fano slack dropped"),
        ],
    ))
}

fn check_alpha(d: usize, t: usize, alpha: usize) -> Result<f64> {
    if alpha == 0 {
        return Err(invalid("alpha must be at least 1"));
    }
    let used = (2 * d + 1) * (alpha - 1);
    if t <= used {
        return Err(invalid(format!(
            "need t > (2d+1)(alpha-1) = {used}, got t = {t}"
        )));
    }
    Ok((t - used) as f64)
}

fn alpha_assumptions(t: usize, d: usize, alpha: usize) -> Vec<Assumption> {
    vec![Assumption::precondition(
        format!("alpha = {alpha} <= t/(2d+1) = {}", t / (2 * d + 1)),
        alpha <= t / (2 * d + 1),
    )]
}

/// Probability that a RandMatrix output is not k-disjunct, union bound:
/// `n (e n/k)^k (k α / (t - (2d+1)(α-1)))^α`.
pub fn disjunct_fail_ub(
    n: usize,
    k: usize,
    d: usize,
    t: usize,
    alpha: usize,
) -> Result<BoundValue> {
    check_nk(n, k)?;
    let room = check_alpha(d, t, alpha)?;
    let (nf, kf, af) = (n as f64, k as f64, alpha as f64);
    let ln = nf.ln() + kf * (1.0 + nf.ln() - kf.ln()) + af * ((kf * af).ln() - room.ln());
    Ok(BoundValue::probability(ln, alpha_assumptions(t, d, alpha)))
}

/// Probability that COMP misdecodes a uniformly random weight-k input on a
/// RandMatrix output: `n (k α / (t - (2d+1)(α-1)))^α`.
pub fn avg_fail_ub(n: usize, k: usize, d: usize, t: usize, alpha: usize) -> Result<BoundValue> {
    check_nk(n, k)?;
    let room = check_alpha(d, t, alpha)?;
    let (nf, kf, af) = (n as f64, k as f64, alpha as f64);
    let ln = nf.ln() + af * ((kf * af).ln() - room.ln());
    Ok(BoundValue::probability(ln, alpha_assumptions(t, d, alpha)))
}

/// Probability that a fixed weight-k input collides with another weight-k
/// input under an i.i.d. `Ber(w/(2t))` matrix:
/// `Σ_{l=1..k} C(k,l) C(n-k,l) p_coll(l, p)^t`.
pub fn qnagt_fail_ub(n: usize, k: usize, w: usize, t: usize) -> Result<BoundValue> {
    check_nk(n, k)?;
    if t == 0 || w == 0 {
        return Err(invalid("need t >= 1 and w >= 1"));
    }
    let p = w as f64 / (2.0 * t as f64);
    if p > 1.0 {
        return Err(invalid(format!("p = w/(2t) = {p} exceeds 1")));
    }
    let ln = log_sum_exp((1..=k.min(n - k)).map(|l| {
        ln_binomial(k as u64, l as u64)
            + ln_binomial((n - k) as u64, l as u64)
            + t as f64 * ln_collision_prob(l as u64, p)
    }));
    Ok(BoundValue::probability(
        ln,
        vec![Assumption::regime(
            format!("p = w/(2t) = {p:.4} <= 1/2"),
            p <= 0.5,
        )],
    ))
}

/// Union bound for the i.i.d. `Ber(p)` base of the spacer baseline, with
/// the same counting factor as [`disjunct_fail_ub`]:
/// `n (e n/k)^k (1 - p (1-p)^k)^t'`.
pub fn bernoulli_disjunct_fail_ub(n: usize, k: usize, t_base: usize, p: f64) -> Result<BoundValue> {
    check_nk(n, k)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("p = {p} must lie in (0, 1)")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let miss = p * (1.0 - p).powi(k as i32);
    let ln = nf.ln() + kf * (1.0 + nf.ln() - kf.ln()) + t_base as f64 * (-miss).ln_1p();
    Ok(BoundValue::probability(
        ln,
        vec![Assumption::realization(
            "standard random-coding union bound for the i.i.d. base matrix",
        )],
    ))
}

/// Which construction and bound [`min_tests`] inverts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// RandMatrix, not k-disjunct ([`disjunct_fail_ub`]); the parameter is `d`.
    ZeroError,
    /// RandMatrix with COMP decoding ([`avg_fail_ub`]); the parameter is `d`.
    AvgCase,
    /// I.i.d. `Ber(w/(2t))` QNAGT ([`qnagt_fail_ub`]); the parameter is `w`.
    Qnagt,
}

/// Hard ceiling on the number of tests searched by [`min_tests`].
pub const MAX_TESTS: usize = 1 << 26;

#[derive(Clone, Debug, PartialEq)]
pub struct MinTests {
    pub t: usize,
    /// Column weight at `t` (RandMatrix regimes only).
    pub alpha: Option<usize>,
    pub bound: BoundValue,
}

/// Unclamped RandMatrix column weight `max(1, ceil(k log2(n/k)))`.
pub fn nominal_alpha(n: usize, k: usize) -> usize {
    let v = (k as f64 * (n as f64 / k as f64).log2()).ceil();
    (v as usize).max(1)
}

/// Column weight for RandMatrix: `min(max(1, ceil(k log2(n/k))), floor(t/(2d+1)))`.
/// `None` when `t < 2d + 1`, where no column weight is admissible.
pub fn default_alpha(n: usize, k: usize, t: usize, d: usize) -> Option<usize> {
    let cap = t / (2 * d + 1);
    (cap >= 1).then(|| nominal_alpha(n, k).min(cap))
}

/// Smallest `t` in `[lo, hi]` with `ok(t)`, assuming `ok` is monotone there.
fn bisect(lo: usize, hi: usize, ok: &impl Fn(usize) -> bool) -> usize {
    let (mut lo, mut hi) = (lo, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Smallest `t >= start` with `ok(t)`: exponential search for a bracket,
/// bisection inside it, then a check that the answer's left neighbourhood
/// really fails. If that check finds a smaller passing `t`, `ok` is not
/// monotone here and the whole bracket is scanned linearly.
fn search_from(start: usize, cap: usize, ok: &impl Fn(usize) -> bool) -> Option<usize> {
    let mut lo = start;
    let mut hi = start;
    while !ok(hi) {
        if hi >= cap {
            return None;
        }
        lo = hi + 1;
        hi = (hi.max(1) * 2).min(cap);
    }
    let found = bisect(lo, hi, ok);
    const WINDOW: usize = 64;
    let probe_from = found.saturating_sub(WINDOW).max(start);
    if (probe_from..found).any(ok) {
        return (start..=found).find(|&t| ok(t));
    }
    Some(found)
}

/// Smallest `t` whose failure bound is at most `target`.
///
/// For the RandMatrix regimes the column weight is re-evaluated per candidate
/// with [`default_alpha`]. The bound is strictly decreasing in `t` while the
/// weight is fixed, but jumps when the clamp `floor(t/(2d+1))` moves, so the
/// search runs band by band over the clamp's plateaus and returns the first
/// band that reaches the target.
pub fn min_tests(
    regime: Regime,
    n: usize,
    k: usize,
    param: usize,
    target: f64,
) -> Result<MinTests> {
    check_nk(n, k)?;
    if !(target > 0.0 && target <= 1.0) {
        return Err(invalid(format!("target = {target} must lie in (0, 1]")));
    }
    let ln_target = target.ln();
    match regime {
        Regime::ZeroError | Regime::AvgCase => {
            let d = param;
            let eval = |t: usize, a: usize| -> Result<BoundValue> {
                match regime {
                    Regime::ZeroError => disjunct_fail_ub(n, k, d, t, a),
                    _ => avg_fail_ub(n, k, d, t, a),
                }
            };
            let ok = |t: usize| -> bool {
                default_alpha(n, k, t, d)
                    .and_then(|a| eval(t, a).ok())
                    .is_some_and(|b| b.raw <= ln_target)
            };
            let span = 2 * d + 1;
            let top = nominal_alpha(n, k);
            for a in 1..top {
                let (lo, hi) = (span * a, span * (a + 1) - 1);
                if hi > MAX_TESTS {
                    break;
                }
                if ok(hi) {
                    let t = bisect(lo, hi, &ok);
                    debug_assert!(t == lo || !ok(t - 1));
                    return finish_nagt(t, n, k, d, eval);
                }
            }
            let start = span * top;
            let t = search_from(start, MAX_TESTS, &ok).ok_or(Error::NoFeasibleTests {
                cap: MAX_TESTS,
                target,
            })?;
            finish_nagt(t, n, k, d, eval)
        }
        Regime::Qnagt => {
            let w = param;
            if w == 0 {
                return Err(invalid("w must be at least 1"));
            }
            let ok = |t: usize| qnagt_fail_ub(n, k, w, t).is_ok_and(|b| b.raw <= ln_target);
            let start = w.div_ceil(2).max(1);
            let t = search_from(start, MAX_TESTS, &ok).ok_or(Error::NoFeasibleTests {
                cap: MAX_TESTS,
                target,
            })?;
            Ok(MinTests {
                t,
                alpha: None,
                bound: qnagt_fail_ub(n, k, w, t)?,
            })
        }
    }
}

fn finish_nagt(
    t: usize,
    n: usize,
    k: usize,
    d: usize,
    eval: impl Fn(usize, usize) -> Result<BoundValue>,
) -> Result<MinTests> {
    let alpha = default_alpha(n, k, t, d).expect("band search only returns admissible t");
    Ok(MinTests {
        t,
        alpha: Some(alpha),
        bound: eval(t, alpha)?,
    })
}

/// Tests needed by the spacer baseline: an i.i.d. `Ber(1/k)` base matrix with
/// `t'` rows, reaching `target` under [`bernoulli_disjunct_fail_ub`], spread
/// out to `(d+1) t' - d` rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SpacerTests {
    pub t_base: usize,
    pub t: usize,
    pub bound: BoundValue,
}

pub fn spacer_min_tests(n: usize, k: usize, d: usize, target: f64) -> Result<SpacerTests> {
    check_nk(n, k)?;
    if !(target > 0.0 && target <= 1.0) {
        return Err(invalid(format!("target = {target} must lie in (0, 1]")));
    }
    let p = if k == 1 { 0.5 } else { 1.0 / k as f64 };
    let ln_target = target.ln();
    let ok = |tb: usize| bernoulli_disjunct_fail_ub(n, k, tb, p).is_ok_and(|b| b.raw <= ln_target);
    let t_base = search_from(1, MAX_TESTS, &ok).ok_or(Error::NoFeasibleTests {
        cap: MAX_TESTS,
        target,
    })?;
    Ok(SpacerTests {
        t_base,
        t: (d + 1) * t_base - d,
        bound: bernoulli_disjunct_fail_ub(n, k, t_base, p)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn entropy_examples() {
        assert_eq!(binary_entropy(0.5), 1.0);
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!(binary_entropy(1.5).is_nan());
        for i in 1..=500 {
            let p = i as f64 / 1000.0;
            assert!(binary_entropy(p) <= -2.0 * p * p.log2() + 1e-15, "p = {p}");
        }
    }

    #[test]
    fn collision_examples() {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            assert_relative_eq!(
                collision_prob(1, p),
                1.0 - 2.0 * p * (1.0 - p),
                epsilon = 1e-12
            );
        }
        assert_relative_eq!(collision_prob(2, 0.5), 0.375, epsilon = 1e-12);
        assert_eq!(collision_prob(0, 0.3), 1.0);
    }

    #[test]
    fn collision_ub_examples() {
        let ub = collision_prob_ub(50, 0.5);
        assert_relative_eq!(ub.value, 0.2, epsilon = 1e-12);
        assert!(ub.all_hold());
        assert!(collision_prob(50, 0.5) <= 0.2);
        assert!(!collision_prob_ub(4, 0.5).all_hold());
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_lb(100, 2, 3).tests(), 9);
        assert_eq!(lemma1_lb(5, 10, 10).tests(), 5);
        assert_eq!(lemma1_lb(100, 7, 0).tests(), 8);
    }

    #[test]
    fn zero_error_lb_examples() {
        let b = zero_error_lb(256, 2, 1).unwrap();
        assert_eq!(b.tests(), 32);
        assert_relative_eq!(b.raw, 32.0, epsilon = 1e-12);
        assert!(b.preconditions_hold());
        // k(d+1) = 4: denominator exactly 1
        assert_relative_eq!(
            zero_error_lb(1 << 20, 4, 0).unwrap().raw,
            80.0,
            epsilon = 1e-9
        );
        let flagged = zero_error_lb(256, 1, 2).unwrap();
        assert!(!flagged.preconditions_hold());
        assert!(zero_error_lb(256, 1, 1).is_err());
    }

    #[test]
    fn avg_case_lb_examples() {
        let b = avg_case_lb(64, 1, 2).unwrap();
        assert_eq!(b.tests(), 7);
        assert!(b.preconditions_hold());
        assert!(!avg_case_lb(64, 2, 3).unwrap().preconditions_hold());
        assert!(avg_case_lb(64, 4, 3).is_err());
    }

    #[test]
    fn qnagt_entropy_examples() {
        let b = qnagt_entropy_lb(60, 4, 3, 0.5, None).unwrap();
        assert_eq!(b.tests(), 4);
        assert_relative_eq!(b.raw, 3.761_210_988_769_682, epsilon = 1e-9);
        // k >= c_delta log n cannot hold at this size
        assert!(!b.all_hold());
        assert!(b.preconditions_hold());
        let near_one = qnagt_entropy_lb(60, 4, 3, 1.0 - 1e-9, None).unwrap();
        assert!(near_one.raw < 1e-7);
        assert!(qnagt_entropy_lb(60, 4, 3, 1.0, None).is_err());
    }

    #[test]
    fn counting_lb_reduces_to_avg_case_at_k1() {
        for (n, d) in [(64, 2), (1000, 7), (50, 40)] {
            let a = avg_case_lb(n, 1, d).unwrap();
            let c = qnagt_counting_lb(n, 1, d).unwrap();
            assert_relative_eq!(a.raw, c.raw, epsilon = 1e-12);
        }
    }

    #[test]
    fn counting_lb_overtakes_entropy_lb_for_large_d() {
        for k in [2usize, 4, 8] {
            let d = 100 * k;
            let c = qnagt_counting_lb(10_000, k, d).unwrap();
            let e = qnagt_entropy_lb(10_000, k, d, 0.5, None).unwrap();
            assert!(c.raw > e.raw, "k={k}: {} <= {}", c.raw, e.raw);
        }
    }

    #[test]
    fn fail_bounds_clamp_and_decrease() {
        // k alpha >= t - (2d+1)(alpha-1): vacuous
        let b = disjunct_fail_ub(16, 2, 1, 20, 6).unwrap();
        assert_eq!(b.value, 1.0);
        assert!(b.raw > 0.0);
        let a = avg_fail_ub(16, 2, 1, 20, 6).unwrap();
        assert_eq!(a.value, 1.0);
        let mut prev = f64::INFINITY;
        for t in 16..400 {
            let z = disjunct_fail_ub(16, 2, 1, t, 5).unwrap().raw;
            let v = avg_fail_ub(16, 2, 1, t, 5).unwrap().raw;
            assert!(z < prev);
            assert!(z >= v);
            prev = z;
        }
        assert!(disjunct_fail_ub(16, 2, 1, 15, 6).is_err());
    }

    #[test]
    fn qnagt_fail_ub_single_defective() {
        for (n, w, t) in [(12, 8, 12), (100, 10, 30), (40, 3, 9)] {
            let p = w as f64 / (2.0 * t as f64);
            let expect = (n - 1) as f64 * (1.0 - 2.0 * p * (1.0 - p)).powi(t as i32);
            let b = qnagt_fail_ub(n, 1, w, t).unwrap();
            assert_relative_eq!(b.raw.exp(), expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn qnagt_fail_ub_frozen() {
        // exact-rational evaluation of the union bound at n=12, k=2, w=8, t=12
        let b = qnagt_fail_ub(12, 2, 8, 12).unwrap();
        assert_relative_eq!(b.value, 0.018_229_539_179_403_644, max_relative = 1e-10);
    }

    #[test]
    fn default_alpha_examples() {
        assert_eq!(default_alpha(64, 4, 1_000_000, 1), Some(16));
        assert_eq!(default_alpha(64, 4, 33, 16), Some(1));
        assert_eq!(default_alpha(20, 10, 1000, 0), Some(10));
        assert_eq!(default_alpha(64, 4, 32, 16), None);
    }
}
