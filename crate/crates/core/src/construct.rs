//! Matrix constructions: RandMatrix, the spacer embedding, i.i.d. Bernoulli
//! matrices and the weight-constrained QNAGT construction.
//!
//! Every column is generated from its own stream, `rng::stream(seed, j)`, so
//! a matrix is a pure function of its parameters and seed regardless of how
//! many threads build it.

use rand::Rng;
use rayon::prelude::*;

use crate::bits;
use crate::bounds::{self, Regime};
use crate::error::{invalid, Error, Result};
use crate::matrix::{check_weight, Check, TestMatrix};
use crate::rng::{self, derive_seed};

/// One experiment's configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeParams {
    pub n: usize,
    pub k: usize,
    /// Runlength gap (NAGT).
    pub d: usize,
    /// Column-weight cap (QNAGT).
    pub w: Option<usize>,
    pub t: usize,
    /// RandMatrix column weight.
    pub alpha: usize,
    pub seed: u64,
    /// Multiplier applied to the order-of-growth expression when `t` was
    /// derived from it instead of from a bound inversion.
    pub c_t: Option<f64>,
    pub delta: f64,
    pub gamma: f64,
}

pub const DEFAULT_DELTA: f64 = 0.4;
pub const DEFAULT_GAMMA: f64 = 0.5;

impl SchemeParams {
    pub fn randmatrix(n: usize, k: usize, d: usize, t: usize, alpha: usize, seed: u64) -> Self {
        Self {
            n,
            k,
            d,
            w: None,
            t,
            alpha,
            seed,
            c_t: None,
            delta: DEFAULT_DELTA,
            gamma: DEFAULT_GAMMA,
        }
    }

    pub fn qnagt(n: usize, k: usize, w: usize, delta: f64, gamma: f64, seed: u64) -> Result<Self> {
        let t = qnagt_tests(n, k, w, delta, gamma)?;
        Ok(Self {
            n,
            k,
            d: 0,
            w: Some(w),
            t,
            alpha: 0,
            seed,
            c_t: None,
            delta,
            gamma,
        })
    }

    pub fn validate_randmatrix(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(invalid(format!(
                "need 1 <= k <= n, got n={} k={}",
                self.n, self.k
            )));
        }
        if self.t == 0 {
            return Err(invalid("t must be at least 1"));
        }
        let cap = self.t / (2 * self.d + 1);
        if self.alpha == 0 || self.alpha > cap {
            return Err(invalid(format!(
                "need 1 <= alpha <= floor(t/(2d+1)) = {cap}, got alpha={}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn validate_qnagt(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(invalid(format!(
                "need 1 <= k <= n, got n={} k={}",
                self.n, self.k
            )));
        }
        if !(self.delta > 0.0 && self.delta < 0.5) || self.gamma <= 0.0 {
            return Err(invalid(format!(
                "need 0 < delta < 1/2 and gamma > 0, got delta={} gamma={}",
                self.delta, self.gamma
            )));
        }
        match self.w {
            Some(w) if w >= 2 && w <= 2 * self.t => Ok(()),
            Some(w) => Err(invalid(format!(
                "need 2 <= w <= 2t, got w={w} t={}",
                self.t
            ))),
            None => Err(invalid("QNAGT parameters need w")),
        }
    }
}

/// How the number of tests of a RandMatrix scheme is chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestCount {
    Fixed(usize),
    /// Smallest `t` whose failure bound reaches the target probability.
    Target(f64),
    /// `ceil(c_t (d k + k²) log2(n/k))` in the zero-error regime,
    /// `ceil(c_t (d + k) log2(n/k))` in the average-case regime.
    Order(f64),
}

/// Parameters for a RandMatrix scheme with `t` and `alpha` filled in.
#[derive(Clone, Debug, PartialEq)]
pub struct Resolved {
    pub params: SchemeParams,
    /// Unclamped `max(1, ceil(k log2(n/k)))`.
    pub nominal_alpha: usize,
    /// Human-readable notes about clamps and derived values.
    pub notes: Vec<String>,
}

pub fn resolve_randmatrix(
    regime: Regime,
    n: usize,
    k: usize,
    d: usize,
    tests: TestCount,
    alpha: Option<usize>,
    seed: u64,
) -> Result<Resolved> {
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    let mut notes = Vec::new();
    let mut c_t = None;
    let t = match tests {
        TestCount::Fixed(t) => t,
        TestCount::Target(p) => {
            let m = bounds::min_tests(regime, n, k, d, p)?;
            notes.push(format!("t = {} from bound inversion at target {p}", m.t));
            m.t
        }
        TestCount::Order(c) => {
            let l = (n as f64 / k as f64).log2();
            let order = match regime {
                Regime::ZeroError => (d * k + k * k) as f64 * l,
                _ => (d + k) as f64 * l,
            };
            c_t = Some(c);
            let t = (c * order).ceil().max(1.0) as usize;
            notes.push(format!(
                "t = {t} from c_t = {c} times the order-of-growth expression"
            ));
            t
        }
    };
    let nominal = bounds::nominal_alpha(n, k);
    let alpha = match alpha {
        Some(a) => a,
        None => bounds::default_alpha(n, k, t, d)
            .ok_or_else(|| invalid(format!("t = {t} < 2d+1 = {}", 2 * d + 1)))?,
    };
    if alpha < nominal {
        notes.push(format!(
            "alpha clamped from {nominal} to {alpha} = floor(t/(2d+1))"
        ));
    }
    let mut params = SchemeParams::randmatrix(n, k, d, t, alpha, seed);
    params.c_t = c_t;
    params.validate_randmatrix()?;
    Ok(Resolved {
        params,
        nominal_alpha: nominal,
        notes,
    })
}

/// Sequential sampler for one RandMatrix column.
///
/// Holds the ordered list of still-available rows (as a bitset over `[t]`).
/// Each pick takes a uniformly random list entry, then removes it together
/// with its `d` list-predecessors and `d` list-successors, cyclically in list
/// order. When `2d + 1` or fewer entries remain, a pick removes all of them.
#[derive(Clone, Debug)]
pub struct ColumnSampler<R> {
    t: usize,
    d: usize,
    live: Vec<u64>,
    live_len: usize,
    placed: usize,
    rng: R,
}

/// Result of one pick: the chosen row and the rows removed around it
/// (predecessors then successors, each in list order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pick {
    pub row: usize,
    pub removed: Vec<usize>,
}

impl<R: Rng> ColumnSampler<R> {
    pub fn new(t: usize, d: usize, rng: R) -> Self {
        let mut live = vec![!0u64; bits::words_for(t)];
        if !t.is_multiple_of(bits::WORD_BITS) {
            if let Some(last) = live.last_mut() {
                *last = (1u64 << (t % bits::WORD_BITS)) - 1;
            }
        }
        Self {
            t,
            d,
            live,
            live_len: t,
            placed: 0,
            rng,
        }
    }

    /// A sampler whose live list is `rows` (each `< t`).
    pub fn with_live(t: usize, d: usize, rows: &[usize], rng: R) -> Self {
        let mut live = vec![0; bits::words_for(t)];
        for &r in rows {
            assert!(r < t, "row {r} out of range");
            bits::set(&mut live, r);
        }
        let live_len = bits::count(&live);
        Self {
            t,
            d,
            live,
            live_len,
            placed: 0,
            rng,
        }
    }

    pub fn live(&self) -> Vec<usize> {
        bits::ones(&self.live).collect()
    }

    pub fn live_len(&self) -> usize {
        self.live_len
    }

    pub fn placed(&self) -> usize {
        self.placed
    }

    /// Picks the entry at list position `pos` and removes its neighbourhood.
    pub fn pick_at(&mut self, pos: usize) -> Pick {
        assert!(
            pos < self.live_len,
            "position {pos} beyond live list of {}",
            self.live_len
        );
        let row = bits::select(&self.live, pos).expect("position within live list");
        let removed = if self.live_len <= 2 * self.d + 1 {
            bits::ones(&self.live).filter(|&r| r != row).collect()
        } else {
            let mut before = Vec::with_capacity(self.d);
            let mut at = row;
            for _ in 0..self.d {
                at = self.prev_live(at);
                before.push(at);
            }
            before.reverse();
            let mut at = row;
            for _ in 0..self.d {
                at = self.next_live(at);
                before.push(at);
            }
            before
        };
        bits::clear(&mut self.live, row);
        for &r in &removed {
            bits::clear(&mut self.live, r);
        }
        self.live_len -= 1 + removed.len();
        self.placed += 1;
        Pick { row, removed }
    }

    /// Draws a uniform list position and picks it; `None` once the list is empty.
    pub fn pick(&mut self) -> Option<usize> {
        if self.live_len == 0 {
            return None;
        }
        let pos = rng::uniform_index(&mut self.rng, self.live_len);
        Some(self.pick_at(pos).row)
    }

    fn next_live(&self, row: usize) -> usize {
        bits::next_one(&self.live, row + 1)
            .filter(|&r| r < self.t)
            .or_else(|| bits::next_one(&self.live, 0))
            .expect("live list is not empty")
    }

    fn prev_live(&self, row: usize) -> usize {
        row.checked_sub(1)
            .and_then(|r| bits::prev_one(&self.live, r))
            .or_else(|| bits::prev_one(&self.live, self.t - 1))
            .expect("live list is not empty")
    }
}

fn check_column_params(t: usize, d: usize, alpha: usize) -> Result<()> {
    let cap = t / (2 * d + 1);
    if alpha > cap {
        return Err(invalid(format!(
            "alpha = {alpha} exceeds floor(t/(2d+1)) = {cap} for t={t} d={d}"
        )));
    }
    Ok(())
}

/// One RandMatrix column as packed words: exactly `alpha` ones, pairwise at
/// cyclic distance at least `d + 1`.
pub fn rand_matrix_column<R: Rng>(t: usize, d: usize, alpha: usize, rng: R) -> Result<Vec<u64>> {
    check_column_params(t, d, alpha)?;
    let mut col = vec![0; bits::words_for(t)];
    let mut sampler = ColumnSampler::new(t, d, rng);
    for _ in 0..alpha {
        let row = sampler
            .pick()
            .expect("alpha <= t/(2d+1) keeps the list non-empty");
        bits::set(&mut col, row);
    }
    Ok(col)
}

/// RandMatrix: `n` independent columns from [`rand_matrix_column`].
pub fn rand_matrix(params: &SchemeParams) -> Result<TestMatrix> {
    params.validate_randmatrix()?;
    let SchemeParams {
        n,
        d,
        t,
        alpha,
        seed,
        ..
    } = *params;
    let cols: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|j| rand_matrix_column(t, d, alpha, rng::stream(seed, j as u64)))
        .collect::<Result<_>>()?;
    let m = TestMatrix::from_column_words(t, n, cols.concat());
    m.with_runlength_claim(d)?.with_weight_claim(alpha)
}

/// Inserts `d` all-zero rows between consecutive rows of `base`: base row `i`
/// becomes row `i (d+1)` of a `(d+1) t' - d` row matrix.
pub fn spacer_embed(base: &TestMatrix, d: usize) -> TestMatrix {
    let t_base = base.t();
    let t = if t_base == 0 { 0 } else { (d + 1) * t_base - d };
    let stride = bits::words_for(t);
    let mut cols = vec![0; base.n() * stride];
    for j in 0..base.n() {
        let col = &mut cols[j * stride..(j + 1) * stride];
        for i in bits::ones(base.column_words(j)) {
            bits::set(col, i * (d + 1));
        }
    }
    let mut out = TestMatrix::from_column_words(t, base.n(), cols)
        .with_runlength_claim(d)
        .expect("spaced rows satisfy the runlength constraint");
    if let Some(w) = base.w_claimed() {
        out = out
            .with_weight_claim(w)
            .expect("column weights are unchanged");
    }
    out
}

/// `t × n` matrix with i.i.d. `Ber(p)` entries; column `j` uses stream `(seed, j)`.
pub fn bernoulli_matrix(t: usize, n: usize, p: f64, seed: u64) -> Result<TestMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("p = {p} must lie in [0, 1]")));
    }
    let stride = bits::words_for(t);
    let cols: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|j| bernoulli_column(t, p, rng::stream(seed, j as u64)))
        .collect();
    debug_assert!(cols.iter().all(|c| c.len() == stride));
    Ok(TestMatrix::from_column_words(t, n, cols.concat()))
}

pub(crate) fn bernoulli_column<R: Rng>(t: usize, p: f64, mut rng: R) -> Vec<u64> {
    let mut col = vec![0; bits::words_for(t)];
    for i in 0..t {
        if rng.gen_bool(p) {
            bits::set(&mut col, i);
        }
    }
    col
}

/// Number of tests of the weight-constrained QNAGT construction:
/// `ceil((2 + 1/δ + γ) k (1 + log2(n/k)) / log2 w)`.
pub fn qnagt_tests(n: usize, k: usize, w: usize, delta: f64, gamma: f64) -> Result<usize> {
    if k == 0 || k > n {
        return Err(invalid(format!("need 1 <= k <= n, got n={n} k={k}")));
    }
    if !(delta > 0.0 && delta < 0.5) || gamma <= 0.0 {
        return Err(invalid(format!(
            "need 0 < delta < 1/2 and gamma > 0, got delta={delta} gamma={gamma}"
        )));
    }
    if w < 2 {
        return Err(invalid(format!("need w >= 2, got {w}")));
    }
    let c = 2.0 + 1.0 / delta + gamma;
    let t = (c * k as f64 * (1.0 + (n as f64 / k as f64).log2()) / (w as f64).log2()).ceil();
    Ok(t as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct QnagtMatrix {
    pub matrix: TestMatrix,
    pub t: usize,
    /// Entry probability `w / (2t)`.
    pub p: f64,
    /// Number of samples drawn until the weight constraint held.
    pub attempts: usize,
}

pub const DEFAULT_QNAGT_ATTEMPTS: usize = 100;

/// Samples i.i.d. `Ber(w/(2t))` matrices, attempt `a` seeded with
/// `derive_seed(seed, a)`, until every column has weight at most `w`.
pub fn qnagt_sample(
    n: usize,
    t: usize,
    w: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<QnagtMatrix> {
    if t == 0 || w == 0 {
        return Err(invalid("need t >= 1 and w >= 1"));
    }
    let p = w as f64 / (2.0 * t as f64);
    if p > 1.0 {
        return Err(invalid(format!("p = w/(2t) = {p} exceeds 1")));
    }
    let mut last = None;
    for a in 0..max_attempts.max(1) {
        let m = bernoulli_matrix(t, n, p, derive_seed(seed, a as u64))?;
        match check_weight(&m, w) {
            Check::Pass => {
                return Ok(QnagtMatrix {
                    matrix: m.with_weight_claim(w)?,
                    t,
                    p,
                    attempts: a + 1,
                })
            }
            Check::Fail(v) => last = Some(v),
        }
    }
    let v = last.expect("at least one attempt");
    Err(Error::RetryCapExceeded {
        column: v.column,
        weight: v.weight,
        cap: w,
        attempts: max_attempts.max(1),
    })
}

/// The weight-constrained QNAGT construction with `t` from [`qnagt_tests`].
pub fn qnagt_construct(
    n: usize,
    k: usize,
    w: usize,
    delta: f64,
    gamma: f64,
    seed: u64,
) -> Result<QnagtMatrix> {
    let t = qnagt_tests(n, k, w, delta, gamma)?;
    if w > 2 * t {
        return Err(invalid(format!("p = w/(2t) = {w}/{} exceeds 1", 2 * t)));
    }
    qnagt_sample(n, t, w, seed, DEFAULT_QNAGT_ATTEMPTS)
}
