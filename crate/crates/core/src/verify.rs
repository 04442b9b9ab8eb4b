//! Structural verification: k-disjunctness, private sets and QNAGT
//! zero-error (distinct count outcomes for distinct sparse inputs).

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

use crate::bits;
use crate::combinatorics::{binomial, binomial_sum};
use crate::decode::{WeightMode, DEFAULT_ENUMERATION_CAP};
use crate::error::{invalid, Error, Result};
use crate::matrix::{SparseSupport, TestMatrix};
use crate::rng::{self, uniform_index, uniform_subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DisjunctMode {
    /// Every column against every set of at most `k` others, up to `cap`
    /// containment checks.
    Exhaustive { cap: u128 },
    /// `trials` random `(j, S)` draws with `|S| = k`.
    Sampled { trials: u64, seed: u64 },
}

impl DisjunctMode {
    pub fn exhaustive() -> Self {
        DisjunctMode::Exhaustive {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// No witness found among the sampled draws.
    ProbablePass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjunctReport {
    pub k: usize,
    pub verdict: Verdict,
    /// Column `j` and a set `S` of at most `k` other columns covering it.
    pub witness: Option<(usize, Vec<usize>)>,
    pub subsets_checked: u64,
    pub mode: DisjunctMode,
}

impl DisjunctReport {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Re-checks a disjunctness witness against the raw matrix.
pub fn covers(m: &TestMatrix, j: usize, s: &[usize]) -> bool {
    if s.contains(&j) {
        return false;
    }
    let mut acc = vec![0u64; m.column_stride()];
    for &c in s {
        bits::or_assign(&mut acc, m.column_words(c));
    }
    bits::is_subset(m.column_words(j), &acc)
}

/// Depth-first search for a lexicographically first cover of `residual` by at
/// most `depth` columns with index `>= from`, skipping `j`. Columns that do not
/// shrink the residual are never needed and are skipped.
fn cover_dfs(
    m: &TestMatrix,
    j: usize,
    residual: &[u64],
    from: usize,
    depth: usize,
    chosen: &mut Vec<usize>,
    checked: &mut u64,
) -> bool {
    if bits::is_zero(residual) {
        return true;
    }
    if depth == 0 {
        return false;
    }
    let mut next = vec![0u64; residual.len()];
    for c in from..m.n() {
        if c == j {
            continue;
        }
        *checked += 1;
        let col = m.column_words(c);
        let mut shrinks = false;
        for ((o, &r), &w) in next.iter_mut().zip(residual).zip(col) {
            *o = r & !w;
            shrinks |= *o != r;
        }
        if !shrinks {
            continue;
        }
        chosen.push(c);
        if cover_dfs(m, j, &next.clone(), c + 1, depth - 1, chosen, checked) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Whether no column's support lies in the union of `k` other columns.
///
/// An all-zero column is covered by the empty set, so any matrix with one
/// fails (witness `(j, [])`). The exhaustive witness is the cover found first
/// for the smallest failing `j`, independent of thread count.
pub fn is_k_disjunct(m: &TestMatrix, k: usize, mode: DisjunctMode) -> Result<DisjunctReport> {
    let n = m.n();
    match mode {
        DisjunctMode::Exhaustive { cap } => {
            let k_eff = k.min(n.saturating_sub(1));
            let required =
                (n as u128).saturating_mul(binomial(n.saturating_sub(1) as u64, k_eff as u64));
            if required > cap {
                return Err(Error::Infeasible { required, cap });
            }
            let per_column: Vec<(u64, Option<Vec<usize>>)> = (0..n)
                .into_par_iter()
                .map(|j| {
                    let mut chosen = Vec::new();
                    let mut checked = 0;
                    let found =
                        cover_dfs(m, j, m.column_words(j), 0, k_eff, &mut chosen, &mut checked);
                    (checked, found.then_some(chosen))
                })
                .collect();
            let mut subsets_checked = 0;
            let mut witness = None;
            for (j, (checked, cover)) in per_column.into_iter().enumerate() {
                subsets_checked += checked;
                if let Some(s) = cover {
                    witness = Some((j, s));
                    break;
                }
            }
            Ok(DisjunctReport {
                k,
                verdict: if witness.is_some() {
                    Verdict::Fail
                } else {
                    Verdict::Pass
                },
                witness,
                subsets_checked,
                mode,
            })
        }
        DisjunctMode::Sampled { trials, seed } => {
            if n < k + 1 {
                return Err(invalid(format!(
                    "sampled mode needs n > k, got n={n} k={k}"
                )));
            }
            let mut rng = rng::stream(seed, 0);
            let mut witness = None;
            let mut checked = 0;
            for _ in 0..trials {
                checked += 1;
                let j = uniform_index(&mut rng, n);
                let s: Vec<usize> = uniform_subset(&mut rng, n - 1, k)
                    .into_iter()
                    .map(|c| if c >= j { c + 1 } else { c })
                    .collect();
                if covers(m, j, &s) {
                    witness = Some((j, s));
                    break;
                }
            }
            Ok(DisjunctReport {
                k,
                verdict: if witness.is_some() {
                    Verdict::Fail
                } else {
                    Verdict::ProbablePass
                },
                witness,
                subsets_checked: checked,
                mode,
            })
        }
    }
}

/// Checks that every row of `rows` contains `j` and that each other column
/// misses at least one of them.
pub fn is_private_set(m: &TestMatrix, j: usize, rows: &[usize]) -> bool {
    if !rows.iter().all(|&i| m.get(i, j)) {
        return false;
    }
    (0..m.n())
        .filter(|&c| c != j)
        .all(|c| rows.iter().any(|&i| !m.get(i, c)))
}

/// Smallest set of rows in `supp(M_{·j})` on which column `j` is the only
/// column that is 1 everywhere, searching sizes up to `max_size`.
pub fn find_private_set(m: &TestMatrix, j: usize, max_size: usize) -> Option<Vec<usize>> {
    if m.n() == 1 {
        return Some(Vec::new());
    }
    let support = m.column_support(j);
    let stride = bits::words_for(m.n());
    for size in 1..=max_size.min(support.len()) {
        for rows in support.iter().copied().combinations(size) {
            let mut acc = m.row_words(rows[0]).to_vec();
            for &i in &rows[1..] {
                for (a, &b) in acc.iter_mut().zip(m.row_words(i)) {
                    *a &= b;
                }
            }
            debug_assert_eq!(acc.len(), stride);
            if bits::count(&acc) == 1 {
                return Some(rows);
            }
        }
    }
    None
}

/// Outcome of [`qnagt_zero_error_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QnagtReport {
    pub k: usize,
    pub mode: WeightMode,
    pub pass: bool,
    /// Two distinct supports of the given weight mode with equal count outcomes.
    pub witness: Option<(SparseSupport, SparseSupport)>,
    pub patterns_checked: u64,
}

fn column_sum(m: &TestMatrix, cols: &[usize]) -> Vec<u32> {
    let mut acc = vec![0u32; m.t()];
    for &c in cols {
        for i in bits::ones(m.column_words(c)) {
            acc[i] += 1;
        }
    }
    acc
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// Exhaustive check that `Mx ≠ Mx'` for every pair of distinct supports.
///
/// Pairs are enumerated through their difference `x - x'`, a positive part
/// `P` and a negative part `N` with disjoint supports: the pair collides iff
/// the column sums over `P` and over `N` agree. In exactly-k mode
/// `|P| = |N| = l` ranges over `1..=k` with a common part of size `k - l`
/// (which needs `n >= k + l`); in at-most-k mode `|P| <= |N| <= k` and the
/// common part may be empty. The first witness in (size, lexicographic) order
/// is returned.
pub fn qnagt_zero_error_check(
    m: &TestMatrix,
    k: usize,
    mode: WeightMode,
    cap: u128,
) -> Result<QnagtReport> {
    let n = m.n();
    let max_part = match mode {
        WeightMode::ExactlyK => k.min(n.saturating_sub(k)),
        WeightMode::AtMostK => k.min(n),
    };
    let required = binomial_sum(n as u64, (0..=max_part as u64).collect::<Vec<_>>());
    if required > cap {
        return Err(Error::Infeasible { required, cap });
    }

    // column sums of every subset of each size, bucketed by value
    let mut checked = 0u64;
    let mut by_size: Vec<HashMap<Vec<u32>, Vec<Vec<usize>>>> = Vec::with_capacity(max_part + 1);
    for s in 0..=max_part {
        let mut buckets: HashMap<Vec<u32>, Vec<Vec<usize>>> = HashMap::new();
        for sub in (0..n).combinations(s) {
            checked += 1;
            buckets.entry(column_sum(m, &sub)).or_default().push(sub);
        }
        by_size.push(buckets);
    }

    let pairs: Vec<(usize, usize)> = match mode {
        WeightMode::ExactlyK => (1..=max_part).map(|l| (l, l)).collect(),
        WeightMode::AtMostK => (0..=max_part)
            .flat_map(|b| (0..=b).map(move |a| (a, b)))
            .filter(|&(a, b)| b > 0 && a <= b)
            .sorted_by_key(|&(a, b)| (a + b, a))
            .collect(),
    };

    for (a, b) in pairs {
        for p in (0..n).combinations(a) {
            let sum = column_sum(m, &p);
            let Some(candidates) = by_size[b].get(&sum) else {
                continue;
            };
            // with |P| = |N| the canonical pair has P before N
            let hit = candidates
                .iter()
                .find(|q| disjoint(&p, q) && (a < b || p < **q));
            if let Some(q) = hit {
                let (x, x2) = match mode {
                    WeightMode::ExactlyK => {
                        let common: Vec<usize> = (0..n)
                            .filter(|c| !p.contains(c) && !q.contains(c))
                            .take(k - a)
                            .collect();
                        ([common.clone(), p].concat(), [common, q.clone()].concat())
                    }
                    WeightMode::AtMostK => (p, q.clone()),
                };
                return Ok(QnagtReport {
                    k,
                    mode,
                    pass: false,
                    witness: Some((
                        SparseSupport::from_unsorted(x, n)?,
                        SparseSupport::from_unsorted(x2, n)?,
                    )),
                    patterns_checked: checked,
                });
            }
        }
    }
    Ok(QnagtReport {
        k,
        mode,
        pass: true,
        witness: None,
        patterns_checked: checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{count_outcome, or_outcome};

    #[test]
    fn identity_is_disjunct_for_all_k() {
        let id = TestMatrix::identity(6);
        for k in 0..6 {
            let r = is_k_disjunct(&id, k, DisjunctMode::exhaustive()).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "k = {k}");
        }
    }

    #[test]
    fn or_column_gives_witness() {
        let m = TestMatrix::from_rows(&["101", "011", "000"]).unwrap();
        let r = is_k_disjunct(&m, 2, DisjunctMode::exhaustive()).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(covers(&m, 2, &[0, 1]));
        // column 0 is already inside column 2, and the smallest j wins
        assert_eq!(r.witness, Some((0, vec![2])));
        let m = TestMatrix::from_rows(&["1010", "0110", "1001", "0101"]).unwrap();
        assert!(is_k_disjunct(&m, 1, DisjunctMode::exhaustive())
            .unwrap()
            .passed());
        let r = is_k_disjunct(&m, 2, DisjunctMode::exhaustive()).unwrap();
        let (j, s) = r.witness.unwrap();
        assert!(s.len() <= 2 && covers(&m, j, &s));
    }

    #[test]
    fn zero_column_fails() {
        let m = TestMatrix::from_rows(&["10", "00"]).unwrap();
        let r = is_k_disjunct(&m, 1, DisjunctMode::exhaustive()).unwrap();
        assert_eq!(r.witness, Some((1, vec![])));
    }

    #[test]
    fn exhaustive_cap() {
        let id = TestMatrix::identity(30);
        assert!(matches!(
            is_k_disjunct(&id, 3, DisjunctMode::Exhaustive { cap: 1000 }),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn sampled_mode_finds_duplicate_and_labels_pass() {
        let m = TestMatrix::from_rows(&["1100", "0011"]).unwrap();
        let r = is_k_disjunct(
            &m,
            1,
            DisjunctMode::Sampled {
                trials: 200,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let (j, s) = r.witness.unwrap();
        assert!(covers(&m, j, &s));
        let r = is_k_disjunct(
            &TestMatrix::identity(5),
            2,
            DisjunctMode::Sampled {
                trials: 50,
                seed: 3,
            },
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::ProbablePass);
    }

    #[test]
    fn private_sets() {
        let id = TestMatrix::identity(4);
        for j in 0..4 {
            assert_eq!(find_private_set(&id, j, 3), Some(vec![j]));
        }
        let dup = TestMatrix::from_rows(&["110", "111", "001"]).unwrap();
        assert_eq!(find_private_set(&dup, 0, 3), None);
        assert_eq!(find_private_set(&dup, 1, 3), None);
        let m = TestMatrix::from_rows(&["110", "101", "011"]).unwrap();
        let s = find_private_set(&m, 0, 2).unwrap();
        assert_eq!(s, vec![0, 1]);
        assert!(is_private_set(&m, 0, &s));
        assert_eq!(find_private_set(&m, 0, 1), None);
    }

    #[test]
    fn qnagt_examples() {
        let id = TestMatrix::identity(5);
        for k in 1..=3 {
            for mode in [WeightMode::ExactlyK, WeightMode::AtMostK] {
                assert!(
                    qnagt_zero_error_check(&id, k, mode, DEFAULT_ENUMERATION_CAP)
                        .unwrap()
                        .pass
                );
            }
        }
        let ones = TestMatrix::from_rows(&["11"]).unwrap();
        for mode in [WeightMode::ExactlyK, WeightMode::AtMostK] {
            let r = qnagt_zero_error_check(&ones, 1, mode, DEFAULT_ENUMERATION_CAP).unwrap();
            assert!(!r.pass);
            let (a, b) = r.witness.unwrap();
            assert_eq!(a.indices(), &[0]);
            assert_eq!(b.indices(), &[1]);
        }
    }

    /// Direct check: hash every support's count outcome.
    fn direct(m: &TestMatrix, k: usize, mode: WeightMode) -> bool {
        let mut seen = HashMap::new();
        for s in mode.sizes(k) {
            for x in (0..m.n()).combinations(s) {
                let x = SparseSupport::new(x, m.n()).unwrap();
                let y = count_outcome(m, &x).unwrap();
                if seen.insert(y.values().to_vec(), x).is_some() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn difference_enumeration_matches_direct_hashing() {
        for seed in 0..60 {
            let m = crate::construct::bernoulli_matrix(4, 7, 0.4, seed).unwrap();
            for k in 1..=3 {
                for mode in [WeightMode::ExactlyK, WeightMode::AtMostK] {
                    let r = qnagt_zero_error_check(&m, k, mode, DEFAULT_ENUMERATION_CAP).unwrap();
                    assert_eq!(r.pass, direct(&m, k, mode), "seed {seed} k {k} {mode:?}");
                    if let Some((a, b)) = r.witness {
                        assert_ne!(a, b);
                        assert!(mode.sizes(k).contains(&a.weight()));
                        assert!(mode.sizes(k).contains(&b.weight()));
                        assert_eq!(
                            count_outcome(&m, &a).unwrap(),
                            count_outcome(&m, &b).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn exhaustive_disjunct_matches_definition() {
        for seed in 0..40 {
            let m = crate::construct::bernoulli_matrix(6, 7, 0.35, seed).unwrap();
            for k in 1..=3 {
                let r = is_k_disjunct(&m, k, DisjunctMode::exhaustive()).unwrap();
                let naive = (0..7).all(|j| {
                    (0..=k).all(|s| {
                        (0..7)
                            .filter(|&c| c != j)
                            .combinations(s)
                            .all(|set| !covers(&m, j, &set))
                    })
                });
                assert_eq!(r.passed(), naive, "seed {seed} k {k}");
                if let Some((j, s)) = &r.witness {
                    assert!(s.len() <= k && covers(&m, *j, s));
                }
            }
        }
    }

    #[test]
    fn disjunct_without_zero_columns_is_zero_error() {
        for seed in 0..30 {
            let m = crate::construct::bernoulli_matrix(7, 6, 0.4, seed).unwrap();
            let k = 2;
            let disjunct = is_k_disjunct(&m, k, DisjunctMode::exhaustive())
                .unwrap()
                .passed();
            let mut outcomes = HashMap::new();
            let mut zero_error = true;
            for s in 0..=k {
                for x in (0..6).combinations(s) {
                    let x = SparseSupport::new(x, 6).unwrap();
                    if outcomes.insert(or_outcome(&m, &x).unwrap(), ()).is_some() {
                        zero_error = false;
                    }
                }
            }
            if disjunct {
                assert!(zero_error);
            }
            if zero_error {
                assert!(is_k_disjunct(&m, k - 1, DisjunctMode::exhaustive())
                    .unwrap()
                    .passed());
            }
        }
    }
}
