//! Test matrices, sparse inputs, outcomes, and the constraint predicates.
//!
//! A [`TestMatrix`] is a `t × n` binary matrix: rows are tests, columns are
//! items, and entry `(i, j)` is 1 when item `j` takes part in test `i`.
//! Everything is 0-indexed. Storage is bit-packed by row, with a packed copy
//! of every column kept alongside so that column containment checks (the
//! inner loop of every verifier and decoder) are word operations.
//!
//! # Text format
//!
//! ```text
//! t n d w
//! <t lines of exactly n characters from {0,1}>
//! ```
//!
//! `d` and `w` are the runlength and column-weight claims, `-1` when unset.
//! Lines end with LF and carry no trailing whitespace.

use std::fmt;

use crate::bits;
use crate::error::{invalid, Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct TestMatrix {
    t: usize,
    n: usize,
    row_stride: usize,
    col_stride: usize,
    rows: Vec<u64>,
    cols: Vec<u64>,
    d_claimed: Option<usize>,
    w_claimed: Option<usize>,
}

impl fmt::Debug for TestMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "TestMatrix {}x{} (d={:?}, w={:?})",
            self.t, self.n, self.d_claimed, self.w_claimed
        )?;
        for i in 0..self.t {
            for j in 0..self.n {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl TestMatrix {
    pub fn zeros(t: usize, n: usize) -> Self {
        Self::from_column_words(t, n, vec![0; n * bits::words_for(t)])
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| i == j)
    }

    pub fn from_fn(t: usize, n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let col_stride = bits::words_for(t);
        let mut cols = vec![0; n * col_stride];
        for j in 0..n {
            let col = &mut cols[j * col_stride..(j + 1) * col_stride];
            for i in 0..t {
                if f(i, j) {
                    bits::set(col, i);
                }
            }
        }
        Self::from_column_words(t, n, cols)
    }

    /// Builds a matrix from rows given as 0/1 bytes or `'0'`/`'1'` characters.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let t = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(t * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: row.len(),
                });
            }
            for &b in row {
                entries.push(match b {
                    0 | b'0' => false,
                    1 | b'1' => true,
                    other => return Err(invalid(format!("row {i}: entry {other} is not binary"))),
                });
            }
        }
        Ok(Self::from_fn(t, n, |i, j| entries[i * n + j]))
    }

    /// Builds a matrix from packed columns: column `j` occupies words
    /// `j * ceil(t/64) .. (j+1) * ceil(t/64)`.
    pub fn from_column_words(t: usize, n: usize, cols: Vec<u64>) -> Self {
        let col_stride = bits::words_for(t);
        assert_eq!(
            cols.len(),
            n * col_stride,
            "column buffer has the wrong size"
        );
        let row_stride = bits::words_for(n);
        let mut rows = vec![0; t * row_stride];
        for j in 0..n {
            for i in bits::ones(&cols[j * col_stride..(j + 1) * col_stride]) {
                assert!(i < t, "bit set beyond row {t}");
                bits::set(&mut rows[i * row_stride..(i + 1) * row_stride], j);
            }
        }
        Self {
            t,
            n,
            row_stride,
            col_stride,
            rows,
            cols,
            d_claimed: None,
            w_claimed: None,
        }
    }

    /// Attaches a runlength claim after checking it (linear mode).
    pub fn with_runlength_claim(mut self, d: usize) -> Result<Self> {
        if let Check::Fail(v) = check_runlength(&self, d, RunlengthMode::Linear) {
            return Err(invalid(format!("runlength claim d={d} violated: {v}")));
        }
        self.d_claimed = Some(d);
        Ok(self)
    }

    /// Attaches a column-weight claim after checking it.
    pub fn with_weight_claim(mut self, w: usize) -> Result<Self> {
        if let Check::Fail(v) = check_weight(&self, w) {
            return Err(invalid(format!("weight claim w={w} violated: {v}")));
        }
        self.w_claimed = Some(w);
        Ok(self)
    }

    pub fn without_claims(mut self) -> Self {
        self.d_claimed = None;
        self.w_claimed = None;
        self
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_claimed(&self) -> Option<usize> {
        self.d_claimed
    }

    pub fn w_claimed(&self) -> Option<usize> {
        self.w_claimed
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        bits::get(self.column_words(j), i)
    }

    /// Packed row `i`, one bit per item.
    #[inline]
    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.rows[i * self.row_stride..(i + 1) * self.row_stride]
    }

    /// Packed column `j`, one bit per test.
    #[inline]
    pub fn column_words(&self, j: usize) -> &[u64] {
        &self.cols[j * self.col_stride..(j + 1) * self.col_stride]
    }

    pub fn column_stride(&self) -> usize {
        self.col_stride
    }

    pub fn column_weight(&self, j: usize) -> usize {
        bits::count(self.column_words(j))
    }

    pub fn max_column_weight(&self) -> usize {
        (0..self.n)
            .map(|j| self.column_weight(j))
            .max()
            .unwrap_or(0)
    }

    /// Row indices of the ones in column `j`, ascending.
    pub fn column_support(&self, j: usize) -> Vec<usize> {
        bits::ones(self.column_words(j)).collect()
    }

    /// Columns that contain no 1 at all.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| bits::is_zero(self.column_words(j)))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let claim = |c: Option<usize>| c.map_or("-1".to_string(), |v| v.to_string());
        let mut s = String::with_capacity((self.n + 1) * (self.t + 1) + 32);
        s.push_str(&format!(
            "{} {} {} {}\n",
            self.t,
            self.n,
            claim(self.d_claimed),
            claim(self.w_claimed)
        ));
        for i in 0..self.t {
            let row = self.row_words(i);
            for j in 0..self.n {
                s.push(if bits::get(row, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let parse_err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text.split('\n');
        let header = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty input".into()))?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 4 {
            return Err(parse_err(1, format!("expected 't n d w', got {header:?}")));
        }
        let dim = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| parse_err(1, format!("bad dimension {s:?}")))
        };
        let claim = |s: &str| -> Result<Option<usize>> {
            match s.parse::<i64>() {
                Ok(-1) => Ok(None),
                Ok(v) if v >= 0 => Ok(Some(v as usize)),
                _ => Err(parse_err(1, format!("bad claim {s:?}"))),
            }
        };
        let (t, n) = (dim(fields[0])?, dim(fields[1])?);
        let (d, w) = (claim(fields[2])?, claim(fields[3])?);

        let mut rows = Vec::with_capacity(t);
        for i in 0..t {
            let line = lines
                .next()
                .ok_or_else(|| parse_err(i + 2, format!("expected {t} rows, found {i}")))?;
            if line.len() != n || !line.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(parse_err(
                    i + 2,
                    format!("expected exactly {n} characters from {{0,1}}"),
                ));
            }
            rows.push(line.as_bytes());
        }
        match (lines.next(), lines.next()) {
            (Some(""), None) => {}
            (None, _) => return Err(parse_err(t + 1, "missing final newline".into())),
            _ => {
                return Err(parse_err(
                    t + 2,
                    "trailing content after the last row".into(),
                ))
            }
        }
        let mut m = if t == 0 {
            Self::zeros(0, n)
        } else {
            Self::from_rows(&rows)?
        };
        if let Some(d) = d {
            m = m.with_runlength_claim(d)?;
        }
        if let Some(w) = w {
            m = m.with_weight_claim(w)?;
        }
        Ok(m)
    }
}

/// A set of item indices: the support of a sparse input vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparseSupport {
    indices: Vec<usize>,
    n: usize,
}

impl SparseSupport {
    /// `indices` must be strictly increasing and below `n`.
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if !indices.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("support indices must be strictly increasing"));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(invalid(format!("index {last} out of range for n={n}")));
            }
        }
        Ok(Self { indices, n })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut indices: Vec<usize>, n: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        Self::new(indices, n)
    }

    pub fn empty(n: usize) -> Self {
        Self {
            indices: Vec::new(),
            n,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> usize {
        self.indices.len()
    }

    pub fn contains(&self, j: usize) -> bool {
        self.indices.binary_search(&j).is_ok()
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        let mut all = self.indices.clone();
        all.extend_from_slice(&other.indices);
        Self::from_unsorted(all, self.n)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.indices.iter().all(|&j| other.contains(j))
    }
}

impl fmt::Display for SparseSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, j) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{j}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutcomeKind {
    /// `M ⊙ x`: OR of the defective columns.
    Boolean,
    /// `M x`: number of defectives per test.
    Count,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Outcome {
    kind: OutcomeKind,
    values: Vec<u32>,
}

impl Outcome {
    pub fn boolean(values: Vec<bool>) -> Self {
        Self {
            kind: OutcomeKind::Boolean,
            values: values.into_iter().map(u32::from).collect(),
        }
    }

    pub fn count(values: Vec<u32>) -> Self {
        Self {
            kind: OutcomeKind::Count,
            values,
        }
    }

    pub fn kind(&self) -> OutcomeKind {
        self.kind
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Positive tests, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&i| self.values[i] > 0)
            .collect()
    }

    /// Packed positive-test indicator.
    pub fn positive_words(&self) -> Vec<u64> {
        let mut w = vec![0; bits::words_for(self.values.len())];
        for (i, &v) in self.values.iter().enumerate() {
            if v > 0 {
                bits::set(&mut w, i);
            }
        }
        w
    }

    /// One line of space-separated integers.
    pub fn to_line(&self) -> String {
        let parts: Vec<String> = self.values.iter().map(u32::to_string).collect();
        parts.join(" ")
    }

    pub fn parse(line: &str, kind: OutcomeKind) -> Result<Self> {
        let mut values = Vec::new();
        for tok in line.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| Error::Parse {
                line: 1,
                msg: format!("bad outcome entry {tok:?}"),
            })?;
            if kind == OutcomeKind::Boolean && v > 1 {
                return Err(Error::Parse {
                    line: 1,
                    msg: format!("boolean outcome entry {v} is not 0/1"),
                });
            }
            values.push(v);
        }
        Ok(Self { kind, values })
    }
}

fn check_dims(m: &TestMatrix, x: &SparseSupport) -> Result<()> {
    if x.n() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: x.n(),
        });
    }
    Ok(())
}

/// Packed OR of the columns in `x`.
pub(crate) fn or_words(m: &TestMatrix, x: &[usize]) -> Vec<u64> {
    let mut acc = vec![0; m.column_stride()];
    for &j in x {
        bits::or_assign(&mut acc, m.column_words(j));
    }
    acc
}

/// `M ⊙ x`: test `i` is positive iff some defective takes part in it.
pub fn or_outcome(m: &TestMatrix, x: &SparseSupport) -> Result<Outcome> {
    check_dims(m, x)?;
    let acc = or_words(m, x.indices());
    Ok(Outcome::boolean(
        (0..m.t()).map(|i| bits::get(&acc, i)).collect(),
    ))
}

/// `M x`: number of defectives in each test.
pub fn count_outcome(m: &TestMatrix, x: &SparseSupport) -> Result<Outcome> {
    check_dims(m, x)?;
    let mut counts = vec![0u32; m.t()];
    for &j in x.indices() {
        for i in bits::ones(m.column_words(j)) {
            counts[i] += 1;
        }
    }
    Ok(Outcome::count(counts))
}

/// Pass, or fail with the first offending location.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Check<W> {
    Pass,
    Fail(W),
}

impl<W> Check<W> {
    pub fn is_pass(&self) -> bool {
        matches!(self, Check::Pass)
    }

    pub fn failure(&self) -> Option<&W> {
        match self {
            Check::Pass => None,
            Check::Fail(w) => Some(w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunlengthMode {
    /// Consecutive ones in a column are at least `d + 1` rows apart.
    Linear,
    /// As linear, and the wrap-around gap from the last 1 back to the first
    /// 1 is also at least `d + 1`.
    Cyclic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunlengthViolation {
    pub column: usize,
    /// The two offending rows in column order; for the cyclic wrap-around
    /// pair this is `(first, last)`.
    pub rows: (usize, usize),
}

impl fmt::Display for RunlengthViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "column {} rows ({}, {})",
            self.column, self.rows.0, self.rows.1
        )
    }
}

pub fn check_runlength(m: &TestMatrix, d: usize, mode: RunlengthMode) -> Check<RunlengthViolation> {
    if d == 0 {
        return Check::Pass;
    }
    for j in 0..m.n() {
        let mut first = None;
        let mut prev: Option<usize> = None;
        for q in bits::ones(m.column_words(j)) {
            if let Some(p) = prev {
                if q - p < d + 1 {
                    return Check::Fail(RunlengthViolation {
                        column: j,
                        rows: (p, q),
                    });
                }
            } else {
                first = Some(q);
            }
            prev = Some(q);
        }
        if mode == RunlengthMode::Cyclic {
            if let (Some(p), Some(q)) = (first, prev) {
                if p != q && m.t() - q + p < d + 1 {
                    return Check::Fail(RunlengthViolation {
                        column: j,
                        rows: (p, q),
                    });
                }
            }
        }
    }
    Check::Pass
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightViolation {
    pub column: usize,
    pub weight: usize,
}

impl fmt::Display for WeightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {} has weight {}", self.column, self.weight)
    }
}

pub fn check_weight(m: &TestMatrix, w: usize) -> Check<WeightViolation> {
    for j in 0..m.n() {
        let weight = m.column_weight(j);
        if weight > w {
            return Check::Fail(WeightViolation { column: j, weight });
        }
    }
    Check::Pass
}

/// Appends the fewest all-zero rows (at most `d`) that make `d + 1` divide `t`.
pub fn pad_to_divisible(m: &TestMatrix, d: usize) -> TestMatrix {
    let r = (d + 1 - m.t() % (d + 1)) % (d + 1);
    let t = m.t() + r;
    let stride = bits::words_for(t);
    let mut cols = vec![0; m.n() * stride];
    for j in 0..m.n() {
        let src = m.column_words(j);
        cols[j * stride..j * stride + src.len()].copy_from_slice(src);
    }
    let mut out = TestMatrix::from_column_words(t, m.n(), cols);
    out.d_claimed = m.d_claimed;
    out.w_claimed = m.w_claimed;
    out
}
