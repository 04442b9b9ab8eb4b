//! COMP decoding and exhaustive decoders used as ground truth.

use itertools::Itertools;

use crate::bits;
use crate::combinatorics::binomial_sum;
use crate::error::{Error, Result};
use crate::matrix::{or_words, Outcome, SparseSupport, TestMatrix};

/// Default ceiling on the number of candidates an exhaustive routine may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u128 = 100_000_000;

/// Which input weights count as "k-sparse".
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightMode {
    ExactlyK,
    AtMostK,
}

impl WeightMode {
    pub(crate) fn sizes(self, k: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            WeightMode::ExactlyK => k..=k,
            WeightMode::AtMostK => 0..=k,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub estimate: SparseSupport,
    /// Set by the exhaustive decoders when a second consistent support exists;
    /// `estimate` is then the first one in (size, lexicographic) order.
    pub ambiguous: bool,
    pub candidates_checked: u64,
}

fn check_len(m: &TestMatrix, y: &Outcome) -> Result<()> {
    if y.len() != m.t() {
        return Err(Error::DimensionMismatch {
            expected: m.t(),
            got: y.len(),
        });
    }
    Ok(())
}

/// COMP: declare `j` defective iff every test containing `j` is positive.
///
/// All-zero columns are included vacuously.
pub fn comp_decode(m: &TestMatrix, y: &Outcome) -> Result<DecodeResult> {
    check_len(m, y)?;
    let positive = y.positive_words();
    let estimate: Vec<usize> = (0..m.n())
        .filter(|&j| bits::is_subset(m.column_words(j), &positive))
        .collect();
    Ok(DecodeResult {
        estimate: SparseSupport::new(estimate, m.n())?,
        ambiguous: false,
        candidates_checked: m.n() as u64,
    })
}

fn enumerate_consistent(
    m: &TestMatrix,
    k: usize,
    mode: WeightMode,
    cap: u128,
    consistent: impl Fn(&[usize]) -> bool,
) -> Result<DecodeResult> {
    let sizes = mode.sizes(k);
    let required = binomial_sum(m.n() as u64, sizes.clone().map(|s| s as u64));
    if required > cap {
        return Err(Error::Infeasible { required, cap });
    }
    let mut checked = 0u64;
    let mut first: Option<Vec<usize>> = None;
    for s in sizes {
        for cand in (0..m.n()).combinations(s) {
            checked += 1;
            if consistent(&cand) {
                match first {
                    None => first = Some(cand),
                    Some(f) => {
                        return Ok(DecodeResult {
                            estimate: SparseSupport::new(f, m.n())?,
                            ambiguous: true,
                            candidates_checked: checked,
                        })
                    }
                }
            }
        }
    }
    let f = first.ok_or(Error::NoConsistentSupport)?;
    Ok(DecodeResult {
        estimate: SparseSupport::new(f, m.n())?,
        ambiguous: false,
        candidates_checked: checked,
    })
}

/// Enumerates every support of the given weight mode and returns the one
/// whose OR outcome equals `y`, flagging ambiguity when there are several.
pub fn brute_force_nagt_decode(
    m: &TestMatrix,
    y: &Outcome,
    k: usize,
    mode: WeightMode,
    cap: u128,
) -> Result<DecodeResult> {
    check_len(m, y)?;
    let target = y.positive_words();
    if y.values().iter().any(|&v| v > 1) {
        return Err(Error::NoConsistentSupport);
    }
    enumerate_consistent(m, k, mode, cap, |cand| or_words(m, cand) == target)
}

/// As [`brute_force_nagt_decode`] with `M x = y` as the consistency relation.
pub fn brute_force_qnagt_decode(
    m: &TestMatrix,
    y: &Outcome,
    k: usize,
    mode: WeightMode,
    cap: u128,
) -> Result<DecodeResult> {
    check_len(m, y)?;
    let target = y.values();
    enumerate_consistent(m, k, mode, cap, |cand| {
        let mut counts = vec![0u32; m.t()];
        for &j in cand {
            for i in bits::ones(m.column_words(j)) {
                counts[i] += 1;
            }
        }
        counts == target
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{count_outcome, or_outcome};

    fn sup(ix: &[usize], n: usize) -> SparseSupport {
        SparseSupport::new(ix.to_vec(), n).unwrap()
    }

    #[test]
    fn comp_on_identity() {
        let id = TestMatrix::identity(3);
        let y = Outcome::boolean(vec![false, true, false]);
        assert_eq!(comp_decode(&id, &y).unwrap().estimate, sup(&[1], 3));
    }

    #[test]
    fn comp_all_positive_returns_everything() {
        let m = TestMatrix::from_rows(&["1100", "0110", "0000"]).unwrap();
        let y = Outcome::boolean(vec![true; 3]);
        // column 3 is all-zero and is included vacuously
        assert_eq!(comp_decode(&m, &y).unwrap().estimate, sup(&[0, 1, 2, 3], 4));
    }

    #[test]
    fn comp_rejects_wrong_length() {
        let id = TestMatrix::identity(3);
        assert!(comp_decode(&id, &Outcome::boolean(vec![true])).is_err());
    }

    #[test]
    fn brute_nagt_examples() {
        let id = TestMatrix::identity(4);
        let y = Outcome::boolean(vec![true, false, false, true]);
        let r = brute_force_nagt_decode(&id, &y, 2, WeightMode::AtMostK, DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert_eq!(r.estimate, sup(&[0, 3], 4));
        assert!(!r.ambiguous);

        let m = TestMatrix::from_rows(&["11"]).unwrap();
        let y = Outcome::boolean(vec![true]);
        let r = brute_force_nagt_decode(&m, &y, 1, WeightMode::ExactlyK, DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert!(r.ambiguous);
        assert_eq!(r.estimate, sup(&[0], 2));
    }

    #[test]
    fn brute_nagt_errors() {
        let id = TestMatrix::identity(4);
        let y = Outcome::boolean(vec![true, true, true, false]);
        assert_eq!(
            brute_force_nagt_decode(&id, &y, 2, WeightMode::AtMostK, DEFAULT_ENUMERATION_CAP),
            Err(Error::NoConsistentSupport)
        );
        assert!(matches!(
            brute_force_nagt_decode(&id, &y, 2, WeightMode::AtMostK, 5),
            Err(Error::Infeasible {
                required: 11,
                cap: 5
            })
        ));
    }

    #[test]
    fn brute_qnagt_examples() {
        let id = TestMatrix::identity(3);
        let x = sup(&[0, 2], 3);
        let y = count_outcome(&id, &x).unwrap();
        let r = brute_force_qnagt_decode(&id, &y, 2, WeightMode::AtMostK, DEFAULT_ENUMERATION_CAP)
            .unwrap();
        assert_eq!(r.estimate, x);
        assert!(!r.ambiguous);

        let ones = TestMatrix::from_rows(&["11"]).unwrap();
        let r = brute_force_qnagt_decode(
            &ones,
            &Outcome::count(vec![1]),
            1,
            WeightMode::ExactlyK,
            DEFAULT_ENUMERATION_CAP,
        )
        .unwrap();
        assert!(r.ambiguous);
    }

    #[test]
    fn comp_never_misses_a_defective() {
        let m = TestMatrix::from_rows(&["1010", "0110", "1001", "0101"]).unwrap();
        for s in 0..=4 {
            for x in (0..4).combinations(s) {
                let x = SparseSupport::new(x, 4).unwrap();
                let y = or_outcome(&m, &x).unwrap();
                assert!(x.is_subset_of(&comp_decode(&m, &y).unwrap().estimate));
            }
        }
    }
}
