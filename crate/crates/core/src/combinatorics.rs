/// Exact `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // C(n, i) * (n - i) = C(n, i + 1) * (i + 1), so the division is exact
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `Σ_{s in sizes} C(n, s)`, saturating.
pub fn binomial_sum(n: u64, sizes: impl IntoIterator<Item = u64>) -> u128 {
    sizes
        .into_iter()
        .fold(0u128, |acc, s| acc.saturating_add(binomial(n, s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_values() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(14, 3), 364);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
        assert_eq!(binomial_sum(14, 0..=3), 1 + 14 + 91 + 364);
    }
}
