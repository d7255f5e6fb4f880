//! k-subsets of `{0, .., n-1}` as `u64` bitmasks, in colexicographic order.
//!
//! In colex order a subset's rank is `Σ C(e_i, i+1)` over its elements
//! `e_0 < e_1 < …`, which is also the order in which Gosper's hack
//! produces masks of a fixed popcount.

/// `C(n, k)` as `u64`, or `None` on overflow.
pub fn binom(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Colex rank of `mask` among subsets of the same size.
pub fn colex_rank(mask: u64) -> u64 {
    let mut rank = 0;
    let mut m = mask;
    let mut i = 1;
    while m != 0 {
        let e = u64::from(m.trailing_zeros());
        rank += binom(e, i).expect("fits for 64-bit masks");
        m &= m - 1;
        i += 1;
    }
    rank
}

/// The `k`-subset of colex rank `rank`.
pub fn colex_unrank(mut rank: u64, k: u32) -> u64 {
    let mut mask = 0u64;
    for i in (1..=u64::from(k)).rev() {
        // largest e with C(e, i) <= rank
        let mut e = i - 1;
        while binom(e + 1, i).is_some_and(|c| c <= rank) {
            e += 1;
        }
        rank -= binom(e, i).expect("bounded by the loop above");
        mask |= 1 << e;
    }
    mask
}

/// Next mask with the same popcount (Gosper's hack). The caller stops once
/// the result reaches or exceeds `1 << n`.
#[inline]
pub fn next_combination(mask: u64) -> u64 {
    let c = mask & mask.wrapping_neg();
    let r = mask.wrapping_add(c);
    (((r ^ mask) >> 2) / c) | r
}

/// Iterates the masks of colex rank `start..end` among `k`-subsets of an
/// `n`-set.
pub fn colex_range(n: u32, k: u32, start: u64, end: u64) -> impl Iterator<Item = u64> {
    let total = binom(u64::from(n), u64::from(k)).unwrap_or(u64::MAX);
    let end = end.min(total);
    let mut mask = colex_unrank(start.min(end), k);
    let mut left = end.saturating_sub(start);
    std::iter::from_fn(move || {
        if left == 0 {
            return None;
        }
        let out = mask;
        left -= 1;
        if left > 0 {
            mask = next_combination(mask);
        }
        Some(out)
    })
}

/// Splits `0..total` into `parts` contiguous ranges of near-equal length.
pub fn split_range(total: u64, parts: usize) -> Vec<(u64, u64)> {
    let parts = parts.max(1) as u64;
    (0..parts)
        .map(|p| (total * p / parts, total * (p + 1) / parts))
        .filter(|(a, b)| a < b)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(36, 31), Some(376_992));
        assert_eq!(binom(5, 0), Some(1));
        assert_eq!(binom(3, 5), Some(0));
        assert_eq!(binom(36, 25), Some(600_805_296));
    }

    #[test]
    fn gosper_order_is_colex_rank_order() {
        let all: Vec<u64> = (0u64..1 << 8).filter(|m| m.count_ones() == 3).collect();
        // numeric order of masks with equal popcount is colex order
        for (r, &m) in all.iter().enumerate() {
            assert_eq!(colex_rank(m), r as u64);
            assert_eq!(colex_unrank(r as u64, 3), m);
        }
        let walked: Vec<u64> = colex_range(8, 3, 0, 100).collect();
        assert_eq!(walked, all);
    }

    #[test]
    fn ranges_cover_everything_once() {
        let total = binom(10, 4).unwrap();
        let mut seen = Vec::new();
        for (a, b) in split_range(total, 7) {
            seen.extend(colex_range(10, 4, a, b));
        }
        let expected: Vec<u64> = (0u64..1 << 10).filter(|m| m.count_ones() == 4).collect();
        assert_eq!(seen, expected);
        assert!(colex_range(10, 4, 5, 5).next().is_none());
    }

    #[test]
    fn full_width_masks() {
        let top = colex_unrank(binom(36, 31).unwrap() - 1, 31);
        assert_eq!(top, ((1u64 << 31) - 1) << 5);
        assert_eq!(colex_rank(top), binom(36, 31).unwrap() - 1);
    }
}
