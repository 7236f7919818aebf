use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::bigutil;

/// Cumulative binomial counts `l_k = C(n,0) + … + C(n,k)` for `k = -1..=n`.
///
/// Entry `0` of the returned vector is `l_{-1} = 0`, entry `k + 1` is `l_k`.
/// For a binary alphabet and bit-flip probability below one half, ranks
/// `l_{k-1}+1 ..= l_k` of the guessing order are exactly the weight-`k`
/// words.
pub fn cumulative_binomial_layers(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 2);
    out.push(BigUint::zero());
    let mut binom = BigUint::one();
    let mut acc = BigUint::zero();
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigUint::from(n - k + 1) / BigUint::from(k);
        }
        acc += &binom;
        out.push(acc.clone());
    }
    out
}

/// `log2(l_k + 1)` for `k = -1..=n`, same indexing as
/// [`cumulative_binomial_layers`].
pub fn layer_log2_sizes(layers: &[BigUint]) -> Vec<f64> {
    layers
        .iter()
        .map(|l| bigutil::log2(&(l + BigUint::one())))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_layers() {
        let l = cumulative_binomial_layers(4);
        let want: Vec<BigUint> = [0u32, 1, 5, 11, 15, 16].iter().map(|&v| v.into()).collect();
        assert_eq!(l, want);
    }

    #[test]
    fn last_layer_is_full_space() {
        for n in [1usize, 7, 64, 300] {
            let l = cumulative_binomial_layers(n);
            assert_eq!(l[n + 1], BigUint::one() << n);
        }
    }

    #[test]
    fn matches_pascal_triangle_at_700() {
        // Independent route: build row 700 of Pascal's triangle by addition.
        let n = 700usize;
        let mut row = vec![BigUint::one()];
        for _ in 0..n {
            let mut next = vec![BigUint::one(); row.len() + 1];
            for i in 1..row.len() {
                next[i] = &row[i - 1] + &row[i];
            }
            row = next;
        }
        let want: BigUint = row[..=10].iter().sum();
        assert_eq!(cumulative_binomial_layers(n)[11], want);
    }
}
