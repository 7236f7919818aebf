//! Small helpers for mixing `BigUint` counts with floating-point logs.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `log2(x)`, with `log2(0) = -inf`.
pub fn log2(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.log2() + shift as f64
}

/// `x` as `f64`, saturating to infinity.
pub fn to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// `ceil(x * base^n)` for finite `x >= 0`, computed exactly from the binary
/// expansion of `x`.
pub fn ceil_scaled(x: f64, base: usize, n: usize) -> BigUint {
    debug_assert!(x.is_finite() && x >= 0.0);
    if x == 0.0 {
        return BigUint::zero();
    }
    let (mantissa, exponent, _) = num_traits::Float::integer_decode(x);
    let num = BigUint::from(base).pow(n as u32) * BigUint::from(mantissa);
    if exponent >= 0 {
        num << exponent as usize
    } else {
        let shift = (-exponent) as usize;
        let den_minus_one = (BigUint::one() << shift) - 1u32;
        (num + den_minus_one) >> shift
    }
}

/// Factorials `0!, …, n!`.
pub fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for i in 1..=n {
        let next = &out[i - 1] * BigUint::from(i);
        out.push(next);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log2_of_large_powers() {
        let x = BigUint::one() << 2000usize;
        assert!((log2(&x) - 2000.0).abs() < 1e-12);
        assert_eq!(log2(&BigUint::zero()), f64::NEG_INFINITY);
    }

    #[test]
    fn ceil_scaled_is_exact() {
        assert_eq!(ceil_scaled(0.5, 2, 4), BigUint::from(8u32));
        assert_eq!(ceil_scaled(0.3, 2, 4), BigUint::from(5u32)); // 4.8 -> 5
        assert_eq!(ceil_scaled(1.0 / 3.0, 3, 2), BigUint::from(3u32));
    }
}
