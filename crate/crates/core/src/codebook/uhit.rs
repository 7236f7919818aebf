use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use super::{codebook_size, size_exponent};
use crate::bigutil;
use crate::{Error, Result};

/// Exponent (natural log) below which survival probabilities are reported
/// as zero.
const UNDERFLOW: f64 = -745.0;
/// Largest space for which [`UHitModel::mean_exact`] sums term by term.
const DIRECT_SUM_LIMIT: f64 = (1u64 << 26) as f64;

/// Law of `U`, the minimum of `count` independent uniform draws from
/// `{1, …, q^n}`: the guess index at which the first non-transmitted
/// codeword is met.
#[derive(Clone, Debug)]
pub struct UHitModel {
    n: usize,
    alphabet: usize,
    rate: f64,
    count: f64,
    log2_space: f64,
    space: BigUint,
}

impl UHitModel {
    /// `count = M_n = ⌊q^{nR}⌋`.
    pub fn new(n: usize, alphabet: usize, rate: f64) -> Result<Self> {
        Self::with_count(n, alphabet, rate, codebook_size(n, alphabet, rate))
    }

    /// Competitors of one transmitted word in a codebook of `M_n` words.
    pub fn competitors(n: usize, alphabet: usize, rate: f64) -> Result<Self> {
        Self::with_count(n, alphabet, rate, codebook_size(n, alphabet, rate) - 1.0)
    }

    pub fn with_count(n: usize, alphabet: usize, rate: f64, count: f64) -> Result<Self> {
        if n == 0 || alphabet < 2 {
            return Err(Error::InvalidArgument("need n >= 1 and alphabet >= 2".into()));
        }
        if !(0.0..=1.0).contains(&rate) {
            return Err(Error::InvalidArgument(format!("rate {rate} not in [0, 1]")));
        }
        if !(count.is_finite() && count >= 0.0) {
            return Err(Error::InvalidArgument(format!("codeword count {count} not representable")));
        }
        Ok(UHitModel {
            n,
            alphabet,
            rate,
            count,
            log2_space: n as f64 * (alphabet as f64).log2(),
            space: BigUint::from(alphabet).pow(n as u32),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Number of uniform draws.
    pub fn count(&self) -> f64 {
        self.count
    }

    /// `q^n`.
    pub fn space(&self) -> &BigUint {
        &self.space
    }

    /// `t / q^n` for `t < q^n`.
    fn fraction(&self, t: &BigUint) -> f64 {
        (bigutil::log2(t) - self.log2_space).exp2()
    }

    /// `P(U > t) = (1 - t/q^n)^count`.
    pub fn survival_exact(&self, t: &BigUint) -> f64 {
        if t.is_zero() || self.count == 0.0 {
            return 1.0;
        }
        if t >= &self.space {
            return 0.0;
        }
        let e = self.count * (-self.fraction(t)).ln_1p();
        if e < UNDERFLOW {
            0.0
        } else {
            e.exp()
        }
    }

    /// `exp(-t·q^{-n(1-R)})`.
    pub fn survival_approx(&self, t: &BigUint) -> f64 {
        let log2_scale = -(self.n as f64 - size_exponent(self.n, self.rate)) * (self.alphabet as f64).log2();
        (-(bigutil::log2(t) + log2_scale).exp2()).exp()
    }

    pub fn survival_exact_u64(&self, t: u64) -> f64 {
        self.survival_exact(&BigUint::from(t))
    }

    pub fn survival_approx_u64(&self, t: u64) -> f64 {
        self.survival_approx(&BigUint::from(t))
    }

    /// `P(U = k)` for `k ≥ 1`.
    pub fn pmf_exact(&self, k: u64) -> f64 {
        self.survival_exact_u64(k - 1) - self.survival_exact_u64(k)
    }

    /// Discretized exponential law, `P(k-1 < U ≤ k)` under the
    /// approximation.
    pub fn pmf_approx(&self, k: u64) -> f64 {
        self.survival_approx_u64(k - 1) - self.survival_approx_u64(k)
    }

    /// `E(U) = Σ_{t ≥ 0} P(U > t)`; summed directly for spaces up to `2^26`,
    /// otherwise by the trapezoidal estimate `N/(count+1) + 1/2`.
    pub fn mean_exact(&self) -> f64 {
        let space = self.log2_space.exp2();
        if self.count == 0.0 {
            return f64::INFINITY;
        }
        if space <= DIRECT_SUM_LIMIT {
            let mut acc = 0.0;
            for t in 0..space as u64 {
                let s = self.survival_exact_u64(t);
                if s == 0.0 {
                    break;
                }
                acc += s;
            }
            acc
        } else {
            space / (self.count + 1.0) + 0.5
        }
    }

    /// Draw `U` by inverting the survival function; `None` when there are
    /// no competitors, so no hit ever occurs.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<BigUint> {
        if self.count == 0.0 {
            return None;
        }
        // V uniform on (0, 1]; P(U > t) = P(V < (1 - t/N)^count).
        let v = 1.0 - rng.gen::<f64>();
        let x = -(v.ln() / self.count).exp_m1();
        let u = bigutil::ceil_scaled(x, self.alphabet, self.n).max(BigUint::one());
        Some(u.min(self.space.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn boundary_values() {
        let m = UHitModel::new(16, 2, 0.8).unwrap();
        assert_eq!(m.count(), 7131.0);
        assert_eq!(m.survival_exact_u64(0), 1.0);
        assert_eq!(m.survival_exact_u64(1 << 16), 0.0);
        assert_eq!(m.survival_approx_u64(0), 1.0);
        // t = 2^{n(1-R)} gives e^{-1}.
        let m = UHitModel::new(20, 2, 0.6).unwrap();
        assert!((m.survival_approx_u64(256) - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn exact_matches_direct_product() {
        let m = UHitModel::new(10, 2, 0.5).unwrap();
        for t in [1u64, 7, 100, 1000] {
            let direct = (1.0 - t as f64 / 1024.0).powi(32);
            assert!((m.survival_exact_u64(t) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn pmf_sums_to_one() {
        let m = UHitModel::new(10, 2, 0.3).unwrap();
        let total: f64 = (1..=1024).map(|k| m.pmf_exact(k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mean_matches_direct_sum() {
        let m = UHitModel::new(8, 2, 0.5).unwrap();
        let direct: f64 = (0..256).map(|t| (1.0 - t as f64 / 256.0).powi(16)).sum();
        assert!((m.mean_exact() - direct).abs() < 1e-10);
        let big = UHitModel::new(40, 2, 0.5).unwrap();
        assert!((big.mean_exact().log2() / 40.0 - 0.5).abs() < 0.01);
    }

    #[test]
    fn sampling_follows_survival() {
        let m = UHitModel::new(12, 2, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let trials = 200_000;
        let t = BigUint::from(40u32);
        let above = (0..trials).filter(|_| m.sample(&mut rng).unwrap() > t).count() as f64;
        let p = m.survival_exact(&t);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((above / trials as f64 - p).abs() < 5.0 * sigma, "{} vs {p}", above / trials as f64);
    }

    #[test]
    fn single_codeword_has_no_competitors() {
        let m = UHitModel::competitors(16, 2, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(m.sample(&mut rng).is_none());
        assert_eq!(m.survival_exact_u64(100), 1.0);
    }

    #[test]
    fn large_block_is_finite() {
        let m = UHitModel::new(700, 2, 0.965).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = m.sample(&mut rng).unwrap();
        assert!(bigutil::log2(&u) < 40.0);
        let s = m.survival_exact(&(BigUint::one() << 24usize));
        assert!((s - m.survival_approx(&(BigUint::one() << 24usize))).abs() < 1e-9);
    }
}
