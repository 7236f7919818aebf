//! Statistical checks of the simulator against closed forms and against
//! itself across modes.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use grand::analysis::{bsc_block_error_fine, expected_queries_fine};
use grand::codebook::{Codebook, ExplicitCodebook, InfoWord, LinearCodebook, UHitModel};
use grand::decoder::grand_decode;
use grand::guesswork::{GuessEnumerator, GuessRanker};
use grand::simulator::{derive_seed, simulate, Abandonment, Mode, SimConfig};
use grand::word::{add, subtract};
use grand::NoiseModel;

fn z_score(observed: f64, expected: f64, trials: u64) -> f64 {
    (observed - expected) / (expected * (1.0 - expected) / trials as f64).sqrt()
}

/// Exact success probability for a codebook of `m` words drawn with
/// replacement: `m - 1` competitors uniform on the `N` ranks, a competitor at
/// the transmitted rank winning half the time.
fn exact_success(model: &NoiseModel, n: usize, m: f64) -> f64 {
    let space = (n as f64).exp2();
    let clear = |g: f64| (1.0 - g / space).powf(m - 1.0);
    GuessEnumerator::new(model, n)
        .unwrap()
        .enumerate()
        .map(|(i, g)| {
            let r = i as f64 + 1.0;
            // P(U > r) + P(U = r) / 2, U the first competitor's rank.
            2f64.powf(g.log_prob) * 0.5 * (clear(r) + clear(r - 1.0))
        })
        .sum()
}

#[test]
fn small_codebooks_match_the_exact_law() {
    let bsc = NoiseModel::bsc(0.1).unwrap();
    let trials = 10_000;
    let want = 1.0 - exact_success(&bsc, 10, 8.0);
    for (mode, seed) in [(Mode::Explicit, 1), (Mode::Race, 2)] {
        let cfg = SimConfig::new(bsc.clone(), 10, 0.3, trials, mode, seed).with_codebooks(trials);
        let r = simulate(&cfg).unwrap();
        let z = z_score(r.block_error_rate, want, trials);
        assert!(z.abs() < 3.0, "{mode:?}: {} vs {want} (z = {z})", r.block_error_rate);
    }
    // The fine approximation counts every codeword as a competitor, which
    // overstates the error at this size.
    assert!(bsc_block_error_fine(10, 0.3, 0.1).unwrap() > want);
}

#[test]
fn race_mode_reproduces_the_fine_approximation() {
    let bsc = NoiseModel::bsc(0.01).unwrap();
    let r = simulate(&SimConfig::new(bsc, 75, 0.72, 100_000, Mode::Race, 3)).unwrap();
    let want = bsc_block_error_fine(75, 0.72, 0.01).unwrap();
    assert!(z_score(r.block_error_rate, want, r.trials).abs() < 3.0);
    let q = expected_queries_fine(75, 0.72, 0.01, None).unwrap();
    assert!((r.avg_queries_per_bit - q).abs() / q < 0.2, "{} vs {q}", r.avg_queries_per_bit);
    assert!((r.block_error_rate + r.success_rate - 1.0).abs() < 1e-15);
}

#[test]
fn automatic_abandonment_stays_near_its_target() {
    let bsc = NoiseModel::bsc(0.01).unwrap();
    let cfg = SimConfig::new(bsc, 75, 0.72, 50_000, Mode::Race, 4)
        .with_abandonment(Abandonment::Auto { p_abandon: 0.01 });
    let r = simulate(&cfg).unwrap();
    let target = 0.01 * 0.75;
    assert!(r.abandonment_rate <= 1.5 * target, "{}", r.abandonment_rate);
    assert!(r.abandonment_threshold.unwrap() > 1 && r.delta.unwrap() > 0.0);
}

#[test]
fn linear_ensemble_tracks_the_uniform_one() {
    let bsc = NoiseModel::bsc(0.01).unwrap();
    let r = simulate(&SimConfig::new(bsc, 75, 54.0 / 75.0, 4000, Mode::Linear, 5)).unwrap();
    let want = bsc_block_error_fine(75, 0.72, 0.01).unwrap();
    assert!(r.block_error_rate > want / 2.0 && r.block_error_rate < want * 2.0, "{}", r.block_error_rate);
}

#[test]
fn hamming_code_fails_only_on_double_flips() {
    let rows: Vec<Vec<u8>> = ["1000011", "0100101", "0010110", "0001111"]
        .iter()
        .map(|r| r.bytes().map(|b| b - b'0').collect())
        .collect();
    let code = LinearCodebook::from_generator(&rows).unwrap();
    let cb = Codebook::from(code.clone());
    let bsc = NoiseModel::bsc(0.01).unwrap();
    let trials = 200_000u64;
    let mut errors = 0;
    for t in 0..trials {
        let s = derive_seed(77, t);
        let bits: Vec<u8> = (0..4).map(|i| ((s >> i) & 1) as u8).collect();
        let x = code.encode_bits(&bits);
        let noise = bsc.sample_noise(7, s);
        let d = grand_decode(&cb, &add(&x, &noise, 2), &bsc).unwrap();
        let weight = noise.iter().filter(|&&b| b == 1).count();
        let ok = code.decode_to_info(&d.decoded.unwrap()).unwrap() == bits;
        assert_eq!(ok, weight <= 1);
        errors += (!ok) as u64;
    }
    let want = 1.0 - 0.99f64.powi(7) - 7.0 * 0.01 * 0.99f64.powi(6);
    assert!((want - 2.0e-3).abs() < 1e-4);
    assert!(z_score(errors as f64 / trials as f64, want, trials).abs() < 3.0);
}

#[test]
fn guesswork_exponent_approaches_entropy() {
    let bsc = NoiseModel::bsc(0.1).unwrap();
    let h = bsc.shannon_entropy_rate();
    let gaps: Vec<f64> = [64, 256, 1024]
        .iter()
        .map(|&n| {
            let ranker = GuessRanker::new(&bsc, n).unwrap();
            let samples = 200;
            let mean: f64 = (0..samples)
                .map(|i| {
                    let z = bsc.sample_noise(n, derive_seed(n as u64, i));
                    let g = ranker.rank(&z).unwrap();
                    g.bits() as f64 - 1.0 + frac_log2(&g)
                })
                .sum::<f64>()
                / samples as f64;
            (mean / n as f64 - h).abs()
        })
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] <= w[0]), "{gaps:?}");
}

/// `log2(g) - floor(log2(g))` from the leading bits.
fn frac_log2(g: &num_bigint::BigUint) -> f64 {
    let shift = g.bits().saturating_sub(53);
    let top = (g >> shift).to_u64_digits().first().copied().unwrap_or(0) as f64;
    top.log2() - (top.log2().floor())
}

#[test]
fn competitor_positions_are_uniform() {
    let bsc = NoiseModel::bsc(0.1).unwrap();
    let ranker = GuessRanker::new(&bsc, 10).unwrap();
    let mut deciles = [0u64; 10];
    for c in 0..200u64 {
        let cb = ExplicitCodebook::uniform(10, 2, 0.5, derive_seed(9, c)).unwrap();
        let x = cb.encode(&InfoWord::Index(0)).unwrap();
        let y = add(&x, &bsc.sample_noise(10, c), 2);
        for i in 1..cb.len() {
            let w = cb.word(i).unwrap();
            let g = u64::try_from(&ranker.rank(&subtract(&y, w, 2)).unwrap()).unwrap();
            deciles[((g - 1) * 10 / 1024) as usize] += 1;
        }
    }
    let total: u64 = deciles.iter().sum();
    let expected: Vec<f64> = (0..10)
        .map(|d| {
            // Decile d holds ranks with floor((g-1)·10/1024) = d.
            let count = (1..=1024u64).filter(|g| ((g - 1) * 10 / 1024) as usize == d).count();
            total as f64 * count as f64 / 1024.0
        })
        .collect();
    let chi2: f64 = deciles.iter().zip(&expected).map(|(&o, &e)| (o as f64 - e).powi(2) / e).sum();
    // 1% critical value with 9 degrees of freedom.
    assert!(chi2 < 21.67, "{chi2} {deciles:?}");
}

#[test]
fn race_and_explicit_query_counts_agree() {
    let bsc = NoiseModel::bsc(0.1).unwrap();
    let (n, rate, trials) = (10, 0.5, 4000u64);
    let mut explicit: Vec<u64> = (0..trials)
        .map(|t| {
            let cb = Codebook::from(ExplicitCodebook::uniform(n, 2, rate, t).unwrap());
            let x = cb.encode(&InfoWord::Index(t % 32)).unwrap();
            let y = add(&x, &bsc.sample_noise(n, derive_seed(3, t)), 2);
            grand_decode(&cb, &y, &bsc).unwrap().queries
        })
        .collect();
    let ranker = GuessRanker::new(&bsc, n).unwrap();
    let uhit = UHitModel::competitors(n, 2, rate).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut race: Vec<u64> = (0..trials)
        .map(|t| {
            let g = ranker.rank(&bsc.sample_noise(n, derive_seed(5, t))).unwrap();
            let u = uhit.sample(&mut rng).unwrap();
            u64::try_from(&g.min(u)).unwrap()
        })
        .collect();
    explicit.sort_unstable();
    race.sort_unstable();
    let cdf = |v: &[u64], x: u64| v.partition_point(|&q| q <= x) as f64 / v.len() as f64;
    let d = (1..=1024u64).map(|x| (cdf(&explicit, x) - cdf(&race, x)).abs()).fold(0.0, f64::max);
    let crit = 1.628 * (2.0 / trials as f64).sqrt();
    assert!(d < crit, "KS distance {d} vs {crit}");
}
