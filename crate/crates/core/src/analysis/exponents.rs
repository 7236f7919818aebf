use crate::guesswork::rate::golden_section_max;
use crate::guesswork::{scgf_derivative, RateFunction};
use crate::noise::NoiseModel;
use crate::{Error, ExtReal, Result};

const SEARCH_TOL: f64 = 1e-12;

fn check_rate(r: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("rate {r} not in [0, 1]")));
    }
    Ok(())
}

/// Rate function of `(1/n) log U^n`: `1 - R - x` on `[0, 1-R]`, infinite
/// elsewhere.
pub fn rate_function_i_u(r: f64, x: f64) -> ExtReal {
    if (0.0..=1.0 - r).contains(&x) {
        ExtReal::Finite(1.0 - r - x)
    } else {
        ExtReal::Infinite
    }
}

/// `1 - H`.
pub fn capacity(model: &NoiseModel) -> f64 {
    1.0 - model.shannon_entropy_rate()
}

/// Smallest root of a non-decreasing `f` on `[lo, hi]` with `f(lo) < 0 <= f(hi)`.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Error exponent `ε(R) = inf_{a ∈ [H, 1-R]} {I^U(a) + I^N(a)}`, found by
/// minimizing the convex objective numerically; zero at and above capacity.
pub fn error_exponent(model: &NoiseModel, r: f64) -> Result<ExtReal> {
    check_rate(r)?;
    let rf = RateFunction::new(model);
    error_exponent_with(&rf, r)
}

pub(crate) fn error_exponent_with(rf: &RateFunction, r: f64) -> Result<ExtReal> {
    let (lo, hi) = (rf.h, 1.0 - r);
    if hi <= lo {
        return Ok(ExtReal::Finite(0.0));
    }
    let objective = |a: f64| -> f64 {
        match rf.eval(a) {
            Ok(v) => -(1.0 - r - a + v.to_f64()),
            Err(_) => f64::NEG_INFINITY,
        }
    };
    let a = golden_section_max(objective, lo, hi, SEARCH_TOL);
    let v = -objective(a);
    if v.is_nan() {
        return Err(Error::Optimization {
            x: a,
            reason: "error exponent objective is NaN".into(),
        });
    }
    Ok(ExtReal::from(v.max(0.0)))
}

/// The closed piecewise form of the error exponent, available when `x*`
/// exists: `1 - R - H_{1/2}` below the critical rate `1 - x*`, and
/// `I^N(1 - R)` from there up to capacity.
pub fn error_exponent_piecewise(model: &NoiseModel, r: f64) -> Result<Option<ExtReal>> {
    check_rate(r)?;
    let rf = RateFunction::new(model);
    let Some(x_star) = critical_rate_x_star(model) else {
        return Ok(None);
    };
    if r >= 1.0 - rf.h {
        return Ok(Some(ExtReal::Finite(0.0)));
    }
    if r < 1.0 - x_star {
        Ok(Some(ExtReal::Finite(1.0 - r - rf.h_half)))
    } else {
        rf.eval(1.0 - r).map(Some)
    }
}

/// Success exponent `s(R) = I^N(1-R)` above capacity, zero at and below.
pub fn success_exponent(model: &NoiseModel, r: f64) -> Result<ExtReal> {
    check_rate(r)?;
    let rf = RateFunction::new(model);
    success_exponent_with(&rf, r)
}

pub(crate) fn success_exponent_with(rf: &RateFunction, r: f64) -> Result<ExtReal> {
    if r <= 1.0 - rf.h {
        return Ok(ExtReal::Finite(0.0));
    }
    rf.eval(1.0 - r)
}

/// The point `x*` where the slope of `I^N` equals one.
///
/// The slope of `I^N` at `Λ'(α)` is `α`, so `x* = Λ'(1)`. It is absent when
/// that point lies on the linear piece `[0, γ]`, as for uniform noise.
pub fn critical_rate_x_star(model: &NoiseModel) -> Option<f64> {
    let rf = RateFunction::new(model);
    let x = scgf_derivative(model, 1.0);
    (x > rf.gamma + 1e-12 && x < rf.h0).then_some(x)
}

/// `ε^AB(R) = min(ε(R), I^N(H + δ))`; zero at and above capacity.
pub fn grandab_error_exponent(model: &NoiseModel, r: f64, delta: f64) -> Result<ExtReal> {
    check_rate(r)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let rf = RateFunction::new(model);
    grandab_error_exponent_with(&rf, r, delta)
}

pub(crate) fn grandab_error_exponent_with(rf: &RateFunction, r: f64, delta: f64) -> Result<ExtReal> {
    let eps = error_exponent_with(rf, r)?;
    let floor = rf.eval(rf.h + delta)?;
    Ok(eps.min(floor))
}

/// Exponents of the average number of guesses for GRAND and GRANDAB:
/// `min(H_{1/2}, 1-R)` below capacity and `1-R` above it, with GRANDAB
/// further capped at `H + δ`.
pub fn complexity_exponents(model: &NoiseModel, r: f64, delta: Option<f64>) -> Result<(f64, f64)> {
    check_rate(r)?;
    let h = model.shannon_entropy_rate();
    let h_half = model.renyi_entropy_rate(0.5)?;
    Ok(complexity_from(h, h_half, r, delta))
}

pub(crate) fn complexity_from(h: f64, h_half: f64, r: f64, delta: Option<f64>) -> (f64, f64) {
    let grand = if r < 1.0 - h { h_half.min(1.0 - r) } else { 1.0 - r };
    let grandab = match delta {
        Some(d) => grand.min(h + d),
        None => grand,
    };
    (grand, grandab)
}

/// Rate function of `(1/n) log D^n` for GRAND: `I^N` on `[0, 1-R]` below
/// capacity, `min(I^N, I^U)` there above capacity, infinite beyond `1-R`.
pub fn grand_rate_function(model: &NoiseModel, r: f64, x_grid: &[f64]) -> Result<Vec<ExtReal>> {
    check_rate(r)?;
    let rf = RateFunction::new(model);
    let below = r < 1.0 - rf.h;
    x_grid
        .iter()
        .map(|&x| {
            if x > 1.0 - r {
                return Ok(ExtReal::Infinite);
            }
            let i_n = rf.eval(x)?;
            Ok(if below { i_n } else { i_n.min(rate_function_i_u(r, x)) })
        })
        .collect()
}

/// `y* = sup{y < 1-R : I^N(y) < I^U(y)}`.
///
/// On `[0, 1-R]`, `I^N(y) - I^U(y) = I^N(y) + y - (1-R)` is non-decreasing,
/// so the supremum is its root; it exists exactly when `R < 1 - H_min`.
pub fn supercritical_threshold_y_star(model: &NoiseModel, r: f64) -> Result<Option<f64>> {
    check_rate(r)?;
    let rf = RateFunction::new(model);
    if r >= 1.0 - rf.h_min {
        return Ok(None);
    }
    let gap = |y: f64| rf.eval(y).map(|v| v.to_f64()).unwrap_or(f64::INFINITY) + y - (1.0 - r);
    Ok(Some(bisect(gap, 0.0, 1.0 - r, SEARCH_TOL)))
}

/// Solve `|A|^{-n I^N(H+δ)} = p_abandon · min(p n, 1)` for `δ > 0`.
pub fn select_delta(model: &NoiseModel, n: usize, p_abandon: f64, p: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("block length must be at least 1".into()));
    }
    if !(p_abandon > 0.0 && p_abandon < 1.0) || !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "need p_abandon in (0, 1) and p in [0, 1], got {p_abandon} and {p}"
        )));
    }
    let rf = RateFunction::new(model);
    let ln_q = (model.alphabet_size() as f64).ln();
    let target = -(p_abandon * (p * n as f64).min(1.0)).ln() / ln_q / n as f64;
    let top = rf.h0.min(1.0);
    let max = rf.eval(top)?.to_f64();
    if !(target > 0.0) || target > max {
        return Err(Error::UnattainableTarget { target, max });
    }
    let f = |x: f64| rf.eval(x).map(|v| v.to_f64()).unwrap_or(f64::INFINITY) - target;
    let x = bisect(f, rf.h, top, 1e-13);
    Ok(x - rf.h)
}

/// Largest rate below capacity at which the approximate block error
/// `|A|^{-n ε(R)}` (or `|A|^{-n ε^AB(R)}` when `delta` is given) is at most
/// `p_block`; `None` if no rate qualifies.
pub fn max_achievable_rate(
    model: &NoiseModel,
    n: usize,
    p_block: f64,
    delta: Option<f64>,
) -> Result<Option<f64>> {
    if n == 0 || !(p_block > 0.0 && p_block < 1.0) {
        return Err(Error::InvalidArgument(format!("need n >= 1 and p_block in (0, 1), got {n}, {p_block}")));
    }
    let rf = RateFunction::new(model);
    let ln_q = (model.alphabet_size() as f64).ln();
    let needed = -p_block.ln() / ln_q / n as f64;
    let exponent = |r: f64| -> f64 {
        let e = match delta {
            Some(d) => grandab_error_exponent_with(&rf, r, d),
            None => error_exponent_with(&rf, r),
        };
        e.map(|v| v.to_f64()).unwrap_or(0.0)
    };
    let cap = 1.0 - rf.h;
    if cap <= 0.0 || exponent(0.0) < needed {
        return Ok(None);
    }
    // ε is non-increasing in R; find where it drops below `needed`.
    Ok(Some(bisect(|r| needed - exponent(r), 0.0, cap, 1e-12)))
}

/// [`max_achievable_rate`] as a fraction of capacity.
pub fn capacity_fraction(
    model: &NoiseModel,
    n: usize,
    p_block: f64,
    delta: Option<f64>,
) -> Result<Option<f64>> {
    Ok(max_achievable_rate(model, n, p_block, delta)?.map(|r| r / capacity(model)))
}

/// Rate at which brute-force ML, with complexity exponent `R`, becomes
/// costlier than GRAND: the solution of `R = min(1-R, H_{1/2})`.
pub fn brute_force_crossover_rate(model: &NoiseModel) -> Result<f64> {
    Ok(model.renyi_entropy_rate(0.5)?.min(0.5))
}
