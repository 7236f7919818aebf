use serde::Serialize;

use crate::noise::NoiseModel;
use crate::parallel::Execution;
use crate::{Error, ExtReal, Result};

/// Left end of the α search interval.
const ALPHA_FLOOR: f64 = -1.0 + 1e-9;
const ALPHA_CAP: f64 = 1e7;
const ALPHA_TOL: f64 = 1e-10;
/// Slack on the effective domain boundary `x ≤ H_0`.
const DOMAIN_EPS: f64 = 1e-12;

/// Scaled cumulant generating function of `log G(N^n)`:
/// `α·H_{1/(1+α)}` for `α > -1`, and `-H_min` for `α ≤ -1`.
pub fn scgf_lambda_n(model: &NoiseModel, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return 0.0;
    }
    if alpha <= -1.0 {
        return -model.min_entropy_rate();
    }
    let t = model.tilt(1.0 / (1.0 + alpha));
    t.log_max + (1.0 + alpha) * t.log_rest
}

/// `dΛ/dα`, zero for `α < -1`.
pub fn scgf_derivative(model: &NoiseModel, alpha: f64) -> f64 {
    if alpha <= -1.0 {
        return 0.0;
    }
    let beta = 1.0 / (1.0 + alpha);
    let t = model.tilt(beta);
    t.log_rest - beta * t.dlog_rest
}

/// Legendre-Fenchel transform of [`scgf_lambda_n`], the rate function of
/// `(1/n) log G(N^n)`.
#[derive(Clone, Debug)]
pub struct RateFunction {
    model: NoiseModel,
    /// Shannon entropy rate, the zero of the rate function.
    pub h: f64,
    pub h_half: f64,
    pub h_min: f64,
    /// `lim_{α↓-1} Λ'(α)`; the rate function is `H_min - x` on `[0, γ]`.
    pub gamma: f64,
    /// Log of the support size per symbol; the rate function is infinite
    /// above it.
    pub h0: f64,
}

/// Value of the transform and the `α` attaining it.
///
/// `alpha` is `None` when the value is infinite or the supremum is only
/// approached as `α → ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatePoint {
    pub value: ExtReal,
    pub alpha: Option<f64>,
}

impl RateFunction {
    pub fn new(model: &NoiseModel) -> Self {
        RateFunction {
            model: model.clone(),
            h: model.shannon_entropy_rate(),
            h_half: model.renyi_entropy_rate(0.5).expect("order 1/2 is valid"),
            h_min: model.min_entropy_rate(),
            gamma: scgf_derivative(model, ALPHA_FLOOR).max(0.0),
            h0: model.tilt(0.0).log_rest,
        }
    }

    pub fn model(&self) -> &NoiseModel {
        &self.model
    }

    pub fn lambda(&self, alpha: f64) -> f64 {
        scgf_lambda_n(&self.model, alpha)
    }

    pub fn lambda_derivative(&self, alpha: f64) -> f64 {
        scgf_derivative(&self.model, alpha)
    }

    pub fn eval(&self, x: f64) -> Result<ExtReal> {
        self.solve(x).map(|p| p.value)
    }

    /// `sup_α {xα - Λ(α)}` for `x ≥ 0`.
    pub fn solve(&self, x: f64) -> Result<RatePoint> {
        if !(x >= 0.0) {
            return Err(Error::Optimization {
                x,
                reason: "argument must be a non-negative number".into(),
            });
        }
        if x > 1.0 || x > self.h0 + DOMAIN_EPS {
            return Ok(RatePoint {
                value: ExtReal::Infinite,
                alpha: None,
            });
        }
        if x <= self.gamma {
            return Ok(RatePoint {
                value: ExtReal::Finite(self.h_min - x),
                alpha: Some(-1.0),
            });
        }
        if x >= self.h0 - DOMAIN_EPS {
            // Supremum approached as α → ∞; expand log ρ(β) to first order
            // at β = 0.
            let t = self.model.tilt(0.0);
            let v = self.h_min - self.h0 - t.dlog_rest;
            return Ok(RatePoint {
                value: ExtReal::Finite(v.max(0.0)),
                alpha: None,
            });
        }
        let mut hi = 1.0;
        while self.lambda_derivative(hi) < x {
            hi *= 2.0;
            if hi > ALPHA_CAP {
                hi = ALPHA_CAP;
                break;
            }
        }
        let objective = |a: f64| x * a - self.lambda(a);
        let alpha = golden_section_max(objective, ALPHA_FLOOR, hi, ALPHA_TOL);
        let value = objective(alpha);
        if !value.is_finite() {
            return Err(Error::Optimization {
                x,
                reason: format!("objective not finite at alpha = {alpha}"),
            });
        }
        Ok(RatePoint {
            value: ExtReal::Finite(value.max(0.0)),
            alpha: Some(alpha),
        })
    }
}

/// Maximizer of a unimodal function on `[a, b]`.
pub(crate) fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..400 {
        if b - a <= tol * (1.0 + a.abs().min(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    [(a, f(a)), (mid, f(mid)), (b, f(b)), (c, fc), (d, fd)]
        .into_iter()
        .fold((mid, f64::NEG_INFINITY), |best, (x, v)| if v > best.1 { (x, v) } else { best })
        .0
}

/// The rate function sampled on a grid, with the constants that shape it.
#[derive(Clone, Debug, Serialize)]
pub struct RateFunctionTable {
    pub x_grid: Vec<f64>,
    pub i_values: Vec<ExtReal>,
    pub gamma: f64,
    pub h: f64,
    pub h_half: f64,
    pub h_min: f64,
}

pub fn rate_function_table(model: &NoiseModel, x_grid: &[f64]) -> Result<RateFunctionTable> {
    rate_function_table_with(model, x_grid, Execution::default())
}

pub fn rate_function_table_with(
    model: &NoiseModel,
    x_grid: &[f64],
    exec: Execution,
) -> Result<RateFunctionTable> {
    if let Some(&x) = x_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::InvalidArgument(format!("grid point {x} outside [0, 1]")));
    }
    let rf = RateFunction::new(model);
    let i_values = exec
        .map_indexed(x_grid.len(), |i| rf.eval(x_grid[i]))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(RateFunctionTable {
        x_grid: x_grid.to_vec(),
        i_values,
        gamma: rf.gamma,
        h: rf.h,
        h_half: rf.h_half,
        h_min: rf.h_min,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force supremum over a dense α grid.
    fn grid_sup(model: &NoiseModel, x: f64) -> f64 {
        let mut best = f64::NEG_INFINITY;
        let mut a = -1.0;
        while a <= 60.0 {
            best = best.max(x * a - scgf_lambda_n(model, a));
            a += 1e-4;
        }
        best
    }

    #[test]
    fn lambda_examples() {
        let m = NoiseModel::bsc(0.1).unwrap();
        assert_eq!(scgf_lambda_n(&m, 0.0), 0.0);
        let fair = NoiseModel::bsc(0.5).unwrap();
        assert!((scgf_lambda_n(&fair, 2.0) - 2.0).abs() < 1e-14);
        let h_half = m.renyi_entropy_rate(0.5).unwrap();
        assert!((scgf_lambda_n(&m, 1.0) - h_half).abs() < 1e-14);
        assert_eq!(scgf_lambda_n(&m, -3.0), -m.min_entropy_rate());
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for m in [NoiseModel::bsc(0.1).unwrap(), NoiseModel::markov(0.05, 0.3).unwrap()] {
            for a in [-0.9, -0.5, 0.0, 0.7, 3.0, 20.0] {
                let h = 1e-6;
                let fd = (scgf_lambda_n(&m, a + h) - scgf_lambda_n(&m, a - h)) / (2.0 * h);
                let d = scgf_derivative(&m, a);
                assert!((fd - d).abs() < 1e-6, "{} alpha {a}: {fd} vs {d}", m.describe());
            }
        }
    }

    #[test]
    fn zero_at_entropy_and_min_entropy_at_origin() {
        for m in [
            NoiseModel::bsc(0.1).unwrap(),
            NoiseModel::bsc(0.01).unwrap(),
            NoiseModel::markov(0.1, 0.4).unwrap(),
            NoiseModel::iid(vec![0.5, 0.3, 0.2]).unwrap(),
        ] {
            let rf = RateFunction::new(&m);
            assert!(rf.eval(rf.h).unwrap().to_f64().abs() < 1e-9, "{}", m.describe());
            assert!((rf.eval(0.0).unwrap().to_f64() - rf.h_min).abs() < 1e-12);
        }
    }

    #[test]
    fn matches_dense_grid_supremum() {
        let m = NoiseModel::bsc(0.1).unwrap();
        let rf = RateFunction::new(&m);
        for x in [0.05, 0.2, 0.469, 0.6, 0.8, 0.95] {
            let got = rf.eval(x).unwrap().to_f64();
            let want = grid_sup(&m, x);
            assert!((got - want).abs() < 1e-6, "x {x}: {got} vs {want}");
        }
    }

    #[test]
    fn endpoint_and_infinite_region() {
        let m = NoiseModel::bsc(0.1).unwrap();
        let rf = RateFunction::new(&m);
        // Limit of α - Λ(α): -1 - (log2 p + log2 (1-p)) / 2.
        let want = -1.0 - (0.1f64.log2() + 0.9f64.log2()) / 2.0;
        assert!((rf.eval(1.0).unwrap().to_f64() - want).abs() < 1e-12);
        // I'(x) grows like (1 - x)^(-1/2) at the edge.
        let near = rf.eval(1.0 - 1e-7).unwrap().to_f64();
        assert!(near < want && want - near < 1e-2, "{near}");
        assert_eq!(rf.eval(1.01).unwrap(), ExtReal::Infinite);
        let restricted = NoiseModel::iid(vec![0.7, 0.3, 0.0]).unwrap();
        let rf = RateFunction::new(&restricted);
        assert!((rf.h0 - 2f64.ln() / 3f64.ln()).abs() < 1e-15);
        assert_eq!(rf.eval(0.9).unwrap(), ExtReal::Infinite);
        assert!(rf.eval(-0.1).is_err());
    }

    #[test]
    fn uniform_noise_is_linear() {
        let rf = RateFunction::new(&NoiseModel::bsc(0.5).unwrap());
        assert!((rf.gamma - 1.0).abs() < 1e-12);
        for x in [0.0, 0.3, 1.0] {
            assert!((rf.eval(x).unwrap().to_f64() - (1.0 - x)).abs() < 1e-12);
        }
    }

    #[test]
    fn ties_in_the_mode_give_a_linear_piece() {
        // Two most likely symbols: γ = log_3 2.
        let m = NoiseModel::iid(vec![0.4, 0.4, 0.2]).unwrap();
        let rf = RateFunction::new(&m);
        assert!((rf.gamma - 2f64.ln() / 3f64.ln()).abs() < 1e-8);
        let x = 0.5 * rf.gamma;
        assert!((rf.eval(x).unwrap().to_f64() - (rf.h_min - x)).abs() < 1e-12);
    }

    #[test]
    fn table_is_convex() {
        let grid: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        for m in [NoiseModel::bsc(0.1).unwrap(), NoiseModel::markov(0.02, 0.3).unwrap()] {
            let t = rate_function_table(&m, &grid).unwrap();
            let v: Vec<f64> = t.i_values.iter().map(|v| v.to_f64()).collect();
            for w in v.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-9, "{w:?}");
            }
        }
        assert!(rate_function_table(&NoiseModel::bsc(0.1).unwrap(), &[1.5]).is_err());
    }
}
