use serde::Serialize;

use super::exponents::{
    complexity_from, error_exponent_with, grandab_error_exponent_with, success_exponent_with,
};
use super::{critical_rate_x_star, grand_rate_function, supercritical_threshold_y_star};
use crate::guesswork::{rate_function_table_with, RateFunction, RateFunctionTable};
use crate::noise::NoiseModel;
use crate::parallel::Execution;
use crate::{ExtReal, Result};

/// Every exponent at a single rate, with the rate-function tables behind
/// them.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub model: String,
    pub rate: f64,
    pub h: f64,
    pub h_half: f64,
    pub h_min: f64,
    pub capacity: f64,
    pub delta: Option<f64>,
    pub i_n: RateFunctionTable,
    pub i_grand: Vec<ExtReal>,
    pub x_star: Option<f64>,
    pub y_star: Option<f64>,
    pub epsilon: ExtReal,
    pub s: ExtReal,
    pub epsilon_ab: Option<ExtReal>,
    pub grand_complexity_exp: f64,
    pub grandab_complexity_exp: f64,
}

pub fn exponent_report(
    model: &NoiseModel,
    r: f64,
    delta: Option<f64>,
    x_grid: &[f64],
) -> Result<ExponentReport> {
    let row = exponent_row(&RateFunction::new(model), r, delta)?;
    Ok(ExponentReport {
        model: model.describe(),
        rate: r,
        h: model.shannon_entropy_rate(),
        h_half: model.renyi_entropy_rate(0.5)?,
        h_min: model.min_entropy_rate(),
        capacity: row.capacity,
        delta,
        i_n: rate_function_table_with(model, x_grid, Execution::default())?,
        i_grand: grand_rate_function(model, r, x_grid)?,
        x_star: row.x_star,
        y_star: row.y_star,
        epsilon: row.epsilon,
        s: row.s,
        epsilon_ab: row.epsilon_ab,
        grand_complexity_exp: row.grand_complexity_exp,
        grandab_complexity_exp: row.grandab_complexity_exp,
    })
}

/// One line of an exponent sweep over rates.
#[derive(Clone, Debug, Serialize)]
pub struct ExponentRow {
    #[serde(rename = "R")]
    pub rate: f64,
    pub epsilon: ExtReal,
    pub s: ExtReal,
    #[serde(rename = "epsilon_AB")]
    pub epsilon_ab: Option<ExtReal>,
    pub grand_complexity_exp: f64,
    pub grandab_complexity_exp: f64,
    pub x_star: Option<f64>,
    pub y_star: Option<f64>,
    pub capacity: f64,
}

fn exponent_row(rf: &RateFunction, r: f64, delta: Option<f64>) -> Result<ExponentRow> {
    let model = rf.model();
    let (grand, grandab) = complexity_from(rf.h, rf.h_half, r, delta);
    Ok(ExponentRow {
        rate: r,
        epsilon: error_exponent_with(rf, r)?,
        s: success_exponent_with(rf, r)?,
        epsilon_ab: match delta {
            Some(d) if r < 1.0 - rf.h => Some(grandab_error_exponent_with(rf, r, d)?),
            Some(_) => Some(ExtReal::Finite(0.0)),
            None => None,
        },
        grand_complexity_exp: grand,
        grandab_complexity_exp: grandab,
        x_star: critical_rate_x_star(model),
        y_star: supercritical_threshold_y_star(model, r)?,
        capacity: 1.0 - rf.h,
    })
}

/// Exponents over a grid of rates, evaluated under `exec`.
pub fn exponent_rows(
    model: &NoiseModel,
    rates: &[f64],
    delta: Option<f64>,
    exec: Execution,
) -> Result<Vec<ExponentRow>> {
    if let Some(&r) = rates.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(crate::Error::InvalidArgument(format!("rate {r} not in [0, 1]")));
    }
    let rf = RateFunction::new(model);
    exec.map_indexed(rates.len(), |i| exponent_row(&rf, rates[i], delta))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_invariants() {
        let m = NoiseModel::bsc(0.1).unwrap();
        let grid: Vec<f64> = (0..=50).map(|i| i as f64 / 50.0).collect();
        let below = exponent_report(&m, 0.3, Some(0.05), &grid).unwrap();
        assert!(below.epsilon.to_f64() > 0.0 && below.s == ExtReal::Finite(0.0));
        assert_eq!(below.grand_complexity_exp, below.h_half.min(0.7));
        let above = exponent_report(&m, 0.8, None, &grid).unwrap();
        assert!(above.s.to_f64() > 0.0 && above.epsilon == ExtReal::Finite(0.0));
        assert!((above.grand_complexity_exp - 0.2).abs() < 1e-15);
        assert!(above.i_grand.iter().zip(&grid).all(|(v, &x)| x <= 0.2 || *v == ExtReal::Infinite));
        let json = serde_json::to_string(&above).unwrap();
        assert!(json.contains("\"inf\""));
    }

    #[test]
    fn sweep_is_policy_independent() {
        let m = NoiseModel::markov(0.002, 0.2).unwrap();
        let rates: Vec<f64> = (1..40).map(|i| i as f64 / 40.0).collect();
        let a = exponent_rows(&m, &rates, Some(0.1), Execution::Sequential).unwrap();
        let b = exponent_rows(&m, &rates, Some(0.1), Execution::Parallel).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
