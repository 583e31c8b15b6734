//! JSON reports. Keys come out sorted, so output is byte-stable.

use std::path::Path;

use orbitcount_core::powerfit::{last_decade_spread, ratio_diagnostic, CountSeries, FitReport};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Non-finite floats become `null`.
fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn fit_json(series: &CountSeries, fit: &FitReport) -> Value {
    let spread = last_decade_spread(&ratio_diagnostic(series, fit.alpha)).ok();
    json!({
        "alpha": num(fit.alpha),
        "c": num(fit.c),
        "alpha_stderr": num(fit.alpha_stderr),
        "r_squared": num(fit.r_squared),
        "window": [num(fit.window.0), num(fit.window.1)],
        "n_points": fit.n_points,
        "ratio_spread_last_decade": spread.map_or(Value::Null, num),
    })
}

pub fn exponent_json(series: &CountSeries, fit: &FitReport) -> Value {
    json!({
        "delta_hat": num(fit.alpha),
        "stderr": num(fit.alpha_stderr),
        "r_squared": num(fit.r_squared),
        "R_grid": series.grid().iter().map(|&r| num(r)).collect::<Vec<_>>(),
        "ball_counts": series.counts(),
    })
}

pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Write to `path`, or to stdout when no path is given.
pub fn emit(value: &Value, path: Option<&Path>) -> CliResult<()> {
    let text = render(value);
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use orbitcount_core::powerfit::fit_power_law;

    #[test]
    fn fit_report_keys() {
        let t: Vec<f64> = (1..=20).map(|k| (k * k) as f64).collect();
        let n: Vec<u64> = (1..=20u64).map(|k| k * k * k).collect();
        let s = CountSeries::new(t, n).unwrap();
        let fit = fit_power_law(&s, Some((1.0, 400.0))).unwrap();
        let v = fit_json(&s, &fit);
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            [
                "alpha",
                "alpha_stderr",
                "c",
                "n_points",
                "r_squared",
                "ratio_spread_last_decade",
                "window"
            ]
        );
        assert!((v["alpha"].as_f64().unwrap() - 1.5).abs() < 1e-12);
        assert_eq!(v["n_points"], 20);
        assert_eq!(render(&v), render(&fit_json(&s, &fit)));
    }

    #[test]
    fn non_finite_is_null() {
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(num(f64::INFINITY), Value::Null);
    }
}
