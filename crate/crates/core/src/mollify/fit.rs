use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares power law value ≈ C·scale^slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub scales: Vec<f64>,
    pub values: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
}

impl RateFit {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain numeric record")
    }
}

/// Fits log(value) against log(scale). Requires at least four strictly
/// decreasing scales spanning two octaves and positive values.
pub fn fit_rate(scales: &[f64], values: &[f64]) -> Result<RateFit> {
    if scales.len() != values.len() {
        return Err(Error::RateFit(format!(
            "{} scales but {} values",
            scales.len(),
            values.len()
        )));
    }
    if scales.len() < 4 {
        return Err(Error::RateFit("need at least 4 scales".into()));
    }
    if scales.windows(2).any(|w| !(w[1] < w[0])) || scales.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::RateFit(
            "scales must be positive and strictly decreasing".into(),
        ));
    }
    if scales[0] / scales[scales.len() - 1] < 4.0 * (1.0 - 1e-12) {
        return Err(Error::RateFit("scales must span at least 2 octaves".into()));
    }
    if let Some(v) = values.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::RateFit(format!("nonpositive value {v}")));
    }
    let x: Vec<f64> = scales.iter().map(|s| s.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (slope, r2) = least_squares(&x, &y);
    if !slope.is_finite() {
        return Err(Error::RateFit("non-finite slope".into()));
    }
    Ok(RateFit {
        scales: scales.to_vec(),
        values: values.to_vec(),
        slope,
        r2,
    })
}

/// Slope and coefficient of determination of y against x.
pub fn least_squares(x: &[f64], y: &[f64]) -> (f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let icpt = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - icpt - slope * a).powi(2))
        .sum();
    let ss_tot: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let r2 = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, r2)
}
