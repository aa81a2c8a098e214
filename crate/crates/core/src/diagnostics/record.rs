use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Header of flux series files.
pub const FLUX_CSV_HEADER: &str = "time,scale,p,gamma,alpha,term_I,term_II,term_III,total,bound";

/// One flux evaluation.
///
/// For energy fluxes `terms` holds the x₁ and x₂ contributions (third term
/// empty); for helicity fluxes it holds I, II and III.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluxRecord {
    pub time: f64,
    /// N for Littlewood-Paley fluxes, ε for mollified ones.
    pub scale: f64,
    pub p: f64,
    pub gamma: f64,
    pub alpha: Option<f64>,
    pub terms: [Option<f64>; 3],
    pub total: f64,
    pub bound: Option<f64>,
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl FluxRecord {
    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            self.time,
            self.scale,
            self.p,
            self.gamma,
            cell(self.alpha),
            cell(self.terms[0]),
            cell(self.terms[1]),
            cell(self.terms[2]),
            self.total,
            cell(self.bound)
        );
        s
    }

    /// |Σ terms − total| relative to the largest term (0 if all vanish).
    pub fn decomposition_defect(&self) -> f64 {
        let terms: Vec<f64> = self.terms.iter().flatten().copied().collect();
        let big = terms.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        if big == 0.0 {
            return self.total.abs();
        }
        (terms.iter().sum::<f64>() - self.total).abs() / big
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_has_ten_cells() {
        let r = FluxRecord {
            time: 0.0,
            scale: 3.0,
            p: 2.0,
            gamma: 1.0,
            alpha: None,
            terms: [Some(1.0), Some(-0.5), None],
            total: 0.5,
            bound: None,
        };
        assert_eq!(r.csv_row(), "0,3,2,1,,1,-0.5,,0.5,");
        assert_eq!(
            r.csv_row().split(',').count(),
            FLUX_CSV_HEADER.split(',').count()
        );
        assert_eq!(r.decomposition_defect(), 0.0);
    }
}
