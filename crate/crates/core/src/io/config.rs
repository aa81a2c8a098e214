use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize};

use crate::diagnostics::SyntheticLaw;
use crate::error::{Error, Result};
use crate::lp::DyadicPartition;
use crate::mollify::MIN_DIAMETER_CELLS;
use crate::solver::{DtMode, InitialCondition, NonlinearForm, StepPolicy, DEFAULT_CFL};
use crate::spectral::{Grid, ZeroModePolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Simulate,
    FluxScan,
    CommutatorScan,
    Analyze,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::FluxScan => "flux-scan",
            Mode::CommutatorScan => "commutator-scan",
            Mode::Analyze => "analyze",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    #[default]
    F64,
    F32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DtPolicyKind {
    #[default]
    Cfl,
    Fixed,
}

fn default_cfl() -> f64 {
    DEFAULT_CFL
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DtConfig {
    #[serde(default)]
    pub policy: DtPolicyKind,
    /// Step size for the fixed policy.
    #[serde(default)]
    pub value: Option<f64>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    /// Fail instead of stepping when a fixed dt violates the CFL bound.
    #[serde(default)]
    pub strict: bool,
}

impl Default for DtConfig {
    fn default() -> Self {
        Self {
            policy: DtPolicyKind::Cfl,
            value: None,
            cfl: DEFAULT_CFL,
            strict: false,
        }
    }
}

fn default_norms() -> Vec<f64> {
    vec![2.0, 4.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Time between diagnostic records; t = 0 and the horizon are always
    /// recorded.
    #[serde(default)]
    pub interval: Option<f64>,
    /// L^p norms reported per record.
    #[serde(default = "default_norms")]
    pub p: Vec<f64>,
    /// Shells N at which the p = 2 energy flux Π_N is reported.
    #[serde(default)]
    pub flux_levels: Vec<i32>,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            interval: None,
            p: default_norms(),
            flux_levels: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanScale {
    /// Littlewood-Paley cutoff S_N, scanned over N.
    #[default]
    Shell,
    /// Standard mollifier, scanned over ε.
    Mollifier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FluxQuantity {
    #[default]
    Energy,
    Helicity,
}

fn default_scan_p() -> Vec<f64> {
    vec![2.0]
}

fn default_flat() -> f64 {
    0.15
}

fn two() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    /// Empty means the top-level `gamma`.
    #[serde(default)]
    pub gamma: Vec<f64>,
    #[serde(default)]
    pub alpha: Vec<f64>,
    #[serde(default = "default_scan_p")]
    pub p: Vec<f64>,
    #[serde(default)]
    pub scale: ScanScale,
    /// Shells N; empty means every diagnostic shell.
    #[serde(default)]
    pub levels: Vec<i32>,
    /// Mollifier scales; empty means the resolved members of 2^{−m}·2π,
    /// m = 3..8.
    #[serde(default)]
    pub eps: Vec<f64>,
    /// Inclusive range of scale values used by slope fits. Defaults to the
    /// middle of the scanned range.
    #[serde(default)]
    pub fit: Option<[f64; 2]>,
    #[serde(default)]
    pub quantity: FluxQuantity,
    /// Calibration exponent of synthetic fields; defaults to p + 1 for flux
    /// scans and `q` for commutator scans.
    #[serde(default)]
    pub norm_exponent: Option<f64>,
    #[serde(default)]
    pub law: SyntheticLaw,
    /// Smallest decay rate counted as decay by the verdict.
    #[serde(default = "default_flat")]
    pub flat_tolerance: f64,
    /// (α, β) pairs of commutator scans; empty means (α, α) for each α.
    #[serde(default)]
    pub pairs: Vec<[f64; 2]>,
    /// Lebesgue exponent of commutator-scan norms.
    #[serde(default = "two")]
    pub q: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self {
            gamma: Vec::new(),
            alpha: Vec::new(),
            p: default_scan_p(),
            scale: ScanScale::Shell,
            levels: Vec::new(),
            eps: Vec::new(),
            fit: None,
            quantity: FluxQuantity::Energy,
            norm_exponent: None,
            law: SyntheticLaw::default(),
            flat_tolerance: default_flat(),
            pairs: Vec::new(),
            q: 2.0,
        }
    }
}

/// Everything needed to reproduce one invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub n: usize,
    pub gamma: f64,
    #[serde(default)]
    pub horizon: f64,
    #[serde(default)]
    pub dt: DtConfig,
    /// Either a full object or the bare kind name, e.g. `"steady_mode"`.
    #[serde(default, deserialize_with = "ic_shorthand")]
    pub ic: Option<InitialCondition>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub checkpoint_interval: Option<f64>,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub filter: bool,
    #[serde(default)]
    pub zero_mode: ZeroModePolicy,
    #[serde(default)]
    pub form: NonlinearForm,
    #[serde(default)]
    pub precision: Precision,
}

fn ic_shorthand<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Option<InitialCondition>, D::Error> {
    use serde::de::Error as _;
    let v = Option::<serde_json::Value>::deserialize(d)?;
    let v = match v {
        None | Some(serde_json::Value::Null) => return Ok(None),
        Some(serde_json::Value::String(kind)) => serde_json::json!({ "kind": kind }),
        Some(other) => other,
    };
    serde_json::from_value(v)
        .map(Some)
        .map_err(D::Error::custom)
}

/// Reads and validates a JSON config file.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let config: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(path, e.into_inner().to_string())
    })?;
    config.validate()?;
    Ok(config)
}

fn bad(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::config(path, msg)
}

fn check_range(path: &str, v: f64, ok: bool, range: &str) -> Result<()> {
    if ok && v.is_finite() {
        Ok(())
    } else {
        Err(bad(path, format!("{v} outside {range}")))
    }
}

fn check_gamma(path: &str, g: f64) -> Result<()> {
    check_range(path, g, (0.0..=2.0).contains(&g), "[0, 2]")
}

impl RunConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n).map_err(|e| bad("n", e.to_string()))
    }

    pub fn step_policy(&self) -> StepPolicy {
        StepPolicy {
            dt: match self.dt.policy {
                DtPolicyKind::Cfl => DtMode::Cfl,
                DtPolicyKind::Fixed => DtMode::Fixed(self.dt.value.unwrap_or(0.0)),
            },
            cfl_number: self.dt.cfl,
            filter: self.filter,
            strict_cfl: self.dt.strict,
            form: self.form,
        }
    }

    /// γ values of a scan.
    pub fn scan_gammas(&self) -> Vec<f64> {
        if self.scan.gamma.is_empty() {
            vec![self.gamma]
        } else {
            self.scan.gamma.clone()
        }
    }

    /// Whether the run draws random numbers.
    pub fn is_stochastic(&self) -> bool {
        match (&self.ic, self.mode) {
            (Some(ic), _) => ic.is_stochastic(),
            (None, Mode::FluxScan | Mode::CommutatorScan) => true,
            (None, _) => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let grid = self.grid()?;
        check_gamma("gamma", self.gamma)?;
        check_range("horizon", self.horizon, self.horizon >= 0.0, "[0, inf)")?;
        check_range(
            "dt.cfl",
            self.dt.cfl,
            self.dt.cfl > 0.0 && self.dt.cfl < 1.0,
            "(0, 1)",
        )?;
        match (self.dt.policy, self.dt.value) {
            (DtPolicyKind::Fixed, None) => {
                return Err(bad("dt.value", "required for the fixed policy"))
            }
            (DtPolicyKind::Fixed, Some(v)) => check_range("dt.value", v, v > 0.0, "(0, inf)")?,
            (DtPolicyKind::Cfl, Some(_)) => {
                return Err(bad("dt.value", "only valid with the fixed policy"))
            }
            (DtPolicyKind::Cfl, None) => {}
        }
        if let Some(ic) = &self.ic {
            validate_ic(ic, grid)?;
        } else if matches!(self.mode, Mode::Simulate | Mode::Analyze) {
            return Err(bad("ic", format!("required in {} mode", self.mode.name())));
        }
        if self.is_stochastic() && self.seed.is_none() {
            return Err(bad("seed", "required for stochastic fields"));
        }
        if let Some(dt) = self.diagnostics.interval {
            check_range("diagnostics.interval", dt, dt > 0.0, "(0, inf)")?;
        }
        for (i, &p) in self.diagnostics.p.iter().enumerate() {
            check_range(&format!("diagnostics.p[{i}]"), p, p >= 1.0, "[1, inf)")?;
        }
        let partition = DyadicPartition::<f64>::new(grid).map_err(|e| bad("n", e.to_string()))?;
        let (lo, hi) = (partition.jmin(), partition.jtop() + 1);
        for (i, &l) in self.diagnostics.flux_levels.iter().enumerate() {
            if l < lo || l > hi {
                return Err(bad(
                    format!("diagnostics.flux_levels[{i}]"),
                    format!("{l} outside [{lo}, {hi}]"),
                ));
            }
        }
        if let Some(c) = self.checkpoint_interval {
            check_range("checkpoint_interval", c, c > 0.0, "(0, inf)")?;
        }
        self.validate_scan(grid, lo, hi)
    }

    fn validate_scan(&self, grid: Grid, lo: i32, hi: i32) -> Result<()> {
        let s = &self.scan;
        for (i, &g) in s.gamma.iter().enumerate() {
            check_gamma(&format!("scan.gamma[{i}]"), g)?;
        }
        for (i, &a) in s.alpha.iter().enumerate() {
            check_range(&format!("scan.alpha[{i}]"), a, a > 0.0 && a < 2.0, "(0, 2)")?;
        }
        let p_min = if self.mode == Mode::FluxScan {
            2.0
        } else {
            1.0
        };
        for (i, &p) in s.p.iter().enumerate() {
            check_range(
                &format!("scan.p[{i}]"),
                p,
                p >= p_min,
                if p_min == 2.0 { "[2, inf)" } else { "[1, inf)" },
            )?;
        }
        for (i, &l) in s.levels.iter().enumerate() {
            if l < lo || l > hi {
                return Err(bad(
                    format!("scan.levels[{i}]"),
                    format!("{l} outside [{lo}, {hi}]"),
                ));
            }
        }
        let dx = grid.spacing::<f64>();
        for (i, &e) in s.eps.iter().enumerate() {
            let path = format!("scan.eps[{i}]");
            check_range(
                &path,
                e,
                e > 0.0 && e < std::f64::consts::FRAC_PI_2,
                "(0, pi/2)",
            )?;
            if 2.0 * e / dx < MIN_DIAMETER_CELLS {
                return Err(bad(
                    path,
                    format!(
                        "{e} under-resolved: kernel spans {:.2} cells, need {MIN_DIAMETER_CELLS}",
                        2.0 * e / dx
                    ),
                ));
            }
        }
        if let Some([a, b]) = s.fit {
            if !(a < b) {
                return Err(bad("scan.fit", "expected [lo, hi] with lo < hi"));
            }
        }
        if let Some(q) = s.norm_exponent {
            check_range("scan.norm_exponent", q, q >= 1.0, "[1, inf)")?;
        }
        check_range(
            "scan.flat_tolerance",
            s.flat_tolerance,
            s.flat_tolerance >= 0.0,
            "[0, inf)",
        )?;
        check_range("scan.q", s.q, s.q >= 1.0, "[1, inf)")?;
        for (i, pair) in s.pairs.iter().enumerate() {
            for (k, &v) in pair.iter().enumerate() {
                check_range(
                    &format!("scan.pairs[{i}][{k}]"),
                    v,
                    v > 0.0 && v < 2.0,
                    "(0, 2)",
                )?;
            }
        }
        if let SyntheticLaw::Lacunary {
            mother_min,
            mother_max,
        } = s.law
        {
            if !(mother_min >= 1.0 && mother_max > mother_min) {
                return Err(bad("scan.law", "expected 1 <= mother_min < mother_max"));
            }
        }
        match self.mode {
            Mode::FluxScan if self.ic.is_none() && s.alpha.is_empty() => {
                Err(bad("scan.alpha", "required when no ic is given"))
            }
            Mode::CommutatorScan if s.pairs.is_empty() && s.alpha.is_empty() => {
                Err(bad("scan.pairs", "required (or scan.alpha)"))
            }
            _ => Ok(()),
        }
    }

    /// Mollifier scales of a scan, coarse to fine.
    pub fn scan_eps(&self) -> Result<Vec<f64>> {
        if !self.scan.eps.is_empty() {
            return Ok(self.scan.eps.clone());
        }
        let grid = self.grid()?;
        let dx = grid.spacing::<f64>();
        let list: Vec<f64> = (3..=8)
            .map(|m| std::f64::consts::TAU * (-(m as f64)).exp2())
            .filter(|&e| e < std::f64::consts::FRAC_PI_2 && 2.0 * e / dx >= MIN_DIAMETER_CELLS)
            .collect();
        if list.is_empty() {
            return Err(bad(
                "scan.eps",
                format!("no default scale is resolved at n = {}", self.n),
            ));
        }
        Ok(list)
    }

    /// Single-line JSON with every default filled in.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

fn validate_ic(ic: &InitialCondition, grid: Grid) -> Result<()> {
    let half = grid.n() as i64 / 2;
    match ic {
        InitialCondition::SteadyMode { k, amplitude }
        | InitialCondition::SingleMode { k, amplitude, .. } => {
            if *k == [0, 0] || k.iter().any(|c| c.abs() >= half) {
                return Err(bad(
                    "ic.k",
                    format!("{k:?} must be nonzero with |k_i| < {half}"),
                ));
            }
            check_range("ic.amplitude", *amplitude, true, "finite values")
        }
        InitialCondition::SmoothRandom { peak, rms } => {
            check_range("ic.peak", *peak, *peak > 0.0, "(0, inf)")?;
            check_range("ic.rms", *rms, *rms >= 0.0, "[0, inf)")
        }
        InitialCondition::Besov {
            alpha,
            norm_exponent,
            ..
        } => {
            check_range("ic.alpha", *alpha, *alpha > 0.0 && *alpha < 2.0, "(0, 2)")?;
            check_range(
                "ic.norm_exponent",
                *norm_exponent,
                *norm_exponent >= 1.0,
                "[1, inf)",
            )
        }
        InitialCondition::SpectralDump { .. }
        | InitialCondition::Checkpoint { .. }
        | InitialCondition::Zero => Ok(()),
    }
}
