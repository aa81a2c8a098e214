//! Run configuration, output files and the experiment driver.

mod config;
mod execute;
mod series;

pub use config::{
    parse_config, parse_config_str, DiagnosticsConfig, DtConfig, DtPolicyKind, FluxQuantity, Mode,
    Precision, RunConfig, ScanConfig, ScanScale,
};
pub use execute::{execute, ExecReport, CN_TOLERANCE};
pub use series::{DiagnosticSeries, SeriesMetadata, CODE_VERSION};
