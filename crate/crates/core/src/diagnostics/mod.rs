//! Conserved quantities, flux functionals, synthetic rough fields and
//! exponent scans.

mod energy;
mod flux;
mod record;
mod scan;
mod synthetic;

pub use energy::{helicity, lp_energy};
pub use flux::{
    energy_flux_lp, energy_flux_mollified, energy_flux_mollified_with, energy_flux_terms,
    flux_bound, helicity_flux_terms, CoarseGraining,
};
pub use record::{FluxRecord, FLUX_CSV_HEADER};
pub use scan::{
    exponent_scan, middle_window, rate_scan, CellSummary, RateKind, RateRow, RateScanReport,
    RateSummary, ScanReport, Verdict, PARTNER_SEED_OFFSET, RATE_CSV_HEADER,
};
pub use synthetic::{
    synthesize_besov_field, SyntheticField, SyntheticLaw, SyntheticSpec, CALIBRATION_TOLERANCE,
    MAX_SWEEPS,
};
