//! Switching detection, residence-time statistics, Kramers scaling and
//! spectral SNR, shared by the semiclassical and quantum engines.

mod crossing;
mod ensemble;
mod jumps;
mod peaks;
mod residence;
mod snr;
mod transitions;

pub use crossing::level_crossing;
pub use ensemble::{
    kramers_scan, linear_fit, log_spaced, low_branch_state, run_snr, snr_sweep, switching_ensemble,
    switching_run, KramersPoint, KramersScan, LinearFit, SnrPoint, SnrSource, MIN_TRANSITIONS,
};
pub use jumps::{quantum_jumps, response_lag, JumpAnalysis, MAX_LAG_SAMPLES, MODE_BINS};
pub use peaks::{
    residence_peak_structure, PeakStructure, ResiduePeak, BINS_PER_PERIOD, MATCH_TOLERANCE,
    PROMINENCE_FRACTION,
};
pub use residence::{
    optimal_frequency, residence_stats, stats_from_durations, Binning, ExponentialFit, Histogram,
    ResidenceStats, MIN_SEGMENTS,
};
pub use snr::{periodogram, snr_db, SnrResult, Window, BACKGROUND_BINS, GUARD_BINS};
pub use transitions::{
    bimodal_modes, coincidence, detect_transitions, initial_label, Coincidence, DwellRecord, Label, Segment,
    Thresholds,
};
