//! Shared numerical tolerances.

/// Entrywise Hermiticity tolerance, max |M - M^dagger|.
pub const HERM: f64 = 1e-10;
/// Trace normalisation tolerance for density operators.
pub const TRACE: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD: f64 = 1e-9;
/// General equality tolerance.
pub const EQ: f64 = 1e-9;
/// Slack used by pass/fail decisions in experiment reports.
pub const REPORT: f64 = 1e-8;
/// Largest joint Hilbert-space dimension handled by dense storage.
pub const MAX_JOINT_DIM: usize = 512;
