//! Decision functionals evaluated at finite truncation.
//!
//! Limsups are estimated on a trailing window of indices (see
//! [`WindowConfig`]) and every verdict is three-valued: a statistic that
//! does not clear the configured margin is reported as inconclusive.

pub mod classify;
pub mod condition_b;
pub mod fit;
pub mod kim;
pub mod report;
pub mod sum_largest;

pub use classify::{analyze, classify};
pub use condition_b::{condition_b_report, condition_b_series, condition_b_statistic, ConditionBReport};
pub use kim::{kim_series, KimSeriesTrace};
pub use report::{
    default_eps_grid, CriterionEntry, CriterionReport, Membership, OmegaVerdict, Verdict, WindowConfig,
};
pub use sum_largest::sum_largest;

use crate::convergents::ConvergentTable;
use crate::error::{Error, Result};

/// First index with q_k >= 3, provided at least
/// [`report::MIN_ADMISSIBLE`] indices from there on exist.
pub(crate) fn admissible_floor(table: &ConvergentTable) -> Result<usize> {
    let floor = table.admissible_from().unwrap_or(table.depth() + 1);
    let admissible = table.depth() + 1 - floor;
    if admissible < report::MIN_ADMISSIBLE {
        return Err(Error::InsufficientDepth {
            admissible,
            required: report::MIN_ADMISSIBLE,
        });
    }
    Ok(floor)
}
