//! Seed dynamical systems.
//!
//! A `D(1,n)` seed is a string of `2n + 2` bits, a `D(k,n)` state is `k`
//! stacked rows of `2n + k` bits. Each step harvests the leftmost column,
//! shifts left and inserts 1s for rows that harvested a 0. States are packed
//! with bit `d - 1` holding column `d`, so the leftmost column is the least
//! significant bit.

mod d1;
mod dk;
mod extract;
mod harness;
mod orbit;

pub use d1::D1Seed;
pub use dk::DkState;
pub use extract::{
    column_rows, extract_dk_state, extract_dk_state_with_n, extract_seed, verify_d1_prediction, verify_dk_prediction, PredictionReport,
};
pub use harness::{
    check_band_induction, check_d3_conjecture, check_dk_periods, sweep_d1, sweep_dk, BandInductionEntry, D1Sweep,
    DkPeriodReport, OrbitSummary, Sampling,
};
pub use orbit::{find_orbit, OrbitReport, SeedState};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynError {
    #[error("row {row} has no eligible zero to turn into a one")]
    NoEligibleZero { row: usize },
    #[error("no cycle found within a budget of {budget} steps")]
    NoCycle { budget: usize },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("stability needs an even number of rows, got {0}")]
    OddRowCount(usize),
    #[error("rows of {width} bits exceed the 62-bit limit")]
    TooWide { width: usize },
    #[error("extraction failed: {0}")]
    Extraction(String),
}

pub(crate) const MAX_WIDTH: usize = 62;

pub(crate) fn parse_bits(s: &str, width: usize) -> Result<u64, DynError> {
    if s.len() != width {
        return Err(DynError::InvalidState(format!("expected {width} bits, got {:?}", s)));
    }
    s.chars().enumerate().try_fold(0u64, |acc, (i, ch)| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc | 1 << i),
        _ => Err(DynError::InvalidState(format!("unexpected character {ch:?}"))),
    })
}

pub(crate) fn format_bits(bits: u64, width: usize) -> String {
    (0..width).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub(crate) fn low_mask(width: usize) -> u64 {
    if width >= 64 {
        !0
    } else {
        (1u64 << width) - 1
    }
}
