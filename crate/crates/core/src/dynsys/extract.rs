//! Reading seeds off a completion array and checking their predictions.
//!
//! Beyond a band of radius `r`, the first value outside the band is
//! `v = 2r - 1`. At row `a`, bit `d` of a seed records whether `v` already
//! sits in column `a - 1 + d` above row `a`. By symmetry a harvested 1 means
//! row `a` holds `v` left of the diagonal; a harvested 0 means the step
//! inserts `v` to the right.
//!
//! `D(1,n)` inserts before shifting, so its incubator spans the diagonal and
//! the `r - 1` band cells: `n = r`. `D(k,n)` inserts after shifting, which
//! moves the same boundary one column left: `n = r - 1`, with row `k - 1 - m`
//! of the state tracking value `v + m`.

use serde::{Deserialize, Serialize};

use super::{D1Seed, DkState, DynError};
use crate::tripod::{ArrayView, BandReport};

/// For each column, the row holding `v`, if any.
pub fn column_rows(view: &impl ArrayView, v: u32) -> Vec<Option<usize>> {
    let dim = view.dim();
    let mut out = vec![None; dim];
    for i in 0..dim {
        for (j, slot) in out.iter_mut().enumerate() {
            if slot.is_none() && view.value(i, j) == Some(v) {
                *slot = Some(i);
            }
        }
    }
    out
}

fn check_row(band: &BandReport, a: usize, width: usize, dim: usize) -> Result<(), DynError> {
    let onset = band
        .onset
        .filter(|_| band.verified)
        .ok_or_else(|| DynError::Extraction("no verified band".into()))?;
    if a <= onset {
        return Err(DynError::Extraction(format!("row {a} is not past the band onset {onset}")));
    }
    if a + width > dim {
        return Err(DynError::Extraction(format!("row {a} needs columns up to {}", a + width - 1)));
    }
    Ok(())
}

fn read_bits(cols: &[Option<usize>], a: usize, width: usize) -> u64 {
    (1..=width).fold(0, |acc, d| match cols[a - 1 + d] {
        Some(i) if i < a => acc | 1 << (d - 1),
        _ => acc,
    })
}

fn tracked_value(band: &BandReport) -> u32 {
    2 * band.radius - 1
}

/// The `D(1,r)` seed at row `a`.
pub fn extract_seed(view: &impl ArrayView, band: &BandReport, a: usize) -> Result<D1Seed, DynError> {
    let n = band.radius;
    check_row(band, a, 2 * n as usize + 2, view.dim())?;
    let cols = column_rows(view, tracked_value(band));
    D1Seed::new(n, read_bits(&cols, a, 2 * n as usize + 2))
}

fn dk_from_columns(all: &[Vec<Option<usize>>], n: usize, a: usize) -> Result<DkState, DynError> {
    let k = all.len();
    let width = 2 * n + k;
    // the top row tracks the largest value
    let rows = (0..k).map(|m| read_bits(&all[k - 1 - m], a, width)).collect();
    DkState::new(k, n, rows)
}

/// The `D(k, r-1)` state at row `a`, tracking values `2r-1 ..= 2r+k-2`.
pub fn extract_dk_state(view: &impl ArrayView, band: &BandReport, k: usize, a: usize) -> Result<DkState, DynError> {
    extract_dk_state_with_n(view, band, k, band.radius as usize - 1, a)
}

/// As [`extract_dk_state`] with an explicit incubator width.
pub fn extract_dk_state_with_n(
    view: &impl ArrayView,
    band: &BandReport,
    k: usize,
    n: usize,
    a: usize,
) -> Result<DkState, DynError> {
    check_row(band, a, 2 * n + k, view.dim())?;
    let v = tracked_value(band);
    let all: Vec<_> = (0..k as u32).map(|m| column_rows(view, v + m)).collect();
    dk_from_columns(&all, n, a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub start_row: usize,
    pub rows_checked: usize,
    /// Rows where a predicted placement disagrees with the array.
    pub placement_errors: usize,
    /// Rows where the iterated state differs from the state read off the array.
    pub state_mismatches: usize,
    pub first_error_row: Option<usize>,
}

impl PredictionReport {
    fn new(start_row: usize) -> Self {
        PredictionReport { start_row, rows_checked: 0, placement_errors: 0, state_mismatches: 0, first_error_row: None }
    }

    fn record(&mut self, row: usize, placement_ok: bool, state_ok: bool) {
        self.rows_checked += 1;
        self.placement_errors += usize::from(!placement_ok);
        self.state_mismatches += usize::from(!state_ok);
        if !(placement_ok && state_ok) {
            self.first_error_row.get_or_insert(row);
        }
    }

    pub fn is_clean(&self) -> bool {
        self.placement_errors == 0 && self.state_mismatches == 0
    }
}

/// Iterate `d1_step` from the seed at `start` for `steps` rows and compare
/// each row's placement of the tracked value with the array.
pub fn verify_d1_prediction(
    view: &impl ArrayView,
    band: &BandReport,
    start: usize,
    steps: usize,
) -> Result<PredictionReport, DynError> {
    let n = band.radius;
    let width = 2 * n as usize + 2;
    check_row(band, start, width, view.dim())?;
    check_row(band, start + steps, width, view.dim())?;
    // by symmetry, the column of v in row a is the row of v in column a
    let cols = column_rows(view, tracked_value(band));
    let mut seed = D1Seed::new(n, read_bits(&cols, start, width))?;
    let mut report = PredictionReport::new(start);
    for a in start..start + steps {
        let placement_ok = match seed.insertion_position() {
            None => cols[a].is_some_and(|j| j < a),
            Some(q) => cols[a] == Some(a - 1 + q),
        };
        seed = seed.step();
        let state_ok = seed.bits() == read_bits(&cols, a + 1, width);
        report.record(a, placement_ok, state_ok);
    }
    Ok(report)
}

/// The `D(k, r-1)` analogue of [`verify_d1_prediction`].
pub fn verify_dk_prediction(
    view: &impl ArrayView,
    band: &BandReport,
    k: usize,
    start: usize,
    steps: usize,
) -> Result<PredictionReport, DynError> {
    let n = band.radius as usize - 1;
    let width = 2 * n + k;
    check_row(band, start, width, view.dim())?;
    check_row(band, start + steps, width, view.dim())?;
    let v = tracked_value(band);
    let all: Vec<_> = (0..k as u32).map(|m| column_rows(view, v + m)).collect();
    let mut state = dk_from_columns(&all, n, start)?;
    let mut report = PredictionReport::new(start);
    for a in start..start + steps {
        let ins = state.insertions()?;
        let placement_ok = ins.iter().enumerate().all(|(m, ins)| {
            let cols = &all[k - 1 - m];
            match ins {
                None => cols[a].is_some_and(|j| j < a),
                Some(d) => cols[a] == Some(a + d),
            }
        });
        state = state.step()?;
        let state_ok = state == dk_from_columns(&all, n, a + 1)?;
        report.record(a, placement_ok, state_ok);
    }
    Ok(report)
}
