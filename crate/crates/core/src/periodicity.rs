//! Additive periodicity: `s(a + p) = s(a) + p` beyond a preperiod.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tripod::row_sequence;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PeriodError {
    #[error("need at least 16 terms, got {0}")]
    TooShort(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodMode {
    /// The relation holds from the preperiod to the end of the sequence, the
    /// preperiod lies strictly inside the first half and at least two full
    /// periods were checked.
    VerifiedOnWindow,
    /// The relation was only established on the last half.
    HeuristicLastHalf,
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub period: Option<usize>,
    pub preperiod: Option<usize>,
    pub terms_used: usize,
    pub mode: PeriodMode,
}

fn holds(seq: &[u64], p: usize, a: usize) -> bool {
    seq[a + p] == seq[a] + p as u64
}

impl PeriodReport {
    fn not_found(terms: usize) -> Self {
        PeriodReport { period: None, preperiod: None, terms_used: terms, mode: PeriodMode::NotFound }
    }

    /// Re-check the claimed relation over `[preperiod, len - period)`.
    fn audited(seq: &[u64], period: usize, preperiod: usize, mode: PeriodMode) -> Self {
        assert!(
            (preperiod..seq.len() - period).all(|a| holds(seq, period, a)),
            "period {period} from {preperiod} fails its own audit"
        );
        PeriodReport { period: Some(period), preperiod: Some(preperiod), terms_used: seq.len(), mode }
    }
}

/// Smallest additive period of the last half of `seq`, at most `len / 4`,
/// with the earliest start from which it holds.
pub fn detect_period(seq: &[u64]) -> Result<PeriodReport, PeriodError> {
    let len = seq.len();
    if len < 16 {
        return Err(PeriodError::TooShort(len));
    }
    let half = len / 2;
    let period = (1..=len / 4).into_par_iter().find_first(|&p| (half..len - p).all(|a| holds(seq, p, a)));
    let Some(p) = period else {
        return Ok(PeriodReport::not_found(len));
    };
    let mut start = half;
    while start > 0 && holds(seq, p, start - 1) {
        start -= 1;
    }
    let mode = if start < half && len - p - start >= 2 * p {
        PeriodMode::VerifiedOnWindow
    } else {
        PeriodMode::HeuristicLastHalf
    };
    Ok(PeriodReport::audited(seq, p, start, mode))
}

/// Period of row `row` of `C_center`, read from its first `terms` entries.
pub fn row_period(center: u32, row: usize, terms: usize) -> Result<PeriodReport, PeriodError> {
    if terms < 16 {
        return Err(PeriodError::TooShort(terms));
    }
    let seq: Vec<u64> = row_sequence(center, row, terms).into_iter().map(u64::from).collect();
    detect_period(&seq)
}

/// Predicted periods for trivial centers: the least power of two above the row.
pub fn trivial_center_period_law(n_max: usize) -> Vec<(usize, usize)> {
    (0..=n_max).map(|row| (row, (row + 1).next_power_of_two())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let s: Vec<u64> = (0..100).collect();
        let r = detect_period(&s).unwrap();
        assert_eq!((r.period, r.preperiod, r.mode), (Some(1), Some(0), PeriodMode::VerifiedOnWindow));
    }

    #[test]
    fn preperiod_found() {
        let shape = [3, 0, 5, 1, 2, 4];
        let s: Vec<u64> = (0..200u64)
            .map(|a| if a < 30 { 1000 + a } else { 6 * (a / 6) + shape[(a % 6) as usize] })
            .collect();
        let r = detect_period(&s).unwrap();
        assert_eq!(r.period, Some(6));
        assert_eq!(r.preperiod, Some(30));
    }

    #[test]
    fn never_invents_a_period() {
        let s: Vec<u64> = (0..64u64).map(|a| a * a).collect();
        let r = detect_period(&s).unwrap();
        assert_eq!(r.mode, PeriodMode::NotFound);
        assert_eq!(r.period, None);
        assert_eq!(detect_period(&[1, 2, 3]), Err(PeriodError::TooShort(3)));
    }

    #[test]
    fn late_start_is_heuristic() {
        let s: Vec<u64> = (0..100u64).map(|a| if a < 50 { 7 } else { a }).collect();
        let r = detect_period(&s).unwrap();
        assert_eq!(r.period, Some(1));
        assert_eq!(r.preperiod, Some(50));
        assert_eq!(r.mode, PeriodMode::HeuristicLastHalf);
    }

    #[test]
    fn law_values() {
        let law = trivial_center_period_law(15);
        assert_eq!(law[0], (0, 1));
        assert_eq!(law[5], (5, 8));
        assert_eq!(law[15], (15, 16));
        assert_eq!(law[8], (8, 16));
    }

    #[test]
    fn small_rows() {
        assert_eq!(row_period(2, 9, 20_000).unwrap().period, Some(10));
        assert_eq!(row_period(1, 5, 4096).unwrap().period, Some(8));
    }
}
