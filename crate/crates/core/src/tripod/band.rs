use serde::{Deserialize, Serialize};

use super::{generate_layers, ArrayView, TripodError};

/// Whether values `0..=2r-2` sit exactly on the cells with `|a - b| <= r - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandReport {
    pub center: u32,
    pub radius: u32,
    /// First row and column from which the band is exact; `None` when no
    /// onset leaves a confirmation window of at least a quarter of the array
    /// and four band radii.
    pub onset: Option<usize>,
    pub window_end: usize,
    pub verified: bool,
}

fn radius_for(value_max: u32) -> Result<u32, TripodError> {
    if value_max % 2 == 1 {
        return Err(TripodError::InvalidArgument(format!("value_max {value_max} is not of the form 2r - 2")));
    }
    Ok(value_max / 2 + 1)
}

/// Band search on any array view.
pub fn band_detect_in(view: &impl ArrayView, value_max: u32) -> Result<BandReport, TripodError> {
    let r = radius_for(value_max)? as usize;
    let dim = view.dim();
    let in_band = |a: usize, b: usize| {
        let low = view.value(a, b).is_some_and(|v| v <= value_max);
        low == (b - a < r)
    };
    // a cell (a, b) with a <= b matters for every onset up to a
    let last_bad = (0..dim).rev().find(|&a| (a..dim).any(|b| !in_band(a, b)));
    let onset = last_bad.map_or(0, |a| a + 1);
    // the confirmation window must span a quarter of the array and several band widths
    let verified = 4 * onset < 3 * dim && dim - onset >= 4 * r;
    Ok(BandReport {
        center: view.center(),
        radius: r as u32,
        onset: verified.then_some(onset),
        window_end: dim,
        verified,
    })
}

/// Band search on a fresh `dim x dim` window holding only the low values.
pub fn band_detect(center: u32, value_max: u32, dim: usize) -> Result<BandReport, TripodError> {
    radius_for(value_max)?;
    band_detect_in(&generate_layers(center, dim, Some(value_max)), value_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tripod::generate_array;

    #[test]
    fn trivial_center_diagonal() {
        let r = band_detect(1, 0, 64).unwrap();
        assert_eq!(r, BandReport { center: 1, radius: 1, onset: Some(2), window_end: 64, verified: true });
    }

    #[test]
    fn center_two_radius_four() {
        let r = band_detect(2, 6, 512).unwrap();
        assert!(r.verified);
        assert_eq!(r.radius, 4);
        let full = band_detect_in(&generate_array(2, 512), 6).unwrap();
        assert_eq!(full, r);
    }

    #[test]
    fn odd_threshold_rejected() {
        assert!(band_detect(2, 5, 64).is_err());
    }

    #[test]
    fn tiny_window_has_no_band() {
        let r = band_detect(6, 22, 16).unwrap();
        assert!(!r.verified);
        assert_eq!(r.onset, None);
    }
}
