//! Tripod nim completion arrays.
//!
//! `C_c(a, b)` is the size of the third leaf that makes the tripod with center
//! `c` and leaves `a`, `b` a P position. Row 0 and column 0 come from the
//! three-stack end-nim rule; every other entry is the mex of the entries to
//! its left and above it.

mod analysis;
mod band;
mod format;
mod generate;
mod store;

pub use analysis::{
    all_equal_outcome, end_nim3_outcome, is_trivial_center, near_equivalence_check, trivial_center_outcome,
    NearEquivalenceReport,
};
pub use band::{band_detect, band_detect_in, BandReport};
pub use format::{decode_tnim, encode_tnim, read_tnim, to_csv, write_tnim, FormatError, TNIM_MAGIC, TNIM_VERSION};
pub use generate::{generate_array, generate_array_by_layers, generate_layers, leading_rows, row_sequence, LayeredArray};
pub use store::{c_value, ArrayStore};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TripodError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0} is not one less than a power of two")]
    NotTrivialCenter(u64),
}

/// Boundary entry `C_c(0, a)`: reads c, 1, 2, ..., c-1, 0, c+1, ...
pub fn boundary(center: u32, a: usize) -> u32 {
    if a == 0 {
        center
    } else if a == center as usize {
        0
    } else {
        a as u32
    }
}

/// Read access shared by full arrays and partial low-value arrays.
pub trait ArrayView {
    fn center(&self) -> u32;
    fn dim(&self) -> usize;
    /// `None` when the entry is above the computed value range.
    fn value(&self, a: usize, b: usize) -> Option<u32>;
}

/// The `dim x dim` window of `C_c` anchored at the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionArray {
    center: u32,
    dim: usize,
    values: Vec<u32>,
}

impl CompletionArray {
    pub fn from_values(center: u32, dim: usize, values: Vec<u32>) -> Result<Self, TripodError> {
        if values.len() != dim * dim {
            return Err(TripodError::InvalidArgument(format!(
                "{} values do not fill a {dim}x{dim} grid",
                values.len()
            )));
        }
        Ok(CompletionArray { center, dim, values })
    }

    pub fn center(&self) -> u32 {
        self.center
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.values[a * self.dim + b]
    }

    pub fn row(&self, a: usize) -> &[u32] {
        &self.values[a * self.dim..(a + 1) * self.dim]
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// Check the structural properties every completion array has.
    pub fn check_invariants(&self) -> Result<(), String> {
        let (n, c) = (self.dim, self.center as usize);
        for a in 0..n {
            if self.get(0, a) != boundary(self.center, a) {
                return Err(format!("row 0 rule fails at column {a}"));
            }
            let diag = self.get(a, a);
            if a > 0 && (a == c) == (diag == 0) {
                return Err(format!("diagonal rule fails at {a}"));
            }
            let mut seen = vec![false; 2 * n + c + 2];
            for b in 0..n {
                let v = self.get(a, b);
                if v != self.get(b, a) {
                    return Err(format!("asymmetric at ({a}, {b})"));
                }
                if std::mem::replace(&mut seen[v as usize], true) {
                    return Err(format!("value {v} repeats in row {a}"));
                }
                if (v as usize) < n && self.get(a, v as usize) as usize != b {
                    return Err(format!("locator property fails at ({a}, {b})"));
                }
            }
        }
        Ok(())
    }
}

impl ArrayView for CompletionArray {
    fn center(&self) -> u32 {
        self.center
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, a: usize, b: usize) -> Option<u32> {
        Some(self.get(a, b))
    }
}
