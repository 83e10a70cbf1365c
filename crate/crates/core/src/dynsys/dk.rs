use std::fmt;

use serde::{Serialize, Serializer};

use super::{format_bits, low_mask, parse_bits, DynError, MAX_WIDTH};

/// `k` rows of `2n + k` bits; row 0 is the top row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DkState {
    k: usize,
    n: usize,
    rows: Vec<u64>,
}

impl DkState {
    pub fn new(k: usize, n: usize, rows: Vec<u64>) -> Result<Self, DynError> {
        let width = 2 * n + k;
        if width > MAX_WIDTH {
            return Err(DynError::TooWide { width });
        }
        if k == 0 || rows.len() != k {
            return Err(DynError::InvalidState(format!("expected {k} rows, got {}", rows.len())));
        }
        if rows.iter().any(|r| r & !low_mask(width) != 0) {
            return Err(DynError::InvalidState(format!("bits beyond column {width}")));
        }
        Ok(DkState { k, n, rows })
    }

    pub fn zero(k: usize, n: usize) -> Result<Self, DynError> {
        Self::new(k, n, vec![0; k])
    }

    /// Parse `k` lines of `0`/`1`. Shorter lines are padded with zeros on the
    /// right.
    pub fn parse(k: usize, n: usize, text: &str) -> Result<Self, DynError> {
        let width = 2 * n + k;
        let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        if lines.len() != k {
            return Err(DynError::InvalidState(format!("expected {k} lines, got {}", lines.len())));
        }
        let rows = lines
            .iter()
            .map(|l| {
                if l.len() > width {
                    return Err(DynError::InvalidState(format!("line longer than {width} bits")));
                }
                parse_bits(&format!("{l:0<width$}"), width)
            })
            .collect::<Result<_, _>>()?;
        Self::new(k, n, rows)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> usize {
        2 * self.n + self.k
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Post-shift insertion column for each row (top first); `None` for rows
    /// that harvested a 1.
    pub fn insertions(&self) -> Result<Vec<Option<usize>>, DynError> {
        let allowed = low_mask(self.width()) & !low_mask(self.n);
        let mut used = 0u64;
        let mut out = vec![None; self.k];
        for i in (0..self.k).rev() {
            if self.rows[i] & 1 == 1 {
                continue;
            }
            let free = !(self.rows[i] >> 1) & !used & allowed;
            if free == 0 {
                return Err(DynError::NoEligibleZero { row: i + 1 });
            }
            let bit = free & free.wrapping_neg();
            used |= bit;
            out[i] = Some(bit.trailing_zeros() as usize + 1);
        }
        Ok(out)
    }

    /// Harvest, shift, then insert bottom row first: each row that harvested
    /// a 0 gets a 1 at its leftmost 0 right of column `n` in a column no lower
    /// row used this step.
    pub fn step(&self) -> Result<DkState, DynError> {
        let ins = self.insertions()?;
        let rows = self
            .rows
            .iter()
            .zip(ins)
            .map(|(&r, c)| (r >> 1) | c.map_or(0, |c| 1 << (c - 1)))
            .collect();
        Ok(DkState { k: self.k, n: self.n, rows })
    }

    /// Number of 1s in each column.
    pub fn derived_sequence(&self) -> Vec<usize> {
        (0..self.width()).map(|j| self.rows.iter().filter(|&&r| r >> j & 1 == 1).count()).collect()
    }

    /// For `k = 2m`: the derived sequence reads `m` n times, then
    /// `m - 1, ..., 1, 0`, then zeros.
    pub fn is_stable(&self) -> Result<bool, DynError> {
        self.is_stable_with_run(self.n)
    }

    /// Stability with `m` repeated `run` times instead of `n` times.
    pub fn is_stable_with_run(&self, run: usize) -> Result<bool, DynError> {
        if self.k % 2 == 1 {
            return Err(DynError::OddRowCount(self.k));
        }
        let m = self.k / 2;
        if run + m > self.width() {
            return Ok(false);
        }
        let mut want = vec![m; run];
        want.extend((0..m).rev());
        want.resize(self.width(), 0);
        Ok(self.derived_sequence() == want)
    }
}

impl fmt::Display for DkState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.rows.iter().map(|&r| format_bits(r, self.width())).collect();
        f.write_str(&lines.join("\n"))
    }
}

impl Serialize for DkState {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let lines: Vec<String> = self.rows.iter().map(|&r| format_bits(r, self.width())).collect();
        lines.serialize(s)
    }
}
