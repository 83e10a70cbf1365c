use serde::{Deserialize, Serialize};

use super::{ArrayStore, TripodError};
use crate::nim::{nim_sum, OutcomeClass};

/// Three-stack end nim `(a, m, b)`: P exactly when the ends match and differ
/// from the middle.
pub fn end_nim3_outcome(a: u64, m: u64, b: u64) -> Result<OutcomeClass, TripodError> {
    if a == 0 || m == 0 || b == 0 {
        return Err(TripodError::InvalidArgument("all three stacks must be nonempty".into()));
    }
    Ok(OutcomeClass::p_if(a == b && a != m))
}

pub fn is_trivial_center(n: u64) -> bool {
    n >= 1 && (n + 1).is_power_of_two()
}

/// Tripod with center `n = 2^k - 1`: P iff the leaves XOR to zero or all equal `n`.
pub fn trivial_center_outcome(n: u64, leaves: [u64; 3]) -> Result<OutcomeClass, TripodError> {
    if !is_trivial_center(n) {
        return Err(TripodError::NotTrivialCenter(n));
    }
    if leaves.contains(&0) {
        return Err(TripodError::InvalidArgument("leaves must be nonempty".into()));
    }
    let [a, b, c] = leaves;
    Ok(OutcomeClass::p_if(nim_sum(a, nim_sum(b, c)) == 0 || (a == n && b == n && c == n)))
}

/// Tripod whose center and three leaves all hold `n` coins.
pub fn all_equal_outcome(n: u64) -> OutcomeClass {
    OutcomeClass::p_if(is_trivial_center(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearEquivalenceReport {
    pub centers: (u32, u32),
    pub threshold: usize,
    pub extent: usize,
    /// Completion values agree on the whole square.
    pub equal: bool,
    pub first_mismatch: Option<(usize, usize)>,
    pub mismatches: usize,
    /// P positions with all three leaves at least `threshold` agree; cells
    /// where both completions fall below the threshold are ignored.
    pub p_positions_equal: bool,
    pub first_p_mismatch: Option<(usize, usize)>,
}

/// Compare `C_c1` and `C_c2` on `threshold <= a, b <= extent`.
pub fn near_equivalence_check(
    store: &mut ArrayStore,
    c1: u32,
    c2: u32,
    threshold: usize,
    extent: usize,
) -> Result<NearEquivalenceReport, TripodError> {
    if extent <= threshold {
        return Err(TripodError::InvalidArgument("extent must exceed threshold".into()));
    }
    let x = store.array(c1, extent + 1).clone();
    let y = store.array(c2, extent + 1);
    let mut r = NearEquivalenceReport {
        centers: (c1, c2),
        threshold,
        extent,
        equal: true,
        first_mismatch: None,
        mismatches: 0,
        p_positions_equal: true,
        first_p_mismatch: None,
    };
    for a in threshold..=extent {
        for b in threshold..=extent {
            let (u, v) = (x.get(a, b), y.get(a, b));
            if u == v {
                continue;
            }
            r.mismatches += 1;
            r.first_mismatch.get_or_insert((a, b));
            if u.max(v) as usize >= threshold {
                r.first_p_mismatch.get_or_insert((a, b));
            }
        }
    }
    r.equal = r.first_mismatch.is_none();
    r.p_positions_equal = r.first_p_mismatch.is_none();
    Ok(r)
}
