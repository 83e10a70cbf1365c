//! Classic and misère nim.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Outcome class of an impartial game position under optimal play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OutcomeClass {
    /// The previous mover wins.
    P,
    /// The next mover wins.
    N,
}

impl OutcomeClass {
    pub fn is_p(self) -> bool {
        self == OutcomeClass::P
    }

    /// `P` when `cond` holds, `N` otherwise.
    pub fn p_if(cond: bool) -> Self {
        if cond {
            OutcomeClass::P
        } else {
            OutcomeClass::N
        }
    }
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeClass::P => "P",
            OutcomeClass::N => "N",
        })
    }
}

/// Addition in base 2 without carrying.
pub fn nim_sum(a: u64, b: u64) -> u64 {
    a ^ b
}

pub fn nim_outcome(stacks: &[u64]) -> OutcomeClass {
    OutcomeClass::p_if(stacks.iter().fold(0, |acc, &s| nim_sum(acc, s)) == 0)
}

/// Misère nim: the player taking the last coin loses.
///
/// Zero stacks are ignored. When every remaining stack is a single coin the
/// position is P exactly when the number of stacks is odd; otherwise the
/// normal-play answer applies.
pub fn misere_outcome(stacks: &[u64]) -> OutcomeClass {
    if stacks.iter().all(|&s| s <= 1) {
        let ones = stacks.iter().filter(|&&s| s == 1).count();
        OutcomeClass::p_if(ones % 2 == 1)
    } else {
        nim_outcome(stacks)
    }
}
