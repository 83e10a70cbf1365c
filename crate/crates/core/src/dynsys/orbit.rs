use serde::Serialize;

use super::{D1Seed, DkState, DynError};

/// A state of a deterministic system whose step may be undefined.
pub trait SeedState: Clone + Eq {
    fn next(&self) -> Result<Self, DynError>;
}

impl SeedState for D1Seed {
    fn next(&self) -> Result<Self, DynError> {
        Ok(self.step())
    }
}

impl SeedState for DkState {
    fn next(&self) -> Result<Self, DynError> {
        self.step()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport<S> {
    pub preperiod: usize,
    pub period: usize,
    /// First state of the trajectory that lies on the cycle.
    pub cycle_representative: S,
}

/// Exact preperiod and period by Brent's method. `max_steps` bounds the
/// transitions spent searching for the cycle.
pub fn find_orbit<S: SeedState>(start: &S, max_steps: usize) -> Result<OrbitReport<S>, DynError> {
    let mut power = 1;
    let mut period = 1;
    let mut tortoise = start.clone();
    let mut hare = start.next()?;
    let mut spent = 1;
    while tortoise != hare {
        if spent >= max_steps {
            return Err(DynError::NoCycle { budget: max_steps });
        }
        if power == period {
            tortoise = hare.clone();
            power *= 2;
            period = 0;
        }
        hare = hare.next()?;
        period += 1;
        spent += 1;
    }
    let mut tortoise = start.clone();
    let mut hare = start.clone();
    for _ in 0..period {
        hare = hare.next()?;
    }
    let mut preperiod = 0;
    while tortoise != hare {
        tortoise = tortoise.next()?;
        hare = hare.next()?;
        preperiod += 1;
    }
    Ok(OrbitReport { preperiod, period, cycle_representative: tortoise })
}
