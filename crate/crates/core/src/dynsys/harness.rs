//! Exhaustive sweeps and sampled conjecture checks.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::extract::{extract_dk_state, extract_dk_state_with_n, verify_dk_prediction, PredictionReport};
use super::{find_orbit, low_mask, D1Seed, DkState, DynError, SeedState};
use crate::tripod::{band_detect_in, generate_layers};

const UNDEFINED: u32 = u32::MAX;

/// Tail length and cycle length of every state of a finite map; `UNDEFINED`
/// for states whose trajectory reaches an undefined step.
fn functional_graph(states: usize, f: impl Fn(usize) -> Option<usize>) -> (Vec<u32>, Vec<u32>) {
    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut mark = vec![UNSEEN; states];
    let mut pos = vec![0u32; states];
    let mut tail = vec![0u32; states];
    let mut period = vec![0u32; states];
    let mut path: Vec<(usize, Option<usize>)> = Vec::new();
    for s in 0..states {
        if mark[s] != UNSEEN {
            continue;
        }
        let mut x = s;
        loop {
            match mark[x] {
                UNSEEN => {
                    let y = f(x);
                    mark[x] = ON_PATH;
                    pos[x] = path.len() as u32;
                    path.push((x, y));
                    match y {
                        Some(y) => x = y,
                        None => break,
                    }
                }
                ON_PATH => {
                    let start = pos[x] as usize;
                    let len = (path.len() - start) as u32;
                    for &(y, _) in &path[start..] {
                        tail[y] = 0;
                        period[y] = len;
                        mark[y] = DONE;
                    }
                    path.truncate(start);
                    break;
                }
                _ => break,
            }
        }
        while let Some((y, next)) = path.pop() {
            match next {
                Some(z) if tail[z] != UNDEFINED => {
                    tail[y] = tail[z] + 1;
                    period[y] = period[z];
                }
                _ => {
                    tail[y] = UNDEFINED;
                    period[y] = UNDEFINED;
                }
            }
            mark[y] = DONE;
        }
    }
    (tail, period)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct D1Sweep {
    pub n: u32,
    pub states: usize,
    pub max_period: usize,
    pub max_preperiod: usize,
    pub all_divide_2n: bool,
    /// Number of distinct cycles of each period.
    pub cycles: BTreeMap<usize, usize>,
    /// Energy never rises, and falls whenever a 1 is harvested from a seed
    /// with positive energy.
    pub energy_monotone: bool,
}

/// Every `D(1,n)` seed, exhaustively.
pub fn sweep_d1(n: u32) -> Result<D1Sweep, DynError> {
    if n > 10 {
        return Err(DynError::InvalidState(format!("n = {n} is too large for an exhaustive sweep")));
    }
    let states = 1usize << (2 * n + 2);
    let step = |x: usize| D1Seed::new(n, x as u64).unwrap().step().bits() as usize;
    let (tail, period) = functional_graph(states, |x| Some(step(x)));
    let mut cycles = BTreeMap::new();
    let mut energy_monotone = true;
    for x in 0..states {
        if tail[x] == 0 {
            // count each cycle once, at its smallest state
            let mut y = step(x);
            let mut smallest = true;
            while y != x {
                smallest &= y > x;
                y = step(y);
            }
            if smallest {
                *cycles.entry(period[x] as usize).or_insert(0) += 1;
            }
        }
        let s = D1Seed::new(n, x as u64).unwrap();
        let e = (s.energy(), s.step().energy());
        energy_monotone &= e.1 <= e.0 && !(s.bit(1) && e.0 > 0 && e.1 == e.0);
    }
    Ok(D1Sweep {
        n,
        states,
        max_period: *period.iter().max().unwrap() as usize,
        max_preperiod: *tail.iter().max().unwrap() as usize,
        all_divide_2n: cycles.keys().all(|&p| (2 * n as usize).is_multiple_of(p)),
        cycles,
        energy_monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    Exhaustive,
    Random { samples: usize, rng_seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DkPeriodReport {
    pub k: usize,
    pub n: usize,
    pub bound: usize,
    pub sampling: Sampling,
    /// States whose orbit was determined.
    pub checked: usize,
    /// States whose trajectory reaches a step with no eligible insertion.
    pub undefined: usize,
    /// States whose orbit was not found within the step budget.
    pub unresolved: usize,
    pub all_divide: bool,
    /// Smallest violating state in reading order.
    pub counterexample: Option<DkState>,
    pub counterexample_period: Option<usize>,
    /// Number of checked states per period.
    pub periods: BTreeMap<usize, usize>,
}

fn pack(s: &DkState) -> usize {
    let w = s.width();
    s.rows().iter().enumerate().fold(0, |acc, (i, &r)| acc | (r as usize) << (i * w))
}

fn unpack(k: usize, n: usize, x: usize) -> DkState {
    let w = 2 * n + k;
    let rows = (0..k).map(|i| (x >> (i * w)) as u64 & low_mask(w)).collect();
    DkState::new(k, n, rows).unwrap()
}

fn reading_key(s: &DkState) -> String {
    s.to_string()
}

const ORBIT_BUDGET: usize = 1 << 20;

/// Check that every cycle period of `D(k,n)` divides `bound`.
pub fn check_dk_periods(k: usize, n: usize, bound: usize, sampling: Sampling) -> Result<DkPeriodReport, DynError> {
    DkState::zero(k, n)?;
    let mut report = DkPeriodReport {
        k,
        n,
        bound,
        sampling,
        checked: 0,
        undefined: 0,
        unresolved: 0,
        all_divide: true,
        counterexample: None,
        counterexample_period: None,
        periods: BTreeMap::new(),
    };
    let consider = |report: &mut DkPeriodReport, s: &dyn Fn() -> DkState, p: usize| {
        report.checked += 1;
        *report.periods.entry(p).or_insert(0) += 1;
        if !bound.is_multiple_of(p) {
            let state = s();
            let better = report.counterexample.as_ref().is_none_or(|c| reading_key(&state) < reading_key(c));
            if better {
                report.counterexample = Some(state);
                report.counterexample_period = Some(p);
            }
        }
    };
    match sampling {
        Sampling::Exhaustive => {
            let bits = k * (2 * n + k);
            if bits > 26 {
                return Err(DynError::InvalidState(format!("{bits}-bit states are too many to enumerate")));
            }
            let (_, period) = functional_graph(1 << bits, |x| unpack(k, n, x).step().ok().map(|s| pack(&s)));
            for (x, &p) in period.iter().enumerate() {
                if p == UNDEFINED {
                    report.undefined += 1;
                } else {
                    consider(&mut report, &|| unpack(k, n, x), p as usize);
                }
            }
        }
        Sampling::Random { samples, rng_seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let mask = low_mask(2 * n + k);
            let starts: Vec<DkState> = (0..samples)
                .map(|_| DkState::new(k, n, (0..k).map(|_| rng.gen::<u64>() & mask).collect()).unwrap())
                .collect();
            let orbits: Vec<_> = starts.par_iter().map(|s| find_orbit(s, ORBIT_BUDGET)).collect();
            for (s, o) in starts.iter().zip(orbits) {
                match o {
                    Ok(o) => consider(&mut report, &|| s.clone(), o.period),
                    Err(DynError::NoEligibleZero { .. }) => report.undefined += 1,
                    Err(DynError::NoCycle { .. }) => report.unresolved += 1,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    report.all_divide = report.counterexample.is_none();
    Ok(report)
}

/// Every cycle period of `D(3,n)` should divide `2(4n)(4n+1)`.
pub fn check_d3_conjecture(n: usize, sampling: Sampling) -> Result<DkPeriodReport, DynError> {
    check_dk_periods(3, n, 2 * (4 * n) * (4 * n + 1), sampling)
}

/// Exhaustive cycle census of `D(k,n)`.
pub fn sweep_dk(k: usize, n: usize) -> Result<DkPeriodReport, DynError> {
    check_dk_periods(k, n, 1, Sampling::Exhaustive)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitSummary {
    pub n: usize,
    pub preperiod: usize,
    pub period: usize,
    /// Every state on the cycle has the stable column counts.
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BandInductionEntry {
    pub k: usize,
    pub radius: u32,
    pub band_found: bool,
    pub onset: Option<usize>,
    /// Row at which the eight-row states were read off.
    pub state_row: Option<usize>,
    /// Orbit of the `D(8, 4k)` state, stability counted with run `4k`.
    pub literal: Option<OrbitSummary>,
    /// Orbit of the `D(8, 4k-1)` state, which reproduces the array row by
    /// row; stability counted with run `4k`, the band radius.
    pub array_faithful: Option<OrbitSummary>,
    /// How well the `D(8, 4k-1)` iteration tracks the array past the read-off row.
    pub prediction: Option<PredictionReport>,
    pub orbit_stable: Option<bool>,
    pub next_radius: u32,
    pub next_band_found: bool,
    pub next_onset: Option<usize>,
}

fn orbit_summary(state: &DkState, run: usize) -> Result<Option<OrbitSummary>, DynError> {
    let orbit = match find_orbit(state, ORBIT_BUDGET) {
        Ok(o) => o,
        Err(DynError::NoCycle { .. } | DynError::NoEligibleZero { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let mut s = orbit.cycle_representative.clone();
    let mut stable = true;
    for _ in 0..orbit.period {
        stable &= s.is_stable_with_run(run)?;
        s = s.next()?;
    }
    Ok(Some(OrbitSummary { n: state.n(), preperiod: orbit.preperiod, period: orbit.period, stable }))
}

/// For each `k`, look for the radius-`4k` band, read the eight values past
/// it off as a state, follow its orbit, and check directly for the
/// radius-`4k+4` band. `orbit_stable` reports the array-faithful reading.
pub fn check_band_induction(center: u32, k_max: usize, dim: usize) -> Result<Vec<BandInductionEntry>, DynError> {
    let view = generate_layers(center, dim, Some(8 * k_max as u32 + 6));
    let mut out = Vec::new();
    for k in 1..=k_max {
        let band = band_detect_in(&view, 8 * k as u32 - 2).expect("even threshold");
        let next = band_detect_in(&view, 8 * k as u32 + 6).expect("even threshold");
        let mut e = BandInductionEntry {
            k,
            radius: band.radius,
            band_found: band.verified,
            onset: band.onset,
            state_row: None,
            literal: None,
            array_faithful: None,
            prediction: None,
            orbit_stable: None,
            next_radius: next.radius,
            next_band_found: next.verified,
            next_onset: next.onset,
        };
        if let Some(onset) = band.onset {
            let a = onset + 2;
            let run = 4 * k;
            if let Ok(state) = extract_dk_state(&view, &band, 8, a) {
                e.state_row = Some(a);
                let room = dim.saturating_sub(a + state.width() + 1);
                if room > 0 {
                    e.prediction = Some(verify_dk_prediction(&view, &band, 8, a, room.min(1000))?);
                }
                e.array_faithful = orbit_summary(&state, run)?;
                e.orbit_stable = e.array_faithful.as_ref().map(|o| o.stable);
            }
            if let Ok(state) = extract_dk_state_with_n(&view, &band, 8, run, a) {
                e.literal = orbit_summary(&state, run)?;
            }
        }
        out.push(e);
    }
    Ok(out)
}
