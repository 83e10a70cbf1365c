use std::collections::{BTreeMap, HashMap};

use tnim_core::dynsys::{check_d3_conjecture, check_dk_periods, sweep_d1, D1Seed, Sampling};

/// Cycle lengths of the D(1,n) map, counted once per cycle, by walking from
/// every seed and remembering visits.
fn naive_cycles(n: u32) -> BTreeMap<usize, usize> {
    let width = 2 * n + 2;
    let mut cycle_of: HashMap<u64, u64> = HashMap::new();
    let mut cycles = BTreeMap::new();
    for start in 0..1u64 << width {
        let mut path = Vec::new();
        let mut pos = HashMap::new();
        let mut s = D1Seed::new(n, start).unwrap();
        while !cycle_of.contains_key(&s.bits()) && !pos.contains_key(&s.bits()) {
            pos.insert(s.bits(), path.len());
            path.push(s.bits());
            s = s.step();
        }
        if let Some(&i) = pos.get(&s.bits()) {
            let len = path.len() - i;
            *cycles.entry(len).or_insert(0) += 1;
            let rep = *path[i..].iter().min().unwrap();
            for &b in &path[i..] {
                cycle_of.insert(b, rep);
            }
        }
        for b in path {
            cycle_of.entry(b).or_insert(u64::MAX);
        }
    }
    cycles
}

#[test]
fn d1_cycle_census() {
    for n in 1..=6 {
        let s = sweep_d1(n).unwrap();
        assert_eq!(s.cycles, naive_cycles(n), "n = {n}");
        assert!(s.cycles.keys().all(|p| (2 * n as usize).is_multiple_of(*p)));
        assert_eq!(s.states, 1 << (2 * n + 2));
    }
}

#[test]
fn d3_periods_for_small_incubators() {
    let r = check_d3_conjecture(2, Sampling::Exhaustive).unwrap();
    assert!(r.all_divide);
    assert_eq!(r.periods.keys().copied().collect::<Vec<_>>(), [8, 24]);

    let r = check_d3_conjecture(1, Sampling::Exhaustive).unwrap();
    assert!(!r.all_divide);
    assert_eq!(r.counterexample_period, Some(12));
    let bad = r.counterexample.unwrap();
    assert_eq!(bad.to_string(), "00000\n00000\n00000");
}

#[test]
fn d3_at_band_radius_indexing() {
    // the rows read off a radius-4n band form D(3, 4n - 1)
    let r = check_dk_periods(3, 3, 40, Sampling::Random { samples: 20_000, rng_seed: 42 }).unwrap();
    assert!(r.all_divide, "{:?}", r.periods);
}

#[test]
fn sampling_is_reproducible() {
    let s = Sampling::Random { samples: 2_000, rng_seed: 9 };
    assert_eq!(check_d3_conjecture(3, s).unwrap(), check_d3_conjecture(3, s).unwrap());
}
