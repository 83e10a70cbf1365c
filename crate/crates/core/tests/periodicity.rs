use tnim_core::periodicity::{detect_period, row_period, trivial_center_period_law, PeriodMode};
use tnim_core::tripod::leading_rows;

fn rows_as_u64(center: u32, rows: usize, terms: usize) -> Vec<Vec<u64>> {
    leading_rows(center, rows, terms).into_iter().map(|r| r.into_iter().map(u64::from).collect()).collect()
}

#[test]
fn non_trivial_periods_are_even() {
    for (row, seq) in rows_as_u64(2, 20, 20_000).iter().enumerate().skip(1) {
        let p = detect_period(seq).unwrap().period.unwrap();
        assert_eq!(p % 2, 0, "center 2 row {row} has period {p}");
    }
}

#[test]
fn rows_one_below_a_multiple_of_eight() {
    let rows = rows_as_u64(2, 24, 20_000);
    for n in 1..=3 {
        let r = detect_period(&rows[8 * n - 1]).unwrap();
        assert_eq!(r.period, Some(8 * n), "row {}", 8 * n - 1);
        assert_eq!(r.mode, PeriodMode::VerifiedOnWindow);
    }
}

#[test]
fn trivial_centers_follow_the_power_of_two_law() {
    for center in [1u32, 3, 7, 15] {
        let rows = rows_as_u64(center, 16, 8_000);
        for (row, want) in trivial_center_period_law(15) {
            assert_eq!(detect_period(&rows[row]).unwrap().period, Some(want), "center {center} row {row}");
        }
    }
}

#[test]
fn single_row_entry_point_agrees_with_batches() {
    let rows = rows_as_u64(6, 12, 4_000);
    for row in [0, 5, 11] {
        assert_eq!(row_period(6, row, 4_000).unwrap(), detect_period(&rows[row]).unwrap());
    }
}

#[test]
fn detected_preperiod_is_tight() {
    let seq = &rows_as_u64(4, 16, 20_000)[15];
    let r = detect_period(seq).unwrap();
    let (p, start) = (r.period.unwrap(), r.preperiod.unwrap());
    let diff = |a: usize| seq[a + p] as i64 - seq[a] as i64;
    assert!((start..seq.len() - p).all(|a| diff(a) == diff(start)));
    if start > 0 {
        assert_ne!(diff(start - 1), diff(start));
    }
}
