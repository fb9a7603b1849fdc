//! Calendar-month arithmetic with end-of-month clamping.

use chrono::{Datelike, NaiveDate};

pub fn days_in_month(year: i32, month: u32) -> u32 {
    let (ny, nm) = if month == 12 {
        (year + 1, 1)
    } else {
        (year, month + 1)
    };
    let first_of_next = NaiveDate::from_ymd_opt(ny, nm, 1).expect("valid month");
    first_of_next.pred_opt().expect("date in range").day()
}

/// Moves by whole calendar months. The day of month is kept when the target
/// month has it, otherwise clamped to the target month's last day.
pub fn add_months(d: NaiveDate, months: i32) -> NaiveDate {
    let index = d.year() * 12 + d.month0() as i32 + months;
    let year = index.div_euclid(12);
    let month = index.rem_euclid(12) as u32 + 1;
    let day = d.day().min(days_in_month(year, month));
    NaiveDate::from_ymd_opt(year, month, day).expect("clamped date is valid")
}

/// Same month and day `years` later; Feb 29 becomes Feb 28 in common years.
pub fn add_years(d: NaiveDate, years: u32) -> NaiveDate {
    add_months(d, 12 * years as i32)
}

pub fn subtract_months(d: NaiveDate, months: u32) -> NaiveDate {
    add_months(d, -(months as i32))
}

/// Whole days from `from` to `to`; negative when `to` is earlier.
pub fn days_between(from: NaiveDate, to: NaiveDate) -> i64 {
    (to - from).num_days()
}
