//! Day-by-day calendar oracle.

/// A civil date as `(year, month, day)`.
pub type Ymd = (i32, u32, u32);

pub fn is_leap(year: i32) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

pub fn days_in_month(year: i32, month: u32) -> u32 {
    match month {
        1 | 3 | 5 | 7 | 8 | 10 | 12 => 31,
        4 | 6 | 9 | 11 => 30,
        2 if is_leap(year) => 29,
        2 => 28,
        _ => panic!("month out of range: {month}"),
    }
}

pub fn is_valid((y, m, d): Ymd) -> bool {
    (1..=12).contains(&m) && d >= 1 && d <= days_in_month(y, m)
}

pub fn next_day((y, m, d): Ymd) -> Ymd {
    if d < days_in_month(y, m) {
        (y, m, d + 1)
    } else if m < 12 {
        (y, m + 1, 1)
    } else {
        (y + 1, 1, 1)
    }
}

pub fn prev_day((y, m, d): Ymd) -> Ymd {
    if d > 1 {
        (y, m, d - 1)
    } else if m > 1 {
        (y, m - 1, days_in_month(y, m - 1))
    } else {
        (y - 1, 12, 31)
    }
}

/// Every date from `from` to `to`, both inclusive, by walking one day at a time.
pub fn all_dates(from: Ymd, to: Ymd) -> Vec<Ymd> {
    let mut out = Vec::new();
    let mut d = from;
    loop {
        out.push(d);
        if d == to {
            break;
        }
        d = next_day(d);
    }
    out
}

/// Day count since 1900-01-01, summed month by month.
pub fn ordinal((y, m, d): Ymd) -> i64 {
    assert!(y >= 1900, "oracle only covers years from 1900");
    let mut n: i64 = 0;
    for year in 1900..y {
        n += if is_leap(year) { 366 } else { 365 };
    }
    for month in 1..m {
        n += i64::from(days_in_month(y, month));
    }
    n + i64::from(d) - 1
}

/// Whole days from `from` to `to` (negative when `to` is earlier).
pub fn days_between(from: Ymd, to: Ymd) -> i64 {
    ordinal(to) - ordinal(from)
}

/// Walks forward day by day until the month that lies `years` years ahead,
/// then keeps walking while the day-of-month does not pass the original day.
/// The last date visited inside the target month is the answer, so Feb 29
/// lands on Feb 28 in common years.
pub fn add_years(start: Ymd, years: u32) -> Ymd {
    if years == 0 {
        return start;
    }
    let target = (start.0 + years as i32, start.1);
    let mut d = start;
    while (d.0, d.1) != target {
        d = next_day(d);
    }
    loop {
        let n = next_day(d);
        if (n.0, n.1) != target || n.2 > start.2 {
            return d;
        }
        d = n;
    }
}

/// Walks backward day by day until the month `months` months earlier, then
/// keeps walking back until the day-of-month is no later than the original.
pub fn subtract_months(start: Ymd, months: u32) -> Ymd {
    if months == 0 {
        return start;
    }
    let index = start.0 * 12 + start.1 as i32 - 1 - months as i32;
    let target = (index.div_euclid(12), index.rem_euclid(12) as u32 + 1);
    let mut d = start;
    while (d.0, d.1) != target {
        d = prev_day(d);
    }
    while d.2 > start.2 {
        d = prev_day(d);
    }
    d
}

/// Expiry classification computed from scratch: the renewal deadline is the
/// expiry date moved back by the warning window, the expiry date is the start
/// date moved forward by the term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpiryVerdict {
    pub valid_to: Ymd,
    pub deadline: Ymd,
    pub days_remaining: i64,
    pub phase: &'static str,
}

pub fn expiry_verdict(
    valid_from: Ymd,
    as_of: Ymd,
    term_years: u32,
    warning_months: u32,
) -> ExpiryVerdict {
    let valid_to = add_years(valid_from, term_years);
    let deadline = subtract_months(valid_to, warning_months);
    let days_remaining = days_between(as_of, valid_to);
    let phase = if days_remaining <= 0 {
        "Expired"
    } else if ordinal(as_of) >= ordinal(deadline) {
        "InitiationDue"
    } else {
        "Active"
    };
    ExpiryVerdict {
        valid_to,
        deadline,
        days_remaining,
        phase,
    }
}
