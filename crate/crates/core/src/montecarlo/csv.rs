//! CSV serialization of experiment results.

use super::entry::OutcomeHistogram;
use super::sweep::SweepResult;
use crate::rational::to_f64;

pub const SWEEP_HEADER: &str = "p,speed_class,collision_rate,fatality_rate,stderr,iterations";
pub const HISTOGRAM_HEADER: &str = "profile,case,count,fraction";

/// Formats like C's `%.12g`.
pub fn format_number(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..DIGITS).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (DIGITS - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in &result.rows {
        let fatality = row.fatality_rate.map(format_number).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            format_number(to_f64(&row.p)),
            row.speed_class.label(),
            format_number(row.collision_rate),
            fatality,
            format_number(row.standard_error),
            row.iterations
        ));
    }
    out
}

/// Rows for the three cases, then COLLISION, MISJUDGMENT and MISJUDGMENT_GLOBAL.
pub fn histogram_csv(histograms: &[OutcomeHistogram]) -> String {
    let mut out = String::from(HISTOGRAM_HEADER);
    out.push('\n');
    for h in histograms {
        for (name, count) in h.rows() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                h.profile,
                name,
                count,
                format_number(count as f64 / h.iterations as f64)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_percent_g() {
        let cases = [
            (1.0, "1"),
            (0.5, "0.5"),
            (98.0 / 57681.0, "0.0016989996706"),
            (1.0 / 3.0, "0.333333333333"),
            (3.6e-4, "0.00036"),
            (1.2e-5, "1.2e-05"),
            (123456789012345.0, "1.23456789012e+14"),
            (-2.5, "-2.5"),
            (0.1 + 0.2, "0.3"),
        ];
        for (x, want) in cases {
            assert_eq!(format_number(x), want, "{x}");
        }
    }
}
