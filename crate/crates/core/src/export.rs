//! Plain-text serialization: fixed significant-digit formatting and CSV
//! tables with a header row and LF line endings.

use std::fmt::Write;

use crate::benchmark::BoundResult;
use crate::quadrature::TabulatedDensity;

/// `x` rounded to `digits` significant digits. Plain notation for
/// `1e−4 ≤ |x| < 1e6`, scientific otherwise; zero prints as `0`.
pub fn format_sig(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}

/// `delta,density` rows.
pub fn density_csv(p: &TabulatedDensity, digits: usize) -> String {
    let mut out = String::from("delta,density\n");
    for (d, v) in p.iter() {
        let _ = writeln!(out, "{},{}", format_sig(d, digits), format_sig(v, digits));
    }
    out
}

/// `mu,f_up,f_lo,n_cut,err` rows.
pub fn bounds_csv(rows: &[BoundResult], digits: usize) -> String {
    let mut out = String::from("mu,f_up,f_lo,n_cut,err\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_sig(r.mu, digits),
            format_sig(r.f_up, digits),
            format_sig(r.f_lo, digits),
            r.n_cut_used,
            format_sig(r.error_estimate, digits)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::DeltaGrid;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(0.8151704067, 6), "0.815170");
        assert_eq!(format_sig(0.8151704067, 3), "0.815");
        assert_eq!(format_sig(-12.5, 4), "-12.50");
        assert_eq!(format_sig(1.0 / 9.0, 6), "0.111111");
        assert_eq!(format_sig(3.2e-9, 3), "3.20e-9");
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(123456.0, 6), "123456");
    }

    #[test]
    fn csv_layout() {
        let p = TabulatedDensity::from_values(DeltaGrid::new(0.5, 1), vec![0.25, 1.5, 0.25], 1.0, 0.0)
            .unwrap();
        assert_eq!(density_csv(&p, 3), "delta,density\n-0.500,0.250\n0,1.50\n0.500,0.250\n");
        let row = BoundResult {
            mu: 0.5,
            f_up: 0.80376,
            f_lo: 0.78125,
            n_cut_used: 14,
            error_estimate: 1e-7,
        };
        assert_eq!(
            bounds_csv(&[row], 4),
            "mu,f_up,f_lo,n_cut,err\n0.5000,0.8038,0.7812,14,1.000e-7\n"
        );
    }
}
