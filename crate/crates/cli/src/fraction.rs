//! Purity and ratio arguments: decimals or exact fractions such as `19/21`.

/// Parse `p/q` as the correctly rounded quotient of two integers, or a plain
/// decimal.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
            let q: i64 = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
            if q == 0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            if p.unsigned_abs() > 1 << 53 || q.unsigned_abs() > 1 << 53 {
                return Err(format!("{s:?} is not exactly representable"));
            }
            p as f64 / q as f64
        }
        None => s.parse().map_err(|_| format!("{s:?} is not a number"))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s:?} is not finite"))
    }
}

/// Comma-separated list of numbers.
pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').map(parse_number).collect()
}

/// `START:STOP:COUNT`, endpoints included.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, n] = parts[..] else {
        return Err(format!("range {s:?} must look like START:STOP:COUNT"));
    };
    let (a, b) = (parse_number(a)?, parse_number(b)?);
    let n: usize = n.trim().parse().map_err(|_| format!("bad count in {s:?}"))?;
    match n {
        0 => Err("range count must be positive".into()),
        1 => Ok(vec![a]),
        _ => Ok((0..n)
            .map(|i| if i == n - 1 { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
            .collect()),
    }
}
