use crate::error::{Error, Result};

const INTEGER_EPS: f64 = 1e-12;

/// Degree of the polynomial when `p` is a non-positive integer.
fn terminating_degree(p: f64) -> Option<usize> {
    let k = (-p).round();
    (p <= INTEGER_EPS && (p + k).abs() < INTEGER_EPS).then_some(k as usize)
}

/// `₂F₁(a, b; c; x)` for the terminating case, summed term by term.
///
/// One of `a`, `b` must be a non-positive integer `−k`; the result is then a
/// polynomial of degree `k` in `x`. Non-terminating parameters are rejected.
pub fn hyp2f1_terminating(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let degree = match (terminating_degree(a), terminating_degree(b)) {
        (Some(i), Some(j)) => i.min(j),
        (Some(i), None) | (None, Some(i)) => i,
        (None, None) => {
            return Err(Error::Unsupported(format!(
                "2F1({a}, {b}; {c}; x) does not terminate"
            )))
        }
    };
    if let Some(m) = terminating_degree(c) {
        if m < degree {
            return Err(Error::Unsupported(format!(
                "2F1 lower parameter c = {c} hits a pole before termination"
            )));
        }
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..degree {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
    }
    Ok(sum)
}
