//! Normalized Hermite functions `ψ_n(x) = ⟨x|n⟩`.

const PI_QUARTER_INV: f64 = 0.751_125_544_464_942_5; // π^{-1/4}

/// `ψ_n(x)` by the three-term recurrence.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = PI_QUARTER_INV * (-0.5 * x * x).exp();
    for k in 1..=n {
        let k = k as f64;
        let next = (2.0 / k).sqrt() * x * cur - ((k - 1.0) / k).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Walks `ψ_0, ψ_1, …` over a fixed set of abscissae, one order at a time.
pub struct HermiteSweep<'a> {
    x: &'a [f64],
    prev: Vec<f64>,
    cur: Vec<f64>,
    order: usize,
}

impl<'a> HermiteSweep<'a> {
    pub fn new(x: &'a [f64]) -> Self {
        let cur = x
            .iter()
            .map(|&x| PI_QUARTER_INV * (-0.5 * x * x).exp())
            .collect();
        HermiteSweep {
            x,
            prev: vec![0.0; x.len()],
            cur,
            order: 0,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Values of `ψ_order` at every abscissa.
    pub fn values(&self) -> &[f64] {
        &self.cur
    }

    pub fn advance(&mut self) {
        let k = (self.order + 1) as f64;
        let a = (2.0 / k).sqrt();
        let b = ((k - 1.0) / k).sqrt();
        for ((p, c), &x) in self.prev.iter_mut().zip(self.cur.iter_mut()).zip(self.x) {
            let next = a * x * *c - b * *p;
            *p = *c;
            *c = next;
        }
        self.order += 1;
    }

    pub fn advance_to(&mut self, n: usize) {
        while self.order < n {
            self.advance();
        }
    }
}
