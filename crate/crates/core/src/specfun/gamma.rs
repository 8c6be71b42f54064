use num_complex::Complex64;
use std::f64::consts::PI;

/// `B_{2k} / (2k (2k − 1))` for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const SHIFT: f64 = 16.0;

/// Principal branch of `ln Γ(z)`, continuous in the right half-plane.
///
/// Stirling series after shifting `Re z` above 16 with the recurrence; the left
/// half-plane goes through the reflection formula.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1−z) = π / sin(πz)
        let s = (Complex64::new(PI, 0.0) * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let mut z = z;
    let mut acc = Complex64::new(0.0, 0.0);
    while z.re < SHIFT {
        acc -= z.ln();
        z += 1.0;
    }
    let ln_z = z.ln();
    let mut sum = (z - 0.5) * ln_z - z + 0.5 * (2.0 * PI).ln();
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in STIRLING {
        sum += pow * c;
        pow *= inv2;
    }
    acc + sum
}

/// `|Γ(1/4 + iν/2)|`, the spectral amplitude of the squeezed vacuum.
pub fn abs_gamma_quarter_line(nu: f64) -> f64 {
    ln_gamma(Complex64::new(0.25, 0.5 * nu)).re.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    // mpmath, 30 digits
    const QUARTER_LINE: [(f64, f64); 7] = [
        (0.0, 3.625_609_908_221_908_3),
        (1.0, 1.405_299_462_169_107_9),
        (2.5, 0.334_665_806_293_543_35),
        (10.0, 6.509_432_558_099_745e-4),
        (40.0, 2.692_014_423_617_204e-14),
        (60.0, 3.665_794_231_226_872_3e-21),
        (-7.3, 5.872_021_814_224_262e-3),
    ];

    #[test]
    fn quarter_line_reference_values() {
        for (nu, want) in QUARTER_LINE {
            let got = abs_gamma_quarter_line(nu);
            assert!(((got - want) / want).abs() < 1e-12, "nu={nu}: {got} vs {want}");
        }
    }

    #[test]
    fn quarter_line_is_even_and_decays() {
        for nu in [0.3, 1.7, 9.0, 33.3] {
            assert_eq!(abs_gamma_quarter_line(nu), abs_gamma_quarter_line(-nu));
        }
        assert!(abs_gamma_quarter_line(40.0) < 1e-12);
    }

    #[test]
    fn half_line_identity() {
        // |Γ(1/2 + iy)|² = π / cosh(πy)
        for y in [0.0, 0.5, 3.0, 12.0, 25.0] {
            let lhs = 2.0 * ln_gamma(Complex64::new(0.5, y)).re;
            let rhs = (PI / (PI * y).cosh()).ln();
            assert!((lhs - rhs).abs() < 1e-12, "y={y}");
        }
    }

    #[test]
    fn reference_complex_values() {
        let cases = [
            ((0.75, 3.2), (-3.817_597_244_967_414, 0.918_041_552_898_793_3)),
            ((0.3, -25.0), (-38.994_733_598_718_01, -55.158_603_080_460_56)),
            ((12.5, 0.1), (18.733_931_090_619_19, 0.248_520_720_509_615_36)),
        ];
        for ((x, y), (re, im)) in cases {
            let g = ln_gamma(Complex64::new(x, y));
            assert!((g.re - re).abs() < 1e-12 * re.abs().max(1.0), "{x}+{y}i re");
            assert!((g.im - im).abs() < 1e-12 * im.abs().max(1.0), "{x}+{y}i im");
        }
    }

    #[test]
    fn reflection_branch() {
        // Γ(−1/2) = −2√π
        let g = ln_gamma(Complex64::new(-0.5, 0.0));
        assert!((g.re - (2.0 * PI.sqrt()).ln()).abs() < 1e-13);
    }
}
