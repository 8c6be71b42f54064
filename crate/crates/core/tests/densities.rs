use std::sync::OnceLock;

use squeeze_bench::benchmark::{bounds, cft_pure, cross_pure_fidelity};
use squeeze_bench::estimation::{p_opt_vacuum, thermal_cutoff, NORM_TOL};
use squeeze_bench::quadrature::integrate_real_line;
use squeeze_bench::specfun::Seed;
use squeeze_bench::{EstimationKind, Estimator, Purity, QuadConfig, TabulatedDensity};

/// `(2π)^{−5/2} ∫∫ |Γ(¼+iν/2)Γ(¼+iν'/2)| π sech(π(ν−ν')/2) dν dν'` at 20 digits.
const PURE_CFT_REFERENCE: f64 = 0.815_170_406_717_737_1;

fn est() -> &'static Estimator {
    static EST: OnceLock<Estimator> = OnceLock::new();
    EST.get_or_init(|| Estimator::new(QuadConfig::default()).unwrap())
}

fn assert_density(p: &TabulatedDensity, what: &str) {
    assert!(p.values.iter().all(|&v| v >= 0.0), "{what}: negative value");
    let peak = p.values.iter().cloned().fold(0.0, f64::max);
    assert!(p.asymmetry() <= 1e-9 * peak.max(f64::MIN_POSITIVE), "{what}: not even");
    assert!(p.norm_defect <= NORM_TOL, "{what}: defect {:e}", p.norm_defect);
}

#[test]
fn pure_cft_matches_double_integral() {
    let e = cft_pure(est()).unwrap();
    assert!((e.value - PURE_CFT_REFERENCE).abs() < 1e-9, "{}", e.value);
    assert!(e.error < 1e-8);
}

#[test]
fn every_density_is_a_density() {
    let n_max = thermal_cutoff(Purity::new(1.0 / 9.0).unwrap());
    assert_density(&est().opt_vacuum().unwrap(), "opt-vacuum");
    for n in 0..=n_max {
        assert_density(&est().opt_fock(n).unwrap(), &format!("opt-fock {n}"));
        let p = est().cross(n, Seed::matching(n)).unwrap();
        assert_density(&p, &format!("cross {n}"));
        assert!((p.mass - 1.0).abs() < NORM_TOL);
    }
    for mu in [0.2, 0.5, 0.9] {
        let mu = Purity::new(mu).unwrap();
        assert_density(&est().thermal_lower(mu, thermal_cutoff(mu)).unwrap(), "thermal");
    }
}

#[test]
fn parity_mismatch_vanishes() {
    let p = est().density(EstimationKind::Cross { n: 2, seed: Seed::OnePhoton }).unwrap();
    assert!(p.is_zero());
    assert_eq!(p.target_mass, 0.0);
}

#[test]
fn one_off_and_cached_forms_agree() {
    let cached = est().opt_vacuum().unwrap();
    let fresh = p_opt_vacuum(&QuadConfig::default()).unwrap();
    assert_eq!(cached.values, fresh.values);
}

#[test]
fn spectrum_at_zero_matches_riemann_sum() {
    // ⟨2|U(λ)|2⟩ = √(sech λ)·(3 sech²λ − 1)/2
    let f = |l: f64| {
        let s = 1.0 / f64::cosh(l);
        s.sqrt() * (3.0 * s * s - 1.0) / 2.0
    };
    let h = 2e-4;
    let riemann: f64 = (-500_000..=500_000).map(|j| f(j as f64 * h)).sum::<f64>() * h;
    let cfg = QuadConfig::default();
    let direct = integrate_real_line(f, &cfg).unwrap().value;
    assert!((direct - riemann).abs() < 1e-9);
    let i20 = est().i_n_nu(2, 0.0).unwrap();
    assert!((i20 - riemann / (2.0 * std::f64::consts::PI)).abs() < 1e-9, "{i20} vs {riemann}");
}

#[test]
fn group_route_agrees_with_log_position_route() {
    for (n, seed) in [(2, Seed::Vacuum), (3, Seed::OnePhoton)] {
        let a = est().cross(n, seed).unwrap();
        let b = est().cross_group_route(n, seed).unwrap();
        assert!(a.total_variation(&b) < 1e-5, "({n},{seed:?})");
    }
}

#[test]
fn seed_expectations_are_below_one() {
    for n in [0, 1, 2, 5, 8] {
        let e = cross_pure_fidelity(n, Seed::matching(n), est()).unwrap();
        assert!(e.value > 0.0 && e.value < 1.0);
    }
}

#[test]
fn bounds_are_ordered_and_meet_at_unit_purity() {
    for mu in [1.0 / 9.0, 0.25, 0.5, 0.75] {
        let b = bounds(Purity::new(mu).unwrap(), est()).unwrap();
        assert!(b.f_lo < b.f_up, "mu = {mu}");
    }
    let b = bounds(Purity::PURE, est()).unwrap();
    assert!((b.f_up - b.f_lo).abs() < 1e-12);
    assert!((b.f_up - PURE_CFT_REFERENCE).abs() < 1e-9);
}
