use lambda_detector::ladder::{
    dressed_states, fit_drive_calibration, matching_amplitude, raman_rates, transition_frequency,
};
use lambda_detector::params::{ghz, mhz, SystemParams};
use lambda_detector::sweep::linspace;
use proptest::prelude::*;

fn setup() -> (SystemParams, f64) {
    let p = SystemParams::reference_device();
    let wd = p.omega_ge - mhz(49.0);
    (p, wd)
}

/// Eigenvalues of `[[a, c], [c, b]]`, ascending.
fn two_level(a: f64, b: f64, c: f64) -> (f64, f64) {
    let mean = 0.5 * (a + b);
    let half = (0.25 * (a - b).powi(2) + c * c).sqrt();
    (mean - half, mean + half)
}

#[test]
fn sum_rule_on_fifty_points() {
    let (p, wd) = setup();
    for rabi in linspace(0.0, 2.0 * p.chi, 50) {
        let r = raman_rates(&dressed_states(&p, wd, rabi).unwrap(), &p);
        assert!(((r.k31 + r.k32) - p.kappa).abs() < 1e-9 * p.kappa, "rabi {rabi}");
        assert!(((r.k41 + r.k42) - p.kappa).abs() < 1e-9 * p.kappa, "rabi {rabi}");
    }
}

#[test]
fn doublets_match_closed_form() {
    let (p, wd) = setup();
    let dw = p.omega_ge - wd;
    for rabi in linspace(0.0, 3.0 * p.chi, 31) {
        let l = dressed_states(&p, wd, rabi).unwrap();
        // lower block {|g,0>, |e,0>} in the drive frame
        let (e1, e2) = two_level(0.0, dw, 0.5 * rabi);
        // upper block {|g,1>, |e,1>}
        let g1 = p.omega_r - wd;
        let (lo, hi) = two_level(g1, dw + g1 - 2.0 * p.chi, 0.5 * rabi);
        let scale = p.omega_r - wd;
        assert!((l.energy(1) - e1).abs() < 1e-10 * scale);
        assert!((l.energy(2) - e2).abs() < 1e-10 * scale);
        // labels: |3~> follows |e,1> (the lower bare level of the nested block)
        assert!((l.energy(3) - lo).abs() < 1e-10 * scale);
        assert!((l.energy(4) - hi).abs() < 1e-10 * scale);
        assert!(((e2 - e1) - (dw * dw + rabi * rabi).sqrt()).abs() < 1e-6 * dw);
        assert!(l.orthonormality_error() < 1e-12);
    }
}

#[test]
fn zero_drive_limits() {
    let (p, wd) = setup();
    let l = dressed_states(&p, wd, 0.0).unwrap();
    let r = raman_rates(&l, &p);
    assert!((r.k41 - p.kappa).abs() < 1e-12 * p.kappa);
    assert!(r.k42.abs() < 1e-12 * p.kappa);
    assert!((transition_frequency(&l, 1, 4).unwrap() - p.omega_r).abs() < 1e-6);
    assert!((transition_frequency(&l, 2, 3).unwrap() - (p.omega_r - 2.0 * p.chi)).abs() < 1e-6);
    assert!(transition_frequency(&l, 3, 4).is_err());
}

#[test]
fn matching_point_unique_and_balanced() {
    let (p, wd) = setup();
    let m = matching_amplitude(&p, wd).unwrap();
    let r = raman_rates(&dressed_states(&p, wd, m).unwrap(), &p);
    assert!((r.k41 - 0.5 * p.kappa).abs() < 1e-5 * p.kappa);
    assert!((r.k42 - 0.5 * p.kappa).abs() < 1e-5 * p.kappa);
    // independent scan for sign changes of k41 - k42 on (0, 10 * 2 chi]
    let changes = linspace(1e-3 * p.chi, 20.0 * p.chi, 2000)
        .windows(2)
        .filter(|w| {
            let f = |x: f64| {
                let r = raman_rates(&dressed_states(&p, wd, x).unwrap(), &p);
                r.k41 - r.k42
            };
            f(w[0]).signum() != f(w[1]).signum()
        })
        .count();
    assert_eq!(changes, 1);
    // calibration anchor is exact by construction
    assert!((p.dbm_from_rabi(m) + 75.7).abs() < 1e-9);
    let c = fit_drive_calibration(&p, wd, -75.7).unwrap();
    assert!((c / p.drive_power_to_rabi - 1.0).abs() < 1e-12);
}

#[test]
fn matched_transition_near_dip_frequency() {
    let (p, wd) = setup();
    let m = matching_amplitude(&p, wd).unwrap();
    let w14 = transition_frequency(&dressed_states(&p, wd, m).unwrap(), 1, 4).unwrap();
    assert!((w14 - ghz(10.268)).abs() < mhz(3.0), "{}", w14 / ghz(1.0));
}

#[test]
fn reset_transition_near_reset_frequency() {
    let (p, wd) = setup();
    let l = dressed_states(&p, wd, p.rabi_from_dbm(-72.1)).unwrap();
    let w23 = transition_frequency(&l, 2, 3).unwrap();
    assert!((w23 - ghz(10.162)).abs() < mhz(5.0), "{}", w23 / ghz(1.0));
}

#[test]
fn branch_ratio_at_operating_power() {
    let (p, wd) = setup();
    let r = raman_rates(&dressed_states(&p, wd, p.rabi_from_dbm(-75.5)).unwrap(), &p);
    assert!((r.k41 / p.kappa - 0.49).abs() <= 0.02, "{}", r.k41 / p.kappa);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_rule_any_drive(rabi_mhz in 0.0f64..200.0, detuning_mhz in 1.0f64..68.0) {
        let p = SystemParams::reference_device();
        let wd = p.omega_ge - mhz(detuning_mhz);
        let l = dressed_states(&p, wd, mhz(rabi_mhz)).unwrap();
        let r = raman_rates(&l, &p);
        prop_assert!(((r.k41 + r.k42) / p.kappa - 1.0).abs() < 1e-9);
        prop_assert!(((r.k31 + r.k32) / p.kappa - 1.0).abs() < 1e-9);
        prop_assert!(l.energy(1) <= l.energy(2) && l.energy(3) <= l.energy(4));
    }
}
