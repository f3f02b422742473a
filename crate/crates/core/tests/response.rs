use lambda_detector::dynamics::steady_state;
use lambda_detector::hamiltonian::{collapse_operators, hamiltonian_static, resonator_input, Frame};
use lambda_detector::params::{ghz, mhz, photon_flux_from_dbm, SystemParams};
use lambda_detector::response::{
    dip_map, find_matching_point, pdiff_detuning, pdiff_spectrum, reflection_checked,
    reflection_coefficient, PdiffScan, DEFAULT_PROBE_AMP,
};
use lambda_detector::space::{build_space, C64};
use lambda_detector::sweep::linspace;

fn setup() -> (SystemParams, f64) {
    let p = SystemParams::reference_device();
    let wd = p.omega_ge - mhz(49.0);
    (p, wd)
}

#[test]
fn bare_cavity_is_lorentzian() {
    let (p, wd) = setup();
    let freqs = linspace(p.omega_r - mhz(30.0), p.omega_r + mhz(30.0), 25);
    let mut best = (f64::INFINITY, 0.0);
    for &w in &freqs {
        let r = reflection_coefficient(&p, wd, 0.0, w, DEFAULT_PROBE_AMP).unwrap();
        let want = C64::new(-1.0, 0.0) + p.kappa_ext() / C64::new(0.5 * p.kappa, -(w - p.omega_r));
        assert!((r - want).norm() < 1e-4, "{r} vs {want}");
        if r.norm() < best.0 {
            best = (r.norm(), w);
        }
    }
    assert!((best.1 - p.omega_r).abs() < 1.0);
}

#[test]
fn dip_map_is_probe_independent() {
    let (p, wd) = setup();
    let powers = linspace(-77.0, -75.0, 3);
    let freqs = linspace(ghz(10.262), ghz(10.270), 3);
    let full = dip_map(&p, wd, &powers, &freqs, DEFAULT_PROBE_AMP).unwrap();
    let half = dip_map(&p, wd, &powers, &freqs, 0.5 * DEFAULT_PROBE_AMP).unwrap();
    for (a, b) in full.points.iter().zip(&half.points) {
        assert!((a.r.unwrap().norm() - b.r.unwrap().norm()).abs() < 1e-3);
    }
    assert!(reflection_checked(&p, wd, p.rabi_from_dbm(-76.0), ghz(10.266), DEFAULT_PROBE_AMP).is_ok());
    assert!(full.max_abs() <= 1.0 + 1e-9);
}

#[test]
fn matching_point_refines_grid_minimum() {
    let (p, wd) = setup();
    let powers = linspace(-78.0, -74.0, 9);
    let freqs = linspace(ghz(10.258), ghz(10.274), 9);
    let map = dip_map(&p, wd, &powers, &freqs, DEFAULT_PROBE_AMP).unwrap();
    assert_eq!(map.failures(), 0);
    let m = find_matching_point(&map).unwrap();
    assert!(!m.on_boundary);
    assert!(m.min_abs_r <= m.grid_min_abs_r);
    assert!(m.min_abs_r < 0.1, "{}", m.min_abs_r);
    assert!((m.p_dbm + 75.7).abs() < 1.0, "{}", m.p_dbm);
    assert!((m.omega_s - ghz(10.268)).abs() < mhz(3.0));

    // fewer than one photon in the resonator at the matched point
    let space = build_space(3).unwrap();
    let frame = Frame::new(wd, m.omega_s);
    let h = &hamiltonian_static(&p, frame, space, p.rabi_from_dbm(m.p_dbm), wd).unwrap()
        + &resonator_input(&p, space, C64::new(DEFAULT_PROBE_AMP, 0.0));
    let ss = steady_state(&h, &collapse_operators(&p, space).channels, frame).unwrap();
    assert!(ss.photon_number() < 1.0);
}

#[test]
fn dip_map_rejects_bad_grids() {
    let (p, wd) = setup();
    assert!(dip_map(&p, wd, &[], &[ghz(10.26)], DEFAULT_PROBE_AMP).is_err());
    assert!(dip_map(&p, wd, &[-75.0, -76.0], &[ghz(10.26)], DEFAULT_PROBE_AMP).is_err());
    assert!(dip_map(&p, p.omega_ge + mhz(10.0), &[-75.0], &[ghz(10.26)], DEFAULT_PROBE_AMP).is_err());
}

#[test]
fn branch_separation_grows_with_signal_power() {
    let mut p = SystemParams::reference_device();
    p.gamma = mhz(0.174);
    let wd = p.omega_ge - pdiff_detuning();
    let scan = PdiffScan::default();
    let weak = pdiff_spectrum(&p, wd, photon_flux_from_dbm(-150.0, p.omega_r), scan).unwrap();
    let strong = pdiff_spectrum(&p, wd, photon_flux_from_dbm(-144.0, p.omega_r), scan).unwrap();
    assert!(weak.p_diff_db < strong.p_diff_db, "{} {}", weak.p_diff_db, strong.p_diff_db);
    assert!(weak.p_dip3_dbm > weak.p_dip4_dbm);
}

#[test]
fn lossless_weak_probe_has_small_separation() {
    let mut p = SystemParams::reference_device();
    p.kappa_ext_ratio = 1.0;
    p.gamma = mhz(0.01);
    let wd = p.omega_ge - pdiff_detuning();
    // flux well below the qubit decay rate
    let r = pdiff_spectrum(&p, wd, 1.0, PdiffScan::default()).unwrap();
    assert!(r.p_diff_db < 0.2, "{}", r.p_diff_db);
}
