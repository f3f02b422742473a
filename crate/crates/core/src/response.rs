//! Continuous-wave reflection spectroscopy.
//!
//! The reflection coefficient follows from the steady state of the static
//! two-tone Liouvillian in the frame `(omega_d, omega_s)`:
//! `r = -1 + sqrt(kappa_ext) <a> / alpha`.

use rayon::prelude::*;

use crate::dynamics::steady_state;
use crate::error::{Error, Result};
use crate::hamiltonian::{collapse_operators, hamiltonian_static, resonator_input, Frame};
use crate::ladder::{dressed_states, transition_frequency};
use crate::params::{mhz, photon_flux_from_dbm, SystemParams};
use crate::space::{build_space, C64};
use crate::sweep::{check_grid, grid_extremum};

/// Photon cutoff used for CW steady states.
pub const CW_N_MAX: usize = 3;

/// Default weak-probe amplitude in sqrt(photons/s) (a flux of 100 photons/s).
pub const DEFAULT_PROBE_AMP: f64 = 10.0;

/// Largest change of `|r|` tolerated when the probe amplitude is halved.
pub const PROBE_CONVERGENCE_TOL: f64 = 1e-3;

/// Reflection coefficient at probe amplitude `probe_amp` (sqrt(photons/s)).
pub fn reflection_coefficient(
    params: &SystemParams,
    omega_d: f64,
    rabi: f64,
    omega_s: f64,
    probe_amp: f64,
) -> Result<C64> {
    reflection_with_cutoff(params, omega_d, rabi, omega_s, probe_amp, CW_N_MAX)
}

pub fn reflection_with_cutoff(
    params: &SystemParams,
    omega_d: f64,
    rabi: f64,
    omega_s: f64,
    probe_amp: f64,
    n_max: usize,
) -> Result<C64> {
    params.validate()?;
    if !(probe_amp > 0.0) {
        return Err(Error::InvalidParameter { name: "probe_amp", reason: "must be positive".into() });
    }
    let space = build_space(n_max)?;
    let frame = Frame::new(omega_d, omega_s);
    let alpha = C64::new(probe_amp, 0.0);
    let h = &hamiltonian_static(params, frame, space, rabi, omega_d)?
        + &resonator_input(params, space, alpha);
    let diss = collapse_operators(params, space);
    let rho = steady_state(&h, &diss.channels, frame)?;
    Ok(C64::new(-1.0, 0.0) + rho.field() * diss.kappa_ext.sqrt() / alpha)
}

/// Like [`reflection_coefficient`] but also evaluates at half the probe and
/// fails with [`Error::ProbeNotConverged`] when `|r|` moves by `1e-3` or more.
pub fn reflection_checked(
    params: &SystemParams,
    omega_d: f64,
    rabi: f64,
    omega_s: f64,
    probe_amp: f64,
) -> Result<C64> {
    let r = reflection_coefficient(params, omega_d, rabi, omega_s, probe_amp)?;
    let r_half = reflection_coefficient(params, omega_d, rabi, omega_s, 0.5 * probe_amp)?;
    let delta = (r.norm() - r_half.norm()).abs();
    if delta >= PROBE_CONVERGENCE_TOL {
        return Err(Error::ProbeNotConverged { delta });
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionPoint {
    pub p_dbm: f64,
    pub omega_s: f64,
    /// `None` when the steady-state solve failed; see `error`.
    pub r: Option<C64>,
    pub error: Option<String>,
}

/// `|r|` over drive power (rows) and signal frequency (columns), row-major.
#[derive(Debug, Clone)]
pub struct ReflectionMap {
    pub powers_dbm: Vec<f64>,
    pub freqs: Vec<f64>,
    pub omega_d: f64,
    pub probe_amp: f64,
    pub params: SystemParams,
    pub points: Vec<ReflectionPoint>,
}

impl ReflectionMap {
    pub fn at(&self, i_power: usize, j_freq: usize) -> &ReflectionPoint {
        &self.points[i_power * self.freqs.len() + j_freq]
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.r.is_none()).count()
    }

    /// Largest `|r|` over successful points.
    pub fn max_abs(&self) -> f64 {
        self.points.iter().filter_map(|p| p.r).map(|r| r.norm()).fold(0.0, f64::max)
    }

    /// Local minima of `|r|` along frequency in row `i_power`, as column indices.
    pub fn frequency_minima(&self, i_power: usize) -> Vec<usize> {
        let n = self.freqs.len();
        let v: Vec<f64> =
            (0..n).map(|j| self.at(i_power, j).r.map_or(f64::INFINITY, |r| r.norm())).collect();
        (1..n.saturating_sub(1)).filter(|&j| v[j] < v[j - 1] && v[j] < v[j + 1]).collect()
    }

    /// CSV with columns `P_d_dBm, omega_s_GHz, abs_r, abs_r_dB, arg_r`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("P_d_dBm,omega_s_GHz,abs_r,abs_r_dB,arg_r\n");
        for p in &self.points {
            let (abs, db, arg) = match p.r {
                Some(r) => (r.norm(), 20.0 * r.norm().log10(), r.arg()),
                None => (f64::NAN, f64::NAN, f64::NAN),
            };
            s.push_str(&format!(
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}\n",
                p.p_dbm,
                crate::params::to_ghz(p.omega_s),
                abs,
                db,
                arg
            ));
        }
        s
    }
}

/// Reflection over a drive-power x signal-frequency grid, evaluated in parallel.
///
/// Per-point failures are recorded in the map rather than aborting it.
pub fn dip_map(
    params: &SystemParams,
    omega_d: f64,
    power_grid: &[f64],
    freq_grid: &[f64],
    probe_amp: f64,
) -> Result<ReflectionMap> {
    check_grid(power_grid, "drive power")?;
    check_grid(freq_grid, "signal frequency")?;
    params.check_nesting(omega_d)?;
    let cells: Vec<(f64, f64)> =
        power_grid.iter().flat_map(|&p| freq_grid.iter().map(move |&w| (p, w))).collect();
    let points = cells
        .par_iter()
        .map(|&(p_dbm, omega_s)| {
            let rabi = params.rabi_from_dbm(p_dbm);
            match reflection_coefficient(params, omega_d, rabi, omega_s, probe_amp) {
                Ok(r) => ReflectionPoint { p_dbm, omega_s, r: Some(r), error: None },
                Err(e) => ReflectionPoint { p_dbm, omega_s, r: None, error: Some(e.to_string()) },
            }
        })
        .collect();
    Ok(ReflectionMap {
        powers_dbm: power_grid.to_vec(),
        freqs: freq_grid.to_vec(),
        omega_d,
        probe_amp,
        params: *params,
        points,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchingPoint {
    pub p_dbm: f64,
    pub omega_s: f64,
    pub min_abs_r: f64,
    /// Raw grid minimum before refinement.
    pub grid_min_abs_r: f64,
    /// The grid argmin lies on the edge of the map.
    pub on_boundary: bool,
}

/// Grid argmin of `|r|` refined by parabolic interpolation of `ln|r|` along both axes.
pub fn find_matching_point(map: &ReflectionMap) -> Result<MatchingPoint> {
    let logs: Vec<Option<f64>> = map.points.iter().map(|p| p.r.map(|r| r.norm().ln())).collect();
    let e = grid_extremum(&map.powers_dbm, &map.freqs, &logs, false)?;
    Ok(MatchingPoint {
        p_dbm: e.x_row,
        omega_s: e.x_col,
        min_abs_r: e.value.exp(),
        grid_min_abs_r: e.grid_value.exp(),
        on_boundary: e.on_boundary,
    })
}

/// Drive detuning used for the two-dip power calibration.
pub fn pdiff_detuning() -> f64 {
    mhz(46.0)
}

/// Drive-power window scanned for the branch dips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdiffScan {
    pub p_lo_dbm: f64,
    pub p_hi_dbm: f64,
    pub coarse_points: usize,
}

impl Default for PdiffScan {
    fn default() -> Self {
        PdiffScan { p_lo_dbm: -90.0, p_hi_dbm: -62.0, coarse_points: 57 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdiffResult {
    /// Drive power of the deepest dip on the `|1~> -> |3~>` branch.
    pub p_dip3_dbm: f64,
    /// Drive power of the deepest dip on the `|1~> -> |4~>` branch.
    pub p_dip4_dbm: f64,
    /// Signal frequencies of the two dips.
    pub omega_dip3: f64,
    pub omega_dip4: f64,
    pub depth3: f64,
    pub depth4: f64,
    pub p_diff_db: f64,
}

/// Golden-section minimization of a unimodal function on `[lo, hi]`.
fn golden_min<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 < f2 { (x1, f1) } else { (x2, f2) })
}

/// Frequency and depth of the deepest `|r|` near the branch transition at drive power `p_dbm`.
fn branch_depth(params: &SystemParams, omega_d: f64, p_dbm: f64, upper: usize, flux: f64) -> Result<(f64, f64)> {
    let rabi = params.rabi_from_dbm(p_dbm);
    let ladder = dressed_states(params, omega_d, rabi)?;
    let w0 = transition_frequency(&ladder, 1, upper)?;
    let half = params.kappa;
    let amp = flux.sqrt();
    golden_min(
        |w| Ok(reflection_coefficient(params, omega_d, rabi, w, amp)?.norm()),
        w0 - half,
        w0 + half,
        1e-4 * params.kappa,
    )
}

/// Drive power of the deepest dip on one branch: coarse scan, then golden refinement.
fn branch_dip(
    params: &SystemParams,
    omega_d: f64,
    upper: usize,
    flux: f64,
    scan: PdiffScan,
) -> Result<(f64, f64, f64)> {
    let n = scan.coarse_points.max(3);
    let grid: Vec<f64> =
        (0..n).map(|k| scan.p_lo_dbm + (scan.p_hi_dbm - scan.p_lo_dbm) * k as f64 / (n - 1) as f64).collect();
    let depths = grid
        .par_iter()
        .map(|&p| branch_depth(params, omega_d, p, upper, flux).map(|(_, d)| d))
        .collect::<Result<Vec<f64>>>()?;
    let k = depths
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .ok_or(Error::EmptyGrid)?;
    if k == 0 || k + 1 == n {
        let scan_text = grid
            .iter()
            .zip(&depths)
            .map(|(p, d)| format!("{p:.2}:{d:.4}"))
            .collect::<Vec<_>>()
            .join(" ");
        return Err(Error::UnresolvedDips {
            reason: format!("branch |{upper}~> minimum on the scan boundary"),
            scan: scan_text,
        });
    }
    let (p, depth) =
        golden_min(|p| branch_depth(params, omega_d, p, upper, flux).map(|(_, d)| d), grid[k - 1], grid[k + 1], 1e-3)?;
    let (w, _) = branch_depth(params, omega_d, p, upper, flux)?;
    Ok((p, w, depth))
}

/// Separation in drive power between the reflection dips of the two Raman
/// branches, probed with a CW signal of `signal_flux` photons/s.
pub fn pdiff_spectrum(
    params: &SystemParams,
    omega_d: f64,
    signal_flux: f64,
    scan: PdiffScan,
) -> Result<PdiffResult> {
    params.check_nesting(omega_d)?;
    if !(signal_flux > 0.0) {
        return Err(Error::InvalidParameter { name: "signal_flux", reason: "must be positive".into() });
    }
    let (p3, w3, d3) = branch_dip(params, omega_d, 3, signal_flux, scan)?;
    let (p4, w4, d4) = branch_dip(params, omega_d, 4, signal_flux, scan)?;
    Ok(PdiffResult {
        p_dip3_dbm: p3,
        p_dip4_dbm: p4,
        omega_dip3: w3,
        omega_dip4: w4,
        depth3: d3,
        depth4: d4,
        p_diff_db: (p3 - p4).abs(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdiffCalibration {
    /// Signal power (dBm at the resonator frequency) reproducing the target separation.
    pub signal_dbm: f64,
    pub signal_flux: f64,
    pub result: PdiffResult,
    /// `result.p_diff_db - target`.
    pub residual_db: f64,
}

/// Bisection on the signal power in `[lo_dbm, hi_dbm]` until the two-dip
/// separation is within `0.05` dB of `target_db`.
pub fn calibrate_signal_power(
    params: &SystemParams,
    omega_d: f64,
    target_db: f64,
    lo_dbm: f64,
    hi_dbm: f64,
    scan: PdiffScan,
) -> Result<PdiffCalibration> {
    let eval = |p: f64| -> Result<(f64, PdiffResult)> {
        let flux = photon_flux_from_dbm(p, params.omega_r);
        let res = pdiff_spectrum(params, omega_d, flux, scan)?;
        Ok((flux, res))
    };
    let (mut lo, mut hi) = (lo_dbm, hi_dbm);
    let (_, r_lo) = eval(lo)?;
    let (_, r_hi) = eval(hi)?;
    if (r_lo.p_diff_db - target_db) * (r_hi.p_diff_db - target_db) > 0.0 {
        return Err(Error::UnresolvedDips {
            reason: format!("target {target_db} dB not bracketed by signal powers [{lo_dbm}, {hi_dbm}] dBm"),
            scan: format!("{:.3} dB .. {:.3} dB", r_lo.p_diff_db, r_hi.p_diff_db),
        });
    }
    let rising = r_hi.p_diff_db > r_lo.p_diff_db;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (flux, res) = eval(mid)?;
        let residual = res.p_diff_db - target_db;
        if residual.abs() < 0.05 {
            return Ok(PdiffCalibration { signal_dbm: mid, signal_flux: flux, result: res, residual_db: residual });
        }
        if (residual < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::UnresolvedDips { reason: "bisection did not converge".into(), scan: format!("[{lo}, {hi}] dBm") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ghz;

    #[test]
    fn empty_cavity_on_resonance() {
        let p = SystemParams::reference_device();
        let wd = p.omega_ge - mhz(49.0);
        let r = reflection_coefficient(&p, wd, 0.0, p.omega_r, DEFAULT_PROBE_AMP).unwrap();
        // Dispersive coupling is idle with the qubit in its ground state.
        assert!((r.re - (2.0 * p.kappa_ext_ratio - 1.0)).abs() < 1e-6);
        assert!(r.im.abs() < 1e-6);
    }

    #[test]
    fn far_detuned_reflection_is_total() {
        let p = SystemParams::reference_device();
        let wd = p.omega_ge - mhz(49.0);
        let r = reflection_coefficient(&p, wd, 0.0, p.omega_r + 150.0 * p.kappa, DEFAULT_PROBE_AMP).unwrap();
        assert!((r.norm() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn probe_check_flags_strong_probe() {
        let p = SystemParams::reference_device();
        let wd = p.omega_ge - mhz(49.0);
        let rabi = crate::ladder::matching_amplitude(&p, wd).unwrap();
        let w14 = transition_frequency(&dressed_states(&p, wd, rabi).unwrap(), 1, 4).unwrap();
        assert!(reflection_checked(&p, wd, rabi, w14, DEFAULT_PROBE_AMP).is_ok());
        let strong = reflection_checked(&p, wd, rabi, w14, 3e3);
        assert!(matches!(strong, Err(Error::ProbeNotConverged { .. })));
    }

    #[test]
    fn bare_cavity_map_minimum_at_resonance() {
        let p = SystemParams::reference_device();
        let wd = p.omega_ge - mhz(49.0);
        let mut p0 = p;
        p0.drive_power_to_rabi = 1e-30;
        let freqs: Vec<f64> = (0..9).map(|k| p.omega_r + (k as f64 - 4.0) * mhz(2.0)).collect();
        let map = dip_map(&p0, wd, &[-100.0], &freqs, DEFAULT_PROBE_AMP).unwrap();
        let mp = find_matching_point(&map).unwrap();
        assert!((mp.omega_s - p.omega_r).abs() < ghz(1e-6));
        assert!(mp.min_abs_r <= mp.grid_min_abs_r);
    }
}
