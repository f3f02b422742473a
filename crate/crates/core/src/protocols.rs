//! Time-gated protocols: single-photon detection, dark counts, the fast
//! reset and the combined detect-reset cycle.

use rayon::prelude::*;

use crate::dynamics::{propagate, DensityState, IntegratorOptions, Trajectory};
use crate::error::{Error, Result};
use crate::hamiltonian::Frame;
use crate::params::{ns, SystemParams};
use crate::pulse::{drive_length_for_signal, PulseRole, PulseSchedule, PulseTiming};
use crate::space::build_space;
use crate::sweep::{band_above, check_grid, grid_extremum, GridExtremum};

/// Readout stage budget after a detection (delay plus acquisition).
pub const READOUT_BUDGET: f64 = 140e-9;

/// Total length of the reset stage.
pub const RESET_STAGE: f64 = 410e-9;

/// Qubit assignment errors of the readout.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReadoutModel {
    /// Probability of reading `e` for a qubit in `g`.
    pub eps_ge: f64,
    /// Probability of reading `g` for a qubit in `e`.
    pub eps_eg: f64,
}

impl ReadoutModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("eps_ge", self.eps_ge), ("eps_eg", self.eps_eg)] {
            if !(0.0..0.5).contains(&v) {
                return Err(Error::InvalidParameter { name, reason: "must lie in [0, 0.5)".into() });
            }
        }
        Ok(())
    }

    /// Probability that the readout reports `e`.
    pub fn click_probability(&self, p_e: f64) -> f64 {
        (1.0 - self.eps_eg) * p_e + self.eps_ge * (1.0 - p_e)
    }
}

/// Numerical settings shared by all protocol runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub n_max: usize,
    /// Photon cutoff for schedules containing a reset pulse (at least `n_max`).
    pub reset_n_max: usize,
    pub integrator: IntegratorOptions,
    pub timing: PulseTiming,
}

impl Default for SimSettings {
    fn default() -> Self {
        SimSettings { n_max: 3, reset_n_max: 6, integrator: IntegratorOptions::default(), timing: PulseTiming::default() }
    }
}

/// Qubit drive and signal frequency of a detection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    pub omega_d: f64,
    pub rabi: f64,
    pub omega_s: f64,
}

impl OperatingPoint {
    pub fn from_dbm(params: &SystemParams, omega_d: f64, p_dbm: f64, omega_s: f64) -> Self {
        OperatingPoint { omega_d, rabi: params.rabi_from_dbm(p_dbm), omega_s }
    }
}

/// Health of the runs behind an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunHealth {
    /// Trace, Hermiticity and positivity held at every sample.
    pub invariants_ok: bool,
    /// Largest relative change at `n_max + 1`, when checked.
    pub fock_delta: Option<f64>,
}

impl RunHealth {
    fn of(traj: &Trajectory) -> Self {
        RunHealth { invariants_ok: traj.invariants_hold(), fock_delta: traj.fock_delta }
    }

    fn merge(self, other: RunHealth) -> Self {
        let fock_delta = match (self.fock_delta, other.fock_delta) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        };
        RunHealth { invariants_ok: self.invariants_ok && other.invariants_ok, fock_delta }
    }

    pub fn flagged(&self) -> bool {
        !self.invariants_ok || self.fock_delta.is_some_and(|d| d >= 1e-3)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionOutcome {
    pub p_e: f64,
    pub p_dark: f64,
    /// `(P_e - P_dark) / (1 - exp(-n_s))`; `None` for `n_s = 0`.
    pub eta: Option<f64>,
    /// Readout click probability for `p_e`.
    pub click: f64,
    pub n_s: f64,
    pub t_s: f64,
    pub op: OperatingPoint,
    pub health: RunHealth,
}

impl DetectionOutcome {
    pub const CSV_HEADER: &'static str = "P_d_dBm,omega_s_GHz,t_s_ns,n_s,P_e,P_dark,eta,click,flagged";

    pub fn csv_row(&self, params: &SystemParams) -> String {
        format!(
            "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{}",
            params.dbm_from_rabi(self.op.rabi),
            crate::params::to_ghz(self.op.omega_s),
            self.t_s * 1e9,
            self.n_s,
            self.p_e,
            self.p_dark,
            self.eta.unwrap_or(f64::NAN),
            self.click,
            self.health.flagged() as u8
        )
    }
}

/// Poisson vacuum probability of a coherent pulse.
pub fn vacuum_probability(n_s: f64) -> f64 {
    (-n_s).exp()
}

/// Efficiency with the dark count subtracted.
pub fn efficiency(p_e: f64, p_dark: f64, n_s: f64) -> Option<f64> {
    (n_s > 0.0).then(|| (p_e - p_dark) / (1.0 - vacuum_probability(n_s)))
}

fn initial_state(params: &SystemParams, settings: &SimSettings, frame: Frame, t0: f64) -> Result<DensityState> {
    let space = build_space(settings.n_max)?;
    Ok(DensityState::initial(space, params.init_excited_pop, t0, frame))
}

fn run_schedule(params: &SystemParams, schedule: &PulseSchedule, settings: &SimSettings) -> Result<(f64, RunHealth)> {
    let rho0 = initial_state(params, settings, schedule.frame, schedule.start().min(0.0))?;
    let traj = propagate(&rho0, schedule, params, &settings.integrator)?;
    Ok((traj.final_state.excited_population(), RunHealth::of(&traj)))
}

/// Excited population at readout for one detection schedule.
fn detection_pe(
    params: &SystemParams,
    op: OperatingPoint,
    t_s: f64,
    n_s: f64,
    settings: &SimSettings,
) -> Result<(f64, RunHealth)> {
    let schedule = PulseSchedule::detection(op.omega_d, op.rabi, op.omega_s, t_s, n_s, settings.timing);
    run_schedule(params, &schedule, settings)
}

fn check_detection_inputs(params: &SystemParams, op: OperatingPoint, t_s: f64, n_s: f64) -> Result<()> {
    params.check_nesting(op.omega_d)?;
    if !(t_s > 0.0) {
        return Err(Error::InvalidParameter { name: "t_s", reason: "must be positive".into() });
    }
    if !(n_s >= 0.0 && n_s.is_finite()) {
        return Err(Error::InvalidParameter { name: "n_s", reason: "must be non-negative".into() });
    }
    Ok(())
}

/// Dark-count probability: the detection protocol without a signal.
///
/// The result does not depend on the signal frequency, so it is evaluated in
/// the frame of the bare resonator.
pub fn dark_count(params: &SystemParams, op: OperatingPoint, t_s: f64, settings: &SimSettings) -> Result<f64> {
    dark_run(params, op, t_s, settings).map(|(p, _)| p)
}

fn dark_run(params: &SystemParams, op: OperatingPoint, t_s: f64, settings: &SimSettings) -> Result<(f64, RunHealth)> {
    check_detection_inputs(params, op, t_s, 0.0)?;
    let dark_op = OperatingPoint { omega_s: params.omega_r, ..op };
    detection_pe(params, dark_op, t_s, 0.0, settings)
}

fn outcome_with_dark(
    params: &SystemParams,
    op: OperatingPoint,
    t_s: f64,
    n_s: f64,
    readout: &ReadoutModel,
    settings: &SimSettings,
    dark: (f64, RunHealth),
) -> Result<DetectionOutcome> {
    let (p_e, health) = if n_s > 0.0 { detection_pe(params, op, t_s, n_s, settings)? } else { dark };
    Ok(DetectionOutcome {
        p_e,
        p_dark: dark.0,
        eta: efficiency(p_e, dark.0, n_s),
        click: readout.click_probability(p_e),
        n_s,
        t_s,
        op,
        health: health.merge(dark.1),
    })
}

/// One detection attempt: a flat-top drive of length `1.5 t_s + 50 ns` with a
/// concurrent Gaussian signal of FWHM `t_s` carrying `n_s` photons, read out
/// when the drive has returned to zero. The dark count comes from an
/// identical run without the signal.
pub fn detection_run(
    params: &SystemParams,
    op: OperatingPoint,
    t_s: f64,
    n_s: f64,
    readout: &ReadoutModel,
    settings: &SimSettings,
) -> Result<DetectionOutcome> {
    check_detection_inputs(params, op, t_s, n_s)?;
    readout.validate()?;
    let dark = dark_run(params, op, t_s, settings)?;
    outcome_with_dark(params, op, t_s, n_s, readout, settings, dark)
}

/// Full trajectory of one detection attempt with the signal present.
pub fn detection_trajectory(
    params: &SystemParams,
    op: OperatingPoint,
    t_s: f64,
    n_s: f64,
    settings: &SimSettings,
) -> Result<Trajectory> {
    check_detection_inputs(params, op, t_s, n_s)?;
    let schedule = PulseSchedule::detection(op.omega_d, op.rabi, op.omega_s, t_s, n_s, settings.timing);
    let rho0 = initial_state(params, settings, schedule.frame, schedule.start().min(0.0))?;
    propagate(&rho0, &schedule, params, &settings.integrator)
}

/// Detection efficiency over drive power (rows) and signal frequency (columns).
#[derive(Debug, Clone)]
pub struct EfficiencyMap {
    pub powers_dbm: Vec<f64>,
    pub freqs: Vec<f64>,
    pub t_s: f64,
    pub n_s: f64,
    /// Row-major outcomes; `Err` text for failed points.
    pub points: Vec<std::result::Result<DetectionOutcome, String>>,
}

/// `eta > 0.5` band along the signal frequency at the best drive power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EfficiencyBand {
    pub p_dbm: f64,
    pub lo: f64,
    pub hi: f64,
    /// The band reaches an edge of the frequency grid.
    pub open: bool,
}

impl EfficiencyBand {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

impl EfficiencyMap {
    pub fn eta(&self, i: usize, j: usize) -> Option<f64> {
        self.points[i * self.freqs.len() + j].as_ref().ok().and_then(|o| o.eta)
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.is_err()).count()
    }

    pub fn flagged(&self) -> usize {
        self.points.iter().filter(|p| p.as_ref().map_or(true, |o| o.health.flagged())).count()
    }

    /// Grid argmax of `eta`, refined parabolically along both axes.
    pub fn argmax(&self) -> Result<GridExtremum> {
        let vals: Vec<Option<f64>> =
            (0..self.points.len()).map(|k| self.eta(k / self.freqs.len(), k % self.freqs.len())).collect();
        grid_extremum(&self.powers_dbm, &self.freqs, &vals, true)
    }

    /// Frequency band with `eta > 0.5` in the row of the grid argmax.
    pub fn band(&self) -> Result<Option<EfficiencyBand>> {
        let best = self.argmax()?;
        let row: Vec<f64> = (0..self.freqs.len()).map(|j| self.eta(best.row, j).unwrap_or(f64::NAN)).collect();
        Ok(band_above(&self.freqs, &row, best.col, 0.5).map(|(lo, hi, a, b)| EfficiencyBand {
            p_dbm: self.powers_dbm[best.row],
            lo,
            hi,
            open: a || b,
        }))
    }

    pub fn to_csv(&self, params: &SystemParams) -> String {
        let mut s = format!("{}\n", DetectionOutcome::CSV_HEADER);
        for (k, p) in self.points.iter().enumerate() {
            match p {
                Ok(o) => s.push_str(&o.csv_row(params)),
                Err(_) => s.push_str(&format!(
                    "{:.8e},{:.8e},{:.8e},{:.8e},NaN,NaN,NaN,NaN,1",
                    self.powers_dbm[k / self.freqs.len()],
                    crate::params::to_ghz(self.freqs[k % self.freqs.len()]),
                    self.t_s * 1e9,
                    self.n_s
                )),
            }
            s.push('\n');
        }
        s
    }
}

/// Detection efficiency over a drive-power x signal-frequency grid. The dark
/// run is shared along each power row.
#[allow(clippy::too_many_arguments)]
pub fn efficiency_map(
    params: &SystemParams,
    omega_d: f64,
    power_grid: &[f64],
    freq_grid: &[f64],
    t_s: f64,
    n_s: f64,
    readout: &ReadoutModel,
    settings: &SimSettings,
) -> Result<EfficiencyMap> {
    check_grid(power_grid, "drive power")?;
    check_grid(freq_grid, "signal frequency")?;
    readout.validate()?;
    check_detection_inputs(params, OperatingPoint { omega_d, rabi: 0.0, omega_s: params.omega_r }, t_s, n_s)?;
    let darks: Vec<std::result::Result<(f64, RunHealth), String>> = power_grid
        .par_iter()
        .map(|&p| {
            let op = OperatingPoint::from_dbm(params, omega_d, p, params.omega_r);
            dark_run(params, op, t_s, settings).map_err(|e| e.to_string())
        })
        .collect();
    let cells: Vec<(usize, f64)> =
        (0..power_grid.len()).flat_map(|i| freq_grid.iter().map(move |&w| (i, w))).collect();
    let points = cells
        .par_iter()
        .map(|&(i, w)| {
            let dark = darks[i].clone()?;
            let op = OperatingPoint::from_dbm(params, omega_d, power_grid[i], w);
            outcome_with_dark(params, op, t_s, n_s, readout, settings, dark).map_err(|e| e.to_string())
        })
        .collect();
    Ok(EfficiencyMap { powers_dbm: power_grid.to_vec(), freqs: freq_grid.to_vec(), t_s, n_s, points })
}

/// Efficiency versus signal pulse length; the drive length follows each `t_s`.
pub fn efficiency_vs_length(
    params: &SystemParams,
    op: OperatingPoint,
    t_s_list: &[f64],
    n_s: f64,
    readout: &ReadoutModel,
    settings: &SimSettings,
) -> Vec<Result<DetectionOutcome>> {
    t_s_list.par_iter().map(|&t_s| detection_run(params, op, t_s, n_s, readout, settings)).collect()
}

/// Efficiency versus mean photon number at fixed `t_s`.
pub fn efficiency_vs_photon_number(
    params: &SystemParams,
    op: OperatingPoint,
    t_s: f64,
    n_list: &[f64],
    readout: &ReadoutModel,
    settings: &SimSettings,
) -> Result<Vec<Result<DetectionOutcome>>> {
    if n_list.iter().any(|&n| !(n > 0.0)) {
        return Err(Error::InvalidParameter { name: "n_s", reason: "photon numbers must be positive".into() });
    }
    readout.validate()?;
    let dark = dark_run(params, op, t_s, settings)?;
    Ok(n_list
        .par_iter()
        .map(|&n| outcome_with_dark(params, op, t_s, n, readout, settings, dark))
        .collect())
}

/// Reset-stage settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResetConfig {
    pub omega_d: f64,
    pub rabi: f64,
    pub omega_rst: f64,
    pub n_rst: f64,
    /// Whole stage, drive edges included.
    pub stage: f64,
    pub with_initial_pi: bool,
}

impl ResetConfig {
    pub fn new(omega_d: f64, rabi: f64, omega_rst: f64, n_rst: f64) -> Self {
        ResetConfig { omega_d, rabi, omega_rst, n_rst, stage: RESET_STAGE, with_initial_pi: true }
    }

    /// Drive FWHM inside the stage.
    pub fn drive_length(&self, timing: &PulseTiming) -> f64 {
        self.stage - 2.0 * timing.t_rise
    }
}

/// Durations of one detect-reset period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleTimings {
    pub reset: f64,
    pub detection: f64,
    pub readout: f64,
}

impl CycleTimings {
    pub fn new(reset: Option<f64>, t_s: f64, timing: &PulseTiming) -> Self {
        CycleTimings {
            reset: reset.unwrap_or(0.0),
            detection: drive_length_for_signal(t_s) + 2.0 * timing.t_rise,
            readout: READOUT_BUDGET,
        }
    }

    pub fn period(&self) -> f64 {
        self.reset + self.detection + self.readout
    }

    pub fn rate(&self) -> f64 {
        1.0 / self.period()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResetOutcome {
    pub p_e_after_reset: f64,
    pub p_e_no_reset: f64,
    pub config: ResetConfig,
    pub timings: CycleTimings,
    pub health: RunHealth,
}

impl ResetOutcome {
    pub const CSV_HEADER: &'static str = "P_dr_dBm,omega_rst_GHz,n_rst,P_e_after_reset,P_e_no_reset,flagged";

    pub fn csv_row(&self, params: &SystemParams) -> String {
        format!(
            "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{}",
            params.dbm_from_rabi(self.config.rabi),
            crate::params::to_ghz(self.config.omega_rst),
            self.config.n_rst,
            self.p_e_after_reset,
            self.p_e_no_reset,
            self.health.flagged() as u8
        )
    }
}

fn reset_settings(settings: &SimSettings) -> SimSettings {
    SimSettings { n_max: settings.n_max.max(settings.reset_n_max), ..*settings }
}

fn reset_pe(params: &SystemParams, cfg: &ResetConfig, settings: &SimSettings) -> Result<(f64, RunHealth)> {
    let schedule = PulseSchedule::reset(
        cfg.omega_d,
        cfg.rabi,
        cfg.omega_rst,
        cfg.n_rst,
        cfg.stage,
        cfg.with_initial_pi,
        settings.timing,
    );
    run_schedule(params, &schedule, &reset_settings(settings))
}

fn check_reset(params: &SystemParams, cfg: &ResetConfig, settings: &SimSettings) -> Result<()> {
    params.check_nesting(cfg.omega_d)?;
    if !(cfg.n_rst >= 0.0) {
        return Err(Error::InvalidParameter { name: "n_rst", reason: "must be non-negative".into() });
    }
    if !(cfg.drive_length(&settings.timing) >= 2.0 * settings.timing.t_rise) {
        return Err(Error::InvalidParameter { name: "stage", reason: "too short for the drive edges".into() });
    }
    Ok(())
}

/// Reset stage: optional instantaneous pi flip, then a flat-top drive with a
/// co-terminated reset pulse. `P_e` is read when the drive returns to zero;
/// the reference run omits the reset pulse.
pub fn reset_run(params: &SystemParams, cfg: &ResetConfig, settings: &SimSettings) -> Result<ResetOutcome> {
    check_reset(params, cfg, settings)?;
    let no_reset = ResetConfig { n_rst: 0.0, ..*cfg };
    let reference = reset_pe(params, &no_reset, settings)?;
    reset_with_reference(params, cfg, settings, reference)
}

fn reset_with_reference(
    params: &SystemParams,
    cfg: &ResetConfig,
    settings: &SimSettings,
    reference: (f64, RunHealth),
) -> Result<ResetOutcome> {
    let (p, health) = if cfg.n_rst > 0.0 { reset_pe(params, cfg, settings)? } else { reference };
    Ok(ResetOutcome {
        p_e_after_reset: p,
        p_e_no_reset: reference.0,
        config: *cfg,
        timings: CycleTimings { reset: cfg.stage, detection: 0.0, readout: 0.0 },
        health: health.merge(reference.1),
    })
}

#[derive(Debug, Clone)]
pub struct ResetMap {
    pub powers_dbm: Vec<f64>,
    pub freqs: Vec<f64>,
    pub points: Vec<std::result::Result<ResetOutcome, String>>,
}

impl ResetMap {
    pub fn p_e(&self, i: usize, j: usize) -> Option<f64> {
        self.points[i * self.freqs.len() + j].as_ref().ok().map(|o| o.p_e_after_reset)
    }

    pub fn failures(&self) -> usize {
        self.points.iter().filter(|p| p.is_err()).count()
    }

    pub fn flagged(&self) -> usize {
        self.points.iter().filter(|p| p.as_ref().map_or(true, |o| o.health.flagged())).count()
    }

    /// Grid argmin of the residual excitation, refined parabolically.
    pub fn argmin(&self) -> Result<GridExtremum> {
        let nf = self.freqs.len();
        let vals: Vec<Option<f64>> = (0..self.points.len()).map(|k| self.p_e(k / nf, k % nf)).collect();
        grid_extremum(&self.powers_dbm, &self.freqs, &vals, false)
    }

    pub fn to_csv(&self, params: &SystemParams) -> String {
        let mut s = format!("{}\n", ResetOutcome::CSV_HEADER);
        for (k, p) in self.points.iter().enumerate() {
            match p {
                Ok(o) => s.push_str(&o.csv_row(params)),
                Err(_) => s.push_str(&format!(
                    "{:.8e},{:.8e},NaN,NaN,NaN,1",
                    self.powers_dbm[k / self.freqs.len()],
                    crate::params::to_ghz(self.freqs[k % self.freqs.len()])
                )),
            }
            s.push('\n');
        }
        s
    }
}

/// Residual excitation over reset-drive power (rows) and reset frequency
/// (columns). `template` supplies the drive frequency, photon number, stage
/// and pi-pulse choice; the reference run without a reset pulse is shared
/// along each power row.
pub fn reset_map(
    params: &SystemParams,
    template: &ResetConfig,
    power_grid: &[f64],
    freq_grid: &[f64],
    settings: &SimSettings,
) -> Result<ResetMap> {
    check_grid(power_grid, "reset drive power")?;
    check_grid(freq_grid, "reset frequency")?;
    check_reset(params, template, settings)?;
    let refs: Vec<std::result::Result<(f64, RunHealth), String>> = power_grid
        .par_iter()
        .map(|&p| {
            let cfg = ResetConfig { rabi: params.rabi_from_dbm(p), n_rst: 0.0, ..*template };
            reset_pe(params, &cfg, settings).map_err(|e| e.to_string())
        })
        .collect();
    let cells: Vec<(usize, f64)> =
        (0..power_grid.len()).flat_map(|i| freq_grid.iter().map(move |&w| (i, w))).collect();
    let points = cells
        .par_iter()
        .map(|&(i, w)| {
            let reference = refs[i].clone()?;
            let cfg = ResetConfig { rabi: params.rabi_from_dbm(power_grid[i]), omega_rst: w, ..*template };
            reset_with_reference(params, &cfg, settings, reference).map_err(|e| e.to_string())
        })
        .collect();
    Ok(ResetMap { powers_dbm: power_grid.to_vec(), freqs: freq_grid.to_vec(), points })
}

/// Detection settings of a cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionConfig {
    pub op: OperatingPoint,
    pub t_s: f64,
    pub n_s: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleOutcome {
    /// Efficiency of a detection starting from the initialized state.
    pub eta_fresh: f64,
    /// Efficiency of a detection following a reset of an excited qubit.
    pub eta_after_reset: Option<f64>,
    pub p_e_after_reset: Option<f64>,
    pub p_dark_after_reset: Option<f64>,
    pub timings: CycleTimings,
    pub health: RunHealth,
}

impl CycleOutcome {
    pub fn period(&self) -> f64 {
        self.timings.period()
    }

    pub fn rate(&self) -> f64 {
        self.timings.rate()
    }
}

fn cycle_pe(
    params: &SystemParams,
    detect: &DetectionConfig,
    reset: &ResetConfig,
    n_s: f64,
    settings: &SimSettings,
) -> Result<(f64, RunHealth)> {
    let op = detect.op;
    let mut schedule = PulseSchedule::new(Frame::new(op.omega_d, op.omega_s));
    schedule.append_reset(
        0.0,
        reset.omega_d,
        reset.rabi,
        reset.omega_rst,
        reset.n_rst,
        reset.stage,
        reset.with_initial_pi,
        settings.timing,
        false,
    );
    schedule.append_detection(reset.stage, op.omega_d, op.rabi, op.omega_s, detect.t_s, n_s, settings.timing);
    debug_assert!(schedule.of_role(PulseRole::ReadoutMarker).count() == 1);
    run_schedule(params, &schedule, &reset_settings(settings))
}

/// Reset of an excited qubit followed by a detection on the post-reset state.
/// With `reset = None` only the fresh detection is evaluated.
pub fn full_cycle(
    params: &SystemParams,
    detect: &DetectionConfig,
    reset: Option<&ResetConfig>,
    settings: &SimSettings,
) -> Result<CycleOutcome> {
    if !(detect.n_s > 0.0) {
        return Err(Error::InvalidParameter { name: "n_s", reason: "a cycle needs a signal".into() });
    }
    let fresh = detection_run(params, detect.op, detect.t_s, detect.n_s, &ReadoutModel::default(), settings)?;
    let timings = CycleTimings::new(reset.map(|r| r.stage), detect.t_s, &settings.timing);
    let Some(reset) = reset else {
        return Ok(CycleOutcome {
            eta_fresh: fresh.eta.unwrap_or(f64::NAN),
            eta_after_reset: None,
            p_e_after_reset: None,
            p_dark_after_reset: None,
            timings,
            health: fresh.health,
        });
    };
    check_reset(params, reset, settings)?;
    let (p_e, h1) = cycle_pe(params, detect, reset, detect.n_s, settings)?;
    let (p_dark, h2) = cycle_pe(params, detect, reset, 0.0, settings)?;
    Ok(CycleOutcome {
        eta_fresh: fresh.eta.unwrap_or(f64::NAN),
        eta_after_reset: efficiency(p_e, p_dark, detect.n_s),
        p_e_after_reset: Some(p_e),
        p_dark_after_reset: Some(p_dark),
        timings,
        health: fresh.health.merge(h1).merge(h2),
    })
}

/// Detection length preset for `t_s = 85 ns`.
pub fn default_signal_length() -> f64 {
    ns(85.0)
}
