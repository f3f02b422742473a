//! Pulse envelopes and timed pulse schedules.
//!
//! Envelopes are real and non-negative; the carrier frequency is carried
//! separately and enters the Hamiltonian as a phase relative to the frame.
//! Qubit drive envelopes are Rabi amplitudes (rad/s); resonator input
//! envelopes are field amplitudes in sqrt(photons/s), so that the integral of
//! the squared envelope is the mean photon number of the pulse.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::hamiltonian::Frame;

/// Ratio FWHM / sigma of a Gaussian.
pub const FWHM_PER_SIGMA: f64 = 2.354_820_045_030_949_4;

/// Gaussian pulses are cut at this many standard deviations.
pub const GAUSSIAN_CUTOFF_SIGMAS: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvelopeShape {
    /// Gaussian with the given amplitude FWHM, truncated at +-4 sigma and
    /// shifted so the envelope reaches zero continuously at the cut.
    Gaussian { fwhm: f64 },
    /// Plateau with half-Gaussian rising and falling edges of FWHM `edge_fwhm`.
    ///
    /// `fwhm` is the full width at half maximum of the whole pulse. Each edge
    /// starts at the plateau with value 1 and zero slope and reaches zero
    /// `edge_fwhm` later, so the support is `fwhm + edge_fwhm` long.
    FlatTop { fwhm: f64, edge_fwhm: f64 },
    Rect { duration: f64 },
    /// Idealized instantaneous pulse (used for the qubit pi flip).
    Instant,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseEnvelope {
    pub shape: EnvelopeShape,
    pub center: f64,
    pub peak: f64,
    pub carrier: f64,
}

/// `(g(x) - c) / (1 - c)` for a Gaussian `g` with width `sigma`, vanishing at `|x| = cut`.
fn shifted_gaussian(x: f64, sigma: f64, cut: f64) -> f64 {
    if x.abs() >= cut {
        return 0.0;
    }
    let c = (-0.5 * (cut / sigma).powi(2)).exp();
    ((-0.5 * (x / sigma).powi(2)).exp() - c) / (1.0 - c)
}

/// Integral of `shifted_gaussian^2` over `[0, cut]`.
fn shifted_gaussian_half_energy(sigma: f64, cut: f64) -> f64 {
    let c = (-0.5 * (cut / sigma).powi(2)).exp();
    let int_g2 = 0.5 * sigma * PI.sqrt() * libm::erf(cut / sigma);
    let int_g = sigma * (PI / 2.0).sqrt() * libm::erf(cut / (sigma * 2f64.sqrt()));
    (int_g2 - 2.0 * c * int_g + c * c * cut) / (1.0 - c).powi(2)
}

impl EnvelopeShape {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Err(Error::InvalidParameter { name: "pulse", reason: reason.into() });
        match *self {
            EnvelopeShape::Gaussian { fwhm } if !(fwhm > 0.0) => bad("gaussian fwhm must be positive"),
            EnvelopeShape::FlatTop { fwhm, edge_fwhm } if !(edge_fwhm > 0.0 && fwhm >= edge_fwhm) => {
                bad("flat-top pulse needs 0 < edge_fwhm <= fwhm")
            }
            EnvelopeShape::Rect { duration } if !(duration > 0.0) => bad("rect duration must be positive"),
            _ => Ok(()),
        }
    }

    /// Support relative to the pulse center.
    pub fn half_support(&self) -> f64 {
        match *self {
            EnvelopeShape::Gaussian { fwhm } => GAUSSIAN_CUTOFF_SIGMAS * fwhm / FWHM_PER_SIGMA,
            EnvelopeShape::FlatTop { fwhm, edge_fwhm } => 0.5 * (fwhm + edge_fwhm),
            EnvelopeShape::Rect { duration } => 0.5 * duration,
            EnvelopeShape::Instant => 0.0,
        }
    }

    /// Unit-peak envelope at offset `x` from the center.
    pub fn unit(&self, x: f64) -> f64 {
        match *self {
            EnvelopeShape::Gaussian { fwhm } => {
                let sigma = fwhm / FWHM_PER_SIGMA;
                shifted_gaussian(x, sigma, GAUSSIAN_CUTOFF_SIGMAS * sigma)
            }
            EnvelopeShape::FlatTop { fwhm, edge_fwhm } => {
                let plateau = 0.5 * (fwhm - edge_fwhm);
                let d = x.abs() - plateau;
                if d <= 0.0 {
                    1.0
                } else {
                    shifted_gaussian(d, edge_fwhm / FWHM_PER_SIGMA, edge_fwhm)
                }
            }
            EnvelopeShape::Rect { duration } => {
                if x.abs() <= 0.5 * duration {
                    1.0
                } else {
                    0.0
                }
            }
            EnvelopeShape::Instant => 0.0,
        }
    }

    /// Closed-form integral of `unit(x)^2` over the support.
    pub fn energy(&self) -> f64 {
        match *self {
            EnvelopeShape::Gaussian { fwhm } => {
                let sigma = fwhm / FWHM_PER_SIGMA;
                2.0 * shifted_gaussian_half_energy(sigma, GAUSSIAN_CUTOFF_SIGMAS * sigma)
            }
            EnvelopeShape::FlatTop { fwhm, edge_fwhm } => {
                (fwhm - edge_fwhm)
                    + 2.0 * shifted_gaussian_half_energy(edge_fwhm / FWHM_PER_SIGMA, edge_fwhm)
            }
            EnvelopeShape::Rect { duration } => duration,
            EnvelopeShape::Instant => 0.0,
        }
    }
}

impl PulseEnvelope {
    pub fn new(shape: EnvelopeShape, center: f64, peak: f64, carrier: f64) -> Self {
        PulseEnvelope { shape, center, peak, carrier }
    }

    /// Resonator input pulse whose squared envelope integrates to `mean_photons`.
    pub fn with_mean_photons(shape: EnvelopeShape, center: f64, mean_photons: f64, carrier: f64) -> Self {
        let peak = if mean_photons > 0.0 { (mean_photons / shape.energy()).sqrt() } else { 0.0 };
        PulseEnvelope { shape, center, peak, carrier }
    }

    pub fn amplitude(&self, t: f64) -> f64 {
        self.peak * self.shape.unit(t - self.center)
    }

    pub fn start(&self) -> f64 {
        self.center - self.shape.half_support()
    }

    pub fn end(&self) -> f64 {
        self.center + self.shape.half_support()
    }

    /// `integral |amplitude|^2 dt`; the mean photon number for resonator inputs.
    pub fn mean_photons(&self) -> f64 {
        self.peak * self.peak * self.shape.energy()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PulseRole {
    Drive,
    Signal,
    Reset,
    Pi,
    ReadoutMarker,
}

impl PulseRole {
    /// Resonator inputs enter through the signal port.
    pub fn is_resonator_input(&self) -> bool {
        matches!(self, PulseRole::Signal | PulseRole::Reset)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduledPulse {
    pub role: PulseRole,
    pub envelope: PulseEnvelope,
}

/// Timing knobs for auto-built schedules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseTiming {
    pub t_rise: f64,
    pub readout_length: f64,
}

impl Default for PulseTiming {
    fn default() -> Self {
        PulseTiming { t_rise: 15e-9, readout_length: 60e-9 }
    }
}

/// Drive length that covers a signal pulse of FWHM `t_s`.
pub fn drive_length_for_signal(t_s: f64) -> f64 {
    1.5 * t_s + 50e-9
}

/// Ordered set of pulses with a common rotating frame.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSchedule {
    pub pulses: Vec<ScheduledPulse>,
    pub frame: Frame,
}

impl PulseSchedule {
    pub fn new(frame: Frame) -> Self {
        PulseSchedule { pulses: Vec::new(), frame }
    }

    pub fn push(&mut self, role: PulseRole, envelope: PulseEnvelope) -> &mut Self {
        self.pulses.push(ScheduledPulse { role, envelope });
        self.pulses.sort_by(|a, b| a.envelope.start().total_cmp(&b.envelope.start()));
        self
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.pulses {
            p.envelope.shape.validate()?;
        }
        Ok(())
    }

    pub fn of_role(&self, role: PulseRole) -> impl Iterator<Item = &ScheduledPulse> {
        self.pulses.iter().filter(move |p| p.role == role)
    }

    /// Earliest pulse start.
    pub fn start(&self) -> f64 {
        self.pulses.iter().map(|p| p.envelope.start()).fold(f64::INFINITY, f64::min)
    }

    /// First readout-marker start, if any.
    pub fn readout_time(&self) -> Option<f64> {
        self.of_role(PulseRole::ReadoutMarker).map(|p| p.envelope.start()).reduce(f64::min)
    }

    /// End of the last pulse.
    pub fn end(&self) -> f64 {
        self.pulses.iter().map(|p| p.envelope.end()).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn total_duration(&self) -> f64 {
        self.end() - self.start()
    }

    /// Adds a gated stage: a flat-top qubit drive of FWHM `t_drive` centered at
    /// `center`, optionally a resonator pulse, and a readout marker at
    /// `t_drive / 2 + t_rise` after the center (the end of the drive).
    #[allow(clippy::too_many_arguments)]
    fn push_stage(
        &mut self,
        center: f64,
        t_drive: f64,
        rabi: f64,
        omega_d: f64,
        input: Option<(PulseRole, PulseEnvelope)>,
        timing: PulseTiming,
        with_marker: bool,
    ) {
        let drive_shape = EnvelopeShape::FlatTop { fwhm: t_drive, edge_fwhm: 2.0 * timing.t_rise };
        self.push(PulseRole::Drive, PulseEnvelope::new(drive_shape, center, rabi, omega_d));
        if let Some((role, env)) = input {
            if env.peak > 0.0 {
                self.push(role, env);
            }
        }
        if with_marker {
            let t_ro = center + 0.5 * t_drive + timing.t_rise;
            let marker = PulseEnvelope::new(
                EnvelopeShape::Rect { duration: timing.readout_length },
                t_ro + 0.5 * timing.readout_length,
                0.0,
                0.0,
            );
            self.push(PulseRole::ReadoutMarker, marker);
        }
    }

    /// Detection stage: drive of length `1.5 t_s + 50 ns` with a concurrent
    /// Gaussian signal of FWHM `t_s` carrying `n_s` photons. The schedule
    /// starts at `t = 0`.
    #[allow(clippy::too_many_arguments)]
    pub fn detection(
        omega_d: f64,
        rabi: f64,
        omega_s: f64,
        t_s: f64,
        n_s: f64,
        timing: PulseTiming,
    ) -> Self {
        let t_d = drive_length_for_signal(t_s);
        let signal_shape = EnvelopeShape::Gaussian { fwhm: t_s };
        let drive_half = 0.5 * t_d + timing.t_rise;
        let center = drive_half.max(signal_shape.half_support());
        let mut s = PulseSchedule::new(Frame::new(omega_d, omega_s));
        let signal = PulseEnvelope::with_mean_photons(signal_shape, center, n_s, omega_s);
        s.push_stage(center, t_d, rabi, omega_d, Some((PulseRole::Signal, signal)), timing, true);
        s
    }

    /// Reset stage of total length `stage` (drive FWHM `stage - 2 t_rise`),
    /// with a co-terminated flat-top reset pulse carrying `n_rst` photons and
    /// an optional instantaneous pi pulse at the stage start.
    #[allow(clippy::too_many_arguments)]
    pub fn reset(
        omega_d: f64,
        rabi: f64,
        omega_rst: f64,
        n_rst: f64,
        stage: f64,
        with_initial_pi: bool,
        timing: PulseTiming,
    ) -> Self {
        let mut s = PulseSchedule::new(Frame::new(omega_d, omega_rst));
        s.append_reset(0.0, omega_d, rabi, omega_rst, n_rst, stage, with_initial_pi, timing, true);
        s
    }

    /// Appends a reset stage beginning at `t0`.
    #[allow(clippy::too_many_arguments)]
    pub fn append_reset(
        &mut self,
        t0: f64,
        omega_d: f64,
        rabi: f64,
        omega_rst: f64,
        n_rst: f64,
        stage: f64,
        with_initial_pi: bool,
        timing: PulseTiming,
        with_marker: bool,
    ) {
        let t_dr = stage - 2.0 * timing.t_rise;
        let center = t0 + 0.5 * stage;
        if with_initial_pi {
            self.push(PulseRole::Pi, PulseEnvelope::new(EnvelopeShape::Instant, t0, 0.0, 0.0));
        }
        let shape = EnvelopeShape::FlatTop { fwhm: t_dr, edge_fwhm: 2.0 * timing.t_rise };
        let reset = PulseEnvelope::with_mean_photons(shape, center, n_rst, omega_rst);
        self.push_stage(center, t_dr, rabi, omega_d, Some((PulseRole::Reset, reset)), timing, with_marker);
    }

    /// Appends a detection stage whose drive starts at `t0`.
    #[allow(clippy::too_many_arguments)]
    pub fn append_detection(
        &mut self,
        t0: f64,
        omega_d: f64,
        rabi: f64,
        omega_s: f64,
        t_s: f64,
        n_s: f64,
        timing: PulseTiming,
    ) {
        let t_d = drive_length_for_signal(t_s);
        let center = t0 + 0.5 * t_d + timing.t_rise;
        let signal =
            PulseEnvelope::with_mean_photons(EnvelopeShape::Gaussian { fwhm: t_s }, center, n_s, omega_s);
        self.push_stage(center, t_d, rabi, omega_d, Some((PulseRole::Signal, signal)), timing, true);
    }
}
