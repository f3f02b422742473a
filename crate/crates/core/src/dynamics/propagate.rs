//! Time-dependent propagation over a pulse schedule.
//!
//! In the schedule frame every pulse contributes `c(t) A + h.c.` with
//! `c(t) = s * envelope(t) * exp(-i (carrier - frame_ref) t)`: qubit drives
//! use `A = sigma_plus`, `s = 1/2`; resonator inputs use `A = a^dag`,
//! `s = i sqrt(kappa_ext)`. Tones whose carrier equals the frame reference are
//! static; any other carrier leaves an explicit residual oscillation.

use crate::dynamics::integrate::{dopri45, rk4, IntegratorMethod, IntegratorOptions};
use crate::dynamics::{DensityState, TRACE_FAILURE_TOL};
use crate::error::{Error, Result};
use crate::hamiltonian::{bare_hamiltonian, collapse_operators};
use crate::params::SystemParams;
use crate::pulse::{PulseEnvelope, PulseRole, PulseSchedule};
use crate::space::{build_space, ladder_operators, CMatrix, HilbertSpace, C64};

struct DriveTerm {
    op: CMatrix,
    scale: C64,
    envelope: PulseEnvelope,
    detuning: f64,
}

/// Lindblad generator assembled from a schedule.
pub struct LindbladModel {
    space: HilbertSpace,
    heff0: CMatrix,
    jumps: Vec<(CMatrix, CMatrix, f64)>,
    drives: Vec<DriveTerm>,
    flips: Vec<f64>,
}

impl LindbladModel {
    pub fn new(params: &SystemParams, space: HilbertSpace, schedule: &PulseSchedule) -> Self {
        let frame = schedule.frame;
        let h0 = bare_hamiltonian(params, frame, space).into_matrix();
        let mut heff0 = h0;
        let mut jumps = Vec::new();
        for c in collapse_operators(params, space).channels {
            if c.rate == 0.0 {
                continue;
            }
            let l = c.op.into_matrix();
            let ld = l.adjoint();
            heff0 -= (&ld * &l) * C64::new(0.0, 0.5 * c.rate);
            jumps.push((l, ld, c.rate));
        }
        let (a, sm) = ladder_operators(space);
        let sp = sm.adjoint().into_matrix();
        let ad = a.adjoint().into_matrix();
        let mut drives = Vec::new();
        let mut flips = Vec::new();
        for p in &schedule.pulses {
            let env = p.envelope;
            match p.role {
                PulseRole::Drive if env.peak != 0.0 => drives.push(DriveTerm {
                    op: sp.clone(),
                    scale: C64::new(0.5, 0.0),
                    envelope: env,
                    detuning: env.carrier - frame.qubit_ref,
                }),
                PulseRole::Signal | PulseRole::Reset if env.peak != 0.0 => drives.push(DriveTerm {
                    op: ad.clone(),
                    scale: C64::new(0.0, params.kappa_ext().sqrt()),
                    envelope: env,
                    detuning: env.carrier - frame.resonator_ref,
                }),
                PulseRole::Pi => flips.push(env.center),
                _ => {}
            }
        }
        LindbladModel { space, heff0, jumps, drives, flips }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    /// Hermitian drive part of the Hamiltonian at time `t`.
    pub fn drive_hamiltonian(&self, t: f64) -> CMatrix {
        let d = self.space.dim();
        let mut v = CMatrix::zeros(d, d);
        for term in &self.drives {
            let amp = term.envelope.amplitude(t);
            if amp == 0.0 {
                continue;
            }
            let c = term.scale * amp * C64::from_polar(1.0, -term.detuning * t);
            v += &term.op * c;
        }
        &v + v.adjoint()
    }

    pub fn rhs(&self, t: f64, rho: &CMatrix) -> CMatrix {
        let heff = &self.heff0 + self.drive_hamiltonian(t);
        let m = &heff * rho;
        let mut out = (&m - m.adjoint()) * C64::new(0.0, -1.0);
        for (l, ld, rate) in &self.jumps {
            out += (l * rho * ld) * C64::new(*rate, 0.0);
        }
        out
    }

    /// Times inside `(t0, t1)` where the generator has kinks or the state jumps.
    fn breakpoints(&self, t0: f64, t1: f64) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .drives
            .iter()
            .flat_map(|d| [d.envelope.start(), d.envelope.end()])
            .chain(self.flips.iter().copied())
            .filter(|&t| t > t0 && t < t1)
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub excited: f64,
    pub photons: f64,
    pub field: C64,
    pub trace_error: f64,
    pub hermiticity_error: f64,
    pub min_eigenvalue: f64,
}

impl TrajectoryPoint {
    fn of(state: &DensityState) -> Self {
        TrajectoryPoint {
            t: state.time,
            excited: state.excited_population(),
            photons: state.photon_number(),
            field: state.field(),
            trace_error: state.trace_error(),
            hermiticity_error: state.hermiticity_error(),
            min_eigenvalue: state.min_eigenvalue(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub final_state: DensityState,
    /// `Some(max relative change)` when a Fock-cutoff check was requested.
    pub fock_delta: Option<f64>,
}

impl Trajectory {
    /// Trace, Hermiticity and positivity hold at every sample.
    pub fn invariants_hold(&self) -> bool {
        self.points.iter().all(|p| {
            p.trace_error <= super::TRACE_TOL
                && p.hermiticity_error <= super::HERMITICITY_TOL
                && p.min_eigenvalue > -super::POSITIVITY_TOL
        })
    }

    pub fn fock_converged(&self) -> bool {
        self.fock_delta.map_or(true, |d| d < 1e-3)
    }

    pub fn peak_photons(&self) -> f64 {
        self.points.iter().map(|p| p.photons).fold(0.0, f64::max)
    }

    /// CSV dump with columns `t, P_e, n, re_a, im_a, trace_error`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,P_e,n_photons,re_a,im_a,trace_error\n");
        for p in &self.points {
            s.push_str(&format!(
                "{:.8e},{:.8e},{:.8e},{:.8e},{:.8e},{:.8e}\n",
                p.t, p.excited, p.photons, p.field.re, p.field.im, p.trace_error
            ));
        }
        s
    }
}

/// Propagates to the schedule's readout time (or its end when there is no readout marker).
pub fn propagate(
    rho0: &DensityState,
    schedule: &PulseSchedule,
    params: &SystemParams,
    opts: &IntegratorOptions,
) -> Result<Trajectory> {
    let t_end = schedule.readout_time().unwrap_or_else(|| schedule.end());
    propagate_until(rho0, schedule, params, opts, t_end)
}

pub fn propagate_until(
    rho0: &DensityState,
    schedule: &PulseSchedule,
    params: &SystemParams,
    opts: &IntegratorOptions,
    t_end: f64,
) -> Result<Trajectory> {
    let traj = run(rho0, schedule, params, opts, t_end)?;
    if !opts.fock_convergence {
        return Ok(traj);
    }
    let bigger = build_space(rho0.space.n_max() + 1)?;
    let check = run(&rho0.embed(bigger), schedule, params, opts, t_end)?;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-9);
    let d_pe = rel(traj.final_state.excited_population(), check.final_state.excited_population());
    let d_n = rel(traj.peak_photons(), check.peak_photons());
    Ok(Trajectory { fock_delta: Some(d_pe.max(d_n)), ..traj })
}

fn run(
    rho0: &DensityState,
    schedule: &PulseSchedule,
    params: &SystemParams,
    opts: &IntegratorOptions,
    t_end: f64,
) -> Result<Trajectory> {
    params.validate()?;
    opts.validate()?;
    schedule.validate()?;
    if rho0.frame != schedule.frame {
        return Err(Error::InvalidParameter {
            name: "frame",
            reason: "initial state and schedule use different rotating frames".into(),
        });
    }
    let model = LindbladModel::new(params, rho0.space, schedule);
    let t0 = rho0.time;
    let rhs = |t: f64, y: &CMatrix| model.rhs(t, y);

    // Segment boundaries: kinks, flips and sample times.
    let mut stops = model.breakpoints(t0, t_end);
    let n_samples = opts.samples.max(1);
    let samples: Vec<f64> =
        (1..n_samples).map(|k| t0 + (t_end - t0) * k as f64 / n_samples as f64).collect();
    stops.extend(samples.iter().copied());
    stops.push(t_end);
    stops.sort_by(f64::total_cmp);
    stops.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * b.abs().max(1e-9));

    let mut state = rho0.clone();
    if model.flips.iter().any(|&tf| tf == t0) {
        state.flip_qubit();
    }
    let mut points = vec![TrajectoryPoint::of(&state)];
    let mut h = opts.max_step.min((t_end - t0).abs()).max(1e-15) * 0.1;
    let mut t = t0;
    for &stop in &stops {
        if stop <= t {
            continue;
        }
        let y = std::mem::replace(&mut state.rho, CMatrix::zeros(0, 0));
        state.rho = match opts.method {
            IntegratorMethod::FixedRk4 => rk4(&rhs, t, stop, y, opts.max_step),
            IntegratorMethod::AdaptiveRk45 => {
                let (y, h_next) = dopri45(&rhs, t, stop, y, h, opts.max_step, opts.rtol, opts.atol)?;
                h = h_next;
                y
            }
        };
        t = stop;
        state.time = stop;
        if model.flips.iter().any(|&tf| tf == stop) {
            state.flip_qubit();
        }
        let is_sample = stop == t_end || samples.iter().any(|&s| (s - stop).abs() <= 1e-15 * s.abs().max(1e-9));
        if is_sample {
            let p = TrajectoryPoint::of(&state);
            if p.trace_error > TRACE_FAILURE_TOL || !p.excited.is_finite() {
                return Err(Error::IntegrationFailure {
                    time: stop,
                    reason: format!("trace drift {:.3e}", p.trace_error),
                });
            }
            points.push(p);
        }
    }
    Ok(Trajectory { points, final_state: state, fock_delta: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pulse::EnvelopeShape;
    use crate::hamiltonian::Frame;
    use crate::space::Qubit;

    fn quiet_params() -> SystemParams {
        let mut p = SystemParams::reference_device();
        p.init_excited_pop = 0.0;
        p
    }

    #[test]
    fn free_decay_matches_exponential() {
        let p = quiet_params();
        let s = build_space(1).unwrap();
        let frame = Frame::new(p.omega_ge, p.omega_r);
        let sched = PulseSchedule::new(frame);
        let rho0 = DensityState::basis(s, Qubit::E, 0, 0.0, frame);
        let opts = IntegratorOptions { samples: 20, ..Default::default() };
        let traj = propagate_until(&rho0, &sched, &p, &opts, 2e-6).unwrap();
        for pt in &traj.points {
            assert!((pt.excited - (-p.gamma * pt.t).exp()).abs() < 1e-6);
        }
        assert!(traj.invariants_hold());
    }

    #[test]
    fn detuned_drive_term_oscillates() {
        let p = quiet_params();
        let s = build_space(1).unwrap();
        let frame = Frame::new(p.omega_ge, p.omega_r);
        let mut sched = PulseSchedule::new(frame);
        let env = PulseEnvelope::new(EnvelopeShape::Rect { duration: 1e-6 }, 0.5e-6, 1e6, p.omega_ge + 1e7);
        sched.push(PulseRole::Drive, env);
        let model = LindbladModel::new(&p, s, &sched);
        let v0 = model.drive_hamiltonian(0.1e-6);
        let v1 = model.drive_hamiltonian(0.1e-6 + std::f64::consts::PI / 1e7);
        assert!((v0[(1, 0)] + v1[(1, 0)]).norm() < 1e-6);
    }

    #[test]
    fn frame_mismatch_rejected() {
        let p = quiet_params();
        let s = build_space(1).unwrap();
        let sched = PulseSchedule::new(Frame::new(p.omega_ge, p.omega_r));
        let rho0 = DensityState::basis(s, Qubit::G, 0, 0.0, Frame::new(0.0, 0.0));
        assert!(propagate_until(&rho0, &sched, &p, &IntegratorOptions::default(), 1e-8).is_err());
    }
}
