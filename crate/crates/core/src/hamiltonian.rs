//! Effective dispersive Hamiltonian, rotating frames and dissipators.

use crate::error::{Error, Result};
use crate::params::SystemParams;
use crate::space::{excited_projector, ladder_operators, number_operator, ComplexOperator, HilbertSpace, C64};

/// Rotating-frame references: the qubit excitation rotates at `qubit_ref`
/// and each photon at `resonator_ref`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub qubit_ref: f64,
    pub resonator_ref: f64,
}

impl Frame {
    pub fn new(qubit_ref: f64, resonator_ref: f64) -> Self {
        Frame { qubit_ref, resonator_ref }
    }

    /// Laboratory energy offset of basis state `|q,n>` that the frame removes.
    pub fn offset(&self, excited: bool, photons: usize) -> f64 {
        (excited as u8 as f64) * self.qubit_ref + photons as f64 * self.resonator_ref
    }
}

/// Undriven part: `(w_ge - q_ref) s+s- + (w_r - r_ref) a^dag a - 2 chi s+s- a^dag a`.
pub fn bare_hamiltonian(params: &SystemParams, frame: Frame, space: HilbertSpace) -> ComplexOperator {
    let mut h = space.zeros().into_matrix();
    for i in 0..space.dim() {
        let (q, n) = space.label(i);
        let e = matches!(q, crate::space::Qubit::E) as u8 as f64;
        let n = n as f64;
        h[(i, i)] = C64::new(
            e * (params.omega_ge - frame.qubit_ref) + n * (params.omega_r - frame.resonator_ref)
                - 2.0 * params.chi * e * n,
            0.0,
        );
    }
    ComplexOperator::from_matrix(space, h)
}

/// Static Hamiltonian with a qubit drive of amplitude `rabi` at `omega_d`.
///
/// The drive term is only time independent when `frame.qubit_ref == omega_d`;
/// any other frame with a nonzero drive is rejected.
pub fn hamiltonian_static(
    params: &SystemParams,
    frame: Frame,
    space: HilbertSpace,
    rabi: f64,
    omega_d: f64,
) -> Result<ComplexOperator> {
    if rabi != 0.0 && frame.qubit_ref != omega_d {
        return Err(Error::NonStatic { frame: frame.qubit_ref, drive: omega_d });
    }
    let h0 = bare_hamiltonian(params, frame, space);
    if rabi == 0.0 {
        return Ok(h0);
    }
    let (_, sm) = ladder_operators(space);
    let drive = (&sm + &sm.adjoint()).scale(C64::new(rabi / 2.0, 0.0));
    Ok(&h0 + &drive)
}

/// Constant coherent resonator input `i sqrt(k_ext) (alpha a^dag - alpha* a)`.
pub fn resonator_input(params: &SystemParams, space: HilbertSpace, alpha: C64) -> ComplexOperator {
    let (a, _) = ladder_operators(space);
    let g = C64::new(0.0, params.kappa_ext().sqrt());
    &a.adjoint().scale(g * alpha) - &a.scale(g * alpha.conj())
}

/// A Lindblad channel `rate * D[op]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Collapse {
    pub op: ComplexOperator,
    pub rate: f64,
}

/// Dissipators of the model plus the external/internal split of the resonator loss.
#[derive(Debug, Clone)]
pub struct Dissipation {
    pub channels: Vec<Collapse>,
    pub kappa_ext: f64,
    pub kappa_int: f64,
}

/// `(a, kappa)`, `(sigma_minus, gamma)` and, for nonzero pure dephasing, `(s+s-, 2 gamma_phi)`.
pub fn collapse_operators(params: &SystemParams, space: HilbertSpace) -> Dissipation {
    let (a, sm) = ladder_operators(space);
    let mut channels = vec![Collapse { op: a, rate: params.kappa }, Collapse { op: sm, rate: params.gamma }];
    if params.gamma_phi > 0.0 {
        channels.push(Collapse { op: excited_projector(space), rate: 2.0 * params.gamma_phi });
    }
    Dissipation { channels, kappa_ext: params.kappa_ext(), kappa_int: params.kappa_int() }
}

/// Convenience: number operator and excited projector for expectation values.
pub fn observables(space: HilbertSpace) -> (ComplexOperator, ComplexOperator) {
    (number_operator(space), excited_projector(space))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::mhz;
    use crate::space::{build_space, Qubit};

    fn diag(h: &ComplexOperator) -> Vec<f64> {
        h.diagonal().iter().map(|z| z.re).collect()
    }

    #[test]
    fn nested_ordering_in_drive_frame() {
        let p = SystemParams::reference_device();
        let s = build_space(1).unwrap();
        let wd = p.omega_ge - mhz(49.0);
        let h = hamiltonian_static(&p, Frame::new(wd, wd), s, 0.0, wd).unwrap();
        let e = |q, n| h.get(s.index(q, n), s.index(q, n)).re;
        assert!(e(Qubit::G, 0) < e(Qubit::E, 0));
        assert!(e(Qubit::E, 0) < e(Qubit::E, 1));
        assert!(e(Qubit::E, 1) < e(Qubit::G, 1));
    }

    #[test]
    fn resonant_frame_diagonal() {
        let p = SystemParams::reference_device();
        let s = build_space(1).unwrap();
        let h = hamiltonian_static(&p, Frame::new(p.omega_ge, p.omega_r), s, 0.0, 0.0).unwrap();
        let d = diag(&h);
        assert_eq!(d[0], 0.0);
        assert_eq!(d[1], 0.0);
        assert_eq!(d[2], 0.0);
        assert!((d[3] + 2.0 * p.chi).abs() < 1e-6);
    }

    #[test]
    fn signal_frame_diagonal() {
        let p = SystemParams::reference_device();
        let s = build_space(1).unwrap();
        let dw = mhz(49.0);
        let wd = p.omega_ge - dw;
        let ws = p.omega_r + mhz(12.0);
        let h = hamiltonian_static(&p, Frame::new(wd, ws), s, 0.0, wd).unwrap();
        let d = diag(&h);
        let tol = 1e-12 * p.omega_r;
        assert!(d[0].abs() < tol);
        assert!((d[1] - dw).abs() < tol);
        assert!((d[2] - (p.omega_r - ws)).abs() < tol);
        assert!((d[3] - (dw + p.omega_r - 2.0 * p.chi - ws)).abs() < tol);
    }

    #[test]
    fn nesting_boundary_degenerate() {
        let p = SystemParams::reference_device();
        let s = build_space(1).unwrap();
        let wd = p.omega_ge - 2.0 * p.chi;
        let h = hamiltonian_static(&p, Frame::new(wd, wd), s, 0.0, wd).unwrap();
        let g1 = h.get(s.index(Qubit::G, 1), s.index(Qubit::G, 1)).re;
        let e1 = h.get(s.index(Qubit::E, 1), s.index(Qubit::E, 1)).re;
        assert!((g1 - e1).abs() < 1e-6 * g1.abs());
    }

    #[test]
    fn driven_hamiltonian_is_hermitian_and_frame_checked() {
        let p = SystemParams::reference_device();
        let s = build_space(5).unwrap();
        let wd = p.omega_ge - mhz(49.0);
        let h = hamiltonian_static(&p, Frame::new(wd, p.omega_r), s, mhz(30.0), wd).unwrap();
        assert!(h.hermiticity_error() < 1e-12);
        let err = hamiltonian_static(&p, Frame::new(p.omega_ge, p.omega_r), s, mhz(30.0), wd);
        assert!(matches!(err, Err(Error::NonStatic { .. })));
    }

    #[test]
    fn dissipators() {
        let mut p = SystemParams::reference_device();
        let s = build_space(2).unwrap();
        let d = collapse_operators(&p, s);
        assert_eq!(d.channels.len(), 2);
        assert!((d.kappa_int / p.kappa - 0.036).abs() < 1e-12);
        p.gamma_phi = 1e5;
        let d = collapse_operators(&p, s);
        assert_eq!(d.channels.len(), 3);
        assert_eq!(d.channels[2].rate, 2e5);
    }
}
