//! Lindblad master-equation engine.
//!
//! Time-dependent propagation over a [`PulseSchedule`](crate::pulse::PulseSchedule)
//! and direct steady-state solution of the vectorized Liouvillian.

mod integrate;
mod propagate;
mod steady;

pub use integrate::{IntegratorMethod, IntegratorOptions};
pub use propagate::{propagate, propagate_until, LindbladModel, Trajectory, TrajectoryPoint};
pub use steady::{liouvillian, steady_state};

use nalgebra::SymmetricEigen;

use crate::hamiltonian::{Collapse, Frame};
use crate::space::{excited_projector, number_operator, ladder_operators, CMatrix, ComplexOperator, HilbertSpace, Qubit, C64};

/// Tolerances a physical density matrix must respect.
pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-8;
/// Trace drift that aborts a propagation.
pub const TRACE_FAILURE_TOL: f64 = 1e-6;

/// Density matrix with its time and frame tags.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    pub space: HilbertSpace,
    pub rho: CMatrix,
    pub time: f64,
    pub frame: Frame,
}

impl DensityState {
    pub fn new(space: HilbertSpace, rho: CMatrix, time: f64, frame: Frame) -> Self {
        assert_eq!(rho.nrows(), space.dim());
        DensityState { space, rho, time, frame }
    }

    /// Pure basis state `|q,n><q,n|`.
    pub fn basis(space: HilbertSpace, q: Qubit, n: usize, time: f64, frame: Frame) -> Self {
        DensityState::new(space, space.projector(q, n).into_matrix(), time, frame)
    }

    /// Ground state mixed with `excited_pop` of `|e,0>` (imperfect initialization).
    pub fn initial(space: HilbertSpace, excited_pop: f64, time: f64, frame: Frame) -> Self {
        let mut rho = CMatrix::zeros(space.dim(), space.dim());
        rho[(0, 0)] = C64::new(1.0 - excited_pop, 0.0);
        rho[(1, 1)] = C64::new(excited_pop, 0.0);
        DensityState::new(space, rho, time, frame)
    }

    pub fn expect(&self, op: &ComplexOperator) -> C64 {
        (op.matrix() * &self.rho).trace()
    }

    pub fn excited_population(&self) -> f64 {
        self.expect(&excited_projector(self.space)).re
    }

    pub fn photon_number(&self) -> f64 {
        self.expect(&number_operator(self.space)).re
    }

    pub fn field(&self) -> C64 {
        self.expect(&ladder_operators(self.space).0)
    }

    pub fn trace_error(&self) -> f64 {
        (self.rho.trace() - C64::new(1.0, 0.0)).norm()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let herm = (&self.rho + self.rho.adjoint()) * C64::new(0.5, 0.0);
        SymmetricEigen::new(herm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks the trace, Hermiticity and positivity tolerances.
    pub fn is_physical(&self) -> bool {
        self.trace_error() <= TRACE_TOL
            && self.hermiticity_error() <= HERMITICITY_TOL
            && self.min_eigenvalue() > -POSITIVITY_TOL
    }

    /// Same state embedded in a space with a larger photon cutoff.
    pub fn embed(&self, target: HilbertSpace) -> Self {
        assert!(target.dim() >= self.space.dim());
        let mut rho = CMatrix::zeros(target.dim(), target.dim());
        let d = self.space.dim();
        rho.view_mut((0, 0), (d, d)).copy_from(&self.rho);
        DensityState { space: target, rho, time: self.time, frame: self.frame }
    }

    /// Instantaneous qubit flip `rho -> X rho X`.
    pub fn flip_qubit(&mut self) {
        let x = crate::space::qubit_flip(self.space).into_matrix();
        self.rho = &x * &self.rho * &x;
    }
}

/// `d rho / dt = -i[H, rho] + sum_k g_k (L rho L^dag - {L^dag L, rho} / 2)`.
pub fn lindblad_rhs(rho: &CMatrix, h: &ComplexOperator, collapses: &[Collapse]) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    let hm = h.matrix();
    let mut out = (hm * rho - rho * hm) * (-i);
    for c in collapses {
        let l = c.op.matrix();
        let ld = l.adjoint();
        let ldl = &ld * l;
        out += (l * rho * &ld - (&ldl * rho + rho * &ldl) * C64::new(0.5, 0.0)) * C64::new(c.rate, 0.0);
    }
    out
}
