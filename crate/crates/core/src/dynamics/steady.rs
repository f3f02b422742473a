//! Steady state of a static Liouvillian by a dense linear solve.

use crate::dynamics::DensityState;
use crate::error::{Error, Result};
use crate::hamiltonian::{Collapse, Frame};
use crate::space::{CMatrix, ComplexOperator, C64};

/// Superoperator acting on column-stacked `vec(rho)`.
///
/// Uses `vec(A rho B) = (B^T kron A) vec(rho)`.
pub fn liouvillian(h: &ComplexOperator, collapses: &[Collapse]) -> CMatrix {
    let d = h.space().dim();
    let id = CMatrix::identity(d, d);
    let hm = h.matrix();
    let mut l = (id.kronecker(hm) - hm.transpose().kronecker(&id)) * C64::new(0.0, -1.0);
    for c in collapses {
        if c.rate == 0.0 {
            continue;
        }
        let op = c.op.matrix();
        let ldl = op.adjoint() * op;
        let term = op.conjugate().kronecker(op)
            - id.kronecker(&ldl) * C64::new(0.5, 0.0)
            - ldl.transpose().kronecker(&id) * C64::new(0.5, 0.0);
        l += term * C64::new(c.rate, 0.0);
    }
    l
}

fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unique steady state of `L rho = 0` with `Tr rho = 1`.
///
/// One row of the Liouvillian is replaced by the trace constraint and the
/// system is solved by LU. When the pivots are tiny the kernel dimension is
/// estimated from the singular values of `L` and anything above one is
/// reported as [`Error::SingularLiouvillian`]; the residual must satisfy
/// `|L rho| < 1e-10 |L|`.
pub fn steady_state(h: &ComplexOperator, collapses: &[Collapse], frame: Frame) -> Result<DensityState> {
    let space = h.space();
    let d = space.dim();
    let l = liouvillian(h, collapses);
    let norm_l = frobenius(&l);

    let mut m = l.clone();
    let mut b = nalgebra::DVector::<C64>::zeros(d * d);
    let row = 0;
    for c in 0..d * d {
        m[(row, c)] = C64::new(0.0, 0.0);
    }
    for k in 0..d {
        m[(row, k * d + k)] = C64::new(1.0, 0.0);
    }
    b[row] = C64::new(1.0, 0.0);
    let lu = m.lu();

    // Tiny pivots hint at a degenerate kernel; confirm with the singular values.
    let pivots: Vec<f64> = lu.u().diagonal().iter().map(|z| z.norm()).collect();
    let pmax = pivots.iter().copied().fold(0.0, f64::max);
    let pmin = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    if !(pmin > 1e-11 * pmax) {
        let sv = l.clone().singular_values();
        let smax = sv.iter().copied().fold(0.0, f64::max);
        let nullity = sv.iter().filter(|&&s| s <= 1e-11 * smax).count();
        if nullity > 1 {
            return Err(Error::SingularLiouvillian { nullity });
        }
    }
    let x = lu.solve(&b).ok_or(Error::SingularLiouvillian { nullity: 2 })?;

    let residual = (&l * &x).norm();
    let tolerance = 1e-10 * norm_l;
    if !(residual < tolerance) {
        return Err(Error::SteadyStateResidual { residual, tolerance });
    }
    let rho = CMatrix::from_column_slice(d, d, x.as_slice());
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    let tr = rho.trace();
    Ok(DensityState::new(space, rho / tr, f64::INFINITY, frame))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::lindblad_rhs;
    use crate::hamiltonian::{collapse_operators, hamiltonian_static, resonator_input};
    use crate::params::{mhz, SystemParams};
    use crate::space::{build_space, Qubit};

    #[test]
    fn vectorization_matches_rhs() {
        let p = SystemParams::reference_device();
        let s = build_space(2).unwrap();
        let wd = p.omega_ge - mhz(49.0);
        let frame = Frame::new(wd, p.omega_r + mhz(10.0));
        let h = &hamiltonian_static(&p, frame, s, mhz(30.0), wd).unwrap()
            + &resonator_input(&p, s, C64::new(300.0, 0.0));
        let cs = collapse_operators(&p, s).channels;
        let mut rho = CMatrix::zeros(s.dim(), s.dim());
        for r in 0..s.dim() {
            for c in 0..s.dim() {
                rho[(r, c)] = C64::new(1.0 / (1.0 + (r + c) as f64), 0.1 * (r as f64 - c as f64));
            }
        }
        let direct = lindblad_rhs(&rho, &h, &cs);
        let l = liouvillian(&h, &cs);
        let v = &l * nalgebra::DVector::from_column_slice(rho.as_slice());
        let viaso = CMatrix::from_column_slice(s.dim(), s.dim(), v.as_slice());
        let scale = direct.iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!((direct - viaso).iter().all(|z| z.norm() < 1e-12 * scale));
    }

    #[test]
    fn undriven_relaxes_to_ground() {
        let p = SystemParams::reference_device();
        let s = build_space(3).unwrap();
        let frame = Frame::new(p.omega_ge, p.omega_r);
        let h = hamiltonian_static(&p, frame, s, 0.0, 0.0).unwrap();
        let ss = steady_state(&h, &collapse_operators(&p, s).channels, frame).unwrap();
        assert!((ss.rho[(s.index(Qubit::G, 0), s.index(Qubit::G, 0))].re - 1.0).abs() < 1e-12);
        assert!(ss.is_physical());
    }

    #[test]
    fn degenerate_kernel_flagged() {
        let mut p = SystemParams::reference_device();
        p.gamma = 0.0;
        let s = build_space(2).unwrap();
        let frame = Frame::new(p.omega_ge, p.omega_r);
        let h = hamiltonian_static(&p, frame, s, 0.0, 0.0).unwrap();
        // without qubit decay |g,0> and |e,0> are both stationary
        match steady_state(&h, &collapse_operators(&p, s).channels, frame) {
            Err(Error::SingularLiouvillian { nullity }) => assert!(nullity >= 2),
            other => panic!("expected degenerate kernel, got {other:?}"),
        }
    }
}
