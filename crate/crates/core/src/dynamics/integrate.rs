//! Runge-Kutta integrators for matrix-valued ODEs.

use crate::error::{Error, Result};
use crate::space::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegratorMethod {
    /// Classic fourth-order Runge-Kutta with a fixed step (`max_step`, rounded
    /// down so every segment is an integer number of steps).
    FixedRk4,
    /// Dormand-Prince 5(4) with error control.
    AdaptiveRk45,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub method: IntegratorMethod,
    pub max_step: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Re-run at `n_max + 1` and flag the result when key outputs move.
    pub fock_convergence: bool,
    /// Number of evenly spaced trajectory samples (endpoints always included).
    pub samples: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            method: IntegratorMethod::AdaptiveRk45,
            max_step: 2e-9,
            rtol: 1e-8,
            atol: 1e-10,
            fock_convergence: false,
            samples: 32,
        }
    }
}

impl IntegratorOptions {
    pub fn fixed(step: f64) -> Self {
        IntegratorOptions { method: IntegratorMethod::FixedRk4, max_step: step, ..Default::default() }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.max_step > 0.0 && self.rtol > 0.0 && self.atol > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "integrator",
                reason: "step and tolerances must be positive".into(),
            })
        }
    }
}

fn axpy(y: &CMatrix, h: f64, terms: &[(f64, &CMatrix)]) -> CMatrix {
    let mut out = y.clone();
    for (c, k) in terms {
        if *c != 0.0 {
            out += *k * C64::new(h * c, 0.0);
        }
    }
    out
}

/// Integrates `y' = f(t, y)` from `t0` to `t1` with fixed RK4 steps no longer than `max_step`.
pub fn rk4<F>(f: &F, t0: f64, t1: f64, y: CMatrix, max_step: f64) -> CMatrix
where
    F: Fn(f64, &CMatrix) -> CMatrix,
{
    let span = t1 - t0;
    if span <= 0.0 {
        return y;
    }
    let n = (span / max_step).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut y = y;
    for k in 0..n {
        let t = t0 + k as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + 0.5 * h, &axpy(&y, h, &[(0.5, &k1)]));
        let k3 = f(t + 0.5 * h, &axpy(&y, h, &[(0.5, &k2)]));
        let k4 = f(t + h, &axpy(&y, h, &[(1.0, &k3)]));
        y = axpy(&y, h, &[(1.0 / 6.0, &k1), (1.0 / 3.0, &k2), (1.0 / 3.0, &k3), (1.0 / 6.0, &k4)]);
    }
    y
}

// Dormand-Prince coefficients.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Adaptive Dormand-Prince integration from `t0` to `t1`.
///
/// `h0` is the first trial step; the accepted final step size is returned so
/// consecutive segments can continue smoothly.
#[allow(clippy::too_many_arguments)]
pub fn dopri45<F>(
    f: &F,
    t0: f64,
    t1: f64,
    y: CMatrix,
    h0: f64,
    max_step: f64,
    rtol: f64,
    atol: f64,
) -> Result<(CMatrix, f64)>
where
    F: Fn(f64, &CMatrix) -> CMatrix,
{
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok((y, h0));
    }
    let mut t = t0;
    let mut y = y;
    let mut h = h0.min(max_step).min(span);
    let mut k1 = f(t, &y);
    let min_step = 1e-14 * span.max(t1.abs());
    loop {
        let last = t + h >= t1;
        if last {
            h = t1 - t;
        }
        let mut k: Vec<CMatrix> = Vec::with_capacity(7);
        k.push(k1.clone());
        for s in 1..7 {
            let terms: Vec<(f64, &CMatrix)> = (0..s).map(|j| (A[s][j], &k[j])).collect();
            let ys = axpy(&y, h, &terms);
            k.push(f(t + C[s] * h, &ys));
        }
        let y5 = axpy(&y, h, &(0..7).map(|j| (B5[j], &k[j])).collect::<Vec<_>>());
        let mut err: f64 = 0.0;
        for idx in 0..y.len() {
            let e: C64 = (0..7).map(|j| k[j][idx] * ((B5[j] - B4[j]) * h)).sum();
            let scale = atol + rtol * y[idx].norm().max(y5[idx].norm());
            let ratio = e.norm() / scale;
            err = if ratio.is_nan() { f64::INFINITY } else { err.max(ratio) };
        }
        if !err.is_finite() {
            return Err(Error::IntegrationFailure { time: t, reason: "non-finite state".into() });
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + h };
            y = y5;
            k1 = k.swap_remove(6);
            if last {
                return Ok((y, h.max(min_step)));
            }
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h = (h * factor).min(max_step);
        if h < min_step {
            return Err(Error::StepUnderflow { time: t, step: h });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(v: C64) -> CMatrix {
        CMatrix::from_element(1, 1, v)
    }

    #[test]
    fn exponential_decay_both_methods() {
        let f = |_t: f64, y: &CMatrix| y * C64::new(-2.0, 5.0);
        let exact = (C64::new(-2.0, 5.0) * 1.5).exp();
        let y = rk4(&f, 0.0, 1.5, scalar(C64::new(1.0, 0.0)), 1e-3);
        assert!((y[(0, 0)] - exact).norm() < 1e-10);
        let (y, _) = dopri45(&f, 0.0, 1.5, scalar(C64::new(1.0, 0.0)), 1e-3, 0.1, 1e-10, 1e-12).unwrap();
        assert!((y[(0, 0)] - exact).norm() < 1e-8);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = cos(t) y  ->  y = exp(sin t)
        let f = |t: f64, y: &CMatrix| y * C64::new(t.cos(), 0.0);
        let (y, _) = dopri45(&f, 0.0, 3.0, scalar(C64::new(1.0, 0.0)), 1e-3, 0.5, 1e-10, 1e-12).unwrap();
        assert!((y[(0, 0)].re - 3f64.sin().exp()).abs() < 1e-8);
    }

    #[test]
    fn underflow_detected() {
        let f = |_t: f64, _y: &CMatrix| scalar(C64::new(f64::NAN, 0.0));
        assert!(dopri45(&f, 0.0, 1.0, scalar(C64::new(1.0, 0.0)), 1e-3, 0.1, 1e-8, 1e-10).is_err());
    }
}
