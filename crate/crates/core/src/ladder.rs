//! Dressed states of the driven four-level block and their radiative rates.
//!
//! In a frame rotating at the drive frequency the static Hamiltonian splits
//! into doublets `{|g,n>, |e,n>}`. The lower doublet forms `|1~>, |2~>` and
//! the upper one `|3~>, |4~>`. Labels follow adiabatic continuity from zero
//! drive: `|1~> -> |g,0>`, `|2~> -> |e,0>`, `|3~> -> |e,1>`, `|4~> -> |g,1>`.

use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::hamiltonian::{hamiltonian_static, Frame};
use crate::params::SystemParams;
use crate::space::{build_space, ladder_operators, Qubit, C64};

/// Bare basis order used for dressed amplitudes: `|g,0>, |e,0>, |g,1>, |e,1>`.
pub const BARE_LABELS: [&str; 4] = ["g0", "e0", "g1", "e1"];

#[derive(Debug, Clone, PartialEq)]
pub struct DressedLadder {
    /// Quasi-energies of `|1~>..|4~>` in `frame`.
    pub energies: [f64; 4],
    /// `vectors[k]` holds the amplitudes of dressed state `k+1` over [`BARE_LABELS`].
    pub vectors: [[C64; 4]; 4],
    pub rabi: f64,
    pub omega_d: f64,
    pub frame: Frame,
}

/// Radiative decay rates between the upper and lower dressed doublets (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanRates {
    pub k31: f64,
    pub k32: f64,
    pub k41: f64,
    pub k42: f64,
}

impl DressedLadder {
    pub fn energy(&self, label: usize) -> f64 {
        self.energies[label - 1]
    }

    pub fn vector(&self, label: usize) -> &[C64; 4] {
        &self.vectors[label - 1]
    }

    /// Largest deviation of the Gram matrix of the dressed vectors from identity.
    pub fn orthonormality_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let dot: C64 = (0..4).map(|k| self.vectors[i][k].conj() * self.vectors[j][k]).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((dot - C64::new(target, 0.0)).norm());
            }
        }
        err
    }
}

/// Dressed ladder in the frame `(omega_d, omega_d)`.
pub fn dressed_states(params: &SystemParams, omega_d: f64, rabi: f64) -> Result<DressedLadder> {
    dressed_states_in_frame(params, omega_d, rabi, Frame::new(omega_d, omega_d))
}

/// Dressed ladder in an arbitrary resonator frame (the qubit frame must follow the drive).
pub fn dressed_states_in_frame(
    params: &SystemParams,
    omega_d: f64,
    rabi: f64,
    frame: Frame,
) -> Result<DressedLadder> {
    params.check_nesting(omega_d)?;
    let space = build_space(1)?;
    let h = hamiltonian_static(params, frame, space, rabi, omega_d)?;
    let eig = SymmetricEigen::new(h.into_matrix());

    // Split eigenpairs by photon number, then order by energy within each doublet.
    let mut lower = Vec::with_capacity(2);
    let mut upper = Vec::with_capacity(2);
    for k in 0..4 {
        let v = eig.eigenvectors.column(k);
        let weight_n1 = v[2].norm_sqr() + v[3].norm_sqr();
        let entry = (eig.eigenvalues[k], [v[0], v[1], v[2], v[3]]);
        if weight_n1 > 0.5 {
            upper.push(entry);
        } else {
            lower.push(entry);
        }
    }
    if lower.len() != 2 || upper.len() != 2 {
        return Err(Error::InvalidParameter {
            name: "rabi",
            reason: "drive mixes photon-number doublets".into(),
        });
    }
    lower.sort_by(|a, b| a.0.total_cmp(&b.0));
    upper.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Adiabatic partner of each label, used to fix the global phase.
    let anchors = [
        space.index(Qubit::G, 0),
        space.index(Qubit::E, 0),
        space.index(Qubit::E, 1),
        space.index(Qubit::G, 1),
    ];
    let ordered = [lower[0], lower[1], upper[0], upper[1]];
    let mut energies = [0.0; 4];
    let mut vectors = [[C64::new(0.0, 0.0); 4]; 4];
    for (k, (e, mut v)) in ordered.into_iter().enumerate() {
        let a = v[anchors[k]];
        let phase = if a.norm() > 0.0 { a.conj() / a.norm() } else { C64::new(1.0, 0.0) };
        for x in v.iter_mut() {
            *x *= phase;
        }
        energies[k] = e;
        vectors[k] = v;
    }
    Ok(DressedLadder { energies, vectors, rabi, omega_d, frame })
}

/// `k_ji = kappa |<i~| a |j~>|^2` for upper `j` in {3, 4} and lower `i` in {1, 2}.
pub fn raman_rates(ladder: &DressedLadder, params: &SystemParams) -> RamanRates {
    let space = build_space(1).expect("n_max = 1 is valid");
    let (a, _) = ladder_operators(space);
    let elem = |lower: usize, upper: usize| -> f64 {
        let bra = ladder.vector(lower);
        let ket = ladder.vector(upper);
        let mut acc = C64::new(0.0, 0.0);
        for r in 0..4 {
            for c in 0..4 {
                acc += bra[r].conj() * a.get(r, c) * ket[c];
            }
        }
        params.kappa * acc.norm_sqr()
    };
    RamanRates { k31: elem(1, 3), k32: elem(2, 3), k41: elem(1, 4), k42: elem(2, 4) }
}

/// Laboratory frequency of the photon connecting lower state `i` and upper state `j`.
pub fn transition_frequency(ladder: &DressedLadder, i: usize, j: usize) -> Result<f64> {
    match (i, j) {
        (1, 3) | (1, 4) | (2, 3) | (2, 4) => {
            Ok(ladder.energy(j) - ladder.energy(i) + ladder.frame.resonator_ref)
        }
        _ => Err(Error::InvalidTransition(i, j)),
    }
}

fn imbalance(params: &SystemParams, omega_d: f64, rabi: f64) -> Result<f64> {
    let rates = raman_rates(&dressed_states(params, omega_d, rabi)?, params);
    Ok(rates.k41 - rates.k42)
}

/// Drive amplitude at which `k41 = k42`.
///
/// A 64-point scan over `(0, 20 chi]` brackets the first sign change of
/// `k41 - k42`; bisection then refines it until `|k41 - k42| / kappa < 1e-6`.
pub fn matching_amplitude(params: &SystemParams, omega_d: f64) -> Result<f64> {
    params.check_nesting(omega_d)?;
    let hi = 10.0 * 2.0 * params.chi;
    let n = 64;
    let mut prev = (0.0, params.kappa);
    let mut bracket = None;
    for k in 1..=n {
        let x = hi * k as f64 / n as f64;
        let f = imbalance(params, omega_d, x)?;
        if f == 0.0 {
            return Ok(x);
        }
        if f.signum() != prev.1.signum() {
            bracket = Some((prev.0, x, prev.1));
            break;
        }
        prev = (x, f);
    }
    let (mut lo, mut up, mut f_lo) = bracket.ok_or(Error::NoMatchingPoint { lo: 0.0, hi })?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + up);
        let f = imbalance(params, omega_d, mid)?;
        if f.abs() / params.kappa < 1e-6 && (up - lo) < 1e-9 * mid {
            return Ok(mid);
        }
        if f.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f;
        } else {
            up = mid;
        }
    }
    Ok(0.5 * (lo + up))
}

/// Calibration constant `c` placing the matching amplitude at `anchor_dbm`.
pub fn fit_drive_calibration(params: &SystemParams, omega_d: f64, anchor_dbm: f64) -> Result<f64> {
    Ok(matching_amplitude(params, omega_d)? / 10f64.powf(anchor_dbm / 20.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{mhz, to_ghz};

    /// Closed-form eigenpairs of `[[a, b], [b, d]]` with `b > 0`: (lower, upper) energies.
    fn doublet(a: f64, d: f64, b: f64) -> (f64, f64) {
        let mean = 0.5 * (a + d);
        let half = 0.5 * ((a - d).powi(2) + 4.0 * b * b).sqrt();
        (mean - half, mean + half)
    }

    #[test]
    fn zero_drive_is_bare() {
        let p = SystemParams::reference_device();
        let wd = p.omega_ge - mhz(49.0);
        let l = dressed_states(&p, wd, 0.0).unwrap();
        assert_eq!(l.energies[0], 0.0);
        assert!((l.energies[1] - mhz(49.0)).abs() < 1e-3);
        assert!((l.energies[2] - (mhz(49.0) + p.omega_r - 2.0 * p.chi - wd)).abs() < 1e-3);
        assert!((l.energies[3] - (p.omega_r - wd)).abs() < 1e-3);
        let r = raman_rates(&l, &p);
        assert!((r.k41 - p.kappa).abs() < 1e-9 * p.kappa);
        assert!(r.k42.abs() < 1e-9 * p.kappa);
        assert!((transition_frequency(&l, 1, 4).unwrap() - p.omega_r).abs() < 1e-3);
        assert!((transition_frequency(&l, 2, 3).unwrap() - p.omega_r_excited()).abs() < 1e-3);
    }

    #[test]
    fn lower_doublet_splitting() {
        let p = SystemParams::reference_device();
        let dw = mhz(49.0);
        for rabi in [mhz(5.0), mhz(31.0), mhz(80.0)] {
            let l = dressed_states(&p, p.omega_ge - dw, rabi).unwrap();
            let split = l.energies[1] - l.energies[0];
            assert!((split - (dw * dw + rabi * rabi).sqrt()).abs() < 1e-10 * split);
            let (lo, hi) = doublet(0.0, dw, rabi / 2.0);
            assert!((l.energies[0] - lo).abs() < 1e-10 * dw);
            assert!((l.energies[1] - hi).abs() < 1e-10 * dw);
        }
    }

    #[test]
    fn invalid_pair() {
        let p = SystemParams::reference_device();
        let l = dressed_states(&p, p.omega_ge - mhz(49.0), mhz(30.0)).unwrap();
        assert!(matches!(transition_frequency(&l, 1, 2), Err(Error::InvalidTransition(1, 2))));
        assert!(transition_frequency(&l, 3, 4).is_err());
    }

    #[test]
    fn nesting_violation() {
        let p = SystemParams::reference_device();
        assert!(matches!(dressed_states(&p, p.omega_ge + mhz(1.0), mhz(1.0)), Err(Error::NotNested { .. })));
        assert!(matches!(matching_amplitude(&p, p.omega_ge - mhz(80.0)), Err(Error::NotNested { .. })));
    }

    #[test]
    fn matched_transition_frequency() {
        let p = SystemParams::reference_device();
        let wd = p.omega_ge - mhz(49.0);
        let w = matching_amplitude(&p, wd).unwrap();
        let l = dressed_states(&p, wd, w).unwrap();
        let f14 = to_ghz(transition_frequency(&l, 1, 4).unwrap());
        assert!((f14 - 10.268).abs() < 0.003, "{f14}");
        let r = raman_rates(&l, &p);
        assert!((r.k41 - p.kappa / 2.0).abs() < 1e-6 * p.kappa);
        assert!((r.k42 - p.kappa / 2.0).abs() < 1e-6 * p.kappa);
    }
}
