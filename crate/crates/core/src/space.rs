//! Truncated qubit x Fock basis and dense operators on it.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

/// Qubit basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    G,
    E,
}

/// Basis `|g,0>, |e,0>, |g,1>, |e,1>, ...` truncated at `n_max` photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    n_max: usize,
}

impl HilbertSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max < 1 {
            return Err(Error::InvalidCutoff(n_max));
        }
        Ok(HilbertSpace { n_max })
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dim(&self) -> usize {
        2 * (self.n_max + 1)
    }

    pub fn index(&self, q: Qubit, n: usize) -> usize {
        debug_assert!(n <= self.n_max);
        2 * n + matches!(q, Qubit::E) as usize
    }

    pub fn label(&self, index: usize) -> (Qubit, usize) {
        let q = if index % 2 == 0 { Qubit::G } else { Qubit::E };
        (q, index / 2)
    }

    pub fn zeros(&self) -> ComplexOperator {
        ComplexOperator::from_matrix(*self, CMatrix::zeros(self.dim(), self.dim()))
    }

    pub fn identity(&self) -> ComplexOperator {
        ComplexOperator::from_matrix(*self, CMatrix::identity(self.dim(), self.dim()))
    }

    /// Projector `|q,n><q,n|`.
    pub fn projector(&self, q: Qubit, n: usize) -> ComplexOperator {
        let mut op = self.zeros();
        let i = self.index(q, n);
        op.mat[(i, i)] = C64::new(1.0, 0.0);
        op
    }
}

/// Builds a Hilbert space with the given photon cutoff.
pub fn build_space(n_max: usize) -> Result<HilbertSpace> {
    HilbertSpace::new(n_max)
}

/// Dense complex matrix tagged with the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexOperator {
    space: HilbertSpace,
    mat: CMatrix,
}

impl ComplexOperator {
    /// Wraps a matrix; panics when its shape does not match the space.
    pub fn from_matrix(space: HilbertSpace, mat: CMatrix) -> Self {
        assert_eq!(mat.nrows(), space.dim());
        assert_eq!(mat.ncols(), space.dim());
        ComplexOperator { space, mat }
    }

    pub fn try_from_matrix(space: HilbertSpace, mat: CMatrix) -> Result<Self> {
        if mat.nrows() != space.dim() || mat.ncols() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: mat.nrows() });
        }
        Ok(ComplexOperator { space, mat })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.mat[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        ComplexOperator { space: self.space, mat: self.mat.adjoint() }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexOperator { space: self.space, mat: &self.mat * s }
    }

    /// Largest entry of `|A - A^dagger|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = &self.mat - self.mat.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.mat.diagonal().iter().copied().collect()
    }
}

impl Add for &ComplexOperator {
    type Output = ComplexOperator;
    fn add(self, rhs: Self) -> ComplexOperator {
        assert_eq!(self.space, rhs.space);
        ComplexOperator { space: self.space, mat: &self.mat + &rhs.mat }
    }
}

impl Sub for &ComplexOperator {
    type Output = ComplexOperator;
    fn sub(self, rhs: Self) -> ComplexOperator {
        assert_eq!(self.space, rhs.space);
        ComplexOperator { space: self.space, mat: &self.mat - &rhs.mat }
    }
}

impl Mul for &ComplexOperator {
    type Output = ComplexOperator;
    fn mul(self, rhs: Self) -> ComplexOperator {
        assert_eq!(self.space, rhs.space);
        ComplexOperator { space: self.space, mat: &self.mat * &rhs.mat }
    }
}

/// Resonator annihilation `a` and qubit lowering `sigma_minus`.
pub fn ladder_operators(space: HilbertSpace) -> (ComplexOperator, ComplexOperator) {
    let mut a = space.zeros();
    let mut sm = space.zeros();
    for n in 0..=space.n_max() {
        for q in [Qubit::G, Qubit::E] {
            if n >= 1 {
                a.mat[(space.index(q, n - 1), space.index(q, n))] = C64::new((n as f64).sqrt(), 0.0);
            }
        }
        sm.mat[(space.index(Qubit::G, n), space.index(Qubit::E, n))] = C64::new(1.0, 0.0);
    }
    (a, sm)
}

/// Photon-number operator `a^dagger a`.
pub fn number_operator(space: HilbertSpace) -> ComplexOperator {
    let mut op = space.zeros();
    for i in 0..space.dim() {
        op.mat[(i, i)] = C64::new(space.label(i).1 as f64, 0.0);
    }
    op
}

/// Qubit excited-state projector `sigma_plus sigma_minus` (identity on the resonator).
pub fn excited_projector(space: HilbertSpace) -> ComplexOperator {
    let mut op = space.zeros();
    for n in 0..=space.n_max() {
        let i = space.index(Qubit::E, n);
        op.mat[(i, i)] = C64::new(1.0, 0.0);
    }
    op
}

/// Qubit bit flip `sigma_x` (identity on the resonator).
pub fn qubit_flip(space: HilbertSpace) -> ComplexOperator {
    let (_, sm) = ladder_operators(space);
    &sm + &sm.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn dimensions() {
        assert_eq!(build_space(1).unwrap().dim(), 4);
        assert_eq!(build_space(9).unwrap().dim(), 20);
        assert!(matches!(build_space(0), Err(Error::InvalidCutoff(0))));
    }

    #[test]
    fn annihilation_matrix_elements() {
        let s = build_space(3).unwrap();
        let (a, sm) = ladder_operators(s);
        assert_eq!(a.get(s.index(Qubit::G, 0), s.index(Qubit::G, 1)).re, 1.0);
        assert!((a.get(s.index(Qubit::G, 1), s.index(Qubit::G, 2)).re - 2f64.sqrt()).abs() < 1e-15);
        assert!((a.get(s.index(Qubit::E, 2), s.index(Qubit::E, 3)).re - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(sm.get(s.index(Qubit::G, 2), s.index(Qubit::E, 2)).re, 1.0);
        assert_eq!(sm.get(s.index(Qubit::E, 2), s.index(Qubit::G, 2)).re, 0.0);

        let n = &a.adjoint() * &a;
        for i in 0..s.dim() {
            assert!((n.get(i, i).re - s.label(i).1 as f64).abs() < 1e-14);
        }
        assert!((n.matrix() - number_operator(s).matrix()).iter().all(|z| z.norm() < 1e-14));
    }

    proptest! {
        #[test]
        fn basis_is_bijective(n_max in 1usize..12) {
            let s = build_space(n_max).unwrap();
            for i in 0..s.dim() {
                let (q, n) = s.label(i);
                prop_assert_eq!(s.index(q, n), i);
            }
        }
    }
}
