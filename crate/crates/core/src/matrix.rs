//! Dense `2^n × 2^n` operators used by the oracles and by unitary extraction.
//!
//! Qubit `q` (1-based) is bit `q − 1` of the row/column index, matching the
//! state-vector convention.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

/// A square complex matrix over `n` qubits, unitary by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix {
    n: usize,
    m: DMatrix<Complex64>,
}

impl UnitaryMatrix {
    /// Wraps `m`, checking it is `2^n`-dimensional and unitary within `tol`.
    pub fn new(m: DMatrix<Complex64>, tol: f64) -> Result<Self> {
        let n = qubits_for(m.nrows())?;
        if m.ncols() != m.nrows() {
            return Err(Error::DimensionMismatch(m.nrows(), m.ncols()));
        }
        let u = Self { n, m };
        let dev = u.unitarity_deviation();
        if dev > tol {
            return Err(Error::NonUnitary(dev));
        }
        Ok(u)
    }

    pub(crate) fn from_raw(m: DMatrix<Complex64>) -> Self {
        let n = m.nrows().trailing_zeros() as usize;
        Self { n, m }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_raw(DMatrix::identity(1 << n, 1 << n))
    }

    /// `gate` on qubit `q`, identity on the others.
    pub fn on_qubit(n: usize, q: usize, gate: &Mat2) -> Self {
        Self::tensor(n, &[(q, *gate)])
    }

    /// Tensor product placing each `(qubit, gate)` factor; unlisted qubits get `I`.
    pub fn tensor(n: usize, factors: &[(usize, Mat2)]) -> Self {
        let mut acc = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for q in (1..=n).rev() {
            let g = factors
                .iter()
                .rev()
                .find(|(k, _)| *k == q)
                .map(|(_, g)| *g)
                .unwrap_or(IDENTITY);
            let g = DMatrix::from_fn(2, 2, |r, c| g[r][c]);
            acc = acc.kronecker(&g);
        }
        Self::from_raw(acc)
    }

    /// Diagonal CZ between qubits `a` and `b`.
    pub fn cz(n: usize, a: usize, b: usize) -> Self {
        let mask = (1usize << (a - 1)) | (1usize << (b - 1));
        let dim = 1 << n;
        Self::from_raw(DMatrix::from_fn(dim, dim, |r, c| {
            if r != c {
                Complex64::new(0.0, 0.0)
            } else if r & mask == mask {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        }))
    }

    /// Permutation reversing qubit order: qubit `i` ↔ qubit `n + 1 − i`.
    pub fn mirror(n: usize) -> Self {
        let dim = 1usize << n;
        let rev = |x: usize| (0..n).fold(0, |acc, k| acc | (((x >> k) & 1) << (n - 1 - k)));
        Self::from_raw(DMatrix::from_fn(dim, dim, |r, c| {
            if r == rev(c) {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `exp(-i θ/2 P)` for a Pauli string `P` (`P² = I`).
    pub fn pauli_rotation(pauli: &UnitaryMatrix, theta: f64) -> Self {
        let dim = pauli.dim();
        let c = Complex64::new((theta / 2.0).cos(), 0.0);
        let s = Complex64::new(0.0, -(theta / 2.0).sin());
        Self::from_raw(DMatrix::identity(dim, dim) * c + &pauli.m * s)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self::from_raw(self.m.adjoint())
    }

    /// `self · rhs`, i.e. `rhs` acts first.
    pub fn mul(&self, rhs: &Self) -> Self {
        Self::from_raw(&self.m * &rhs.m)
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::from_raw(&self.m * z)
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// `max |U†U − I|` entrywise.
    pub fn unitarity_deviation(&self) -> f64 {
        let prod = self.m.adjoint() * &self.m;
        let id = DMatrix::<Complex64>::identity(self.dim(), self.dim());
        max_abs(&(prod - id))
    }

    /// Entrywise maximum of `|self − other|`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        max_abs(&(&self.m - &other.m))
    }

    /// Applies the matrix to an amplitude vector.
    pub fn apply(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(amps);
        (&self.m * v).iter().copied().collect()
    }

    /// First nonzero entry in column-major order.
    pub fn leading_entry(&self) -> Option<Complex64> {
        self.m.iter().copied().find(|z| z.norm() > 1e-9)
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn qubits_for(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch(dim, dim.next_power_of_two()));
    }
    Ok(dim.trailing_zeros() as usize)
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub const PAULI_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Z: Mat2 = [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]];
pub const HADAMARD: Mat2 = [
    [
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ],
    [
        Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
    ],
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_places_lsb_first() {
        // X on qubit 1 of 2 maps |00⟩ (index 0) to |10⟩ (index 1, bit 0 set)
        let x1 = UnitaryMatrix::on_qubit(2, 1, &PAULI_X);
        assert_eq!(x1.entry(1, 0), ONE);
        let x2 = UnitaryMatrix::on_qubit(2, 2, &PAULI_X);
        assert_eq!(x2.entry(2, 0), ONE);
    }

    #[test]
    fn mirror_of_two_is_swap() {
        let m = UnitaryMatrix::mirror(2);
        assert_eq!(m.entry(2, 1), ONE);
        assert_eq!(m.entry(1, 2), ONE);
        assert_eq!(m.entry(0, 0), ONE);
        assert_eq!(m.entry(3, 3), ONE);
        assert_eq!(UnitaryMatrix::mirror(1), UnitaryMatrix::identity(1));
    }

    #[test]
    fn new_rejects_non_unitary() {
        let m = DMatrix::from_element(2, 2, ONE);
        assert!(matches!(UnitaryMatrix::new(m, 1e-10), Err(Error::NonUnitary(_))));
        let odd = DMatrix::identity(3, 3);
        assert!(UnitaryMatrix::new(odd, 1e-10).is_err());
    }
}
