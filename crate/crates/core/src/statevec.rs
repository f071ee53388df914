//! Dense state-vector engine.
//!
//! A [`StateVector`] stores `2^q` complex amplitudes together with an ordered
//! list of qubit labels. Label position `k` maps to bit `k` of the amplitude
//! index, so the first label is the least significant bit. Every public
//! operation leaves the state normalised.
//!
//! Measurements remove the measured qubit from the vector, which is what lets
//! the cluster builder stream columns with at most `2n` live qubits.

use num_complex::Complex64;
use rand::{Rng, RngCore};
use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};

/// Identifier of a qubit inside a [`StateVector`].
pub type Label = usize;

/// Tolerance used when validating unitarity of user supplied gates.
pub const UNITARY_TOL: f64 = 1e-12;
/// Branches with probability at or below this value cannot be forced.
pub const IMPOSSIBLE_BRANCH_TOL: f64 = 1e-12;

// Below this many amplitudes the kernels stay on the calling thread.
const PAR_THRESHOLD: usize = 1 << 14;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A validated 2×2 unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitGate {
    m: [[Complex64; 2]; 2],
}

impl SingleQubitGate {
    /// Wraps `entries` (row-major) after checking `entries† · entries = I`.
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let dev = unitarity_deviation(&entries);
        if dev > UNITARY_TOL {
            return Err(Error::NonUnitary(dev));
        }
        Ok(Self { m: entries })
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.m
    }

    pub fn identity() -> Self {
        Self { m: [[ONE, ZERO], [ZERO, ONE]] }
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self { m: [[h, h], [h, -h]] }
    }

    pub fn pauli_x() -> Self {
        Self { m: [[ZERO, ONE], [ONE, ZERO]] }
    }

    pub fn pauli_z() -> Self {
        Self { m: [[ONE, ZERO], [ZERO, -ONE]] }
    }

    /// `exp(-i θ/2 Z)`.
    pub fn rz(theta: f64) -> Self {
        let half = theta / 2.0;
        Self {
            m: [
                [Complex64::from_polar(1.0, -half), ZERO],
                [ZERO, Complex64::from_polar(1.0, half)],
            ],
        }
    }

    /// `exp(-i θ/2 X)`.
    pub fn rx(theta: f64) -> Self {
        let half = theta / 2.0;
        let c = Complex64::new(half.cos(), 0.0);
        let s = Complex64::new(0.0, -half.sin());
        Self { m: [[c, s], [s, c]] }
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn then_after(&self, rhs: &Self) -> Self {
        let a = &self.m;
        let b = &rhs.m;
        let mut m = [[ZERO; 2]; 2];
        for (r, row) in m.iter_mut().enumerate() {
            for (c, v) in row.iter_mut().enumerate() {
                *v = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Self { m }
    }
}

fn unitarity_deviation(m: &[[Complex64; 2]; 2]) -> f64 {
    let mut dev: f64 = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            let v = m[0][r].conj() * m[0][c] + m[1][r].conj() * m[1][c];
            let target = if r == c { ONE } else { ZERO };
            dev = dev.max((v - target).norm());
        }
    }
    dev
}

/// How the outcome of a measurement is chosen.
pub enum Outcome<'a> {
    /// Post-select the given bit (0 ↔ `|+_θ⟩`).
    Forced(u8),
    /// Draw the bit with its Born probability.
    Sample(&'a mut dyn RngCore),
}

/// Result of a single (X,Y)-plane measurement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Measurement {
    pub outcome: u8,
    /// Probability of the branch that was taken, before renormalisation.
    pub probability: f64,
}

/// Dense complex amplitude vector over an ordered set of labelled qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    labels: Vec<Label>,
}

impl StateVector {
    /// `|+⟩^{⊗q}` over `labels`.
    pub fn init_plus(labels: &[Label]) -> Result<Self> {
        check_distinct(labels)?;
        let dim = 1usize << labels.len();
        let a = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Ok(Self {
            amps: vec![a; dim],
            labels: labels.to_vec(),
        })
    }

    /// Computational basis state `|index⟩` (bit `k` of `index` is qubit `labels[k]`).
    pub fn basis(labels: &[Label], index: usize) -> Result<Self> {
        check_distinct(labels)?;
        let dim = 1usize << labels.len();
        if index >= dim {
            return Err(Error::LengthMismatch {
                len: index + 1,
                qubits: labels.len(),
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self {
            amps,
            labels: labels.to_vec(),
        })
    }

    /// Builds a state from raw amplitudes. The vector must be normalised to
    /// within `1e-9`; it is then renormalised exactly.
    pub fn from_amplitudes(labels: &[Label], amps: Vec<Complex64>) -> Result<Self> {
        check_distinct(labels)?;
        if amps.len() != 1usize << labels.len() {
            return Err(Error::LengthMismatch {
                len: amps.len(),
                qubits: labels.len(),
            });
        }
        let mut s = Self {
            amps,
            labels: labels.to_vec(),
        };
        let n2 = s.norm_sqr();
        if !n2.is_finite() || (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(n2));
        }
        s.renormalize();
        Ok(s)
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Bit position of `label`.
    pub fn position(&self, label: Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::UnknownLabel(label))
    }

    fn renormalize(&mut self) {
        let n = self.norm_sqr().sqrt();
        if n > 0.0 && n != 1.0 {
            let inv = n.recip();
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
    }

    /// Tensors a fresh `|+⟩` qubit onto the state as the new most significant bit.
    pub fn append_plus(&mut self, label: Label) -> Result<()> {
        if self.labels.contains(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        let old = self.amps.len();
        self.amps.reserve(old);
        for a in self.amps.iter_mut() {
            *a *= FRAC_1_SQRT_2;
        }
        self.amps.extend_from_within(..old);
        self.labels.push(label);
        Ok(())
    }

    /// Controlled-Z between `a` and `b`.
    pub fn apply_cz(&mut self, a: Label, b: Label) -> Result<()> {
        if a == b {
            return Err(Error::SameQubit(a));
        }
        let mask = (1usize << self.position(a)?) | (1usize << self.position(b)?);
        let flip = |(i, amp): (usize, &mut Complex64)| {
            if i & mask == mask {
                *amp = -*amp;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_iter_mut().enumerate().for_each(flip);
        } else {
            self.amps.iter_mut().enumerate().for_each(flip);
        }
        Ok(())
    }

    /// Applies `gate` to qubit `q`.
    pub fn apply_single(&mut self, q: Label, gate: &SingleQubitGate) -> Result<()> {
        let stride = 1usize << self.position(q)?;
        let m = gate.m;
        let kernel = |chunk: &mut [Complex64]| {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0][0] * x + m[0][1] * y;
                *a1 = m[1][0] * x + m[1][1] * y;
            }
        };
        if self.amps.len() >= PAR_THRESHOLD {
            self.amps.par_chunks_mut(2 * stride).for_each(kernel);
        } else {
            self.amps.chunks_mut(2 * stride).for_each(kernel);
        }
        Ok(())
    }

    /// Projective measurement of `q` in the basis `{|+_θ⟩, |−_θ⟩}` with
    /// `|±_θ⟩ = (|0⟩ ± e^{iθ}|1⟩)/√2`. Outcome 0 corresponds to `|+_θ⟩`.
    ///
    /// The measured qubit is removed from the state and the remainder is
    /// renormalised.
    pub fn measure_xy(&mut self, q: Label, theta: f64, outcome: Outcome<'_>) -> Result<Measurement> {
        let pos = self.position(q)?;
        let stride = 1usize << pos;
        let phase = Complex64::from_polar(FRAC_1_SQRT_2, -theta);
        let half = self.amps.len() / 2;
        let pair = |r: usize| {
            let i0 = ((r >> pos) << (pos + 1)) | (r & (stride - 1));
            (self.amps[i0], self.amps[i0 | stride])
        };

        let p0: f64 = (0..half)
            .map(|r| {
                let (a0, a1) = pair(r);
                (a0 * FRAC_1_SQRT_2 + a1 * phase).norm_sqr()
            })
            .sum();
        let p0 = p0.clamp(0.0, 1.0);
        let (bit, probability) = match outcome {
            Outcome::Forced(bit) => {
                let bit = u8::from(bit != 0);
                let p = if bit == 0 { p0 } else { 1.0 - p0 };
                if p <= IMPOSSIBLE_BRANCH_TOL {
                    return Err(Error::ImpossibleBranch {
                        outcome: bit,
                        probability: p,
                    });
                }
                (bit, p)
            }
            Outcome::Sample(rng) => {
                let u: f64 = rng.random();
                if u < p0 {
                    (0, p0)
                } else {
                    (1, 1.0 - p0)
                }
            }
        };

        let sign = if bit == 0 { phase } else { -phase };
        let scale = probability.sqrt().recip();
        let amps: Vec<Complex64> = (0..half)
            .map(|r| {
                let (a0, a1) = pair(r);
                (a0 * FRAC_1_SQRT_2 + a1 * sign) * scale
            })
            .collect();
        self.amps = amps;
        self.labels.remove(pos);
        self.renormalize();
        Ok(Measurement {
            outcome: bit,
            probability,
        })
    }

    /// Returns the same state with its qubits stored in `labels` order.
    pub fn reordered(&self, labels: &[Label]) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::LabelMismatch(format!(
                "{:?} vs {:?}",
                self.labels, labels
            )));
        }
        check_distinct(labels)?;
        // perm[k] = old bit position of new bit k
        let perm = labels
            .iter()
            .map(|&l| {
                self.position(l).map_err(|_| {
                    Error::LabelMismatch(format!("{:?} vs {:?}", self.labels, labels))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if perm.iter().enumerate().all(|(k, &p)| k == p) {
            return Ok(self.clone());
        }
        let amps = (0..self.amps.len())
            .map(|new| {
                let old = perm
                    .iter()
                    .enumerate()
                    .fold(0usize, |acc, (k, &p)| acc | (((new >> k) & 1) << p));
                self.amps[old]
            })
            .collect();
        Ok(Self {
            amps,
            labels: labels.to_vec(),
        })
    }

    /// Renames the qubits position by position, leaving amplitudes untouched.
    pub fn relabeled(mut self, labels: &[Label]) -> Result<Self> {
        if labels.len() != self.labels.len() {
            return Err(Error::LengthMismatch {
                len: self.amps.len(),
                qubits: labels.len(),
            });
        }
        check_distinct(labels)?;
        self.labels = labels.to_vec();
        Ok(self)
    }

    /// `⟨self|other⟩`. States over the same label set in a different order
    /// are aligned first.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64> {
        let other = if self.labels == other.labels {
            std::borrow::Cow::Borrowed(other)
        } else {
            std::borrow::Cow::Owned(other.reordered(&self.labels)?)
        };
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|⟨self|other⟩|`, the global-phase blind similarity of two pure states.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.overlap(other)?.norm())
    }
}

fn check_distinct(labels: &[Label]) -> Result<()> {
    for (k, l) in labels.iter().enumerate() {
        if labels[..k].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    Ok(())
}
