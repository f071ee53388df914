//! Brute-force matrix oracles and identity checks.
//!
//! Everything here is computed from explicit Kronecker products and matrix
//! powers; none of it goes through the state-vector kernels or the pattern
//! executor except where a check compares against them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compiler::{
    compile_primitive, decompose, LogicalCircuit, LogicalGate, Placement, ZxOrientation,
};
use crate::cluster::Geometry;
use crate::error::{Error, Result};
use crate::matrix::{UnitaryMatrix, HADAMARD, PAULI_X, PAULI_Z};
use crate::pattern::{extract_unitary, MeasurementPattern};
use crate::statevec::{SingleQubitGate, StateVector};

/// Tolerance for mirror and propagation identities.
pub const IDENTITY_TOL: f64 = 1e-10;
/// Tolerance for the small commutation and decomposition identities.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for pattern-level checks that go through unitary extraction.
pub const PATTERN_TOL: f64 = 1e-9;

/// The layer operator `(⊗H)(CZ₁₂ CZ₂₃ … CZ_{n−1,n})`: CZ ladder first, then
/// a Hadamard on every qubit.
pub fn c_n_matrix(n: usize) -> UnitaryMatrix {
    let ladder = (1..n).fold(UnitaryMatrix::identity(n), |acc, i| {
        UnitaryMatrix::cz(n, i, i + 1).mul(&acc)
    });
    hadamards(n).mul(&ladder)
}

/// `c_n_matrix` with the factors in the opposite order, `(CZ ladder)(⊗H)`.
fn c_n_circuit_order(n: usize) -> UnitaryMatrix {
    let ladder = (1..n).fold(UnitaryMatrix::identity(n), |acc, i| {
        UnitaryMatrix::cz(n, i, i + 1).mul(&acc)
    });
    ladder.mul(&hadamards(n))
}

fn hadamards(n: usize) -> UnitaryMatrix {
    UnitaryMatrix::tensor(n, &(1..=n).map(|q| (q, HADAMARD)).collect::<Vec<_>>())
}

fn z(n: usize, q: usize) -> UnitaryMatrix {
    UnitaryMatrix::on_qubit(n, q, &PAULI_Z)
}

fn x(n: usize, q: usize) -> UnitaryMatrix {
    UnitaryMatrix::on_qubit(n, q, &PAULI_X)
}

/// Max deviation of `lhs·op` from `rhs·lhs`, i.e. of `lhs op lhs† = rhs`.
fn conjugation_dev(lhs: &UnitaryMatrix, op: &UnitaryMatrix, rhs: &UnitaryMatrix) -> f64 {
    lhs.mul(op).max_deviation(&rhs.mul(lhs))
}

/// Outcome of [`mirror_check`].
#[derive(Clone, Debug, Serialize)]
pub struct MirrorReport {
    pub n: usize,
    pub passes: bool,
    /// Phase with `Ĉ_n^{n+1} ≈ λ·M`.
    pub lambda: (f64, f64),
    /// `max |Ĉ_n^{n+1} − λM|`.
    pub proportional_dev: f64,
    /// Worst of `Ĉ^{n+1} Z_i Ĉ^{−(n+1)} = Z_{n+1−i}` and its X analogue.
    pub conjugation_dev: f64,
    /// Worst of `Ĉ^{n+1} Z_i = Z_{n+1−i}` read as an operator identity on all
    /// inputs. Not expected to vanish; reported for comparison.
    pub literal_dev: f64,
}

/// Checks that `Ĉ_n^{n+1}` is a phase times the qubit-reversal permutation.
pub fn mirror_check(n: usize) -> MirrorReport {
    let power = c_n_matrix(n).pow(n + 1);
    let mirror = UnitaryMatrix::mirror(n);
    let lead = power.entry(0, 0);
    let lambda = if lead.norm() > 1e-12 {
        lead / lead.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let proportional_dev = power.max_deviation(&mirror.scale(lambda));
    let mut conj_dev: f64 = 0.0;
    let mut literal_dev: f64 = 0.0;
    for i in 1..=n {
        let bar = n + 1 - i;
        conj_dev = conj_dev
            .max(conjugation_dev(&power, &z(n, i), &z(n, bar)))
            .max(conjugation_dev(&power, &x(n, i), &x(n, bar)));
        literal_dev = literal_dev.max(power.mul(&z(n, i)).max_deviation(&z(n, bar)));
    }
    MirrorReport {
        n,
        passes: proportional_dev < IDENTITY_TOL && conj_dev < IDENTITY_TOL,
        lambda: (lambda.re, lambda.im),
        proportional_dev,
        conjugation_dev: conj_dev,
        literal_dev,
    }
}

/// One verified identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub n: Option<usize>,
    pub p: Option<usize>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    fn new(name: &str, n: Option<usize>, p: Option<usize>, dev: f64, tol: f64) -> Self {
        Self {
            name: name.to_string(),
            n,
            p,
            max_deviation: dev,
            tolerance: tol,
            passed: dev < tol,
            note: None,
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

/// The four two-qubit identities the propagation argument uses, checked as
/// 4×4 / 2×2 matrices: `CZ Z₁ = Z₁ CZ`, `CZ X₁ = X₁ Z₂ CZ`,
/// `CZ R_{Z₁}(θ) = R_{Z₁}(θ) CZ` (ten seeded random θ) and `H Z H = X`.
pub fn commutation_identities() -> Vec<CheckRecord> {
    let cz = UnitaryMatrix::cz(2, 1, 2);
    let z1 = z(2, 1);
    let x1z2 = x(2, 1).mul(&z(2, 2));
    let id1 = cz.mul(&z1).max_deviation(&z1.mul(&cz));
    let id2 = cz.mul(&x(2, 1)).max_deviation(&x1z2.mul(&cz));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let id3 = (0..10)
        .map(|_| {
            let theta = rng.random_range(0.0..2.0 * PI);
            let r = UnitaryMatrix::on_qubit(2, 1, &SingleQubitGate::rz(theta).entries());
            cz.mul(&r).max_deviation(&r.mul(&cz))
        })
        .fold(0.0, f64::max);
    let h = UnitaryMatrix::on_qubit(1, 1, &HADAMARD);
    let id4 = h.mul(&z(1, 1)).mul(&h).max_deviation(&x(1, 1));
    vec![
        CheckRecord::new("commute-cz-z", Some(2), None, id1, EXACT_TOL),
        CheckRecord::new("commute-cz-x", Some(2), None, id2, EXACT_TOL),
        CheckRecord::new("commute-cz-rz", Some(2), None, id3, EXACT_TOL),
        CheckRecord::new("hzh-is-x", Some(1), None, id4, EXACT_TOL),
    ]
}

/// Outcome of [`propagation_check`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PropagationReport {
    pub n: usize,
    pub p: usize,
    /// `Ĉ^{p'} Z₁ = (Z_{n−p+1} X_{n−p+2}) Ĉ^{p'}` with `p' = n − p + 2`.
    pub row1_dev: f64,
    /// `Ĉ^{p'} Z_n = (X_{p−1} Z_p) Ĉ^{p'}`.
    pub rown_dev: f64,
}

impl PropagationReport {
    pub fn passes(&self) -> bool {
        self.row1_dev < IDENTITY_TOL && self.rown_dev < IDENTITY_TOL
    }
}

/// Steering of a `Z` from row 1 or row `n` through `n − p + 2` layers.
pub fn propagation_check(n: usize, p: usize) -> Result<PropagationReport> {
    if !(2..=6).contains(&n) || p <= 1 || p > n {
        return Err(Error::InvalidGate(format!(
            "propagation needs 2 ≤ n and 1 < p < n + 1, got n={n}, p={p}"
        )));
    }
    let power = c_n_matrix(n).pow(n - p + 2);
    let row1 = z(n, n - p + 1).mul(&x(n, n - p + 2));
    let rown = x(n, p - 1).mul(&z(n, p));
    Ok(PropagationReport {
        n,
        p,
        row1_dev: conjugation_dev(&power, &z(n, 1), &row1),
        rown_dev: conjugation_dev(&power, &z(n, n), &rown),
    })
}

/// Single-layer propagation of `Z₁` and `Z_n`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SingleStepReport {
    pub n: usize,
    /// `Ĉ Z₁ = X₁ Ĉ` and `Ĉ Z_n = X_n Ĉ` for `Ĉ = (⊗H)(CZ ladder)`.
    pub layer_dev: f64,
    /// `Ĉ Z₁ = (X₁ Z₂) Ĉ` and `Ĉ Z_n = (Z_{n−1} X_n) Ĉ` for the same `Ĉ`.
    pub neighbour_form_dev: f64,
    /// The neighbour form with the factors of `Ĉ` applied in the other
    /// order, `(CZ ladder)(⊗H)`.
    pub neighbour_form_reversed_dev: f64,
}

pub fn single_step_relations(n: usize) -> SingleStepReport {
    let c = c_n_matrix(n);
    let rev = c_n_circuit_order(n);
    let nb1 = x(n, 1).mul(&z(n, 2));
    let nbn = z(n, n - 1).mul(&x(n, n));
    SingleStepReport {
        n,
        layer_dev: conjugation_dev(&c, &z(n, 1), &x(n, 1)).max(conjugation_dev(&c, &z(n, n), &x(n, n))),
        neighbour_form_dev: conjugation_dev(&c, &z(n, 1), &nb1).max(conjugation_dev(&c, &z(n, n), &nbn)),
        neighbour_form_reversed_dev: conjugation_dev(&rev, &z(n, 1), &nb1)
            .max(conjugation_dev(&rev, &z(n, n), &nbn)),
    }
}

/// Outcome of [`unitary_equiv`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    /// `|Tr(U†V)| / dim`.
    pub fidelity: f64,
    /// Phase `φ` with `U ≈ φ·V`.
    pub phase: Complex64,
}

/// Global-phase-blind comparison: passes iff `|Tr(U†V)|/dim ≥ 1 − tol`.
pub fn unitary_equiv(u: &UnitaryMatrix, v: &UnitaryMatrix, tol: f64) -> Result<Equivalence> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(u.dim(), v.dim()));
    }
    let overlap = v.adjoint().mul(u).trace();
    let fidelity = overlap.norm() / u.dim() as f64;
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(Equivalence {
        equivalent: fidelity >= 1.0 - tol,
        fidelity,
        phase,
    })
}

/// Stricter check: entrywise `max |U − φV|` after aligning the phase.
pub fn aligned_deviation(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    let eq = unitary_equiv(u, v, 1.0)?;
    Ok(u.max_deviation(&v.scale(eq.phase)))
}

/// Textbook matrix of a logical gate on an `n`-qubit register.
pub fn gate_matrix(g: &LogicalGate, n: usize) -> Result<UnitaryMatrix> {
    g.validate(n)?;
    Ok(match *g {
        LogicalGate::Rz { qubit, theta } => {
            UnitaryMatrix::on_qubit(n, qubit, &SingleQubitGate::rz(theta).entries())
        }
        LogicalGate::Rx { qubit, theta } => {
            UnitaryMatrix::on_qubit(n, qubit, &SingleQubitGate::rx(theta).entries())
        }
        LogicalGate::Rzx {
            qubit,
            theta,
            orientation,
        } => {
            let (zq, xq) = match orientation {
                ZxOrientation::ZOnLower => (qubit, qubit + 1),
                ZxOrientation::ZOnUpper => (qubit + 1, qubit),
            };
            let zx = UnitaryMatrix::tensor(n, &[(zq, PAULI_Z), (xq, PAULI_X)]);
            UnitaryMatrix::pauli_rotation(&zx, theta)
        }
        LogicalGate::H { qubit } => UnitaryMatrix::on_qubit(n, qubit, &HADAMARD),
        LogicalGate::Cnot { control, target } => {
            permutation(n, |b| if b >> (control - 1) & 1 == 1 { b ^ (1 << (target - 1)) } else { b })
        }
        LogicalGate::Swap { qubit } => permutation(n, |b| {
            let (lo, hi) = (b >> (qubit - 1) & 1, b >> qubit & 1);
            (b & !(0b11 << (qubit - 1))) | (hi << (qubit - 1)) | (lo << qubit)
        }),
        LogicalGate::Cz { qubit } => UnitaryMatrix::cz(n, qubit, qubit + 1),
    })
}

fn permutation(n: usize, f: impl Fn(usize) -> usize) -> UnitaryMatrix {
    let dim = 1usize << n;
    let m = nalgebra::DMatrix::from_fn(dim, dim, |r, c| {
        if f(c) == r {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    UnitaryMatrix::new(m, EXACT_TOL).expect("permutation matrices are unitary")
}

/// Product of the gate matrices, first gate rightmost.
pub fn circuit_unitary(c: &LogicalCircuit) -> Result<UnitaryMatrix> {
    c.gates().iter().try_fold(UnitaryMatrix::identity(c.width()), |acc, g| {
        Ok(gate_matrix(g, c.width())?.mul(&acc))
    })
}

/// Direct simulation: the input amplitudes multiplied by each gate matrix in
/// turn. Bit `k` of the amplitude index is logical qubit `k + 1`.
pub fn oracle_simulate(c: &LogicalCircuit, input: &StateVector) -> Result<StateVector> {
    if input.num_qubits() != c.width() {
        return Err(Error::ArityMismatch {
            expected: c.width(),
            got: input.num_qubits(),
        });
    }
    let mut amps = input.amplitudes().to_vec();
    for g in c.gates() {
        amps = gate_matrix(g, c.width())?.apply(&amps);
    }
    StateVector::from_amplitudes(input.labels(), amps)
}

/// Max deviation between a derived gate and the product of its primitives,
/// after phase alignment.
pub fn decomposition_deviation(g: &LogicalGate, n: usize) -> Result<f64> {
    let prims = decompose(g, n)?;
    let product = prims.iter().try_fold(UnitaryMatrix::identity(n), |acc, p| {
        Ok::<_, Error>(gate_matrix(p, n)?.mul(&acc))
    })?;
    aligned_deviation(&product, &gate_matrix(g, n)?)
}

/// Single-rotation slab families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlabFamily {
    /// `R_Z` from the first slab column.
    Rz,
    /// `R_X` from the last slab column.
    Rx,
    /// `R_ZX` from row 1 of an interior column.
    RzxRowOne,
    /// `R_ZX` from row `n` of an interior column.
    RzxRowN,
}

impl SlabFamily {
    pub const ALL: [SlabFamily; 4] = [Self::Rz, Self::Rx, Self::RzxRowOne, Self::RzxRowN];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Rz => "slab-rz",
            Self::Rx => "slab-rx",
            Self::RzxRowOne => "slab-rzx-row1",
            Self::RzxRowN => "slab-rzx-rown",
        }
    }

    /// Every gate of this family on an `n`-qubit register with the given angle.
    ///
    /// Starting from the identity placement, `Z` on the upper qubit of a pair
    /// lands on row 1 and `Z` on the lower qubit lands on row `n`.
    pub fn gates(&self, n: usize, theta: f64) -> Vec<LogicalGate> {
        match self {
            Self::Rz => (1..=n).map(|qubit| LogicalGate::Rz { qubit, theta }).collect(),
            Self::Rx => (1..=n).map(|qubit| LogicalGate::Rx { qubit, theta }).collect(),
            Self::RzxRowOne | Self::RzxRowN => {
                let orientation = if *self == Self::RzxRowOne {
                    ZxOrientation::ZOnUpper
                } else {
                    ZxOrientation::ZOnLower
                };
                (1..n)
                    .map(|qubit| LogicalGate::Rzx {
                        qubit,
                        theta,
                        orientation,
                    })
                    .collect()
            }
        }
    }
}

/// Worst `1 − |Tr(U†V)|/2^n` over every gate of `family` and every angle,
/// where `U` is the extracted slab unitary and `V = M·G`.
pub fn slab_deviation(family: SlabFamily, n: usize, thetas: &[f64]) -> Result<f64> {
    let placement = Placement::identity(n);
    let mirror = UnitaryMatrix::mirror(n);
    let mut worst: f64 = 0.0;
    for &theta in thetas {
        for g in family.gates(n, theta) {
            let plan = compile_primitive(&g, n, &placement)?;
            let u = extract_unitary(&plan.to_pattern()?)?;
            let v = mirror.mul(&gate_matrix(&g, n)?);
            worst = worst.max(1.0 - unitary_equiv(&u, &v, 0.0)?.fidelity);
        }
    }
    Ok(worst)
}

/// `1 − |Tr(U†V)|/2^n` between the all-X `n × m` pattern and `Ĉ_n^{m−1}`.
pub fn all_x_deviation(n: usize, m: usize) -> Result<f64> {
    let p = MeasurementPattern::all_x(Geometry::open_ended(n, m)?)?;
    let u = extract_unitary(&p)?;
    Ok(1.0 - unitary_equiv(&u, &c_n_matrix(n).pow(m - 1), 0.0)?.fidelity)
}

/// One entry of the verification plan.
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Mirror(usize),
    Commutation,
    SingleStep(usize),
    Propagation(usize, usize),
    Decomposition(&'static str),
    AllX(usize, usize),
    Slab(SlabFamily, usize),
}

/// Every check run for registers up to `max_n` qubits.
pub fn plan(max_n: usize) -> Vec<Check> {
    let mut out = Vec::new();
    out.extend((1..=max_n.min(5)).map(Check::Mirror));
    out.push(Check::Commutation);
    for n in 2..=max_n.min(4) {
        out.push(Check::SingleStep(n));
        out.extend((2..=n).map(|p| Check::Propagation(n, p)));
    }
    out.push(Check::Decomposition("h"));
    if max_n >= 2 {
        out.extend(
            ["cnot-up", "cnot-down", "swap", "cz"]
                .into_iter()
                .map(Check::Decomposition),
        );
    }
    for n in 1..=max_n.min(3) {
        out.extend((2..=5).map(|m| Check::AllX(n, m)));
    }
    for n in 2..=max_n.min(4) {
        out.extend(SlabFamily::ALL.into_iter().map(|f| Check::Slab(f, n)));
    }
    out
}

/// Angles used by the slab checks in the report.
const SLAB_ANGLES: [f64; 3] = [0.37, 2.1, 5.4];

/// Runs one planned check; the commutation check yields four records.
pub fn run_check(check: &Check) -> Result<Vec<CheckRecord>> {
    Ok(match check {
        Check::Mirror(n) => {
            let r = mirror_check(*n);
            let lambda = format!("lambda={:+.6}{:+.6}i", r.lambda.0, r.lambda.1);
            vec![
                CheckRecord::new("mirror-proportional", Some(*n), None, r.proportional_dev, IDENTITY_TOL)
                    .with_note(lambda),
                CheckRecord::new("mirror-conjugation", Some(*n), None, r.conjugation_dev, IDENTITY_TOL),
            ]
        }
        Check::Commutation => commutation_identities(),
        Check::SingleStep(n) => {
            let r = single_step_relations(*n);
            vec![
                CheckRecord::new("layer-z-to-x", Some(*n), None, r.layer_dev, IDENTITY_TOL),
                CheckRecord::new(
                    "layer-neighbour-form-reversed",
                    Some(*n),
                    None,
                    r.neighbour_form_reversed_dev,
                    IDENTITY_TOL,
                ),
            ]
        }
        Check::Propagation(n, p) => {
            let r = propagation_check(*n, *p)?;
            vec![
                CheckRecord::new("propagation-row1", Some(*n), Some(*p), r.row1_dev, IDENTITY_TOL),
                CheckRecord::new("propagation-rown", Some(*n), Some(*p), r.rown_dev, IDENTITY_TOL),
            ]
        }
        Check::Decomposition(name) => {
            let (g, n) = match *name {
                "h" => (LogicalGate::H { qubit: 1 }, 1),
                "cnot-up" => (LogicalGate::Cnot { control: 1, target: 2 }, 2),
                "cnot-down" => (LogicalGate::Cnot { control: 2, target: 1 }, 2),
                "swap" => (LogicalGate::Swap { qubit: 1 }, 2),
                "cz" => (LogicalGate::Cz { qubit: 1 }, 2),
                other => return Err(Error::InvalidGate(format!("unknown decomposition {other}"))),
            };
            let dev = decomposition_deviation(&g, n)?;
            vec![CheckRecord::new(&format!("decompose-{name}"), Some(n), None, dev, EXACT_TOL)]
        }
        Check::AllX(n, m) => {
            let dev = all_x_deviation(*n, *m)?;
            vec![CheckRecord::new("all-x-layers", Some(*n), None, dev, IDENTITY_TOL)
                .with_note(format!("m={m}"))]
        }
        Check::Slab(family, n) => {
            let dev = slab_deviation(*family, *n, &SLAB_ANGLES)?;
            vec![CheckRecord::new(family.name(), Some(*n), None, dev, PATTERN_TOL)]
        }
    })
}

/// Number of records [`run_suite`] emits for `max_n`.
pub fn record_count(plan: &[Check]) -> usize {
    plan.iter()
        .map(|c| match c {
            Check::Mirror(_) | Check::SingleStep(_) | Check::Propagation(..) => 2,
            Check::Commutation => 4,
            _ => 1,
        })
        .sum()
}

pub fn run_suite(max_n: usize) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();
    for check in plan(max_n) {
        out.extend(run_check(&check)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn c1_is_hadamard() {
        let h = UnitaryMatrix::on_qubit(1, 1, &HADAMARD);
        assert!(c_n_matrix(1).max_deviation(&h) < 1e-15);
    }

    #[test]
    fn c2_is_hh_cz() {
        let hh = UnitaryMatrix::tensor(2, &[(1, HADAMARD), (2, HADAMARD)]);
        let expected = hh.mul(&UnitaryMatrix::cz(2, 1, 2));
        assert!(c_n_matrix(2).max_deviation(&expected) < 1e-15);
    }

    #[test]
    fn c_n_is_unitary() {
        for n in 1..=5 {
            assert!(c_n_matrix(n).unitarity_deviation() < 1e-12);
        }
    }

    #[test]
    fn mirror_n1_and_n2() {
        let r1 = mirror_check(1);
        assert!(r1.passes);
        assert!((c(r1.lambda.0, r1.lambda.1) - c(1.0, 0.0)).norm() < 1e-12);
        // Ĉ₂³ against SWAP by direct power
        let p = c_n_matrix(2).pow(3);
        let swap = gate_matrix(&LogicalGate::Swap { qubit: 1 }, 2).unwrap();
        assert!(aligned_deviation(&p, &swap).unwrap() < 1e-12);
        assert!(mirror_check(2).passes);
    }

    #[test]
    fn mirror_holds_up_to_five() {
        for n in 1..=5 {
            let r = mirror_check(n);
            assert!(r.passes, "n={n}: {r:?}");
        }
    }

    #[test]
    fn mirror_literal_reading_does_not_hold() {
        // Ĉ^{n+1} Z_i = Z_ī as an operator identity would force Ĉ^{n+1} = Z_ī Z_i
        for n in 2..=4 {
            assert!(mirror_check(n).literal_dev > 0.5);
        }
    }

    #[test]
    fn commutation_identities_hold() {
        for r in commutation_identities() {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn propagation_examples() {
        let r = propagation_check(2, 2).unwrap();
        assert!(r.passes(), "{r:?}");
        for p in [2, 3] {
            assert!(propagation_check(3, p).unwrap().passes());
        }
        assert!(propagation_check(3, 1).is_err());
        assert!(propagation_check(3, 4).is_err());
    }

    #[test]
    fn single_layer_moves_z_to_x_on_the_same_row() {
        for n in 2..=4 {
            let r = single_step_relations(n);
            assert!(r.layer_dev < 1e-12);
            // X₁Z₂ after one layer needs the Hadamards applied before the CZs
            assert!(r.neighbour_form_reversed_dev < 1e-12);
            assert!(r.neighbour_form_dev > 0.5);
        }
    }

    #[test]
    fn unitary_equiv_examples() {
        let u = c_n_matrix(2);
        let same = unitary_equiv(&u, &u, 1e-12).unwrap();
        assert!(same.equivalent);
        assert!((same.phase - c(1.0, 0.0)).norm() < 1e-12);

        let phi = 0.77;
        let shifted = u.scale(Complex64::from_polar(1.0, phi));
        let r = unitary_equiv(&shifted, &u, 1e-12).unwrap();
        assert!(r.equivalent);
        assert!((r.phase - Complex64::from_polar(1.0, phi)).norm() < 1e-12);

        let i = UnitaryMatrix::identity(1);
        let r = unitary_equiv(&i, &x(1, 1), 1e-8).unwrap();
        assert!(!r.equivalent);
        assert!(r.fidelity < 1e-15);

        assert!(unitary_equiv(&i, &u, 1e-8).is_err());
    }

    #[test]
    fn cnot_decomposition_phase() {
        // R_Z(π/2)₁ R_X(π/2)₂ R_ZX(−π/2) = e^{−iπ/4}·CNOT
        let prims = decompose(&LogicalGate::Cnot { control: 1, target: 2 }, 2).unwrap();
        let product = prims
            .iter()
            .fold(UnitaryMatrix::identity(2), |acc, p| gate_matrix(p, 2).unwrap().mul(&acc));
        let cnot = gate_matrix(&LogicalGate::Cnot { control: 1, target: 2 }, 2).unwrap();
        let expected = cnot.scale(Complex64::from_polar(1.0, -PI / 4.0));
        assert!(product.max_deviation(&expected) < 1e-12);
    }

    #[test]
    fn all_decompositions_match() {
        for (g, n) in [
            (LogicalGate::H { qubit: 1 }, 1),
            (LogicalGate::Cnot { control: 1, target: 2 }, 2),
            (LogicalGate::Cnot { control: 2, target: 1 }, 2),
            (LogicalGate::Swap { qubit: 1 }, 2),
            (LogicalGate::Cz { qubit: 1 }, 2),
            (LogicalGate::Cnot { control: 1, target: 3 }, 3),
            (LogicalGate::Cnot { control: 4, target: 1 }, 4),
            (LogicalGate::Swap { qubit: 2 }, 4),
        ] {
            let dev = decomposition_deviation(&g, n).unwrap();
            assert!(dev < 1e-12, "{g:?}: {dev}");
        }
    }

    #[test]
    fn oracle_examples() {
        let empty = LogicalCircuit::new(2, vec![]).unwrap();
        let input = StateVector::basis(&[1, 2], 2).unwrap();
        assert_eq!(oracle_simulate(&empty, &input).unwrap(), input);

        // exp(−iπ/4 Z₁X₂)|0+⟩: Z₁|0⟩ = |0⟩ and X₂|+⟩ = |+⟩, so the state only picks up e^{−iπ/4}
        let rzx = LogicalCircuit::new(
            2,
            vec![LogicalGate::Rzx {
                qubit: 1,
                theta: FRAC_PI_2,
                orientation: ZxOrientation::ZOnLower,
            }],
        )
        .unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let zero_plus =
            StateVector::from_amplitudes(&[1, 2], vec![c(h, 0.0), c(0.0, 0.0), c(h, 0.0), c(0.0, 0.0)])
                .unwrap();
        let out = oracle_simulate(&rzx, &zero_plus).unwrap();
        let phase = Complex64::from_polar(1.0, -PI / 4.0);
        for (a, e) in out.amplitudes().iter().zip(zero_plus.amplitudes()) {
            assert!((a - e * phase).norm() < 1e-12);
        }

        let bell = LogicalCircuit::new(
            2,
            vec![LogicalGate::H { qubit: 1 }, LogicalGate::Cnot { control: 1, target: 2 }],
        )
        .unwrap();
        let out = oracle_simulate(&bell, &StateVector::basis(&[1, 2], 0).unwrap()).unwrap();
        let expected = [c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)];
        for (a, e) in out.amplitudes().iter().zip(expected) {
            assert!((a - e).norm() < 1e-12);
        }
    }

    #[test]
    fn slab_families_small() {
        for f in SlabFamily::ALL {
            let dev = slab_deviation(f, 2, &[0.3, 4.0]).unwrap();
            assert!(dev < 1e-9, "{f:?}: {dev}");
        }
    }

    #[test]
    fn report_counts_match_plan() {
        for max_n in 1..=3 {
            let plan = plan(max_n);
            let records = run_suite(max_n).unwrap();
            assert_eq!(records.len(), record_count(&plan));
            assert!(records.iter().all(|r| r.passed), "{records:#?}");
        }
    }
}
