//! Measurement patterns and their execution.
//!
//! A pattern lists, column by column, the (X,Y)-plane angle at which each
//! operational site is measured. It can be run on the positive branch (every
//! outcome post-selected to 0), or adaptively: outcomes are sampled, later
//! angles are adjusted by the flow dependencies, and the residual Pauli frame
//! on the output column is returned.
//!
//! The dependency sets come from the flow `f(i,j) = (i,j+1)`: the outcome of
//! `v` induces an `X` byproduct on `f(v)` and `Z` byproducts on every
//! neighbour of `f(v)` other than `v`.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::RngCore;
use rayon::prelude::*;

use crate::cluster::{stream_columns, Geometry, InputSpec, Site};
use crate::error::{Error, Result};
use crate::matrix::UnitaryMatrix;
use crate::statevec::{Outcome, SingleQubitGate, StateVector};

/// Largest register for which [`extract_unitary`] builds a dense matrix.
pub const MAX_EXTRACT_ROWS: usize = 6;
/// Unitarity tolerance for extracted matrices.
pub const EXTRACT_TOL: f64 = 1e-9;

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let a = theta.rem_euclid(TAU);
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Sites whose outcomes condition a measurement or an output correction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Corrections {
    pub x_deps: Vec<Site>,
    pub z_deps: Vec<Site>,
}

/// One measurement of a pattern.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub site: Site,
    /// (X,Y)-plane angle in `[0, 2π)`.
    pub angle: f64,
    pub corrections: Option<Corrections>,
}

impl Step {
    pub fn new(site: Site, angle: f64) -> Self {
        Self {
            site,
            angle: normalize_angle(angle),
            corrections: None,
        }
    }
}

/// An unmeasured output qubit and the outcomes that feed its Pauli frame.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputSite {
    pub site: Site,
    pub corrections: Option<Corrections>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementPattern {
    geometry: Geometry,
    steps: Vec<Step>,
    outputs: Vec<OutputSite>,
}

impl MeasurementPattern {
    /// Validates and assembles a pattern.
    ///
    /// Every site outside the last column must be measured exactly once,
    /// columns must be visited left to right, outputs must be the last
    /// column in row order, and dependencies must point at earlier steps.
    pub fn new(geometry: Geometry, mut steps: Vec<Step>, outputs: Vec<OutputSite>) -> Result<Self> {
        let n = geometry.rows();
        let expected_outputs = geometry.output_sites();
        if outputs.iter().map(|o| o.site).ne(expected_outputs.iter().copied()) {
            return Err(Error::InvalidPattern(format!(
                "outputs must be column {} in row order",
                geometry.cols()
            )));
        }
        if steps.len() != n * (geometry.cols() - 1) {
            return Err(Error::InvalidPattern(format!(
                "expected {} measurements, found {}",
                n * (geometry.cols() - 1),
                steps.len()
            )));
        }
        let mut order: HashMap<Site, usize> = HashMap::new();
        let mut last_col = 1;
        for (k, step) in steps.iter_mut().enumerate() {
            let s = step.site;
            if !geometry.contains(s) || s.col == geometry.cols() {
                return Err(Error::InvalidPattern(format!("site {s} is not operational")));
            }
            if s.col < last_col {
                return Err(Error::InvalidPattern(format!(
                    "site {s} measured after column {last_col}"
                )));
            }
            last_col = s.col;
            if !step.angle.is_finite() {
                return Err(Error::InvalidPattern(format!("angle at {s} is not finite")));
            }
            step.angle = normalize_angle(step.angle);
            if let Some(c) = &step.corrections {
                check_deps(c, &order, k, s)?;
            }
            if order.insert(s, k).is_some() {
                return Err(Error::InvalidPattern(format!("site {s} measured twice")));
            }
        }
        for o in &outputs {
            if let Some(c) = &o.corrections {
                check_deps(c, &order, steps.len(), o.site)?;
            }
        }
        Ok(Self {
            geometry,
            steps,
            outputs,
        })
    }

    /// Column-major pattern measuring each operational site at `angle(site)`,
    /// with flow dependencies attached.
    pub fn from_angles(geometry: Geometry, angle: impl Fn(Site) -> f64) -> Result<Self> {
        let steps = (1..geometry.cols())
            .flat_map(|j| geometry.column(j))
            .map(|s| Step::new(s, angle(s)))
            .collect();
        let outputs = geometry
            .output_sites()
            .into_iter()
            .map(|site| OutputSite {
                site,
                corrections: None,
            })
            .collect();
        Ok(Self::new(geometry, steps, outputs)?.with_flow())
    }

    /// Every operational qubit measured in the X basis.
    pub fn all_x(geometry: Geometry) -> Result<Self> {
        Self::from_angles(geometry, |_| 0.0)
    }

    /// Replaces all dependency sets with those of the column flow.
    pub fn with_flow(mut self) -> Self {
        let g = self.geometry;
        let mut deps: HashMap<Site, Corrections> = HashMap::new();
        for step in &self.steps {
            let v = step.site;
            let f = Site::new(v.row, v.col + 1);
            deps.entry(f).or_default().x_deps.push(v);
            for u in g.neighbors(f).into_iter().filter(|&u| u != v) {
                deps.entry(u).or_default().z_deps.push(v);
            }
        }
        for step in &mut self.steps {
            step.corrections = Some(deps.remove(&step.site).unwrap_or_default());
        }
        for out in &mut self.outputs {
            out.corrections = Some(deps.remove(&out.site).unwrap_or_default());
        }
        self
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn outputs(&self) -> &[OutputSite] {
        &self.outputs
    }

    pub fn is_adaptive_ready(&self) -> bool {
        self.steps.iter().all(|s| s.corrections.is_some())
            && self.outputs.iter().all(|o| o.corrections.is_some())
    }

    /// Steps whose angle is not 0.
    pub fn rotated_steps(&self) -> impl Iterator<Item = &Step> {
        self.steps.iter().filter(|s| s.angle != 0.0)
    }

    fn steps_by_column(&self) -> Vec<&[Step]> {
        let mut out = Vec::with_capacity(self.geometry.cols());
        let mut rest = &self.steps[..];
        for j in 1..self.geometry.cols() {
            let k = rest.iter().take_while(|s| s.site.col == j).count();
            let (col, tail) = rest.split_at(k);
            out.push(col);
            rest = tail;
        }
        out
    }
}

fn check_deps(c: &Corrections, order: &HashMap<Site, usize>, k: usize, at: Site) -> Result<()> {
    for d in c.x_deps.iter().chain(&c.z_deps) {
        match order.get(d) {
            Some(&i) if i < k => {}
            _ => {
                return Err(Error::InvalidPattern(format!(
                    "dependency {d} of {at} is not an earlier measurement"
                )))
            }
        }
    }
    Ok(())
}

/// Supplies outcomes to [`run_adaptive`].
pub trait OutcomeSource {
    fn next_outcome(&mut self) -> Outcome<'_>;
}

/// Any random generator samples outcomes with their Born probabilities.
impl<R: RngCore> OutcomeSource for R {
    fn next_outcome(&mut self) -> Outcome<'_> {
        Outcome::Sample(self)
    }
}

/// Forces the listed outcomes in order, then samples from `fallback`.
pub struct Scripted<R> {
    script: Vec<u8>,
    next: usize,
    fallback: R,
}

impl<R: RngCore> Scripted<R> {
    pub fn new(script: Vec<u8>, fallback: R) -> Self {
        Self {
            script,
            next: 0,
            fallback,
        }
    }
}

impl<R: RngCore> OutcomeSource for Scripted<R> {
    fn next_outcome(&mut self) -> Outcome<'_> {
        match self.script.get(self.next) {
            Some(&b) => {
                self.next += 1;
                Outcome::Forced(b)
            }
            None => Outcome::Sample(&mut self.fallback),
        }
    }
}

/// Forces every outcome to 0.
pub struct AllZero;

impl OutcomeSource for AllZero {
    fn next_outcome(&mut self) -> Outcome<'_> {
        Outcome::Forced(0)
    }
}

/// Pauli byproduct on the output column, one bit pair per row.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PauliFrame {
    pub x_exp: Vec<u8>,
    pub z_exp: Vec<u8>,
}

impl PauliFrame {
    pub fn identity(n: usize) -> Self {
        Self {
            x_exp: vec![0; n],
            z_exp: vec![0; n],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_exp.iter().chain(&self.z_exp).all(|&b| b == 0)
    }

    /// XOR composition.
    pub fn compose(&self, other: &PauliFrame) -> PauliFrame {
        let xor = |a: &[u8], b: &[u8]| a.iter().zip(b).map(|(x, y)| x ^ y).collect();
        PauliFrame {
            x_exp: xor(&self.x_exp, &other.x_exp),
            z_exp: xor(&self.z_exp, &other.z_exp),
        }
    }

    /// Undoes the byproduct on `state`, whose qubits are the output rows in order.
    pub fn correct(&self, state: &StateVector) -> Result<StateVector> {
        let mut out = state.clone();
        let labels = state.labels().to_vec();
        if labels.len() != self.x_exp.len() {
            return Err(Error::ArityMismatch {
                expected: self.x_exp.len(),
                got: labels.len(),
            });
        }
        for (k, &l) in labels.iter().enumerate() {
            if self.x_exp[k] == 1 {
                out.apply_single(l, &SingleQubitGate::pauli_x())?;
            }
            if self.z_exp[k] == 1 {
                out.apply_single(l, &SingleQubitGate::pauli_z())?;
            }
        }
        Ok(out)
    }
}

/// Output of a positive-branch run.
#[derive(Clone, Debug)]
pub struct PositiveRun {
    /// Output-column state, qubits ordered by row.
    pub state: StateVector,
    /// Probability of the all-zero branch.
    pub probability: f64,
    pub peak_live_qubits: usize,
}

/// Output of an adaptive run.
#[derive(Clone, Debug)]
pub struct AdaptiveRun {
    /// Raw output-column state before frame correction.
    pub state: StateVector,
    pub outcomes: Vec<(Site, u8)>,
    pub frame: PauliFrame,
}

impl AdaptiveRun {
    pub fn corrected(&self) -> Result<StateVector> {
        self.frame.correct(&self.state)
    }
}

/// Runs every measurement post-selected on outcome 0 at its nominal angle.
pub fn run_positive_branch(p: &MeasurementPattern, input: &InputSpec) -> Result<StateVector> {
    run_positive_branch_traced(p, input).map(|r| r.state)
}

pub fn run_positive_branch_traced(p: &MeasurementPattern, input: &InputSpec) -> Result<PositiveRun> {
    let columns = p.steps_by_column();
    let mut probability = 1.0;
    let streamed = stream_columns(&p.geometry, input, |col| {
        for step in columns[col.column() - 1] {
            probability *= col.measure(step.site.row, step.angle, Outcome::Forced(0))?.probability;
        }
        Ok(())
    })?;
    Ok(PositiveRun {
        state: streamed.state,
        probability,
        peak_live_qubits: streamed.peak_live_qubits,
    })
}

/// Runs the pattern with feed-forward. Each site is measured at
/// `(−1)^{s_x}·θ + s_z·π`, where `s_x`, `s_z` are the parities of the
/// outcomes in its X and Z dependency sets.
pub fn run_adaptive(
    p: &MeasurementPattern,
    input: &InputSpec,
    source: &mut dyn OutcomeSource,
) -> Result<AdaptiveRun> {
    if !p.is_adaptive_ready() {
        return Err(Error::NotAdaptiveReady(
            "measurements or outputs lack dependency sets".into(),
        ));
    }
    let columns = p.steps_by_column();
    let mut results: HashMap<Site, u8> = HashMap::with_capacity(p.steps.len());
    let mut outcomes = Vec::with_capacity(p.steps.len());
    let parity = |deps: &[Site], results: &HashMap<Site, u8>| {
        deps.iter().fold(0u8, |acc, d| acc ^ results[d])
    };
    let streamed = stream_columns(&p.geometry, input, |col| {
        for step in columns[col.column() - 1] {
            let c = step.corrections.as_ref().expect("checked adaptive-ready");
            let sx = parity(&c.x_deps, &results);
            let sz = parity(&c.z_deps, &results);
            let signed = if sx == 1 { -step.angle } else { step.angle };
            let angle = normalize_angle(signed + f64::from(sz) * PI);
            let m = col.measure(step.site.row, angle, source.next_outcome())?;
            results.insert(step.site, m.outcome);
            outcomes.push((step.site, m.outcome));
        }
        Ok(())
    })?;
    let mut frame = PauliFrame::identity(p.outputs.len());
    for (k, out) in p.outputs.iter().enumerate() {
        let c = out.corrections.as_ref().expect("checked adaptive-ready");
        frame.x_exp[k] = parity(&c.x_deps, &results);
        frame.z_exp[k] = parity(&c.z_deps, &results);
    }
    Ok(AdaptiveRun {
        state: streamed.state,
        outcomes,
        frame,
    })
}

/// Assembles the positive-branch map as a `2^n × 2^n` matrix, column `x`
/// being the output for input basis state `|x⟩`. The global phase is fixed
/// by making the first nonzero entry real and positive.
pub fn extract_unitary(p: &MeasurementPattern) -> Result<UnitaryMatrix> {
    let n = p.geometry.rows();
    if n > MAX_EXTRACT_ROWS {
        return Err(Error::InvalidPattern(format!(
            "{n} rows exceeds the {MAX_EXTRACT_ROWS}-row limit for unitary extraction"
        )));
    }
    let dim = 1usize << n;
    let input_labels = p.geometry.column_labels(1);
    let columns = (0..dim)
        .into_par_iter()
        .map(|x| {
            let input = StateVector::basis(&input_labels, x)?;
            let out = run_positive_branch(p, &InputSpec::Generic(input))?;
            Ok(out.amplitudes().to_vec())
        })
        .collect::<Result<Vec<Vec<Complex64>>>>()?;
    let m = nalgebra::DMatrix::from_fn(dim, dim, |r, c| columns[c][r]);
    let raw = UnitaryMatrix::from_raw(m);
    let lead = raw.leading_entry().unwrap_or(Complex64::new(1.0, 0.0));
    let fixed = raw.scale(lead.conj() / lead.norm());
    let dev = fixed.unitarity_deviation();
    if dev > EXTRACT_TOL {
        return Err(Error::PhaseInconsistency(dev));
    }
    Ok(fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{HADAMARD, PAULI_X};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c_n(n: usize) -> UnitaryMatrix {
        // (⊗H)·(CZ ladder)
        let mut u = UnitaryMatrix::identity(n);
        for i in 1..n {
            u = UnitaryMatrix::cz(n, i, i + 1).mul(&u);
        }
        let h = UnitaryMatrix::tensor(n, &(1..=n).map(|q| (q, HADAMARD)).collect::<Vec<_>>());
        h.mul(&u)
    }

    fn phase_blind_fidelity(u: &UnitaryMatrix, v: &UnitaryMatrix) -> f64 {
        u.adjoint().mul(v).trace().norm() / u.dim() as f64
    }

    #[test]
    fn normalize_wraps_into_range() {
        assert_eq!(normalize_angle(0.0), 0.0);
        assert!((normalize_angle(-0.5) - (TAU - 0.5)).abs() < 1e-15);
        assert!((normalize_angle(TAU + 0.25) - 0.25).abs() < 1e-15);
        assert!(normalize_angle(-1e-18) < TAU);
    }

    #[test]
    fn flow_dependencies_for_2x3() {
        let g = Geometry::open_ended(2, 3).unwrap();
        let p = MeasurementPattern::all_x(g).unwrap();
        let step = |r, c| {
            p.steps()
                .iter()
                .find(|s| s.site == Site::new(r, c))
                .unwrap()
                .corrections
                .clone()
                .unwrap()
        };
        assert_eq!(step(1, 1), Corrections::default());
        // (1,2) = f((1,1)); (2,1)'s successor (2,2) neighbours (1,2) vertically
        assert_eq!(
            step(1, 2),
            Corrections {
                x_deps: vec![Site::new(1, 1)],
                z_deps: vec![Site::new(2, 1)],
            }
        );
        let out1 = p.outputs()[0].corrections.clone().unwrap();
        assert_eq!(out1.x_deps, vec![Site::new(1, 2)]);
        // (1,1) via f=(1,2)→(1,3); column 3 has no vertical edges in an open cluster
        assert_eq!(out1.z_deps, vec![Site::new(1, 1)]);
    }

    #[test]
    fn rejects_malformed_patterns() {
        let g = Geometry::open_ended(1, 3).unwrap();
        let out = vec![OutputSite {
            site: Site::new(1, 3),
            corrections: None,
        }];
        let twice = vec![Step::new(Site::new(1, 1), 0.0), Step::new(Site::new(1, 1), 0.0)];
        assert!(MeasurementPattern::new(g, twice, out.clone()).is_err());
        let backwards = vec![Step::new(Site::new(1, 2), 0.0), Step::new(Site::new(1, 1), 0.0)];
        assert!(MeasurementPattern::new(g, backwards, out.clone()).is_err());
        let mut forward_dep = vec![Step::new(Site::new(1, 1), 0.0), Step::new(Site::new(1, 2), 0.0)];
        forward_dep[0].corrections = Some(Corrections {
            x_deps: vec![Site::new(1, 2)],
            z_deps: vec![],
        });
        assert!(MeasurementPattern::new(g, forward_dep, out.clone()).is_err());
        let measures_output = vec![Step::new(Site::new(1, 1), 0.0), Step::new(Site::new(1, 3), 0.0)];
        assert!(MeasurementPattern::new(g, measures_output, out).is_err());
    }

    #[test]
    fn lemma2_all_x_2x4() {
        let p = MeasurementPattern::all_x(Geometry::open_ended(2, 4).unwrap()).unwrap();
        let u = extract_unitary(&p).unwrap();
        assert!(phase_blind_fidelity(&u, &c_n(2).pow(3)) > 1.0 - 1e-12);
    }

    #[test]
    fn fig3b_rotation_at_input_site() {
        // Angle α at (1,1) applies R_Z(−α) on row 1 before the three Ĉ₂ layers.
        let alpha = 0.9;
        let g = Geometry::open_ended(2, 4).unwrap();
        let p = MeasurementPattern::from_angles(g, |s| {
            if s == Site::new(1, 1) {
                alpha
            } else {
                0.0
            }
        })
        .unwrap();
        let u = extract_unitary(&p).unwrap();
        let rz = SingleQubitGate::rz(-alpha).entries();
        let oracle = c_n(2).pow(3).mul(&UnitaryMatrix::on_qubit(2, 1, &rz));
        assert!(phase_blind_fidelity(&u, &oracle) > 1.0 - 1e-12);
    }

    #[test]
    fn trivial_pattern_is_identity() {
        let p = MeasurementPattern::all_x(Geometry::open_ended(3, 1).unwrap()).unwrap();
        assert!(p.steps().is_empty());
        let u = extract_unitary(&p).unwrap();
        assert!(u.max_deviation(&UnitaryMatrix::identity(3)) < 1e-12);
        let input = StateVector::basis(&[1, 2, 3], 5).unwrap();
        let out = run_positive_branch(&p, &InputSpec::Generic(input.clone())).unwrap();
        assert_eq!(out, input);
    }

    #[test]
    fn one_by_two_positive_branch_applies_h_rz_minus_angle() {
        let g = Geometry::open_ended(1, 2).unwrap();
        let psi = StateVector::from_amplitudes(
            &[1],
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
        )
        .unwrap();
        for alpha in [0.0, 0.4, 3.0] {
            let p = MeasurementPattern::from_angles(g, |_| alpha).unwrap();
            let out = run_positive_branch(&p, &InputSpec::Generic(psi.clone())).unwrap();
            let mut expected = psi.clone();
            expected.apply_single(1, &SingleQubitGate::rz(-alpha)).unwrap();
            expected.apply_single(1, &SingleQubitGate::hadamard()).unwrap();
            let expected = expected.relabeled(&[2]).unwrap();
            assert!(out.fidelity(&expected).unwrap() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn one_by_two_outcome_one_has_x_frame() {
        let g = Geometry::open_ended(1, 2).unwrap();
        let p = MeasurementPattern::all_x(g).unwrap();
        let psi = StateVector::from_amplitudes(
            &[1],
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
        )
        .unwrap();
        let mut script = Scripted::new(vec![1], ChaCha8Rng::seed_from_u64(0));
        let run = run_adaptive(&p, &InputSpec::Generic(psi.clone()), &mut script).unwrap();
        assert_eq!(run.outcomes, vec![(Site::new(1, 1), 1)]);
        assert_eq!(run.frame, PauliFrame { x_exp: vec![1], z_exp: vec![0] });
        // raw output is X·H|ψ⟩
        let mut xh = psi.clone();
        xh.apply_single(1, &SingleQubitGate::new(HADAMARD).unwrap()).unwrap();
        xh.apply_single(1, &SingleQubitGate::new(PAULI_X).unwrap()).unwrap();
        let xh = xh.relabeled(&[2]).unwrap();
        assert!(run.state.fidelity(&xh).unwrap() > 1.0 - 1e-12);
        let positive = run_positive_branch(&p, &InputSpec::Generic(psi)).unwrap();
        assert!(run.corrected().unwrap().fidelity(&positive).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn all_zero_source_matches_positive_branch() {
        let g = Geometry::open_ended(3, 4).unwrap();
        let p = MeasurementPattern::from_angles(g, |s| 0.3 * s.row as f64 + 0.7 * s.col as f64).unwrap();
        let run = run_adaptive(&p, &InputSpec::Standard, &mut AllZero).unwrap();
        assert!(run.frame.is_identity());
        let pos = run_positive_branch(&p, &InputSpec::Standard).unwrap();
        assert!((run.state.overlap(&pos).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn exhaustive_outcomes_correct_to_positive_branch() {
        let g = Geometry::open_ended(2, 4).unwrap();
        let p = MeasurementPattern::from_angles(g, |s| 0.41 * (s.row * 3 + s.col) as f64).unwrap();
        let pos = run_positive_branch(&p, &InputSpec::Standard).unwrap();
        for bits in 0..1u32 << 6 {
            let script = (0..6).map(|k| ((bits >> k) & 1) as u8).collect();
            let mut src = Scripted::new(script, ChaCha8Rng::seed_from_u64(0));
            let run = run_adaptive(&p, &InputSpec::Standard, &mut src).unwrap();
            let f = run.corrected().unwrap().fidelity(&pos).unwrap();
            assert!(f > 1.0 - 1e-10, "outcomes {bits:06b}: fidelity {f}");
        }
    }

    #[test]
    fn positive_branch_probability_is_two_to_minus_k() {
        let g = Geometry::open_ended(2, 5).unwrap();
        let p = MeasurementPattern::all_x(g).unwrap();
        let input = StateVector::basis(&[1, 2], 1).unwrap();
        let run = run_positive_branch_traced(&p, &InputSpec::Generic(input)).unwrap();
        assert!((run.probability - 2f64.powi(-8)).abs() < 1e-9);
    }

    #[test]
    fn adaptive_requires_dependencies() {
        let g = Geometry::open_ended(1, 2).unwrap();
        let p = MeasurementPattern::new(
            g,
            vec![Step::new(Site::new(1, 1), 0.0)],
            vec![OutputSite {
                site: Site::new(1, 2),
                corrections: None,
            }],
        )
        .unwrap();
        assert!(!p.is_adaptive_ready());
        let err = run_adaptive(&p, &InputSpec::Standard, &mut AllZero).unwrap_err();
        assert!(matches!(err, Error::NotAdaptiveReady(_)));
    }

    #[test]
    fn extract_rejects_wide_registers() {
        let p = MeasurementPattern::all_x(Geometry::open_ended(7, 1).unwrap()).unwrap();
        assert!(extract_unitary(&p).is_err());
    }
}
