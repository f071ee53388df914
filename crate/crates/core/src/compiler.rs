//! Lowering of logical circuits to (X,Y)-plane measurement patterns.
//!
//! Each primitive gate becomes one slab of `n + 1` operational columns on an
//! open-ended cluster. A slab measured entirely in the X basis applies the
//! layer operator `Ĉ_n` once per column, and `Ĉ_n^{n+1}` reverses the qubit
//! order, so every slab also mirrors the register. The compiler tracks where
//! each logical qubit sits (its [`Placement`]) and appends one all-X slab when
//! the slab count is odd, so the compiled pattern implements the circuit with
//! logical qubit `k` on output row `k`.
//!
//! Measuring a site at angle `α` applies `R_Z(−α)` to that row before the
//! remaining layers, so gate angles are emitted negated, wrapped into `[0, 2π)`.
//! Where a single non-zero angle lands decides the gate:
//!
//! * column 1, row `r`: `R_Z` on the row `r` qubit entering the slab;
//! * column `n + 1`, row `r`: `R_X` on the row `r` qubit leaving the slab;
//! * row 1, column `p` (`1 < p < n + 1`): `Z ⊗ X` on leaving rows `n − p + 1`, `n − p + 2`;
//! * row `n`, column `p`: `X ⊗ Z` on leaving rows `p − 1`, `p`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::cluster::{Geometry, Site};
use crate::error::{Error, Result};
use crate::pattern::{normalize_angle, MeasurementPattern};

/// Which qubit of an adjacent pair carries the `Z` factor of `R_ZX`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZxOrientation {
    /// `exp(−iθ/2 Z_k X_{k+1})`.
    ZOnLower,
    /// `exp(−iθ/2 X_k Z_{k+1})`.
    ZOnUpper,
}

/// A gate on logical qubits `1..=n`. Angles are in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogicalGate {
    Rz { qubit: usize, theta: f64 },
    Rx { qubit: usize, theta: f64 },
    /// Acts on the adjacent pair `(qubit, qubit + 1)`.
    Rzx {
        qubit: usize,
        theta: f64,
        orientation: ZxOrientation,
    },
    H { qubit: usize },
    Cnot { control: usize, target: usize },
    /// Swaps `(qubit, qubit + 1)`.
    Swap { qubit: usize },
    /// CZ on `(qubit, qubit + 1)`.
    Cz { qubit: usize },
}

impl LogicalGate {
    pub fn is_primitive(&self) -> bool {
        matches!(self, Self::Rz { .. } | Self::Rx { .. } | Self::Rzx { .. })
    }

    /// Checks every index against width `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        let in_range = |q: usize| (1..=n).contains(&q);
        let ok = match *self {
            Self::Rz { qubit, theta } | Self::Rx { qubit, theta } => {
                in_range(qubit) && theta.is_finite()
            }
            Self::Rzx { qubit, theta, .. } => qubit >= 1 && qubit < n && theta.is_finite(),
            Self::H { qubit } => in_range(qubit),
            Self::Cnot { control, target } => {
                in_range(control) && in_range(target) && control != target
            }
            Self::Swap { qubit } | Self::Cz { qubit } => qubit >= 1 && qubit < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidGate(format!("{self:?} on a {n}-qubit register")))
        }
    }
}

/// A gate sequence on `n` logical qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalCircuit {
    n: usize,
    gates: Vec<LogicalGate>,
}

impl LogicalCircuit {
    pub fn new(n: usize, gates: Vec<LogicalGate>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroWidth);
        }
        for g in &gates {
            g.validate(n)?;
        }
        Ok(Self { n, gates })
    }

    pub fn width(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[LogicalGate] {
        &self.gates
    }

    pub fn push(&mut self, g: LogicalGate) -> Result<()> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(())
    }
}

/// Row occupied by each logical qubit (1-based on both sides).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement(Vec<usize>);

impl Placement {
    pub fn identity(n: usize) -> Self {
        Self((1..=n).collect())
    }

    pub fn mirror(n: usize) -> Self {
        Self((1..=n).rev().collect())
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn row(&self, qubit: usize) -> usize {
        self.0[qubit - 1]
    }

    /// Placement after one slab: row `r` becomes row `n + 1 − r`.
    pub fn mirrored(&self) -> Self {
        let n = self.0.len();
        Self(self.0.iter().map(|r| n + 1 - r).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(k, &r)| r == k + 1)
    }
}

/// One compiled slab: `n + 1` operational columns, all measured at angle 0
/// except the listed sites. Columns are relative to the slab.
#[derive(Clone, Debug, PartialEq)]
pub struct SlabPlan {
    pub n: usize,
    pub rotated_sites: Vec<(Site, f64)>,
}

impl SlabPlan {
    /// Pure mirror slab.
    pub fn all_x(n: usize) -> Self {
        Self {
            n,
            rotated_sites: Vec::new(),
        }
    }

    pub fn columns(&self) -> usize {
        self.n + 1
    }

    /// Stand-alone `n × (n + 2)` pattern for this slab.
    pub fn to_pattern(&self) -> Result<MeasurementPattern> {
        let g = Geometry::open_ended(self.n, self.n + 2)?;
        MeasurementPattern::from_angles(g, |s| self.angle_at(s))
    }

    fn angle_at(&self, site: Site) -> f64 {
        self.rotated_sites
            .iter()
            .find(|(s, _)| *s == site)
            .map_or(0.0, |(_, a)| *a)
    }
}

/// Places a primitive gate in one slab, given where the logical qubits sit
/// as the slab begins.
pub fn compile_primitive(g: &LogicalGate, n: usize, placement: &Placement) -> Result<SlabPlan> {
    g.validate(n)?;
    if placement.width() != n {
        return Err(Error::InvalidGate(format!(
            "placement covers {} qubits, register has {n}",
            placement.width()
        )));
    }
    let after = placement.mirrored();
    let (site, theta) = match *g {
        LogicalGate::Rz { qubit, theta } => (Site::new(placement.row(qubit), 1), theta),
        LogicalGate::Rx { qubit, theta } => (Site::new(after.row(qubit), n + 1), theta),
        LogicalGate::Rzx {
            qubit,
            theta,
            orientation,
        } => {
            let (zq, xq) = match orientation {
                ZxOrientation::ZOnLower => (qubit, qubit + 1),
                ZxOrientation::ZOnUpper => (qubit + 1, qubit),
            };
            let (z, x) = (after.row(zq), after.row(xq));
            let site = if x == z + 1 {
                Site::new(1, n - z + 1)
            } else if z == x + 1 {
                Site::new(n, z)
            } else {
                return Err(Error::InvalidGate(format!(
                    "R_ZX qubits land on non-adjacent rows {z} and {x}"
                )));
            };
            (site, theta)
        }
        _ => {
            return Err(Error::InvalidGate(format!(
                "{g:?} is not a primitive; decompose it first"
            )))
        }
    };
    Ok(SlabPlan {
        n,
        rotated_sites: vec![(site, normalize_angle(-theta))],
    })
}

/// Rewrites one gate as primitives. Each decomposition equals its target up
/// to a global phase:
///
/// * `H = e^{iπ/2} R_Z(π/2) R_X(π/2) R_Z(π/2)`
/// * `CNOT(c, c±1) = e^{−iπ/4} R_Z(π/2)_c R_X(π/2)_t R_ZX(−π/2)` with `Z` on the control
/// * `SWAP = CNOT·CNOT·CNOT` with alternating direction
/// * `CZ(k, k+1) = H_{k+1} CNOT(k, k+1) H_{k+1}`
///
/// Non-adjacent CNOTs are routed through SWAP chains.
pub fn decompose(g: &LogicalGate, n: usize) -> Result<Vec<LogicalGate>> {
    g.validate(n)?;
    let mut out = Vec::new();
    expand_into(g, &mut out);
    Ok(out)
}

fn expand_into(g: &LogicalGate, out: &mut Vec<LogicalGate>) {
    use LogicalGate::*;
    match *g {
        Rz { .. } | Rx { .. } | Rzx { .. } => out.push(*g),
        H { qubit } => {
            out.push(Rz { qubit, theta: FRAC_PI_2 });
            out.push(Rx { qubit, theta: FRAC_PI_2 });
            out.push(Rz { qubit, theta: FRAC_PI_2 });
        }
        Cnot { control, target } if control.abs_diff(target) == 1 => {
            out.push(Rz {
                qubit: control,
                theta: FRAC_PI_2,
            });
            out.push(Rx {
                qubit: target,
                theta: FRAC_PI_2,
            });
            let (qubit, orientation) = if target == control + 1 {
                (control, ZxOrientation::ZOnLower)
            } else {
                (target, ZxOrientation::ZOnUpper)
            };
            out.push(Rzx {
                qubit,
                theta: -FRAC_PI_2,
                orientation,
            });
        }
        Cnot { control, target } => {
            // walk the control next to the target, act, walk back
            let (swaps, near): (Vec<LogicalGate>, usize) = if control < target {
                ((control..target - 1).map(|qubit| Swap { qubit }).collect(), target - 1)
            } else {
                ((target + 1..control).rev().map(|qubit| Swap { qubit }).collect(), target + 1)
            };
            for s in &swaps {
                expand_into(s, out);
            }
            expand_into(
                &Cnot {
                    control: near,
                    target,
                },
                out,
            );
            for s in swaps.iter().rev() {
                expand_into(s, out);
            }
        }
        Swap { qubit } => {
            let (a, b) = (qubit, qubit + 1);
            for (control, target) in [(a, b), (b, a), (a, b)] {
                expand_into(&Cnot { control, target }, out);
            }
        }
        Cz { qubit } => {
            let t = qubit + 1;
            expand_into(&H { qubit: t }, out);
            expand_into(
                &Cnot {
                    control: qubit,
                    target: t,
                },
                out,
            );
            expand_into(&H { qubit: t }, out);
        }
    }
}

/// A compiled circuit.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub pattern: MeasurementPattern,
    pub slabs: Vec<SlabPlan>,
    /// Primitive gates in slab order (the parity slab has none).
    pub primitives: Vec<LogicalGate>,
}

impl Compiled {
    pub fn geometry(&self) -> &Geometry {
        self.pattern.geometry()
    }

    pub fn measured_qubits(&self) -> usize {
        self.pattern.steps().len()
    }
}

/// Compiles `c` onto an open-ended `n × (S(n+1) + 1)` cluster, `S` even.
pub fn compile_circuit(c: &LogicalCircuit) -> Result<Compiled> {
    let n = c.width();
    if n == 0 {
        return Err(Error::ZeroWidth);
    }
    let mut primitives = Vec::new();
    for g in c.gates() {
        primitives.extend(decompose(g, n)?);
    }
    let mut placement = Placement::identity(n);
    let mut slabs = Vec::with_capacity(primitives.len() + 1);
    for g in &primitives {
        slabs.push(compile_primitive(g, n, &placement)?);
        placement = placement.mirrored();
    }
    if slabs.len() % 2 == 1 {
        slabs.push(SlabPlan::all_x(n));
        placement = placement.mirrored();
    }
    debug_assert!(placement.is_identity());
    let pattern = assemble(n, 0, &slabs)?;
    Ok(Compiled {
        pattern,
        slabs,
        primitives,
    })
}

/// Lays slabs side by side after `lead` all-X columns.
fn assemble(n: usize, lead: usize, slabs: &[SlabPlan]) -> Result<MeasurementPattern> {
    let width = n + 1;
    let cols = lead + slabs.len() * width + 1;
    let g = Geometry::open_ended(n, cols)?;
    MeasurementPattern::from_angles(g, |s| {
        if s.col <= lead {
            return 0.0;
        }
        let j = s.col - lead - 1;
        slabs[j / width].angle_at(Site::new(s.row, j % width + 1))
    })
}

/// Pattern producing `Π CZ_{i,i+1} |+⟩^{⊗n}` from a standard input.
pub fn build_cz_ladder(n: usize) -> Result<Compiled> {
    if n < 2 {
        return Err(Error::InvalidGate(format!("a CZ ladder needs at least 2 qubits, got {n}")));
    }
    let gates = (1..n).map(|qubit| LogicalGate::Cz { qubit }).collect();
    compile_circuit(&LogicalCircuit::new(n, gates)?)
}

/// Open-ended pattern whose positive branch on a standard input reproduces
/// the closed `n × m` cluster with every operational column measured in the
/// X basis: `m − 1` all-X columns followed by the compiled CZ ladder.
pub fn emulate_closed_cluster(n: usize, m: usize) -> Result<Compiled> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidGeometry(format!(
            "closed-cluster emulation needs n ≥ 2 and m ≥ 2, got {n}×{m}"
        )));
    }
    let ladder = build_cz_ladder(n)?;
    let pattern = assemble(n, m - 1, &ladder.slabs)?;
    Ok(Compiled {
        pattern,
        slabs: ladder.slabs,
        primitives: ladder.primitives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn rotated(plan: &SlabPlan) -> Site {
        assert_eq!(plan.rotated_sites.len(), 1);
        plan.rotated_sites[0].0
    }

    #[test]
    fn rz_lands_in_first_column_on_current_row() {
        let id = Placement::identity(2);
        let plan = compile_primitive(&LogicalGate::Rz { qubit: 2, theta: 0.3 }, 2, &id).unwrap();
        assert_eq!(rotated(&plan), Site::new(2, 1));
        let mir = Placement::mirror(2);
        let plan = compile_primitive(&LogicalGate::Rz { qubit: 2, theta: 0.3 }, 2, &mir).unwrap();
        assert_eq!(rotated(&plan), Site::new(1, 1));
    }

    #[test]
    fn rx_lands_in_last_column_on_mirrored_row() {
        let id = Placement::identity(2);
        let plan = compile_primitive(&LogicalGate::Rx { qubit: 2, theta: 0.3 }, 2, &id).unwrap();
        assert_eq!(rotated(&plan), Site::new(1, 3));
    }

    #[test]
    fn rzx_row_one_column_from_z_row() {
        // n = 3, identity placement; leaving rows are mirrored: qubit 3 → row 1, qubit 2 → row 2.
        // Z on qubit 3 (row 1), X on qubit 2 (row 2): ZOnUpper of pair (2,3) → site (1, 3).
        let id = Placement::identity(3);
        let g = LogicalGate::Rzx {
            qubit: 2,
            theta: 0.5,
            orientation: ZxOrientation::ZOnUpper,
        };
        assert_eq!(rotated(&compile_primitive(&g, 3, &id).unwrap()), Site::new(1, 3));
        // Z on qubit 2 (row 2), X on qubit 3 (row 1) → row n, column p = 2.
        let g = LogicalGate::Rzx {
            qubit: 2,
            theta: 0.5,
            orientation: ZxOrientation::ZOnLower,
        };
        assert_eq!(rotated(&compile_primitive(&g, 3, &id).unwrap()), Site::new(3, 2));
        // with mirrored placement the leaving rows are the identity: Z on row 1 → (1, 3)
        let mir = Placement::mirror(3);
        let g = LogicalGate::Rzx {
            qubit: 1,
            theta: 0.5,
            orientation: ZxOrientation::ZOnLower,
        };
        assert_eq!(rotated(&compile_primitive(&g, 3, &mir).unwrap()), Site::new(1, 3));
    }

    #[test]
    fn emitted_angles_are_negated_and_wrapped() {
        let plan = compile_primitive(
            &LogicalGate::Rz { qubit: 1, theta: 0.25 },
            2,
            &Placement::identity(2),
        )
        .unwrap();
        let a = plan.rotated_sites[0].1;
        assert!((a - (TAU - 0.25)).abs() < 1e-15);
        assert!((0.0..TAU).contains(&a));
    }

    #[test]
    fn non_primitives_and_bad_placements_rejected() {
        let id = Placement::identity(2);
        assert!(compile_primitive(&LogicalGate::H { qubit: 1 }, 2, &id).is_err());
        let bad = Placement(vec![1, 3, 2]);
        let g = LogicalGate::Rzx {
            qubit: 1,
            theta: 0.1,
            orientation: ZxOrientation::ZOnLower,
        };
        // qubits 1, 2 sit on rows 1, 3 → leaving rows 3, 1: not adjacent
        assert!(matches!(
            compile_primitive(&g, 3, &bad),
            Err(Error::InvalidGate(_))
        ));
    }

    #[test]
    fn decompositions_expand_to_primitives() {
        let cnot = decompose(&LogicalGate::Cnot { control: 1, target: 2 }, 2).unwrap();
        assert_eq!(
            cnot,
            vec![
                LogicalGate::Rz { qubit: 1, theta: FRAC_PI_2 },
                LogicalGate::Rx { qubit: 2, theta: FRAC_PI_2 },
                LogicalGate::Rzx {
                    qubit: 1,
                    theta: -FRAC_PI_2,
                    orientation: ZxOrientation::ZOnLower
                },
            ]
        );
        assert_eq!(decompose(&LogicalGate::H { qubit: 1 }, 1).unwrap().len(), 3);
        assert_eq!(decompose(&LogicalGate::Swap { qubit: 1 }, 2).unwrap().len(), 9);
        assert_eq!(decompose(&LogicalGate::Cz { qubit: 2 }, 3).unwrap().len(), 9);
        // (1 → 3): swap(1,2), cnot(2,3), swap(1,2)
        assert_eq!(
            decompose(&LogicalGate::Cnot { control: 1, target: 3 }, 3).unwrap().len(),
            21
        );
        assert!(decompose(&LogicalGate::Cnot { control: 1, target: 4 }, 3).is_err());
        assert!(decompose(&LogicalGate::Swap { qubit: 2 }, 2).is_err());
    }

    #[test]
    fn slab_arithmetic() {
        let empty = compile_circuit(&LogicalCircuit::new(2, vec![]).unwrap()).unwrap();
        assert_eq!((empty.geometry().rows(), empty.geometry().cols()), (2, 1));
        assert_eq!(empty.measured_qubits(), 0);

        let one = compile_circuit(
            &LogicalCircuit::new(2, vec![LogicalGate::Rz { qubit: 1, theta: 0.7 }]).unwrap(),
        )
        .unwrap();
        assert_eq!(one.slabs.len(), 2);
        assert_eq!(one.geometry().cols(), 7);
        assert_eq!(one.measured_qubits(), 12);

        let cnot = compile_circuit(
            &LogicalCircuit::new(3, vec![LogicalGate::Cnot { control: 1, target: 2 }]).unwrap(),
        )
        .unwrap();
        assert_eq!(cnot.slabs.len(), 4);
        assert_eq!(cnot.geometry().cols(), 4 * 4 + 1);
        for s in cnot.pattern.steps() {
            assert!((0.0..TAU).contains(&s.angle));
        }
    }

    #[test]
    fn zero_width_rejected() {
        assert_eq!(LogicalCircuit::new(0, vec![]), Err(Error::ZeroWidth));
    }

    #[test]
    fn emulation_prefixes_all_x_columns() {
        let e = emulate_closed_cluster(2, 3).unwrap();
        let ladder = build_cz_ladder(2).unwrap();
        assert_eq!(e.geometry().cols(), 2 + ladder.geometry().cols());
        assert!(e.pattern.steps().iter().take(4).all(|s| s.angle == 0.0));
        assert!(emulate_closed_cluster(1, 3).is_err());
        assert!(build_cz_ladder(1).is_err());
    }
}
