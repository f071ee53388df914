//! Rectangular cluster-state geometries and their entangled states.
//!
//! Sites are addressed by 1-based `(row, col)` pairs. The qubit label of a
//! site is `(col − 1)·rows + row`, so labels grow column-major and the input
//! column carries labels `1..=rows`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{Label, Measurement, Outcome, StateVector};

/// A lattice site, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Site {
    pub row: usize,
    pub col: usize,
}

impl Site {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Whether the last column carries vertical edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClusterKind {
    Closed,
    OpenEnded,
}

/// An `rows × cols` cluster layout. Column 1 is the input column and column
/// `cols` the output column.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Geometry {
    rows: usize,
    cols: usize,
    kind: ClusterKind,
}

impl Geometry {
    pub fn new(rows: usize, cols: usize, kind: ClusterKind) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidGeometry(format!(
                "{rows}×{cols} has no sites"
            )));
        }
        Ok(Self { rows, cols, kind })
    }

    pub fn open_ended(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, ClusterKind::OpenEnded)
    }

    pub fn closed(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, ClusterKind::Closed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> ClusterKind {
        self.kind
    }

    pub fn contains(&self, site: Site) -> bool {
        (1..=self.rows).contains(&site.row) && (1..=self.cols).contains(&site.col)
    }

    pub fn label(&self, site: Site) -> Label {
        (site.col - 1) * self.rows + site.row
    }

    pub fn site(&self, label: Label) -> Site {
        Site::new((label - 1) % self.rows + 1, (label - 1) / self.rows + 1)
    }

    pub fn column(&self, col: usize) -> impl Iterator<Item = Site> {
        (1..=self.rows).map(move |row| Site::new(row, col))
    }

    pub fn column_labels(&self, col: usize) -> Vec<Label> {
        self.column(col).map(|s| self.label(s)).collect()
    }

    pub fn input_sites(&self) -> Vec<Site> {
        self.column(1).collect()
    }

    pub fn output_sites(&self) -> Vec<Site> {
        self.column(self.cols).collect()
    }

    /// Closed clusters entangle every column vertically; open-ended ones
    /// leave the last column without vertical edges.
    pub fn has_vertical_edges(&self, col: usize) -> bool {
        match self.kind {
            ClusterKind::Closed => col <= self.cols,
            ClusterKind::OpenEnded => col < self.cols,
        }
    }

    /// Horizontal edges row by row, then vertical edges column by column.
    pub fn edges(&self) -> Vec<(Site, Site)> {
        let mut out = Vec::new();
        for i in 1..=self.rows {
            for j in 1..self.cols {
                out.push((Site::new(i, j), Site::new(i, j + 1)));
            }
        }
        for j in (1..=self.cols).filter(|&j| self.has_vertical_edges(j)) {
            for i in 1..self.rows {
                out.push((Site::new(i, j), Site::new(i + 1, j)));
            }
        }
        out
    }

    pub fn neighbors(&self, site: Site) -> Vec<Site> {
        let mut out = Vec::with_capacity(4);
        if site.col > 1 {
            out.push(Site::new(site.row, site.col - 1));
        }
        if site.col < self.cols {
            out.push(Site::new(site.row, site.col + 1));
        }
        if self.has_vertical_edges(site.col) {
            if site.row > 1 {
                out.push(Site::new(site.row - 1, site.col));
            }
            if site.row < self.rows {
                out.push(Site::new(site.row + 1, site.col));
            }
        }
        out
    }
}

/// The state placed on the input column before entangling.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum InputSpec {
    /// `|+⟩^{⊗n}`.
    #[default]
    Standard,
    /// An arbitrary `n`-qubit state over the input-column labels `1..=n`.
    Generic(StateVector),
}

impl InputSpec {
    /// Materialises the input column state, qubits ordered by row.
    pub fn prepare(&self, g: &Geometry) -> Result<StateVector> {
        let labels = g.column_labels(1);
        match self {
            InputSpec::Standard => StateVector::init_plus(&labels),
            InputSpec::Generic(s) => {
                if s.num_qubits() != g.rows() {
                    return Err(Error::ArityMismatch {
                        expected: g.rows(),
                        got: s.num_qubits(),
                    });
                }
                s.reordered(&labels)
            }
        }
    }
}

/// Eagerly builds the full cluster state: the input on column 1, `|+⟩`
/// everywhere else, then one CZ per edge.
pub fn build_state(g: &Geometry, input: &InputSpec) -> Result<StateVector> {
    let mut state = input.prepare(g)?;
    for j in 2..=g.cols() {
        for site in g.column(j) {
            state.append_plus(g.label(site))?;
        }
    }
    for (a, b) in g.edges() {
        state.apply_cz(g.label(a), g.label(b))?;
    }
    Ok(state)
}

/// Handle given to a streaming consumer for measuring the current column.
pub struct ColumnMeasurer<'a> {
    state: &'a mut StateVector,
    geometry: &'a Geometry,
    column: usize,
}

impl ColumnMeasurer<'_> {
    pub fn column(&self) -> usize {
        self.column
    }

    pub fn geometry(&self) -> &Geometry {
        self.geometry
    }

    /// Live state: the unmeasured part of this column plus the next one.
    pub fn state(&self) -> &StateVector {
        self.state
    }

    pub fn measure(&mut self, row: usize, theta: f64, outcome: Outcome<'_>) -> Result<Measurement> {
        let site = Site::new(row, self.column);
        if !self.geometry.contains(site) {
            return Err(Error::InvalidPattern(format!("site {site} outside geometry")));
        }
        self.state.measure_xy(self.geometry.label(site), theta, outcome)
    }
}

/// Output of [`stream_columns`].
#[derive(Clone, Debug)]
pub struct Streamed {
    /// Output-column state, qubits ordered by row.
    pub state: StateVector,
    pub peak_live_qubits: usize,
}

/// Entangles the cluster one column at a time, handing each operational
/// column to `consumer` before the following column is attached.
///
/// The consumer must measure every qubit of the column it is given.
pub fn stream_columns<F>(g: &Geometry, input: &InputSpec, mut consumer: F) -> Result<Streamed>
where
    F: FnMut(&mut ColumnMeasurer<'_>) -> Result<()>,
{
    let mut state = input.prepare(g)?;
    let mut peak = state.num_qubits();
    for j in 1..g.cols() {
        for site in g.column(j + 1) {
            state.append_plus(g.label(site))?;
        }
        peak = peak.max(state.num_qubits());
        if g.has_vertical_edges(j) {
            for i in 1..g.rows() {
                state.apply_cz(g.label(Site::new(i, j)), g.label(Site::new(i + 1, j)))?;
            }
        }
        for i in 1..=g.rows() {
            state.apply_cz(g.label(Site::new(i, j)), g.label(Site::new(i, j + 1)))?;
        }
        consumer(&mut ColumnMeasurer {
            state: &mut state,
            geometry: g,
            column: j,
        })?;
        if let Some(site) = g.column(j).find(|&s| state.position(g.label(s)).is_ok()) {
            return Err(Error::ColumnIncomplete { column: j, site });
        }
    }
    let last = g.cols();
    if g.has_vertical_edges(last) {
        for i in 1..g.rows() {
            state.apply_cz(g.label(Site::new(i, last)), g.label(Site::new(i + 1, last)))?;
        }
    }
    let state = state.reordered(&g.column_labels(last))?;
    Ok(Streamed {
        state,
        peak_live_qubits: peak,
    })
}
