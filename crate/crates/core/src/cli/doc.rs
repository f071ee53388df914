//! JSON documents read and written by the command-line tool.
//!
//! Both documents carry a `format` tag and a `version`. Angles are radians,
//! written as JSON numbers in shortest round-trip form; on input a string such
//! as `"pi/2"`, `"-3*pi/4"` or `"0.25pi"` is also accepted.

use std::f64::consts::PI;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cluster::{ClusterKind, Geometry, Site};
use crate::compiler::{LogicalCircuit, LogicalGate, ZxOrientation};
use crate::pattern::{Corrections, MeasurementPattern, OutputSite, Step};

pub const CIRCUIT_FORMAT: &str = "mbqc-xy/circuit";
pub const PATTERN_FORMAT: &str = "mbqc-xy/pattern";
pub const VERSION: u32 = 1;

/// Problems turning text into a document or a document into a library value.
#[derive(Debug, thiserror::Error)]
pub enum DocError {
    /// Malformed JSON or a field of the wrong shape; carries the JSON path.
    #[error("{path}: {source} (line {line}, column {column})")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Library(#[from] crate::Error),
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, DocError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        DocError::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            source: inner,
        }
    })
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn check_header(format: &str, version: u32, expected: &str) -> Result<(), DocError> {
    if format != expected {
        return Err(DocError::Invalid(format!(
            "format: expected \"{expected}\", found \"{format}\""
        )));
    }
    if version != VERSION {
        return Err(DocError::Invalid(format!(
            "version: unsupported version {version}, this build reads {VERSION}"
        )));
    }
    Ok(())
}

/// An angle in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Angle(pub f64);

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct AngleVisitor;

        impl Visitor<'_> for AngleVisitor {
            type Value = Angle;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an angle in radians, as a number or an expression like \"pi/2\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Angle, E> {
                Ok(Angle(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Angle, E> {
                Ok(Angle(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Angle, E> {
                parse_angle(v)
                    .map(Angle)
                    .ok_or_else(|| E::custom(format!("malformed angle {v:?}")))
            }
        }

        d.deserialize_any(AngleVisitor)
    }
}

/// Parses `x`, `pi`, `x*pi`, `xpi`, `pi/y`, `x*pi/y` with an optional sign.
pub fn parse_angle(text: &str) -> Option<f64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let t = t.to_ascii_lowercase();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(&t)),
    };
    let number = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite());
    let value = match body.split_once("pi") {
        None => number(body)?,
        Some((coef, rest)) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = if coef.is_empty() { 1.0 } else { number(coef)? };
            let d = match rest {
                "" => 1.0,
                _ => number(rest.strip_prefix('/')?).filter(|&d| d != 0.0)?,
            };
            c * PI / d
        }
    };
    Some(sign * value)
}

/// One gate entry. Which fields are required depends on `kind`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubit: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<Angle>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<ZxOrientation>,
}

impl GateDoc {
    fn empty(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            qubit: None,
            control: None,
            target: None,
            angle: None,
            orientation: None,
        }
    }

    pub fn from_gate(g: &LogicalGate) -> Self {
        match *g {
            LogicalGate::Rz { qubit, theta } => Self {
                qubit: Some(qubit),
                angle: Some(Angle(theta)),
                ..Self::empty("rz")
            },
            LogicalGate::Rx { qubit, theta } => Self {
                qubit: Some(qubit),
                angle: Some(Angle(theta)),
                ..Self::empty("rx")
            },
            LogicalGate::Rzx {
                qubit,
                theta,
                orientation,
            } => Self {
                qubit: Some(qubit),
                angle: Some(Angle(theta)),
                orientation: Some(orientation),
                ..Self::empty("rzx")
            },
            LogicalGate::H { qubit } => Self {
                qubit: Some(qubit),
                ..Self::empty("h")
            },
            LogicalGate::Cnot { control, target } => Self {
                control: Some(control),
                target: Some(target),
                ..Self::empty("cnot")
            },
            LogicalGate::Swap { qubit } => Self {
                qubit: Some(qubit),
                ..Self::empty("swap")
            },
            LogicalGate::Cz { qubit } => Self {
                qubit: Some(qubit),
                ..Self::empty("cz")
            },
        }
    }

    fn to_gate(&self, at: &str) -> Result<LogicalGate, DocError> {
        let need = |v: Option<usize>, field: &str| {
            v.ok_or_else(|| DocError::Invalid(format!("{at}.{field}: missing for kind \"{}\"", self.kind)))
        };
        let angle = || {
            self.angle
                .map(|a| a.0)
                .ok_or_else(|| DocError::Invalid(format!("{at}.angle: missing for kind \"{}\"", self.kind)))
        };
        let g = match self.kind.as_str() {
            "rz" => LogicalGate::Rz {
                qubit: need(self.qubit, "qubit")?,
                theta: angle()?,
            },
            "rx" => LogicalGate::Rx {
                qubit: need(self.qubit, "qubit")?,
                theta: angle()?,
            },
            "rzx" => LogicalGate::Rzx {
                qubit: need(self.qubit, "qubit")?,
                theta: angle()?,
                orientation: self.orientation.unwrap_or(ZxOrientation::ZOnLower),
            },
            "h" => LogicalGate::H {
                qubit: need(self.qubit, "qubit")?,
            },
            "cnot" => LogicalGate::Cnot {
                control: need(self.control, "control")?,
                target: need(self.target, "target")?,
            },
            "swap" => LogicalGate::Swap {
                qubit: need(self.qubit, "qubit")?,
            },
            "cz" => LogicalGate::Cz {
                qubit: need(self.qubit, "qubit")?,
            },
            other => {
                return Err(DocError::Invalid(format!(
                    "{at}.kind: unknown gate kind \"{other}\" (expected rz, rx, rzx, h, cnot, swap or cz)"
                )))
            }
        };
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDocument {
    pub format: String,
    pub version: u32,
    pub n: usize,
    pub gates: Vec<GateDoc>,
}

impl CircuitDocument {
    pub fn from_circuit(c: &LogicalCircuit) -> Self {
        Self {
            format: CIRCUIT_FORMAT.into(),
            version: VERSION,
            n: c.width(),
            gates: c.gates().iter().map(GateDoc::from_gate).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        let doc: Self = parse(text)?;
        check_header(&doc.format, doc.version, CIRCUIT_FORMAT)?;
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }

    pub fn to_circuit(&self) -> Result<LogicalCircuit, DocError> {
        let gates = self
            .gates
            .iter()
            .enumerate()
            .map(|(i, g)| g.to_gate(&format!("gates[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        for (i, g) in gates.iter().enumerate() {
            g.validate(self.n)
                .map_err(|e| DocError::Invalid(format!("gates[{i}]: {e}")))?;
        }
        Ok(LogicalCircuit::new(self.n, gates)?)
    }
}

/// A site as `[row, col]`.
pub type SiteDoc = [usize; 2];

fn site_doc(s: &Site) -> SiteDoc {
    [s.row, s.col]
}

fn site(s: &SiteDoc) -> Site {
    Site::new(s[0], s[1])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementDoc {
    pub row: usize,
    pub col: usize,
    pub angle: Angle,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_deps: Option<Vec<SiteDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_deps: Option<Vec<SiteDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDoc {
    pub row: usize,
    pub col: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_deps: Option<Vec<SiteDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_deps: Option<Vec<SiteDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDocument {
    pub format: String,
    pub version: u32,
    pub rows: usize,
    pub cols: usize,
    pub kind: ClusterKind,
    pub measurements: Vec<MeasurementDoc>,
    pub outputs: Vec<OutputDoc>,
}

fn deps_doc(c: &Option<Corrections>) -> (Option<Vec<SiteDoc>>, Option<Vec<SiteDoc>>) {
    match c {
        Some(c) => (
            Some(c.x_deps.iter().map(site_doc).collect()),
            Some(c.z_deps.iter().map(site_doc).collect()),
        ),
        None => (None, None),
    }
}

fn corrections(
    x: &Option<Vec<SiteDoc>>,
    z: &Option<Vec<SiteDoc>>,
    at: &str,
) -> Result<Option<Corrections>, DocError> {
    match (x, z) {
        (None, None) => Ok(None),
        (Some(x), Some(z)) => Ok(Some(Corrections {
            x_deps: x.iter().map(site).collect(),
            z_deps: z.iter().map(site).collect(),
        })),
        _ => Err(DocError::Invalid(format!(
            "{at}: x_deps and z_deps must be given together"
        ))),
    }
}

impl PatternDocument {
    pub fn from_pattern(p: &MeasurementPattern) -> Self {
        let g = p.geometry();
        Self {
            format: PATTERN_FORMAT.into(),
            version: VERSION,
            rows: g.rows(),
            cols: g.cols(),
            kind: g.kind(),
            measurements: p
                .steps()
                .iter()
                .map(|s| {
                    let (x_deps, z_deps) = deps_doc(&s.corrections);
                    MeasurementDoc {
                        row: s.site.row,
                        col: s.site.col,
                        angle: Angle(s.angle),
                        x_deps,
                        z_deps,
                    }
                })
                .collect(),
            outputs: p
                .outputs()
                .iter()
                .map(|o| {
                    let (x_deps, z_deps) = deps_doc(&o.corrections);
                    OutputDoc {
                        row: o.site.row,
                        col: o.site.col,
                        x_deps,
                        z_deps,
                    }
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, DocError> {
        let doc: Self = parse(text)?;
        check_header(&doc.format, doc.version, PATTERN_FORMAT)?;
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }

    pub fn to_pattern(&self) -> Result<MeasurementPattern, DocError> {
        let g = Geometry::new(self.rows, self.cols, self.kind)?;
        let steps = self
            .measurements
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let mut s = Step::new(Site::new(m.row, m.col), m.angle.0);
                s.corrections = corrections(&m.x_deps, &m.z_deps, &format!("measurements[{i}]"))?;
                Ok(s)
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        let outputs = self
            .outputs
            .iter()
            .enumerate()
            .map(|(i, o)| {
                Ok(OutputSite {
                    site: Site::new(o.row, o.col),
                    corrections: corrections(&o.x_deps, &o.z_deps, &format!("outputs[{i}]"))?,
                })
            })
            .collect::<Result<Vec<_>, DocError>>()?;
        Ok(MeasurementPattern::new(g, steps, outputs)?)
    }
}
