//! The `mbqc-xy` command-line tool.
//!
//! Standard output carries data only; diagnostics go to standard error.
//! Exit status is 0 on success, 1 when a verification check fails and 2 for
//! unreadable or invalid input.
//!
//! Amplitudes are printed one per line in basis order as `bits re,im`, where
//! `bits` lists the output rows top to bottom and both parts use 12
//! significant digits.
//!
//! `diagram` prints a header line `rows x cols kind`, then one text line per
//! cluster row and, between consecutive rows, a line of `|` marks under each
//! column carrying vertical edges. Cells are `o` for a site measured at angle
//! 0, `θ=x.xx` for any other angle and `[ ]` for output sites, padded to a
//! common width and joined by `--`.

pub mod doc;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::cluster::{ClusterKind, Geometry, InputSpec, Site};
use crate::compiler::compile_circuit;
use crate::pattern::{run_adaptive, run_positive_branch_traced, MeasurementPattern};
use crate::statevec::StateVector;
use crate::verify;

pub use doc::{CircuitDocument, DocError, PatternDocument};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Largest register accepted by `verify --max-n`.
pub const MAX_VERIFY_N: usize = 5;

#[derive(Debug, Parser)]
#[command(name = "mbqc-xy", version, about = "Compile and simulate (X,Y)-plane measurement patterns")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a circuit document into a pattern document.
    Compile {
        circuit: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run a pattern document and print the output state.
    Run {
        pattern: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Positive)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `plus`, a bitstring such as `10` (row 1 first), or a JSON file
        /// `{"amplitudes": [[re, im], ...]}`.
        #[arg(long, default_value = "plus")]
        input: String,
    },
    /// Run the identity and construction checks.
    Verify {
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Print the report as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Draw a pattern as an ASCII grid.
    Diagram { pattern: PathBuf },
    /// Time streaming simulation of an all-X open-ended pattern.
    Bench {
        #[arg(long, default_value_t = 8)]
        rows: usize,
        #[arg(long, default_value_t = 50)]
        cols: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Positive,
    Adaptive,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Doc(#[from] DocError),
    #[error("{0}")]
    Library(#[from] crate::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Write(#[from] io::Error),
}

/// Runs a parsed command, returning the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Compile { circuit, output } => cmd_compile(&circuit, &output, out),
        Command::Run {
            pattern,
            mode,
            seed,
            input,
        } => cmd_run(&pattern, mode, seed, &input, out),
        Command::Verify { max_n, json } => cmd_verify(max_n, json, out, err),
        Command::Diagram { pattern } => cmd_diagram(&pattern, out),
        Command::Bench { rows, cols } => cmd_bench(rows, cols, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_pattern(path: &Path) -> Result<MeasurementPattern, CliError> {
    let text = read(path)?;
    let doc = PatternDocument::parse(&text).map_err(|e| with_file(path, e))?;
    doc.to_pattern().map_err(|e| with_file(path, e).into())
}

fn with_file(path: &Path, e: DocError) -> DocError {
    DocError::Invalid(format!("{}: {e}", path.display()))
}

fn cmd_compile(circuit: &Path, output: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let text = read(circuit)?;
    let c = CircuitDocument::parse(&text)
        .and_then(|d| d.to_circuit())
        .map_err(|e| with_file(circuit, e))?;
    let compiled = compile_circuit(&c)?;
    let g = compiled.geometry();
    fs::write(output, PatternDocument::from_pattern(&compiled.pattern).to_text()).map_err(|source| {
        CliError::Io {
            path: output.display().to_string(),
            source,
        }
    })?;
    writeln!(out, "slabs {}", compiled.slabs.len())?;
    writeln!(out, "geometry {}x{}", g.rows(), g.cols())?;
    writeln!(out, "measured {}", compiled.measured_qubits())?;
    Ok(EXIT_OK)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    amplitudes: Vec<[f64; 2]>,
}

fn parse_input(spec: &str, g: &Geometry) -> Result<InputSpec, CliError> {
    let labels = g.column_labels(1);
    if spec == "plus" {
        return Ok(InputSpec::Standard);
    }
    if !spec.is_empty() && spec.chars().all(|c| c == '0' || c == '1') {
        if spec.len() != g.rows() {
            return Err(CliError::Usage(format!(
                "--input: bitstring has {} bits but the pattern has {} rows",
                spec.len(),
                g.rows()
            )));
        }
        let index = spec
            .chars()
            .enumerate()
            .fold(0usize, |acc, (k, c)| acc | (usize::from(c == '1') << k));
        return Ok(InputSpec::Generic(StateVector::basis(&labels, index)?));
    }
    let path = Path::new(spec);
    let text = read(path)?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let file: StateFile = serde_path_to_error::deserialize(de).map_err(|e| {
        CliError::Usage(format!("{}: {}: {}", path.display(), e.path(), e.inner()))
    })?;
    let amps = file
        .amplitudes
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    Ok(InputSpec::Generic(StateVector::from_amplitudes(&labels, amps)?))
}

fn fmt_real(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:.11e}")
}

fn bits(index: usize, n: usize) -> String {
    (0..n).map(|k| if index >> k & 1 == 1 { '1' } else { '0' }).collect()
}

fn write_amplitudes(out: &mut dyn Write, state: &StateVector) -> io::Result<()> {
    let n = state.num_qubits();
    for (i, a) in state.amplitudes().iter().enumerate() {
        writeln!(out, "{} {},{}", bits(i, n), fmt_real(a.re), fmt_real(a.im))?;
    }
    Ok(())
}

fn cmd_run(
    pattern: &Path,
    mode: Mode,
    seed: u64,
    input: &str,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let p = read_pattern(pattern)?;
    let input = parse_input(input, p.geometry())?;
    match mode {
        Mode::Positive => {
            let r = run_positive_branch_traced(&p, &input)?;
            writeln!(out, "mode positive")?;
            writeln!(out, "probability {}", fmt_real(r.probability))?;
            writeln!(out, "peak_live_qubits {}", r.peak_live_qubits)?;
            writeln!(out, "amplitudes")?;
            write_amplitudes(out, &r.state)?;
        }
        Mode::Adaptive => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = run_adaptive(&p, &input, &mut rng)?;
            writeln!(out, "mode adaptive")?;
            writeln!(out, "seed {seed}")?;
            let outcomes: String = r.outcomes.iter().map(|(_, m)| char::from(b'0' + m)).collect();
            writeln!(out, "outcomes {outcomes}")?;
            let frame = |v: &[u8]| v.iter().map(|b| char::from(b'0' + b)).collect::<String>();
            writeln!(out, "frame x={} z={}", frame(&r.frame.x_exp), frame(&r.frame.z_exp))?;
            writeln!(out, "amplitudes")?;
            write_amplitudes(out, &r.corrected()?)?;
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(max_n: usize, json: bool, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if !(1..=MAX_VERIFY_N).contains(&max_n) {
        return Err(CliError::Usage(format!(
            "--max-n must be between 1 and {MAX_VERIFY_N}, got {max_n}"
        )));
    }
    let records = verify::run_suite(max_n)?;
    if json {
        serde_json::to_writer_pretty(&mut *out, &records).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        for r in &records {
            let status = if r.passed { "PASS" } else { "FAIL" };
            let mut line = format!("{status} {}", r.name);
            if let Some(n) = r.n {
                line.push_str(&format!(" n={n}"));
            }
            if let Some(p) = r.p {
                line.push_str(&format!(" p={p}"));
            }
            line.push_str(&format!(" max_dev={:.3e} tol={:.0e}", r.max_deviation, r.tolerance));
            if let Some(note) = &r.note {
                line.push_str(&format!(" {note}"));
            }
            writeln!(out, "{line}")?;
        }
    }
    let failed: Vec<_> = records.iter().filter(|r| !r.passed).collect();
    if failed.is_empty() {
        return Ok(EXIT_OK);
    }
    for r in &failed {
        writeln!(err, "failed: {} n={:?} p={:?} max_dev={:.3e}", r.name, r.n, r.p, r.max_deviation)?;
    }
    Ok(EXIT_VERIFY_FAILED)
}

/// Renders the grid described in the module documentation.
pub fn render_diagram(p: &MeasurementPattern) -> String {
    let g = p.geometry();
    let mut cells = vec![vec![String::new(); g.cols()]; g.rows()];
    for s in p.steps() {
        cells[s.site.row - 1][s.site.col - 1] = angle_token(s.angle);
    }
    for o in p.outputs() {
        cells[o.site.row - 1][o.site.col - 1] = "[ ]".to_string();
    }
    let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
    let stride = width + 2;
    let kind = match g.kind() {
        ClusterKind::Closed => "closed",
        ClusterKind::OpenEnded => "open-ended",
    };
    let mut text = format!("{}x{} {kind}\n", g.rows(), g.cols());
    for (r, row) in cells.iter().enumerate() {
        if r > 0 {
            let mut bars = String::new();
            for j in 1..=g.cols() {
                let mark = if g.has_vertical_edges(j) { "|" } else { " " };
                bars.push_str(&format!("{mark:<stride$}"));
            }
            text.push_str(bars.trim_end());
            text.push('\n');
        }
        let line = row
            .iter()
            .map(|c| format!("{c:<width$}"))
            .collect::<Vec<_>>()
            .join("--");
        text.push_str(line.trim_end());
        text.push('\n');
    }
    text
}

fn cmd_diagram(pattern: &Path, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = read_pattern(pattern)?;
    out.write_all(render_diagram(&p).as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_bench(rows: usize, cols: usize, out: &mut dyn Write) -> Result<i32, CliError> {
    let p = MeasurementPattern::all_x(Geometry::open_ended(rows, cols)?)?;
    let start = Instant::now();
    let r = run_positive_branch_traced(&p, &InputSpec::Standard)?;
    let elapsed = start.elapsed();
    writeln!(out, "geometry {rows}x{cols}")?;
    writeln!(out, "measured {}", p.steps().len())?;
    writeln!(out, "peak_live_qubits {}", r.peak_live_qubits)?;
    writeln!(out, "elapsed_ms {:.3}", elapsed.as_secs_f64() * 1e3)?;
    Ok(EXIT_OK)
}

/// Cell text for one site, as drawn by [`render_diagram`].
pub fn cell_label(p: &MeasurementPattern, site: Site) -> Option<String> {
    if p.outputs().iter().any(|o| o.site == site) {
        return Some("[ ]".into());
    }
    p.steps().iter().find(|s| s.site == site).map(|s| angle_token(s.angle))
}

fn angle_token(angle: f64) -> String {
    if angle == 0.0 {
        "o".into()
    } else {
        format!("θ={angle:.2}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagram_all_x_2x4() {
        let p = MeasurementPattern::all_x(Geometry::open_ended(2, 4).unwrap()).unwrap();
        let d = render_diagram(&p);
        assert_eq!(
            d,
            "2x4 open-ended\n\
             o  --o  --o  --[ ]\n\
             |    |    |\n\
             o  --o  --o  --[ ]\n"
        );
        assert_eq!(d.matches('o').count() - "open-ended".matches('o').count(), 6);
        assert_eq!(d.matches("[ ]").count(), 2);
    }

    #[test]
    fn diagram_annotates_rotated_site() {
        let g = Geometry::open_ended(2, 4).unwrap();
        let p = MeasurementPattern::from_angles(g, |s| if s == Site::new(1, 1) { 0.7 } else { 0.0 }).unwrap();
        let d = render_diagram(&p);
        assert_eq!(d.matches("θ=0.70").count(), 1);
        assert_eq!(cell_label(&p, Site::new(1, 1)).as_deref(), Some("θ=0.70"));
        assert_eq!(cell_label(&p, Site::new(2, 4)).as_deref(), Some("[ ]"));
    }

    #[test]
    fn diagram_single_site() {
        let p = MeasurementPattern::all_x(Geometry::open_ended(1, 1).unwrap()).unwrap();
        assert_eq!(render_diagram(&p), "1x1 open-ended\n[ ]\n");
    }

    #[test]
    fn negative_zero_prints_as_zero() {
        assert_eq!(fmt_real(-0.0), "0.00000000000e0");
        assert_eq!(fmt_real(-0.5), "-5.00000000000e-1");
        assert_eq!(bits(1, 2), "10");
    }
}
