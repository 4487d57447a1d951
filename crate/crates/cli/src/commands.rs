use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use holonomy_core::flow::{integrate_rk4, sample_exact_flow, trajectory_stats, TrajectoryStats};
use holonomy_core::linalg::{expm, expm_spectral, generator_spectrum};
use holonomy_core::synth::{synthesize, verify_monodromy};
use holonomy_core::SkewHermitianMatrix;
use thiserror::Error;

use crate::csv::write_trajectory;
use crate::document::{
    matrix_from_doc, matrix_to_doc, ExpmDocument, FieldError, MatrixDocument, ProblemDocument, ReportDoc,
    ResultDocument, VerifyDocument, TOOL_VERSION,
};

/// Residual bound for a successful synthesis or verification.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Closure bound for a successful simulation.
pub const SIMULATION_CLOSURE_TOL: f64 = 1e-6;
/// Inputs to `expm` within this (relative) distance of skew-Hermitian also get
/// the spectral evaluation.
const SKEW_INPUT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("{0}")]
    Usage(String),
}

/// Process exit status of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Residuals out of tolerance.
    Failed,
    /// Valid generator but `[H, P₀] = 0`: the trajectory is constant.
    Trivial,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Failed => 1,
            Outcome::Trivial => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlowMode {
    #[default]
    Exact,
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimulateOptions {
    pub steps: Option<usize>,
    pub stride: Option<usize>,
    pub mode: FlowMode,
    pub retraction: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn json_bytes(text: String) -> Vec<u8> {
    let mut bytes = text.into_bytes();
    bytes.push(b'\n');
    bytes
}

/// Synthesizes a generator and writes a [`ResultDocument`].
pub fn cmd_synth(input: &Path, output: Option<&Path>, pivot: Option<usize>) -> Result<Outcome, CliError> {
    let doc = ProblemDocument::parse(&read(input)?)?;
    let prob = doc.boundary_problem()?;
    let params = doc.synthesis_params(pivot)?;
    let res = synthesize(&prob, &params).map_err(|e| FieldError::new("synthesis", e.to_string()))?;
    emit(output, &json_bytes(ResultDocument::from_result(&res).to_json()))?;

    if !res.report.all_within(RESIDUAL_TOL) {
        eprintln!(
            "error: residuals exceed {RESIDUAL_TOL:e} (projector {:.3e}, restriction {:.3e})",
            res.report.proj_residual, res.report.restriction_residual
        );
        return Ok(Outcome::Failed);
    }
    if !res.report.nontrivial {
        eprintln!("warning: generator commutes with the projector; the trajectory is constant");
        return Ok(Outcome::Trivial);
    }
    Ok(Outcome::Success)
}

/// Checks the `H` field of a problem document and writes its report.
pub fn cmd_verify(input: &Path, output: Option<&Path>) -> Result<Outcome, CliError> {
    let doc = ProblemDocument::parse(&read(input)?)?;
    let prob = doc.boundary_problem()?;
    let h = doc
        .generator()?
        .ok_or_else(|| FieldError::new("H", "missing; verify needs a generator"))?;
    let report = verify_monodromy(&h, &prob).map_err(|e| FieldError::new("H", e.to_string()))?;
    let out = VerifyDocument {
        version: TOOL_VERSION.to_string(),
        report: ReportDoc::from(&report),
    };
    emit(output, &json_bytes(serde_json::to_string_pretty(&out).expect("report serializes")))?;
    if report.holds(RESIDUAL_TOL) {
        Ok(Outcome::Success)
    } else {
        eprintln!(
            "error: residuals exceed {RESIDUAL_TOL:e} (projector {:.3e}, restriction {:.3e}, skew {:.3e})",
            report.proj_residual, report.restriction_residual, report.skew_residual
        );
        Ok(Outcome::Failed)
    }
}

/// Samples the projector trajectory and writes it as CSV.
///
/// Uses the document's `H` when present, otherwise synthesizes one.
pub fn cmd_simulate(input: &Path, output: Option<&Path>, opts: SimulateOptions) -> Result<(Outcome, TrajectoryStats), CliError> {
    let doc = ProblemDocument::parse(&read(input)?)?;
    let prob = doc.boundary_problem()?;
    let h = match doc.generator()? {
        Some(h) => h,
        None => {
            let params = doc.synthesis_params(None)?;
            synthesize(&prob, &params)
                .map_err(|e| FieldError::new("synthesis", e.to_string()))?
                .generator
                .into_matrix()
        }
    };

    let mut cfg = doc.flow_config()?;
    if let Some(steps) = opts.steps {
        cfg.steps = steps;
    }
    if let Some(stride) = opts.stride {
        cfg.stride = stride;
    }
    cfg.retraction |= opts.retraction;
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;

    let p0 = prob.frame().projector();
    let traj = match opts.mode {
        FlowMode::Exact => sample_exact_flow(&h, &p0, cfg.steps / cfg.stride),
        FlowMode::Rk4 => integrate_rk4(&h, &p0, &cfg),
    }
    .map_err(|e| FieldError::new("H", e.to_string()))?;

    let mut buf = Vec::new();
    write_trajectory(&mut buf, &traj).expect("writing to memory");
    emit(output, &buf)?;

    let stats = trajectory_stats(&traj);
    if stats.closure <= SIMULATION_CLOSURE_TOL {
        Ok((Outcome::Success, stats))
    } else {
        eprintln!("error: trajectory does not close (final distance {:.3e})", stats.closure);
        Ok((Outcome::Failed, stats))
    }
}

/// Evaluates the Taylor exponential of `M` and, for skew-Hermitian `M`, the
/// spectral one with their Frobenius disagreement.
pub fn cmd_expm(input: &Path, output: Option<&Path>) -> Result<Outcome, CliError> {
    let doc: MatrixDocument =
        serde_json::from_str(&read(input)?).map_err(|e| FieldError::new("document", e.to_string()))?;
    let m = matrix_from_doc("M", &doc.matrix)?;
    if !m.is_square() {
        return Err(FieldError::new("M", format!("is {}x{}, expected a square matrix", m.rows(), m.cols())).into());
    }
    let taylor = expm(&m).map_err(|e| FieldError::new("M", e.to_string()))?;

    let mut out = ExpmDocument {
        version: TOOL_VERSION.to_string(),
        expm: matrix_to_doc(&taylor),
        expm_spectral: None,
        disagreement: None,
    };
    if m.skew_defect() <= SKEW_INPUT_TOL * m.frobenius_norm().max(1.0) {
        let h = SkewHermitianMatrix::new(&m).map_err(|e| FieldError::new("M", e.to_string()))?;
        let spec = generator_spectrum(&h).map_err(|e| FieldError::new("M", e.to_string()))?;
        let spectral = expm_spectral(&spec, 1.0);
        out.disagreement = Some(taylor.distance(&spectral));
        out.expm_spectral = Some(matrix_to_doc(&spectral));
    }
    emit(output, &json_bytes(serde_json::to_string_pretty(&out).expect("expm output serializes")))?;
    Ok(Outcome::Success)
}
