//! JSON documents read and written by the command-line tool.
//!
//! Complex scalars are `[re, im]` pairs of doubles; matrices are row-major
//! arrays of rows.

use std::fmt;

use holonomy_core::flow::FlowConfig;
use holonomy_core::synth::{BoundaryProblem, MonodromyReport, SynthesisParams, SynthesisResult};
use holonomy_core::{Complex64, ComplexMatrix, Error as CoreError, Frame, UnitaryMatrix};
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = concat!("holonomy ", env!("CARGO_PKG_VERSION"));

pub type ComplexPair = [f64; 2];
pub type MatrixDoc = Vec<Vec<ComplexPair>>;

/// An error attributed to one field of an input document.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }

    fn from_core(field: &str, err: CoreError) -> Self {
        let message = match err {
            CoreError::NotUnitary { deviation } => format!("not unitary (deviation {deviation:.3e})"),
            CoreError::NotOrthonormal { deviation } => {
                format!("columns are not orthonormal (deviation {deviation:.3e})")
            }
            other => other.to_string(),
        };
        Self::new(field, message)
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for FieldError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowDoc {
    pub steps: usize,
    pub stride: usize,
    #[serde(default)]
    pub retraction: bool,
}

/// Boundary problem plus solution-family parameters. `H` is only read by the
/// verify command (and by simulate, when present).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemDocument {
    pub ambient_dim: usize,
    pub frame: MatrixDoc,
    pub g0: MatrixDoc,
    pub omega: MatrixDoc,
    pub winding: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pivot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flow: Option<FlowDoc>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<MatrixDoc>,
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        serde_json::from_str(text).map_err(|e| FieldError::new("document", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn boundary_problem(&self) -> Result<BoundaryProblem, FieldError> {
        let n = self.ambient_dim;
        if n == 0 {
            return Err(FieldError::new("ambient_dim", "must be positive"));
        }
        let frame = matrix_from_doc("frame", &self.frame)?;
        if frame.rows() != n {
            return Err(FieldError::new(
                "frame",
                format!("has {} rows, expected ambient_dim = {n}", frame.rows()),
            ));
        }
        let m = frame.cols();
        if m >= n {
            return Err(FieldError::from_core("frame", CoreError::NoRoomForExtension { rank: m }));
        }
        let frame = Frame::new(frame).map_err(|e| FieldError::from_core("frame", e))?;
        let g0 = matrix_from_doc("g0", &self.g0)?;
        if (g0.rows(), g0.cols()) != (m, m) {
            return Err(FieldError::new(
                "g0",
                format!("is {}x{}, expected {m}x{m} to match the frame", g0.rows(), g0.cols()),
            ));
        }
        let g0 = UnitaryMatrix::new(g0).map_err(|e| FieldError::from_core("g0", e))?;
        BoundaryProblem::new(frame, g0).map_err(|e| FieldError::from_core("frame", e))
    }

    /// Family parameters; `pivot_override` wins over the document's pivot.
    pub fn synthesis_params(&self, pivot_override: Option<usize>) -> Result<SynthesisParams, FieldError> {
        let omega = matrix_from_doc("omega", &self.omega)?;
        if (omega.rows(), omega.cols()) != (2, 2) {
            return Err(FieldError::new(
                "omega",
                format!("is {}x{}, expected 2x2", omega.rows(), omega.cols()),
            ));
        }
        let mut params = SynthesisParams::new(omega, self.winding).map_err(|e| FieldError::from_core("omega", e))?;
        if let Some(p) = pivot_override.or(self.pivot) {
            let m = self.frame.first().map_or(0, Vec::len);
            if p == 0 || p > m {
                return Err(FieldError::new("pivot", format!("{p} is outside 1..={m}")));
            }
            params = params.with_pivot(p);
        }
        Ok(params)
    }

    pub fn generator(&self) -> Result<Option<ComplexMatrix>, FieldError> {
        let Some(doc) = &self.generator else {
            return Ok(None);
        };
        let h = matrix_from_doc("H", doc)?;
        let n = self.ambient_dim;
        if (h.rows(), h.cols()) != (n, n) {
            return Err(FieldError::new(
                "H",
                format!("is {}x{}, expected {n}x{n}", h.rows(), h.cols()),
            ));
        }
        Ok(Some(h))
    }

    pub fn flow_config(&self) -> Result<FlowConfig, FieldError> {
        let cfg = match self.flow {
            Some(f) => FlowConfig {
                steps: f.steps,
                stride: f.stride,
                retraction: f.retraction,
            },
            None => FlowConfig::default(),
        };
        cfg.validate().map_err(|e| FieldError::from_core("flow", e))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub proj_residual: f64,
    pub restriction_residual: f64,
    pub skew_residual: f64,
    pub commutator_norm: f64,
    pub nontrivial: bool,
}

impl From<&MonodromyReport> for ReportDoc {
    fn from(r: &MonodromyReport) -> Self {
        Self {
            proj_residual: r.proj_residual,
            restriction_residual: r.restriction_residual,
            skew_residual: r.skew_residual,
            commutator_norm: r.commutator_norm,
            nontrivial: r.nontrivial,
        }
    }
}

/// Output of `synth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub version: String,
    /// Generator in ambient coordinates.
    #[serde(rename = "H")]
    pub generator: MatrixDoc,
    /// Diagonal form of `exp(H)` in `basis`.
    #[serde(rename = "U")]
    pub u_matrix: MatrixDoc,
    /// Columns `e₁, …, e_n` in which `exp(H)` equals `U`.
    pub basis: MatrixDoc,
    pub phases: Vec<f64>,
    pub report: ReportDoc,
}

impl ResultDocument {
    pub fn from_result(res: &SynthesisResult) -> Self {
        Self {
            version: TOOL_VERSION.to_string(),
            generator: matrix_to_doc(&res.generator),
            u_matrix: matrix_to_doc(&res.u_matrix),
            basis: matrix_to_doc(&res.basis),
            phases: res.phases.clone(),
            report: ReportDoc::from(&res.report),
        }
    }

    pub fn parse(text: &str) -> Result<Self, FieldError> {
        serde_json::from_str(text).map_err(|e| FieldError::new("document", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

/// Output of `verify`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub version: String,
    pub report: ReportDoc,
}

/// Input of `expm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    #[serde(rename = "M")]
    pub matrix: MatrixDoc,
}

/// Output of `expm`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpmDocument {
    pub version: String,
    pub expm: MatrixDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expm_spectral: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disagreement: Option<f64>,
}

pub fn matrix_from_doc(field: &str, doc: &MatrixDoc) -> Result<ComplexMatrix, FieldError> {
    if doc.is_empty() || doc[0].is_empty() {
        return Err(FieldError::new(field, "matrix is empty"));
    }
    let rows: Vec<Vec<Complex64>> = doc
        .iter()
        .map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows).map_err(|e| FieldError::from_core(field, e))
}

pub fn matrix_to_doc(m: &ComplexMatrix) -> MatrixDoc {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}
