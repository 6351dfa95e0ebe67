//! Versioned JSON file formats. Complex entries are `[re, im]` pairs in
//! row-major order; non-finite values are rejected on load.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cp::KrausFamily;
use crate::error::{Error, Result};
use crate::gksl::GkslPresentation;
use crate::operator::{Operator, Tolerance};
use crate::scalar::C;
use crate::superop::{ChoiMatrix, SuperOperator, VECTORIZATION_CONVENTION};

pub const VERSION: &str = "v1";
pub const OPERATOR_FORMAT: &str = "gksl-kit/operator";
pub const SUPEROPERATOR_FORMAT: &str = "gksl-kit/superoperator";
pub const SCHEDULE_FORMAT: &str = "gksl-kit/schedule";
pub const TRAJECTORY_FORMAT: &str = "gksl-kit/trajectory";
pub const TRUNCATION_FORMAT: &str = "gksl-kit/truncation";

pub type Entry = [f64; 2];

fn check_header(format: &str, version: &str, expected: &str) -> Result<()> {
    if format != expected {
        return Err(Error::InvalidArgument(format!("expected format {expected:?}, got {format:?}")));
    }
    if version != VERSION {
        return Err(Error::InvalidArgument(format!("unsupported version {version:?}")));
    }
    Ok(())
}

fn to_entries(m: &DMatrix<C<f64>>) -> Vec<Entry> {
    let mut out = Vec::with_capacity(m.len());
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            out.push([z.re, z.im]);
        }
    }
    out
}

fn from_entries(rows: usize, cols: usize, entries: &[Entry]) -> Result<DMatrix<C<f64>>> {
    if rows == 0 || cols == 0 {
        return Err(Error::DimensionMismatch("matrix dimensions must be positive".into()));
    }
    if entries.len() != rows * cols {
        return Err(Error::DimensionMismatch(format!(
            "{rows}x{cols} matrix needs {} entries, got {}",
            rows * cols,
            entries.len()
        )));
    }
    if entries.iter().any(|e| !e[0].is_finite() || !e[1].is_finite()) {
        return Err(Error::InvalidArgument("non-finite matrix entry".into()));
    }
    let z: Vec<C<f64>> = entries.iter().map(|e| C::new(e[0], e[1])).collect();
    Ok(DMatrix::from_row_slice(rows, cols, &z))
}

/// Dense matrix block without a header.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixPayload {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Entry>,
}

impl MatrixPayload {
    pub fn from_operator(a: &Operator<f64>) -> Self {
        Self {
            rows: a.dim_out(),
            cols: a.dim_in(),
            entries: to_entries(a.matrix()),
        }
    }

    pub fn to_operator(&self) -> Result<Operator<f64>> {
        Ok(Operator::from_matrix(from_entries(self.rows, self.cols, &self.entries)?))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorFile {
    pub format: String,
    pub version: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Entry>,
}

impl OperatorFile {
    pub fn from_operator(a: &Operator<f64>) -> Self {
        Self {
            format: OPERATOR_FORMAT.into(),
            version: VERSION.into(),
            rows: a.dim_out(),
            cols: a.dim_in(),
            entries: to_entries(a.matrix()),
        }
    }

    pub fn to_operator(&self) -> Result<Operator<f64>> {
        check_header(&self.format, &self.version, OPERATOR_FORMAT)?;
        Ok(Operator::from_matrix(from_entries(self.rows, self.cols, &self.entries)?))
    }
}

/// The CP part of a serialized presentation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PsiPayload {
    Kraus { operators: Vec<MatrixPayload> },
    Choi { entries: Vec<Entry> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "repr", rename_all = "kebab-case")]
pub enum SuperOpBody {
    /// `d_out² x d_in²` matrix on column-stacked operators.
    Matrix { entries: Vec<Entry> },
    /// `(d_out·d_in)²` Choi matrix.
    Choi { entries: Vec<Entry> },
    Kraus { operators: Vec<MatrixPayload> },
    Gksl {
        psi: PsiPayload,
        g: MatrixPayload,
        h: MatrixPayload,
    },
}

impl SuperOpBody {
    pub fn repr(&self) -> &'static str {
        match self {
            Self::Matrix { .. } => "matrix",
            Self::Choi { .. } => "choi",
            Self::Kraus { .. } => "kraus",
            Self::Gksl { .. } => "gksl",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperOpFile {
    pub format: String,
    pub version: String,
    pub convention: String,
    pub dim_in: usize,
    pub dim_out: usize,
    #[serde(flatten)]
    pub body: SuperOpBody,
}

/// A decoded superoperator together with whatever structure its
/// representation carried.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSuperOp {
    pub op: SuperOperator<f64>,
    pub repr: String,
    pub kraus: Option<KrausFamily<f64>>,
    pub presentation: Option<GkslPresentation<f64>>,
}

fn kraus_ops(ops: &[MatrixPayload], dim_in: usize, dim_out: usize) -> Result<KrausFamily<f64>> {
    let ops = ops.iter().map(MatrixPayload::to_operator).collect::<Result<Vec<_>>>()?;
    if ops.iter().any(|a| a.dim_in() != dim_in || a.dim_out() != dim_out) {
        return Err(Error::DimensionMismatch(format!(
            "Kraus operators must be {dim_out}x{dim_in}"
        )));
    }
    KrausFamily::new(ops)
}

impl SuperOpFile {
    fn header(dim_in: usize, dim_out: usize, body: SuperOpBody) -> Self {
        Self {
            format: SUPEROPERATOR_FORMAT.into(),
            version: VERSION.into(),
            convention: VECTORIZATION_CONVENTION.into(),
            dim_in,
            dim_out,
            body,
        }
    }

    pub fn matrix(op: &SuperOperator<f64>) -> Self {
        Self::header(op.dim_in(), op.dim_out(), SuperOpBody::Matrix {
            entries: to_entries(op.matrix()),
        })
    }

    pub fn choi(op: &SuperOperator<f64>) -> Self {
        Self::header(op.dim_in(), op.dim_out(), SuperOpBody::Choi {
            entries: to_entries(op.choi().matrix()),
        })
    }

    pub fn kraus(family: &KrausFamily<f64>) -> Self {
        Self::header(family.dim_in(), family.dim_out(), SuperOpBody::Kraus {
            operators: family.operators().iter().map(MatrixPayload::from_operator).collect(),
        })
    }

    /// Presentation with `Ψ` stored through its Choi matrix.
    pub fn gksl(p: &GkslPresentation<f64>) -> Self {
        let d = p.dim();
        Self::header(d, d, SuperOpBody::Gksl {
            psi: PsiPayload::Choi {
                entries: to_entries(p.psi.choi().matrix()),
            },
            g: MatrixPayload::from_operator(&p.g),
            h: MatrixPayload::from_operator(&p.h),
        })
    }

    pub fn load(&self, tol: &Tolerance<f64>) -> Result<LoadedSuperOp> {
        check_header(&self.format, &self.version, SUPEROPERATOR_FORMAT)?;
        if self.convention != VECTORIZATION_CONVENTION {
            return Err(Error::InvalidArgument(format!(
                "unsupported vectorization convention {:?}",
                self.convention
            )));
        }
        let (di, dout) = (self.dim_in, self.dim_out);
        if di == 0 || dout == 0 {
            return Err(Error::DimensionMismatch("dimensions must be positive".into()));
        }
        let repr = self.body.repr().to_string();
        let mut kraus = None;
        let mut presentation = None;
        let op = match &self.body {
            SuperOpBody::Matrix { entries } => {
                SuperOperator::from_matrix(di, dout, from_entries(dout * dout, di * di, entries)?)?
            }
            SuperOpBody::Choi { entries } => SuperOperator::from_choi(ChoiMatrix::new(
                di,
                dout,
                from_entries(dout * di, dout * di, entries)?,
            )?),
            SuperOpBody::Kraus { operators } => {
                let fam = kraus_ops(operators, di, dout)?;
                let op = crate::cp::kraus_assemble(&fam);
                kraus = Some(fam);
                op
            }
            SuperOpBody::Gksl { psi, g, h } => {
                if di != dout {
                    return Err(Error::DimensionMismatch("presentations need dim_in == dim_out".into()));
                }
                let psi = match psi {
                    PsiPayload::Kraus { operators } => crate::cp::kraus_assemble(&kraus_ops(operators, di, di)?),
                    PsiPayload::Choi { entries } => {
                        SuperOperator::from_choi(ChoiMatrix::new(di, di, from_entries(di * di, di * di, entries)?)?)
                    }
                };
                let (g, h) = (g.to_operator()?, h.to_operator()?);
                let p = GkslPresentation::new(psi, g, h, tol)?;
                let op = p.generator();
                presentation = Some(p);
                op
            }
        };
        Ok(LoadedSuperOp {
            op,
            repr,
            kraus,
            presentation,
        })
    }
}

/// Piecewise-constant schedule: `generators[k]` on
/// `[breakpoints[k], breakpoints[k+1])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleFile {
    pub format: String,
    pub version: String,
    pub breakpoints: Vec<f64>,
    pub generators: Vec<SuperOpFile>,
}

impl ScheduleFile {
    pub fn new(breakpoints: Vec<f64>, generators: &[SuperOperator<f64>]) -> Self {
        Self {
            format: SCHEDULE_FORMAT.into(),
            version: VERSION.into(),
            breakpoints,
            generators: generators.iter().map(SuperOpFile::matrix).collect(),
        }
    }

    pub fn load(&self, tol: &Tolerance<f64>) -> Result<crate::evolution::GeneratorSchedule<f64>> {
        check_header(&self.format, &self.version, SCHEDULE_FORMAT)?;
        if self.breakpoints.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("non-finite breakpoint".into()));
        }
        let gens = self
            .generators
            .iter()
            .map(|g| Ok(g.load(tol)?.op))
            .collect::<Result<Vec<_>>>()?;
        crate::evolution::GeneratorSchedule::piecewise_constant(self.breakpoints.clone(), gens)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub rho: MatrixPayload,
    pub trace: f64,
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryFile {
    pub format: String,
    pub version: String,
    pub eps: f64,
    pub samples: Vec<TrajectorySample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRowOut {
    pub n: usize,
    pub error: f64,
    pub truncated_cp: bool,
    pub truncated_choi_min_eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationFile {
    pub format: String,
    pub version: String,
    pub ambient_dim: usize,
    pub t: f64,
    pub rows: Vec<TruncationRowOut>,
}

/// Deterministic pretty JSON with a trailing newline.
pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn parse_json<'a, D: Deserialize<'a>>(text: &'a str) -> Result<D> {
    serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("parse error: {e}")))
}

/// `format` field of a JSON document, if present.
pub fn sniff_format(text: &str) -> Option<String> {
    #[derive(Deserialize)]
    struct Head {
        format: String,
    }
    serde_json::from_str::<Head>(text).ok().map(|h| h.format)
}
