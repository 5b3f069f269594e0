//! Per-example training cost `Q` and total cost `O = E * T * Q` for the
//! feedforward and recurrent language models and the two log-linear models.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Nnlm,
    Rnnlm,
    Cbow,
    SkipGram,
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nnlm" => Ok(ModelKind::Nnlm),
            "rnnlm" => Ok(ModelKind::Rnnlm),
            "cbow" => Ok(ModelKind::Cbow),
            "skipgram" | "skip-gram" => Ok(ModelKind::SkipGram),
            other => Err(Error::InvalidArgument(format!(
                "unknown architecture {other:?}"
            ))),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Nnlm => "nnlm",
            ModelKind::Rnnlm => "rnnlm",
            ModelKind::Cbow => "cbow",
            ModelKind::SkipGram => "skipgram",
        })
    }
}

/// Cost of the output layer per prediction, in multiples of the layer width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OutputLayer {
    /// Full softmax: `V` outputs.
    Full,
    /// Binary-tree softmax: `log2(V)` outputs.
    Hierarchical,
    /// Binary-tree softmax with a measured mean code length.
    CodeLength(f64),
}

/// Inputs to [`complexity_estimate`]. Fields a formula does not use are
/// ignored.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexityParams {
    /// Context words `N`.
    pub n: Option<f64>,
    /// Projection / vector dimensionality `D`.
    pub d: Option<f64>,
    /// Hidden layer size `H`.
    pub h: Option<f64>,
    /// Vocabulary size `V`.
    pub v: Option<f64>,
    /// Maximum skip-gram distance `C`.
    pub c: Option<f64>,
    /// Epochs `E`.
    pub e: Option<f64>,
    /// Training words per epoch `T`.
    pub t: Option<f64>,
    /// `None` picks the model's usual output layer: full softmax for
    /// NNLM/RNNLM, hierarchical for CBOW/Skip-gram.
    pub output: Option<OutputLayer>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Complexity {
    /// Operations per training example.
    pub q: f64,
    /// `E * T * Q`, when both `E` and `T` were given.
    pub o: Option<f64>,
}

fn need(value: Option<f64>, name: &'static str) -> Result<f64> {
    value.ok_or(Error::MissingParameter(name))
}

pub fn complexity_estimate(kind: ModelKind, p: &ComplexityParams) -> Result<Complexity> {
    let default_output = match kind {
        ModelKind::Nnlm | ModelKind::Rnnlm => OutputLayer::Full,
        ModelKind::Cbow | ModelKind::SkipGram => OutputLayer::Hierarchical,
    };
    let outputs = |v: Option<f64>| -> Result<f64> {
        match p.output.unwrap_or(default_output) {
            OutputLayer::Full => need(v, "V"),
            OutputLayer::Hierarchical => Ok(need(v, "V")?.log2()),
            OutputLayer::CodeLength(l) => Ok(l),
        }
    };

    let q = match kind {
        ModelKind::Nnlm => {
            let (n, d, h) = (need(p.n, "N")?, need(p.d, "D")?, need(p.h, "H")?);
            n * d + n * d * h + h * outputs(p.v)?
        }
        ModelKind::Rnnlm => {
            let h = need(p.h, "H")?;
            h * h + h * outputs(p.v)?
        }
        ModelKind::Cbow => {
            let (n, d) = (need(p.n, "N")?, need(p.d, "D")?);
            n * d + d * outputs(p.v)?
        }
        ModelKind::SkipGram => {
            let (c, d) = (need(p.c, "C")?, need(p.d, "D")?);
            c * (d + d * outputs(p.v)?)
        }
    };
    let o = match (p.e, p.t) {
        (Some(e), Some(t)) => Some(e * t * q),
        _ => None,
    };
    Ok(Complexity { q, o })
}
