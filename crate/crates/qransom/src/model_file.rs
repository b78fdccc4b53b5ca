//! Plain-text model files.
//!
//! ```text
//! qransom-model v1
//! kind = pca
//! total_variance = 3.5
//! mean = vector 2
//! 0.1 -0.2
//! components = matrix 2 1
//! 0.7071067811865475
//! 0.7071067811865476
//! ```
//!
//! Scalars are `key = value`. A `vector N` value is followed by one line
//! of `N` numbers, a `matrix R C` value by `R` lines of `C` numbers.
//! Floats are written in shortest round-trip form, so reading a file back
//! gives bit-identical models.

use std::fmt::Write as _;
use std::path::Path;

use qransom_core::baseline::LogisticModel;
use qransom_core::circuits::{AnsatzSpec, FeatureMapSpec, ParameterVector, PhaseConvention};
use qransom_core::linalg::Matrix;
use qransom_core::preprocess::{PcaModel, ScalerModel};
use qransom_core::qsim::Observable;
use qransom_core::vqc::{VqcModel, VqcShape};

use crate::error::{HarnessError, Result};

const MAGIC: &str = "qransom-model v1";

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(String),
    Vector(Vec<f64>),
    Matrix(Matrix),
}

/// Ordered key/value document with a `kind` tag.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelDoc {
    pub kind: String,
    pub entries: Vec<(String, Value)>,
}

impl ModelDoc {
    pub fn new(kind: &str) -> Self {
        Self {
            kind: kind.to_string(),
            entries: Vec::new(),
        }
    }

    pub fn scalar(mut self, key: &str, value: impl ToString) -> Self {
        self.entries.push((key.into(), Value::Scalar(value.to_string())));
        self
    }

    pub fn vector(mut self, key: &str, values: &[f64]) -> Self {
        self.entries.push((key.into(), Value::Vector(values.to_vec())));
        self
    }

    pub fn matrix(mut self, key: &str, m: &Matrix) -> Self {
        self.entries.push((key.into(), Value::Matrix(m.clone())));
        self
    }

    fn get(&self, key: &str) -> Result<&Value> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v)
            .ok_or_else(|| bad(format!("{} model is missing '{key}'", self.kind)))
    }

    pub fn get_str(&self, key: &str) -> Result<&str> {
        match self.get(key)? {
            Value::Scalar(s) => Ok(s),
            _ => Err(bad(format!("'{key}' should be a scalar"))),
        }
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        let s = self.get_str(key)?;
        s.parse()
            .map_err(|_| bad(format!("'{key}' has unparseable value '{s}'")))
    }

    pub fn get_vector(&self, key: &str) -> Result<&[f64]> {
        match self.get(key)? {
            Value::Vector(v) => Ok(v),
            _ => Err(bad(format!("'{key}' should be a vector"))),
        }
    }

    pub fn get_matrix(&self, key: &str) -> Result<&Matrix> {
        match self.get(key)? {
            Value::Matrix(m) => Ok(m),
            _ => Err(bad(format!("'{key}' should be a matrix"))),
        }
    }

    fn expect_kind(&self, kind: &str) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(bad(format!("expected a {kind} model, found {}", self.kind)))
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{MAGIC}");
        let _ = writeln!(out, "kind = {}", self.kind);
        for (key, value) in &self.entries {
            match value {
                Value::Scalar(s) => {
                    let _ = writeln!(out, "{key} = {s}");
                }
                Value::Vector(v) => {
                    let _ = writeln!(out, "{key} = vector {}", v.len());
                    let _ = writeln!(out, "{}", join(v));
                }
                Value::Matrix(m) => {
                    let _ = writeln!(out, "{key} = matrix {} {}", m.rows(), m.cols());
                    for row in m.row_iter() {
                        let _ = writeln!(out, "{}", join(row));
                    }
                }
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
        match lines.next() {
            Some((_, l)) if l.trim() == MAGIC => {}
            Some((_, l)) => return Err(bad(format!("unsupported model header '{}'", l.trim()))),
            None => return Err(bad("empty model file".into())),
        }
        let mut kind = None;
        let mut entries = Vec::new();
        while let Some((n, line)) = lines.next() {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected 'key = value'", n + 1)))?;
            let (key, value) = (key.trim().to_string(), value.trim());
            let mut words = value.split_whitespace();
            let parsed = match words.next() {
                Some("vector") => {
                    let len = count(words.next(), n)?;
                    let v = if len == 0 {
                        Vec::new()
                    } else {
                        numbers(lines.next(), len, n)?
                    };
                    Value::Vector(v)
                }
                Some("matrix") => {
                    let rows = count(words.next(), n)?;
                    let cols = count(words.next(), n)?;
                    let mut data = Vec::with_capacity(rows * cols);
                    for _ in 0..rows {
                        data.extend(numbers(lines.next(), cols, n)?);
                    }
                    Value::Matrix(Matrix::from_vec(rows, cols, data)?)
                }
                _ => Value::Scalar(value.to_string()),
            };
            if key == "kind" {
                match parsed {
                    Value::Scalar(s) => kind = Some(s),
                    _ => return Err(bad("kind must be a scalar".into())),
                }
            } else {
                entries.push((key, parsed));
            }
        }
        Ok(Self {
            kind: kind.ok_or_else(|| bad("model file has no kind".into()))?,
            entries,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()).map_err(|e| HarnessError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text)
    }
}

fn bad(msg: String) -> HarnessError {
    HarnessError::Config(format!("model file: {msg}"))
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(" ")
}

fn count(word: Option<&str>, line: usize) -> Result<usize> {
    word.and_then(|w| w.parse().ok())
        .ok_or_else(|| bad(format!("line {}: bad block size", line + 1)))
}

fn numbers(line: Option<(usize, &str)>, expected: usize, header: usize) -> Result<Vec<f64>> {
    let (n, line) = line.ok_or_else(|| bad(format!("block starting at line {} is truncated", header + 1)))?;
    let values = line
        .split_whitespace()
        .map(|w| w.parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| bad(format!("line {}: unparseable number", n + 1)))?;
    if values.len() != expected {
        return Err(bad(format!(
            "line {}: expected {expected} numbers, found {}",
            n + 1,
            values.len()
        )));
    }
    Ok(values)
}

pub fn scaler_doc(m: &ScalerModel) -> ModelDoc {
    let flags: Vec<f64> = m.zero_variance.iter().map(|&z| f64::from(u8::from(z))).collect();
    ModelDoc::new("scaler")
        .vector("means", &m.means)
        .vector("stds", &m.stds)
        .vector("zero_variance", &flags)
}

pub fn scaler_from_doc(doc: &ModelDoc) -> Result<ScalerModel> {
    doc.expect_kind("scaler")?;
    let means = doc.get_vector("means")?.to_vec();
    let stds = doc.get_vector("stds")?.to_vec();
    let zero_variance: Vec<bool> = doc.get_vector("zero_variance")?.iter().map(|&f| f != 0.0).collect();
    if stds.len() != means.len() || zero_variance.len() != means.len() {
        return Err(bad("scaler vectors differ in length".into()));
    }
    Ok(ScalerModel {
        means,
        stds,
        zero_variance,
    })
}

pub fn pca_doc(m: &PcaModel) -> ModelDoc {
    ModelDoc::new("pca")
        .scalar("total_variance", format!("{:?}", m.total_variance))
        .vector("mean", &m.mean)
        .vector("explained_variance", &m.explained_variance)
        .vector("explained_variance_ratio", &m.explained_variance_ratio)
        .matrix("components", &m.components)
}

pub fn pca_from_doc(doc: &ModelDoc) -> Result<PcaModel> {
    doc.expect_kind("pca")?;
    let m = PcaModel {
        mean: doc.get_vector("mean")?.to_vec(),
        components: doc.get_matrix("components")?.clone(),
        explained_variance: doc.get_vector("explained_variance")?.to_vec(),
        explained_variance_ratio: doc.get_vector("explained_variance_ratio")?.to_vec(),
        total_variance: doc.get_parsed("total_variance")?,
    };
    if m.components.rows() != m.mean.len()
        || m.explained_variance.len() != m.components.cols()
        || m.explained_variance_ratio.len() != m.components.cols()
    {
        return Err(bad("pca blocks have inconsistent shapes".into()));
    }
    Ok(m)
}

pub fn logistic_doc(m: &LogisticModel) -> ModelDoc {
    ModelDoc::new("logistic")
        .scalar("bias", format!("{:?}", m.bias))
        .scalar("l2_strength", format!("{:?}", m.l2_strength))
        .vector("weights", &m.weights)
}

pub fn logistic_from_doc(doc: &ModelDoc) -> Result<LogisticModel> {
    doc.expect_kind("logistic")?;
    Ok(LogisticModel {
        weights: doc.get_vector("weights")?.to_vec(),
        bias: doc.get_parsed("bias")?,
        l2_strength: doc.get_parsed("l2_strength")?,
    })
}

pub fn vqc_doc(m: &VqcModel) -> ModelDoc {
    let fm = &m.shape.feature_map;
    let pairs: Vec<String> = fm.pairs().iter().map(|(a, b)| format!("{a}-{b}")).collect();
    ModelDoc::new("vqc")
        .scalar("n_qubits", m.shape.n_qubits())
        .scalar("feature_map_reps", fm.reps())
        .scalar("phase_convention", fm.convention().as_str())
        .scalar("entangled_pairs", pairs.join(","))
        .scalar("ansatz_reps", m.shape.ansatz.reps())
        .scalar("observable_z_qubit", m.shape.observable.qubit)
        .vector("theta", m.theta.as_slice())
}

pub fn vqc_from_doc(doc: &ModelDoc) -> Result<VqcModel> {
    doc.expect_kind("vqc")?;
    let n: usize = doc.get_parsed("n_qubits")?;
    let convention: PhaseConvention = doc
        .get_str("phase_convention")?
        .parse()
        .map_err(|_| bad("unknown phase_convention".into()))?;
    let pairs = doc
        .get_str("entangled_pairs")?
        .split(',')
        .filter(|s| !s.is_empty())
        .map(|p| {
            let (a, b) = p.split_once('-').ok_or_else(|| bad(format!("bad pair '{p}'")))?;
            let parse = |s: &str| s.parse::<usize>().map_err(|_| bad(format!("bad pair '{p}'")));
            Ok((parse(a)?, parse(b)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let fm = FeatureMapSpec::with_pairs(n, doc.get_parsed("feature_map_reps")?, pairs, convention)?;
    let ansatz = AnsatzSpec::new(n, doc.get_parsed("ansatz_reps")?)?;
    let shape = VqcShape::with_observable(fm, ansatz, Observable::z(doc.get_parsed("observable_z_qubit")?))?;
    Ok(VqcModel::new(
        shape,
        ParameterVector(doc.get_vector("theta")?.to_vec()),
    )?)
}
