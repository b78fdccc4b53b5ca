//! CSV datasets: a header row, one integer label column (0 benign,
//! 1 ransomware) and any number of real-valued feature columns.

use std::fmt;
use std::path::Path;

use qransom_core::linalg::Matrix;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

/// A row dropped during ingestion. `line` is 1-based and counts the header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Matrix,
    pub y: Vec<u8>,
    pub split: Split,
    pub feature_names: Vec<String>,
    pub rejected: Vec<RejectedRow>,
}

impl Dataset {
    pub fn new(x: Matrix, y: Vec<u8>, split: Split, feature_names: Vec<String>) -> Result<Self> {
        if x.rows() != y.len() {
            return Err(HarnessError::Ingestion(format!(
                "{} rows but {} labels",
                x.rows(),
                y.len()
            )));
        }
        if feature_names.len() != x.cols() {
            return Err(HarnessError::Ingestion(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                x.cols()
            )));
        }
        Ok(Self {
            x,
            y,
            split,
            feature_names,
            rejected: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.x.cols()
    }

    pub fn positives(&self) -> usize {
        self.y.iter().filter(|&&l| l == 1).count()
    }

    /// Writes the dataset back out with the label as the last column.
    pub fn write_csv(&self, path: &Path, label_column: &str) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| csv_io(path, e))?;
        let mut header: Vec<&str> = self.feature_names.iter().map(String::as_str).collect();
        header.push(label_column);
        w.write_record(&header).map_err(|e| csv_io(path, e))?;
        for (row, &label) in self.x.row_iter().zip(&self.y) {
            let mut record: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            record.push(label.to_string());
            w.write_record(&record).map_err(|e| csv_io(path, e))?;
        }
        w.flush().map_err(|e| HarnessError::io(path, e))
    }
}

fn csv_io(path: &Path, e: csv::Error) -> HarnessError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => HarnessError::io(path, io),
        other => HarnessError::Ingestion(format!("{}: {other:?}", path.display())),
    }
}

/// Reads one split. Rows with a wrong field count, an unparseable or
/// non-finite feature, or a label other than 0/1 are dropped and listed in
/// `rejected`.
pub fn read_csv(path: &Path, label_column: &str, split: Split) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header = reader.headers().map_err(|e| csv_io(path, e))?.clone();
    if header.is_empty() {
        return Err(HarnessError::Ingestion(format!(
            "{}: missing header row",
            path.display()
        )));
    }
    let label_idx = header.iter().position(|h| h == label_column).ok_or_else(|| {
        HarnessError::Ingestion(format!("{}: no label column named '{label_column}'", path.display()))
    })?;
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != label_idx)
        .map(|(_, h)| h.to_string())
        .collect();
    let width = header.len();

    let mut data = Vec::new();
    let mut y = Vec::new();
    let mut rejected = Vec::new();
    let mut row_values = Vec::with_capacity(width - 1);
    for (k, record) in reader.records().enumerate() {
        // header is line 1
        let line = k as u64 + 2;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                rejected.push(RejectedRow {
                    line,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        if record.len() != width {
            rejected.push(RejectedRow {
                line,
                reason: format!("expected {width} fields, found {}", record.len()),
            });
            continue;
        }
        row_values.clear();
        let mut label = None;
        let mut problem = None;
        for (i, cell) in record.iter().enumerate() {
            if i == label_idx {
                match cell {
                    "0" => label = Some(0u8),
                    "1" => label = Some(1u8),
                    _ => {
                        problem = Some(format!("label '{cell}' is not 0 or 1"));
                        break;
                    }
                }
            } else {
                match cell.parse::<f64>() {
                    Ok(v) if v.is_finite() => row_values.push(v),
                    _ => {
                        problem = Some(format!("column '{}': cannot use value '{cell}'", &header[i]));
                        break;
                    }
                }
            }
        }
        match (problem, label) {
            (None, Some(l)) => {
                data.extend_from_slice(&row_values);
                y.push(l);
            }
            (Some(reason), _) => rejected.push(RejectedRow { line, reason }),
            (None, None) => unreachable!("label column is inside the checked width"),
        }
    }
    if y.is_empty() {
        return Err(HarnessError::Ingestion(format!(
            "{}: no usable rows ({} rejected)",
            path.display(),
            rejected.len()
        )));
    }
    let x = Matrix::from_vec(y.len(), feature_names.len(), data)?;
    Ok(Dataset {
        x,
        y,
        split,
        feature_names,
        rejected,
    })
}

/// Reads both splits and checks that they carry the same feature columns
/// in the same order.
pub fn ingest_csv(train_path: &Path, test_path: &Path, label_column: &str) -> Result<(Dataset, Dataset)> {
    let train = read_csv(train_path, label_column, Split::Train)?;
    let test = read_csv(test_path, label_column, Split::Test)?;
    check_same_columns(&train, &test)?;
    Ok((train, test))
}

fn check_same_columns(train: &Dataset, test: &Dataset) -> Result<()> {
    if train.feature_names == test.feature_names {
        return Ok(());
    }
    let missing: Vec<&str> = train
        .feature_names
        .iter()
        .filter(|n| !test.feature_names.contains(n))
        .map(String::as_str)
        .collect();
    let extra: Vec<&str> = test
        .feature_names
        .iter()
        .filter(|n| !train.feature_names.contains(n))
        .map(String::as_str)
        .collect();
    let mut msg = format!(
        "train has {} features, test has {}",
        train.n_features(),
        test.n_features()
    );
    if !missing.is_empty() {
        msg.push_str(&format!("; missing from test: {}", missing.join(", ")));
    }
    if !extra.is_empty() {
        msg.push_str(&format!("; not in train: {}", extra.join(", ")));
    }
    if missing.is_empty() && extra.is_empty() {
        msg.push_str("; same columns in a different order");
    }
    Err(HarnessError::Ingestion(msg))
}
