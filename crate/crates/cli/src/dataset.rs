//! CSV ingestion into a [`FixedDesign`].

use std::path::PathBuf;

use fdglm::FixedDesign;
use nalgebra::{DMatrix, DVector};

pub const INTERCEPT_NAME: &str = "(Intercept)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum NaPolicy {
    /// Skip rows with a missing value in any selected column.
    DropRow,
    #[default]
    Fail,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSpec {
    pub path: PathBuf,
    pub response_column: String,
    pub covariate_columns: Vec<String>,
    pub add_intercept: bool,
    pub na_policy: NaPolicy,
}

impl DatasetSpec {
    pub fn new(path: impl Into<PathBuf>, response: &str, covariates: &[&str]) -> Self {
        Self {
            path: path.into(),
            response_column: response.to_string(),
            covariate_columns: covariates.iter().map(|s| s.to_string()).collect(),
            add_intercept: true,
            na_policy: NaPolicy::Fail,
        }
    }

    fn validate(&self) -> Result<(), DataError> {
        if self.covariate_columns.iter().any(|c| *c == self.response_column) {
            return Err(DataError::Spec(format!(
                "column {:?} is both the response and a covariate",
                self.response_column
            )));
        }
        if !self.add_intercept && self.covariate_columns.is_empty() {
            return Err(DataError::Spec("no covariates and no intercept".into()));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = self.covariate_columns.iter().find(|c| !seen.insert(c.as_str())) {
            return Err(DataError::Spec(format!("covariate {dup:?} listed twice")));
        }
        Ok(())
    }

    /// Parameter names in design order.
    pub fn parameter_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.covariate_columns.len() + 1);
        if self.add_intercept {
            names.push(INTERCEPT_NAME.to_string());
        }
        names.extend(self.covariate_columns.iter().cloned());
        names
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed CSV: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: no column named {column:?}")]
    MissingColumn { path: PathBuf, column: String },
    /// `row` counts data rows from 1, excluding the header.
    #[error("{path}: non-numeric value {value:?} at row {row}, column {column:?}")]
    NonNumericCell {
        path: PathBuf,
        row: usize,
        column: String,
        value: String,
    },
    #[error("{path}: missing value at row {row}, column {column:?}")]
    MissingValue { path: PathBuf, row: usize, column: String },
    #[error("{path}: no usable rows ({dropped} dropped)")]
    EmptyAfterFiltering { path: PathBuf, dropped: usize },
    #[error("{0}")]
    Spec(String),
    #[error("{0}")]
    Model(#[from] fdglm::Error),
}

#[derive(Debug, Clone)]
pub struct LoadedData {
    pub design: FixedDesign,
    pub parameter_names: Vec<String>,
    /// Data rows in the file.
    pub rows_read: usize,
    pub rows_dropped: usize,
}

fn is_missing(cell: &str) -> bool {
    matches!(cell, "" | "NA" | "NaN" | "nan" | "null")
}

pub fn load_csv(spec: &DatasetSpec) -> Result<LoadedData, DataError> {
    spec.validate()?;
    let path = spec.path.as_path();
    let file = std::fs::File::open(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let csv_err = |source| DataError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let header = reader.headers().map_err(csv_err)?.clone();
    let index = |name: &str| -> Result<usize, DataError> {
        header.iter().position(|h| h == name).ok_or_else(|| DataError::MissingColumn {
            path: path.to_path_buf(),
            column: name.to_string(),
        })
    };
    let mut columns = vec![index(&spec.response_column)?];
    for c in &spec.covariate_columns {
        columns.push(index(c)?);
    }

    let mut values: Vec<Vec<f64>> = Vec::new();
    let mut rows_read = 0;
    let mut rows_dropped = 0;
    'rows: for record in reader.records() {
        let record = record.map_err(csv_err)?;
        rows_read += 1;
        let mut row = Vec::with_capacity(columns.len());
        for &c in &columns {
            let cell = record.get(c).unwrap_or("");
            let name = &header[c];
            if is_missing(cell) {
                match spec.na_policy {
                    NaPolicy::DropRow => {
                        rows_dropped += 1;
                        continue 'rows;
                    }
                    NaPolicy::Fail => {
                        return Err(DataError::MissingValue {
                            path: path.to_path_buf(),
                            row: rows_read,
                            column: name.to_string(),
                        })
                    }
                }
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                _ => {
                    return Err(DataError::NonNumericCell {
                        path: path.to_path_buf(),
                        row: rows_read,
                        column: name.to_string(),
                        value: cell.to_string(),
                    })
                }
            }
        }
        values.push(row);
    }
    if values.is_empty() {
        return Err(DataError::EmptyAfterFiltering {
            path: path.to_path_buf(),
            dropped: rows_dropped,
        });
    }

    let n = values.len();
    let offset = usize::from(spec.add_intercept);
    let p = offset + spec.covariate_columns.len();
    let z = DMatrix::from_fn(p, n, |j, i| if j < offset { 1.0 } else { values[i][1 + j - offset] });
    let y = DVector::from_iterator(n, values.iter().map(|r| r[0]));
    Ok(LoadedData {
        design: FixedDesign::new(z, y)?,
        parameter_names: spec.parameter_names(),
        rows_read,
        rows_dropped,
    })
}
