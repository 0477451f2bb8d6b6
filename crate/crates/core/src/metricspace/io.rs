use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{validate, FiniteMetricSpace, MetricError};
use crate::numerics::{parse_number, NumberError, Rational};

/// Structured form: `{"labels": [...], "matrix": [["0", "1/2"], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDocument {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<Rational>>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("malformed space document: {0}")]
    Document(#[from] serde_json::Error),
    #[error("malformed csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv row {row}, column {column}: {source}")]
    Number { row: usize, column: usize, source: NumberError },
    #[error("invalid metric: {0}")]
    Metric(#[from] MetricError),
}

impl IngestError {
    pub fn kind(&self) -> &'static str {
        match self {
            IngestError::Document(_) | IngestError::Csv(_) => "parse",
            IngestError::Number { .. } => "number",
            IngestError::Metric(m) => m.kind(),
        }
    }
}

impl From<&FiniteMetricSpace> for SpaceDocument {
    fn from(x: &FiniteMetricSpace) -> Self {
        SpaceDocument { labels: x.labels().to_vec(), matrix: x.matrix().to_vec() }
    }
}

pub fn read_structured(text: &str) -> Result<FiniteMetricSpace, IngestError> {
    let doc: SpaceDocument = serde_json::from_str(text)?;
    Ok(validate(doc.labels, doc.matrix)?)
}

pub fn write_structured(x: &FiniteMetricSpace) -> String {
    serde_json::to_string_pretty(&SpaceDocument::from(x)).expect("space documents serialize")
}

/// Header row of labels, then one row of number literals per point.
pub fn read_csv(text: &str) -> Result<FiniteMetricSpace, IngestError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes());
    let labels: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let mut matrix = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let parsed = record
            .iter()
            .enumerate()
            .map(|(column, cell)| parse_number(cell).map_err(|source| IngestError::Number { row, column, source }))
            .collect::<Result<Vec<_>, _>>()?;
        matrix.push(parsed);
    }
    Ok(validate(labels, matrix)?)
}

pub fn write_csv(x: &FiniteMetricSpace) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(x.labels()).expect("in-memory write");
    for row in x.matrix() {
        writer.write_record(row.iter().map(ToString::to_string)).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
}
