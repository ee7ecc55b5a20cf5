//! CSV ingestion: a `year` column plus one numeric column per series, with
//! strictly consecutive years and row-accurate diagnostics.

use crate::error::DataError;
use longrun::series::Series;
use std::path::Path;

/// The parsed data file: aligned series in column order.
#[derive(Debug, Clone)]
pub struct DataSet {
    pub start_year: i32,
    pub end_year: i32,
    pub series: Vec<Series>,
}

impl DataSet {
    pub fn by_name(&self, name: &str) -> Option<&Series> {
        self.series.iter().find(|s| s.name() == name)
    }
}

/// Reads one series per non-year column, rejecting gaps, duplicate years,
/// and non-numeric cells.
pub fn ingest_csv(path: &Path, year_column: &str) -> Result<DataSet, DataError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers: Vec<String> = reader.headers()?.iter().map(|h| h.to_string()).collect();
    let year_idx = headers
        .iter()
        .position(|h| h == year_column)
        .ok_or_else(|| DataError::Schema {
            row: 1,
            column: year_column.to_string(),
            message: "year column not found in header".into(),
        })?;

    let mut years: Vec<i32> = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
    for (i, record) in reader.records().enumerate() {
        let row = i + 2; // 1-based, after the header
        let record = record?;
        if record.len() != headers.len() {
            return Err(DataError::Schema {
                row,
                column: String::new(),
                message: format!("expected {} cells, found {}", headers.len(), record.len()),
            });
        }
        let year: i32 = record[year_idx].parse().map_err(|_| DataError::Schema {
            row,
            column: year_column.to_string(),
            message: format!("`{}` is not a year", &record[year_idx]),
        })?;
        if let Some(&prev) = years.last() {
            if year == prev {
                return Err(DataError::Schema {
                    row,
                    column: year_column.to_string(),
                    message: format!("duplicate year {year}"),
                });
            }
            if year != prev + 1 {
                return Err(DataError::GapInYears { year: prev + 1 });
            }
        }
        years.push(year);
        for (j, cell) in record.iter().enumerate() {
            if j == year_idx {
                continue;
            }
            let value: f64 = cell.parse().map_err(|_| DataError::Schema {
                row,
                column: headers[j].clone(),
                message: format!("`{cell}` is not numeric"),
            })?;
            if !value.is_finite() {
                return Err(DataError::Schema {
                    row,
                    column: headers[j].clone(),
                    message: "non-finite value".into(),
                });
            }
            columns[j].push(value);
        }
    }
    if years.is_empty() {
        return Err(DataError::Schema {
            row: 2,
            column: String::new(),
            message: "no data rows".into(),
        });
    }

    let start_year = years[0];
    let mut series = Vec::new();
    for (j, header) in headers.iter().enumerate() {
        if j == year_idx {
            continue;
        }
        let values = std::mem::take(&mut columns[j]);
        series.push(Series::new(header.clone(), start_year, values).map_err(|e| {
            DataError::Schema {
                row: 2,
                column: header.clone(),
                message: e.to_string(),
            }
        })?);
    }
    Ok(DataSet {
        start_year,
        end_year: *years.last().unwrap(),
        series,
    })
}
