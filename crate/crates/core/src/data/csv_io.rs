use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use super::{DataError, Dataset};

/// Reads a headed, comma-separated file. Every column except `target_column`
/// must hold finite reals; the target column is kept verbatim as labels.
pub fn load_csv(path: impl AsRef<Path>, target_column: &str) -> Result<Dataset, DataError> {
    read_csv(File::open(path)?, target_column)
}

pub fn read_csv<R: Read>(reader: R, target_column: &str) -> Result<Dataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let target_position = header
        .iter()
        .position(|h| h == target_column)
        .ok_or_else(|| DataError::MissingTargetColumn(target_column.to_string()))?;
    let feature_names: Vec<String> = header
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != target_position)
        .map(|(_, h)| h.clone())
        .collect();

    let mut values = Vec::new();
    let mut target = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        // 1-based data row numbering, header excluded
        let row = i + 1;
        if record.len() != header.len() {
            return Err(DataError::RaggedRow {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        for (col, cell) in record.iter().enumerate() {
            if col == target_position {
                target.push(cell.to_string());
                continue;
            }
            match cell.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(DataError::NonNumericFeatureCell {
                        row,
                        column: header[col].clone(),
                        value: cell.to_string(),
                    })
                }
            }
        }
    }
    if target.is_empty() {
        return Err(DataError::EmptyDataset);
    }
    let features = Array2::from_shape_vec((target.len(), feature_names.len()), values)
        .expect("row lengths checked");
    Dataset::with_target_position(
        features,
        target,
        feature_names,
        target_column,
        target_position,
    )
}

/// Writes the dataset with its original column layout.
///
/// Reals use the shortest representation that parses back to the same bits.
pub fn write_csv<W: Write>(writer: W, dataset: &Dataset) -> Result<(), DataError> {
    write_rows::<W, &str>(writer, dataset, None)
}

/// Like [`write_csv`], with one extra trailing column.
pub fn write_csv_with_column<W: Write, S: AsRef<str>>(
    writer: W,
    dataset: &Dataset,
    column_name: &str,
    values: &[S],
) -> Result<(), DataError> {
    if values.len() != dataset.n_samples() {
        return Err(DataError::LengthMismatch {
            rows: dataset.n_samples(),
            labels: values.len(),
        });
    }
    write_rows(writer, dataset, Some((column_name, values)))
}

fn write_rows<W: Write, S: AsRef<str>>(
    writer: W,
    dataset: &Dataset,
    extra: Option<(&str, &[S])>,
) -> Result<(), DataError> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    let pos = dataset.target_position();
    let names = dataset.feature_names();

    let mut header: Vec<&str> = names.iter().map(String::as_str).collect();
    header.insert(pos, dataset.target_name());
    if let Some((name, _)) = extra {
        header.push(name);
    }
    wtr.write_record(&header)?;

    let mut record: Vec<String> = Vec::with_capacity(header.len());
    for (i, label) in dataset.target().iter().enumerate() {
        record.clear();
        record.extend(dataset.row(i).iter().map(|v| v.to_string()));
        record.insert(pos, label.clone());
        if let Some((_, values)) = extra {
            record.push(values[i].as_ref().to_string());
        }
        wtr.write_record(&record)?;
    }
    wtr.flush()?;
    Ok(())
}
