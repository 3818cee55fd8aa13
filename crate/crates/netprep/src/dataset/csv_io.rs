//! Headerless CSV ingestion and emission.
//!
//! CSV carries no header, so the caller-supplied schema is authoritative:
//! it lists the feature columns in order, and the final CSV column is the
//! class label. A nominal descriptor with an empty domain learns its
//! domain from the data in order of first appearance; a non-empty domain
//! is enforced.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{CellRef, ClassLabel, Column, Dataset, FeatureDescriptor, FeatureKind};

pub fn read_csv<R: Read>(
    source: R,
    schema: &[FeatureDescriptor],
    name: &str,
) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);

    let mut columns: Vec<Column> = schema
        .iter()
        .map(|d| match d.kind {
            FeatureKind::Numeric => Column::Numeric(Vec::new()),
            FeatureKind::Nominal => Column::Nominal(Vec::new()),
        })
        .collect();
    let mut domains: Vec<Vec<String>> = schema.iter().map(|d| d.domain.clone()).collect();
    let learn: Vec<bool> = schema
        .iter()
        .map(|d| d.kind == FeatureKind::Nominal && d.domain.is_empty())
        .collect();
    let mut lookups: Vec<HashMap<String, u32>> = domains
        .iter()
        .map(|dom| {
            dom.iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i as u32))
                .collect()
        })
        .collect();
    let mut labels = Vec::new();

    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or_default();
            Error::parse(line, e.to_string())
        })?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or_default();
        if record.len() == 1 && record.get(0) == Some("") {
            continue; // blank line
        }
        if record.len() != schema.len() + 1 {
            return Err(Error::parse(
                line,
                format!(
                    "row has {} cells, expected {} features plus a class label",
                    record.len(),
                    schema.len()
                ),
            ));
        }
        for (i, desc) in schema.iter().enumerate() {
            let field = record.get(i).unwrap_or_default();
            if field.is_empty() || field == "?" {
                return Err(Error::parse(
                    line,
                    format!("missing value for feature {:?}", desc.name),
                ));
            }
            match &mut columns[i] {
                Column::Numeric(vals) => {
                    let v: f64 = field.parse().map_err(|_| {
                        Error::parse(
                            line,
                            format!(
                                "non-numeric token {field:?} in numeric column {:?}",
                                desc.name
                            ),
                        )
                    })?;
                    if !v.is_finite() {
                        return Err(Error::parse(
                            line,
                            format!("non-finite value in numeric column {:?}", desc.name),
                        ));
                    }
                    vals.push(v);
                }
                Column::Nominal(ids) => {
                    let id = match lookups[i].get(field) {
                        Some(&id) => id,
                        None if learn[i] => {
                            let id = domains[i].len() as u32;
                            domains[i].push(field.to_string());
                            lookups[i].insert(field.to_string(), id);
                            id
                        }
                        None => {
                            return Err(Error::parse(
                                line,
                                format!(
                                    "symbol {field:?} is not in the declared domain of {:?}",
                                    desc.name
                                ),
                            ));
                        }
                    };
                    ids.push(id);
                }
            }
        }
        let class = record.get(schema.len()).unwrap_or_default();
        if class.is_empty() || class == "?" {
            return Err(Error::parse(line, "missing class label"));
        }
        labels.push(ClassLabel::from_symbol(class));
    }

    let descriptors = schema
        .iter()
        .zip(domains)
        .map(|(d, domain)| match d.kind {
            FeatureKind::Numeric => FeatureDescriptor::numeric(d.name.clone()),
            FeatureKind::Nominal => FeatureDescriptor::nominal(d.name.clone(), domain),
        })
        .collect();
    Dataset::new(name, descriptors, columns, labels)
}

pub fn write_csv<W: Write>(dataset: &Dataset, sink: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    let mut row: Vec<String> = Vec::with_capacity(dataset.n_features() + 1);
    for r in 0..dataset.n_rows() {
        row.clear();
        for f in 0..dataset.n_features() {
            row.push(match dataset.cell(f, r) {
                CellRef::Symbol(s) => s.to_string(),
                CellRef::Number(v) => format!("{v}"),
            });
        }
        row.push(dataset.labels()[r].as_str().to_string());
        writer.write_record(&row).map_err(|e| Error::parse(r + 1, e.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

pub fn read_csv_file(
    path: impl AsRef<Path>,
    schema: &[FeatureDescriptor],
    name: &str,
) -> Result<Dataset> {
    read_csv(File::open(path)?, schema, name)
}

pub fn write_csv_file(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_csv(dataset, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schema() -> Vec<FeatureDescriptor> {
        vec![
            FeatureDescriptor::numeric("duration"),
            FeatureDescriptor::nominal("protocol_type", vec![]),
        ]
    }

    #[test]
    fn single_row_hand_parse() {
        let d = read_csv("0,tcp,normal\n".as_bytes(), &schema(), "csv").unwrap();
        assert_eq!(d.n_rows(), 1);
        assert_eq!(d.cell(0, 0), CellRef::Number(0.0));
        assert_eq!(d.cell(1, 0), CellRef::Symbol("tcp"));
        assert_eq!(d.labels(), &[ClassLabel::Normal]);
    }

    #[test]
    fn empty_input_gives_zero_rows() {
        let d = read_csv("".as_bytes(), &schema(), "csv").unwrap();
        assert_eq!(d.n_rows(), 0);
        assert_eq!(d.n_features(), 2);
    }

    #[test]
    fn arity_mismatch_reports_line() {
        let err = read_csv("0,tcp,normal\n1,udp\n".as_bytes(), &schema(), "csv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn type_mismatch_reports_line() {
        let err = read_csv("0,tcp,normal\nx,tcp,normal\n".as_bytes(), &schema(), "csv")
            .unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn declared_domain_is_enforced() {
        let schema = vec![FeatureDescriptor::nominal("p", vec!["tcp".into()])];
        let err = read_csv("udp,normal\n".as_bytes(), &schema, "csv").unwrap_err();
        assert!(err.to_string().contains("udp"), "{err}");
    }

    #[test]
    fn crlf_terminators_are_accepted() {
        let d = read_csv("0,tcp,normal\r\n1,udp,anomaly\r\n".as_bytes(), &schema(), "csv")
            .unwrap();
        assert_eq!(d.n_rows(), 2);
    }

    #[test]
    fn round_trip_with_matching_schema_is_identity() {
        let d = super::super::tests::toy();
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), d.descriptors(), d.name()).unwrap();
        assert_eq!(back, d);
    }
}
