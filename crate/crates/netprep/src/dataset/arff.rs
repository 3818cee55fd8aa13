//! Reader and writer for a plain ARFF subset.
//!
//! Supported lines: `@relation <name>`, `@attribute <name> numeric`,
//! `@attribute <name> {v1,v2,...}`, `@data`, then comma-separated rows.
//! `%` begins a comment; keywords are case-insensitive. Sparse rows and
//! date/string attributes are out of scope.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::{ClassLabel, Column, Dataset, FeatureDescriptor, FeatureKind};

/// Strip one layer of single quotes, if present.
fn unquote(token: &str) -> &str {
    let t = token.trim();
    if t.len() >= 2 && t.starts_with('\'') && t.ends_with('\'') {
        &t[1..t.len() - 1]
    } else {
        t
    }
}

struct AttrDecl {
    name: String,
    kind: FeatureKind,
    domain: Vec<String>,
    line: usize,
}

fn parse_attribute(rest: &str, line: usize) -> Result<AttrDecl> {
    let rest = rest.trim();
    let (raw_name, spec) = if let Some(inner) = rest.strip_prefix('\'') {
        let end = inner
            .find('\'')
            .ok_or_else(|| Error::parse(line, "unterminated quoted attribute name"))?;
        (&inner[..end], inner[end + 1..].trim())
    } else {
        let split = rest
            .find(|c: char| c.is_whitespace() || c == '{')
            .ok_or_else(|| Error::parse(line, "attribute declaration is missing its type"))?;
        (&rest[..split], rest[split..].trim_start())
    };
    if raw_name.is_empty() {
        return Err(Error::parse(line, "attribute declaration has no name"));
    }
    let name = raw_name.to_string();
    if spec.is_empty() {
        return Err(Error::parse(
            line,
            format!("attribute {name:?} is missing its type"),
        ));
    }
    if let Some(body) = spec.strip_prefix('{') {
        let body = body
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(line, format!("unclosed symbol list for {name:?}")))?;
        let mut domain = Vec::new();
        if !body.trim().is_empty() {
            for sym in body.split(',') {
                let sym = unquote(sym);
                if sym.is_empty() {
                    return Err(Error::parse(
                        line,
                        format!("empty symbol in the domain of {name:?}"),
                    ));
                }
                if domain.iter().any(|s| s == sym) {
                    return Err(Error::parse(
                        line,
                        format!("duplicate symbol {sym:?} in the domain of {name:?}"),
                    ));
                }
                domain.push(sym.to_string());
            }
        }
        Ok(AttrDecl {
            name,
            kind: FeatureKind::Nominal,
            domain,
            line,
        })
    } else {
        let type_word = spec.split_whitespace().next().unwrap_or("");
        if ["numeric", "real", "integer"]
            .iter()
            .any(|t| type_word.eq_ignore_ascii_case(t))
        {
            Ok(AttrDecl {
                name,
                kind: FeatureKind::Numeric,
                domain: Vec::new(),
                line,
            })
        } else {
            Err(Error::parse(
                line,
                format!("unsupported attribute type {type_word:?} for {name:?}"),
            ))
        }
    }
}

/// Parse ARFF text into a [`Dataset`]. The last attribute named "class"
/// (case-insensitive) becomes the label column; every label symbol other
/// than "normal" maps to [`ClassLabel::Anomaly`].
pub fn read_arff<R: BufRead>(reader: R) -> Result<Dataset> {
    let mut relation: Option<String> = None;
    let mut attrs: Vec<AttrDecl> = Vec::new();
    let mut in_data = false;

    let mut class_at: Option<usize> = None;
    let mut descriptors: Vec<FeatureDescriptor> = Vec::new();
    let mut columns: Vec<Column> = Vec::new();
    let mut labels: Vec<ClassLabel> = Vec::new();

    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        if !in_data {
            let lower = line.to_ascii_lowercase();
            if let Some(rest) = lower.strip_prefix("@relation") {
                if relation.is_some() {
                    return Err(Error::parse(lineno, "duplicate @relation"));
                }
                if !attrs.is_empty() {
                    return Err(Error::parse(lineno, "@relation must precede @attribute"));
                }
                if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                    return Err(Error::parse(lineno, format!("unrecognized line {line:?}")));
                }
                relation = Some(unquote(&line["@relation".len()..]).to_string());
            } else if lower.starts_with("@attribute") {
                if relation.is_none() {
                    return Err(Error::parse(lineno, "@attribute before @relation"));
                }
                attrs.push(parse_attribute(&line["@attribute".len()..], lineno)?);
            } else if lower.trim() == "@data" {
                if relation.is_none() {
                    return Err(Error::parse(lineno, "@data before @relation"));
                }
                // Locate the class attribute and fix the feature schema.
                class_at = attrs
                    .iter()
                    .rposition(|a| a.name.eq_ignore_ascii_case("class"));
                let class_at = class_at
                    .ok_or_else(|| Error::parse(lineno, "no attribute named \"class\""))?;
                if attrs[class_at].kind != FeatureKind::Nominal {
                    return Err(Error::parse(
                        attrs[class_at].line,
                        "the class attribute must be nominal",
                    ));
                }
                for (at, a) in attrs.iter().enumerate() {
                    if at == class_at {
                        continue;
                    }
                    descriptors.push(match a.kind {
                        FeatureKind::Numeric => FeatureDescriptor::numeric(a.name.clone()),
                        FeatureKind::Nominal => {
                            FeatureDescriptor::nominal(a.name.clone(), a.domain.clone())
                        }
                    });
                    columns.push(match a.kind {
                        FeatureKind::Numeric => Column::Numeric(Vec::new()),
                        FeatureKind::Nominal => Column::Nominal(Vec::new()),
                    });
                }
                in_data = true;
            } else {
                return Err(Error::parse(lineno, format!("unrecognized line {line:?}")));
            }
            continue;
        }

        // Data row.
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != attrs.len() {
            return Err(Error::parse(
                lineno,
                format!("row has {} cells, expected {}", cells.len(), attrs.len()),
            ));
        }
        let class_at = class_at.expect("set when @data was seen");
        let mut col = 0usize;
        for (at, raw) in cells.iter().enumerate() {
            let token = unquote(raw);
            if token.is_empty() || token == "?" {
                return Err(Error::parse(
                    lineno,
                    format!("missing value for attribute {:?}", attrs[at].name),
                ));
            }
            if at == class_at {
                if !attrs[at].domain.iter().any(|s| s == token) {
                    return Err(Error::parse(
                        lineno,
                        format!("undeclared class symbol {token:?}"),
                    ));
                }
                labels.push(ClassLabel::from_symbol(token));
                continue;
            }
            match &mut columns[col] {
                Column::Numeric(vals) => {
                    let v: f64 = token.parse().map_err(|_| {
                        Error::parse(
                            lineno,
                            format!(
                                "non-numeric token {token:?} in numeric column {:?}",
                                attrs[at].name
                            ),
                        )
                    })?;
                    if !v.is_finite() {
                        return Err(Error::parse(
                            lineno,
                            format!("non-finite value in numeric column {:?}", attrs[at].name),
                        ));
                    }
                    vals.push(v);
                }
                Column::Nominal(ids) => {
                    let id = descriptors[col].symbol_id(token).ok_or_else(|| {
                        Error::parse(
                            lineno,
                            format!(
                                "undeclared nominal symbol {token:?} for attribute {:?}",
                                attrs[at].name
                            ),
                        )
                    })?;
                    ids.push(id);
                }
            }
            col += 1;
        }
    }

    if !in_data {
        return Err(Error::parse(0, "missing @data section"));
    }
    Dataset::new(relation.unwrap_or_default(), descriptors, columns, labels)
}

/// Emit `dataset` as ARFF text. Numeric cells are rendered with the
/// shortest decimal form that round-trips to the same binary value, so
/// `read_arff(write_arff(d))` reproduces `d` exactly.
pub fn write_arff<W: Write>(dataset: &Dataset, mut sink: W) -> Result<()> {
    writeln!(sink, "@relation {}", dataset.name())?;
    for desc in dataset.descriptors() {
        match desc.kind {
            FeatureKind::Numeric => writeln!(sink, "@attribute {} numeric", desc.name)?,
            FeatureKind::Nominal => {
                writeln!(sink, "@attribute {} {{{}}}", desc.name, desc.domain.join(","))?
            }
        }
    }
    writeln!(sink, "@attribute class {{normal,anomaly}}")?;
    writeln!(sink, "@data")?;
    let mut row_buf = String::new();
    for row in 0..dataset.n_rows() {
        row_buf.clear();
        for feature in 0..dataset.n_features() {
            match dataset.cell(feature, row) {
                super::CellRef::Symbol(s) => row_buf.push_str(s),
                super::CellRef::Number(v) => {
                    row_buf.push_str(&format!("{v}"));
                }
            }
            row_buf.push(',');
        }
        row_buf.push_str(dataset.labels()[row].as_str());
        writeln!(sink, "{row_buf}")?;
    }
    sink.flush()?;
    Ok(())
}

pub fn read_arff_file(path: impl AsRef<Path>) -> Result<Dataset> {
    read_arff(BufReader::new(File::open(path)?))
}

pub fn write_arff_file(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    write_arff(dataset, BufWriter::new(File::create(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Dataset> {
        read_arff(text.as_bytes())
    }

    #[test]
    fn empty_data_section_gives_zero_rows() {
        let d = parse(
            "@relation empty\n@attribute duration numeric\n@attribute class {normal,anomaly}\n@data\n",
        )
        .unwrap();
        assert_eq!(d.n_rows(), 0);
        assert_eq!(d.n_features(), 1);
        assert_eq!(d.name(), "empty");
    }

    #[test]
    fn two_row_nominal_file_hand_parse() {
        let d = parse(
            "@relation t\n\
             @attribute protocol_type {tcp,udp}\n\
             @attribute class {normal,anomaly}\n\
             @data\n\
             tcp,normal\n\
             udp,anomaly\n",
        )
        .unwrap();
        assert_eq!(d.n_rows(), 2);
        assert_eq!(d.descriptor(0).domain, vec!["tcp", "udp"]);
        assert_eq!(
            d.labels(),
            &[ClassLabel::Normal, ClassLabel::Anomaly]
        );
    }

    #[test]
    fn comments_and_case_insensitive_keywords() {
        let d = parse(
            "% generated\n@RELATION x\n@ATTRIBUTE a NUMERIC\n@Attribute class {normal,bad}\n@DATA\n% row\n1,bad\n",
        )
        .unwrap();
        assert_eq!(d.n_rows(), 1);
        assert_eq!(d.labels()[0], ClassLabel::Anomaly);
    }

    #[test]
    fn attack_labels_collapse_to_anomaly() {
        let d = parse(
            "@relation t\n@attribute a numeric\n@attribute class {normal,neptune,smurf}\n@data\n1,neptune\n2,normal\n3,smurf\n",
        )
        .unwrap();
        assert_eq!(
            d.labels(),
            &[ClassLabel::Anomaly, ClassLabel::Normal, ClassLabel::Anomaly]
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        let undeclared = parse(
            "@relation t\n@attribute p {tcp}\n@attribute class {normal,anomaly}\n@data\nudp,normal\n",
        )
        .unwrap_err();
        assert!(matches!(undeclared, Error::Parse { line: 5, .. }), "{undeclared}");

        let non_numeric = parse(
            "@relation t\n@attribute a numeric\n@attribute class {normal,anomaly}\n@data\n1,normal\nx,normal\n",
        )
        .unwrap_err();
        assert!(matches!(non_numeric, Error::Parse { line: 6, .. }), "{non_numeric}");

        let missing = parse(
            "@relation t\n@attribute a numeric\n@attribute class {normal,anomaly}\n@data\n?,normal\n",
        )
        .unwrap_err();
        assert!(matches!(missing, Error::Parse { line: 5, .. }), "{missing}");

        let arity = parse(
            "@relation t\n@attribute a numeric\n@attribute class {normal,anomaly}\n@data\n1,2,normal\n",
        )
        .unwrap_err();
        assert!(matches!(arity, Error::Parse { line: 5, .. }), "{arity}");
    }

    #[test]
    fn absent_class_attribute_is_an_error() {
        let err = parse("@relation t\n@attribute a numeric\n@data\n").unwrap_err();
        assert!(err.to_string().contains("class"), "{err}");
    }

    #[test]
    fn nonlast_class_attribute_is_used_as_label() {
        let d = parse(
            "@relation t\n@attribute class {normal,anomaly}\n@attribute a numeric\n@data\nanomaly,4\n",
        )
        .unwrap();
        assert_eq!(d.n_features(), 1);
        assert_eq!(d.descriptor(0).name, "a");
        assert_eq!(d.labels(), &[ClassLabel::Anomaly]);
    }

    #[test]
    fn writer_emits_domain_line_and_round_trips() {
        let d = super::super::tests::toy();
        let mut buf = Vec::new();
        write_arff(&d, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("@attribute protocol_type {tcp,udp,icmp}"), "{text}");
        let back = read_arff(text.as_bytes()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn writer_round_trips_awkward_floats() {
        let d = Dataset::new(
            "floats",
            vec![FeatureDescriptor::numeric("x")],
            vec![Column::Numeric(vec![
                0.1,
                -0.0,
                1.0 / 3.0,
                f64::MIN_POSITIVE,
                1.7e308,
                123456789.123456789,
            ])],
            vec![ClassLabel::Normal; 6],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_arff(&d, &mut buf).unwrap();
        assert_eq!(read_arff(buf.as_slice()).unwrap(), d);
    }

    #[test]
    fn zero_instance_dataset_writes_header_only() {
        let d = Dataset::new(
            "empty",
            vec![FeatureDescriptor::numeric("x")],
            vec![Column::Numeric(vec![])],
            vec![],
        )
        .unwrap();
        let mut buf = Vec::new();
        write_arff(&d, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.trim_end().ends_with("@data"), "{text}");
        assert_eq!(read_arff(text.as_bytes()).unwrap(), d);
    }
}
