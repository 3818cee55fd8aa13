//! Probability-mass-function mapping of nominal features.
//!
//! Each symbol of a nominal feature is replaced by its relative frequency
//! of occurrence in a sample: a column with M values where symbol s
//! occurs r times maps s to r/M. The result is numeric and lands in
//! [0, 1] by construction. Symbols never seen during fitting map to 0.
//!
//! Two symbols with equal counts map to the same number; that collision
//! is inherent to the method.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dataset::{Column, Dataset, FeatureDescriptor};
use crate::error::{Error, Result};

/// One fitted symbol with its absolute occurrence count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmfEntry {
    pub symbol: String,
    pub count: u64,
}

/// Per-feature mapping symbol -> relative frequency, learned from a
/// sample of `sample_size` values. Entries are kept in order of first
/// appearance in the fitting column.
#[derive(Debug, Clone)]
pub struct PmfTable {
    feature: String,
    entries: Vec<PmfEntry>,
    index: HashMap<String, usize>,
    sample_size: u64,
}

impl PartialEq for PmfTable {
    fn eq(&self, other: &Self) -> bool {
        self.feature == other.feature
            && self.entries == other.entries
            && self.sample_size == other.sample_size
    }
}

impl PmfTable {
    fn from_entries(feature: String, entries: Vec<PmfEntry>, sample_size: u64) -> PmfTable {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.symbol.clone(), i))
            .collect();
        PmfTable {
            feature,
            entries,
            index,
            sample_size,
        }
    }

    /// Count symbol occurrences over a non-empty column.
    pub fn fit<S: AsRef<str>>(feature: &str, column: &[S]) -> Result<PmfTable> {
        if column.is_empty() {
            return Err(Error::EmptyColumn);
        }
        let mut entries: Vec<PmfEntry> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for cell in column {
            let symbol = cell.as_ref();
            match index.get(symbol) {
                Some(&i) => entries[i].count += 1,
                None => {
                    index.insert(symbol.to_string(), entries.len());
                    entries.push(PmfEntry {
                        symbol: symbol.to_string(),
                        count: 1,
                    });
                }
            }
        }
        Ok(PmfTable {
            feature: feature.to_string(),
            entries,
            index,
            sample_size: column.len() as u64,
        })
    }

    pub fn feature(&self) -> &str {
        &self.feature
    }

    pub fn entries(&self) -> &[PmfEntry] {
        &self.entries
    }

    pub fn sample_size(&self) -> u64 {
        self.sample_size
    }

    /// Relative frequency of a symbol; 0.0 when unseen during fitting.
    pub fn frequency(&self, symbol: &str) -> f64 {
        match self.index.get(symbol) {
            Some(&i) => self.entries[i].count as f64 / self.sample_size as f64,
            None => 0.0,
        }
    }

    /// Replace every cell by its fitted frequency.
    pub fn transform<S: AsRef<str>>(&self, column: &[S]) -> Vec<f64> {
        column.iter().map(|s| self.frequency(s.as_ref())).collect()
    }
}

/// Replace every nominal column of `dataset` by its PMF-mapped numeric
/// column; numeric columns pass through untouched. The returned tables
/// can be re-applied to a test split with [`transform_dataset`].
pub fn fit_transform_dataset(dataset: &Dataset) -> (Dataset, Vec<PmfTable>) {
    let mut tables = Vec::new();
    let mut descriptors = Vec::with_capacity(dataset.n_features());
    let mut columns = Vec::with_capacity(dataset.n_features());
    for (desc, col) in dataset.descriptors().iter().zip(dataset.columns()) {
        match col {
            Column::Numeric(vals) => {
                descriptors.push(desc.clone());
                columns.push(Column::Numeric(vals.clone()));
            }
            Column::Nominal(ids) => {
                let table = fit_nominal_ids(&desc.name, &desc.domain, ids);
                columns.push(Column::Numeric(
                    ids.iter()
                        .map(|&id| table.frequency(&desc.domain[id as usize]))
                        .collect(),
                ));
                descriptors.push(FeatureDescriptor::numeric(desc.name.clone()));
                tables.push(table);
            }
        }
    }
    let out = Dataset::new(
        dataset.name().to_owned(),
        descriptors,
        columns,
        dataset.labels().to_vec(),
    )
    .expect("pmf transform preserves dataset validity");
    (out, tables)
}

/// Count over domain ids without materializing symbol strings. A 0-row
/// column yields an empty table that maps everything to 0.
fn fit_nominal_ids(feature: &str, domain: &[String], ids: &[u32]) -> PmfTable {
    let mut counts = vec![0u64; domain.len()];
    let mut order = Vec::new();
    for &id in ids {
        if counts[id as usize] == 0 {
            order.push(id as usize);
        }
        counts[id as usize] += 1;
    }
    let entries = order
        .into_iter()
        .map(|i| PmfEntry {
            symbol: domain[i].clone(),
            count: counts[i],
        })
        .collect();
    PmfTable::from_entries(feature.to_string(), entries, ids.len() as u64)
}

/// Apply previously fitted tables to another dataset (typically the test
/// split). Every nominal feature must have a table with a matching name.
pub fn transform_dataset(tables: &[PmfTable], dataset: &Dataset) -> Result<Dataset> {
    let by_name: HashMap<&str, &PmfTable> =
        tables.iter().map(|t| (t.feature(), t)).collect();
    let mut descriptors = Vec::with_capacity(dataset.n_features());
    let mut columns = Vec::with_capacity(dataset.n_features());
    for (desc, col) in dataset.descriptors().iter().zip(dataset.columns()) {
        match col {
            Column::Numeric(vals) => {
                descriptors.push(desc.clone());
                columns.push(Column::Numeric(vals.clone()));
            }
            Column::Nominal(ids) => {
                let table = by_name
                    .get(desc.name.as_str())
                    .ok_or_else(|| Error::MissingTransform(desc.name.clone()))?;
                columns.push(Column::Numeric(
                    ids.iter()
                        .map(|&id| table.frequency(&desc.domain[id as usize]))
                        .collect(),
                ));
                descriptors.push(FeatureDescriptor::numeric(desc.name.clone()));
            }
        }
    }
    Dataset::new(
        dataset.name().to_owned(),
        descriptors,
        columns,
        dataset.labels().to_vec(),
    )
}

/// A raw record field for the streaming variant.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Symbol(String),
    Number(f64),
}

/// Online variant: buffer records into consecutive non-overlapping
/// windows of `window_length` records, fit the PMF of each nominal field
/// over the window alone, transform the window with those tables, and
/// emit the numeric records in input order. A final partial window is
/// processed with its own smaller sample size.
pub fn stream_map<I>(records: I, window_length: usize) -> StreamMap<I::IntoIter>
where
    I: IntoIterator<Item = Vec<Value>>,
{
    assert!(window_length >= 1, "window_length must be at least 1");
    StreamMap {
        source: records.into_iter(),
        window_length,
        ready: std::collections::VecDeque::new(),
    }
}

pub struct StreamMap<I: Iterator<Item = Vec<Value>>> {
    source: I,
    window_length: usize,
    ready: std::collections::VecDeque<Vec<f64>>,
}

impl<I: Iterator<Item = Vec<Value>>> StreamMap<I> {
    fn refill(&mut self) {
        let window: Vec<Vec<Value>> = self.source.by_ref().take(self.window_length).collect();
        if window.is_empty() {
            return;
        }
        let width = window.iter().map(Vec::len).max().unwrap_or(0);
        // Fit one table per field over the window's symbol cells.
        let mut tables: Vec<Option<PmfTable>> = Vec::with_capacity(width);
        for field in 0..width {
            let symbols: Vec<&str> = window
                .iter()
                .filter_map(|rec| match rec.get(field) {
                    Some(Value::Symbol(s)) => Some(s.as_str()),
                    _ => None,
                })
                .collect();
            tables.push(if symbols.is_empty() {
                None
            } else {
                Some(PmfTable::fit(&format!("field{field}"), &symbols).expect("non-empty"))
            });
        }
        for record in &window {
            let out = record
                .iter()
                .enumerate()
                .map(|(field, value)| match value {
                    Value::Number(v) => *v,
                    Value::Symbol(s) => tables[field]
                        .as_ref()
                        .map(|t| t.frequency(s))
                        .unwrap_or(0.0),
                })
                .collect();
            self.ready.push_back(out);
        }
    }
}

impl<I: Iterator<Item = Vec<Value>>> Iterator for StreamMap<I> {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        if self.ready.is_empty() {
            self.refill();
        }
        self.ready.pop_front()
    }
}

/// Persist tables as tab-separated text: per table a "# M=<sample_size>"
/// line, then one "feature<TAB>symbol<TAB>count<TAB>frequency" line per
/// entry. Counts and M recover the exact rationals on load.
pub fn save_tables<W: Write>(tables: &[PmfTable], mut sink: W) -> Result<()> {
    for table in tables {
        writeln!(sink, "# M={}", table.sample_size)?;
        for e in &table.entries {
            let freq = e.count as f64 / table.sample_size as f64;
            writeln!(sink, "{}\t{}\t{}\t{}", table.feature, e.symbol, e.count, freq)?;
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn load_tables<R: Read>(source: R) -> Result<Vec<PmfTable>> {
    let reader = BufReader::new(source);
    let mut tables: Vec<PmfTable> = Vec::new();
    let mut current: Option<(u64, Vec<(String, PmfEntry)>)> = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        if let Some(m) = line.strip_prefix("# M=") {
            if let Some((sample, rows)) = current.take() {
                tables.extend(collect_tables(sample, rows));
            }
            let sample: u64 = m
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, "bad sample size"))?;
            current = Some((sample, Vec::new()));
        } else {
            let parts: Vec<&str> = line.split('\t').collect();
            if parts.len() != 4 {
                return Err(Error::parse(lineno, "expected 4 tab-separated fields"));
            }
            let count: u64 = parts[2]
                .parse()
                .map_err(|_| Error::parse(lineno, "bad count"))?;
            let (sample, rows) = current
                .as_mut()
                .ok_or_else(|| Error::parse(lineno, "entry before any # M= header"))?;
            let _ = sample;
            rows.push((
                parts[0].to_string(),
                PmfEntry {
                    symbol: parts[1].to_string(),
                    count,
                },
            ));
        }
    }
    if let Some((sample, rows)) = current.take() {
        tables.extend(collect_tables(sample, rows));
    }
    Ok(tables)
}

fn collect_tables(sample: u64, rows: Vec<(String, PmfEntry)>) -> Vec<PmfTable> {
    let mut out: Vec<PmfTable> = Vec::new();
    for (feature, entry) in rows {
        match out.last_mut() {
            Some(t) if t.feature == feature => {
                t.index.insert(entry.symbol.clone(), t.entries.len());
                t.entries.push(entry);
            }
            _ => out.push(PmfTable::from_entries(feature, vec![entry], sample)),
        }
    }
    out
}

pub fn save_tables_file(tables: &[PmfTable], path: impl AsRef<Path>) -> Result<()> {
    save_tables(tables, BufWriter::new(File::create(path)?))
}

pub fn load_tables_file(path: impl AsRef<Path>) -> Result<Vec<PmfTable>> {
    load_tables(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ClassLabel, Column, Dataset, FeatureDescriptor, FeatureKind};

    pub(crate) const PROTOCOL_EXAMPLE: [&str; 9] = [
        "TCP", "UDP", "UDP", "UDP", "RTP", "RTP", "ICMP", "TCP", "TCP",
    ];

    #[test]
    fn protocol_example_frequencies() {
        let table = PmfTable::fit("protocol_type", &PROTOCOL_EXAMPLE).unwrap();
        assert_eq!(table.sample_size(), 9);
        assert!((table.frequency("TCP") - 3.0 / 9.0).abs() < 1e-15);
        assert!((table.frequency("UDP") - 3.0 / 9.0).abs() < 1e-15);
        assert!((table.frequency("RTP") - 2.0 / 9.0).abs() < 1e-15);
        assert!((table.frequency("ICMP") - 1.0 / 9.0).abs() < 1e-15);
        // Reported at two decimals: 0.33, 0.33, 0.22, 0.11.
        assert_eq!(format!("{:.2}", table.frequency("TCP")), "0.33");
        assert_eq!(format!("{:.2}", table.frequency("RTP")), "0.22");
        assert_eq!(format!("{:.2}", table.frequency("ICMP")), "0.11");
    }

    #[test]
    fn protocol_example_transform_sequence() {
        let table = PmfTable::fit("protocol_type", &PROTOCOL_EXAMPLE).unwrap();
        let got = table.transform(&PROTOCOL_EXAMPLE);
        let t = 3.0 / 9.0;
        let r = 2.0 / 9.0;
        let i = 1.0 / 9.0;
        assert_eq!(got, vec![t, t, t, t, r, r, i, t, t]);
    }

    #[test]
    fn single_symbol_column_maps_to_one() {
        let table = PmfTable::fit("p", &["x"; 13]).unwrap();
        assert_eq!(table.frequency("x"), 1.0);
        assert_eq!(table.entries().len(), 1);
    }

    #[test]
    fn count_and_divide_oracle() {
        let column: Vec<&str> = std::iter::repeat_n("a", 7).chain(std::iter::repeat_n("b", 3)).collect();
        let table = PmfTable::fit("f", &column).unwrap();
        assert!((table.frequency("a") - 0.7).abs() < 1e-15);
        assert!((table.frequency("b") - 0.3).abs() < 1e-15);
    }

    #[test]
    fn unseen_symbol_maps_to_zero_and_empty_input_to_empty_output() {
        let table = PmfTable::fit("p", &["tcp", "udp"]).unwrap();
        assert_eq!(table.frequency("rtp"), 0.0);
        assert_eq!(table.transform::<&str>(&[]), Vec::<f64>::new());
    }

    #[test]
    fn empty_column_is_an_error() {
        assert!(matches!(
            PmfTable::fit::<&str>("p", &[]),
            Err(Error::EmptyColumn)
        ));
    }

    #[test]
    fn frequencies_sum_to_one_and_counts_are_integral() {
        let column = ["a", "b", "a", "c", "c", "c", "a", "b"];
        let table = PmfTable::fit("f", &column).unwrap();
        let sum: f64 = table
            .entries()
            .iter()
            .map(|e| table.frequency(&e.symbol))
            .sum();
        assert!((sum - 1.0).abs() < 1e-12);
        for e in table.entries() {
            let r = table.frequency(&e.symbol) * table.sample_size() as f64;
            assert!((r - r.round()).abs() < 1e-9);
            assert!(table.frequency(&e.symbol) > 0.0);
        }
    }

    #[test]
    fn dataset_transform_touches_only_nominal_columns() {
        let d = Dataset::new(
            "t",
            vec![
                FeatureDescriptor::numeric("n"),
                FeatureDescriptor::nominal("p", vec!["tcp".into(), "udp".into()]),
            ],
            vec![
                Column::Numeric(vec![5.0, 6.0, 7.0]),
                Column::Nominal(vec![0, 0, 1]),
            ],
            vec![ClassLabel::Normal; 3],
        )
        .unwrap();
        let (out, tables) = fit_transform_dataset(&d);
        assert_eq!(tables.len(), 1);
        assert_eq!(out.numeric_column(0).unwrap(), &[5.0, 6.0, 7.0]);
        let p = out.numeric_column(1).unwrap();
        assert_eq!(p, &[2.0 / 3.0, 2.0 / 3.0, 1.0 / 3.0]);
        assert!(out
            .descriptors()
            .iter()
            .all(|f| f.kind == FeatureKind::Numeric));
    }

    #[test]
    fn all_numeric_dataset_passes_through_unchanged() {
        let d = Dataset::new(
            "t",
            vec![FeatureDescriptor::numeric("n")],
            vec![Column::Numeric(vec![1.0, 2.0])],
            vec![ClassLabel::Normal, ClassLabel::Anomaly],
        )
        .unwrap();
        let (out, tables) = fit_transform_dataset(&d);
        assert_eq!(out, d);
        assert!(tables.is_empty());
    }

    #[test]
    fn test_split_reuses_training_tables() {
        let train = ["tcp", "tcp", "udp", "tcp"];
        let table = PmfTable::fit("p", &train).unwrap();
        let test_dataset = Dataset::new(
            "test",
            vec![FeatureDescriptor::nominal(
                "p",
                vec!["udp".into(), "icmp".into()],
            )],
            vec![Column::Nominal(vec![0, 1])],
            vec![ClassLabel::Normal, ClassLabel::Anomaly],
        )
        .unwrap();
        let out = transform_dataset(&[table], &test_dataset).unwrap();
        assert_eq!(out.numeric_column(0).unwrap(), &[0.25, 0.0]);
    }

    #[test]
    fn missing_table_is_an_error() {
        let d = Dataset::new(
            "t",
            vec![FeatureDescriptor::nominal("p", vec!["tcp".into()])],
            vec![Column::Nominal(vec![0])],
            vec![ClassLabel::Normal],
        )
        .unwrap();
        assert!(matches!(
            transform_dataset(&[], &d),
            Err(Error::MissingTransform(_))
        ));
    }

    fn sym(s: &str) -> Value {
        Value::Symbol(s.to_string())
    }

    #[test]
    fn stream_window_of_nine_reproduces_batch_example() {
        let records: Vec<Vec<Value>> = PROTOCOL_EXAMPLE
            .iter()
            .map(|s| vec![sym(s), Value::Number(42.0)])
            .collect();
        let out: Vec<Vec<f64>> = stream_map(records, 9).collect();
        let table = PmfTable::fit("p", &PROTOCOL_EXAMPLE).unwrap();
        let want: Vec<f64> = table.transform(&PROTOCOL_EXAMPLE);
        assert_eq!(out.len(), 9);
        for (row, expect) in out.iter().zip(want) {
            assert_eq!(row[0], expect);
            assert_eq!(row[1], 42.0);
        }
    }

    #[test]
    fn window_length_one_maps_every_symbol_to_one() {
        let records = vec![
            vec![sym("a")],
            vec![sym("b")],
            vec![sym("c")],
        ];
        let out: Vec<Vec<f64>> = stream_map(records, 1).collect();
        assert_eq!(out, vec![vec![1.0], vec![1.0], vec![1.0]]);
    }

    #[test]
    fn windows_fit_independently() {
        // Two windows with disjoint symbol sets; compare each against a
        // per-window batch fit.
        let w1 = ["a", "a", "b"];
        let w2 = ["c", "d", "d"];
        let records: Vec<Vec<Value>> = w1.iter().chain(&w2).map(|s| vec![sym(s)]).collect();
        let out: Vec<Vec<f64>> = stream_map(records, 3).collect();
        let t1 = PmfTable::fit("f", &w1).unwrap();
        let t2 = PmfTable::fit("f", &w2).unwrap();
        let want: Vec<f64> = t1
            .transform(&w1)
            .into_iter()
            .chain(t2.transform(&w2))
            .collect();
        let got: Vec<f64> = out.into_iter().map(|r| r[0]).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn final_partial_window_uses_its_own_sample_size() {
        let records = vec![vec![sym("a")], vec![sym("a")], vec![sym("b")]];
        let out: Vec<Vec<f64>> = stream_map(records, 2).collect();
        // First window {a,a}: both 1.0. Partial window {b}: M=1 so 1.0.
        assert_eq!(out, vec![vec![1.0], vec![1.0], vec![1.0]]);
    }

    #[test]
    fn tables_round_trip_through_text_format() {
        let t1 = PmfTable::fit("protocol_type", &PROTOCOL_EXAMPLE).unwrap();
        let t2 = PmfTable::fit("service", &["http", "ftp", "http"]).unwrap();
        let mut buf = Vec::new();
        save_tables(&[t1.clone(), t2.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# M=9\n"), "{text}");
        assert!(text.contains("protocol_type\tTCP\t3\t"), "{text}");
        let back = load_tables(buf.as_slice()).unwrap();
        assert_eq!(back, vec![t1, t2]);
    }
}
