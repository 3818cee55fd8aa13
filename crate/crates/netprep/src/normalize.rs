//! Numeric normalization and the hybrid pipeline.
//!
//! Three per-column methods are supported:
//! - decimal scaling: v / 10^e with e the smallest exponent bringing the
//!   column's maximum magnitude into [-1, 1]
//! - min-max: (v - min) / (max - min), clamped to [0, 1] at apply time
//! - statistical: (v - mu) / sigma with the N-1 sample deviation; the
//!   formula is kept as written even though its outputs are unbounded
//!
//! The hybrid pipeline isolates nominal columns, maps them with
//! [`crate::pmf`], normalizes the numeric columns with one of the
//! methods above, and rejoins everything in the original column order.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{Column, Dataset, FeatureKind};
use crate::error::{Error, Result};
use crate::pmf::{self, PmfTable};
use crate::stats::mean_std;

/// Numeric normalization method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormMethod {
    Decimal,
    MinMax,
    Statistical,
}

impl NormMethod {
    /// Dataset-name suffix used by the variant grammar (DN / MN / SN).
    pub fn suffix(&self) -> &'static str {
        match self {
            NormMethod::Decimal => "DN",
            NormMethod::MinMax => "MN",
            NormMethod::Statistical => "SN",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            NormMethod::Decimal => "decimal",
            NormMethod::MinMax => "minmax",
            NormMethod::Statistical => "statistical",
        }
    }

    pub fn parse(s: &str) -> Option<NormMethod> {
        match s.to_ascii_lowercase().as_str() {
            "decimal" | "dn" | "d" => Some(NormMethod::Decimal),
            "minmax" | "mn" | "m" => Some(NormMethod::MinMax),
            "statistical" | "sn" | "s" => Some(NormMethod::Statistical),
            _ => None,
        }
    }
}

/// Fitted per-feature parameters for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizerParams {
    pub feature: String,
    pub kind: NormKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    /// v / 10^e.
    Decimal { e: u32 },
    /// (v - min) / (max - min), clamped into [0, 1].
    MinMax { min: f64, max: f64 },
    /// (v - mu) / sigma; constant columns have sigma = 0 and map to 0.
    Statistical { mu: f64, sigma: f64 },
}

impl NormalizerParams {
    pub fn method(&self) -> NormMethod {
        match self.kind {
            NormKind::Decimal { .. } => NormMethod::Decimal,
            NormKind::MinMax { .. } => NormMethod::MinMax,
            NormKind::Statistical { .. } => NormMethod::Statistical,
        }
    }
}

/// Smallest nonnegative e with max|v| / 10^e <= 1.
pub fn fit_decimal(feature: &str, column: &[f64]) -> Result<NormalizerParams> {
    if column.is_empty() {
        return Err(Error::EmptyColumn);
    }
    let max_abs = column.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut e = 0u32;
    while max_abs / 10f64.powi(e as i32) > 1.0 {
        e += 1;
    }
    Ok(NormalizerParams {
        feature: feature.to_string(),
        kind: NormKind::Decimal { e },
    })
}

pub fn fit_minmax(feature: &str, column: &[f64]) -> Result<NormalizerParams> {
    if column.is_empty() {
        return Err(Error::EmptyColumn);
    }
    let min = column.iter().copied().fold(f64::INFINITY, f64::min);
    let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(NormalizerParams {
        feature: feature.to_string(),
        kind: NormKind::MinMax { min, max },
    })
}

pub fn fit_statistical(feature: &str, column: &[f64]) -> Result<NormalizerParams> {
    if column.is_empty() {
        return Err(Error::EmptyColumn);
    }
    let (mu, sigma) = mean_std(column);
    Ok(NormalizerParams {
        feature: feature.to_string(),
        kind: NormKind::Statistical { mu, sigma },
    })
}

pub fn fit(method: NormMethod, feature: &str, column: &[f64]) -> Result<NormalizerParams> {
    match method {
        NormMethod::Decimal => fit_decimal(feature, column),
        NormMethod::MinMax => fit_minmax(feature, column),
        NormMethod::Statistical => fit_statistical(feature, column),
    }
}

/// Normalize a column with fitted parameters. Deterministic for any
/// input: min-max clamps out-of-range values, a constant min-max column
/// maps to 0, and a zero-sigma statistical column maps to 0.
pub fn apply(params: &NormalizerParams, column: &[f64]) -> Vec<f64> {
    match params.kind {
        NormKind::Decimal { e } => {
            let scale = 10f64.powi(e as i32);
            column.iter().map(|v| v / scale).collect()
        }
        NormKind::MinMax { min, max } => column
            .iter()
            .map(|&v| {
                if max == min {
                    0.0
                } else {
                    ((v - min) / (max - min)).clamp(0.0, 1.0)
                }
            })
            .collect(),
        NormKind::Statistical { mu, sigma } => column
            .iter()
            .map(|&v| if sigma == 0.0 { 0.0 } else { (v - mu) / sigma })
            .collect(),
    }
}

/// PMF-map the nominal columns, fit-and-apply `numeric_method` to the
/// numeric columns, and rejoin in the original column order. The fitted
/// tables and parameters allow applying the identical transform to a
/// test split via [`apply_fitted`].
pub fn hybrid_normalize(
    dataset: &Dataset,
    numeric_method: NormMethod,
) -> Result<(Dataset, Vec<PmfTable>, Vec<NormalizerParams>)> {
    let split = dataset.split_by_kind();
    let (mapped_nominal, tables) = pmf::fit_transform_dataset(&split.nominal);

    let mut params = Vec::with_capacity(split.numeric.n_features());
    let mut columns = Vec::with_capacity(split.numeric.n_features());
    for (desc, col) in split.numeric.descriptors().iter().zip(split.numeric.columns()) {
        let vals = match col {
            Column::Numeric(v) => v,
            Column::Nominal(_) => unreachable!("numeric part holds numeric columns"),
        };
        let p = if vals.is_empty() {
            // 0-row dataset: degenerate parameters, nothing to scale.
            NormalizerParams {
                feature: desc.name.clone(),
                kind: match numeric_method {
                    NormMethod::Decimal => NormKind::Decimal { e: 0 },
                    NormMethod::MinMax => NormKind::MinMax { min: 0.0, max: 0.0 },
                    NormMethod::Statistical => NormKind::Statistical { mu: 0.0, sigma: 0.0 },
                },
            }
        } else {
            fit(numeric_method, &desc.name, vals)?
        };
        columns.push(Column::Numeric(apply(&p, vals)));
        params.push(p);
    }
    let normalized_numeric = Dataset::new(
        split.numeric.name().to_owned(),
        split.numeric.descriptors().to_vec(),
        columns,
        split.numeric.labels().to_vec(),
    )?;

    let joined = split.rejoin_with(&mapped_nominal, &normalized_numeric)?;
    Ok((joined, tables, params))
}

/// Apply training-fitted PMF tables and normalizer parameters to another
/// dataset. Every nominal feature needs a table and every numeric feature
/// needs parameters, matched by name.
pub fn apply_fitted(
    tables: &[PmfTable],
    params: &[NormalizerParams],
    dataset: &Dataset,
) -> Result<Dataset> {
    let by_name: HashMap<&str, &NormalizerParams> =
        params.iter().map(|p| (p.feature.as_str(), p)).collect();
    // Nominal columns first; numeric columns then looked up by name.
    let mapped = pmf::transform_dataset(tables, dataset)?;
    let mut columns = Vec::with_capacity(mapped.n_features());
    for (desc, col) in mapped.descriptors().iter().zip(mapped.columns()) {
        let original_kind = dataset.descriptor(desc.index).kind;
        let vals = match col {
            Column::Numeric(v) => v,
            Column::Nominal(_) => unreachable!("pmf output is numeric"),
        };
        if original_kind == FeatureKind::Nominal {
            // Already PMF-mapped; the hybrid approach does not re-scale it.
            columns.push(Column::Numeric(vals.clone()));
        } else {
            let p = by_name
                .get(desc.name.as_str())
                .ok_or_else(|| Error::MissingTransform(desc.name.clone()))?;
            columns.push(Column::Numeric(apply(p, vals)));
        }
    }
    Dataset::new(
        dataset.name().to_owned(),
        mapped.descriptors().to_vec(),
        columns,
        dataset.labels().to_vec(),
    )
}

/// Persist parameters as text lines "feature<TAB>method<TAB>k=v,...",
/// with values rendered so reloading reproduces them bit-exactly.
pub fn save_params<W: Write>(params: &[NormalizerParams], mut sink: W) -> Result<()> {
    for p in params {
        match p.kind {
            NormKind::Decimal { e } => {
                writeln!(sink, "{}\tdecimal\te={}", p.feature, e)?;
            }
            NormKind::MinMax { min, max } => {
                writeln!(sink, "{}\tminmax\tmin={},max={}", p.feature, min, max)?;
            }
            NormKind::Statistical { mu, sigma } => {
                writeln!(sink, "{}\tstatistical\tmu={},sigma={}", p.feature, mu, sigma)?;
            }
        }
    }
    sink.flush()?;
    Ok(())
}

pub fn load_params<R: Read>(source: R) -> Result<Vec<NormalizerParams>> {
    let reader = BufReader::new(source);
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim_end();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split('\t').collect();
        if parts.len() != 3 {
            return Err(Error::parse(lineno, "expected 3 tab-separated fields"));
        }
        let mut kv = HashMap::new();
        for pair in parts[2].split(',') {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, format!("bad parameter {pair:?}")))?;
            kv.insert(k, v);
        }
        let get = |k: &str| -> Result<f64> {
            kv.get(k)
                .ok_or_else(|| Error::parse(lineno, format!("missing parameter {k:?}")))?
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad value for {k:?}")))
        };
        let kind = match parts[1] {
            "decimal" => NormKind::Decimal {
                e: get("e")? as u32,
            },
            "minmax" => NormKind::MinMax {
                min: get("min")?,
                max: get("max")?,
            },
            "statistical" => NormKind::Statistical {
                mu: get("mu")?,
                sigma: get("sigma")?,
            },
            other => {
                return Err(Error::parse(lineno, format!("unknown method {other:?}")));
            }
        };
        out.push(NormalizerParams {
            feature: parts[0].to_string(),
            kind,
        });
    }
    Ok(out)
}

pub fn save_params_file(params: &[NormalizerParams], path: impl AsRef<Path>) -> Result<()> {
    save_params(params, BufWriter::new(File::create(path)?))
}

pub fn load_params_file(path: impl AsRef<Path>) -> Result<Vec<NormalizerParams>> {
    load_params(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ClassLabel, Column, Dataset, FeatureDescriptor};

    fn decimal_e(column: &[f64]) -> u32 {
        match fit_decimal("f", column).unwrap().kind {
            NormKind::Decimal { e } => e,
            _ => unreachable!(),
        }
    }

    #[test]
    fn decimal_exponent_boundaries() {
        assert_eq!(decimal_e(&[999.0, 1.0]), 3);
        assert_eq!(decimal_e(&[0.5, -1.0, 0.25]), 0);
        assert_eq!(decimal_e(&[1000.0]), 3);
        assert_eq!(decimal_e(&[0.0]), 0);
        assert_eq!(decimal_e(&[-250.0]), 3);
    }

    #[test]
    fn decimal_apply_divides_by_power_of_ten() {
        let p = fit_decimal("f", &[999.0, 250.0]).unwrap();
        assert_eq!(apply(&p, &[250.0]), vec![0.25]);
    }

    #[test]
    fn minmax_records_extrema_and_maps_endpoints() {
        let p = fit_minmax("f", &[2.0, 4.0, 6.0]).unwrap();
        assert_eq!(
            p.kind,
            NormKind::MinMax {
                min: 2.0,
                max: 6.0
            }
        );
        assert_eq!(apply(&p, &[2.0, 4.0, 6.0]), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn minmax_constant_column_maps_to_zero_and_clamps_out_of_range() {
        let constant = fit_minmax("f", &[5.0, 5.0]).unwrap();
        assert_eq!(apply(&constant, &[5.0, 7.0]), vec![0.0, 0.0]);
        let p = fit_minmax("f", &[0.0, 10.0]).unwrap();
        assert_eq!(apply(&p, &[-5.0, 15.0]), vec![0.0, 1.0]);
    }

    #[test]
    fn statistical_hand_example() {
        let p = fit_statistical("f", &[1.0, 2.0, 3.0]).unwrap();
        match p.kind {
            NormKind::Statistical { mu, sigma } => {
                assert!((mu - 2.0).abs() < 1e-15);
                assert!((sigma - 1.0).abs() < 1e-15);
            }
            _ => unreachable!(),
        }
        let out = apply(&p, &[1.0, 2.0, 3.0]);
        for (got, want) in out.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn statistical_constant_column_maps_to_zero() {
        let p = fit_statistical("f", &[4.0, 4.0, 4.0]).unwrap();
        assert_eq!(apply(&p, &[4.0, 9.0]), vec![0.0, 0.0]);
    }

    #[test]
    fn statistical_matches_two_pass_oracle() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let column: Vec<f64> = (0..100).map(|_| rng.random_range(-1e3..1e3)).collect();
        let p = fit_statistical("f", &column).unwrap();
        // Independent two-pass route.
        let mean: f64 = column.iter().sum::<f64>() / column.len() as f64;
        let var: f64 =
            column.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (column.len() - 1) as f64;
        match p.kind {
            NormKind::Statistical { mu, sigma } => {
                assert!((mu - mean).abs() <= 1e-12 * mean.abs().max(1.0));
                assert!((sigma - var.sqrt()).abs() <= 1e-12 * var.sqrt().max(1.0));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn empty_column_is_an_error_for_all_fits() {
        for m in [NormMethod::Decimal, NormMethod::MinMax, NormMethod::Statistical] {
            assert!(matches!(fit(m, "f", &[]), Err(Error::EmptyColumn)));
        }
    }

    fn mixed_dataset() -> Dataset {
        Dataset::new(
            "mixed",
            vec![
                FeatureDescriptor::nominal("p", vec!["tcp".into(), "udp".into()]),
                FeatureDescriptor::numeric("bytes"),
            ],
            vec![
                Column::Nominal(vec![0, 0, 1, 0]),
                Column::Numeric(vec![0.0, 100.0, 50.0, 25.0]),
            ],
            vec![
                ClassLabel::Normal,
                ClassLabel::Anomaly,
                ClassLabel::Normal,
                ClassLabel::Anomaly,
            ],
        )
        .unwrap()
    }

    #[test]
    fn hybrid_preserves_column_order_and_scales_training_data() {
        let d = mixed_dataset();
        let (out, tables, params) = hybrid_normalize(&d, NormMethod::MinMax).unwrap();
        assert_eq!(out.descriptor(0).name, "p");
        assert_eq!(out.descriptor(1).name, "bytes");
        assert!(out.descriptors().iter().all(|f| f.kind == FeatureKind::Numeric));
        assert_eq!(tables.len(), 1);
        assert_eq!(params.len(), 1);
        assert_eq!(out.numeric_column(0).unwrap(), &[0.75, 0.75, 0.25, 0.75]);
        assert_eq!(out.numeric_column(1).unwrap(), &[0.0, 1.0, 0.5, 0.25]);
    }

    #[test]
    fn all_nominal_dataset_equals_plain_pmf_output() {
        let d = Dataset::new(
            "n",
            vec![FeatureDescriptor::nominal("p", vec!["a".into(), "b".into()])],
            vec![Column::Nominal(vec![0, 1, 1])],
            vec![ClassLabel::Normal; 3],
        )
        .unwrap();
        let (out, tables, params) = hybrid_normalize(&d, NormMethod::Decimal).unwrap();
        let (want, want_tables) = pmf::fit_transform_dataset(&d);
        assert_eq!(out, want);
        assert_eq!(tables, want_tables);
        assert!(params.is_empty());
    }

    #[test]
    fn apply_fitted_on_training_data_matches_hybrid_output() {
        let d = mixed_dataset();
        for m in [NormMethod::Decimal, NormMethod::MinMax, NormMethod::Statistical] {
            let (out, tables, params) = hybrid_normalize(&d, m).unwrap();
            let reapplied = apply_fitted(&tables, &params, &d).unwrap();
            assert_eq!(reapplied, out);
        }
    }

    #[test]
    fn apply_fitted_handles_test_policies() {
        let d = mixed_dataset();
        let (_, tables, params) = hybrid_normalize(&d, NormMethod::MinMax).unwrap();
        let test = Dataset::new(
            "test",
            vec![
                FeatureDescriptor::nominal("p", vec!["icmp".into()]),
                FeatureDescriptor::numeric("bytes"),
            ],
            vec![Column::Nominal(vec![0]), Column::Numeric(vec![500.0])],
            vec![ClassLabel::Anomaly],
        )
        .unwrap();
        let out = apply_fitted(&tables, &params, &test).unwrap();
        assert_eq!(out.numeric_column(0).unwrap(), &[0.0]); // unseen symbol
        assert_eq!(out.numeric_column(1).unwrap(), &[1.0]); // clamped above max
    }

    #[test]
    fn apply_fitted_requires_params_for_every_numeric_feature() {
        let d = mixed_dataset();
        let (_, tables, _) = hybrid_normalize(&d, NormMethod::MinMax).unwrap();
        assert!(matches!(
            apply_fitted(&tables, &[], &d),
            Err(Error::MissingTransform(_))
        ));
    }

    #[test]
    fn params_round_trip_through_text_format() {
        let params = vec![
            NormalizerParams {
                feature: "a".into(),
                kind: NormKind::Decimal { e: 3 },
            },
            NormalizerParams {
                feature: "b".into(),
                kind: NormKind::MinMax {
                    min: -1.25,
                    max: 1e9,
                },
            },
            NormalizerParams {
                feature: "c".into(),
                kind: NormKind::Statistical {
                    mu: 0.1 + 0.2,
                    sigma: 1.0 / 3.0,
                },
            },
        ];
        let mut buf = Vec::new();
        save_params(&params, &mut buf).unwrap();
        let back = load_params(buf.as_slice()).unwrap();
        assert_eq!(back, params);
    }
}
