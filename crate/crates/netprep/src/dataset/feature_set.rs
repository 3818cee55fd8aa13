//! Named feature sets, including the MVF and MVRF presets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The 11 Most Valuable Features.
///
/// Names are kept as published, including "error_rate", which does not
/// match the canonical NSL-KDD serror_rate/rerror_rate spellings; a
/// schema using different names must be renamed or projected with a
/// custom set instead.
pub const MVF_FEATURES: [&str; 11] = [
    "service",
    "src_bytes",
    "dst_host_serror_rate",
    "error_rate",
    "dst_host_srv_diff_host_rate",
    "protocol_type",
    "rerror_rate",
    "srv_rerror_rate",
    "wrong_fragment",
    "num_compromised",
    "num_access_files",
];

/// The 19 Most Valuable and Relevant Features. A superset of
/// [`MVF_FEATURES`].
pub const MVRF_FEATURES: [&str; 19] = [
    "service",
    "src_bytes",
    "diff_srv_rate",
    "same_srv_rate",
    "dst_host_srv_count",
    "logged_in",
    "dst_host_serror_rate",
    "error_rate",
    "srv_serror_rate",
    "dst_host_srv_diff_host_rate",
    "protocol_type",
    "rerror_rate",
    "srv_rerror_rate",
    "hot",
    "wrong_fragment",
    "num_compromised",
    "num_access_files",
    "root_shell",
    "num_failed_logins",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FeatureSetName {
    Mvf,
    Mvrf,
    Custom,
}

impl FeatureSetName {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeatureSetName::Mvf => "MVF",
            FeatureSetName::Mvrf => "MVRF",
            FeatureSetName::Custom => "Custom",
        }
    }
}

/// An ordered list of unique feature names to select.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureSet {
    name: FeatureSetName,
    members: Vec<String>,
}

impl FeatureSet {
    /// The MVF preset (11 features).
    pub fn mvf() -> FeatureSet {
        FeatureSet {
            name: FeatureSetName::Mvf,
            members: MVF_FEATURES.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// The MVRF preset (19 features).
    pub fn mvrf() -> FeatureSet {
        FeatureSet {
            name: FeatureSetName::Mvrf,
            members: MVRF_FEATURES.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// A user-supplied set. Member names must be unique.
    pub fn custom(members: Vec<String>) -> Result<FeatureSet> {
        let mut seen = std::collections::HashSet::new();
        for m in &members {
            if !seen.insert(m.clone()) {
                return Err(Error::InvalidDataset(format!(
                    "duplicate member {m:?} in feature set"
                )));
            }
        }
        Ok(FeatureSet {
            name: FeatureSetName::Custom,
            members,
        })
    }

    pub fn name(&self) -> FeatureSetName {
        self.name
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
