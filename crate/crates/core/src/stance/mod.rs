//! Two-stage user stance labeling.
//!
//! Stage one propagates clamped seed-hashtag values over the user-hashtag
//! bipartite graph and keeps confidently labeled, active users as seeds.
//! Stage two trains a two-layer graph convolutional classifier on the
//! user-user interaction graph from those seeds. Probabilities are always
//! `p = P(anti)`; a [`ThresholdPair`] turns them into labels.

mod features;
mod gcn;
mod propagation;
mod thresholds;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use features::{extract_features, hashed_features, read_embeddings, DEFAULT_FEATURE_DIM};
pub use gcn::{
    gcn_forward, gcn_train, loss_and_gradients, normalize_adjacency, GcnConfig, GcnGradients, GcnModel, Matrix, NormalizedAdjacency,
    TrainingOutcome,
};
pub use propagation::{build_bipartite, propagate, read_seed_hashtags, select_seed_users, BipartiteGraph, Propagation, SeedSelection};
pub use thresholds::{assign_stances, calibrate_thresholds, grid_scores, Calibration, GridPoint, ThresholdPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stance {
    Pro,
    Anti,
    Undecided,
}

impl Stance {
    pub fn is_decided(self) -> bool {
        self != Stance::Undecided
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stance::Pro => "pro",
            Stance::Anti => "anti",
            Stance::Undecided => "undecided",
        }
    }

    /// Clamped propagation value for a seed side.
    pub fn seed_value(self) -> Option<f64> {
        match self {
            Stance::Pro => Some(0.0),
            Stance::Anti => Some(1.0),
            Stance::Undecided => None,
        }
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stance {
    type Err = Error;
    /// Accepts `pro`/`anti`/`undecided` and the `believe`/`disbelieve` aliases.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "pro" | "believe" | "believer" => Ok(Stance::Pro),
            "anti" | "disbelieve" | "disbeliever" => Ok(Stance::Anti),
            "undecided" => Ok(Stance::Undecided),
            other => Err(Error::invalid(format!("unknown stance {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StanceSource {
    Seed,
    Gnn,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StanceAssignment {
    pub user_id: String,
    pub p_anti: f64,
    pub label: Stance,
    pub source: StanceSource,
}

pub const STANCE_CSV_HEADER: [&str; 4] = ["user_id", "p_anti", "label", "source"];

pub fn write_stances(path: &Path, stances: &[StanceAssignment]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(STANCE_CSV_HEADER)?;
    for s in stances {
        let source = match s.source {
            StanceSource::Seed => "seed",
            StanceSource::Gnn => "gnn",
        };
        w.write_record([s.user_id.as_str(), &format!("{:.6}", s.p_anti), s.label.as_str(), source])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_stances(path: &Path) -> Result<Vec<StanceAssignment>> {
    let mut r = crate::io::csv_reader(path)?;
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let field = |i: usize| row.get(i).ok_or_else(|| Error::invalid("stance csv: missing column"));
        out.push(StanceAssignment {
            user_id: field(0)?.to_string(),
            p_anti: field(1)?.parse().map_err(|_| Error::invalid("stance csv: bad p_anti"))?,
            label: field(2)?.parse()?,
            source: match field(3)? {
                "seed" => StanceSource::Seed,
                "gnn" => StanceSource::Gnn,
                other => return Err(Error::invalid(format!("stance csv: unknown source {other:?}"))),
            },
        });
    }
    Ok(out)
}

/// `user_id -> label` lookup.
pub fn stance_map(stances: &[StanceAssignment]) -> BTreeMap<String, Stance> {
    stances.iter().map(|s| (s.user_id.clone(), s.label)).collect()
}

/// Reads a `user_id,<stance>` CSV such as a ground-truth or reference label file.
pub fn read_label_file(path: &Path) -> Result<BTreeMap<String, Stance>> {
    let mut r = crate::io::csv_reader(path)?;
    let mut out = BTreeMap::new();
    for row in r.records() {
        let row = row?;
        let (Some(u), Some(s)) = (row.get(0), row.get(1)) else {
            return Err(Error::invalid("label file rows need user_id and stance"));
        };
        out.insert(u.to_string(), s.parse()?);
    }
    Ok(out)
}
