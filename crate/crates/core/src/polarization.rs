//! Directional E/I index.
//!
//! For a direction `A -> B` only edges authored by members of `A` count.
//! Edges landing on `B` are external, edges landing on `A` internal; edges to
//! undecided or unlabeled users and self-loops are ignored. Each edge
//! contributes a weight chosen by [`WeightMode`], and the score is
//! `(ext - int) / (ext + int)`. A zero denominator yields an undefined score,
//! never zero.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{InteractionEdge, InteractionGraph};
use crate::stance::Stance;

/// Ordered pair of stance groups: interactions authored by `source` aimed at `target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    pub source: Stance,
    pub target: Stance,
}

impl Direction {
    pub fn new(source: Stance, target: Stance) -> Result<Self> {
        if !source.is_decided() || !target.is_decided() {
            return Err(Error::invalid(format!("direction {source}->{target} references an unknown group")));
        }
        if source == target {
            return Err(Error::invalid(format!("direction {source}->{target} needs two distinct groups")));
        }
        Ok(Direction { source, target })
    }

    pub const PRO_ANTI: Direction = Direction { source: Stance::Pro, target: Stance::Anti };
    pub const ANTI_PRO: Direction = Direction { source: Stance::Anti, target: Stance::Pro };

    pub fn reversed(self) -> Direction {
        Direction { source: self.target, target: self.source }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.source, self.target)
    }
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (a, b) = s
            .split_once("->")
            .ok_or_else(|| Error::invalid(format!("direction {s:?} is not of the form a->b")))?;
        Direction::new(a.parse()?, b.parse()?)
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightMode {
    /// Every interaction weighs 1.
    CountAll,
    /// Weight 1 when the interaction's sentiment is below `-tau`, else 0.
    #[default]
    CountNegative,
    /// Weight `max(0, -sentiment)`.
    SentimentMass,
}

impl WeightMode {
    pub const ALL: [WeightMode; 3] = [WeightMode::CountAll, WeightMode::CountNegative, WeightMode::SentimentMass];

    pub fn weight(self, sentiment: f64, tau: f64) -> f64 {
        match self {
            WeightMode::CountAll => 1.0,
            WeightMode::CountNegative => {
                if sentiment < -tau {
                    1.0
                } else {
                    0.0
                }
            }
            WeightMode::SentimentMass => (-sentiment).max(0.0),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::CountAll => "count_all",
            WeightMode::CountNegative => "count_negative",
            WeightMode::SentimentMass => "sentiment_mass",
        }
    }
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for WeightMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        WeightMode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown weight mode {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizationScore {
    pub direction: Direction,
    /// `None` when no weighted interaction was found.
    pub value: Option<f64>,
    pub ext_weight: f64,
    pub int_weight: f64,
    pub day: Option<NaiveDate>,
    pub weight_mode: WeightMode,
}

impl PolarizationScore {
    fn from_tallies(direction: Direction, ext: f64, int: f64, mode: WeightMode) -> Self {
        let total = ext + int;
        let value = (total > 0.0).then(|| (ext - int) / total);
        PolarizationScore { direction, value, ext_weight: ext, int_weight: int, day: None, weight_mode: mode }
    }

    pub fn is_defined(&self) -> bool {
        self.value.is_some()
    }
}

/// Tallies `(ext, int)` over the given edges for `direction`.
pub fn tally<'a>(
    edges: impl IntoIterator<Item = &'a InteractionEdge>,
    stances: &BTreeMap<String, Stance>,
    direction: Direction,
    mode: WeightMode,
    tau: f64,
) -> (f64, f64) {
    let (mut ext, mut int) = (0.0, 0.0);
    for e in edges {
        if e.is_self_loop() || stances.get(&e.author_id) != Some(&direction.source) {
            continue;
        }
        match stances.get(&e.target_id) {
            Some(s) if *s == direction.target => ext += mode.weight(e.sentiment, tau),
            Some(s) if *s == direction.source => int += mode.weight(e.sentiment, tau),
            _ => {}
        }
    }
    (ext, int)
}

/// Directional E/I index over the whole graph.
pub fn ei_index(
    graph: &InteractionGraph,
    stances: &BTreeMap<String, Stance>,
    direction: Direction,
    mode: WeightMode,
    tau: f64,
) -> Result<PolarizationScore> {
    let direction = Direction::new(direction.source, direction.target)?;
    let authors = stances.iter().filter(|(_, s)| **s == direction.source).map(|(u, _)| u.as_str());
    let edges = authors.flat_map(|u| graph.edges_by_author(u));
    let (ext, int) = tally(edges, stances, direction, mode, tau);
    Ok(PolarizationScore::from_tallies(direction, ext, int, mode))
}

/// Scores for `a -> b` and `b -> a`, computed independently.
pub fn both_directions(
    graph: &InteractionGraph,
    stances: &BTreeMap<String, Stance>,
    pair: (Stance, Stance),
    mode: WeightMode,
    tau: f64,
) -> Result<(PolarizationScore, PolarizationScore)> {
    let forward = Direction::new(pair.0, pair.1)?;
    Ok((ei_index(graph, stances, forward, mode, tau)?, ei_index(graph, stances, forward.reversed(), mode, tau)?))
}

/// One score per calendar day in `[start, end]`, undefined days included.
pub fn daily_timeline(
    graph: &InteractionGraph,
    stances: &BTreeMap<String, Stance>,
    direction: Direction,
    mode: WeightMode,
    tau: f64,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<Vec<PolarizationScore>> {
    if end < start {
        return Err(Error::invalid(format!("date range {start}..{end} is reversed")));
    }
    start
        .iter_days()
        .take_while(|d| *d <= end)
        .map(|day| {
            let mut s = ei_index(&graph.daily_slice(day), stances, direction, mode, tau)?;
            s.day = Some(day);
            Ok(s)
        })
        .collect()
}

pub const TIMELINE_CSV_HEADER: [&str; 6] = ["date", "direction", "value", "ext_weight", "int_weight", "defined"];

pub fn write_timeline(path: &Path, scores: &[PolarizationScore]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(TIMELINE_CSV_HEADER)?;
    for s in scores {
        w.write_record([
            s.day.map(|d| d.to_string()).unwrap_or_default(),
            s.direction.to_string(),
            crate::io::fmt_opt(s.value, 6),
            format!("{:.6}", s.ext_weight),
            format!("{:.6}", s.int_weight),
            s.is_defined().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// A parsed timeline row.
#[derive(Debug, Clone, PartialEq)]
pub struct TimelineRow {
    pub date: NaiveDate,
    pub direction: Direction,
    pub value: Option<f64>,
}

pub fn read_timeline(path: &Path) -> Result<Vec<TimelineRow>> {
    let mut r = crate::io::csv_reader(path)?;
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        let get = |i: usize| row.get(i).ok_or_else(|| Error::invalid("timeline csv: missing column"));
        let defined = get(5)? == "true";
        out.push(TimelineRow {
            date: crate::io::parse_date(get(0)?)?,
            direction: get(1)?.parse()?,
            value: if defined { crate::io::parse_opt(get(2)?)? } else { None },
        });
    }
    Ok(out)
}
