//! With/without conversation effects and their aggregate summaries.
//!
//! The effect of a conversation is `delta = score_with - score_without`, so a
//! positive delta means the conversation's presence raises polarization.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::corpus::{Conversation, InfluencerRecord};
use crate::error::{Error, Result};
use crate::graph::{InteractionGraph, RemovalMode};
use crate::io::{fmt_opt, parse_opt};
use crate::polarization::{ei_index, Direction, WeightMode};
use crate::stance::Stance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// The influencer-centred subgraph.
    #[default]
    Subgraph,
    /// The whole graph restricted to the conversation's root day.
    Daily,
}

impl FromStr for Scope {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "subgraph" => Ok(Scope::Subgraph),
            "daily" => Ok(Scope::Daily),
            _ => Err(Error::invalid(format!("unknown scope {s:?} (subgraph|daily)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Increase,
    Decrease,
    NoChange,
    Undefined,
}

impl Classification {
    pub fn of(delta: Option<f64>) -> Self {
        match delta {
            None => Classification::Undefined,
            Some(d) if d > 0.0 => Classification::Increase,
            Some(d) if d < 0.0 => Classification::Decrease,
            Some(_) => Classification::NoChange,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Increase => "increase",
            Classification::Decrease => "decrease",
            Classification::NoChange => "no_change",
            Classification::Undefined => "undefined",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Classification {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [Classification::Increase, Classification::Decrease, Classification::NoChange, Classification::Undefined]
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown classification {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterfactualResult {
    pub conversation_id: String,
    pub influencer_id: String,
    pub influencer_stance: Stance,
    pub direction: Direction,
    pub day: NaiveDate,
    pub score_with: Option<f64>,
    pub score_without: Option<f64>,
    pub delta: Option<f64>,
    pub classification: Classification,
    /// Set when the influencer has no decided stance.
    pub undecided_influencer: bool,
    /// Size of the audience used for the subgraph.
    pub audience_size: usize,
    /// Whether the audience came from a follower list rather than interaction neighbours.
    pub audience_from_followers: bool,
}

/// `(delta, classification)` for a pair of scores.
pub fn compare(score_with: Option<f64>, score_without: Option<f64>) -> (Option<f64>, Classification) {
    let delta = score_with.zip(score_without).map(|(w, wo)| w - wo);
    (delta, Classification::of(delta))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectSettings {
    pub scope: Scope,
    pub removal_mode: RemovalMode,
    pub weight_mode: WeightMode,
    pub tau: f64,
}

impl Default for EffectSettings {
    fn default() -> Self {
        EffectSettings {
            scope: Scope::Subgraph,
            removal_mode: RemovalMode::Edges,
            weight_mode: WeightMode::CountNegative,
            tau: crate::sentiment::DEFAULT_TAU,
        }
    }
}

/// Follower lists keyed by influencer id.
pub type Followers = BTreeMap<String, BTreeSet<String>>;

fn base_graph(
    graph: &InteractionGraph,
    conversation: &Conversation,
    influencer: &str,
    scope: Scope,
    followers: Option<&BTreeSet<String>>,
) -> Result<InteractionGraph> {
    match scope {
        Scope::Subgraph => graph.influencer_subgraph(influencer, followers),
        Scope::Daily => Ok(graph.daily_slice(conversation.started_at.date_naive())),
    }
}

fn audience(graph: &InteractionGraph, influencer: &str, followers: Option<&BTreeSet<String>>) -> usize {
    match followers {
        Some(f) => f.iter().filter(|u| graph.contains_node(u)).count(),
        None => graph.interaction_neighbors(influencer).len(),
    }
}

/// Effect of one conversation on one direction.
pub fn conversation_effect(
    graph: &InteractionGraph,
    stances: &BTreeMap<String, Stance>,
    conversation: &Conversation,
    influencer: &str,
    direction: Direction,
    settings: &EffectSettings,
    followers: Option<&BTreeSet<String>>,
) -> Result<CounterfactualResult> {
    if conversation.initiator_id != influencer {
        return Err(Error::invalid(format!(
            "conversation {} was started by {}, not {influencer}",
            conversation.conversation_id, conversation.initiator_id
        )));
    }
    if !graph.knows_conversation(&conversation.conversation_id) {
        return Err(Error::NotFound(format!("conversation {} not in graph", conversation.conversation_id)));
    }
    let base = base_graph(graph, conversation, influencer, settings.scope, followers)?;
    effect_on(&base, graph, stances, conversation, direction, settings, followers)
}

fn effect_on(
    base: &InteractionGraph,
    full: &InteractionGraph,
    stances: &BTreeMap<String, Stance>,
    conversation: &Conversation,
    direction: Direction,
    settings: &EffectSettings,
    followers: Option<&BTreeSet<String>>,
) -> Result<CounterfactualResult> {
    let without = base.remove_conversation(&conversation.conversation_id, settings.removal_mode);
    let score_with = ei_index(base, stances, direction, settings.weight_mode, settings.tau)?.value;
    let score_without = ei_index(&without, stances, direction, settings.weight_mode, settings.tau)?.value;
    let (delta, classification) = compare(score_with, score_without);
    let influencer = conversation.initiator_id.as_str();
    let influencer_stance = stances.get(influencer).copied().unwrap_or(Stance::Undecided);
    if !influencer_stance.is_decided() {
        log::warn!("influencer {influencer} has no decided stance");
    }
    Ok(CounterfactualResult {
        conversation_id: conversation.conversation_id.clone(),
        influencer_id: influencer.to_string(),
        influencer_stance,
        direction,
        day: conversation.started_at.date_naive(),
        score_with,
        score_without,
        delta,
        classification,
        undecided_influencer: !influencer_stance.is_decided(),
        audience_size: audience(full, influencer, followers),
        audience_from_followers: followers.is_some(),
    })
}

/// A work item that could not be evaluated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchFailure {
    pub conversation_id: String,
    pub message: String,
}

/// Effects of every conversation started by a ranked influencer.
///
/// Results are ordered by `(influencer rank, conversation id, direction)`.
/// Per-item failures are collected instead of aborting the batch.
pub fn batch_effects(
    graph: &InteractionGraph,
    stances: &BTreeMap<String, Stance>,
    conversations: &[Conversation],
    influencers: &[InfluencerRecord],
    directions: &[Direction],
    settings: &EffectSettings,
    followers: Option<&Followers>,
) -> (Vec<CounterfactualResult>, Vec<BatchFailure>) {
    let rank: BTreeMap<&str, usize> = influencers.iter().map(|r| (r.user_id.as_str(), r.rank)).collect();
    let mut work: Vec<(usize, &Conversation)> = conversations
        .iter()
        .filter_map(|c| rank.get(c.initiator_id.as_str()).map(|&r| (r, c)))
        .collect();
    work.sort_by(|a, b| (a.0, &a.1.conversation_id).cmp(&(b.0, &b.1.conversation_id)));
    let mut dirs = directions.to_vec();
    dirs.sort();
    dirs.dedup();

    let mut cache: BTreeMap<(String, Option<NaiveDate>), std::result::Result<InteractionGraph, String>> = BTreeMap::new();
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for (_, conv) in work {
        let inf = conv.initiator_id.as_str();
        let own_followers = followers.and_then(|f| f.get(inf));
        if !graph.knows_conversation(&conv.conversation_id) {
            failures.push(BatchFailure {
                conversation_id: conv.conversation_id.clone(),
                message: format!("conversation {} not in graph", conv.conversation_id),
            });
            continue;
        }
        let key = match settings.scope {
            Scope::Subgraph => (inf.to_string(), None),
            Scope::Daily => (String::new(), Some(conv.started_at.date_naive())),
        };
        let base = cache
            .entry(key)
            .or_insert_with(|| base_graph(graph, conv, inf, settings.scope, own_followers).map_err(|e| e.to_string()));
        let base = match base {
            Ok(b) => b,
            Err(message) => {
                failures.push(BatchFailure { conversation_id: conv.conversation_id.clone(), message: message.clone() });
                continue;
            }
        };
        for &d in &dirs {
            match effect_on(base, graph, stances, conv, d, settings, own_followers) {
                Ok(r) => results.push(r),
                Err(e) => failures.push(BatchFailure { conversation_id: conv.conversation_id.clone(), message: e.to_string() }),
            }
        }
    }
    (results, failures)
}

/// Outcome shares for one direction, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OutcomeShares {
    pub n: usize,
    pub percent_increase: f64,
    pub percent_decrease: f64,
    pub percent_no_change_or_undefined: f64,
}

impl OutcomeShares {
    fn tally<'a>(results: impl IntoIterator<Item = &'a CounterfactualResult>) -> Self {
        let (mut n, mut inc, mut dec) = (0usize, 0usize, 0usize);
        for r in results {
            n += 1;
            match r.classification {
                Classification::Increase => inc += 1,
                Classification::Decrease => dec += 1,
                _ => {}
            }
        }
        let pct = |k: usize| if n == 0 { 0.0 } else { 100.0 * k as f64 / n as f64 };
        OutcomeShares { n, percent_increase: pct(inc), percent_decrease: pct(dec), percent_no_change_or_undefined: pct(n - inc - dec) }
    }

    /// The dominant of increase/decrease with its share. Ties go to increase.
    pub fn majority(&self) -> (f64, Classification) {
        if self.percent_increase >= self.percent_decrease {
            (self.percent_increase, Classification::Increase)
        } else {
            (self.percent_decrease, Classification::Decrease)
        }
    }
}

/// Renders a share: a full `100` as `100.0%`, anything else with two decimals.
pub fn format_share(percent: f64) -> String {
    if percent == 100.0 {
        "100.0%".to_string()
    } else {
        format!("{percent:.2}%")
    }
}

/// `"61.11% - increase"` style cell for per-influencer tables.
pub fn format_influencer_cell(shares: &OutcomeShares) -> String {
    let (p, c) = shares.majority();
    format!("{} - {c}", format_share(p))
}

/// `"63.40% - decrease"` style cell for per-stance tables; always two decimals.
pub fn format_group_cell(shares: &OutcomeShares) -> String {
    let (p, c) = shares.majority();
    format!("{p:.2}% - {c}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfluencerImpactSummary {
    pub influencer_id: String,
    pub stance: Stance,
    pub n_conversations: usize,
    pub per_direction: BTreeMap<Direction, OutcomeShares>,
}

/// Per-influencer outcome shares, in order of first appearance in `results`.
pub fn summarize_influencer(results: &[CounterfactualResult]) -> Vec<InfluencerImpactSummary> {
    let mut order: Vec<&str> = Vec::new();
    let mut groups: BTreeMap<&str, Vec<&CounterfactualResult>> = BTreeMap::new();
    for r in results {
        let g = groups.entry(&r.influencer_id).or_default();
        if g.is_empty() {
            order.push(&r.influencer_id);
        }
        g.push(r);
    }
    order
        .into_iter()
        .map(|id| {
            let rs = &groups[id];
            InfluencerImpactSummary {
                influencer_id: id.to_string(),
                stance: rs[0].influencer_stance,
                n_conversations: rs.iter().map(|r| r.conversation_id.as_str()).collect::<BTreeSet<_>>().len(),
                per_direction: by_direction(rs),
            }
        })
        .collect()
}

fn by_direction(results: &[&CounterfactualResult]) -> BTreeMap<Direction, OutcomeShares> {
    let mut dirs: BTreeMap<Direction, Vec<&CounterfactualResult>> = BTreeMap::new();
    for r in results {
        dirs.entry(r.direction).or_default().push(r);
    }
    dirs.into_iter().map(|(d, rs)| (d, OutcomeShares::tally(rs))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StanceGroupSummary {
    pub stance: Stance,
    pub n_conversations: usize,
    pub per_direction: BTreeMap<Direction, OutcomeShares>,
}

/// Outcome shares grouped by the stance of each conversation's initiator.
///
/// When `stances` is given it overrides the stance recorded in each result.
pub fn summarize_stance_group(
    results: &[CounterfactualResult],
    stances: Option<&BTreeMap<String, Stance>>,
) -> Vec<StanceGroupSummary> {
    let mut groups: BTreeMap<Stance, Vec<&CounterfactualResult>> = BTreeMap::new();
    for r in results {
        let s = stances
            .map(|m| m.get(&r.influencer_id).copied().unwrap_or(Stance::Undecided))
            .unwrap_or(r.influencer_stance);
        groups.entry(s).or_default().push(r);
    }
    groups
        .into_iter()
        .map(|(stance, rs)| StanceGroupSummary {
            stance,
            n_conversations: rs.iter().map(|r| r.conversation_id.as_str()).collect::<BTreeSet<_>>().len(),
            per_direction: by_direction(&rs),
        })
        .collect()
}

pub const RESULTS_CSV_HEADER: [&str; 9] = [
    "conversation_id",
    "influencer_id",
    "stance",
    "direction",
    "day",
    "score_with",
    "score_without",
    "delta",
    "classification",
];

pub fn write_results(path: &Path, results: &[CounterfactualResult]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(RESULTS_CSV_HEADER)?;
    for r in results {
        w.write_record([
            r.conversation_id.clone(),
            r.influencer_id.clone(),
            r.influencer_stance.to_string(),
            r.direction.to_string(),
            r.day.to_string(),
            fmt_opt(r.score_with, 3),
            fmt_opt(r.score_without, 3),
            fmt_opt(r.delta, 3),
            r.classification.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a results CSV. Audience fields are not part of the file and come back empty.
pub fn read_results(path: &Path) -> Result<Vec<CounterfactualResult>> {
    let mut r = crate::io::csv_reader(path)?;
    let mut out = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        if row.len() != RESULTS_CSV_HEADER.len() {
            return Err(Error::Malformed { line: i + 2, message: format!("expected 9 columns, found {}", row.len()) });
        }
        let stance: Stance = row[2].parse()?;
        out.push(CounterfactualResult {
            conversation_id: row[0].to_string(),
            influencer_id: row[1].to_string(),
            influencer_stance: stance,
            direction: row[3].parse()?,
            day: crate::io::parse_date(&row[4])?,
            score_with: parse_opt(&row[5])?,
            score_without: parse_opt(&row[6])?,
            delta: parse_opt(&row[7])?,
            classification: row[8].parse()?,
            undecided_influencer: !stance.is_decided(),
            audience_size: 0,
            audience_from_followers: false,
        });
    }
    Ok(out)
}

pub const DETAILS_CSV_HEADER: [&str; 6] =
    ["conversation_id", "influencer_id", "day", "audience_size", "audience_source", "undecided_influencer"];

/// One row per conversation: audience size and where the audience came from.
pub fn write_details(path: &Path, results: &[CounterfactualResult]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(DETAILS_CSV_HEADER)?;
    let mut seen = BTreeSet::new();
    for r in results.iter().filter(|r| seen.insert(r.conversation_id.as_str())) {
        w.write_record([
            r.conversation_id.clone(),
            r.influencer_id.clone(),
            r.day.to_string(),
            r.audience_size.to_string(),
            if r.audience_from_followers { "followers" } else { "interaction_neighbors" }.to_string(),
            r.undecided_influencer.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub const INFLUENCER_SUMMARY_HEADER: [&str; 8] = [
    "influencer_id",
    "stance",
    "n_conversations",
    "direction",
    "percent_increase",
    "percent_decrease",
    "percent_no_change_or_undefined",
    "summary",
];

pub fn write_influencer_summary(path: &Path, rows: &[InfluencerImpactSummary]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(INFLUENCER_SUMMARY_HEADER)?;
    for s in rows {
        for (d, sh) in &s.per_direction {
            w.write_record([
                s.influencer_id.clone(),
                s.stance.to_string(),
                s.n_conversations.to_string(),
                d.to_string(),
                format!("{:.2}", sh.percent_increase),
                format!("{:.2}", sh.percent_decrease),
                format!("{:.2}", sh.percent_no_change_or_undefined),
                format_influencer_cell(sh),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub const STANCE_SUMMARY_HEADER: [&str; 7] = [
    "stance",
    "n_conversations",
    "direction",
    "percent_increase",
    "percent_decrease",
    "percent_no_change_or_undefined",
    "summary",
];

pub fn write_stance_summary(path: &Path, rows: &[StanceGroupSummary]) -> Result<()> {
    let mut w = crate::io::csv_writer(path)?;
    w.write_record(STANCE_SUMMARY_HEADER)?;
    for s in rows {
        for (d, sh) in &s.per_direction {
            w.write_record([
                s.stance.to_string(),
                s.n_conversations.to_string(),
                d.to_string(),
                format!("{:.2}", sh.percent_increase),
                format!("{:.2}", sh.percent_decrease),
                format!("{:.2}", sh.percent_no_change_or_undefined),
                format_group_cell(sh),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}
