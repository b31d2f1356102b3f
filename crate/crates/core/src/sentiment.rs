//! Lexicon-based valence scoring and multi-model score fusion.
//!
//! The scorer sums per-token contributions and squashes the sum into (-1, 1)
//! with `S / sqrt(S^2 + 15)`. A lexicon hit starts from its raw valence, picks
//! up sign-aligned booster increments and negation from the three preceding
//! tokens, and is amplified when written in capitals inside otherwise mixed
//! case text.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Tweet;
use crate::error::{Error, Result};
use crate::text;

pub const NEGATION_FACTOR: f64 = -0.74;
pub const MODIFIER_WINDOW: usize = 3;
pub const CAPS_FACTOR: f64 = 1.15;
pub const NORMALIZATION: f64 = 15.0;
pub const DEFAULT_TAU: f64 = 0.05;
pub const LEXICON_MODEL: &str = "lexicon";

const BUILTIN_LEXICON: &str = include_str!("../data/lexicon.tsv");
const BUILTIN_BOOSTERS: &str = include_str!("../data/boosters.tsv");
const BUILTIN_NEGATORS: &str = include_str!("../data/negators.txt");

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, f64>,
    boosters: BTreeMap<String, f64>,
    negators: BTreeSet<String>,
}

fn content_lines(src: &str) -> impl Iterator<Item = (usize, &str)> {
    src.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_weighted(src: &str, what: &str) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for (line, l) in content_lines(src) {
        let (term, value) = l
            .split_once('\t')
            .ok_or_else(|| Error::Malformed { line, message: format!("{what}: expected term<TAB>value") })?;
        let value: f64 = value.trim().parse().map_err(|_| Error::Malformed {
            line,
            message: format!("{what}: bad number {value:?}"),
        })?;
        let term = term.trim().to_lowercase();
        if out.insert(term.clone(), value).is_some() {
            return Err(Error::invalid(format!("{what}: duplicate term {term:?}")));
        }
    }
    Ok(out)
}

impl Lexicon {
    /// Builds a lexicon from the three text sources.
    ///
    /// `lexicon` and `boosters` hold `term<TAB>value` lines, `negators` one term
    /// per line. Lines starting with `#` are comments. Terms are lowercased.
    pub fn parse(lexicon: &str, boosters: &str, negators: &str) -> Result<Self> {
        let entries = parse_weighted(lexicon, "lexicon")?;
        if let Some((t, v)) = entries.iter().find(|(_, v)| !(-4.0..=4.0).contains(*v)) {
            return Err(Error::Range(format!("valence {v} for {t:?} outside [-4, 4]")));
        }
        let boosters = parse_weighted(boosters, "boosters")?;
        let mut neg = BTreeSet::new();
        for (_, l) in content_lines(negators) {
            if !neg.insert(l.to_lowercase()) {
                return Err(Error::invalid(format!("negators: duplicate term {l:?}")));
            }
        }
        Ok(Lexicon { entries, boosters, negators: neg })
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_LEXICON, BUILTIN_BOOSTERS, BUILTIN_NEGATORS).expect("built-in lexicon is valid")
    }

    /// Loads a lexicon file; booster and negator lists fall back to the built-in ones.
    pub fn from_files(lexicon: &Path, boosters: Option<&Path>, negators: Option<&Path>) -> Result<Self> {
        let lex = crate::io::read_to_string(lexicon)?;
        let boost = match boosters {
            Some(p) => crate::io::read_to_string(p)?,
            None => BUILTIN_BOOSTERS.to_string(),
        };
        let neg = match negators {
            Some(p) => crate::io::read_to_string(p)?,
            None => BUILTIN_NEGATORS.to_string(),
        };
        Self::parse(&lex, &boost, &neg)
    }

    /// Lexicon with the given entries and no modifiers.
    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        Lexicon {
            entries: entries.into_iter().map(|(t, v)| (t.to_lowercase(), v)).collect(),
            ..Default::default()
        }
    }

    pub fn with_negators<'a>(mut self, terms: impl IntoIterator<Item = &'a str>) -> Self {
        self.negators.extend(terms.into_iter().map(str::to_lowercase));
        self
    }

    pub fn with_boosters<'a>(mut self, terms: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        self.boosters.extend(terms.into_iter().map(|(t, v)| (t.to_lowercase(), v)));
        self
    }

    pub fn valence(&self, term: &str) -> Option<f64> {
        self.entries.get(term).copied()
    }

    pub fn is_modifier(&self, term: &str) -> bool {
        self.negators.contains(term) || self.boosters.contains_key(term)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Raw (unsquashed) contribution sum for `text`.
pub fn raw_sum(text: &str, lexicon: &Lexicon) -> f64 {
    let original: Vec<&str> = text::tokens(text).collect();
    let lower: Vec<String> = original.iter().map(|t| t.to_lowercase()).collect();
    let shouting = text::is_all_caps(text);

    let mut sum = 0.0;
    for (i, tok) in lower.iter().enumerate() {
        let Some(valence) = lexicon.valence(tok) else { continue };
        let window = &lower[i.saturating_sub(MODIFIER_WINDOW)..i];
        let mut c = valence;
        for w in window {
            if let Some(inc) = lexicon.boosters.get(w) {
                c += inc * valence.signum();
            }
        }
        if window.iter().any(|w| lexicon.negators.contains(w)) {
            c *= NEGATION_FACTOR;
        }
        if !shouting && text::is_all_caps(original[i]) {
            c *= CAPS_FACTOR;
        }
        sum += c;
    }
    sum
}

/// Squashes a raw contribution sum into (-1, 1).
pub fn normalize(sum: f64) -> f64 {
    sum / (sum * sum + NORMALIZATION).sqrt()
}

/// Valence of `text` in (-1, 1). Unknown tokens contribute nothing.
pub fn score_text(text: &str, lexicon: &Lexicon) -> f64 {
    normalize(raw_sum(text, lexicon))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Valence {
    Negative,
    Neutral,
    Positive,
}

/// Strict comparison against `±tau`; the band edges are neutral.
pub fn classify_valence(score: f64, tau: f64) -> Valence {
    if score < -tau {
        Valence::Negative
    } else if score > tau {
        Valence::Positive
    } else {
        Valence::Neutral
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentimentRecord {
    pub tweet_id: String,
    pub per_model: BTreeMap<String, f64>,
    pub combined: f64,
}

impl SentimentRecord {
    pub fn new(tweet_id: impl Into<String>, model: impl Into<String>, score: f64) -> Self {
        let mut per_model = BTreeMap::new();
        per_model.insert(model.into(), score);
        SentimentRecord { tweet_id: tweet_id.into(), per_model, combined: score }
    }

    fn recombine(&mut self) {
        self.combined = self.per_model.values().sum::<f64>() / self.per_model.len() as f64;
    }
}

/// Lexicon scores for every tweet, in input order.
pub fn score_tweets(tweets: &[Tweet], lexicon: &Lexicon) -> Vec<SentimentRecord> {
    tweets
        .iter()
        .map(|t| SentimentRecord::new(t.id.clone(), LEXICON_MODEL, score_text(&t.text, lexicon)))
        .collect()
}

/// One line of an external score file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalScore {
    pub tweet_id: String,
    pub model: String,
    pub score: f64,
}

pub fn read_external_scores(path: &Path) -> Result<Vec<ExternalScore>> {
    crate::io::lines(path)?
        .into_iter()
        .map(|(line, l)| {
            serde_json::from_str(&l).map_err(|e| Error::Malformed { line, message: e.to_string() })
        })
        .collect()
}

#[derive(Debug, Default, Clone, PartialEq)]
pub struct MergeReport {
    pub applied: usize,
    pub unknown_tweets: usize,
    pub rejected: Vec<String>,
}

/// Unions external per-model scores into the records and recomputes each mean.
///
/// Scores outside [-1, 1] are rejected with a range error recorded in the
/// report; scores for tweets not present in `records` are skipped with a warning.
pub fn merge_external_scores(
    mut records: Vec<SentimentRecord>,
    external: &[ExternalScore],
) -> (Vec<SentimentRecord>, MergeReport) {
    let index: BTreeMap<String, usize> =
        records.iter().enumerate().map(|(i, r)| (r.tweet_id.clone(), i)).collect();
    let mut report = MergeReport::default();
    let mut touched = BTreeSet::new();
    for ext in external {
        if !(ext.score.is_finite() && (-1.0..=1.0).contains(&ext.score)) {
            let err = Error::Range(format!("{}/{}: score {} outside [-1, 1]", ext.tweet_id, ext.model, ext.score));
            log::warn!("{err}");
            report.rejected.push(err.to_string());
            continue;
        }
        let Some(&i) = index.get(&ext.tweet_id) else {
            log::warn!("external score for unknown tweet {}", ext.tweet_id);
            report.unknown_tweets += 1;
            continue;
        };
        records[i].per_model.insert(ext.model.clone(), ext.score);
        touched.insert(i);
        report.applied += 1;
    }
    for i in touched {
        records[i].recombine();
    }
    (records, report)
}
