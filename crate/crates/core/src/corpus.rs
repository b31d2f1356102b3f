//! Tweet ingestion, conversation assembly, engagement filtering and
//! influencer ranking.
//!
//! Input is JSON Lines, one tweet per line. Unknown fields are ignored;
//! missing or ill-typed required fields make the line malformed.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::BufRead;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    RepliedTo,
    Retweeted,
    Quoted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub kind: ReferenceKind,
    pub target_tweet_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub id: String,
    pub author_id: String,
    pub conversation_id: String,
    #[serde(with = "crate::io::timestamp")]
    pub created_at: DateTime<Utc>,
    pub text: String,
    pub references: Vec<Reference>,
    pub like_count: u64,
    pub reply_count: u64,
    pub retweet_count: u64,
    pub quote_count: u64,
    pub hashtags: Vec<String>,
}

impl Tweet {
    /// Lowercases hashtags, strips leading `#` and drops repeats (first wins).
    pub fn normalize_hashtags(&mut self) {
        let mut seen = HashSet::new();
        let tags = std::mem::take(&mut self.hashtags);
        self.hashtags = tags
            .into_iter()
            .map(|h| h.trim().trim_start_matches('#').to_lowercase())
            .filter(|h| !h.is_empty() && seen.insert(h.clone()))
            .collect();
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if self.id.is_empty() {
            return Err("empty id".into());
        }
        if self.author_id.is_empty() {
            return Err("empty author_id".into());
        }
        if self.conversation_id.is_empty() {
            return Err("empty conversation_id".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conversation {
    pub conversation_id: String,
    pub root_tweet_id: String,
    /// Ordered by `(created_at, id)`.
    pub tweet_ids: Vec<String>,
    pub participant_ids: BTreeSet<String>,
    pub initiator_id: String,
    /// Creation time of the root tweet.
    pub started_at: DateTime<Utc>,
}

impl Conversation {
    pub fn n_tweets(&self) -> usize {
        self.tweet_ids.len()
    }

    pub fn n_users(&self) -> usize {
        self.participant_ids.len()
    }

    pub fn index_entry(&self) -> ConversationIndexEntry {
        ConversationIndexEntry {
            conversation_id: self.conversation_id.clone(),
            root_tweet_id: self.root_tweet_id.clone(),
            n_tweets: self.n_tweets(),
            n_users: self.n_users(),
            initiator_id: self.initiator_id.clone(),
        }
    }
}

/// One line of the conversation index output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversationIndexEntry {
    pub conversation_id: String,
    pub root_tweet_id: String,
    pub n_tweets: usize,
    pub n_users: usize,
    pub initiator_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InfluencerRecord {
    pub user_id: String,
    pub tweet_count: u64,
    pub total_likes: u64,
    pub total_retweets: u64,
    pub total_replies: u64,
    pub rank: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub lines_read: usize,
    pub accepted: usize,
    pub malformed: usize,
    pub duplicates: usize,
}

impl ParseReport {
    pub fn skipped(&self) -> usize {
        self.malformed + self.duplicates
    }
}

/// Reads tweets from a JSON Lines stream.
///
/// Blank lines are ignored. In lenient mode malformed lines are skipped and
/// counted; in strict mode the first one aborts with [`Error::Malformed`].
/// Duplicate ids keep the first occurrence in both modes.
pub fn parse_corpus<R: BufRead>(reader: R, strict: bool) -> Result<(Vec<Tweet>, ParseReport)> {
    let mut report = ParseReport::default();
    let mut seen = HashSet::new();
    let mut tweets = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        report.lines_read += 1;
        let parsed = serde_json::from_str::<Tweet>(&line)
            .map_err(|e| e.to_string())
            .and_then(|mut t| {
                t.normalize_hashtags();
                t.validate().map(|_| t)
            });
        match parsed {
            Ok(t) => {
                if seen.insert(t.id.clone()) {
                    tweets.push(t);
                } else {
                    log::debug!("line {}: duplicate tweet id {}", idx + 1, t.id);
                    report.duplicates += 1;
                }
            }
            Err(message) => {
                if strict {
                    return Err(Error::Malformed { line: idx + 1, message });
                }
                log::warn!("line {}: skipping malformed record: {message}", idx + 1);
                report.malformed += 1;
            }
        }
    }
    report.accepted = tweets.len();
    Ok((tweets, report))
}

/// Groups tweets by `conversation_id`. Output is sorted by conversation id.
///
/// The root is the tweet whose id equals the conversation id; when that tweet
/// is missing from the corpus the earliest tweet by `(created_at, id)` stands in.
pub fn assemble_conversations(tweets: &[Tweet]) -> Vec<Conversation> {
    let mut groups: BTreeMap<&str, Vec<&Tweet>> = BTreeMap::new();
    for t in tweets {
        groups.entry(t.conversation_id.as_str()).or_default().push(t);
    }
    groups
        .into_iter()
        .map(|(cid, mut members)| {
            members.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
            let root = members
                .iter()
                .find(|t| t.id == cid)
                .copied()
                .unwrap_or(members[0]);
            Conversation {
                conversation_id: cid.to_string(),
                root_tweet_id: root.id.clone(),
                tweet_ids: members.iter().map(|t| t.id.clone()).collect(),
                participant_ids: members.iter().map(|t| t.author_id.clone()).collect(),
                initiator_id: root.author_id.clone(),
                started_at: root.created_at,
            }
        })
        .collect()
}

pub const DEFAULT_MIN_TWEETS: usize = 20;
pub const DEFAULT_MIN_USERS: usize = 10;

/// Keeps conversations with at least `min_tweets` tweets and `min_users` distinct authors.
pub fn filter_conversations(
    conversations: &[Conversation],
    min_tweets: usize,
    min_users: usize,
) -> Result<Vec<Conversation>> {
    if min_tweets < 1 || min_users < 1 {
        return Err(Error::invalid("engagement thresholds must be at least 1"));
    }
    Ok(conversations
        .iter()
        .filter(|c| c.n_tweets() >= min_tweets && c.n_users() >= min_users)
        .cloned()
        .collect())
}

/// Top-`k` authors by total likes; ties fall back to retweets, replies, then user id.
pub fn rank_influencers(tweets: &[Tweet], k: usize) -> Result<Vec<InfluencerRecord>> {
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut totals: BTreeMap<&str, InfluencerRecord> = BTreeMap::new();
    for t in tweets {
        let rec = totals.entry(&t.author_id).or_insert_with(|| InfluencerRecord {
            user_id: t.author_id.clone(),
            tweet_count: 0,
            total_likes: 0,
            total_retweets: 0,
            total_replies: 0,
            rank: 0,
        });
        rec.tweet_count += 1;
        rec.total_likes += t.like_count;
        rec.total_retweets += t.retweet_count;
        rec.total_replies += t.reply_count;
    }
    let mut ranked: Vec<_> = totals.into_values().collect();
    ranked.sort_by(|a, b| {
        b.total_likes
            .cmp(&a.total_likes)
            .then(b.total_retweets.cmp(&a.total_retweets))
            .then(b.total_replies.cmp(&a.total_replies))
            .then_with(|| a.user_id.cmp(&b.user_id))
    });
    ranked.truncate(k);
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(ranked)
}
