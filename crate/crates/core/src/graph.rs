//! User-to-user interaction multigraph.
//!
//! Every (tweet, reference) pair whose target tweet is in the corpus becomes
//! one directed edge from the referencing author to the referenced author.
//! Graphs are immutable values: slicing, subgraph extraction and conversation
//! removal all return new graphs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{Read, Write};
use std::sync::Arc;

use chrono::{DateTime, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{Conversation, ReferenceKind, Tweet};
use crate::error::{Error, Result};
use crate::sentiment::SentimentRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InteractionKind {
    Reply,
    Retweet,
    Quote,
}

impl From<ReferenceKind> for InteractionKind {
    fn from(k: ReferenceKind) -> Self {
        match k {
            ReferenceKind::RepliedTo => InteractionKind::Reply,
            ReferenceKind::Retweeted => InteractionKind::Retweet,
            ReferenceKind::Quoted => InteractionKind::Quote,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InteractionEdge {
    pub author_id: String,
    pub target_id: String,
    pub kind: InteractionKind,
    pub tweet_id: String,
    pub conversation_id: String,
    #[serde(with = "crate::io::timestamp")]
    pub timestamp: DateTime<Utc>,
    pub sentiment: f64,
}

impl InteractionEdge {
    pub fn is_self_loop(&self) -> bool {
        self.author_id == self.target_id
    }

    pub fn day(&self) -> NaiveDate {
        self.timestamp.date_naive()
    }

    fn sort_key(&self) -> (DateTime<Utc>, &str, &str, InteractionKind) {
        (self.timestamp, &self.tweet_id, &self.target_id, self.kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RemovalMode {
    /// Drop the conversation's edges only.
    #[default]
    Edges,
    /// Drop every participant of the conversation with all incident edges.
    Nodes,
}

impl std::str::FromStr for RemovalMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(RemovalMode::Edges),
            "nodes" => Ok(RemovalMode::Nodes),
            _ => Err(Error::invalid(format!("unknown removal mode {s:?} (edges|nodes)"))),
        }
    }
}

type Participants = Arc<BTreeMap<String, BTreeSet<String>>>;

#[derive(Debug, Clone, Default)]
pub struct InteractionGraph {
    nodes: BTreeSet<String>,
    edges: Vec<InteractionEdge>,
    by_author: BTreeMap<String, Vec<usize>>,
    by_conversation: BTreeMap<String, Vec<usize>>,
    by_day: BTreeMap<NaiveDate, Vec<usize>>,
    /// Authors of every tweet in each conversation, including tweets that
    /// produced no edge (typically the root). Shared by derived graphs.
    participants: Participants,
}

impl PartialEq for InteractionGraph {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes && self.edges == other.edges
    }
}

impl InteractionGraph {
    /// Builds a graph from explicit parts. Edge endpoints are added to the node set.
    pub fn from_parts(nodes: impl IntoIterator<Item = String>, edges: Vec<InteractionEdge>) -> Self {
        Self::assemble(nodes.into_iter().collect(), edges, Participants::default())
    }

    fn assemble(mut nodes: BTreeSet<String>, mut edges: Vec<InteractionEdge>, participants: Participants) -> Self {
        edges.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let mut by_author: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_conversation: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut by_day: BTreeMap<NaiveDate, Vec<usize>> = BTreeMap::new();
        for (i, e) in edges.iter().enumerate() {
            if !nodes.contains(&e.author_id) {
                nodes.insert(e.author_id.clone());
            }
            if !nodes.contains(&e.target_id) {
                nodes.insert(e.target_id.clone());
            }
            by_author.entry(e.author_id.clone()).or_default().push(i);
            by_conversation.entry(e.conversation_id.clone()).or_default().push(i);
            by_day.entry(e.day()).or_default().push(i);
        }
        InteractionGraph { nodes, edges, by_author, by_conversation, by_day, participants }
    }

    fn derive(&self, nodes: BTreeSet<String>, edges: Vec<InteractionEdge>) -> Self {
        Self::assemble(nodes, edges, Arc::clone(&self.participants))
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    /// Edges in canonical order: `(timestamp, tweet_id, target_id, kind)`.
    pub fn edges(&self) -> &[InteractionEdge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains(id)
    }

    pub fn edges_by_author<'a>(&'a self, author: &str) -> impl Iterator<Item = &'a InteractionEdge> + 'a {
        self.by_author.get(author).into_iter().flatten().map(|&i| &self.edges[i])
    }

    pub fn edges_in_conversation<'a>(&'a self, conversation_id: &str) -> impl Iterator<Item = &'a InteractionEdge> + 'a {
        self.by_conversation.get(conversation_id).into_iter().flatten().map(|&i| &self.edges[i])
    }

    pub fn conversation_edge_counts(&self) -> BTreeMap<&str, usize> {
        self.by_conversation.iter().map(|(k, v)| (k.as_str(), v.len())).collect()
    }

    pub fn days(&self) -> impl Iterator<Item = NaiveDate> + '_ {
        self.by_day.keys().copied()
    }

    pub fn day_edge_counts(&self) -> BTreeMap<NaiveDate, usize> {
        self.by_day.iter().map(|(k, v)| (*k, v.len())).collect()
    }

    pub fn author_edge_counts(&self) -> BTreeMap<&str, usize> {
        self.by_author.iter().map(|(k, v)| (k.as_str(), v.len())).collect()
    }

    /// Users who authored a tweet in the conversation, as recorded at build time.
    /// Falls back to edge authors for graphs assembled from raw parts.
    pub fn conversation_participants(&self, conversation_id: &str) -> BTreeSet<String> {
        match self.participants.get(conversation_id) {
            Some(p) => p.clone(),
            None => self.edges_in_conversation(conversation_id).map(|e| e.author_id.clone()).collect(),
        }
    }

    pub fn knows_conversation(&self, conversation_id: &str) -> bool {
        self.participants.contains_key(conversation_id) || self.by_conversation.contains_key(conversation_id)
    }

    /// Undirected neighbour sets, self-loops ignored.
    pub fn neighbors(&self) -> BTreeMap<&str, BTreeSet<&str>> {
        let mut adj: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        for e in self.edges.iter().filter(|e| !e.is_self_loop()) {
            adj.entry(&e.author_id).or_default().insert(&e.target_id);
            adj.entry(&e.target_id).or_default().insert(&e.author_id);
        }
        adj
    }

    /// Edges whose timestamp falls in `[date 00:00, date+1 00:00)` UTC.
    /// Nodes are restricted to the endpoints of those edges.
    pub fn daily_slice(&self, date: NaiveDate) -> InteractionGraph {
        let edges: Vec<_> = self.by_day.get(&date).into_iter().flatten().map(|&i| self.edges[i].clone()).collect();
        self.derive(BTreeSet::new(), edges)
    }

    /// Influencer-centred subgraph.
    ///
    /// The audience is `followers` when given (restricted to users present in
    /// the graph), otherwise every user with at least one edge to or from the
    /// influencer. The result holds the audience, the influencer, every
    /// neighbour of an audience member, and all edges among those nodes.
    pub fn influencer_subgraph(&self, influencer_id: &str, followers: Option<&BTreeSet<String>>) -> Result<InteractionGraph> {
        if !self.nodes.contains(influencer_id) {
            return Err(Error::NotFound(format!("influencer {influencer_id} not in graph")));
        }
        let adj = self.neighbors();
        let audience: BTreeSet<&str> = match followers {
            Some(f) => f.iter().map(String::as_str).filter(|u| self.nodes.contains(*u)).collect(),
            None => adj.get(influencer_id).cloned().unwrap_or_default(),
        };
        let mut keep: BTreeSet<&str> = audience.clone();
        keep.insert(influencer_id);
        for u in &audience {
            if let Some(n) = adj.get(u) {
                keep.extend(n.iter().copied());
            }
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|e| keep.contains(e.author_id.as_str()) && keep.contains(e.target_id.as_str()))
            .cloned()
            .collect();
        let nodes = keep.into_iter().map(str::to_string).collect();
        Ok(self.derive(nodes, edges))
    }

    /// Audience used by [`Self::influencer_subgraph`] when no follower list is supplied.
    pub fn interaction_neighbors(&self, user: &str) -> BTreeSet<String> {
        self.neighbors()
            .remove(user)
            .map(|s| s.into_iter().map(str::to_string).collect())
            .unwrap_or_default()
    }

    /// Copy of the graph without the given conversation.
    ///
    /// `Edges` removes exactly that conversation's edges and then drops nodes
    /// left isolated by the removal. `Nodes` removes every participant of the
    /// conversation together with all their edges, from any conversation.
    /// Unknown conversation ids leave the graph unchanged.
    pub fn remove_conversation(&self, conversation_id: &str, mode: RemovalMode) -> InteractionGraph {
        if !self.knows_conversation(conversation_id) {
            log::warn!("conversation {conversation_id} not in graph; nothing removed");
            return self.clone();
        }
        match mode {
            RemovalMode::Edges => {
                let (removed, kept): (Vec<_>, Vec<_>) =
                    self.edges.iter().cloned().partition(|e| e.conversation_id == conversation_id);
                let mut still_linked = BTreeSet::new();
                for e in &kept {
                    still_linked.insert(e.author_id.as_str());
                    still_linked.insert(e.target_id.as_str());
                }
                let mut orphaned = BTreeSet::new();
                for e in &removed {
                    for u in [&e.author_id, &e.target_id] {
                        if !still_linked.contains(u.as_str()) {
                            orphaned.insert(u.clone());
                        }
                    }
                }
                let nodes = self.nodes.iter().filter(|n| !orphaned.contains(*n)).cloned().collect();
                self.derive(nodes, kept)
            }
            RemovalMode::Nodes => {
                let gone = self.conversation_participants(conversation_id);
                let nodes = self.nodes.iter().filter(|n| !gone.contains(*n)).cloned().collect();
                let edges = self
                    .edges
                    .iter()
                    .filter(|e| !gone.contains(&e.author_id) && !gone.contains(&e.target_id))
                    .cloned()
                    .collect();
                self.derive(nodes, edges)
            }
        }
    }

    pub const CSV_HEADER: [&'static str; 7] =
        ["author_id", "target_id", "kind", "tweet_id", "conversation_id", "timestamp", "sentiment"];

    /// Canonical CSV serialization, rows in canonical edge order.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record(Self::CSV_HEADER)?;
        for e in &self.edges {
            let kind = match e.kind {
                InteractionKind::Reply => "reply",
                InteractionKind::Retweet => "retweet",
                InteractionKind::Quote => "quote",
            };
            out.write_record([
                e.author_id.as_str(),
                &e.target_id,
                kind,
                &e.tweet_id,
                &e.conversation_id,
                &crate::io::format_timestamp(&e.timestamp),
                &e.sentiment.to_string(),
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<InteractionGraph> {
        let mut rdr = csv::Reader::from_reader(r);
        let edges = rdr.deserialize().collect::<std::result::Result<Vec<InteractionEdge>, _>>()?;
        Ok(Self::from_parts(std::iter::empty(), edges))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub include_quotes: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { include_quotes: true }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildSummary {
    pub edges: usize,
    pub unresolved_references: usize,
    pub excluded_quotes: usize,
}

/// Builds the interaction graph over the tweets of `conversations`.
///
/// Nodes are all authors in those conversations. Edge sentiment is the
/// authoring tweet's combined score (0 when no score is known). References to
/// tweets absent from `tweets` are dropped and counted.
pub fn build_graph(
    conversations: &[Conversation],
    tweets: &[Tweet],
    sentiments: &[SentimentRecord],
    options: BuildOptions,
) -> (InteractionGraph, BuildSummary) {
    let by_id: HashMap<&str, &Tweet> = tweets.iter().map(|t| (t.id.as_str(), t)).collect();
    let score: HashMap<&str, f64> = sentiments.iter().map(|s| (s.tweet_id.as_str(), s.combined)).collect();
    let mut summary = BuildSummary::default();
    let mut nodes = BTreeSet::new();
    let mut participants = BTreeMap::new();
    let mut edges = Vec::new();
    for conv in conversations {
        participants.insert(conv.conversation_id.clone(), conv.participant_ids.clone());
        for tid in &conv.tweet_ids {
            let Some(t) = by_id.get(tid.as_str()) else { continue };
            nodes.insert(t.author_id.clone());
            for r in &t.references {
                let kind = InteractionKind::from(r.kind);
                if kind == InteractionKind::Quote && !options.include_quotes {
                    summary.excluded_quotes += 1;
                    continue;
                }
                let Some(target) = by_id.get(r.target_tweet_id.as_str()) else {
                    summary.unresolved_references += 1;
                    continue;
                };
                edges.push(InteractionEdge {
                    author_id: t.author_id.clone(),
                    target_id: target.author_id.clone(),
                    kind,
                    tweet_id: t.id.clone(),
                    conversation_id: t.conversation_id.clone(),
                    timestamp: t.created_at,
                    sentiment: score.get(t.id.as_str()).copied().unwrap_or(0.0),
                });
            }
        }
    }
    summary.edges = edges.len();
    (InteractionGraph::assemble(nodes, edges, Arc::new(participants)), summary)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::corpus::{assemble_conversations, Reference};
    use chrono::TimeZone;
    use proptest::prelude::*;

    pub(crate) fn edge(author: &str, target: &str, conv: &str, secs: i64, sentiment: f64) -> InteractionEdge {
        InteractionEdge {
            author_id: author.into(),
            target_id: target.into(),
            kind: InteractionKind::Reply,
            tweet_id: format!("{conv}-{author}-{target}-{secs}"),
            conversation_id: conv.into(),
            timestamp: Utc.with_ymd_and_hms(2022, 5, 24, 0, 0, 0).unwrap() + chrono::Duration::seconds(secs),
            sentiment,
        }
    }

    fn tweet(id: &str, author: &str, conv: &str, reply_to: Option<&str>) -> Tweet {
        Tweet {
            id: id.into(),
            author_id: author.into(),
            conversation_id: conv.into(),
            created_at: Utc.with_ymd_and_hms(2022, 5, 24, 12, 0, 0).unwrap(),
            text: String::new(),
            references: reply_to
                .map(|t| vec![Reference { kind: ReferenceKind::RepliedTo, target_tweet_id: t.into() }])
                .unwrap_or_default(),
            like_count: 0,
            reply_count: 0,
            retweet_count: 0,
            quote_count: 0,
            hashtags: vec![],
        }
    }

    #[test]
    fn reply_becomes_edge() {
        let tweets = vec![tweet("t1", "u1", "t1", None), tweet("t2", "u2", "t1", Some("t1"))];
        let convs = assemble_conversations(&tweets);
        let sent = vec![SentimentRecord::new("t2", "lexicon", -0.5)];
        let (g, s) = build_graph(&convs, &tweets, &sent, BuildOptions::default());
        assert_eq!(g.edge_count(), 1);
        let e = &g.edges()[0];
        assert_eq!((e.author_id.as_str(), e.target_id.as_str(), e.kind), ("u2", "u1", InteractionKind::Reply));
        assert_eq!(e.sentiment, -0.5);
        assert_eq!(s.unresolved_references, 0);
    }

    #[test]
    fn no_references_means_no_edges() {
        let tweets = vec![tweet("t1", "u1", "t1", None), tweet("t2", "u2", "t2", None)];
        let (g, _) = build_graph(&assemble_conversations(&tweets), &tweets, &[], BuildOptions::default());
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn unresolved_and_quote_references() {
        let mut q = tweet("t3", "u3", "t1", None);
        q.references.push(Reference { kind: ReferenceKind::Quoted, target_tweet_id: "t1".into() });
        let tweets = vec![tweet("t1", "u1", "t1", None), tweet("t2", "u2", "t1", Some("gone")), q];
        let convs = assemble_conversations(&tweets);
        let (g, s) = build_graph(&convs, &tweets, &[], BuildOptions::default());
        assert_eq!(s.unresolved_references, 1);
        assert_eq!(g.edge_count(), 1);
        let (g, s) = build_graph(&convs, &tweets, &[], BuildOptions { include_quotes: false });
        assert_eq!(s.excluded_quotes, 1);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn two_conversations_of_three_replies() {
        let mut tweets = vec![];
        for c in ["a", "b"] {
            tweets.push(tweet(c, "root", c, None));
            for i in 0..3 {
                tweets.push(tweet(&format!("{c}{i}"), &format!("{c}-u{i}"), c, Some(c)));
            }
        }
        let (g, _) = build_graph(&assemble_conversations(&tweets), &tweets, &[], BuildOptions::default());
        assert_eq!(g.edge_count(), 6);
        let counts = g.conversation_edge_counts();
        assert_eq!(counts.len(), 2);
        assert!(counts.values().all(|&n| n == 3));
    }

    #[test]
    fn daily_slice_is_half_open() {
        let day = NaiveDate::from_ymd_opt(2022, 5, 24).unwrap();
        let g = InteractionGraph::from_parts(
            std::iter::empty(),
            vec![edge("a", "b", "c", 0, 0.0), edge("a", "c", "c", 86_399, 0.0), edge("b", "d", "c", 86_400, 0.0)],
        );
        let s = g.daily_slice(day);
        assert_eq!(s.edge_count(), 2);
        assert!(!s.contains_node("d"));
        assert_eq!(g.daily_slice(day.succ_opt().unwrap()).edge_count(), 1);
        assert_eq!(g.daily_slice(NaiveDate::from_ymd_opt(2022, 1, 1).unwrap()).edge_count(), 0);

        let one_day = InteractionGraph::from_parts(std::iter::empty(), vec![edge("a", "b", "c", 5, 0.0), edge("b", "a", "c", 9, 0.0)]);
        assert_eq!(one_day.daily_slice(day), one_day);
    }

    #[test]
    fn subgraph_cases() {
        let lonely = InteractionGraph::from_parts(["inf".to_string()], vec![edge("a", "b", "c", 0, 0.0)]);
        let s = lonely.influencer_subgraph("inf", None).unwrap();
        assert_eq!(s.node_count(), 1);
        assert_eq!(s.edge_count(), 0);
        assert!(matches!(lonely.influencer_subgraph("nobody", None), Err(Error::NotFound(_))));

        let star = InteractionGraph::from_parts(
            std::iter::empty(),
            (0..5).map(|i| edge(&format!("u{i}"), "inf", "c", i, 0.0)).chain([edge("x", "y", "d", 0, 0.0)]).collect(),
        );
        let s = star.influencer_subgraph("inf", None).unwrap();
        assert_eq!((s.node_count(), s.edge_count()), (6, 5));

        let chain = InteractionGraph::from_parts(
            std::iter::empty(),
            vec![edge("u3", "u2", "c", 0, 0.0), edge("u2", "inf", "c", 1, 0.0), edge("u4", "u3", "c", 2, 0.0)],
        );
        let s = chain.influencer_subgraph("inf", None).unwrap();
        assert_eq!((s.node_count(), s.edge_count()), (3, 2));
    }

    #[test]
    fn follower_list_defines_audience() {
        let g = InteractionGraph::from_parts(
            std::iter::empty(),
            vec![edge("f1", "x", "c", 0, 0.0), edge("a", "inf", "c", 1, 0.0)],
        );
        let followers: BTreeSet<String> = ["f1".to_string(), "ghost".to_string()].into();
        let s = g.influencer_subgraph("inf", Some(&followers)).unwrap();
        assert_eq!(s.nodes().iter().map(String::as_str).collect::<Vec<_>>(), ["f1", "inf", "x"]);
        assert_eq!(s.edge_count(), 1);
    }

    #[test]
    fn edge_removal_counts() {
        let mut edges: Vec<_> = (0..7).map(|i| edge(&format!("p{i}"), "inf", "target", i, 0.0)).collect();
        edges.extend((0..13).map(|i| edge(&format!("q{}", i % 4), &format!("q{}", (i + 1) % 4), "other", 100 + i, 0.0)));
        let g = InteractionGraph::from_parts(std::iter::empty(), edges);
        let r = g.remove_conversation("target", RemovalMode::Edges);
        assert_eq!(r.edge_count(), 13);
        assert!(!r.contains_node("inf"));
        assert_eq!(g.edge_count(), 20);
        assert_eq!(g.remove_conversation("absent", RemovalMode::Edges), g);
    }

    #[test]
    fn node_removal_drops_outside_edges() {
        let g = InteractionGraph::from_parts(
            std::iter::empty(),
            vec![edge("a", "inf", "c1", 0, 0.0), edge("a", "b", "c2", 1, 0.0), edge("b", "d", "c2", 2, 0.0)],
        );
        let edges_mode = g.remove_conversation("c1", RemovalMode::Edges);
        assert_eq!(edges_mode.edge_count(), 2);
        let nodes_mode = g.remove_conversation("c1", RemovalMode::Nodes);
        assert_eq!(nodes_mode.edge_count(), 1);
        assert!(!nodes_mode.contains_node("a"));
    }

    #[test]
    fn participants_include_root_author() {
        let tweets = vec![tweet("t1", "inf", "t1", None), tweet("t2", "u2", "t1", Some("t1")), tweet("x", "inf", "x", None), tweet("y", "u3", "x", Some("x"))];
        let (g, _) = build_graph(&assemble_conversations(&tweets), &tweets, &[], BuildOptions::default());
        let r = g.remove_conversation("t1", RemovalMode::Nodes);
        assert_eq!(r.edge_count(), 0);
        assert!(!r.contains_node("inf"));
    }

    #[test]
    fn csv_roundtrip_is_canonical() {
        let g = InteractionGraph::from_parts(std::iter::empty(), vec![edge("b", "a", "c", 9, -0.25), edge("a", "b", "c", 5, 0.1)]);
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("author_id,target_id,kind,tweet_id,conversation_id,timestamp,sentiment\na,b,reply,"));
        let back = InteractionGraph::read_csv(buf.as_slice()).unwrap();
        assert_eq!(back, g);
    }

    pub(crate) fn arb_edges(max_nodes: u8, max_edges: usize) -> impl Strategy<Value = Vec<InteractionEdge>> {
        prop::collection::vec((0..max_nodes, 0..max_nodes, 0u8..4, 0i64..4 * 86_400, -1.0f64..1.0), 0..max_edges).prop_map(
            |rows| {
                rows.into_iter()
                    .enumerate()
                    .map(|(i, (a, b, c, t, s))| {
                        let mut e = edge(&format!("u{a:02}"), &format!("u{b:02}"), &format!("c{c}"), t, s);
                        e.tweet_id = format!("t{i:04}");
                        e
                    })
                    .collect()
            },
        )
    }

    proptest! {
        #[test]
        fn edge_removal_is_exact(edges in arb_edges(12, 60), c in 0u8..5) {
            let g = InteractionGraph::from_parts(std::iter::empty(), edges);
            let cid = format!("c{c}");
            let n = g.edges().iter().filter(|e| e.conversation_id == cid).count();
            prop_assert_eq!(g.remove_conversation(&cid, RemovalMode::Edges).edge_count(), g.edge_count() - n);
        }

        #[test]
        fn daily_slices_partition_edges(edges in arb_edges(12, 60)) {
            let g = InteractionGraph::from_parts(std::iter::empty(), edges);
            let mut ids: Vec<String> = g.days().flat_map(|d| g.daily_slice(d).edges().iter().map(|e| e.tweet_id.clone()).collect::<Vec<_>>()).collect();
            ids.sort();
            let mut all: Vec<String> = g.edges().iter().map(|e| e.tweet_id.clone()).collect();
            all.sort();
            prop_assert_eq!(ids, all);
        }

        #[test]
        fn subgraph_monotone_in_audience(edges in arb_edges(10, 40), small in prop::collection::btree_set(0u8..10, 0..4), extra in prop::collection::btree_set(0u8..10, 0..4)) {
            let mut nodes: Vec<String> = vec!["u00".into()];
            nodes.extend((0..10).map(|i| format!("u{i:02}")));
            let g = InteractionGraph::from_parts(nodes, edges);
            let a: BTreeSet<String> = small.iter().map(|i| format!("u{i:02}")).collect();
            let b: BTreeSet<String> = a.iter().cloned().chain(extra.iter().map(|i| format!("u{i:02}"))).collect();
            let ga = g.influencer_subgraph("u00", Some(&a)).unwrap();
            let gb = g.influencer_subgraph("u00", Some(&b)).unwrap();
            prop_assert!(ga.nodes().is_subset(gb.nodes()));
            for e in ga.edges() {
                prop_assert!(gb.edges().contains(e));
            }
        }

        #[test]
        fn construction_order_does_not_matter(mut edges in arb_edges(8, 30)) {
            let g1 = InteractionGraph::from_parts(std::iter::empty(), edges.clone());
            edges.reverse();
            let g2 = InteractionGraph::from_parts(std::iter::empty(), edges);
            let (mut b1, mut b2) = (Vec::new(), Vec::new());
            g1.write_csv(&mut b1).unwrap();
            g2.write_csv(&mut b2).unwrap();
            prop_assert_eq!(b1, b2);
        }
    }
}
