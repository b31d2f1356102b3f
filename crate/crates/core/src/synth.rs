//! Seeded synthetic corpora and brute-force reference scorers.
//!
//! Users get exact-quota stances and interact through a stochastic block
//! model: every sampled link becomes one reply into the target's root post of
//! the day. Reply text is composed from lexicon words so the built-in scorer
//! lands near a sentiment drawn from the within- or cross-group Gaussian.
//! A few activists per side post seed hashtags, and influencers (drawn from
//! the activists) start planted conversations with known composition.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chrono::{DateTime, Duration, NaiveDate, Utc};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::corpus::{Reference, ReferenceKind, Tweet};
use crate::error::{Error, Result};
use crate::graph::{InteractionEdge, InteractionKind, RemovalMode};
use crate::polarization::WeightMode;
use crate::sentiment::{score_text, Lexicon, DEFAULT_TAU};
use crate::stance::Stance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedSpec {
    pub day: u32,
    pub stance: Stance,
    /// Number of replies to the influencer's root post.
    pub size: usize,
    /// Share of repliers drawn from the opposite side.
    pub cross_fraction: f64,
    /// Mean sentiment of the replies.
    pub sentiment_bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub rng_seed: u64,
    pub n_users: usize,
    pub frac_pro: f64,
    pub frac_undecided: f64,
    pub days: u32,
    /// Standalone posts per day, spread over random authors.
    pub conversations_per_day: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub mu_in: f64,
    pub mu_out: f64,
    pub sigma: f64,
    pub pro_hashtags: Vec<String>,
    pub anti_hashtags: Vec<String>,
    pub neutral_hashtags: Vec<String>,
    /// Leading entries of each side's pool that act as seed hashtags.
    pub seed_hashtags_per_side: usize,
    /// Activists per side; each posts seed hashtags at least three times and
    /// tags nothing else.
    pub hashtag_users_per_side: usize,
    /// Chance that a regular post carries a side hashtag.
    pub hashtag_rate: f64,
    pub pro_frames: Vec<String>,
    pub anti_frames: Vec<String>,
    /// Chance that a post carries a frame word of its author's side.
    pub frame_rate: f64,
    pub n_influencers: usize,
    pub planted_conversations: Vec<PlantedSpec>,
    pub start_date: NaiveDate,
}

fn words(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

impl Default for SynthConfig {
    fn default() -> Self {
        let planted = |day, stance, size, cross_fraction, sentiment_bias| PlantedSpec { day, stance, size, cross_fraction, sentiment_bias };
        SynthConfig {
            rng_seed: 7,
            n_users: 1000,
            frac_pro: 0.45,
            frac_undecided: 0.1,
            days: 3,
            conversations_per_day: 200,
            p_in: 0.05,
            p_out: 0.005,
            mu_in: 0.3,
            mu_out: -0.4,
            sigma: 0.2,
            pro_hashtags: words(&["gunsense", "endgunviolence", "guncontrolnow", "momsdemand", "marchforourlives"]),
            anti_hashtags: words(&["2a", "gunrights", "shallnotbeinfringed", "nra", "2ndamendment"]),
            neutral_hashtags: words(&["news", "breaking", "texas", "thread"]),
            seed_hashtags_per_side: 2,
            hashtag_users_per_side: 20,
            hashtag_rate: 0.3,
            pro_frames: words(&["background", "checks", "reform", "victims", "legislation", "redflag"]),
            anti_frames: words(&["constitution", "liberty", "selfdefense", "ownership", "amendment", "militia"]),
            frame_rate: 0.5,
            n_influencers: 4,
            planted_conversations: vec![
                planted(0, Stance::Pro, 30, 0.7, -0.6),
                planted(1, Stance::Anti, 30, 0.7, -0.6),
                planted(2, Stance::Pro, 24, 0.5, 0.5),
                planted(2, Stance::Anti, 24, 0.3, -0.5),
            ],
            start_date: NaiveDate::from_ymd_opt(2022, 5, 24).expect("valid date"),
        }
    }
}

const FILLER: [&str; 6] = ["today", "people", "everyone", "update", "folks", "again"];

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, p: f64| {
            if (0.0..=1.0).contains(&p) {
                Ok(())
            } else {
                Err(Error::invalid(format!("{name} must be in [0, 1], got {p}")))
            }
        };
        prob("p_in", self.p_in)?;
        prob("p_out", self.p_out)?;
        prob("hashtag_rate", self.hashtag_rate)?;
        prob("frame_rate", self.frame_rate)?;
        if !(self.frac_pro > 0.0 && self.frac_pro < 1.0) {
            return Err(Error::invalid("frac_pro must be in (0, 1)"));
        }
        if !(0.0..1.0).contains(&self.frac_undecided) || self.frac_pro + self.frac_undecided >= 1.0 {
            return Err(Error::invalid("frac_undecided must be in [0, 1) with frac_pro + frac_undecided < 1"));
        }
        if self.n_users < 2 || self.days < 1 {
            return Err(Error::invalid("need at least 2 users and 1 day"));
        }
        if !(self.sigma >= 0.0) || !self.mu_in.is_finite() || !self.mu_out.is_finite() {
            return Err(Error::invalid("sentiment parameters must be finite with sigma >= 0"));
        }
        if self.pro_hashtags.len() < self.seed_hashtags_per_side.max(1)
            || self.anti_hashtags.len() < self.seed_hashtags_per_side.max(1)
            || self.seed_hashtags_per_side < 1
        {
            return Err(Error::invalid("each side needs at least one seed hashtag"));
        }
        let (n_pro, n_anti, _) = self.quotas();
        if self.hashtag_users_per_side > n_pro.min(n_anti) {
            return Err(Error::invalid("hashtag_users_per_side exceeds a side's size"));
        }
        if self.n_influencers > 2 * self.hashtag_users_per_side {
            return Err(Error::invalid("influencers are drawn from activists; raise hashtag_users_per_side"));
        }
        for (i, p) in self.planted_conversations.iter().enumerate() {
            if p.size < 1 || p.day >= self.days || !p.stance.is_decided() || !(0.0..=1.0).contains(&p.cross_fraction) {
                return Err(Error::invalid(format!("planted conversation {i} is invalid")));
            }
            let (own, other) = if p.stance == Stance::Pro { (n_pro, n_anti) } else { (n_anti, n_pro) };
            let cross = (p.size as f64 * p.cross_fraction).round() as usize;
            if cross > other || p.size - cross > own - 1 {
                return Err(Error::invalid(format!("planted conversation {i} needs more users than exist")));
            }
            if self.influencers_of(p.stance) == 0 {
                return Err(Error::invalid(format!("planted conversation {i} has no {} influencer", p.stance)));
            }
        }
        Ok(())
    }

    /// Exact `(pro, anti, undecided)` head counts.
    pub fn quotas(&self) -> (usize, usize, usize) {
        let n = self.n_users as f64;
        let pro = (self.frac_pro * n).round() as usize;
        let undecided = ((self.frac_undecided * n).round() as usize).min(self.n_users - pro);
        (pro, self.n_users - pro - undecided, undecided)
    }

    fn influencers_of(&self, stance: Stance) -> usize {
        let pro = self.n_influencers.div_ceil(2);
        if stance == Stance::Pro {
            pro
        } else {
            self.n_influencers - pro
        }
    }

    pub fn seed_hashtags(&self) -> BTreeMap<String, Stance> {
        let k = self.seed_hashtags_per_side;
        self.pro_hashtags[..k]
            .iter()
            .map(|h| (h.clone(), Stance::Pro))
            .chain(self.anti_hashtags[..k].iter().map(|h| (h.clone(), Stance::Anti)))
            .collect()
    }
}

/// Expected scores for one direction and weight mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub direction: String,
    pub weight_mode: WeightMode,
    pub with: Option<f64>,
    pub without: Option<f64>,
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedConversation {
    pub conversation_id: String,
    pub influencer_id: String,
    #[serde(flatten)]
    pub spec: PlantedSpec,
    /// Computed on the influencer subgraph with ground-truth stances and edge removal.
    pub expected: Vec<Expectation>,
}

impl PlantedConversation {
    pub fn expectation(&self, direction: &str, mode: WeightMode) -> Option<&Expectation> {
        self.expected.iter().find(|e| e.direction == direction && e.weight_mode == mode)
    }
}

#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub tweets: Vec<Tweet>,
    pub truth: BTreeMap<String, Stance>,
    pub seed_hashtags: BTreeMap<String, Stance>,
    pub manifest: Vec<PlantedConversation>,
    /// Every reply as an interaction edge, recorded at generation time.
    pub edges: Vec<InteractionEdge>,
    pub influencers: Vec<String>,
}

struct Generator<'a> {
    cfg: &'a SynthConfig,
    rng: ChaCha8Rng,
    lexicon: Lexicon,
    positive: Vec<(String, f64)>,
    negative: Vec<(String, f64)>,
    tweets: Vec<Tweet>,
    edges: Vec<InteractionEdge>,
    stance: Vec<Stance>,
    activists: BTreeSet<usize>,
    influencers: BTreeSet<usize>,
    daily_roots: BTreeMap<(usize, u32), usize>,
}

fn user_id(i: usize) -> String {
    format!("u{i:04}")
}

impl<'a> Generator<'a> {
    fn new(cfg: &'a SynthConfig) -> Self {
        let lexicon = Lexicon::builtin();
        let mut positive: Vec<(String, f64)> = lexicon.entries().filter(|(_, v)| *v > 0.0).map(|(w, v)| (w.to_string(), v)).collect();
        let mut negative: Vec<(String, f64)> = lexicon.entries().filter(|(_, v)| *v < 0.0).map(|(w, v)| (w.to_string(), v)).collect();
        positive.sort_by(|a, b| a.0.cmp(&b.0));
        negative.sort_by(|a, b| a.0.cmp(&b.0));
        Generator {
            cfg,
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            lexicon,
            positive,
            negative,
            tweets: Vec::new(),
            edges: Vec::new(),
            stance: Vec::new(),
            activists: BTreeSet::new(),
            influencers: BTreeSet::new(),
            daily_roots: BTreeMap::new(),
        }
    }

    fn assign_stances(&mut self) {
        let (pro, anti, undecided) = self.cfg.quotas();
        let mut s: Vec<Stance> = std::iter::repeat_n(Stance::Pro, pro)
            .chain(std::iter::repeat_n(Stance::Anti, anti))
            .chain(std::iter::repeat_n(Stance::Undecided, undecided))
            .collect();
        s.shuffle(&mut self.rng);
        self.stance = s;
        for side in [Stance::Pro, Stance::Anti] {
            let members: Vec<usize> = (0..self.stance.len()).filter(|&i| self.stance[i] == side).collect();
            let chosen = &members[..self.cfg.hashtag_users_per_side];
            self.activists.extend(chosen.iter().copied());
            self.influencers.extend(chosen.iter().take(self.cfg.influencers_of(side)).copied());
        }
    }

    fn gaussian(&mut self, mean: f64) -> f64 {
        let n = Normal::new(mean, self.cfg.sigma).expect("sigma validated");
        n.sample(&mut self.rng).clamp(-1.0, 1.0)
    }

    /// Lexicon words whose summed valence approaches the raw sum behind `target`.
    fn sentiment_words(&mut self, target: f64) -> Vec<String> {
        let s = target.clamp(-0.95, 0.95);
        let mut remaining = s * (15.0 / (1.0 - s * s)).sqrt();
        let pool = if remaining >= 0.0 { &self.positive } else { &self.negative };
        let mut out = Vec::new();
        for _ in 0..6 {
            let fits: Vec<&(String, f64)> = pool.iter().filter(|(_, v)| v.abs() <= remaining.abs() + 0.4).collect();
            let Some((w, v)) = fits.choose(&mut self.rng).map(|(w, v)| (w.clone(), *v)) else {
                break;
            };
            out.push(w);
            remaining -= v;
            if remaining.abs() < 0.4 {
                break;
            }
        }
        out
    }

    fn side_words(&mut self, author: usize, seed_tags: usize) -> (Vec<String>, Vec<String>) {
        let cfg = self.cfg;
        let side = match self.stance[author] {
            Stance::Undecided => *[Stance::Pro, Stance::Anti].choose(&mut self.rng).expect("non-empty"),
            s => s,
        };
        let (tags, frames) = match side {
            Stance::Pro => (&cfg.pro_hashtags, &cfg.pro_frames),
            _ => (&cfg.anti_hashtags, &cfg.anti_frames),
        };
        let mut text = Vec::new();
        let mut hashtags = Vec::new();
        if self.rng.random_bool(cfg.frame_rate) && !frames.is_empty() {
            text.push(frames.choose(&mut self.rng).expect("non-empty").clone());
        }
        for _ in 0..seed_tags {
            hashtags.push(tags[..cfg.seed_hashtags_per_side].choose(&mut self.rng).expect("non-empty").clone());
        }
        if self.activists.contains(&author) {
            return (text, hashtags);
        }
        let decided = self.stance[author].is_decided();
        let free = &tags[cfg.seed_hashtags_per_side..];
        if seed_tags == 0 && decided && !free.is_empty() && self.rng.random_bool(cfg.hashtag_rate) {
            hashtags.push(free.choose(&mut self.rng).expect("non-empty").clone());
        }
        if !cfg.neutral_hashtags.is_empty() && self.rng.random_bool(cfg.hashtag_rate / 2.0) {
            hashtags.push(cfg.neutral_hashtags.choose(&mut self.rng).expect("non-empty").clone());
        }
        (text, hashtags)
    }

    fn post(&mut self, author: usize, at: DateTime<Utc>, sentiment: f64, seed_tags: usize, reply_to: Option<usize>) -> usize {
        let mut text = self.sentiment_words(sentiment);
        let (frame, mut hashtags) = self.side_words(author, seed_tags);
        text.extend(frame);
        if text.is_empty() {
            text.push(FILLER.choose(&mut self.rng).expect("non-empty").to_string());
        }
        text.shuffle(&mut self.rng);
        let mut seen = BTreeSet::new();
        hashtags.retain(|h| seen.insert(h.clone()));
        let body = text.join(" ") + &hashtags.iter().map(|h| format!(" #{h}")).collect::<String>();
        let idx = self.tweets.len();
        let id = format!("t{idx:07}");
        let likes = if self.influencers.contains(&author) { self.rng.random_range(5_000..20_000) } else { self.rng.random_range(0..20) };
        let (conversation_id, references) = match reply_to {
            Some(r) => {
                let root = &mut self.tweets[r];
                root.reply_count += 1;
                (root.conversation_id.clone(), vec![Reference { kind: ReferenceKind::RepliedTo, target_tweet_id: root.id.clone() }])
            }
            None => (id.clone(), vec![]),
        };
        if let Some(r) = reply_to {
            let target = &self.tweets[r];
            self.edges.push(InteractionEdge {
                author_id: user_id(author),
                target_id: target.author_id.clone(),
                kind: InteractionKind::Reply,
                tweet_id: id.clone(),
                conversation_id: conversation_id.clone(),
                timestamp: at,
                sentiment: score_text(&body, &self.lexicon),
            });
        }
        self.tweets.push(Tweet {
            id,
            author_id: user_id(author),
            conversation_id,
            created_at: at,
            text: body,
            references,
            like_count: likes,
            reply_count: 0,
            retweet_count: self.rng.random_range(0..5),
            quote_count: 0,
            hashtags,
        });
        idx
    }

    fn day_start(&self, day: u32) -> DateTime<Utc> {
        (self.cfg.start_date + Duration::days(day as i64)).and_hms_opt(0, 0, 0).expect("midnight").and_utc()
    }

    fn early(&mut self, day: u32) -> DateTime<Utc> {
        self.day_start(day) + Duration::seconds(self.rng.random_range(0..3_600))
    }

    fn late(&mut self, day: u32) -> DateTime<Utc> {
        self.day_start(day) + Duration::seconds(self.rng.random_range(3_600..86_400))
    }

    fn daily_root(&mut self, user: usize, day: u32) -> usize {
        if let Some(&r) = self.daily_roots.get(&(user, day)) {
            return r;
        }
        let at = self.early(day);
        let s = self.gaussian(0.0);
        let r = self.post(user, at, s, 0, None);
        self.daily_roots.insert((user, day), r);
        r
    }

    fn links(&mut self) {
        let n = self.stance.len();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.stance[i], self.stance[j]);
                let same = a.is_decided() && a == b;
                let p = if same { self.cfg.p_in } else { self.cfg.p_out };
                if !self.rng.random_bool(p) {
                    continue;
                }
                let (author, target) = if self.rng.random_bool(0.5) { (i, j) } else { (j, i) };
                let day = self.rng.random_range(0..self.cfg.days);
                let mean = if same {
                    self.cfg.mu_in
                } else if a.is_decided() && b.is_decided() {
                    self.cfg.mu_out
                } else {
                    0.0
                };
                let s = self.gaussian(mean);
                let root = self.daily_root(target, day);
                let at = self.late(day);
                self.post(author, at, s, 0, Some(root));
            }
        }
    }

    fn background(&mut self) {
        let n = self.stance.len();
        for day in 0..self.cfg.days {
            for _ in 0..self.cfg.conversations_per_day {
                let author = self.rng.random_range(0..n);
                let mean = if self.stance[author].is_decided() { self.cfg.mu_in } else { 0.0 };
                let s = self.gaussian(mean);
                let at = self.late(day);
                self.post(author, at, s, 0, None);
            }
        }
        let activists: Vec<usize> = self.activists.iter().copied().collect();
        for a in activists {
            for _ in 0..3 {
                let day = self.rng.random_range(0..self.cfg.days);
                let s = self.gaussian(self.cfg.mu_in);
                let at = self.late(day);
                let k = self.rng.random_range(1..=2);
                self.post(a, at, s, k, None);
            }
        }
    }

    fn planted(&mut self) -> Vec<(String, String, PlantedSpec)> {
        let mut next: BTreeMap<Stance, usize> = BTreeMap::new();
        let mut out = Vec::new();
        for spec in self.cfg.planted_conversations.clone() {
            let pool: Vec<usize> = self.influencers.iter().copied().filter(|&i| self.stance[i] == spec.stance).collect();
            let slot = next.entry(spec.stance).or_insert(0);
            let inf = pool[*slot % pool.len()];
            *slot += 1;
            let other = if spec.stance == Stance::Pro { Stance::Anti } else { Stance::Pro };
            let cross = (spec.size as f64 * spec.cross_fraction).round() as usize;
            let mut opposite: Vec<usize> = (0..self.stance.len()).filter(|&i| self.stance[i] == other).collect();
            let mut own: Vec<usize> = (0..self.stance.len()).filter(|&i| self.stance[i] == spec.stance && i != inf).collect();
            opposite.shuffle(&mut self.rng);
            own.shuffle(&mut self.rng);
            let mut repliers: Vec<usize> = opposite[..cross].iter().chain(&own[..spec.size - cross]).copied().collect();
            repliers.shuffle(&mut self.rng);

            let at = self.early(spec.day);
            let s = self.gaussian(self.cfg.mu_in);
            let root = self.post(inf, at, s, 1, None);
            for r in repliers {
                let s = self.gaussian(spec.sentiment_bias);
                let at = self.late(spec.day);
                self.post(r, at, s, 0, Some(root));
            }
            out.push((self.tweets[root].id.clone(), user_id(inf), spec));
        }
        out
    }
}

/// Generates a corpus, its ground truth and the planted-conversation manifest.
pub fn generate_corpus(cfg: &SynthConfig) -> Result<SynthCorpus> {
    cfg.validate()?;
    let mut g = Generator::new(cfg);
    g.assign_stances();
    g.links();
    g.background();
    let planted = g.planted();

    let truth: BTreeMap<String, Stance> = g.stance.iter().enumerate().map(|(i, s)| (user_id(i), *s)).collect();
    let manifest = planted
        .into_iter()
        .map(|(conversation_id, influencer_id, spec)| {
            let sub = naive_subgraph(&g.edges, &influencer_id);
            let mut expected = Vec::new();
            for (a, b) in [(Stance::Pro, Stance::Anti), (Stance::Anti, Stance::Pro)] {
                for mode in WeightMode::ALL {
                    let (with, without, delta) =
                        oracle_delta(&sub, &truth, &conversation_id, (a, b), mode, DEFAULT_TAU, RemovalMode::Edges)?;
                    expected.push(Expectation { direction: format!("{a}->{b}"), weight_mode: mode, with, without, delta });
                }
            }
            Ok(PlantedConversation { conversation_id, influencer_id, spec, expected })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SynthCorpus {
        tweets: g.tweets,
        truth,
        seed_hashtags: cfg.seed_hashtags(),
        manifest,
        edges: g.edges,
        influencers: g.influencers.iter().map(|&i| user_id(i)).collect(),
    })
}

pub const CORPUS_FILE: &str = "corpus.jsonl";
pub const GROUND_TRUTH_FILE: &str = "ground_truth.csv";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const SEED_HASHTAGS_FILE: &str = "seed_hashtags.csv";

impl SynthCorpus {
    /// Writes the corpus, ground truth, manifest and seed hashtags into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        crate::io::write_jsonl(&dir.join(CORPUS_FILE), &self.tweets)?;
        let mut w = crate::io::csv_writer(&dir.join(GROUND_TRUTH_FILE))?;
        w.write_record(["user_id", "true_stance"])?;
        for (u, s) in &self.truth {
            w.write_record([u.as_str(), s.as_str()])?;
        }
        w.flush()?;
        let mut w = crate::io::csv_writer(&dir.join(SEED_HASHTAGS_FILE))?;
        w.write_record(["hashtag", "side"])?;
        for (h, s) in &self.seed_hashtags {
            w.write_record([h.as_str(), s.as_str()])?;
        }
        w.flush()?;
        std::fs::write(dir.join(MANIFEST_FILE), serde_json::to_string_pretty(&self.manifest)? + "\n")?;
        Ok(())
    }
}

pub fn read_manifest(path: &Path) -> Result<Vec<PlantedConversation>> {
    Ok(serde_json::from_str(&crate::io::read_to_string(path)?)?)
}

pub fn read_config(path: &Path) -> Result<SynthConfig> {
    Ok(serde_json::from_str(&crate::io::read_to_string(path)?)?)
}

/// Single-pass E/I tally over a raw edge list.
pub fn oracle_ei(
    edges: &[InteractionEdge],
    stances: &BTreeMap<String, Stance>,
    direction: (Stance, Stance),
    mode: WeightMode,
    tau: f64,
) -> Result<Option<f64>> {
    let (a, b) = direction;
    if a == b || a == Stance::Undecided || b == Stance::Undecided {
        return Err(Error::invalid("direction needs two distinct decided groups"));
    }
    let mut external = 0.0;
    let mut internal = 0.0;
    for e in edges {
        if e.author_id == e.target_id {
            continue;
        }
        if stances.get(&e.author_id).copied() != Some(a) {
            continue;
        }
        let w = match mode {
            WeightMode::CountAll => 1.0,
            WeightMode::CountNegative => (e.sentiment < -tau) as u8 as f64,
            WeightMode::SentimentMass => f64::max(0.0, -e.sentiment),
        };
        let target = stances.get(&e.target_id).copied();
        if target == Some(b) {
            external += w;
        } else if target == Some(a) {
            internal += w;
        }
    }
    if external + internal == 0.0 {
        Ok(None)
    } else {
        Ok(Some((external - internal) / (external + internal)))
    }
}

/// Scores with and without a conversation, both recomputed from filtered edge lists.
///
/// Node removal drops every edge touching a user who authored an edge in the
/// conversation or was its target.
pub fn oracle_delta(
    edges: &[InteractionEdge],
    stances: &BTreeMap<String, Stance>,
    conversation_id: &str,
    direction: (Stance, Stance),
    mode: WeightMode,
    tau: f64,
    removal: RemovalMode,
) -> Result<(Option<f64>, Option<f64>, Option<f64>)> {
    let with = oracle_ei(edges, stances, direction, mode, tau)?;
    let kept: Vec<InteractionEdge> = match removal {
        RemovalMode::Edges => edges.iter().filter(|e| e.conversation_id != conversation_id).cloned().collect(),
        RemovalMode::Nodes => {
            let mut gone = BTreeSet::new();
            for e in edges.iter().filter(|e| e.conversation_id == conversation_id) {
                gone.insert(e.author_id.as_str());
                gone.insert(e.target_id.as_str());
            }
            edges
                .iter()
                .filter(|e| !gone.contains(e.author_id.as_str()) && !gone.contains(e.target_id.as_str()))
                .cloned()
                .collect()
        }
    };
    let without = oracle_ei(&kept, stances, direction, mode, tau)?;
    let delta = match (with, without) {
        (Some(w), Some(wo)) => Some(w - wo),
        _ => None,
    };
    Ok((with, without, delta))
}

/// Influencer-centred edge subset: the influencer's interaction partners,
/// their own partners, and every edge among those users.
pub fn naive_subgraph(edges: &[InteractionEdge], influencer: &str) -> Vec<InteractionEdge> {
    let mut audience = BTreeSet::new();
    for e in edges {
        if e.author_id == e.target_id {
            continue;
        }
        if e.author_id == influencer {
            audience.insert(e.target_id.as_str());
        }
        if e.target_id == influencer {
            audience.insert(e.author_id.as_str());
        }
    }
    let mut keep: BTreeSet<&str> = audience.clone();
    keep.insert(influencer);
    for e in edges {
        if e.author_id == e.target_id {
            continue;
        }
        if audience.contains(e.author_id.as_str()) {
            keep.insert(&e.target_id);
        }
        if audience.contains(e.target_id.as_str()) {
            keep.insert(&e.author_id);
        }
    }
    edges.iter().filter(|e| keep.contains(e.author_id.as_str()) && keep.contains(e.target_id.as_str())).cloned().collect()
}
