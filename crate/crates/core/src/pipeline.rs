//! Stage drivers behind the `polarlens` binary.
//!
//! Every stage reads its inputs from the configured paths or from the output
//! directory written by earlier stages, and writes its artifacts back into
//! the output directory. Re-running a stage with unchanged inputs rewrites
//! byte-identical files.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{self, Conversation, InfluencerRecord, Tweet};
use crate::counterfactual::{self, EffectSettings, Followers, Scope};
use crate::error::{Error, Result};
use crate::graph::{build_graph, BuildOptions, InteractionGraph, RemovalMode};
use crate::io;
use crate::polarization::{self, Direction, PolarizationScore, WeightMode};
use crate::report;
use crate::sentiment::{self, Lexicon, SentimentRecord};
use crate::stance::{self, GcnConfig, SeedSelection, Stance, StanceAssignment, StanceSource, ThresholdPair};
use crate::synth::{self, SynthConfig};

/// Flat run configuration. Every key has a default; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Tweet corpus (JSON Lines). Defaults to `<out>/corpus.jsonl`.
    pub corpus: Option<PathBuf>,
    /// Lexicon file; the built-in lexicon is used when absent.
    pub lexicon: Option<PathBuf>,
    pub boosters: Option<PathBuf>,
    pub negators: Option<PathBuf>,
    /// Seed hashtags (`hashtag,side`). Defaults to `<out>/seed_hashtags.csv`.
    pub seed_hashtags: Option<PathBuf>,
    pub external_scores: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    /// Follower lists (`influencer_id,follower_id`).
    pub followers: Option<PathBuf>,
    /// Reference stance labels (`user_id,label`) for threshold calibration.
    pub labels: Option<PathBuf>,
    /// Synthetic generator settings (JSON). Defaults apply when absent.
    pub synth_config: Option<PathBuf>,
    pub out: PathBuf,
    pub strict: bool,
    pub min_tweets: usize,
    pub min_users: usize,
    pub top_k: usize,
    pub include_quotes: bool,
    pub tau: f64,
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed_min_uses: u64,
    pub seed_lo: f64,
    pub seed_hi: f64,
    pub feature_dim: usize,
    pub hidden: usize,
    pub lr: f64,
    pub weight_decay: f64,
    pub epochs: usize,
    pub validation_fraction: f64,
    pub grid_step: f64,
    pub t1: Option<f64>,
    pub t2: Option<f64>,
    pub weight_mode: WeightMode,
    pub removal_mode: RemovalMode,
    pub scope: Scope,
    pub rng_seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let gcn = GcnConfig::default();
        let sel = SeedSelection::default();
        PipelineConfig {
            corpus: None,
            lexicon: None,
            boosters: None,
            negators: None,
            seed_hashtags: None,
            external_scores: None,
            embeddings: None,
            followers: None,
            labels: None,
            synth_config: None,
            out: PathBuf::from("out"),
            strict: false,
            min_tweets: corpus::DEFAULT_MIN_TWEETS,
            min_users: corpus::DEFAULT_MIN_USERS,
            top_k: 10,
            include_quotes: true,
            tau: sentiment::DEFAULT_TAU,
            damping: 1.0,
            tol: 1e-6,
            max_iter: 100,
            seed_min_uses: sel.min_uses,
            seed_lo: sel.lo,
            seed_hi: sel.hi,
            feature_dim: stance::DEFAULT_FEATURE_DIM,
            hidden: gcn.hidden,
            lr: gcn.lr,
            weight_decay: gcn.weight_decay,
            epochs: gcn.epochs,
            validation_fraction: gcn.validation_fraction,
            grid_step: 0.05,
            t1: None,
            t2: None,
            weight_mode: WeightMode::default(),
            removal_mode: RemovalMode::default(),
            scope: Scope::default(),
            rng_seed: 0,
        }
    }
}

impl PipelineConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&io::read_to_string(path)?)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_tweets < 1 || self.min_users < 1 || self.top_k < 1 {
            return Err(Error::invalid("min_tweets, min_users and top_k must be at least 1"));
        }
        if !(self.tau >= 0.0) {
            return Err(Error::invalid("tau must be non-negative"));
        }
        if self.t1.is_some() != self.t2.is_some() {
            return Err(Error::invalid("t1 and t2 must be given together"));
        }
        self.manual_thresholds()?;
        for p in [&self.lexicon, &self.boosters, &self.negators, &self.external_scores, &self.embeddings, &self.followers, &self.labels, &self.synth_config]
            .into_iter()
            .flatten()
        {
            if !p.exists() {
                return Err(Error::MissingInput(p.clone()));
            }
        }
        Ok(())
    }

    fn manual_thresholds(&self) -> Result<Option<ThresholdPair>> {
        match (self.t1, self.t2) {
            (Some(t1), Some(t2)) => ThresholdPair::new(t1, t2).map(Some),
            _ => Ok(None),
        }
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn corpus_path(&self) -> PathBuf {
        self.corpus.clone().unwrap_or_else(|| self.out_path(synth::CORPUS_FILE))
    }

    fn seed_hashtag_path(&self) -> PathBuf {
        self.seed_hashtags.clone().unwrap_or_else(|| self.out_path(synth::SEED_HASHTAGS_FILE))
    }

    fn gcn(&self) -> GcnConfig {
        GcnConfig {
            hidden: self.hidden,
            lr: self.lr,
            weight_decay: self.weight_decay,
            epochs: self.epochs,
            rng_seed: self.rng_seed,
            validation_fraction: self.validation_fraction,
        }
    }

    fn effect_settings(&self) -> EffectSettings {
        EffectSettings { scope: self.scope, removal_mode: self.removal_mode, weight_mode: self.weight_mode, tau: self.tau }
    }
}

pub const CONVERSATIONS_FILE: &str = "conversations.jsonl";
pub const FILTERED_FILE: &str = "filtered_conversations.jsonl";
pub const INFLUENCERS_FILE: &str = "influencers.csv";
pub const INGEST_REPORT_FILE: &str = "ingest_report.json";
pub const SENTIMENT_FILE: &str = "sentiment.jsonl";
pub const GRAPH_FILE: &str = "graph.csv";
pub const STANCES_FILE: &str = "stances.csv";
pub const SEEDS_FILE: &str = "seeds.csv";
pub const STANCE_REPORT_FILE: &str = "stance_report.json";
pub const MODEL_FILE: &str = "model.json";
pub const LOSS_FILE: &str = "loss_trace.csv";
pub const POLARIZATION_FILE: &str = "polarization.csv";
pub const TIMELINE_FILE: &str = "timeline.csv";
pub const COUNTERFACTUAL_FILE: &str = "counterfactual.csv";
pub const DETAILS_FILE: &str = "conversation_details.csv";
pub const FAILURES_FILE: &str = "counterfactual_failures.json";
pub const INFLUENCER_SUMMARY_FILE: &str = "influencer_summary.csv";
pub const STANCE_SUMMARY_FILE: &str = "stance_summary.csv";

fn prepare_out(cfg: &PipelineConfig) -> Result<()> {
    std::fs::create_dir_all(&cfg.out)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

fn load_tweets(cfg: &PipelineConfig) -> Result<(Vec<Tweet>, corpus::ParseReport)> {
    corpus::parse_corpus(io::open(&cfg.corpus_path())?, cfg.strict)
}

/// Writes a synthetic corpus plus ground truth, manifest and seed hashtags.
pub fn run_synth(cfg: &PipelineConfig) -> Result<synth::SynthCorpus> {
    let synth_cfg = match &cfg.synth_config {
        Some(p) => synth::read_config(p)?,
        None => SynthConfig { rng_seed: cfg.rng_seed, ..SynthConfig::default() },
    };
    let corpus = synth::generate_corpus(&synth_cfg)?;
    prepare_out(cfg)?;
    corpus.write(&cfg.out)?;
    log::info!("synth: {} tweets, {} planted conversations", corpus.tweets.len(), corpus.manifest.len());
    Ok(corpus)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestSummary {
    pub lines_read: usize,
    pub accepted: usize,
    pub malformed: usize,
    pub duplicates: usize,
    pub conversations: usize,
    pub filtered_conversations: usize,
    pub influencers: usize,
}

pub const INFLUENCER_CSV_HEADER: [&str; 6] = ["rank", "user_id", "tweet_count", "total_likes", "total_retweets", "total_replies"];

pub fn run_ingest(cfg: &PipelineConfig) -> Result<IngestSummary> {
    let (tweets, report) = load_tweets(cfg)?;
    let convs = corpus::assemble_conversations(&tweets);
    let filtered = corpus::filter_conversations(&convs, cfg.min_tweets, cfg.min_users)?;
    let influencers = corpus::rank_influencers(&tweets, cfg.top_k)?;
    prepare_out(cfg)?;
    io::write_jsonl(&cfg.out_path(CONVERSATIONS_FILE), convs.iter().map(Conversation::index_entry))?;
    io::write_jsonl(&cfg.out_path(FILTERED_FILE), filtered.iter().map(Conversation::index_entry))?;
    let mut w = io::csv_writer(&cfg.out_path(INFLUENCERS_FILE))?;
    w.write_record(INFLUENCER_CSV_HEADER)?;
    for r in &influencers {
        w.write_record([
            r.rank.to_string(),
            r.user_id.clone(),
            r.tweet_count.to_string(),
            r.total_likes.to_string(),
            r.total_retweets.to_string(),
            r.total_replies.to_string(),
        ])?;
    }
    w.flush()?;
    let summary = IngestSummary {
        lines_read: report.lines_read,
        accepted: report.accepted,
        malformed: report.malformed,
        duplicates: report.duplicates,
        conversations: convs.len(),
        filtered_conversations: filtered.len(),
        influencers: influencers.len(),
    };
    write_json(&cfg.out_path(INGEST_REPORT_FILE), &summary)?;
    log::info!("ingest: {} tweets, {} of {} conversations pass the filter", report.accepted, filtered.len(), convs.len());
    Ok(summary)
}

fn lexicon(cfg: &PipelineConfig) -> Result<Lexicon> {
    match &cfg.lexicon {
        Some(p) => Lexicon::from_files(p, cfg.boosters.as_deref(), cfg.negators.as_deref()),
        None => Ok(Lexicon::builtin()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentSummary {
    pub scored: usize,
    pub external_applied: usize,
    pub external_unknown: usize,
    pub external_rejected: usize,
    pub graph_edges: usize,
    pub unresolved_references: usize,
}

pub fn run_sentiment(cfg: &PipelineConfig) -> Result<SentimentSummary> {
    let (tweets, _) = load_tweets(cfg)?;
    let mut records = sentiment::score_tweets(&tweets, &lexicon(cfg)?);
    let mut summary = SentimentSummary {
        scored: records.len(),
        external_applied: 0,
        external_unknown: 0,
        external_rejected: 0,
        graph_edges: 0,
        unresolved_references: 0,
    };
    if let Some(p) = &cfg.external_scores {
        let (merged, report) = sentiment::merge_external_scores(records, &sentiment::read_external_scores(p)?);
        records = merged;
        summary.external_applied = report.applied;
        summary.external_unknown = report.unknown_tweets;
        summary.external_rejected = report.rejected.len();
    }
    prepare_out(cfg)?;
    io::write_jsonl(&cfg.out_path(SENTIMENT_FILE), &records)?;
    let convs = corpus::assemble_conversations(&tweets);
    let (graph, build) = build_graph(&convs, &tweets, &records, BuildOptions { include_quotes: cfg.include_quotes });
    graph.write_csv(std::fs::File::create(cfg.out_path(GRAPH_FILE))?)?;
    summary.graph_edges = build.edges;
    summary.unresolved_references = build.unresolved_references;
    Ok(summary)
}

fn read_sentiment(cfg: &PipelineConfig) -> Result<Vec<SentimentRecord>> {
    io::lines(&cfg.out_path(SENTIMENT_FILE))?
        .into_iter()
        .map(|(line, l)| serde_json::from_str(&l).map_err(|e| Error::Malformed { line, message: e.to_string() }))
        .collect()
}

/// Tweets, all conversations, and the interaction graph over every conversation.
pub struct Loaded {
    pub tweets: Vec<Tweet>,
    pub conversations: Vec<Conversation>,
    pub graph: InteractionGraph,
}

pub fn load_graph(cfg: &PipelineConfig) -> Result<Loaded> {
    let (tweets, _) = load_tweets(cfg)?;
    let records = read_sentiment(cfg)?;
    let conversations = corpus::assemble_conversations(&tweets);
    let (graph, _) = build_graph(&conversations, &tweets, &records, BuildOptions { include_quotes: cfg.include_quotes });
    Ok(Loaded { tweets, conversations, graph })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StanceSummary {
    pub propagation_iterations: usize,
    pub propagation_converged: bool,
    pub pro_seeds: usize,
    pub anti_seeds: usize,
    pub best_epoch: usize,
    pub t1: f64,
    pub t2: f64,
    pub threshold_source: String,
    pub calibration_macro_f1: Option<f64>,
    pub labeled: BTreeMap<String, usize>,
}

pub fn run_stance(cfg: &PipelineConfig) -> Result<(Vec<StanceAssignment>, StanceSummary)> {
    let loaded = load_graph(cfg)?;
    let seed_tags = stance::read_seed_hashtags(&cfg.seed_hashtag_path())?;
    let bip = stance::build_bipartite(&loaded.tweets, &seed_tags);
    let prop = stance::propagate(&bip, cfg.damping, cfg.tol, cfg.max_iter)?;
    let selection = SeedSelection { min_uses: cfg.seed_min_uses, lo: cfg.seed_lo, hi: cfg.seed_hi };
    let seeds = stance::select_seed_users(&prop.p_anti, &bip.seed_usage(), selection);
    let seed_label: BTreeMap<&str, &StanceAssignment> = seeds.iter().map(|s| (s.user_id.as_str(), s)).collect();

    let users: Vec<String> = loaded.graph.nodes().iter().cloned().collect();
    if users.is_empty() {
        return Err(Error::invalid("interaction graph has no users"));
    }
    let mut texts: BTreeMap<String, String> = users.iter().map(|u| (u.clone(), String::new())).collect();
    for t in &loaded.tweets {
        if let Some(buf) = texts.get_mut(&t.author_id) {
            buf.push_str(&t.text);
            buf.push('\n');
        }
    }
    let external = cfg.embeddings.as_deref().map(stance::read_embeddings).transpose()?;
    let features = stance::extract_features(&texts, cfg.feature_dim, external.as_ref())?;
    let dim = features.values().next().map_or(cfg.feature_dim, Vec::len);
    let mut x = stance::Matrix::zeros((users.len(), dim));
    for (i, u) in users.iter().enumerate() {
        for (j, v) in features[u].iter().enumerate() {
            x[[i, j]] = *v;
        }
    }
    let adj = stance::normalize_adjacency(&loaded.graph, &users)?;
    let index: BTreeMap<&str, usize> = users.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let train: Vec<(usize, Stance)> = seeds.iter().filter_map(|s| index.get(s.user_id.as_str()).map(|&i| (i, s.label))).collect();
    let outcome = stance::gcn_train(&adj, &x, &train, &cfg.gcn())?;
    let probs = stance::gcn_forward(&adj, &x, &outcome.model)?;
    let p_anti: BTreeMap<String, f64> = users.iter().enumerate().map(|(i, u)| (u.clone(), probs[[i, 1]])).collect();

    let (pair, source, f1) = if let Some(pair) = cfg.manual_thresholds()? {
        (pair, "manual", None)
    } else if let Some(path) = &cfg.labels {
        let reference = stance::read_label_file(path)?;
        let labeled: Vec<(f64, Stance)> = reference
            .iter()
            .filter(|(_, s)| s.is_decided())
            .filter_map(|(u, s)| p_anti.get(u).map(|p| (*p, *s)))
            .collect();
        let c = stance::calibrate_thresholds(&labeled, cfg.grid_step)?;
        (c.best.pair, "calibrated", Some(c.best.macro_f1))
    } else {
        (ThresholdPair::default(), "default", None)
    };

    let mut assignments = stance::assign_stances(&p_anti, pair);
    for a in &mut assignments {
        if let Some(s) = seed_label.get(a.user_id.as_str()) {
            a.p_anti = s.p_anti;
            a.label = s.label;
            a.source = StanceSource::Seed;
        }
    }
    let in_graph: BTreeSet<&str> = users.iter().map(String::as_str).collect();
    assignments.extend(seeds.iter().filter(|s| !in_graph.contains(s.user_id.as_str())).cloned());
    assignments.sort_by(|a, b| a.user_id.cmp(&b.user_id));

    prepare_out(cfg)?;
    stance::write_stances(&cfg.out_path(STANCES_FILE), &assignments)?;
    stance::write_stances(&cfg.out_path(SEEDS_FILE), &seeds)?;
    std::fs::write(cfg.out_path(MODEL_FILE), outcome.model.to_json()? + "\n")?;
    let mut w = io::csv_writer(&cfg.out_path(LOSS_FILE))?;
    w.write_record(["epoch", "train_loss", "validation_loss"])?;
    for (e, (tr, va)) in outcome.loss_trace.iter().enumerate() {
        w.write_record([(e + 1).to_string(), format!("{tr:.9}"), format!("{va:.9}")])?;
    }
    w.flush()?;

    let mut labeled = BTreeMap::new();
    for a in &assignments {
        *labeled.entry(a.label.to_string()).or_insert(0) += 1;
    }
    let summary = StanceSummary {
        propagation_iterations: prop.iterations,
        propagation_converged: prop.converged,
        pro_seeds: seeds.iter().filter(|s| s.label == Stance::Pro).count(),
        anti_seeds: seeds.iter().filter(|s| s.label == Stance::Anti).count(),
        best_epoch: outcome.best_epoch,
        t1: pair.t1,
        t2: pair.t2,
        threshold_source: source.to_string(),
        calibration_macro_f1: f1,
        labeled,
    };
    write_json(&cfg.out_path(STANCE_REPORT_FILE), &summary)?;
    log::info!("stance: {} seeds, thresholds ({}, {}) [{source}]", seeds.len(), pair.t1, pair.t2);
    Ok((assignments, summary))
}

fn load_stances(cfg: &PipelineConfig) -> Result<BTreeMap<String, Stance>> {
    Ok(stance::stance_map(&stance::read_stances(&cfg.out_path(STANCES_FILE))?))
}

const DIRECTIONS: [Direction; 2] = [Direction::PRO_ANTI, Direction::ANTI_PRO];

pub const POLARIZATION_CSV_HEADER: [&str; 6] = ["direction", "weight_mode", "value", "ext_weight", "int_weight", "defined"];

pub fn run_polarize(cfg: &PipelineConfig) -> Result<(Vec<PolarizationScore>, Vec<PolarizationScore>)> {
    let loaded = load_graph(cfg)?;
    let stances = load_stances(cfg)?;
    let g = &loaded.graph;
    let mut overall = Vec::new();
    for mode in WeightMode::ALL {
        for d in DIRECTIONS {
            overall.push(polarization::ei_index(g, &stances, d, mode, cfg.tau)?);
        }
    }
    let mut timeline = Vec::new();
    if let (Some(start), Some(end)) = (g.days().next(), g.days().last()) {
        for d in DIRECTIONS {
            timeline.extend(polarization::daily_timeline(g, &stances, d, cfg.weight_mode, cfg.tau, start, end)?);
        }
        timeline.sort_by_key(|s| (s.day, s.direction));
    }
    prepare_out(cfg)?;
    let mut w = io::csv_writer(&cfg.out_path(POLARIZATION_FILE))?;
    w.write_record(POLARIZATION_CSV_HEADER)?;
    for s in &overall {
        w.write_record([
            s.direction.to_string(),
            s.weight_mode.to_string(),
            io::fmt_opt(s.value, 6),
            format!("{:.6}", s.ext_weight),
            format!("{:.6}", s.int_weight),
            s.is_defined().to_string(),
        ])?;
    }
    w.flush()?;
    polarization::write_timeline(&cfg.out_path(TIMELINE_FILE), &timeline)?;
    Ok((overall, timeline))
}

fn read_followers(path: &Path) -> Result<Followers> {
    let mut r = io::csv_reader(path)?;
    let mut out = Followers::new();
    for row in r.records() {
        let row = row?;
        match (row.get(0), row.get(1)) {
            (Some(i), Some(f)) if !i.is_empty() && !f.is_empty() => {
                out.entry(i.to_string()).or_default().insert(f.to_string());
            }
            _ => return Err(Error::invalid("follower file rows need influencer_id,follower_id")),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterfactualSummary {
    pub results: usize,
    pub failures: usize,
    pub conversations: usize,
}

pub fn run_counterfactual(cfg: &PipelineConfig) -> Result<(Vec<counterfactual::CounterfactualResult>, CounterfactualSummary)> {
    let loaded = load_graph(cfg)?;
    let stances = load_stances(cfg)?;
    let filtered = corpus::filter_conversations(&loaded.conversations, cfg.min_tweets, cfg.min_users)?;
    let influencers: Vec<InfluencerRecord> = corpus::rank_influencers(&loaded.tweets, cfg.top_k)?;
    let followers = cfg.followers.as_deref().map(read_followers).transpose()?;
    let (results, failures) = counterfactual::batch_effects(
        &loaded.graph,
        &stances,
        &filtered,
        &influencers,
        &DIRECTIONS,
        &cfg.effect_settings(),
        followers.as_ref(),
    );
    for f in &failures {
        log::warn!("counterfactual {}: {}", f.conversation_id, f.message);
    }
    prepare_out(cfg)?;
    counterfactual::write_results(&cfg.out_path(COUNTERFACTUAL_FILE), &results)?;
    counterfactual::write_details(&cfg.out_path(DETAILS_FILE), &results)?;
    write_json(&cfg.out_path(FAILURES_FILE), &failures)?;
    let summary = CounterfactualSummary {
        results: results.len(),
        failures: failures.len(),
        conversations: results.iter().map(|r| r.conversation_id.as_str()).collect::<BTreeSet<_>>().len(),
    };
    Ok((results, summary))
}

/// Renders summaries, the markdown report and the timeline plot from existing CSVs.
pub fn run_report(cfg: &PipelineConfig) -> Result<()> {
    let results = counterfactual::read_results(&cfg.out_path(COUNTERFACTUAL_FILE))?;
    let stances_path = cfg.out_path(STANCES_FILE);
    let stances = if stances_path.exists() { Some(load_stances(cfg)?) } else { None };
    let timeline_path = cfg.out_path(TIMELINE_FILE);
    let timeline = if timeline_path.exists() { polarization::read_timeline(&timeline_path)? } else { Vec::new() };
    let by_influencer = counterfactual::summarize_influencer(&results);
    let by_stance = counterfactual::summarize_stance_group(&results, stances.as_ref());
    counterfactual::write_influencer_summary(&cfg.out_path(INFLUENCER_SUMMARY_FILE), &by_influencer)?;
    counterfactual::write_stance_summary(&cfg.out_path(STANCE_SUMMARY_FILE), &by_stance)?;
    std::fs::write(cfg.out_path(report::REPORT_FILE), report::render_markdown(&results, &by_influencer, &by_stance))?;
    std::fs::write(cfg.out_path(report::TIMELINE_SVG_FILE), report::render_timeline_svg(&timeline))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineSummary {
    pub ingest: IngestSummary,
    pub sentiment: SentimentSummary,
    pub stance: StanceSummary,
    pub counterfactual: CounterfactualSummary,
}

pub const RUN_SUMMARY_FILE: &str = "run_summary.json";

/// Runs every analysis stage in order on an existing corpus.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineSummary> {
    let ingest = run_ingest(cfg)?;
    let sentiment = run_sentiment(cfg)?;
    let (_, stance) = run_stance(cfg)?;
    run_polarize(cfg)?;
    let (_, counterfactual) = run_counterfactual(cfg)?;
    run_report(cfg)?;
    let summary = PipelineSummary { ingest, sentiment, stance, counterfactual };
    write_json(&cfg.out_path(RUN_SUMMARY_FILE), &summary)?;
    Ok(summary)
}
