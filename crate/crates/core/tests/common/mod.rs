#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{Duration, Instant};

use chrono::{TimeZone, Utc};
use polarlens::corpus::{self, Conversation, Tweet};
use polarlens::counterfactual::{self, compare, Classification, CounterfactualResult};
use polarlens::graph::{InteractionEdge, InteractionGraph, InteractionKind};
use polarlens::pipeline::{self, PipelineConfig};
use polarlens::polarization::{ei_index, Direction, WeightMode};
use polarlens::sentiment::DEFAULT_TAU;
use polarlens::stance::{self, GcnModel, Matrix, NormalizedAdjacency, ThresholdPair};
use polarlens::synth::{self, SynthConfig};
use polarlens::Stance;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

pub fn edge(author: &str, target: &str, conv: &str, secs: i64, sentiment: f64) -> InteractionEdge {
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

fn graph_of(edges: Vec<InteractionEdge>) -> InteractionGraph {
    InteractionGraph::from_parts(std::iter::empty::<String>(), edges)
}

fn random_case(rng: &mut ChaCha8Rng) -> (Vec<InteractionEdge>, BTreeMap<String, Stance>) {
    let n = rng.random_range(1..=50);
    let users: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
    let mut stances = BTreeMap::new();
    for u in &users {
        if rng.random_bool(0.95) {
            stances.insert(u.clone(), *[Stance::Pro, Stance::Anti, Stance::Undecided].choose(rng).unwrap());
        }
    }
    let m = rng.random_range(0..=150);
    let edges = (0..m)
        .map(|k| {
            let a = users.choose(rng).unwrap();
            let b = users.choose(rng).unwrap();
            let s = if rng.random_bool(0.1) { 0.0 } else { rng.random_range(-1.0..=1.0) };
            edge(a, b, &format!("c{}", k % 7), k as i64 * 60, s)
        })
        .collect();
    (edges, stances)
}

/// E/I index against the brute-force oracle on 1,000 random graphs.
pub fn ei_oracle_equivalence() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20220524);
    let mut defined = 0;
    for case in 0..1000 {
        let (edges, stances) = random_case(&mut rng);
        let g = graph_of(edges.clone());
        for mode in WeightMode::ALL {
            for (a, b) in [(Stance::Pro, Stance::Anti), (Stance::Anti, Stance::Pro)] {
                let got = ei_index(&g, &stances, Direction::new(a, b).unwrap(), mode, DEFAULT_TAU).map_err(|e| e.to_string())?.value;
                let want = synth::oracle_ei(&edges, &stances, (a, b), mode, DEFAULT_TAU).map_err(|e| e.to_string())?;
                let ok = match (got, want) {
                    (None, None) => true,
                    (Some(x), Some(y)) if mode == WeightMode::SentimentMass => (x - y).abs() <= 1e-12,
                    (Some(x), Some(y)) => x == y,
                    _ => false,
                };
                ensure!(ok, "case {case} {mode} {a}->{b}: engine {got:?} oracle {want:?}");
                defined += usize::from(got.is_some());
            }
        }
    }
    let elapsed = started.elapsed();
    ensure!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    Ok(format!("1000 graphs, {defined} defined scores, {elapsed:.2?}"))
}

fn pro_anti(edges: Vec<InteractionEdge>) -> Option<f64> {
    let stances: BTreeMap<String, Stance> =
        [("p1", Stance::Pro), ("p2", Stance::Pro), ("a1", Stance::Anti)].map(|(u, s)| (u.to_string(), s)).into();
    ei_index(&graph_of(edges), &stances, Direction::PRO_ANTI, WeightMode::CountNegative, DEFAULT_TAU).unwrap().value
}

/// All-internal, all-external and empty cases.
pub fn ei_extremes() -> Check {
    let internal = pro_anti(vec![edge("p1", "p2", "c", 0, -0.5), edge("p2", "p1", "c", 1, -0.3)]);
    ensure!(internal == Some(-1.0), "all internal gave {internal:?}");
    let external = pro_anti(vec![edge("p1", "a1", "c", 0, -0.5), edge("p2", "a1", "c", 1, -0.9)]);
    ensure!(external == Some(1.0), "all external gave {external:?}");
    let empty = pro_anti(vec![edge("p1", "a1", "c", 0, 0.5)]);
    ensure!(empty.is_none(), "0/0 gave {empty:?}");
    Ok("-1, +1, undefined".into())
}

/// Score differences and their classification at three decimals.
pub fn counterfactual_regression() -> Check {
    let (delta, class) = compare(Some(0.471), Some(0.633));
    let shown = format!("{:.3}", delta.unwrap());
    ensure!(shown == "-0.162" && class == Classification::Decrease, "0.471 vs 0.633: {shown} {class}");
    let (delta, class) = compare(Some(0.229), Some(0.079));
    let shown = format!("{:.3}", delta.unwrap());
    ensure!(shown == "0.150" && class == Classification::Increase, "0.229 vs 0.079: {shown} {class}");
    Ok("-0.162 decrease, +0.150 increase".into())
}

fn result_for(influencer: &str, conv: usize, delta: f64) -> CounterfactualResult {
    let (delta_shown, classification) = compare(Some(0.5 + delta), Some(0.5));
    CounterfactualResult {
        conversation_id: format!("{influencer}-c{conv}"),
        influencer_id: influencer.into(),
        influencer_stance: Stance::Pro,
        direction: Direction::PRO_ANTI,
        day: chrono::NaiveDate::from_ymd_opt(2022, 5, 24).unwrap(),
        score_with: Some(0.5 + delta),
        score_without: Some(0.5),
        delta: delta_shown,
        classification,
        undecided_influencer: false,
        audience_size: 0,
        audience_from_followers: false,
    }
}

/// Influencer summary cells for an all-decrease and an 11-of-18 increase case.
pub fn summary_formatting() -> Check {
    let mut results: Vec<_> = (0..5).map(|i| result_for("user1", i, -0.1)).collect();
    results.extend((0..18).map(|i| result_for("user4", i, if i < 11 { 0.1 } else { -0.1 })));
    let summaries = counterfactual::summarize_influencer(&results);
    let cell = |id: &str| {
        summaries
            .iter()
            .find(|s| s.influencer_id == id)
            .and_then(|s| s.per_direction.get(&Direction::PRO_ANTI))
            .map(counterfactual::format_influencer_cell)
            .unwrap_or_default()
    };
    let user1 = cell("user1");
    ensure!(user1 == "100.0% - decrease", "user1 cell {user1:?}");
    let user4 = cell("user4");
    ensure!(user4.split(" - ").next() == Some("61.11%"), "user4 cell {user4:?}");
    Ok(format!("{user1:?}, {user4:?}"))
}

/// Inclusive threshold boundaries.
pub fn threshold_semantics() -> Check {
    let pair = ThresholdPair::new(0.40, 0.60).map_err(|e| e.to_string())?;
    let got = [pair.classify(0.40), pair.classify(0.60), pair.classify(0.50)];
    ensure!(got == [Stance::Pro, Stance::Anti, Stance::Undecided], "got {got:?}");
    Ok("0.40 pro, 0.60 anti, 0.50 undecided".into())
}

/// Macro-F1 over {pro, anti}, computed directly from the confusion counts.
fn oracle_macro_f1(labeled: &[(f64, Stance)], t1: f64, t2: f64) -> f64 {
    let mut per_class = Vec::new();
    for class in [Stance::Pro, Stance::Anti] {
        let predicted = |p: f64| if p <= t1 { Stance::Pro } else if p >= t2 { Stance::Anti } else { Stance::Undecided };
        let tp = labeled.iter().filter(|(p, s)| *s == class && predicted(*p) == class).count();
        let fp = labeled.iter().filter(|(p, s)| *s != class && predicted(*p) == class).count();
        let fneg = labeled.iter().filter(|(p, s)| *s == class && predicted(*p) != class).count();
        let denom = 2 * tp + fp + fneg;
        per_class.push(if denom == 0 { 0.0 } else { (2 * tp) as f64 / denom as f64 });
    }
    (per_class[0] + per_class[1]) / 2.0
}

/// Every grid point and the selected pair against an exhaustive scorer.
pub fn grid_search_optimality() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let step = 0.05;
    let steps = 10usize;
    for case in 0..100 {
        let n = rng.random_range(1..60);
        let labeled: Vec<(f64, Stance)> = (0..n)
            .map(|_| {
                let p = if rng.random_bool(0.5) { rng.random_range(0..=40) as f64 * 0.025 } else { rng.random::<f64>() };
                (p, if rng.random_bool(0.5) { Stance::Pro } else { Stance::Anti })
            })
            .collect();
        let cal = stance::calibrate_thresholds(&labeled, step).map_err(|e| e.to_string())?;
        ensure!(cal.grid.len() == steps * steps, "case {case}: grid has {} points", cal.grid.len());
        let mut best: Option<(f64, usize, usize, (f64, f64))> = None;
        for k1 in 1..=steps {
            for k2 in 0..steps {
                let t1 = (k1 as f64 * 0.5) / steps as f64;
                let t2 = 0.5 + (k2 as f64 * 0.5) / steps as f64;
                let f1 = oracle_macro_f1(&labeled, t1, t2);
                let point = cal.grid.iter().find(|g| g.k1 == k1 && g.k2 == k2).ok_or(format!("case {case}: missing ({k1},{k2})"))?;
                ensure!(point.pair.t1 == t1 && point.pair.t2 == t2, "case {case}: grid point ({k1},{k2}) at {:?}", point.pair);
                ensure!(point.macro_f1 == f1, "case {case} ({t1},{t2}): engine {} oracle {f1}", point.macro_f1);
                let width = steps - k1 + k2;
                let better = match best {
                    None => true,
                    Some((bf, bw, bk1, _)) => f1 > bf || (f1 == bf && (width > bw || (width == bw && k1 < bk1))),
                };
                if better {
                    best = Some((f1, width, k1, (t1, t2)));
                }
            }
        }
        let (_, _, _, want) = best.expect("non-empty grid");
        ensure!((cal.best.pair.t1, cal.best.pair.t2) == want, "case {case}: selected {:?}, oracle {want:?}", cal.best.pair);
    }
    Ok("100 labeled sets, 100 grid points each".into())
}

fn fixture_adjacency() -> NormalizedAdjacency {
    let links = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5)];
    let mut nb = vec![BTreeSet::new(); 6];
    for (a, b) in links {
        nb[a].insert(b);
        nb[b].insert(a);
    }
    NormalizedAdjacency::from_neighbors(&nb)
}

/// Analytic gradients against central differences on a 6-node graph.
pub fn gcn_gradient_check() -> Check {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let adj = fixture_adjacency();
    let x = Matrix::from_shape_fn((6, 5), |_| rng.random_range(-1.0..1.0));
    let mut model = GcnModel::init(5, 4, &mut rng);
    model.b1.mapv_inplace(|_| rng.random_range(-0.1..0.1));
    model.b2.mapv_inplace(|_| rng.random_range(-0.1..0.1));
    let labels = [(0, Stance::Pro), (1, Stance::Pro), (3, Stance::Anti), (5, Stance::Anti)];
    let decay = 5e-4;
    let (_, grads) = stance::loss_and_gradients(&adj, &x, &model, &labels, decay).map_err(|e| e.to_string())?;
    let eps = 1e-5;
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let analytic: Vec<f64> = grads.w1.iter().chain(&grads.b1).chain(&grads.w2).chain(&grads.b2).copied().collect();
    let sizes = [model.w1.len(), model.b1.len(), model.w2.len(), model.b2.len()];
    for (tensor, &size) in sizes.iter().enumerate() {
        for i in 0..size {
            let loss_at = |delta: f64| {
                let mut m = model.clone();
                let slot = match tensor {
                    0 => &mut m.w1.as_slice_mut().unwrap()[i],
                    1 => &mut m.b1.as_slice_mut().unwrap()[i],
                    2 => &mut m.w2.as_slice_mut().unwrap()[i],
                    _ => &mut m.b2.as_slice_mut().unwrap()[i],
                };
                *slot += delta;
                stance::loss_and_gradients(&adj, &x, &m, &labels, decay).map(|(l, _)| l)
            };
            let numeric = (loss_at(eps).map_err(|e| e.to_string())? - loss_at(-eps).map_err(|e| e.to_string())?) / (2.0 * eps);
            let a = analytic[count];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            worst = worst.max(rel);
            count += 1;
        }
    }
    let elapsed = started.elapsed();
    ensure!(worst < 1e-4, "max relative error {worst:e}");
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!("{count} parameters, max relative error {worst:.2e}, {elapsed:.2?}"))
}

pub struct SyntheticRun {
    pub accuracy: f64,
    pub decided: usize,
    pub seeds: usize,
    pub sign_checks: usize,
    pub elapsed: Duration,
}

/// Generates the default synthetic corpus into `dir` and runs the whole pipeline on it.
pub fn synthetic_run(dir: &Path) -> std::result::Result<SyntheticRun, String> {
    let started = Instant::now();
    let cfg = PipelineConfig { out: dir.to_path_buf(), ..Default::default() };
    let corpus = pipeline::run_synth(&cfg).map_err(|e| e.to_string())?;
    let summary = pipeline::run_pipeline(&cfg).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();

    let labels = stance::stance_map(&stance::read_stances(&cfg.out_path(pipeline::STANCES_FILE)).map_err(|e| e.to_string())?);
    let decided: Vec<(&String, &Stance)> = corpus.truth.iter().filter(|(_, s)| s.is_decided()).collect();
    let correct = decided.iter().filter(|(u, s)| labels.get(*u) == Some(s)).count();

    let results = counterfactual::read_results(&cfg.out_path(pipeline::COUNTERFACTUAL_FILE)).map_err(|e| e.to_string())?;
    let recomputed = pipeline::run_counterfactual(&cfg).map_err(|e| e.to_string())?.0;
    if recomputed.len() != results.len() {
        return Err("counterfactual rerun disagrees with written results".into());
    }
    let mut sign_checks = 0;
    for planted in &corpus.manifest {
        for dir in [Direction::PRO_ANTI, Direction::ANTI_PRO] {
            let want = planted
                .expectation(&dir.to_string(), cfg.weight_mode)
                .ok_or(format!("{}: no manifest entry for {dir}", planted.conversation_id))?;
            let got = recomputed
                .iter()
                .find(|r| r.conversation_id == planted.conversation_id && r.direction == dir)
                .ok_or(format!("{}: no counterfactual result for {dir}", planted.conversation_id))?;
            let sign = |d: Option<f64>| d.map(|v| v.partial_cmp(&0.0).expect("finite delta"));
            if sign(got.delta) != sign(want.delta) {
                return Err(format!(
                    "{} {dir}: delta {:?} but manifest expects {:?}",
                    planted.conversation_id, got.delta, want.delta
                ));
            }
            sign_checks += 1;
        }
    }
    Ok(SyntheticRun {
        accuracy: correct as f64 / decided.len() as f64,
        decided: decided.len(),
        seeds: summary.stance.pro_seeds + summary.stance.anti_seeds,
        sign_checks,
        elapsed,
    })
}

/// Stance recovery and planted delta signs on the default synthetic corpus.
pub fn synthetic_recovery() -> Check {
    let defaults = SynthConfig::default();
    ensure!(
        defaults.n_users == 1000 && defaults.p_in == 0.05 && defaults.p_out == 0.005 && defaults.hashtag_users_per_side == 20,
        "synthetic defaults drifted"
    );
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = synthetic_run(dir.path())?;
    ensure!(run.seeds == 40, "{} seed users, expected 40", run.seeds);
    ensure!(run.accuracy >= 0.90, "accuracy {:.4} on {} decided users", run.accuracy, run.decided);
    ensure!(run.elapsed < Duration::from_secs(120), "pipeline took {:?}", run.elapsed);
    Ok(format!(
        "accuracy {:.2}% on {} users, {} seeds, {} delta signs match, {:.2?}",
        100.0 * run.accuracy,
        run.decided,
        run.seeds,
        run.sign_checks,
        run.elapsed
    ))
}

fn conversation(n_tweets: usize, n_users: usize) -> Conversation {
    let id = format!("c{n_tweets}x{n_users}");
    Conversation {
        conversation_id: id.clone(),
        root_tweet_id: id.clone(),
        tweet_ids: (0..n_tweets).map(|i| format!("{id}-{i}")).collect(),
        participant_ids: (0..n_users).map(|i| format!("u{i}")).collect(),
        initiator_id: "u0".into(),
        started_at: Utc.with_ymd_and_hms(2022, 5, 24, 0, 0, 0).unwrap(),
    }
}

/// Engagement filter at its boundary.
pub fn engagement_boundary() -> Check {
    let convs = [conversation(20, 10), conversation(19, 10), conversation(20, 9)];
    let kept = corpus::filter_conversations(&convs, corpus::DEFAULT_MIN_TWEETS, corpus::DEFAULT_MIN_USERS).map_err(|e| e.to_string())?;
    let ids: Vec<&str> = kept.iter().map(|c| c.conversation_id.as_str()).collect();
    ensure!(ids == ["c20x10"], "kept {ids:?}");
    Ok("20/10 kept, 19/10 and 20/9 dropped".into())
}

fn tree_digest(root: &Path) -> std::io::Result<BTreeMap<String, Vec<u8>>> {
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(root)? {
        let path = entry?.path();
        out.insert(path.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&path)?);
    }
    Ok(out)
}

/// Two full runs with the same seed produce identical files.
pub fn determinism() -> Check {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    for dir in [a.path(), b.path()] {
        let cfg = PipelineConfig { out: dir.to_path_buf(), ..Default::default() };
        pipeline::run_synth(&cfg).map_err(|e| e.to_string())?;
        pipeline::run_pipeline(&cfg).map_err(|e| e.to_string())?;
    }
    let (ta, tb) = (tree_digest(a.path()).map_err(|e| e.to_string())?, tree_digest(b.path()).map_err(|e| e.to_string())?);
    ensure!(ta.keys().eq(tb.keys()), "file sets differ");
    for (name, bytes) in &ta {
        ensure!(tb[name] == *bytes, "{name} differs between runs");
    }
    Ok(format!("{} files identical", ta.len()))
}

fn tagged(id: &str, author: &str, tags: &[&str]) -> Tweet {
    Tweet {
        id: id.into(),
        author_id: author.into(),
        conversation_id: id.into(),
        created_at: Utc.with_ymd_and_hms(2022, 5, 24, 12, 0, 0).unwrap(),
        text: String::new(),
        references: Vec::new(),
        like_count: 0,
        reply_count: 0,
        retweet_count: 0,
        quote_count: 0,
        hashtags: tags.iter().map(|t| t.to_string()).collect(),
    }
}

/// The three label propagation fixed points.
pub fn propagation_fixed_points() -> Check {
    let tol = 1e-6;
    let seeds: BTreeMap<String, Stance> = [("zero", Stance::Pro), ("one", Stance::Anti)].map(|(h, s)| (h.to_string(), s)).into();
    let run = |tweets: &[Tweet]| stance::propagate(&stance::build_bipartite(tweets, &seeds), 1.0, tol, 100).map_err(|e| e.to_string());

    let single = run(&[tagged("t1", "u", &["zero"])])?;
    ensure!(single.p_anti["u"] == 0.0 && single.converged, "single seed: {:?}", single.p_anti);

    let mixed = run(&[tagged("t1", "u", &["zero"]), tagged("t2", "u", &["zero"]), tagged("t3", "u", &["one"])])?;
    ensure!((mixed.p_anti["u"] - 1.0 / 3.0).abs() <= tol && mixed.converged, "weighted mean: {:?}", mixed.p_anti);

    let chain = run(&[tagged("t1", "u1", &["zero", "x"]), tagged("t2", "u2", &["x"])])?;
    let hx = chain.hashtag_values["x"];
    ensure!(
        chain.p_anti["u1"].abs() <= tol && chain.p_anti["u2"].abs() <= tol && hx.abs() <= tol,
        "linear fixed point: {:?}, x = {hx}",
        chain.p_anti
    );
    let iterations = [single.iterations, mixed.iterations, chain.iterations];
    ensure!(chain.converged && iterations.iter().all(|&i| i <= 100), "iterations {iterations:?}");
    Ok(format!("iterations {iterations:?}"))
}

pub type Criterion = (&'static str, fn() -> Check);

pub const CRITERIA: [Criterion; 11] = [
    ("E/I oracle equivalence", ei_oracle_equivalence),
    ("E/I extremes", ei_extremes),
    ("counterfactual regression", counterfactual_regression),
    ("summary formatting", summary_formatting),
    ("threshold semantics", threshold_semantics),
    ("grid-search optimality", grid_search_optimality),
    ("GCN gradient check", gcn_gradient_check),
    ("synthetic recovery", synthetic_recovery),
    ("engagement filter boundary", engagement_boundary),
    ("determinism", determinism),
    ("label propagation fixed points", propagation_fixed_points),
];
