//! Two-stage stance labeling on a generated corpus: hashtag propagation
//! picks seed users, then a graph convolutional classifier labels everyone.

use std::collections::BTreeMap;

use polarlens::corpus::assemble_conversations;
use polarlens::graph::{build_graph, BuildOptions};
use polarlens::sentiment::{score_tweets, Lexicon};
use polarlens::stance::{
    assign_stances, build_bipartite, extract_features, gcn_forward, gcn_train, normalize_adjacency, propagate, select_seed_users,
    GcnConfig, Matrix, SeedSelection, ThresholdPair, DEFAULT_FEATURE_DIM,
};
use polarlens::synth::{generate_corpus, SynthConfig};
use polarlens::Stance;

fn main() -> polarlens::Result<()> {
    let corpus = generate_corpus(&SynthConfig { n_users: 500, ..SynthConfig::default() })?;

    let bipartite = build_bipartite(&corpus.tweets, &corpus.seed_hashtags);
    let propagation = propagate(&bipartite, 1.0, 1e-6, 100)?;
    let seeds = select_seed_users(&propagation.p_anti, &bipartite.seed_usage(), SeedSelection::default());
    println!("propagation converged in {} iterations; {} seed users", propagation.iterations, seeds.len());

    let conversations = assemble_conversations(&corpus.tweets);
    let sentiment = score_tweets(&corpus.tweets, &Lexicon::builtin());
    let (graph, _) = build_graph(&conversations, &corpus.tweets, &sentiment, BuildOptions::default());
    let users: Vec<String> = graph.nodes().iter().cloned().collect();

    let mut texts: BTreeMap<String, String> = users.iter().map(|u| (u.clone(), String::new())).collect();
    for t in &corpus.tweets {
        if let Some(buf) = texts.get_mut(&t.author_id) {
            buf.push_str(&t.text);
            buf.push('\n');
        }
    }
    let features = extract_features(&texts, DEFAULT_FEATURE_DIM, None)?;
    let x = Matrix::from_shape_fn((users.len(), DEFAULT_FEATURE_DIM), |(i, j)| features[&users[i]][j]);
    let adjacency = normalize_adjacency(&graph, &users)?;

    let index: BTreeMap<&str, usize> = users.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let train: Vec<(usize, Stance)> = seeds.iter().filter_map(|s| index.get(s.user_id.as_str()).map(|&i| (i, s.label))).collect();
    let outcome = gcn_train(&adjacency, &x, &train, &GcnConfig::default())?;
    let probs = gcn_forward(&adjacency, &x, &outcome.model)?;
    println!("best validation loss at epoch {}", outcome.best_epoch);

    let p_anti: BTreeMap<String, f64> = users.iter().enumerate().map(|(i, u)| (u.clone(), probs[[i, 1]])).collect();
    let labels = assign_stances(&p_anti, ThresholdPair::default());
    let decided: Vec<_> = labels.iter().filter(|a| corpus.truth[&a.user_id].is_decided()).collect();
    let correct = decided.iter().filter(|a| a.label == corpus.truth[&a.user_id]).count();
    println!("accuracy on decided users: {correct}/{} ({:.1}%)", decided.len(), 100.0 * correct as f64 / decided.len() as f64);
    Ok(())
}
