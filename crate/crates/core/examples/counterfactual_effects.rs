//! Effect of each planted influencer conversation on polarization, scored
//! with and without the conversation.

use polarlens::corpus::{assemble_conversations, filter_conversations, rank_influencers};
use polarlens::counterfactual::{batch_effects, summarize_influencer, summarize_stance_group, EffectSettings, Scope};
use polarlens::graph::{build_graph, BuildOptions, RemovalMode};
use polarlens::polarization::Direction;
use polarlens::report::render_markdown;
use polarlens::sentiment::{score_tweets, Lexicon};
use polarlens::synth::{generate_corpus, SynthConfig};

fn main() -> polarlens::Result<()> {
    let corpus = generate_corpus(&SynthConfig::default())?;
    let conversations = assemble_conversations(&corpus.tweets);
    let sentiment = score_tweets(&corpus.tweets, &Lexicon::builtin());
    let (graph, _) = build_graph(&conversations, &corpus.tweets, &sentiment, BuildOptions::default());
    let eligible = filter_conversations(&conversations, 20, 10)?;
    let influencers = rank_influencers(&corpus.tweets, 10)?;
    let directions = [Direction::PRO_ANTI, Direction::ANTI_PRO];

    for (scope, removal_mode) in [(Scope::Subgraph, RemovalMode::Edges), (Scope::Daily, RemovalMode::Nodes)] {
        let settings = EffectSettings { scope, removal_mode, ..EffectSettings::default() };
        let (results, failures) = batch_effects(&graph, &corpus.truth, &eligible, &influencers, &directions, &settings, None);
        println!("== scope {scope:?}, removal {removal_mode:?}: {} results, {} failures", results.len(), failures.len());
        for r in &results {
            println!(
                "{} ({}) {:<10} with {:?} without {:?} -> {}",
                r.conversation_id,
                r.influencer_id,
                r.direction.to_string(),
                r.score_with.map(|v| (v * 1000.0).round() / 1000.0),
                r.score_without.map(|v| (v * 1000.0).round() / 1000.0),
                r.classification
            );
        }
        if scope == Scope::Subgraph {
            let md = render_markdown(&results, &summarize_influencer(&results), &summarize_stance_group(&results, Some(&corpus.truth)));
            println!("\n{md}");
        }
    }
    Ok(())
}
