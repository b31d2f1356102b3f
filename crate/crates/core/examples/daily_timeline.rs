//! Daily E/I scores over a generated corpus, written as CSV and SVG.

use polarlens::corpus::assemble_conversations;
use polarlens::graph::{build_graph, BuildOptions};
use polarlens::polarization::{daily_timeline, read_timeline, write_timeline, Direction, WeightMode};
use polarlens::report::render_timeline_svg;
use polarlens::sentiment::{score_tweets, Lexicon, DEFAULT_TAU};
use polarlens::synth::{generate_corpus, SynthConfig};

fn main() -> polarlens::Result<()> {
    let corpus = generate_corpus(&SynthConfig { days: 5, ..SynthConfig::default() })?;
    let conversations = assemble_conversations(&corpus.tweets);
    let sentiment = score_tweets(&corpus.tweets, &Lexicon::builtin());
    let (graph, _) = build_graph(&conversations, &corpus.tweets, &sentiment, BuildOptions::default());

    let (start, end) = (graph.days().next().expect("non-empty"), graph.days().last().expect("non-empty"));
    let mut scores = Vec::new();
    for direction in [Direction::PRO_ANTI, Direction::ANTI_PRO] {
        scores.extend(daily_timeline(&graph, &corpus.truth, direction, WeightMode::CountNegative, DEFAULT_TAU, start, end)?);
    }
    scores.sort_by_key(|s| (s.day, s.direction));
    for s in &scores {
        println!("{} {:<10} {}", s.day.unwrap(), s.direction.to_string(), s.value.map_or("undefined".into(), |v| format!("{v:+.3}")));
    }

    let dir = std::env::temp_dir().join("polarlens-timeline");
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("timeline.csv");
    write_timeline(&csv, &scores)?;
    let svg = dir.join("timeline.svg");
    std::fs::write(&svg, render_timeline_svg(&read_timeline(&csv)?))?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
