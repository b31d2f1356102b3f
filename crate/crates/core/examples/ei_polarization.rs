//! E/I index on a hand-built interaction graph under each weight mode.

use std::collections::BTreeMap;

use chrono::{TimeZone, Utc};
use polarlens::graph::{InteractionEdge, InteractionGraph, InteractionKind};
use polarlens::polarization::{both_directions, WeightMode};
use polarlens::sentiment::DEFAULT_TAU;
use polarlens::Stance;

fn reply(author: &str, target: &str, minute: i64, sentiment: f64) -> InteractionEdge {
    InteractionEdge {
        author_id: author.into(),
        target_id: target.into(),
        kind: InteractionKind::Reply,
        tweet_id: format!("{author}-{target}-{minute}"),
        conversation_id: "thread".into(),
        timestamp: Utc.with_ymd_and_hms(2022, 5, 24, 9, 0, 0).unwrap() + chrono::Duration::minutes(minute),
        sentiment,
    }
}

fn main() -> polarlens::Result<()> {
    let stances: BTreeMap<String, Stance> = [
        ("ana", Stance::Pro),
        ("ben", Stance::Pro),
        ("cal", Stance::Anti),
        ("dee", Stance::Anti),
        ("eve", Stance::Undecided),
    ]
    .map(|(u, s)| (u.to_string(), s))
    .into();
    let edges = vec![
        reply("ana", "cal", 1, -0.6),
        reply("ana", "ben", 2, -0.2),
        reply("ben", "dee", 3, -0.8),
        reply("ben", "ana", 4, 0.7),
        reply("cal", "dee", 5, -0.4),
        reply("cal", "ana", 6, -0.3),
        reply("dee", "eve", 7, -0.9),
    ];
    let graph = InteractionGraph::from_parts(std::iter::empty::<String>(), edges);

    for mode in WeightMode::ALL {
        let (forward, backward) = both_directions(&graph, &stances, (Stance::Pro, Stance::Anti), mode, DEFAULT_TAU)?;
        for s in [forward, backward] {
            let value = s.value.map_or("undefined".to_string(), |v| format!("{v:+.3}"));
            println!("{mode:<15} {:<10} ext {:.2} int {:.2} -> {value}", s.direction.to_string(), s.ext_weight, s.int_weight);
        }
    }
    Ok(())
}
