//! Parses a JSON Lines corpus, assembles conversations, applies the
//! engagement filter and ranks influencers.
//!
//! Pass a corpus path, or run without arguments to use a small generated one.

use std::io::Cursor;

use polarlens::corpus::{assemble_conversations, filter_conversations, parse_corpus, rank_influencers};
use polarlens::synth::{generate_corpus, SynthConfig};

fn main() -> polarlens::Result<()> {
    let jsonl = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let corpus = generate_corpus(&SynthConfig { n_users: 300, conversations_per_day: 60, ..SynthConfig::default() })?;
            corpus.tweets.iter().map(|t| serde_json::to_string(t).map(|s| s + "\n")).collect::<Result<String, _>>()?
        }
    };
    // a malformed line is skipped and counted unless parsing is strict
    let input = format!("{jsonl}{{\"id\": broken\n");
    let (tweets, report) = parse_corpus(Cursor::new(input), false)?;
    println!("read {} lines, accepted {}, skipped {}", report.lines_read, report.accepted, report.skipped());

    let conversations = assemble_conversations(&tweets);
    let kept = filter_conversations(&conversations, 20, 10)?;
    println!("{} conversations, {} with at least 20 tweets and 10 users", conversations.len(), kept.len());
    for c in &kept {
        println!("  {} by {}: {} tweets, {} users", c.conversation_id, c.initiator_id, c.n_tweets(), c.n_users());
    }

    println!("top influencers by likes:");
    for r in rank_influencers(&tweets, 5)? {
        println!("  #{} {} ({} likes over {} tweets)", r.rank, r.user_id, r.total_likes, r.tweet_count);
    }
    Ok(())
}
