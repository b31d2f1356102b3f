//! Scores a few sentences with the built-in lexicon.

use polarlens::sentiment::{classify_valence, raw_sum, score_text, Lexicon, DEFAULT_TAU};

fn main() {
    let lexicon = Lexicon::builtin();
    let samples = [
        "good",
        "very good",
        "not good",
        "this is GREAT news",
        "a horrible, tragic day",
        "meeting at noon",
    ];
    println!("{:<28} {:>8} {:>8}  valence", "text", "raw", "score");
    for text in samples {
        let score = score_text(text, &lexicon);
        println!("{text:<28} {:>8.4} {score:>8.4}  {:?}", raw_sum(text, &lexicon), classify_valence(score, DEFAULT_TAU));
    }

    let custom = Lexicon::from_entries([("based", 1.5), ("cringe", -1.8)]).with_negators(["never"]);
    println!("custom lexicon: {:.4}", score_text("never cringe", &custom));
}
