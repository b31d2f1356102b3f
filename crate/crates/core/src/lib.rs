//! Affective polarization analysis around influencer-led conversations.
//!
//! The crate covers the whole chain from raw conversation corpora to
//! counterfactual polarization deltas:
//!
//! - [`corpus`]: JSON Lines ingestion, conversation assembly, engagement
//!   filtering and influencer ranking.
//! - [`sentiment`]: a lexicon scorer with negation, boosters and caps
//!   emphasis, plus merging of externally produced model scores.
//! - [`graph`]: the user-to-user interaction multigraph, daily slicing,
//!   influencer-centred subgraphs and conversation removal.
//! - [`stance`]: hashtag label propagation for seed users, a two-layer graph
//!   convolutional classifier and dual-threshold calibration.
//! - [`polarization`]: directional E/I index scores and daily timelines.
//! - [`counterfactual`]: with/without conversation effects and the
//!   per-influencer and per-stance summaries built on them.
//! - [`synth`]: seeded synthetic corpora with planted conversations and
//!   brute-force reference scorers.
//! - [`pipeline`]: the stage drivers behind the `polarlens` binary.

pub mod corpus;
pub mod counterfactual;
pub mod error;
pub mod graph;
pub mod io;
pub mod pipeline;
pub mod polarization;
pub mod report;
pub mod sentiment;
pub mod stance;
pub mod synth;
pub mod text;

pub use error::{Error, Result};
pub use stance::Stance;
