use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use super::{Stance, StanceAssignment, StanceSource};
use crate::corpus::Tweet;
use crate::error::{Error, Result};

/// Weighted user-hashtag graph with clamped seed hashtags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BipartiteGraph {
    users: Vec<String>,
    hashtags: Vec<String>,
    /// Per user: `(hashtag index, usage count)`.
    user_adj: Vec<Vec<(usize, f64)>>,
    /// Per hashtag: `(user index, usage count)`.
    tag_adj: Vec<Vec<(usize, f64)>>,
    /// Hashtag index -> clamped value (0 = pro, 1 = anti).
    seeds: BTreeMap<usize, f64>,
}

impl BipartiteGraph {
    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn hashtags(&self) -> &[String] {
        &self.hashtags
    }

    pub fn weight(&self, user: &str, hashtag: &str) -> u64 {
        let (Ok(u), Ok(h)) = (self.users.binary_search_by(|x| x.as_str().cmp(user)), self.hashtags.binary_search_by(|x| x.as_str().cmp(hashtag))) else {
            return 0;
        };
        self.user_adj[u].iter().find(|(t, _)| *t == h).map(|(_, w)| *w as u64).unwrap_or(0)
    }

    pub fn seed_hashtags(&self) -> BTreeMap<&str, f64> {
        self.seeds.iter().map(|(&h, &v)| (self.hashtags[h].as_str(), v)).collect()
    }

    /// Per user: total uses of seed hashtags.
    pub fn seed_usage(&self) -> BTreeMap<String, u64> {
        self.users
            .iter()
            .zip(&self.user_adj)
            .map(|(u, adj)| {
                let n: f64 = adj.iter().filter(|(h, _)| self.seeds.contains_key(h)).map(|(_, w)| w).sum();
                (u.clone(), n as u64)
            })
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty() && self.hashtags.is_empty()
    }
}

/// Reads a `hashtag,side` CSV with side in {pro, anti}.
pub fn read_seed_hashtags(path: &Path) -> Result<BTreeMap<String, Stance>> {
    let mut r = crate::io::csv_reader(path)?;
    let mut out = BTreeMap::new();
    for row in r.records() {
        let row = row?;
        let (Some(tag), Some(side)) = (row.get(0), row.get(1)) else {
            return Err(Error::invalid("seed hashtag rows need hashtag and side"));
        };
        let side: Stance = side.parse()?;
        if !side.is_decided() {
            return Err(Error::invalid(format!("seed hashtag {tag:?} must be pro or anti")));
        }
        out.insert(tag.trim_start_matches('#').to_lowercase(), side);
    }
    Ok(out)
}

/// `weight(u, h)` is the number of `u`'s tweets carrying `h`.
///
/// Seed hashtags that never occur are kept as isolated clamped nodes.
pub fn build_bipartite(tweets: &[Tweet], seed_hashtags: &BTreeMap<String, Stance>) -> BipartiteGraph {
    let mut counts: BTreeMap<(&str, &str), u64> = BTreeMap::new();
    for t in tweets {
        for h in &t.hashtags {
            *counts.entry((t.author_id.as_str(), h.as_str())).or_default() += 1;
        }
    }
    let mut users: Vec<String> = counts.keys().map(|(u, _)| u.to_string()).collect();
    users.dedup();
    let mut hashtags: Vec<String> = counts.keys().map(|(_, h)| h.to_string()).collect();
    for (tag, _) in seed_hashtags.iter().filter(|(_, s)| s.is_decided()) {
        if !counts.keys().any(|(_, h)| h == tag) {
            log::warn!("seed hashtag #{tag} does not occur in the corpus");
        }
        hashtags.push(tag.clone());
    }
    hashtags.sort();
    hashtags.dedup();

    let tag_idx = |h: &str| hashtags.binary_search_by(|x| x.as_str().cmp(h)).expect("hashtag indexed");
    let mut user_adj = vec![Vec::new(); users.len()];
    let mut tag_adj = vec![Vec::new(); hashtags.len()];
    let mut ui = 0;
    for (&(u, h), &n) in &counts {
        while users[ui] != u {
            ui += 1;
        }
        let hi = tag_idx(h);
        user_adj[ui].push((hi, n as f64));
        tag_adj[hi].push((ui, n as f64));
    }
    let seeds = seed_hashtags
        .iter()
        .filter_map(|(tag, side)| side.seed_value().map(|v| (tag_idx(tag), v)))
        .collect();
    BipartiteGraph { users, hashtags, user_adj, tag_adj, seeds }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Propagation {
    pub p_anti: BTreeMap<String, f64>,
    pub hashtag_values: BTreeMap<String, f64>,
    pub iterations: usize,
    pub converged: bool,
}

/// Reciprocal label propagation.
///
/// Users and unclamped hashtags start at 0.5. Each iteration sets every user
/// to the usage-weighted mean of its hashtags, then every unclamped hashtag
/// to the usage-weighted mean of its users; `damping` blends the new value
/// with the old one. Iteration stops once the largest change is below `tol`
/// and the geometric estimate of the remaining distance to the fixed point,
/// `change * r / (1 - r)` with `r` the observed contraction ratio, is too.
pub fn propagate(bip: &BipartiteGraph, damping: f64, tol: f64, max_iter: usize) -> Result<Propagation> {
    if bip.seeds.is_empty() {
        return Err(Error::invalid("label propagation needs at least one seed hashtag"));
    }
    if !(damping > 0.0 && damping <= 1.0) {
        return Err(Error::invalid(format!("damping {damping} outside (0, 1]")));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let mut tag_val: Vec<f64> = (0..bip.hashtags.len()).map(|h| bip.seeds.get(&h).copied().unwrap_or(0.5)).collect();
    let mut user_val = vec![0.5; bip.users.len()];

    let weighted_mean = |adj: &[(usize, f64)], vals: &[f64]| {
        let (num, den) = adj.iter().fold((0.0, 0.0), |(n, d), &(j, w)| (n + w * vals[j], d + w));
        num / den
    };

    let mut prev_change = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let mut change: f64 = 0.0;
        for (u, adj) in bip.user_adj.iter().enumerate() {
            let next = (1.0 - damping) * user_val[u] + damping * weighted_mean(adj, &tag_val);
            change = change.max((next - user_val[u]).abs());
            user_val[u] = next;
        }
        for (h, adj) in bip.tag_adj.iter().enumerate() {
            if bip.seeds.contains_key(&h) || adj.is_empty() {
                continue;
            }
            let next = (1.0 - damping) * tag_val[h] + damping * weighted_mean(adj, &user_val);
            change = change.max((next - tag_val[h]).abs());
            tag_val[h] = next;
        }
        let ratio = if prev_change.is_finite() { change / prev_change } else { f64::INFINITY };
        let remaining = if ratio < 1.0 { change * ratio / (1.0 - ratio) } else { f64::INFINITY };
        if change == 0.0 || (change < tol && remaining < tol) {
            converged = true;
            break;
        }
        prev_change = change;
    }
    if !converged {
        log::warn!("label propagation stopped after {iterations} iterations without converging");
    }
    Ok(Propagation {
        p_anti: bip.users.iter().cloned().zip(user_val).collect(),
        hashtag_values: bip.hashtags.iter().cloned().zip(tag_val).collect(),
        iterations,
        converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct SeedSelection {
    pub min_uses: u64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for SeedSelection {
    fn default() -> Self {
        SeedSelection { min_uses: 3, lo: 0.25, hi: 0.75 }
    }
}

/// Users with at least `min_uses` seed-hashtag uses and `p <= lo` (pro) or `p >= hi` (anti).
pub fn select_seed_users(
    p_anti: &BTreeMap<String, f64>,
    usage: &BTreeMap<String, u64>,
    sel: SeedSelection,
) -> Vec<StanceAssignment> {
    p_anti
        .iter()
        .filter(|(u, _)| usage.get(*u).copied().unwrap_or(0) >= sel.min_uses)
        .filter_map(|(u, &p)| {
            let label = if p <= sel.lo {
                Stance::Pro
            } else if p >= sel.hi {
                Stance::Anti
            } else {
                return None;
            };
            Some(StanceAssignment { user_id: u.clone(), p_anti: p, label, source: StanceSource::Seed })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Tweet;
    use chrono::{TimeZone, Utc};
    use proptest::prelude::*;

    fn post(author: &str, tags: &[&str]) -> Tweet {
        Tweet {
            id: format!("{author}-{}", tags.join("-")),
            author_id: author.into(),
            conversation_id: "c".into(),
            created_at: Utc.timestamp_opt(0, 0).unwrap(),
            text: String::new(),
            references: vec![],
            like_count: 0,
            reply_count: 0,
            retweet_count: 0,
            quote_count: 0,
            hashtags: tags.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn seeds(pairs: &[(&str, Stance)]) -> BTreeMap<String, Stance> {
        pairs.iter().map(|(t, s)| (t.to_string(), *s)).collect()
    }

    fn uniq(mut ts: Vec<Tweet>) -> Vec<Tweet> {
        for (i, t) in ts.iter_mut().enumerate() {
            t.id = format!("t{i}");
        }
        ts
    }

    #[test]
    fn weights_count_tweets() {
        let tweets = uniq(vec![post("u", &["climatehoax"]), post("u", &["climatehoax"])]);
        let bip = build_bipartite(&tweets, &BTreeMap::new());
        assert_eq!(bip.weight("u", "climatehoax"), 2);
        assert!(build_bipartite(&[], &BTreeMap::new()).is_empty());
    }

    #[test]
    fn two_by_three_fixture() {
        let tweets = uniq(vec![
            post("u1", &["a", "b"]),
            post("u1", &["a"]),
            post("u1", &["c"]),
            post("u2", &["b", "c"]),
            post("u2", &["c"]),
        ]);
        let bip = build_bipartite(&tweets, &BTreeMap::new());
        let expected = [[2, 1, 1], [0, 1, 2]];
        for (i, u) in ["u1", "u2"].iter().enumerate() {
            for (j, h) in ["a", "b", "c"].iter().enumerate() {
                assert_eq!(bip.weight(u, h), expected[i][j], "{u} {h}");
            }
        }
    }

    #[test]
    fn absent_seed_kept_isolated() {
        let tweets = uniq(vec![post("u", &["x"])]);
        let bip = build_bipartite(&tweets, &seeds(&[("ghost", Stance::Anti)]));
        assert_eq!(bip.seed_hashtags().get("ghost"), Some(&1.0));
        assert_eq!(bip.weight("u", "ghost"), 0);
    }

    #[test]
    fn no_seeds_is_an_error() {
        let bip = build_bipartite(&uniq(vec![post("u", &["x"])]), &BTreeMap::new());
        assert!(propagate(&bip, 1.0, 1e-6, 100).is_err());
    }

    #[test]
    fn clamped_average() {
        let tweets = uniq(vec![post("u", &["s0"])]);
        let bip = build_bipartite(&tweets, &seeds(&[("s0", Stance::Pro)]));
        let one = propagate(&bip, 1.0, 1e-6, 1).unwrap();
        assert_eq!(one.p_anti["u"], 0.0);
        let full = propagate(&bip, 1.0, 1e-6, 100).unwrap();
        assert!(full.converged);
        assert_eq!(full.p_anti["u"], 0.0);
    }

    #[test]
    fn weighted_mean_of_seeds() {
        let tweets = uniq(vec![post("u", &["s0"]), post("u", &["s0"]), post("u", &["s1"])]);
        let bip = build_bipartite(&tweets, &seeds(&[("s0", Stance::Pro), ("s1", Stance::Anti)]));
        let p = propagate(&bip, 1.0, 1e-6, 100).unwrap();
        assert!((p.p_anti["u"] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn linear_fixed_point() {
        let tweets = uniq(vec![post("u1", &["s0", "hx"]), post("u2", &["hx"])]);
        let bip = build_bipartite(&tweets, &seeds(&[("s0", Stance::Pro)]));
        let p = propagate(&bip, 1.0, 1e-6, 100).unwrap();
        assert!(p.converged && p.iterations <= 100);
        assert!(p.p_anti["u1"].abs() < 1e-6);
        assert!(p.p_anti["u2"].abs() < 1e-6);
        assert!(p.hashtag_values["hx"].abs() < 1e-6);
    }

    #[test]
    fn seed_selection_rules() {
        let p: BTreeMap<_, _> = [("a", 0.0), ("b", 0.5), ("c", 0.8), ("d", 0.9)].iter().map(|(u, v)| (u.to_string(), *v)).collect();
        let uses: BTreeMap<_, _> = [("a", 5), ("b", 9), ("c", 2), ("d", 3)].iter().map(|(u, v)| (u.to_string(), *v)).collect();
        let s = select_seed_users(&p, &uses, SeedSelection::default());
        let got: Vec<_> = s.iter().map(|a| (a.user_id.as_str(), a.label)).collect();
        assert_eq!(got, [("a", Stance::Pro), ("d", Stance::Anti)]);
    }

    fn arb_usage() -> impl Strategy<Value = Vec<(u8, u8)>> {
        prop::collection::vec((0u8..8, 0u8..6), 1..40)
    }

    proptest! {
        #[test]
        fn values_stay_in_unit_interval(rows in arb_usage(), damping in 0.3f64..=1.0, iters in 1usize..30) {
            let tweets = uniq(rows.iter().map(|(u, h)| post(&format!("u{u}"), &[&format!("h{h}")])).collect());
            let bip = build_bipartite(&tweets, &seeds(&[("h0", Stance::Pro), ("h1", Stance::Anti)]));
            let p = propagate(&bip, damping, 1e-9, iters).unwrap();
            for v in p.p_anti.values().chain(p.hashtag_values.values()) {
                prop_assert!((0.0..=1.0).contains(v));
            }
        }

        #[test]
        fn single_seed_value_spreads(rows in arb_usage()) {
            let mut rows = rows;
            rows.push((0, 0));
            let tweets = uniq(rows.iter().map(|(u, h)| post(&format!("u{u}"), &[&format!("h{h}")])).collect());
            let bip = build_bipartite(&tweets, &seeds(&[("h0", Stance::Anti)]));
            let p = propagate(&bip, 1.0, 1e-10, 5000).unwrap();
            // users reachable from h0 in the bipartite graph converge to 1
            let mut reach: std::collections::BTreeSet<String> = ["h0".to_string()].into();
            loop {
                let before = reach.len();
                for (u, h) in &rows {
                    let (u, h) = (format!("u{u}"), format!("h{h}"));
                    if reach.contains(&h) || reach.contains(&u) {
                        reach.insert(u);
                        reach.insert(h);
                    }
                }
                if reach.len() == before { break; }
            }
            for (u, v) in &p.p_anti {
                if reach.contains(u) {
                    prop_assert!((v - 1.0).abs() < 1e-6, "{} -> {}", u, v);
                }
            }
        }
    }
}
