//! Markdown tables and SVG timeline plots.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::counterfactual::{format_group_cell, format_influencer_cell, CounterfactualResult, InfluencerImpactSummary, StanceGroupSummary};
use crate::polarization::{Direction, TimelineRow};

pub const REPORT_FILE: &str = "report.md";
pub const TIMELINE_SVG_FILE: &str = "timeline.svg";

fn score(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "undefined".into())
}

fn directions<'a>(maps: impl Iterator<Item = &'a BTreeMap<Direction, crate::counterfactual::OutcomeShares>>) -> Vec<Direction> {
    maps.flat_map(|m| m.keys().copied()).collect::<BTreeSet<_>>().into_iter().collect()
}

/// Per-conversation scores plus per-influencer and per-stance summaries.
pub fn render_markdown(
    results: &[CounterfactualResult],
    by_influencer: &[InfluencerImpactSummary],
    by_stance: &[StanceGroupSummary],
) -> String {
    let mut md = String::from("# Polarization report\n\n## Conversation effects\n\n");
    let dirs: Vec<Direction> = results.iter().map(|r| r.direction).collect::<BTreeSet<_>>().into_iter().collect();
    let mut rows: Vec<(&str, &str, String, String)> = Vec::new();
    let mut cells: BTreeMap<(&str, Direction), &CounterfactualResult> = BTreeMap::new();
    for r in results {
        if cells.insert((&r.conversation_id, r.direction), r).is_none() && !rows.iter().any(|x| x.0 == r.conversation_id) {
            rows.push((&r.conversation_id, &r.influencer_id, r.influencer_stance.to_string(), r.day.to_string()));
        }
    }
    md.push_str("| Conversation | Influencer | Stance | Day |");
    for d in &dirs {
        let _ = write!(md, " {d} with | {d} without | {d} delta |");
    }
    md.push_str("\n|---|---|---|---|");
    md.push_str(&"---:|".repeat(3 * dirs.len()));
    md.push('\n');
    for (conv, inf, stance, day) in &rows {
        let _ = write!(md, "| {conv} | {inf} | {stance} | {day} |");
        for d in &dirs {
            match cells.get(&(*conv, *d)) {
                Some(r) => {
                    let _ = write!(md, " {} | {} | {} |", score(r.score_with), score(r.score_without), score(r.delta));
                }
                None => md.push_str(" | | |"),
            }
        }
        md.push('\n');
    }

    md.push_str("\n## Influencer impact\n\n");
    let dirs = directions(by_influencer.iter().map(|s| &s.per_direction));
    md.push_str("| Influencer | Stance | Conversations |");
    for d in &dirs {
        let _ = write!(md, " {d} |");
    }
    md.push_str("\n|---|---|---:|");
    md.push_str(&"---|".repeat(dirs.len()));
    md.push('\n');
    for s in by_influencer {
        let _ = write!(md, "| {} | {} | {} |", s.influencer_id, s.stance, s.n_conversations);
        for d in &dirs {
            let cell = s.per_direction.get(d).map(format_influencer_cell).unwrap_or_default();
            let _ = write!(md, " {cell} |");
        }
        md.push('\n');
    }

    md.push_str("\n## Stance groups\n\n");
    let dirs = directions(by_stance.iter().map(|s| &s.per_direction));
    md.push_str("| Stance | Conversations |");
    for d in &dirs {
        let _ = write!(md, " {d} |");
    }
    md.push_str("\n|---|---:|");
    md.push_str(&"---|".repeat(dirs.len()));
    md.push('\n');
    for s in by_stance {
        let _ = write!(md, "| {} | {} |", s.stance, s.n_conversations);
        for d in &dirs {
            let cell = s.per_direction.get(d).map(format_group_cell).unwrap_or_default();
            let _ = write!(md, " {cell} |");
        }
        md.push('\n');
    }
    md
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Daily score lines, one per direction, on a fixed [-1, 1] axis.
/// Undefined days break the line instead of being interpolated.
pub fn render_timeline_svg(rows: &[TimelineRow]) -> String {
    let days: Vec<_> = rows.iter().map(|r| r.date).collect::<BTreeSet<_>>().into_iter().collect();
    let mut by_dir: BTreeMap<Direction, BTreeMap<chrono::NaiveDate, Option<f64>>> = BTreeMap::new();
    for r in rows {
        by_dir.entry(r.direction).or_default().insert(r.date, r.value);
    }
    let plot_w = WIDTH - 2.0 * MARGIN;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let x = |i: usize| {
        if days.len() <= 1 {
            MARGIN + plot_w / 2.0
        } else {
            MARGIN + plot_w * i as f64 / (days.len() - 1) as f64
        }
    };
    let y = |v: f64| MARGIN + plot_h * (1.0 - v) / 2.0;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#);
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    for v in [-1.0, 0.0, 1.0] {
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN:.2}" y1="{yy:.2}" x2="{x2:.2}" y2="{yy:.2}" stroke="#cccccc"/><text x="{tx:.2}" y="{ty:.2}" font-size="11" text-anchor="end">{v:.1}</text>"##,
            yy = y(v),
            x2 = WIDTH - MARGIN,
            tx = MARGIN - 6.0,
            ty = y(v) + 4.0,
        );
    }
    for (i, d) in days.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{d}</text>"#,
            x(i),
            HEIGHT - MARGIN + 18.0
        );
    }
    for (k, (dir, values)) in by_dir.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut segment: Vec<String> = Vec::new();
        let mut segments = Vec::new();
        for (i, d) in days.iter().enumerate() {
            match values.get(d).copied().flatten() {
                Some(v) => segment.push(format!("{:.2},{:.2}", x(i), y(v))),
                None => segments.push(std::mem::take(&mut segment)),
            }
        }
        segments.push(segment);
        for s in segments.into_iter().filter(|s| !s.is_empty()) {
            if s.len() == 1 {
                let (cx, cy) = s[0].split_once(',').expect("formatted pair");
                let _ = writeln!(svg, r#"<circle cx="{cx}" cy="{cy}" r="3" fill="{color}"/>"#);
            } else {
                let _ = writeln!(svg, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, s.join(" "));
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" fill="{color}">{}</text>"#,
            MARGIN + 8.0 + 110.0 * k as f64,
            MARGIN - 16.0,
            dir.to_string().replace('>', "&gt;")
        );
    }
    svg.push_str("</svg>\n");
    svg
}
