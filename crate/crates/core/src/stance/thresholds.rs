//! Dual-threshold labeling and its grid-search calibration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Stance, StanceAssignment, StanceSource};
use crate::error::{Error, Result};

/// `p <= t1` is pro, `p >= t2` is anti, anything between is undecided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPair {
    pub t1: f64,
    pub t2: f64,
}

impl ThresholdPair {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        if !(t1 > 0.0 && t1 <= 0.5 && 0.5 <= t2 && t2 < 1.0) {
            return Err(Error::invalid(format!("thresholds ({t1}, {t2}) violate 0 < t1 <= 0.5 <= t2 < 1")));
        }
        Ok(ThresholdPair { t1, t2 })
    }

    pub fn classify(&self, p_anti: f64) -> Stance {
        if p_anti <= self.t1 {
            Stance::Pro
        } else if p_anti >= self.t2 {
            Stance::Anti
        } else {
            Stance::Undecided
        }
    }
}

impl Default for ThresholdPair {
    fn default() -> Self {
        ThresholdPair { t1: 0.40, t2: 0.60 }
    }
}

pub fn assign_stances(p_anti: &BTreeMap<String, f64>, thresholds: ThresholdPair) -> Vec<StanceAssignment> {
    p_anti
        .iter()
        .map(|(u, &p)| StanceAssignment { user_id: u.clone(), p_anti: p, label: thresholds.classify(p), source: StanceSource::Gnn })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub pair: ThresholdPair,
    /// Grid position of `t1`: `t1 = k1 * step`, `k1 >= 1`.
    pub k1: usize,
    /// Grid position of `t2`: `t2 = 0.5 + k2 * step`.
    pub k2: usize,
    pub macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    pub best: GridPoint,
    pub grid: Vec<GridPoint>,
}

fn macro_f1(labeled: &[(f64, Stance)], pair: ThresholdPair) -> f64 {
    let mut tp = [0usize; 2];
    let mut predicted = [0usize; 2];
    let mut actual = [0usize; 2];
    let idx = |s: Stance| match s {
        Stance::Pro => Some(0),
        Stance::Anti => Some(1),
        Stance::Undecided => None,
    };
    for &(p, truth) in labeled {
        let t = idx(truth).expect("reference labels validated");
        actual[t] += 1;
        if let Some(k) = idx(pair.classify(p)) {
            predicted[k] += 1;
            if k == t {
                tp[k] += 1;
            }
        }
    }
    // 2PR/(P+R) reduces to 2tp/(predicted + actual)
    let f1 = |c: usize| {
        let denom = predicted[c] + actual[c];
        if denom == 0 {
            0.0
        } else {
            (2 * tp[c]) as f64 / denom as f64
        }
    };
    (f1(0) + f1(1)) / 2.0
}

/// Macro-F1 over {pro, anti} at every grid point.
///
/// `t1` ranges over `step, 2*step, ..., 0.5` and `t2` over `0.5, ..., 1 - step`.
/// Labeled users predicted undecided count against recall of their class.
pub fn grid_scores(labeled: &[(f64, Stance)], step: f64) -> Result<Vec<GridPoint>> {
    if labeled.is_empty() {
        return Err(Error::invalid("threshold calibration needs labeled users"));
    }
    if labeled.iter().any(|(_, s)| !s.is_decided()) {
        return Err(Error::invalid("reference labels must be pro or anti"));
    }
    if labeled.iter().any(|(p, _)| !p.is_finite()) {
        return Err(Error::Numeric("non-finite probability in calibration set".into()));
    }
    let steps = (0.5 / step).round();
    if !(step > 0.0) || steps < 1.0 || ((0.5 / step) - steps).abs() > 1e-9 {
        return Err(Error::invalid(format!("grid step {step} must divide 0.5")));
    }
    let steps = steps as usize;
    let mut grid = Vec::with_capacity(steps * steps);
    for k1 in 1..=steps {
        for k2 in 0..steps {
            let pair = ThresholdPair {
                t1: (k1 as f64 * 0.5) / steps as f64,
                t2: 0.5 + (k2 as f64 * 0.5) / steps as f64,
            };
            grid.push(GridPoint { pair, k1, k2, macro_f1: macro_f1(labeled, pair) });
        }
    }
    Ok(grid)
}

/// Best grid point by macro-F1; ties prefer the wider undecided band, then the smaller `t1`.
pub fn calibrate_thresholds(labeled: &[(f64, Stance)], step: f64) -> Result<Calibration> {
    let grid = grid_scores(labeled, step)?;
    let steps = grid.iter().map(|g| g.k1).max().unwrap_or(0);
    // band width in grid units is (steps - k1) + k2
    let best = *grid
        .iter()
        .max_by(|a, b| {
            a.macro_f1
                .total_cmp(&b.macro_f1)
                .then((steps - a.k1 + a.k2).cmp(&(steps - b.k1 + b.k2)))
                .then(b.k1.cmp(&a.k1))
        })
        .expect("grid is non-empty");
    Ok(Calibration { best, grid })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_semantics() {
        let pair = ThresholdPair::new(0.40, 0.60).unwrap();
        assert_eq!(pair.classify(0.40), Stance::Pro);
        assert_eq!(pair.classify(0.60), Stance::Anti);
        assert_eq!(pair.classify(0.50), Stance::Undecided);
        assert!(ThresholdPair::new(0.6, 0.7).is_err());
        assert!(ThresholdPair::new(0.0, 0.7).is_err());
        assert!(ThresholdPair::new(0.3, 1.0).is_err());
    }

    #[test]
    fn assignment_partitions_users() {
        let p: BTreeMap<String, f64> = (0..11).map(|i| (format!("u{i}"), i as f64 / 10.0)).collect();
        let a = assign_stances(&p, ThresholdPair::default());
        assert_eq!(a.len(), 11);
        let count = |s| a.iter().filter(|x| x.label == s).count();
        assert_eq!((count(Stance::Pro), count(Stance::Undecided), count(Stance::Anti)), (5, 1, 5));
    }

    #[test]
    fn separated_pair_picks_widest_band() {
        let c = calibrate_thresholds(&[(0.1, Stance::Pro), (0.9, Stance::Anti)], 0.05).unwrap();
        assert_eq!(c.best.macro_f1, 1.0);
        assert_eq!((c.best.pair.t1, c.best.pair.t2), (0.10, 0.90));
        assert_eq!(c.grid.len(), 100);
    }

    #[test]
    fn unique_optimum_at_forty_sixty() {
        let labeled = [(0.40, Stance::Pro), (0.60, Stance::Anti), (0.44, Stance::Anti), (0.56, Stance::Pro)];
        let c = calibrate_thresholds(&labeled, 0.05).unwrap();
        assert_eq!((c.best.pair.t1, c.best.pair.t2), (0.40, 0.60));
        let ties = c.grid.iter().filter(|g| g.macro_f1 == c.best.macro_f1).count();
        assert_eq!(ties, 1);
    }

    #[test]
    fn all_half_probabilities() {
        let labeled = [(0.5, Stance::Pro), (0.5, Stance::Anti)];
        let c = calibrate_thresholds(&labeled, 0.05).unwrap();
        // t1 = 0.5 labels everyone pro: pro F1 = 2/3, anti F1 = 0
        assert!((c.best.macro_f1 - 1.0 / 3.0).abs() < 1e-15);
        // (0.50, 0.95) and (0.05, 0.50) tie on F1 and band width; smaller t1 wins
        assert_eq!((c.best.pair.t1, c.best.pair.t2), (0.05, 0.50));
        let undecided_everywhere = c.grid.iter().filter(|g| g.pair.t1 < 0.5 && g.pair.t2 > 0.5);
        assert!(undecided_everywhere.clone().count() > 0);
        assert!(undecided_everywhere.clone().all(|g| g.macro_f1 == 0.0));
    }

    #[test]
    fn calibration_errors() {
        assert!(calibrate_thresholds(&[], 0.05).is_err());
        assert!(calibrate_thresholds(&[(0.2, Stance::Undecided)], 0.05).is_err());
        assert!(calibrate_thresholds(&[(0.2, Stance::Pro)], 0.07).is_err());
    }
}
