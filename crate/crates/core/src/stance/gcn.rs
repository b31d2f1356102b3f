//! Two-layer graph convolutional classifier trained full-batch with Adam.
//!
//! Forward pass: `Z = softmax(Â · relu(Â·X·W1 + b1) · W2 + b2)`, column 0 is
//! P(pro) and column 1 is P(anti). Loss is the mean cross-entropy over the
//! training nodes plus `weight_decay / 2 * (|W1|² + |W2|²)`. Gradients are
//! derived by hand; `Â` is symmetric so its transpose never materializes.

use std::collections::{BTreeMap, BTreeSet};

use ndarray::{Array1, Array2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Stance;
use crate::error::{Error, Result};
use crate::graph::InteractionGraph;

pub type Matrix = Array2<f64>;

/// Sparse `D^-1/2 (A + I) D^-1/2` over a fixed user ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedAdjacency {
    rows: Vec<Vec<(usize, f64)>>,
}

impl NormalizedAdjacency {
    /// From an undirected simple adjacency given as neighbour index lists.
    /// Self-loops and repeated neighbours in the input are ignored.
    pub fn from_neighbors(neighbors: &[BTreeSet<usize>]) -> Self {
        let n = neighbors.len();
        let clean: Vec<Vec<usize>> = (0..n)
            .map(|i| neighbors[i].iter().copied().filter(|&j| j != i && j < n).collect())
            .collect();
        let deg: Vec<f64> = clean.iter().map(|nb| nb.len() as f64 + 1.0).collect();
        let rows = clean
            .iter()
            .enumerate()
            .map(|(i, nb)| {
                let mut row: Vec<(usize, f64)> = nb.iter().map(|&j| (j, 1.0 / (deg[i] * deg[j]).sqrt())).collect();
                row.push((i, 1.0 / deg[i]));
                row.sort_by_key(|(j, _)| *j);
                row
            })
            .collect();
        NormalizedAdjacency { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `Â · m`
    pub fn matmul(&self, m: &Matrix) -> Matrix {
        let mut out = Matrix::zeros((self.rows.len(), m.ncols()));
        for (i, row) in self.rows.iter().enumerate() {
            let mut dst = out.row_mut(i);
            for &(j, w) in row {
                dst.scaled_add(w, &m.row(j));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Matrix {
        let n = self.rows.len();
        let mut d = Matrix::zeros((n, n));
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, w) in row {
                d[[i, j]] = w;
            }
        }
        d
    }
}

/// Symmetric normalized adjacency over `users`, in that order.
///
/// Two users are adjacent when either interacted with the other at least
/// once. Interactions with users outside the list are ignored.
pub fn normalize_adjacency(graph: &InteractionGraph, users: &[String]) -> Result<NormalizedAdjacency> {
    if users.is_empty() {
        return Err(Error::invalid("adjacency needs at least one user"));
    }
    let index: BTreeMap<&str, usize> = users.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let mut nb = vec![BTreeSet::new(); users.len()];
    for e in graph.edges() {
        if let (Some(&a), Some(&b)) = (index.get(e.author_id.as_str()), index.get(e.target_id.as_str())) {
            if a != b {
                nb[a].insert(b);
                nb[b].insert(a);
            }
        }
    }
    Ok(NormalizedAdjacency::from_neighbors(&nb))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcnModel {
    pub w1: Matrix,
    pub b1: Array1<f64>,
    pub w2: Matrix,
    pub b2: Array1<f64>,
}

#[derive(Serialize, Deserialize)]
struct Dump {
    shape: [usize; 2],
    data: Vec<f64>,
}

impl Dump {
    fn of(m: &Matrix) -> Self {
        Dump { shape: [m.nrows(), m.ncols()], data: m.iter().copied().collect() }
    }

    fn of_vec(v: &Array1<f64>) -> Self {
        Dump { shape: [1, v.len()], data: v.to_vec() }
    }

    fn matrix(self) -> Result<Matrix> {
        Matrix::from_shape_vec((self.shape[0], self.shape[1]), self.data)
            .map_err(|e| Error::invalid(format!("checkpoint shape mismatch: {e}")))
    }
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    w1: Dump,
    b1: Dump,
    w2: Dump,
    b2: Dump,
}

impl GcnModel {
    /// Glorot-uniform weights, zero biases.
    pub fn init(features: usize, hidden: usize, rng: &mut impl Rng) -> Self {
        let mut glorot = |rows: usize, cols: usize| {
            let r = (6.0 / (rows + cols) as f64).sqrt();
            Matrix::from_shape_fn((rows, cols), |_| rng.random_range(-r..r))
        };
        let w1 = glorot(features, hidden);
        let w2 = glorot(hidden, 2);
        GcnModel { w1, b1: Array1::zeros(hidden), w2, b2: Array1::zeros(2) }
    }

    pub fn feature_dim(&self) -> usize {
        self.w1.nrows()
    }

    pub fn hidden_dim(&self) -> usize {
        self.w1.ncols()
    }

    fn check(&self) -> Result<()> {
        let h = self.hidden_dim();
        if self.b1.len() != h || self.w2.nrows() != h || self.w2.ncols() != 2 || self.b2.len() != 2 {
            return Err(Error::invalid("inconsistent model shapes"));
        }
        let finite = self.w1.iter().chain(&self.b1).chain(&self.w2).chain(&self.b2).all(|x| x.is_finite());
        if !finite {
            return Err(Error::Numeric("model has non-finite parameters".into()));
        }
        Ok(())
    }

    /// JSON matrix dump: every tensor as `{"shape": [rows, cols], "data": [...]}`, row-major.
    pub fn to_json(&self) -> Result<String> {
        let c = Checkpoint {
            w1: Dump::of(&self.w1),
            b1: Dump::of_vec(&self.b1),
            w2: Dump::of(&self.w2),
            b2: Dump::of_vec(&self.b2),
        };
        Ok(serde_json::to_string_pretty(&c)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Checkpoint = serde_json::from_str(s)?;
        let m = GcnModel {
            w1: c.w1.matrix()?,
            b1: c.b1.matrix()?.row(0).to_owned(),
            w2: c.w2.matrix()?,
            b2: c.b2.matrix()?.row(0).to_owned(),
        };
        m.check()?;
        Ok(m)
    }

    fn params_mut(&mut self) -> [&mut [f64]; 4] {
        [
            self.w1.as_slice_mut().expect("contiguous"),
            self.b1.as_slice_mut().expect("contiguous"),
            self.w2.as_slice_mut().expect("contiguous"),
            self.b2.as_slice_mut().expect("contiguous"),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GcnGradients {
    pub w1: Matrix,
    pub b1: Array1<f64>,
    pub w2: Matrix,
    pub b2: Array1<f64>,
}

impl GcnGradients {
    fn slices(&self) -> [&[f64]; 4] {
        [
            self.w1.as_slice().expect("contiguous"),
            self.b1.as_slice().expect("contiguous"),
            self.w2.as_slice().expect("contiguous"),
            self.b2.as_slice().expect("contiguous"),
        ]
    }
}

struct Activations {
    pre1: Matrix,
    ah: Matrix,
    probs: Matrix,
    log_probs: Matrix,
}

/// Forward pass given the precomputed `Â·X`.
fn forward_cached(adj: &NormalizedAdjacency, ax: &Matrix, model: &GcnModel) -> Activations {
    let pre1 = ax.dot(&model.w1) + &model.b1;
    let h = pre1.mapv(|v| v.max(0.0));
    let ah = adj.matmul(&h);
    let mut logits = ah.dot(&model.w2) + &model.b2;
    let mut probs = logits.clone();
    for (mut lrow, mut prow) in logits.rows_mut().into_iter().zip(probs.rows_mut()) {
        let max = lrow.fold(f64::NEG_INFINITY, |m, &v| m.max(v));
        let lse = max + lrow.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        lrow.mapv_inplace(|v| v - lse);
        prow.assign(&lrow.mapv(f64::exp));
    }
    Activations { pre1, ah, probs, log_probs: logits }
}

fn check_inputs(adj: &NormalizedAdjacency, x: &Matrix, model: &GcnModel) -> Result<()> {
    if x.nrows() != adj.len() {
        return Err(Error::invalid(format!("feature rows {} != adjacency size {}", x.nrows(), adj.len())));
    }
    if x.ncols() != model.feature_dim() {
        return Err(Error::invalid(format!("feature dim {} != model input dim {}", x.ncols(), model.feature_dim())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite node features".into()));
    }
    model.check()
}

/// Class probabilities per node: column 0 = P(pro), column 1 = P(anti).
pub fn gcn_forward(adj: &NormalizedAdjacency, x: &Matrix, model: &GcnModel) -> Result<Matrix> {
    check_inputs(adj, x, model)?;
    let probs = forward_cached(adj, &adj.matmul(x), model).probs;
    if probs.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite output probabilities".into()));
    }
    Ok(probs)
}

/// Class index used by the classifier: 0 = pro, 1 = anti.
fn class_of(s: Stance) -> Option<usize> {
    match s {
        Stance::Pro => Some(0),
        Stance::Anti => Some(1),
        Stance::Undecided => None,
    }
}

fn mean_nll(act: &Activations, nodes: &[(usize, usize)]) -> f64 {
    nodes.iter().map(|&(i, c)| -act.log_probs[[i, c]]).sum::<f64>() / nodes.len() as f64
}

fn backward(
    adj: &NormalizedAdjacency,
    ax: &Matrix,
    model: &GcnModel,
    act: &Activations,
    train: &[(usize, usize)],
    weight_decay: f64,
) -> GcnGradients {
    let n_train = train.len() as f64;
    let mut dlogits = Matrix::zeros(act.probs.raw_dim());
    for &(i, c) in train {
        let mut row = dlogits.row_mut(i);
        row.assign(&act.probs.row(i));
        row[c] -= 1.0;
        row /= n_train;
    }
    let w2 = act.ah.t().dot(&dlogits) + &(&model.w2 * weight_decay);
    let b2 = dlogits.sum_axis(Axis(0));
    let dh = adj.matmul(&dlogits.dot(&model.w2.t()));
    let dpre = dh * &act.pre1.mapv(|v| if v > 0.0 { 1.0 } else { 0.0 });
    let w1 = ax.t().dot(&dpre) + &(&model.w1 * weight_decay);
    let b1 = dpre.sum_axis(Axis(0));
    GcnGradients { w1, b1, w2, b2 }
}

fn labeled_nodes(labels: &[(usize, Stance)], n: usize) -> Result<Vec<(usize, usize)>> {
    labels
        .iter()
        .filter_map(|&(i, s)| class_of(s).map(|c| (i, c)))
        .map(|(i, c)| if i < n { Ok((i, c)) } else { Err(Error::invalid(format!("label index {i} out of range"))) })
        .collect()
}

/// Training loss and its exact gradient for the given labeled nodes.
pub fn loss_and_gradients(
    adj: &NormalizedAdjacency,
    x: &Matrix,
    model: &GcnModel,
    labels: &[(usize, Stance)],
    weight_decay: f64,
) -> Result<(f64, GcnGradients)> {
    check_inputs(adj, x, model)?;
    let train = labeled_nodes(labels, adj.len())?;
    if train.is_empty() {
        return Err(Error::invalid("no labeled nodes"));
    }
    let ax = adj.matmul(x);
    let act = forward_cached(adj, &ax, model);
    let reg = 0.5 * weight_decay * (model.w1.iter().chain(&model.w2).map(|w| w * w).sum::<f64>());
    let loss = mean_nll(&act, &train) + reg;
    Ok((loss, backward(adj, &ax, model, &act, &train, weight_decay)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GcnConfig {
    pub hidden: usize,
    pub lr: f64,
    pub weight_decay: f64,
    pub epochs: usize,
    pub rng_seed: u64,
    pub validation_fraction: f64,
}

impl Default for GcnConfig {
    fn default() -> Self {
        GcnConfig { hidden: 64, lr: 0.01, weight_decay: 5e-4, epochs: 200, rng_seed: 0, validation_fraction: 0.2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingOutcome {
    pub model: GcnModel,
    /// `(train loss, validation loss)` per epoch, measured before that epoch's update.
    pub loss_trace: Vec<(f64, f64)>,
    pub best_epoch: usize,
    pub train_nodes: Vec<usize>,
    pub validation_nodes: Vec<usize>,
}

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

/// Full-batch Adam training on the seed labels.
///
/// Seeds are split per class by a seeded shuffle: `validation_fraction` of
/// each class (rounded down, leaving at least one training node) is held out.
/// The returned model is the one with the lowest validation loss; with no
/// validation nodes the training loss decides.
pub fn gcn_train(
    adj: &NormalizedAdjacency,
    x: &Matrix,
    seeds: &[(usize, Stance)],
    config: &GcnConfig,
) -> Result<TrainingOutcome> {
    let labeled = labeled_nodes(seeds, adj.len())?;
    for (c, name) in [(0, "pro"), (1, "anti")] {
        if !labeled.iter().any(|&(_, k)| k == c) {
            return Err(Error::invalid(format!("no {name} seeds to train on")));
        }
    }
    if config.hidden == 0 || !(config.lr > 0.0) || !(0.0..1.0).contains(&config.validation_fraction) {
        return Err(Error::invalid("bad classifier hyperparameters"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut model = GcnModel::init(x.ncols(), config.hidden, &mut rng);
    check_inputs(adj, x, &model)?;

    let mut train = Vec::new();
    let mut val = Vec::new();
    for c in 0..2 {
        let mut members: Vec<_> = labeled.iter().copied().filter(|&(_, k)| k == c).collect();
        members.sort();
        members.shuffle(&mut rng);
        let n_val = ((members.len() as f64 * config.validation_fraction).floor() as usize).min(members.len() - 1);
        val.extend_from_slice(&members[..n_val]);
        train.extend_from_slice(&members[n_val..]);
    }

    let ax = adj.matmul(x);
    let mut m: Vec<Vec<f64>> = model.params_mut().iter().map(|p| vec![0.0; p.len()]).collect();
    let mut v = m.clone();
    let mut best = (f64::INFINITY, 0, model.clone());
    let mut trace = Vec::with_capacity(config.epochs);

    for epoch in 0..config.epochs {
        let act = forward_cached(adj, &ax, &model);
        let reg = 0.5 * config.weight_decay * model.w1.iter().chain(&model.w2).map(|w| w * w).sum::<f64>();
        let train_loss = mean_nll(&act, &train) + reg;
        let val_loss = if val.is_empty() { train_loss } else { mean_nll(&act, &val) };
        if !train_loss.is_finite() || !val_loss.is_finite() {
            return Err(Error::Numeric(format!("loss diverged at epoch {epoch}")));
        }
        trace.push((train_loss, val_loss));
        if val_loss < best.0 {
            best = (val_loss, epoch, model.clone());
        }

        let grads = backward(adj, &ax, &model, &act, &train, config.weight_decay);
        let t = (epoch + 1) as i32;
        let (c1, c2) = (1.0 - ADAM_BETA1.powi(t), 1.0 - ADAM_BETA2.powi(t));
        for (k, (p, g)) in model.params_mut().into_iter().zip(grads.slices()).enumerate() {
            for j in 0..p.len() {
                m[k][j] = ADAM_BETA1 * m[k][j] + (1.0 - ADAM_BETA1) * g[j];
                v[k][j] = ADAM_BETA2 * v[k][j] + (1.0 - ADAM_BETA2) * g[j] * g[j];
                p[j] -= config.lr * (m[k][j] / c1) / ((v[k][j] / c2).sqrt() + ADAM_EPS);
            }
        }
    }
    // the final parameters never got a loss measurement of their own
    let act = forward_cached(adj, &ax, &model);
    let final_val = if val.is_empty() {
        mean_nll(&act, &train) + 0.5 * config.weight_decay * model.w1.iter().chain(&model.w2).map(|w| w * w).sum::<f64>()
    } else {
        mean_nll(&act, &val)
    };
    if final_val < best.0 {
        best = (final_val, config.epochs, model);
    }
    Ok(TrainingOutcome {
        model: best.2,
        loss_trace: trace,
        best_epoch: best.1,
        train_nodes: train.iter().map(|&(i, _)| i).collect(),
        validation_nodes: val.iter().map(|&(i, _)| i).collect(),
    })
}
