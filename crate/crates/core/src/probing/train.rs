//! Linear softmax probes trained by proximal gradient descent on
//! cross-entropy plus a nuclear-norm penalty on the weight matrix.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::nuclear::{nuclear_norm, singular_value_threshold};
use super::ProbeError;

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub max_epochs: usize,
    /// Stop once the relative objective decrease over one epoch falls below this.
    pub tol: f64,
    /// Fixed step size; `None` uses the inverse of an upper bound on the
    /// gradient's Lipschitz constant.
    pub step_size: Option<f64>,
    /// Standard deviation of the seeded Gaussian weight initialization.
    pub init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { max_epochs: 500, tol: 1e-6, step_size: None, init_scale: 1e-3 }
    }
}

/// Feature matrix (one row per example) and class indices.
#[derive(Debug, Clone)]
pub struct ProbeData {
    features: DMatrix<f64>,
    labels: Vec<usize>,
    num_classes: usize,
}

impl ProbeData {
    pub fn new(features: DMatrix<f64>, labels: Vec<usize>, num_classes: usize) -> Result<Self, ProbeError> {
        if features.nrows() != labels.len() {
            return Err(ProbeError::LengthMismatch { features: features.nrows(), labels: labels.len() });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(ProbeError::InvalidConfig(format!("label {bad} outside {num_classes} classes")));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(ProbeError::NonFiniteInput);
        }
        Ok(ProbeData { features, labels, num_classes })
    }

    /// Builds the feature matrix from row vectors, which must share a length.
    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<usize>, num_classes: usize) -> Result<Self, ProbeError> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != dim) {
            return Err(ProbeError::DimensionMismatch { expected: dim, found: r.len() });
        }
        let features = DMatrix::from_fn(rows.len(), dim, |i, j| rows[i][j]);
        ProbeData::new(features, labels, num_classes)
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn dimension(&self) -> usize {
        self.features.ncols()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Same features with different labels.
    pub fn relabel(&self, labels: Vec<usize>, num_classes: usize) -> Result<Self, ProbeError> {
        ProbeData::new(self.features.clone(), labels, num_classes)
    }

    /// Share of the most frequent class.
    pub fn majority_rate(&self) -> f64 {
        if self.labels.is_empty() {
            return 0.0;
        }
        let mut counts = vec![0usize; self.num_classes];
        for &l in &self.labels {
            counts[l] += 1;
        }
        *counts.iter().max().unwrap() as f64 / self.labels.len() as f64
    }
}

/// Per-dimension standardization fitted on one split and applied to others.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    mean: DVector<f64>,
    scale: DVector<f64>,
}

impl Standardizer {
    pub fn fit(features: &DMatrix<f64>) -> Self {
        let n = features.nrows().max(1) as f64;
        let d = features.ncols();
        let mut mean = DVector::zeros(d);
        let mut scale = DVector::from_element(d, 1.0);
        for j in 0..d {
            let col = features.column(j);
            let m = col.sum() / n;
            let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n;
            mean[j] = m;
            if var > 1e-24 {
                scale[j] = var.sqrt();
            }
        }
        Standardizer { mean, scale }
    }

    pub fn apply(&self, features: &DMatrix<f64>) -> Result<DMatrix<f64>, ProbeError> {
        if features.ncols() != self.mean.len() {
            return Err(ProbeError::DimensionMismatch { expected: self.mean.len(), found: features.ncols() });
        }
        let mut out = features.clone();
        for j in 0..out.ncols() {
            let (m, s) = (self.mean[j], self.scale[j]);
            out.column_mut(j).apply(|v| *v = (*v - m) / s);
        }
        Ok(out)
    }
}

/// `y = W x + b`, with `W` of shape classes × dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub weights: DMatrix<f64>,
    pub bias: DVector<f64>,
    /// Epochs run before stopping.
    pub epochs: usize,
}

impl Probe {
    pub fn zeros(num_classes: usize, dimension: usize) -> Self {
        Probe { weights: DMatrix::zeros(num_classes, dimension), bias: DVector::zeros(num_classes), epochs: 0 }
    }

    pub fn num_classes(&self) -> usize {
        self.weights.nrows()
    }

    pub fn dimension(&self) -> usize {
        self.weights.ncols()
    }

    pub fn nuclear_norm(&self) -> f64 {
        nuclear_norm(&self.weights).unwrap_or(f64::NAN)
    }

    pub fn accuracy(&self, data: &ProbeData) -> Result<f64, ProbeError> {
        if data.dimension() != self.dimension() {
            return Err(ProbeError::DimensionMismatch { expected: self.dimension(), found: data.dimension() });
        }
        if data.is_empty() {
            return Ok(0.0);
        }
        let scores = logits(&self.weights, &self.bias, data.features());
        let correct = (0..data.len()).filter(|&i| argmax(scores.row(i).iter().copied()) == data.labels[i]).count();
        Ok(correct as f64 / data.len() as f64)
    }
}

fn argmax(values: impl Iterator<Item = f64>) -> usize {
    let mut best = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (i, v) in values.enumerate() {
        if v > best_v {
            best = i;
            best_v = v;
        }
    }
    best
}

/// Class with the highest score; ties go to the lower index.
pub fn predict(probe: &Probe, x: &[f64]) -> Result<usize, ProbeError> {
    if x.len() != probe.dimension() {
        return Err(ProbeError::DimensionMismatch { expected: probe.dimension(), found: x.len() });
    }
    let scores = (0..probe.num_classes())
        .map(|c| probe.weights.row(c).iter().zip(x).map(|(w, v)| w * v).sum::<f64>() + probe.bias[c]);
    Ok(argmax(scores))
}

fn logits(w: &DMatrix<f64>, b: &DVector<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let mut z = x * w.transpose();
    for mut row in z.row_iter_mut() {
        row += b.transpose();
    }
    z
}

/// Turns logits into probabilities in place and returns the mean cross-entropy.
fn softmax_xent(z: &mut DMatrix<f64>, labels: &[usize]) -> f64 {
    let mut loss = 0.0;
    for (i, mut row) in z.row_iter_mut().enumerate() {
        let max = row.max();
        let target = row[labels[i]] - max;
        let mut sum = 0.0;
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        loss += sum.ln() - target;
        row /= sum;
    }
    loss / labels.len() as f64
}

/// Upper bound on the Lipschitz constant of the mean cross-entropy gradient
/// with respect to `(W, b)`: half the top eigenvalue of the augmented
/// second-moment matrix, estimated by power iteration with a safety margin.
fn lipschitz_bound(x: &DMatrix<f64>) -> f64 {
    let n = x.nrows() as f64;
    let d = x.ncols();
    let mut gram = DMatrix::zeros(d + 1, d + 1);
    let xtx = x.transpose() * x;
    gram.view_mut((0, 0), (d, d)).copy_from(&xtx);
    let colsum = x.row_sum();
    for j in 0..d {
        gram[(j, d)] = colsum[j];
        gram[(d, j)] = colsum[j];
    }
    gram[(d, d)] = n;
    gram /= n;

    let mut v = DVector::from_element(d + 1, 1.0 / ((d + 1) as f64).sqrt());
    let mut lambda = 0.0;
    for _ in 0..200 {
        let next = &gram * &v;
        let norm = next.norm();
        if norm == 0.0 {
            break;
        }
        let converged = (norm - lambda).abs() <= 1e-10 * norm;
        lambda = norm;
        v = next / norm;
        if converged {
            break;
        }
    }
    0.5 * lambda * 1.05 + 1e-12
}

/// Minimizes mean cross-entropy `+ penalty * ||W||_*` by proximal gradient
/// descent with singular-value soft-thresholding as the proximal step.
pub fn train_probe(data: &ProbeData, penalty: f64, config: &TrainConfig, seed: u64) -> Result<Probe, ProbeError> {
    if !(penalty >= 0.0 && penalty.is_finite()) {
        return Err(ProbeError::InvalidConfig(format!("penalty weight {penalty} must be finite and non-negative")));
    }
    let mut present = vec![false; data.num_classes];
    for &l in &data.labels {
        present[l] = true;
    }
    let classes = present.iter().filter(|p| **p).count();
    if classes < 2 {
        return Err(ProbeError::DegenerateData { classes });
    }

    let (k, d) = (data.num_classes, data.dimension());
    let x = data.features();
    let n = data.len() as f64;
    let step = match config.step_size {
        Some(s) if s > 0.0 => s,
        Some(s) => return Err(ProbeError::InvalidConfig(format!("step size {s} must be positive"))),
        None => 1.0 / lipschitz_bound(x),
    };

    let mut w = if config.init_scale > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let normal = Normal::new(0.0, config.init_scale).expect("valid init scale");
        DMatrix::from_fn(k, d, |_, _| normal.sample(&mut rng))
    } else {
        DMatrix::zeros(k, d)
    };
    let mut w_norm = nuclear_norm(&w)?;
    let mut b = DVector::zeros(k);

    let mut prev = f64::INFINITY;
    let mut epochs = 0;
    while epochs < config.max_epochs {
        let mut p = logits(&w, &b, x);
        let loss = softmax_xent(&mut p, &data.labels);
        let objective = loss + penalty * w_norm;
        if prev.is_finite() && (prev - objective) < config.tol * prev.abs().max(1e-12) {
            break;
        }
        prev = objective;

        for (i, &l) in data.labels.iter().enumerate() {
            p[(i, l)] -= 1.0;
        }
        p /= n;
        let grad_w = p.transpose() * x;
        let grad_b = p.row_sum().transpose();

        let (next_w, next_norm) = singular_value_threshold(&(&w - grad_w * step), step * penalty)?;
        w = next_w;
        w_norm = next_norm;
        b -= grad_b * step;
        epochs += 1;
    }
    Ok(Probe { weights: w, bias: b, epochs })
}
