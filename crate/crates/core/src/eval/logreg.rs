//! L2-regularized logistic regression and one-vs-rest wrappers.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::graph::LabelMatrix;

/// Objective: mean log-loss plus `strength / (2 n) * |w|^2` (the bias is not
/// penalized). Minimized by gradient descent with Barzilai-Borwein step
/// guesses and an Armijo backtracking safeguard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRegConfig {
    pub strength: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            strength: 1.0,
            tol: 1e-4,
            max_iter: 500,
        }
    }
}

/// Column standardization fitted on training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Array1<f64>,
    pub scale: Array1<f64>,
}

impl Standardizer {
    pub fn fit(x: ArrayView2<'_, f64>) -> Self {
        let n = x.nrows().max(1) as f64;
        let mean = x.sum_axis(Axis(0)) / n;
        let mut var = Array1::<f64>::zeros(x.ncols());
        for row in x.rows() {
            var.zip_mut_with(&(&row - &mean), |v, d| *v += d * d);
        }
        let scale = var.mapv(|v| {
            let s = (v / n).sqrt();
            if s > 1e-12 {
                s
            } else {
                1.0
            }
        });
        Standardizer { mean, scale }
    }

    pub fn transform(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        (&x - &self.mean) / &self.scale
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRegression {
    pub weights: Array1<f64>,
    pub bias: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Set when training data held one class only; the model then predicts
    /// that class with certainty.
    pub degenerate: bool,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

struct Problem<'a> {
    x: ArrayView2<'a, f64>,
    y: Array1<f64>,
    lambda: f64,
}

impl Problem<'_> {
    fn n(&self) -> f64 {
        self.x.nrows() as f64
    }

    fn objective(&self, w: &Array1<f64>, b: f64) -> f64 {
        let z = self.x.dot(w) + b;
        let ll: f64 = z
            .iter()
            .zip(self.y.iter())
            .map(|(&z, &y)| softplus(z) - y * z)
            .sum();
        ll / self.n() + 0.5 * self.lambda * w.dot(w)
    }

    fn gradient(&self, w: &Array1<f64>, b: f64) -> (Array1<f64>, f64) {
        let z = self.x.dot(w) + b;
        let r: Array1<f64> = z
            .iter()
            .zip(self.y.iter())
            .map(|(&z, &y)| sigmoid(z) - y)
            .collect();
        let gw = self.x.t().dot(&r) / self.n() + self.lambda * w;
        (gw, r.sum() / self.n())
    }
}

impl LogisticRegression {
    /// Fits on rows of `x` (used as given; standardize beforehand if wanted).
    pub fn fit(x: ArrayView2<'_, f64>, y: &[bool], cfg: &LogRegConfig) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::RowCountMismatch {
                what: "logistic regression labels",
                expected: x.nrows(),
                found: y.len(),
            });
        }
        if y.is_empty() {
            return Err(Error::Empty("logistic regression training set"));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("classifier input"));
        }
        let n_pos = y.iter().filter(|&&v| v).count();
        if n_pos == 0 || n_pos == y.len() {
            return Ok(LogisticRegression {
                weights: Array1::zeros(x.ncols()),
                bias: if n_pos == 0 { f64::NEG_INFINITY } else { f64::INFINITY },
                iterations: 0,
                converged: true,
                degenerate: true,
            });
        }
        let prob = Problem {
            x,
            y: y.iter().map(|&v| if v { 1.0 } else { 0.0 }).collect(),
            lambda: cfg.strength / y.len() as f64,
        };
        let mut w = Array1::<f64>::zeros(x.ncols());
        let mut b = 0.0;
        let mut f = prob.objective(&w, b);
        let (mut gw, mut gb) = prob.gradient(&w, b);
        let mut step = 1.0;
        let mut converged = false;
        let mut iterations = 0;
        for it in 0..cfg.max_iter {
            let gnorm2 = gw.dot(&gw) + gb * gb;
            if gnorm2.sqrt() < cfg.tol {
                converged = true;
                break;
            }
            iterations = it + 1;
            let mut t = step;
            let (mut w_new, mut b_new, mut f_new);
            let mut tries = 0;
            loop {
                w_new = &w - &(t * &gw);
                b_new = b - t * gb;
                f_new = prob.objective(&w_new, b_new);
                if f_new <= f - 1e-4 * t * gnorm2 || tries >= 60 {
                    break;
                }
                t *= 0.5;
                tries += 1;
            }
            let (gw_new, gb_new) = prob.gradient(&w_new, b_new);
            // Barzilai-Borwein guess for the next step
            let sw = &w_new - &w;
            let sb = b_new - b;
            let yw = &gw_new - &gw;
            let yb = gb_new - gb;
            let sy = sw.dot(&yw) + sb * yb;
            let ss = sw.dot(&sw) + sb * sb;
            step = if sy > 0.0 && (ss / sy).is_finite() { ss / sy } else { 1.0 };
            w = w_new;
            b = b_new;
            f = f_new;
            gw = gw_new;
            gb = gb_new;
        }
        if !converged {
            let g = (gw.dot(&gw) + gb * gb).sqrt();
            converged = g < cfg.tol;
        }
        Ok(LogisticRegression {
            weights: w,
            bias: b,
            iterations,
            converged,
            degenerate: false,
        })
    }

    pub fn decision_function(&self, x: ArrayView2<'_, f64>) -> Array1<f64> {
        if self.degenerate {
            return Array1::from_elem(x.nrows(), self.bias);
        }
        x.dot(&self.weights) + self.bias
    }

    pub fn predict_proba(&self, x: ArrayView2<'_, f64>) -> Array1<f64> {
        self.decision_function(x).mapv(sigmoid)
    }

    /// Mean log-loss of the unregularized model on `(x, y)`.
    pub fn log_loss(&self, x: ArrayView2<'_, f64>, y: &[bool]) -> f64 {
        let z = self.decision_function(x);
        z.iter()
            .zip(y)
            .map(|(&z, &y)| softplus(z) - if y { z } else { 0.0 })
            .sum::<f64>()
            / y.len().max(1) as f64
    }
}

/// Mean log-loss plus penalty for a given weight vector, exposed for tests.
pub fn regularized_objective(
    x: ArrayView2<'_, f64>,
    y: &[bool],
    weights: ArrayView1<'_, f64>,
    bias: f64,
    strength: f64,
) -> f64 {
    let prob = Problem {
        x,
        y: y.iter().map(|&v| if v { 1.0 } else { 0.0 }).collect(),
        lambda: strength / y.len() as f64,
    };
    prob.objective(&weights.to_owned(), bias)
}

/// True when every row has exactly one positive entry.
pub fn is_one_hot(y: &LabelMatrix) -> bool {
    y.nrows() > 0 && y.rows().into_iter().all(|r| r.iter().filter(|&&v| v != 0).count() == 1)
}

/// One binary model per label column over standardized inputs.
#[derive(Debug, Clone)]
pub struct OvrModel {
    pub standardizer: Standardizer,
    pub models: Vec<LogisticRegression>,
    /// Predict by argmax (one-hot training labels) instead of thresholding.
    pub single_label: bool,
}

impl OvrModel {
    /// Indices of label columns whose training data held a single class.
    pub fn degenerate_columns(&self) -> Vec<usize> {
        self.models
            .iter()
            .enumerate()
            .filter(|(_, m)| m.degenerate)
            .map(|(j, _)| j)
            .collect()
    }

    /// Per-column probabilities, one row per instance.
    pub fn predict_proba(&self, x: ArrayView2<'_, f64>) -> Array2<f64> {
        let xs = self.standardizer.transform(x);
        let mut out = Array2::zeros((x.nrows(), self.models.len()));
        for (j, m) in self.models.iter().enumerate() {
            out.column_mut(j).assign(&m.predict_proba(xs.view()));
        }
        out
    }
}

pub fn ovr_fit(x: ArrayView2<'_, f64>, y: &LabelMatrix, cfg: &LogRegConfig) -> Result<OvrModel> {
    if x.nrows() != y.nrows() {
        return Err(Error::RowCountMismatch {
            what: "classifier labels",
            expected: x.nrows(),
            found: y.nrows(),
        });
    }
    let standardizer = Standardizer::fit(x);
    let xs = standardizer.transform(x);
    let models = y
        .columns()
        .into_iter()
        .map(|col| {
            let target: Vec<bool> = col.iter().map(|&v| v != 0).collect();
            LogisticRegression::fit(xs.view(), &target, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OvrModel {
        standardizer,
        models,
        single_label: is_one_hot(y),
    })
}

/// Argmax for single-label models, probability >= 0.5 otherwise.
pub fn ovr_predict(model: &OvrModel, x: ArrayView2<'_, f64>) -> LabelMatrix {
    let p = model.predict_proba(x);
    let mut out = LabelMatrix::zeros(p.dim());
    for (i, row) in p.rows().into_iter().enumerate() {
        if model.single_label {
            let best = row
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (j, &v)| if v > acc.1 { (j, v) } else { acc })
                .0;
            if !row.is_empty() {
                out[[i, best]] = 1;
            }
        } else {
            for (j, &v) in row.iter().enumerate() {
                if v >= 0.5 {
                    out[[i, j]] = 1;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn separable_toy_is_fit_exactly() {
        let x = array![[0.0, 0.0], [0.2, 0.1], [0.1, 0.3], [2.0, 2.0], [2.2, 1.9], [1.8, 2.3]];
        let y = [false, false, false, true, true, true];
        let m = LogisticRegression::fit(x.view(), &y, &LogRegConfig::default()).unwrap();
        let p = m.predict_proba(x.view());
        for (pi, yi) in p.iter().zip(y) {
            assert_eq!(*pi >= 0.5, yi);
        }
    }

    #[test]
    fn identical_features_give_half() {
        let x = Array2::from_elem((6, 2), 1.0);
        let y = [true, false, true, false, true, false];
        let m = LogisticRegression::fit(x.view(), &y, &LogRegConfig::default()).unwrap();
        for p in m.predict_proba(x.view()) {
            assert!((p - 0.5).abs() < 1e-3, "{p}");
        }
    }

    #[test]
    fn fit_never_worse_than_zero_weights() {
        let x = array![[1.0, -0.5], [0.3, 0.2], [-1.0, 0.8], [0.5, 0.5], [-0.2, -0.9]];
        let y = [true, false, false, true, true];
        let cfg = LogRegConfig::default();
        let m = LogisticRegression::fit(x.view(), &y, &cfg).unwrap();
        let fitted = regularized_objective(x.view(), &y, m.weights.view(), m.bias, cfg.strength);
        let zero = regularized_objective(x.view(), &y, Array1::zeros(2).view(), 0.0, cfg.strength);
        assert!(fitted <= zero);
        assert!(m.converged);
    }

    #[test]
    fn single_class_is_degenerate() {
        let x = array![[1.0], [2.0]];
        let m = LogisticRegression::fit(x.view(), &[true, true], &LogRegConfig::default()).unwrap();
        assert!(m.degenerate);
        assert_eq!(m.predict_proba(x.view()).to_vec(), vec![1.0, 1.0]);
    }

    #[test]
    fn ovr_one_hot_three_classes() {
        let x = array![[0.0, 0.0], [0.1, 0.0], [5.0, 0.0], [5.1, 0.1], [0.0, 5.0], [0.1, 5.2]];
        let y: LabelMatrix = array![[1, 0, 0], [1, 0, 0], [0, 1, 0], [0, 1, 0], [0, 0, 1], [0, 0, 1]];
        let m = ovr_fit(x.view(), &y, &LogRegConfig::default()).unwrap();
        assert!(m.single_label);
        assert_eq!(ovr_predict(&m, x.view()), y);
    }

    #[test]
    fn ovr_multi_label_predicts_both() {
        // label 0 <=> first coordinate high, label 1 <=> second coordinate high
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..40 {
            let a = (i % 2) as f64;
            let b = ((i / 2) % 2) as f64;
            rows.extend([a * 3.0 + 0.01 * i as f64, b * 3.0 - 0.01 * i as f64]);
            labels.extend([a as u8, b as u8]);
        }
        let x = Array2::from_shape_vec((40, 2), rows).unwrap();
        let y = LabelMatrix::from_shape_vec((40, 2), labels).unwrap();
        let m = ovr_fit(x.view(), &y, &LogRegConfig::default()).unwrap();
        assert!(!m.single_label);
        let pred = ovr_predict(&m, array![[3.0, 3.0]].view());
        assert_eq!(pred, array![[1u8, 1]]);
    }

    #[test]
    fn ovr_flags_empty_column() {
        let x = array![[0.0], [1.0], [2.0]];
        let y: LabelMatrix = array![[1, 1, 0], [0, 1, 0], [1, 0, 0]];
        let m = ovr_fit(x.view(), &y, &LogRegConfig::default()).unwrap();
        assert_eq!(m.degenerate_columns(), vec![2]);
        assert!(ovr_predict(&m, x.view()).column(2).iter().all(|&v| v == 0));
    }
}
