use ndarray::{ArrayView1, ArrayView2};

use crate::error::{Error, Result};

fn counts(y_true: ArrayView1<'_, u8>, y_pred: ArrayView1<'_, u8>) -> (usize, usize, usize) {
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (&t, &p) in y_true.iter().zip(y_pred.iter()) {
        match (t != 0, p != 0) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            _ => {}
        }
    }
    (tp, fp, fn_)
}

fn f1(tp: usize, fp: usize, fn_: usize) -> f64 {
    let denom = 2 * tp + fp + fn_;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

fn check_shapes(y_true: &ArrayView2<'_, u8>, y_pred: &ArrayView2<'_, u8>) -> Result<()> {
    if y_true.dim() != y_pred.dim() {
        return Err(Error::Shape(format!(
            "label matrices {:?} vs {:?}",
            y_true.dim(),
            y_pred.dim()
        )));
    }
    Ok(())
}

/// F1 over true/false positives pooled across every label column.
pub fn micro_f1(y_true: ArrayView2<'_, u8>, y_pred: ArrayView2<'_, u8>) -> Result<f64> {
    check_shapes(&y_true, &y_pred)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for (t, p) in y_true.columns().into_iter().zip(y_pred.columns()) {
        let (a, b, c) = counts(t, p);
        tp += a;
        fp += b;
        fn_ += c;
    }
    Ok(f1(tp, fp, fn_))
}

/// Unweighted mean of per-column F1; a column with no positives in either
/// matrix scores 0.
pub fn macro_f1(y_true: ArrayView2<'_, u8>, y_pred: ArrayView2<'_, u8>) -> Result<f64> {
    check_shapes(&y_true, &y_pred)?;
    if y_true.ncols() == 0 {
        return Ok(0.0);
    }
    let sum: f64 = y_true
        .columns()
        .into_iter()
        .zip(y_pred.columns())
        .map(|(t, p)| {
            let (a, b, c) = counts(t, p);
            f1(a, b, c)
        })
        .sum();
    Ok(sum / y_true.ncols() as f64)
}

/// Area under the ROC curve as a rank statistic: the probability that a
/// random positive outscores a random negative, ties counting one half.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} scores vs {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::NonFinite("auc scores"));
    }
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(Error::Undefined(
            "roc_auc needs both positive and negative examples".into(),
        ));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // average 1-based ranks over tie groups
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        rank_sum_pos += avg * order[i..=j].iter().filter(|&&k| labels[k]).count() as f64;
        i = j + 1;
    }
    let np = n_pos as f64;
    Ok((rank_sum_pos - np * (np + 1.0) / 2.0) / (np * n_neg as f64))
}

/// Elementwise `(z_u - z_v)^2`.
pub fn l2_edge_operator(z_u: ArrayView1<'_, f64>, z_v: ArrayView1<'_, f64>) -> Result<ndarray::Array1<f64>> {
    if z_u.len() != z_v.len() {
        return Err(Error::Shape(format!("{} vs {}", z_u.len(), z_v.len())));
    }
    Ok(ndarray::Zip::from(&z_u).and(&z_v).map_collect(|a, b| (a - b) * (a - b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn f1_perfect_and_all_wrong() {
        let y = array![[1u8, 0, 0], [0, 1, 0], [0, 0, 1]];
        assert_eq!(micro_f1(y.view(), y.view()).unwrap(), 1.0);
        assert_eq!(macro_f1(y.view(), y.view()).unwrap(), 1.0);
        let wrong = array![[0u8, 1, 0], [0, 0, 1], [1, 0, 0]];
        assert_eq!(micro_f1(y.view(), wrong.view()).unwrap(), 0.0);
        assert_eq!(macro_f1(y.view(), wrong.view()).unwrap(), 0.0);
        let empty = ndarray::Array2::<u8>::zeros((3, 3));
        assert_eq!(micro_f1(y.view(), empty.view()).unwrap(), 0.0);
    }

    #[test]
    fn f1_hand_case() {
        // label 0: tp 2, fp 1, fn 0 -> 4/5; label 1: tp 1, fp 0, fn 1 -> 2/3
        let t = array![[1u8, 1], [1, 0], [0, 1], [0, 0]];
        let p = array![[1u8, 1], [1, 0], [0, 0], [1, 0]];
        let micro = micro_f1(t.view(), p.view()).unwrap();
        assert!((micro - 6.0 / 8.0).abs() < 1e-15);
        let macro_ = macro_f1(t.view(), p.view()).unwrap();
        assert!((macro_ - (0.8 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
    }

    fn brute_auc(s: &[f64], l: &[bool]) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..s.len() {
            for j in 0..s.len() {
                if l[i] && !l[j] {
                    den += 1.0;
                    num += if s[i] > s[j] {
                        1.0
                    } else if s[i] == s[j] {
                        0.5
                    } else {
                        0.0
                    };
                }
            }
        }
        num / den
    }

    #[test]
    fn auc_cases() {
        assert_eq!(roc_auc(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]).unwrap(), 1.0);
        assert_eq!(roc_auc(&[0.5; 4], &[false, true, false, true]).unwrap(), 0.5);
        let s = [0.3, 0.7, 0.7, 0.1, 0.9, 0.3];
        let l = [true, false, true, false, true, false];
        assert!((roc_auc(&s, &l).unwrap() - brute_auc(&s, &l)).abs() < 1e-15);
        assert!(roc_auc(&[0.1, 0.2], &[true, true]).is_err());
    }

    #[test]
    fn l2_operator() {
        let a = array![1.0, 2.0];
        let b = array![3.0, 0.0];
        assert_eq!(l2_edge_operator(a.view(), b.view()).unwrap().to_vec(), vec![4.0, 4.0]);
        assert_eq!(l2_edge_operator(a.view(), a.view()).unwrap().to_vec(), vec![0.0, 0.0]);
        assert!(l2_edge_operator(a.view(), array![1.0].view()).is_err());
    }
}
