//! Dense products split into fixed-size row blocks.
//!
//! Block boundaries depend only on the operand shapes, never on the number of
//! worker threads, so results are bitwise identical for any pool size.

use ndarray::linalg::general_mat_mul;
use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;

const BLOCK: usize = 128;

/// `a · b`
pub fn matmul(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Array2<f64> {
    assert_eq!(a.ncols(), b.nrows(), "matmul: inner dimensions differ");
    let mut out = Array2::zeros((a.nrows(), b.ncols()));
    if a.nrows() <= BLOCK {
        general_mat_mul(1.0, &a, &b, 0.0, &mut out);
        return out;
    }
    out.axis_chunks_iter_mut(Axis(0), BLOCK)
        .into_par_iter()
        .zip(a.axis_chunks_iter(Axis(0), BLOCK).into_par_iter())
        .for_each(|(mut o, a_blk)| general_mat_mul(1.0, &a_blk, &b, 0.0, &mut o));
    out
}

/// `aᵀ · b`, blocked over the columns of `a` (the rows of the result).
pub fn matmul_tn(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Array2<f64> {
    assert_eq!(a.nrows(), b.nrows(), "matmul_tn: inner dimensions differ");
    let at = a.t();
    let mut out = Array2::zeros((a.ncols(), b.ncols()));
    if a.ncols() <= BLOCK {
        general_mat_mul(1.0, &at, &b, 0.0, &mut out);
        return out;
    }
    out.axis_chunks_iter_mut(Axis(0), BLOCK)
        .into_par_iter()
        .zip(at.axis_chunks_iter(Axis(0), BLOCK).into_par_iter())
        .for_each(|(mut o, a_blk)| general_mat_mul(1.0, &a_blk, &b, 0.0, &mut o));
    out
}

/// `a · bᵀ`
pub fn matmul_nt(a: ArrayView2<'_, f64>, b: ArrayView2<'_, f64>) -> Array2<f64> {
    matmul(a, b.t())
}
