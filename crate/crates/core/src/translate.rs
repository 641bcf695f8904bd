//! Pair-to-node translators.

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2, Axis};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::PairSet;

/// Permutation-invariant reduction over a node's outgoing pair embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Translator {
    #[default]
    Sum,
    Mean,
    Max,
    Min,
}

impl Translator {
    pub const ALL: [Translator; 4] = [
        Translator::Sum,
        Translator::Mean,
        Translator::Max,
        Translator::Min,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Translator::Sum => "sum",
            Translator::Mean => "mean",
            Translator::Max => "max",
            Translator::Min => "min",
        }
    }
}

impl fmt::Display for Translator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Translator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Ok(Translator::Sum),
            "mean" => Ok(Translator::Mean),
            "max" => Ok(Translator::Max),
            "min" => Ok(Translator::Min),
            _ => Err(Error::UnknownTranslator(s.to_string())),
        }
    }
}

/// Node embeddings from pair embeddings: row `u` reduces the rows of every
/// pair with source `u`. Nodes without outgoing pairs get zeros.
pub fn pairs_to_nodes(
    pair_emb: ArrayView2<'_, f64>,
    ps: &PairSet,
    translator: Translator,
) -> Result<Array2<f64>> {
    if pair_emb.nrows() != ps.len() {
        return Err(Error::RowCountMismatch {
            what: "pair embeddings",
            expected: ps.len(),
            found: pair_emb.nrows(),
        });
    }
    let dim = pair_emb.ncols();
    let mut out = Array2::zeros((ps.n_nodes(), dim));
    out.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(u, mut row)| {
            let ids = ps.out_pairs(u);
            let Some((&first, rest)) = ids.split_first() else {
                return;
            };
            row.assign(&pair_emb.row(first));
            for &id in rest {
                let src = pair_emb.row(id);
                match translator {
                    Translator::Sum | Translator::Mean => row += &src,
                    Translator::Max => row.zip_mut_with(&src, |a, &b| *a = a.max(b)),
                    Translator::Min => row.zip_mut_with(&src, |a, &b| *a = a.min(b)),
                }
            }
            if translator == Translator::Mean {
                row /= ids.len() as f64;
            }
        });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_pairs, Graph};
    use ndarray::array;

    fn star_pairs() -> PairSet {
        // directed: 0 -> 1, 0 -> 2, 1 -> 2; node 3 isolated
        let g = Graph::new(
            4,
            vec![(0, 1), (0, 2), (1, 2)],
            Array2::ones((4, 1)),
            None,
            None,
            true,
        )
        .unwrap();
        enumerate_pairs(&g)
    }

    #[test]
    fn definitional_arithmetic() {
        let ps = star_pairs();
        let pe = array![[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]];
        let expect = [
            (Translator::Sum, [4.0, 6.0]),
            (Translator::Mean, [2.0, 3.0]),
            (Translator::Max, [3.0, 4.0]),
            (Translator::Min, [1.0, 2.0]),
        ];
        for (t, row0) in expect {
            let ne = pairs_to_nodes(pe.view(), &ps, t).unwrap();
            assert_eq!(ne.row(0).to_vec(), row0.to_vec(), "{t}");
            // one out-pair: that pair's row
            assert_eq!(ne.row(1).to_vec(), vec![5.0, 6.0], "{t}");
            // no out-pairs: zeros
            assert_eq!(ne.row(2).to_vec(), vec![0.0, 0.0], "{t}");
            assert_eq!(ne.row(3).to_vec(), vec![0.0, 0.0], "{t}");
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("MEAN".parse::<Translator>().unwrap(), Translator::Mean);
        assert!(matches!(
            "median".parse::<Translator>(),
            Err(Error::UnknownTranslator(_))
        ));
    }

    #[test]
    fn misaligned_rows_rejected() {
        let ps = star_pairs();
        let pe = Array2::zeros((2, 2));
        assert!(pairs_to_nodes(pe.view(), &ps, Translator::Sum).is_err());
    }
}
