//! Downstream evaluation: node classification, edge classification and
//! link prediction over repeated seeded splits.

mod logreg;
mod metrics;
mod report;
mod tasks;

pub use logreg::{
    is_one_hot, ovr_fit, ovr_predict, regularized_objective, LogRegConfig, LogisticRegression,
    OvrModel, Standardizer,
};
pub use metrics::{l2_edge_operator, macro_f1, micro_f1, roc_auc};
pub use report::EvalReport;
pub use tasks::{
    edge_classification_eval, link_prediction_eval, link_split, node_classification_eval,
    split_indices, LinkSpec, LinkSplit, SplitSpec,
};
