//! Numerical kernels: L1 regression, the bounded correction QP, scalar
//! clustering, factor extraction, ordered logit and evaluation metrics.

pub mod cluster;
pub mod factor;
pub mod lasso;
pub mod metrics;
pub mod ologit;
pub mod qp;

pub use cluster::{hcluster, kmeans, silhouette, Linkage};
pub use factor::{factor_fit, FactorModel};
pub use lasso::{lasso_fit, LassoModel};
pub use metrics::{metrics, MetricsReport};
pub use ologit::{ologit_fit, OrdLogitFit, OrdLogitModel};
pub use qp::{qp_correct, QpSolution};
