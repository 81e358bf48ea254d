//! Independent oracles and instance generators for the workspace test
//! suites.
//!
//! Everything here deliberately re-derives results through a different
//! route than the production code: definitional formulas with compensated
//! summation, normal equations instead of QR, a dense projected-gradient
//! QP solve instead of SMO, quadrature instead of continued fractions,
//! and central finite differences instead of backpropagation.

pub mod gen;
pub mod gradcheck;
pub mod linalg;
pub mod oracles;
pub mod qp;

pub use gradcheck::max_gradient_relative_error;
pub use linalg::normal_equations_ols;
pub use oracles::{
    normal_cdf_quadrature, pearson_definitional, rank_oracle, spearman_definitional,
    t_two_tailed_quadrature,
};
pub use qp::{kkt_audit, solve_svr_dual_qp, svr_dual_objective, KktReport};
