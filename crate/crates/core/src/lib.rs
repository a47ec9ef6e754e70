//! Nearest point of the standard simplex under an SPD-induced metric, and
//! the minimum-variance portfolio machinery built on it.

pub mod backtest;
pub mod error;
pub mod face;
pub mod hyperplane;
pub mod ingestion;
pub mod metric;
pub mod oracle;
pub mod simplex;
pub mod stats;
pub mod weights;

pub use backtest::{run_backtest, BacktestReport};
pub use error::{Error, Result};
pub use face::{project_onto_face_hull, FaceIndexSet};
pub use hyperplane::{
    minvar_closed_form, minvar_matrix_a, minvar_two_asset, HyperplaneMethod, HyperplaneSolution,
};
pub use ingestion::{
    build_return_panel, load_prices, Period, PriceFormat, PriceSeries,
};
pub use metric::{solve_linear, MetricMatrix};
pub use oracle::{euclidean_sort_project, oracle_minvar_hyperplane, oracle_project};
pub use simplex::{
    hyperface_distances, is_in_simplex, project_onto_simplex, project_onto_simplex_with,
    MemoPolicy, ProjectionOptions, ProjectionResult, SearchStats,
};
pub use stats::{estimate_moments, portfolio_moments, MomentEstimates, ReturnPanel};
pub use weights::WeightVector;
