//! Long-range percolation on `Z^d`.
//!
//! Pairs `{x, y}` of lattice points are open independently with probability
//! `min(1, beta ‖x - y‖^{-s})`. The crate samples such configurations on
//! finite windows, measures chemical (graph) distance, classifies blocks of
//! the multiscale good-block hierarchy, certifies the scale constants in log
//! space, and runs seeded Monte Carlo experiments on `D(0, x) / ‖x‖`.

pub mod certificates;
pub mod error;
pub mod harness;
pub mod lattice_model;
pub mod metric;
pub mod renorm;
pub mod sampler;

pub use certificates::{
    certify, check_inequalities, empirical_p0, find_min_ln_m, iterate_recursion, Certificate,
    ConstantsSpec,
};
pub use error::{BundleError, Error, Result};
pub use harness::{
    estimate_block_goodness, regime_diagnostics, run_ratio_experiment, ExperimentPlan,
    ExperimentResult, Regime,
};
pub use lattice_model::{
    block_side, children_of, connection_probability, shifted_copies, Block, BlockHierarchy,
    Boundary, LatticeBox, Norm, Params, Point, Region,
};
pub use metric::{
    bfs_from, chemical_distance, path_stats, restricted_distance, Distance, DistanceResult, Path,
    PathStats,
};
pub use renorm::{
    classify_block, decompose_path, environment_is_good, select_waypoints, BlockStatus, Classifier,
    Decomposition, Verdict,
};
pub use sampler::{
    edges_touching, load_bundle, sample_configuration, save_bundle, Backend, Configuration,
    Provenance, Sampler,
};
