//! Exact mean values by representation-table convolution.

pub mod amplitude;
pub mod fit;
pub mod kernel;
pub mod keyspace;
pub mod mean;
pub mod multidim;
pub mod result;
pub mod weights;

pub use amplitude::{AmpValue, BigGauss, CompensatedSum, GaussInt, NormAccumulator};
pub use fit::{conjectured_exponent, exponent_fit, fit_loglog, FitReport};
pub use kernel::{build_table, AmpKind, EngineConfig, PointSet, PointWeights, RepTable, Strategy, TableSpec};
pub use mean::{
    brute_force_mean_value, build_rep_table, mean_value, mean_value_over, multiset_forcing_value, oracle_sum,
    ORACLE_CAP,
};
pub use multidim::{
    multidim_brute_force, multidim_from_quadratic, multidim_mean_value, MultiDimSystem, MultiPoly,
};
pub use result::{MeanValueResult, Value};
pub use weights::{WeightSeq, WeightValues};
