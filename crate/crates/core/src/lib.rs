//! Exact counting for Vinogradov-type mean values.
//!
//! The crate counts solutions of power-sum systems over integer intervals,
//! residue classes, short intervals, quadratic rings and `F_q[t]`, and
//! evaluates related closed-form exponent bounds.

pub mod apps;
pub mod arith;
pub mod engine;
pub mod error;
pub mod ffield;
pub mod padic;
pub mod poly;
pub mod polysys;
pub mod ring;

pub use engine::{
    brute_force_mean_value, build_rep_table, exponent_fit, mean_value, EngineConfig, FitReport, GaussInt,
    MeanValueResult, RepTable, Value, WeightSeq,
};
pub use error::{Error, Result};
pub use poly::{Degree, IntPolynomial};
pub use polysys::{
    is_pc_spaced, tdi_map, wronskian, wronskian_unit_filter, PolynomialSystem, RationalFunctionSystem, Solution,
};
pub use padic::{
    bracket, interval_congruence_count, k_mean, lambda_probe, u_mean, u_mean_restricted, CongruenceMeanValue,
    LambdaEstimate, PadicContext,
};
pub use ffield::{ff_exponent_probe, ff_mean_value, FfSystem, FqBox, FqPoly, GaloisField};
pub use apps::{
    delta_rd, gtilde_bound, hua_exponent, search_tarry, singular_integral, singular_series, theta_d, verify_tarry,
    waring_s0, TarryWitness,
};
