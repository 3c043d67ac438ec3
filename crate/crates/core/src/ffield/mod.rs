//! Mean values over the polynomial ring `F_q[t]`.

pub mod field;
pub mod mean;

pub use field::{FqBox, FqPoly, FqPolyRing, GaloisField};
pub use mean::{ff_brute_force, ff_exponent_probe, ff_mean_value, FfExponentReport, FfSystem};
