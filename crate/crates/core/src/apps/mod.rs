//! Tarry's problem, closed-form exponent bounds, and truncated singular
//! series and integrals.

pub mod bounds;
pub mod singular;
pub mod tarry;

pub use bounds::{bound_report, delta_rd, gtilde_bound, hua_exponent, theta_d, waring_s0, BoundReport};
pub use singular::{singular_integral, singular_series, SingularIntegral, SingularSeries};
pub use tarry::{search_tarry, verify_tarry, TarrySearch, TarryVerdict, TarryWitness};
