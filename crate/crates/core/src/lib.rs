//! Exact symbolic machinery for geometric and unipotent crystals on matrix
//! groups of type A (plus a folded C2 inside SL4 and the D4 Weyl group),
//! together with the tropicalization of positive charts into combinatorial
//! crystals on integer lattices.
//!
//! Everything is computed over arbitrary-precision rationals; identity
//! checks are either exact (cross-multiplied polynomial equality) or
//! sampled (evaluation at seeded random rational points, each point exact).

pub mod error;
pub mod intlin;
pub mod matgroup;
pub mod par;
pub mod poly;
pub mod ratfunc;
pub mod report;
pub mod sample;
pub mod suites;
pub mod tropic;
pub mod unicrys;
pub mod weyl;

pub mod geomcrys;

pub use error::Error;
pub use ratfunc::{Rat, RatFunc};

pub type Result<T> = std::result::Result<T, Error>;
