//! Piecewise log-power functions, the Hardy operator and its dual in closed
//! form, weighted `L^p` functionals, and the test-function families.

mod families;
mod functionals;
mod ops;
mod piecewise;
pub mod quadrature;
mod random;

pub use families::{bump, extremal_f, fn_family, hardy_probe};
pub use functionals::{
    ratio_h_minus_i, weighted_lp, weighted_lp_with, weighted_pairing, Integration, RatioReport,
};
pub use ops::{hardy_dual, hardy_h};
pub use piecewise::{Piece, PiecewiseLogPower, Term};
pub use random::random_function;
