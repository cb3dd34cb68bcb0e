//! Special functions and quadrature used by the analytical engine.

mod gamma;
mod hyp2f1;
mod quadrature;
mod summation;

pub use gamma::{gamma_fn, gamma_signed, recip_gamma};
pub use hyp2f1::{hyp2f1, hyp2f1_regularized};
pub use quadrature::{
    integrate_finite, integrate_finite_detailed, integrate_semi_infinite, integrate_semi_infinite_detailed,
    QuadratureOutcome, QuadratureSpec, Truncation,
};
pub use summation::NeumaierSum;
