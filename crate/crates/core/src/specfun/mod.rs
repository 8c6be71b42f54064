//! Special functions used by the estimation distributions.

mod gamma;
mod hermite;
mod hyp2f1;
mod squeeze;

pub use gamma::{abs_gamma_quarter_line, ln_gamma};
pub use hermite::{hermite_function, HermiteSweep};
pub use hyp2f1::hyp2f1_terminating;
pub use squeeze::{
    diag_squeeze_element, diag_squeeze_element_series, legendre, squeeze_column, Parity, Seed,
    SqueezeColumn, OFF_DIAGONAL_SIGN,
};
pub(crate) use squeeze::sech;
