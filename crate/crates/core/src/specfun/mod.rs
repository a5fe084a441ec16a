//! Special functions and quadrature.

mod bessel;
mod quadrature;

pub use bessel::{
    bessel_j, bessel_j_reduced, first_bessel_zero, BesselOrder, SERIES_SWITCH,
};
pub use quadrature::{gauss_legendre, power_of_two_rule, QuadratureRule, MAX_NODES};

pub(crate) use bessel::reduced_twice;
