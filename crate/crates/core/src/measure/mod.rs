//! Distributions on (Z_p)^m as compatible level tables, their operation
//! algebra, Riemann-sum integrals and the Iwasawa / exponential transforms.

pub mod corrections;
pub mod dirac;
mod family;
pub mod graded;
pub mod integral;
pub mod ops;
pub mod transform;

pub use dirac::DiracCombination;
pub use family::{flatten, level_size, unflatten, DistFailure, DistReport, LevelFamily};
pub use graded::GradedSequence;
pub use integral::{box_integral, riemann_sum, BoxIntegral, Poly};
pub use ops::{
    exterior_power, exterior_product, linear_combine, measures_equal, pushforward_affine, reflect, scale_action,
    signed_perm_action, translate, translate_diag,
};
pub use transform::{iwasawa_p, transform_f, IwasawaPoly};

#[cfg(test)]
mod tests;
