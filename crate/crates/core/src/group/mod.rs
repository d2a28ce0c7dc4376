//! The structure group K ∈ {U(1), SU(2)} and its complexification.

mod algebra;
mod element;
mod haar;
mod mat2;
mod polar;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use algebra::AlgebraVector;
pub use element::{
    exp_map, exp_map_complex, ordered_product, ordered_product_complex, ComplexGroupElement, GroupElement,
    REPROJECT_EVERY,
};
pub use haar::{
    haar_integrate, haar_integrate_class, sample_haar, su2_euler, torus_element, HaarIntegral, HaarMode,
};
pub use mat2::Mat2;
pub use polar::{from_polar, polar_decompose, PolarCoordinates};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    U1,
    Su2,
}

impl GroupKind {
    /// Dimension of the Lie algebra.
    pub const fn dim(self) -> usize {
        match self {
            GroupKind::U1 => 1,
            GroupKind::Su2 => 3,
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GroupKind::U1 => "u1",
            GroupKind::Su2 => "su2",
        })
    }
}

impl FromStr for GroupKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "u1" | "u(1)" => Ok(GroupKind::U1),
            "su2" | "su(2)" => Ok(GroupKind::Su2),
            other => Err(crate::error::invalid(format!("unknown group '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests;
