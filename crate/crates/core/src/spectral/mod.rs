//! Irreducible characters, heat kernels and the heat semigroup on K.
//!
//! Labels are integers: `k ∈ ℤ` for U(1) (`χ_k(z) = z^k`) and `n ≥ 0` for
//! SU(2) (spin `n/2`, dimension `n + 1`). Characters are polynomials in the
//! trace (or Laurent monomials), so evaluating them on K_C is their
//! holomorphic continuation.

mod heat;
mod laplacian;
mod rep;
mod series;

use num_complex::Complex;

use crate::error::{invalid, Result};
use crate::group::{ComplexGroupElement, GroupKind};
use crate::scalar::Real;

pub use heat::{heat_kernel, heat_kernel_auto, heat_moment, DEFAULT_TOL_COMPACT, DEFAULT_TOL_COMPLEX, MAX_TERMS};
pub use laplacian::{casimir_oracle, fd_group_laplacian, FD_GROUP_STEP};
pub use rep::rep_matrix;
pub use series::{character_product, weighted_inner_product, CharacterSeries};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IrrepInfo<T> {
    pub label: i64,
    pub dim: usize,
    /// Eigenvalue of `−Δ_K` on the character.
    pub casimir: T,
}

pub fn validate_label(kind: GroupKind, label: i64) -> Result<()> {
    if kind == GroupKind::Su2 && label < 0 {
        return Err(invalid(format!("SU(2) labels are non-negative, got {label}")));
    }
    Ok(())
}

/// Dimension and Casimir of an irreducible representation.
///
/// The Casimir is the closed form for the inner product `−2 tr(XY)`:
/// `k²` on U(1) and `n(n+2)/4` (= `j(j+1)`, `j = n/2`) on SU(2). The test
/// suite checks it against [`casimir_oracle`], the finite-difference
/// Laplacian of the character.
pub fn irrep_info<T: Real>(kind: GroupKind, label: i64) -> Result<IrrepInfo<T>> {
    validate_label(kind, label)?;
    Ok(match kind {
        GroupKind::U1 => IrrepInfo { label, dim: 1, casimir: T::lit((label * label) as f64) },
        GroupKind::Su2 => IrrepInfo {
            label,
            dim: label as usize + 1,
            casimir: T::lit((label * (label + 2)) as f64 / 4.0),
        },
    })
}

/// `χ_label(g)`; SU(2) via `χ_n = tr(g)·χ_{n−1} − χ_{n−2}`.
pub fn character<T: Real>(kind: GroupKind, label: i64, g: &ComplexGroupElement<T>) -> Complex<T> {
    debug_assert_eq!(kind, g.kind());
    match g {
        ComplexGroupElement::U1(z) => z.powi(label as i32),
        ComplexGroupElement::Su2(m) => {
            debug_assert!(label >= 0);
            let tr = m.trace();
            let mut prev = Complex::new(T::zero(), T::zero());
            let mut cur = Complex::new(T::one(), T::zero());
            for _ in 0..label {
                let next = tr * cur - prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// `[χ_0(g), …, χ_n(g)]` for SU(2) in one pass of the recursion.
pub fn su2_characters<T: Real>(n: usize, g: &ComplexGroupElement<T>) -> Vec<Complex<T>> {
    let tr = g.trace();
    let mut out = Vec::with_capacity(n + 1);
    let mut prev = Complex::new(T::zero(), T::zero());
    let mut cur = Complex::new(T::one(), T::zero());
    for _ in 0..=n {
        out.push(cur);
        let next = tr * cur - prev;
        prev = cur;
        cur = next;
    }
    out
}

#[cfg(test)]
mod tests;
