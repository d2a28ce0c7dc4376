use num_complex::Complex;

use super::{irrep_info, su2_characters};
use crate::error::{invalid, Error, Result};
use crate::group::{ComplexGroupElement, GroupKind};
use crate::scalar::Real;

pub const DEFAULT_TOL_COMPACT: f64 = 1e-12;
pub const DEFAULT_TOL_COMPLEX: f64 = 1e-9;
pub const MAX_TERMS: usize = 10_000;

/// Bound on the `n`-th term: `d² e^{−t c/2} spread^n` (SU(2)), and twice
/// `e^{−t k²/2} spread^k` for the `±k` pair on U(1).
fn term_bound(kind: GroupKind, t: f64, log_spread: f64, n: usize) -> f64 {
    let nf = n as f64;
    match kind {
        GroupKind::U1 => 2.0 * (-t * nf * nf / 2.0 + nf * log_spread).exp(),
        GroupKind::Su2 => {
            (nf + 1.0).powi(2) * (-t * nf * (nf + 2.0) / 8.0 + nf * log_spread).exp()
        }
    }
}

/// Number of series terms needed so that the remaining tail is below `tol`.
fn terms_needed(kind: GroupKind, t: f64, spread: f64, tol: f64) -> Result<usize> {
    let ls = spread.max(1.0).ln();
    for n in 0..MAX_TERMS {
        let b1 = term_bound(kind, t, ls, n + 1);
        let b2 = term_bound(kind, t, ls, n + 2);
        let ratio = b2 / b1;
        if ratio < 1.0 && b1 / (1.0 - ratio) < tol {
            return Ok(n);
        }
    }
    Err(Error::NonConvergence { terms: MAX_TERMS, tol })
}

/// Heat kernel `ρ_t(g) = Σ_λ d_λ e^{−t c_λ/2} χ_λ(g)` at the identity, or its
/// holomorphic continuation when `g ∈ K_C`.
pub fn heat_kernel<T: Real>(kind: GroupKind, t: T, g: &ComplexGroupElement<T>, tol: T) -> Result<Complex<T>> {
    if !(t > T::zero()) {
        return Err(invalid(format!("heat kernel time must be positive, got {t}")));
    }
    if !(tol > T::zero()) {
        return Err(invalid("heat kernel tolerance must be positive"));
    }
    let n_max = terms_needed(kind, t.as_f64(), g.spread().as_f64(), tol.as_f64())?;
    let half = T::lit(0.5);
    Ok(match kind {
        GroupKind::U1 => {
            let ComplexGroupElement::U1(z) = *g else { unreachable!() };
            let (zi, mut p, mut q) = (z.inv(), z, z.inv());
            let mut acc = Complex::new(T::one(), T::zero());
            for k in 1..=n_max {
                let w = (-t * T::lit((k * k) as f64) * half).exp();
                acc = acc + (p + q) * w;
                p = p * z;
                q = q * zi;
            }
            acc
        }
        GroupKind::Su2 => {
            let chars = su2_characters(n_max, g);
            chars.iter().enumerate().fold(Complex::new(T::zero(), T::zero()), |acc, (n, chi)| {
                let info = irrep_info::<T>(kind, n as i64).expect("valid label");
                acc + *chi * (T::lit(info.dim as f64) * (-t * info.casimir * half).exp())
            })
        }
    })
}

/// [`heat_kernel`] with the default tolerance for K or K_C.
pub fn heat_kernel_auto<T: Real>(kind: GroupKind, t: T, g: &ComplexGroupElement<T>) -> Result<Complex<T>> {
    let tol = if g.to_compact(T::lit(1e-9)).is_some() {
        DEFAULT_TOL_COMPACT
    } else {
        DEFAULT_TOL_COMPLEX
    };
    heat_kernel(kind, t, g, T::lit(tol))
}

/// `∫_K χ_λ ρ_t dx = d_λ e^{−t c_λ/2}`.
pub fn heat_moment<T: Real>(kind: GroupKind, label: i64, t: T) -> Result<T> {
    let info = irrep_info::<T>(kind, label)?;
    Ok(T::lit(info.dim as f64) * (-t * info.casimir * T::lit(0.5)).exp())
}
