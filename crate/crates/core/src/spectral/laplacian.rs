use num_complex::Complex;

use super::{character, validate_label};
use crate::error::{invalid, Error, Result};
use crate::group::{exp_map, AlgebraVector, ComplexGroupElement, GroupElement, GroupKind};
use crate::scalar::Real;

/// Default step along the one-parameter subgroups.
pub const FD_GROUP_STEP: f64 = 1e-2;

fn second_difference<T: Real, F>(f: &F, g: &GroupElement<T>, h: T) -> Complex<T>
where
    F: Fn(&ComplexGroupElement<T>) -> Complex<T>,
{
    let kind = g.kind();
    let f0 = f(&g.complexify());
    (0..kind.dim()).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
        let e = AlgebraVector::basis(kind, j).scale(h);
        let plus = f(&(*g * exp_map(&e)).complexify());
        let minus = f(&(*g * exp_map(&(-e))).complexify());
        acc + (plus + minus - f0 * T::lit(2.0)) / (h * h)
    })
}

/// `Δ_K f(g) = Σ_j d²/dt² f(g·exp(t e_j))|_{t=0}` by central differences,
/// Richardson-extrapolated from steps `h` and `h/2`.
pub fn fd_group_laplacian<T: Real, F>(f: F, g: &GroupElement<T>, h: T) -> Complex<T>
where
    F: Fn(&ComplexGroupElement<T>) -> Complex<T>,
{
    let d1 = second_difference(&f, g, h);
    let d2 = second_difference(&f, g, h * T::lit(0.5));
    (d2 * T::lit(4.0) - d1) / T::lit(3.0)
}

/// Casimir estimated from the finite-difference Laplacian of `χ_label`:
/// the least-squares ratio `−Σ conj(χ) Δχ / Σ |χ|²` over `points`.
///
/// Fails when extrapolations at `h` and `h/2` disagree by more than
/// `1e-6·(1 + c)` (step too small for roundoff, or too large).
pub fn casimir_oracle<T: Real>(kind: GroupKind, label: i64, points: &[GroupElement<T>], h: T) -> Result<T> {
    validate_label(kind, label)?;
    if points.is_empty() {
        return Err(invalid("Casimir oracle needs at least one point"));
    }
    let chi = |g: &ComplexGroupElement<T>| character(kind, label, g);
    let estimate = |step: T| {
        let (mut num, mut den) = (T::zero(), T::zero());
        for g in points {
            let c = chi(&g.complexify());
            let lap = fd_group_laplacian(chi, g, step);
            num += -(c.conj() * lap).re;
            den += c.norm_sqr();
        }
        num / den
    };
    let c1 = estimate(h);
    let c2 = estimate(h * T::lit(0.5));
    let spread = (c1 - c2).abs();
    if spread > T::lit(1e-6) * (T::one() + c2.abs()) {
        return Err(Error::FiniteDifference { spread: spread.as_f64() });
    }
    Ok(c2)
}
