use super::{exp_map_complex, AlgebraVector, ComplexGroupElement, GroupElement, GroupKind, Mat2};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `(x, Y)` with `g = x·exp(i·Y)`, `x ∈ K`, `Y ∈ 𝔨`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarCoordinates<T> {
    pub x: GroupElement<T>,
    pub y: AlgebraVector<T>,
}

impl<T: Real> PolarCoordinates<T> {
    /// `x·exp(i·embed(Y))`.
    pub fn reconstruct(&self) -> ComplexGroupElement<T> {
        let kind = self.x.kind();
        self.x.complexify() * exp_map_complex(&AlgebraVector::zero(kind), &self.y)
    }
}

/// Polar decomposition of K_C.
///
/// For SL(2,C) the positive factor `p = (g†g)^{1/2}` is written as
/// `cosh η + sinh η n·σ`, whose unique Hermitian logarithm is `η n·σ`.
pub fn polar_decompose<T: Real>(g: &ComplexGroupElement<T>) -> Result<PolarCoordinates<T>> {
    let tiny = T::lit(1e-12);
    match *g {
        ComplexGroupElement::U1(z) => {
            let r = z.norm();
            if !(r > tiny) || !r.is_finite() {
                return Err(Error::SingularPolarFactor { det: r.as_f64() });
            }
            Ok(PolarCoordinates {
                x: GroupElement::U1(z / r),
                y: AlgebraVector::u1(-r.ln()),
            })
        }
        ComplexGroupElement::Su2(m) => {
            let det = m.det();
            if !(det.norm() > tiny) || !m.is_finite() {
                return Err(Error::SingularPolarFactor { det: det.norm().as_f64() });
            }
            let m = m.scale(det.sqrt().inv());
            let h = m.adjoint() * m;
            let half = T::lit(0.5);
            let b = [
                (h * Mat2::pauli(0)).trace().re * half,
                (h * Mat2::pauli(1)).trace().re * half,
                (h * Mat2::pauli(2)).trace().re * half,
            ];
            let bn = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
            // h = cosh 2η + sinh 2η n·σ
            let eta = bn.asinh() * half;
            if bn <= T::min_positive_value() {
                return Ok(PolarCoordinates {
                    x: GroupElement::Su2(m).reproject(),
                    y: AlgebraVector::zero(GroupKind::Su2),
                });
            }
            let n = [b[0] / bn, b[1] / bn, b[2] / bn];
            let n_sigma = (0..3).fold(Mat2::zero(), |acc, j| acc + Mat2::pauli(j).scale_re(n[j]));
            let p_inv = Mat2::identity().scale_re(eta.cosh()) - n_sigma.scale_re(eta.sinh());
            let x = GroupElement::Su2(m * p_inv).reproject();
            // i·embed(y) = −(1/2) y·σ must equal η n·σ
            let k = -T::lit(2.0) * eta;
            Ok(PolarCoordinates {
                x,
                y: AlgebraVector::su2([n[0] * k, n[1] * k, n[2] * k]),
            })
        }
    }
}

/// Convenience for tests and examples: `exp(x)·exp(i·y)`.
pub fn from_polar<T: Real>(x: &AlgebraVector<T>, y: &AlgebraVector<T>) -> ComplexGroupElement<T> {
    PolarCoordinates { x: super::exp_map(x), y: *y }.reconstruct()
}

