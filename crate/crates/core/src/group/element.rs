use std::ops::Mul;

use num_complex::Complex;

use super::algebra::complex_su2_matrix;
use super::{AlgebraVector, GroupKind, Mat2};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of multiplications between unitary re-projections in long
/// ordered products.
pub const REPROJECT_EVERY: usize = 64;

/// Point of the compact group K: a unit complex number or an SU(2) matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GroupElement<T> {
    U1(Complex<T>),
    Su2(Mat2<T>),
}

/// Point of the complexification K_C: a nonzero complex number or an
/// SL(2,C) matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexGroupElement<T> {
    U1(Complex<T>),
    Su2(Mat2<T>),
}

fn sinc<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.norm() < T::lit(1e-4) {
        let z2 = z * z;
        Complex::new(T::one(), T::zero()) - z2 / T::lit(6.0) + z2 * z2 / T::lit(120.0)
    } else {
        z.sin() / z
    }
}

/// `exp` of an algebra element; the closed Rodrigues form for SU(2).
pub fn exp_map<T: Real>(x: &AlgebraVector<T>) -> GroupElement<T> {
    match x.kind() {
        GroupKind::U1 => GroupElement::U1(Complex::from_polar(T::one(), x.coord(0))),
        GroupKind::Su2 => {
            let theta = x.norm() * T::lit(0.5);
            let s = if theta < T::lit(1e-4) {
                T::one() - theta * theta / T::lit(6.0)
            } else {
                theta.sin() / theta
            };
            let m = x.to_su2_matrix().scale_re(s);
            GroupElement::Su2(Mat2::identity().scale_re(theta.cos()) + m)
        }
    }
}

/// `exp(embed(x) + i·embed(y))` in K_C.
pub fn exp_map_complex<T: Real>(x: &AlgebraVector<T>, y: &AlgebraVector<T>) -> ComplexGroupElement<T> {
    debug_assert_eq!(x.kind(), y.kind());
    match x.kind() {
        // i·x + i·(i·y) = −y + i·x
        GroupKind::U1 => ComplexGroupElement::U1(Complex::new(-y.coord(0), x.coord(0)).exp()),
        GroupKind::Su2 => {
            let w = [
                Complex::new(x.coord(0), y.coord(0)),
                Complex::new(x.coord(1), y.coord(1)),
                Complex::new(x.coord(2), y.coord(2)),
            ];
            ComplexGroupElement::Su2(exp_su2_complex(w))
        }
    }
}

/// `exp((i/2) w·σ)` for complex `w`; `M² = −(w·w)/4`.
pub(crate) fn exp_su2_complex<T: Real>(w: [Complex<T>; 3]) -> Mat2<T> {
    let q = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    let lambda = q.sqrt() * T::lit(0.5);
    let m = complex_su2_matrix(w).scale(sinc(lambda));
    Mat2::identity().scale(lambda.cos()) + m
}

fn su2_reproject<T: Real>(m: &Mat2<T>) -> Mat2<T> {
    // Orthogonal projection onto the quaternion span [[a, b], [−b̄, ā]],
    // then normalization: the Frobenius-nearest SU(2) element.
    let a = (m.m[0][0] + m.m[1][1].conj()) * T::lit(0.5);
    let b = (m.m[0][1] - m.m[1][0].conj()) * T::lit(0.5);
    let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let (a, b) = (a / n, b / n);
    Mat2::new(a, b, -b.conj(), a.conj())
}

impl<T: Real> GroupElement<T> {
    pub fn identity(kind: GroupKind) -> Self {
        match kind {
            GroupKind::U1 => Self::U1(Complex::new(T::one(), T::zero())),
            GroupKind::Su2 => Self::Su2(Mat2::identity()),
        }
    }

    /// SU(2) element from unit quaternion components `(a0, a1, a2, a3)`.
    pub fn su2_from_quaternion(q: [T; 4]) -> Self {
        let a = Complex::new(q[0], q[3]);
        let b = Complex::new(q[2], q[1]);
        Self::Su2(Mat2::new(a, b, -b.conj(), a.conj()))
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            Self::U1(_) => GroupKind::U1,
            Self::Su2(_) => GroupKind::Su2,
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::U1(z) => Self::U1(z.conj()),
            Self::Su2(m) => Self::Su2(m.adjoint()),
        }
    }

    pub fn complexify(&self) -> ComplexGroupElement<T> {
        match *self {
            Self::U1(z) => ComplexGroupElement::U1(z),
            Self::Su2(m) => ComplexGroupElement::Su2(m),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        match self {
            Self::U1(z) => *z,
            Self::Su2(m) => m.trace(),
        }
    }

    /// Frobenius distance (modulus of the difference for U(1)).
    pub fn distance(&self, other: &Self) -> T {
        self.complexify().distance(&other.complexify())
    }

    /// Nearest group element; removes floating drift after long products.
    pub fn reproject(&self) -> Self {
        match self {
            Self::U1(z) => Self::U1(*z / z.norm()),
            Self::Su2(m) => Self::Su2(su2_reproject(m)),
        }
    }

    /// Largest deviation from `|z| = 1` or from `U†U = I`, `det U = 1`.
    pub fn unitarity_defect(&self) -> T {
        match self {
            Self::U1(z) => (z.norm() - T::one()).abs(),
            Self::Su2(m) => {
                let u = (m.adjoint() * *m - Mat2::identity()).frobenius_norm();
                u.max((m.det() - Complex::new(T::one(), T::zero())).norm())
            }
        }
    }

    /// Rotation angle in `[0, π]` for U(1) (|arg|) and half the geodesic
    /// length `|X|/2 ∈ [0, π]` for SU(2).
    pub fn rotation_angle(&self) -> T {
        match self {
            Self::U1(z) => z.arg().abs(),
            Self::Su2(m) => {
                let a = m.trace().re * T::lit(0.5);
                let v = Self::su2_vector_part(m);
                let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                vn.atan2(a)
            }
        }
    }

    fn su2_vector_part(m: &Mat2<T>) -> [T; 3] {
        let c = |k: usize| (*m * Mat2::pauli(k)).trace().im * T::lit(0.5);
        [c(0), c(1), c(2)]
    }

    /// Principal logarithm. Rejects elements whose rotation angle is within
    /// `margin` of the branch cut (angle π).
    pub fn log_checked(&self, margin: T) -> Result<AlgebraVector<T>> {
        let angle = self.rotation_angle();
        if T::PI() - angle < margin {
            return Err(Error::BranchCut { angle: angle.as_f64() });
        }
        Ok(self.log())
    }

    /// Principal logarithm (`|x| ≤ 2π` for SU(2), `x ∈ (−π, π]` for U(1)).
    pub fn log(&self) -> AlgebraVector<T> {
        match self {
            Self::U1(z) => AlgebraVector::u1(z.arg()),
            Self::Su2(m) => {
                let a = m.trace().re * T::lit(0.5);
                let v = Self::su2_vector_part(m);
                let vn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                let theta = vn.atan2(a);
                // exp(x) = cos(|x|/2) + i sin(|x|/2) x̂·σ
                let k = if vn > T::min_positive_value() {
                    T::lit(2.0) * theta / vn
                } else {
                    T::lit(2.0)
                };
                AlgebraVector::su2([v[0] * k, v[1] * k, v[2] * k])
            }
        }
    }

    /// `g X g⁻¹`.
    pub fn adjoint_action(&self, x: &AlgebraVector<T>) -> AlgebraVector<T> {
        match self {
            Self::U1(_) => *x,
            Self::Su2(m) => AlgebraVector::from_su2_matrix(&(*m * x.to_su2_matrix() * m.adjoint())),
        }
    }
}

impl<T: Real> Mul for GroupElement<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        match (self, o) {
            (Self::U1(a), Self::U1(b)) => Self::U1(a * b),
            (Self::Su2(a), Self::Su2(b)) => Self::Su2(a * b),
            _ => panic!("cannot multiply elements of different groups"),
        }
    }
}

impl<T: Real> ComplexGroupElement<T> {
    pub fn identity(kind: GroupKind) -> Self {
        GroupElement::identity(kind).complexify()
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            Self::U1(_) => GroupKind::U1,
            Self::Su2(_) => GroupKind::Su2,
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Self::U1(z) => Self::U1(z.inv()),
            Self::Su2(m) => Self::Su2(m.inverse()),
        }
    }

    pub fn trace(&self) -> Complex<T> {
        match self {
            Self::U1(z) => *z,
            Self::Su2(m) => m.trace(),
        }
    }

    pub fn det(&self) -> Complex<T> {
        match self {
            Self::U1(z) => *z,
            Self::Su2(m) => m.det(),
        }
    }

    pub fn distance(&self, other: &Self) -> T {
        match (self, other) {
            (Self::U1(a), Self::U1(b)) => (*a - *b).norm(),
            (Self::Su2(a), Self::Su2(b)) => (*a - *b).frobenius_norm(),
            _ => T::infinity(),
        }
    }

    /// Rescales an SL(2,C) matrix to determinant one; identity on C*.
    pub fn reproject(&self) -> Self {
        match self {
            Self::U1(z) => Self::U1(*z),
            Self::Su2(m) => Self::Su2(m.scale(m.det().sqrt().inv())),
        }
    }

    /// Operator norm of the defining representation and of its inverse,
    /// whichever is larger. Bounds `|χ_n(g)| ≤ (n+1)·norm^n`.
    pub fn spread(&self) -> T {
        match self {
            Self::U1(z) => z.norm().max(z.norm().recip()),
            Self::Su2(m) => m.operator_norm(),
        }
    }

    /// Back to K when the element is unitary to within `tol`.
    pub fn to_compact(&self, tol: T) -> Option<GroupElement<T>> {
        let g = match *self {
            Self::U1(z) => GroupElement::U1(z),
            Self::Su2(m) => GroupElement::Su2(m),
        };
        (g.unitarity_defect() <= tol).then_some(g)
    }
}

impl<T: Real> Mul for ComplexGroupElement<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        match (self, o) {
            (Self::U1(a), Self::U1(b)) => Self::U1(a * b),
            (Self::Su2(a), Self::Su2(b)) => Self::Su2(a * b),
            _ => panic!("cannot multiply elements of different groups"),
        }
    }
}

impl<T: Real> From<GroupElement<T>> for ComplexGroupElement<T> {
    fn from(g: GroupElement<T>) -> Self {
        g.complexify()
    }
}

/// Ordered product `g_{n−1} ⋯ g_1 g_0` (latest factor leftmost), re-projected
/// onto K every [`REPROJECT_EVERY`] factors.
pub fn ordered_product<T: Real, I>(kind: GroupKind, factors: I) -> GroupElement<T>
where
    I: IntoIterator<Item = GroupElement<T>>,
{
    let mut acc = GroupElement::identity(kind);
    for (i, g) in factors.into_iter().enumerate() {
        acc = g * acc;
        if (i + 1) % REPROJECT_EVERY == 0 {
            acc = acc.reproject();
        }
    }
    acc.reproject()
}

/// Complex counterpart of [`ordered_product`]; re-normalizes the determinant.
pub fn ordered_product_complex<T: Real, I>(kind: GroupKind, factors: I) -> ComplexGroupElement<T>
where
    I: IntoIterator<Item = ComplexGroupElement<T>>,
{
    let mut acc = ComplexGroupElement::identity(kind);
    for (i, g) in factors.into_iter().enumerate() {
        acc = g * acc;
        if (i + 1) % REPROJECT_EVERY == 0 {
            acc = acc.reproject();
        }
    }
    acc.reproject()
}
