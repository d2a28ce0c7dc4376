use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{GroupKind, Mat2};
use crate::error::{invalid, Result};
use crate::scalar::Real;

/// Element of the Lie algebra in the orthonormal basis fixed by `GroupKind`.
///
/// SU(2) uses `e_j = i·σ_j/2`, orthonormal for `⟨X, Y⟩ = −2 tr(XY)`; U(1)
/// uses the single basis element `i`. Coordinates past `kind.dim()` are
/// always zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Serialize + serde::de::DeserializeOwned")]
pub struct AlgebraVector<T> {
    kind: GroupKind,
    coords: [T; 3],
}

impl<T: Real> AlgebraVector<T> {
    pub fn new(kind: GroupKind, coords: &[T]) -> Result<Self> {
        if coords.len() != kind.dim() {
            return Err(invalid(format!(
                "{kind:?} algebra vector needs {} coordinates, got {}",
                kind.dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(invalid("non-finite algebra coordinate"));
        }
        let mut c = [T::zero(); 3];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Self { kind, coords: c })
    }

    pub fn zero(kind: GroupKind) -> Self {
        Self { kind, coords: [T::zero(); 3] }
    }

    pub fn u1(x: T) -> Self {
        Self { kind: GroupKind::U1, coords: [x, T::zero(), T::zero()] }
    }

    pub fn su2(x: [T; 3]) -> Self {
        Self { kind: GroupKind::Su2, coords: x }
    }

    /// `j`-th orthonormal basis vector.
    pub fn basis(kind: GroupKind, j: usize) -> Self {
        assert!(j < kind.dim(), "basis index {j} out of range for {kind:?}");
        let mut c = [T::zero(); 3];
        c[j] = T::one();
        Self { kind, coords: c }
    }

    #[inline]
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    #[inline]
    pub fn coords(&self) -> &[T] {
        &self.coords[..self.kind.dim()]
    }

    #[inline]
    pub fn coord(&self, j: usize) -> T {
        self.coords[j]
    }

    #[inline]
    pub fn set_coord(&mut self, j: usize, v: T) {
        debug_assert!(j < self.kind.dim());
        self.coords[j] = v;
    }

    pub fn dot(&self, other: &Self) -> T {
        self.coords().iter().zip(other.coords()).map(|(a, b)| *a * *b).sum()
    }

    pub fn norm_sqr(&self) -> T {
        self.dot(self)
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: T) -> Self {
        Self {
            kind: self.kind,
            coords: [self.coords[0] * k, self.coords[1] * k, self.coords[2] * k],
        }
    }

    /// Matrix form `(i/2) Σ x_j σ_j` (anti-Hermitian, traceless).
    pub fn to_su2_matrix(&self) -> Mat2<T> {
        debug_assert_eq!(self.kind, GroupKind::Su2);
        complex_su2_matrix(
            [
                Complex::new(self.coords[0], T::zero()),
                Complex::new(self.coords[1], T::zero()),
                Complex::new(self.coords[2], T::zero()),
            ],
        )
    }

    /// Matrix form `i·x` of a U(1) algebra element.
    pub fn to_u1_scalar(&self) -> Complex<T> {
        Complex::new(T::zero(), self.coords[0])
    }

    /// Coordinates of the anti-Hermitian traceless part of `m`.
    pub fn from_su2_matrix(m: &Mat2<T>) -> Self {
        // tr(e_j σ_k)-pairing: x_k = Re(−i tr(M σ_k)) = Im tr(M σ_k)
        let c = |k: usize| (*m * Mat2::pauli(k)).trace().im;
        Self::su2([c(0), c(1), c(2)])
    }

    /// Lie bracket `[X, Y]` in coordinates (zero for U(1)).
    pub fn bracket(&self, other: &Self) -> Self {
        match self.kind {
            GroupKind::U1 => Self::zero(GroupKind::U1),
            GroupKind::Su2 => {
                let m = self.to_su2_matrix().commutator(&other.to_su2_matrix());
                Self::from_su2_matrix(&m)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn cast<U: Real>(&self) -> AlgebraVector<U> {
        AlgebraVector {
            kind: self.kind,
            coords: [
                U::lit(self.coords[0].as_f64()),
                U::lit(self.coords[1].as_f64()),
                U::lit(self.coords[2].as_f64()),
            ],
        }
    }
}

/// `(i/2) Σ w_j σ_j` for complex coordinates `w = x + i·y`, i.e.
/// `embed(x) + i·embed(y)` in the complexified algebra.
pub(crate) fn complex_su2_matrix<T: Real>(w: [Complex<T>; 3]) -> Mat2<T> {
    let half = T::lit(0.5);
    let i = Complex::new(T::zero(), T::one());
    let (w1, w2, w3) = (w[0], w[1], w[2]);
    Mat2::new(
        i * w3 * half,
        (i * w1 + w2) * half,
        (i * w1 - w2) * half,
        -i * w3 * half,
    )
}

impl<T: Real> Add for AlgebraVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.kind, o.kind);
        Self {
            kind: self.kind,
            coords: [
                self.coords[0] + o.coords[0],
                self.coords[1] + o.coords[1],
                self.coords[2] + o.coords[2],
            ],
        }
    }
}

impl<T: Real> Sub for AlgebraVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<T: Real> Neg for AlgebraVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

impl<T: Real> Mul<T> for AlgebraVector<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        self.scale(k)
    }
}
