//! Dense 2×2 complex matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2<T> {
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Mat2<T> {
    #[inline]
    pub fn new(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Self {
        Self { m: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex::new(T::one(), T::zero()), Complex::new(T::zero(), T::zero()));
        Self::new(o, z, z, o)
    }

    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(z, z, z, z)
    }

    pub fn diag(a: Complex<T>, d: Complex<T>) -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self::new(a, z, z, d)
    }

    /// Pauli matrix `σ_{j+1}`, `j ∈ {0, 1, 2}`.
    pub fn pauli(j: usize) -> Self {
        let (o, z) = (T::one(), T::zero());
        let c = |re, im| Complex::new(re, im);
        match j {
            0 => Self::new(c(z, z), c(o, z), c(o, z), c(z, z)),
            1 => Self::new(c(z, z), c(z, -o), c(z, o), c(z, z)),
            2 => Self::new(c(o, z), c(z, z), c(z, z), c(-o, z)),
            _ => panic!("Pauli index {j} out of range"),
        }
    }

    #[inline]
    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    #[inline]
    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[1][0].conj(), m[0][1].conj(), m[1][1].conj())
    }

    pub fn conj(&self) -> Self {
        let m = &self.m;
        Self::new(m[0][0].conj(), m[0][1].conj(), m[1][0].conj(), m[1][1].conj())
    }

    /// Inverse via the adjugate. Callers guarantee a nonzero determinant.
    pub fn inverse(&self) -> Self {
        let d = self.det();
        let m = &self.m;
        Self::new(m[1][1] / d, -m[0][1] / d, -m[1][0] / d, m[0][0] / d)
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        let m = &self.m;
        Self::new(m[0][0] * k, m[0][1] * k, m[1][0] * k, m[1][1] * k)
    }

    pub fn scale_re(&self, k: T) -> Self {
        self.scale(Complex::new(k, T::zero()))
    }

    pub fn frobenius_norm(&self) -> T {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> T {
        // σ_max² + σ_min² = ‖M‖_F², σ_max·σ_min = |det M|
        let f2 = self.frobenius_norm().powi(2);
        let d = self.det().norm();
        let disc = (f2 * f2 - T::lit(4.0) * d * d).max(T::zero()).sqrt();
        ((f2 + disc) / T::lit(2.0)).sqrt()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn cast<U: Real>(&self) -> Mat2<U> {
        let c = |z: Complex<T>| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64()));
        let m = &self.m;
        Mat2::new(c(m[0][0]), c(m[0][1]), c(m[1][0]), c(m[1][1]))
    }
}

impl<T: Real> Mul for Mat2<T> {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl<T: Real> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(a[0][0] + b[0][0], a[0][1] + b[0][1], a[1][0] + b[1][0], a[1][1] + b[1][1])
    }
}

impl<T: Real> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b) = (&self.m, &o.m);
        Self::new(a[0][0] - b[0][0], a[0][1] - b[0][1], a[1][0] - b[1][0], a[1][1] - b[1][1])
    }
}

impl<T: Real> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_re(-T::one())
    }
}
