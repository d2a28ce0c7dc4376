use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_complex::Complex;

use super::{character, heat_moment, irrep_info, validate_label};
use crate::error::{invalid, Result};
use crate::group::{ComplexGroupElement, GroupKind};
use crate::scalar::Real;

/// Finite linear combination of irreducible characters: a class function
/// on K, continued holomorphically to K_C on evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterSeries<T> {
    kind: GroupKind,
    coeffs: BTreeMap<i64, Complex<T>>,
}

impl<T: Real> CharacterSeries<T> {
    pub fn zero(kind: GroupKind) -> Self {
        Self { kind, coeffs: BTreeMap::new() }
    }

    /// The single character `χ_label`.
    pub fn character(kind: GroupKind, label: i64) -> Result<Self> {
        Self::from_terms(kind, [(label, Complex::new(T::one(), T::zero()))])
    }

    pub fn from_terms<I>(kind: GroupKind, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex<T>)>,
    {
        let mut s = Self::zero(kind);
        for (label, c) in terms {
            s.add_term(label, c)?;
        }
        Ok(s)
    }

    pub fn add_term(&mut self, label: i64, c: Complex<T>) -> Result<()> {
        validate_label(self.kind, label)?;
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(invalid("non-finite series coefficient"));
        }
        let e = self.coeffs.entry(label).or_insert(Complex::new(T::zero(), T::zero()));
        *e = *e + c;
        if *e == Complex::new(T::zero(), T::zero()) {
            self.coeffs.remove(&label);
        }
        Ok(())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn coeff(&self, label: i64) -> Complex<T> {
        self.coeffs.get(&label).copied().unwrap_or(Complex::new(T::zero(), T::zero()))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex<T>)> + '_ {
        self.coeffs.iter().map(|(l, c)| (*l, *c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `L²(K, dx)` norm squared, `Σ |c_λ|²` by character orthonormality.
    pub fn norm_sqr(&self) -> T {
        self.coeffs.values().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ c_λ χ_λ(g)`.
    pub fn evaluate(&self, g: &ComplexGroupElement<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, (l, c)| acc + *c * character(self.kind, *l, g))
    }

    /// `e^{tΔ_K/2}`: each coefficient picks up `e^{−t c_λ/2}`.
    pub fn heat_semigroup(&self, t: T) -> Result<Self> {
        if !(t >= T::zero()) {
            return Err(invalid(format!("heat semigroup time must be non-negative, got {t}")));
        }
        self.map_coeffs(|label, c| {
            let info = irrep_info::<T>(self.kind, label).expect("labels validated on insertion");
            c * (-t * info.casimir * T::lit(0.5)).exp()
        })
    }

    /// `Δ_K` applied term by term.
    pub fn laplacian(&self) -> Self {
        self.map_coeffs(|label, c| {
            let info = irrep_info::<T>(self.kind, label).expect("labels validated on insertion");
            -c * info.casimir
        })
        .expect("finite coefficients")
    }

    /// `∫_K φ ρ_t dx`.
    pub fn integrate_heat(&self, t: T) -> Result<Complex<T>> {
        self.coeffs.iter().try_fold(Complex::new(T::zero(), T::zero()), |acc, (l, c)| {
            Ok(acc + *c * heat_moment(self.kind, *l, t)?)
        })
    }

    fn map_coeffs<F: Fn(i64, Complex<T>) -> Complex<T>>(&self, f: F) -> Result<Self> {
        Self::from_terms(self.kind, self.coeffs.iter().map(|(l, c)| (*l, f(*l, *c))))
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        self.map_coeffs(|_, c| c * k).expect("finite coefficients")
    }
}

impl<T: Real> Add for &CharacterSeries<T> {
    type Output = CharacterSeries<T>;
    fn add(self, o: &CharacterSeries<T>) -> CharacterSeries<T> {
        assert_eq!(self.kind, o.kind, "adding series on different groups");
        let mut s = self.clone();
        for (l, c) in o.terms() {
            s.add_term(l, c).expect("labels already valid");
        }
        s
    }
}

impl<T: Real> Mul<Complex<T>> for &CharacterSeries<T> {
    type Output = CharacterSeries<T>;
    fn mul(self, k: Complex<T>) -> CharacterSeries<T> {
        self.scale(k)
    }
}

/// Expansion of `conj(χ_a)·χ_b` on K into characters: `χ_{b−a}` on U(1),
/// Clebsch–Gordan `Σ χ_m`, `m = |a−b|, …, a+b` in steps of 2 on SU(2).
pub fn character_product<T: Real>(kind: GroupKind, a: i64, b: i64) -> Result<CharacterSeries<T>> {
    validate_label(kind, a)?;
    validate_label(kind, b)?;
    let one = Complex::new(T::one(), T::zero());
    match kind {
        GroupKind::U1 => CharacterSeries::from_terms(kind, [(b - a, one)]),
        GroupKind::Su2 => {
            CharacterSeries::from_terms(kind, ((a - b).abs()..=a + b).step_by(2).map(|m| (m, one)))
        }
    }
}

/// `⟨χ_a, χ_b⟩_{L²(K, ρ_s dx)} = ∫ conj(χ_a) χ_b ρ_s dx`.
pub fn weighted_inner_product<T: Real>(kind: GroupKind, a: i64, b: i64, s: T) -> Result<Complex<T>> {
    character_product::<T>(kind, a, b)?.integrate_heat(s)
}
