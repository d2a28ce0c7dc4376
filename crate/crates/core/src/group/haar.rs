//! Integration against normalized Haar measure.

use num_complex::{Complex, Complex64};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{GroupElement, GroupKind, Mat2};
use crate::error::{invalid, Result};
use crate::mc::{McRng, MonteCarlo};
use crate::quadrature::{gauss_legendre, periodic_rule};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum HaarMode {
    /// Tensor grid with `level` nodes per coordinate (Euler angles for
    /// SU(2)); `level³` evaluations on SU(2).
    Quadrature { level: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

/// Integral value with an error estimate: the difference to a coarser
/// grid for quadrature, the standard error for Monte Carlo.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HaarIntegral<T> {
    pub value: Complex<T>,
    pub error: T,
}

/// Haar-random element.
pub fn sample_haar<T: Real>(kind: GroupKind, rng: &mut McRng) -> GroupElement<T> {
    match kind {
        GroupKind::U1 => {
            let a: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            GroupElement::U1(Complex::from_polar(T::one(), T::lit(a)))
        }
        GroupKind::Su2 => {
            // uniform on S³
            let mut q = [0.0f64; 4];
            loop {
                for c in q.iter_mut() {
                    *c = rng.sample(StandardNormal);
                }
                let n = q.iter().map(|c| c * c).sum::<f64>().sqrt();
                if n > 1e-12 {
                    q.iter_mut().for_each(|c| *c /= n);
                    break;
                }
            }
            GroupElement::su2_from_quaternion(q.map(T::lit))
        }
    }
}

/// `diag(e^{iθ}, e^{−iθ})` (SU(2)) or `e^{iθ}` (U(1)).
pub fn torus_element<T: Real>(kind: GroupKind, theta: T) -> GroupElement<T> {
    let z = Complex::from_polar(T::one(), theta);
    match kind {
        GroupKind::U1 => GroupElement::U1(z),
        GroupKind::Su2 => GroupElement::Su2(Mat2::diag(z, z.conj())),
    }
}

/// SU(2) element `R_z(α) R_y(β) R_z(γ)` with `R_z(t) = exp(t e_3)`,
/// `R_y(t) = exp(t e_2)`. Haar density `sin β /(16π²)` on
/// `[0, 2π) × [0, π] × [0, 4π)`.
pub fn su2_euler<T: Real>(alpha: T, beta: T, gamma: T) -> GroupElement<T> {
    let half = T::lit(0.5);
    let rz = |t: T| {
        let z = Complex::from_polar(T::one(), t * half);
        Mat2::diag(z, z.conj())
    };
    let (s, c) = (beta * half).sin_cos();
    let re = |x: T| Complex::new(x, T::zero());
    let ry = Mat2::new(re(c), re(s), re(-s), re(c));
    GroupElement::Su2(rz(alpha) * ry * rz(gamma))
}

fn quadrature_su2<T: Real, F>(f: &F, n: usize) -> Complex<T>
where
    F: Fn(&GroupElement<T>) -> Complex<T>,
{
    let (alphas, wa) = periodic_rule(n, std::f64::consts::TAU);
    let (gammas, wg) = periodic_rule(n, 2.0 * std::f64::consts::TAU);
    let (us, wu) = gauss_legendre(n);
    let mut acc = Complex::new(T::zero(), T::zero());
    for (u, w) in us.iter().zip(&wu) {
        let beta = T::lit(u.acos());
        let mut inner = Complex::new(T::zero(), T::zero());
        for a in &alphas {
            for g in &gammas {
                inner = inner + f(&su2_euler(T::lit(*a), beta, T::lit(*g)));
            }
        }
        acc = acc + inner * T::lit(w * 0.5 * wa * wg);
    }
    acc
}

fn quadrature_u1<T: Real, F>(f: &F, n: usize) -> Complex<T>
where
    F: Fn(&GroupElement<T>) -> Complex<T>,
{
    let (thetas, w) = periodic_rule(n, std::f64::consts::TAU);
    let s = thetas
        .iter()
        .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + f(&torus_element(GroupKind::U1, T::lit(*t))));
    s * T::lit(w)
}

fn coarse_level(level: usize) -> usize {
    (level * 3 / 4).max(1)
}

/// `∫_K f dx` with normalized Haar measure.
pub fn haar_integrate<T: Real, F>(kind: GroupKind, f: F, mode: HaarMode) -> Result<HaarIntegral<T>>
where
    F: Fn(&GroupElement<T>) -> Complex<T> + Sync,
{
    match mode {
        HaarMode::Quadrature { level } => {
            if level == 0 {
                return Err(invalid("quadrature level must be positive"));
            }
            let rule = |n| match kind {
                GroupKind::U1 => quadrature_u1(&f, n),
                GroupKind::Su2 => quadrature_su2(&f, n),
            };
            let fine = rule(level);
            let coarse = rule(coarse_level(level));
            Ok(HaarIntegral { value: fine, error: (fine - coarse).norm() })
        }
        HaarMode::MonteCarlo { samples, seed } => {
            let est = MonteCarlo::new(samples, seed).estimate_scalar(|rng| {
                let v = f(&sample_haar::<T>(kind, rng));
                Complex64::new(v.re.as_f64(), v.im.as_f64())
            })?;
            Ok(HaarIntegral {
                value: Complex::new(T::lit(est.mean.re), T::lit(est.mean.im)),
                error: T::lit(est.std_error),
            })
        }
    }
}

/// Weyl integration for class functions: `f` is sampled on the maximal
/// torus only, with density `(1/π) sin²θ` over a full period for SU(2).
/// Exact for trigonometric polynomials of degree below `level − 2`.
pub fn haar_integrate_class<T: Real, F>(kind: GroupKind, f: F, level: usize) -> Result<HaarIntegral<T>>
where
    F: Fn(&GroupElement<T>) -> Complex<T>,
{
    if level < 3 {
        return Err(invalid("class-function quadrature needs at least 3 nodes"));
    }
    let rule = |n: usize| {
        let (thetas, w) = periodic_rule(n, std::f64::consts::TAU);
        thetas.iter().fold(Complex::new(T::zero(), T::zero()), |acc, t| {
            let weight = match kind {
                GroupKind::U1 => w,
                GroupKind::Su2 => 2.0 * w * t.sin().powi(2),
            };
            acc + f(&torus_element(kind, T::lit(*t))) * T::lit(weight)
        })
    };
    let fine = rule(level);
    let coarse = rule(coarse_level(level).max(3));
    Ok(HaarIntegral { value: fine, error: (fine - coarse).norm() })
}
