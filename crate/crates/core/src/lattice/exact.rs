//! Finite-`N` lattice expectations without sampling.
//!
//! Links are independent, so the expectation of `ρ(h) = ρ(U_{N−1}) ⋯ ρ(U_0)`
//! factors into a product of single-link expectations `E[ρ(U_k)]`. Each
//! single-link expectation is a low-dimensional Gaussian integral done by
//! tensor Gauss–Hermite quadrature. Comparing these values with the
//! continuum closed forms isolates the `O(1/N)` lattice bias from Monte
//! Carlo noise.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::ComplexLatticeConnection;
use crate::error::{invalid, Result};
use crate::group::{exp_map_complex, AlgebraVector, GroupKind};
use crate::quadrature::gauss_hermite_normal;
use crate::spectral::{rep_matrix, validate_label, CharacterSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactOptions {
    /// Gauss–Hermite nodes per Gaussian coordinate.
    pub nodes: usize,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self { nodes: 8 }
    }
}

const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// `E[χ_λ(exp W)] / d_λ` for `W` with independent `N(0, var)` coordinates.
pub fn link_character_mean(kind: GroupKind, label: i64, var: f64) -> Result<f64> {
    validate_label(kind, label)?;
    if !(var >= 0.0) {
        return Err(invalid("variance must be non-negative"));
    }
    Ok(match kind {
        GroupKind::U1 => (-(label * label) as f64 * var / 2.0).exp(),
        GroupKind::Su2 => {
            // χ_n(exp W) depends on |W| only; |W|/σ is chi-distributed with
            // three degrees of freedom, E[g(|ξ|) ξ²] over ξ ~ N(0, 1)
            let n = label as f64;
            let chi = |x: f64| {
                let half = x / 2.0;
                if half.abs() < 1e-8 {
                    n + 1.0
                } else {
                    ((n + 1.0) * half).sin() / half.sin()
                }
            };
            let (xi, w) = gauss_hermite_normal(96);
            let sd = var.sqrt();
            let e: f64 = xi.iter().zip(&w).map(|(x, w)| w * x * x * chi(sd * x.abs())).sum();
            e / (n + 1.0)
        }
    })
}

/// `E_{A∼P_s}[χ_λ(h(A))]` on `N` sites: `d_λ m^N` with `m` the single-link
/// mean at link variance `s/N`.
pub fn lattice_character_moment(kind: GroupKind, label: i64, s: f64, n_sites: usize) -> Result<f64> {
    let m = link_character_mean(kind, label, s / n_sites as f64)?;
    let d = if kind == GroupKind::Su2 { label as f64 + 1.0 } else { 1.0 };
    Ok(d * m.powi(n_sites as i32))
}

/// `Σ_i w_i f(x_i)` over the tensor Gauss–Hermite grid for independent
/// centered Gaussians with standard deviations `sds`; parallel over the
/// first coordinate.
fn gaussian_expectation<F>(sds: &[f64], nodes: usize, size: usize, f: F) -> Vec<Complex64>
where
    F: Fn(&[f64], &mut Vec<Complex64>, f64) + Sync,
{
    let (xi, mut w) = gauss_hermite_normal(nodes);
    // exact normalization, so constants integrate to one in every dimension
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
    let dims = sds.len();
    let partial: Vec<Vec<Complex64>> = (0..nodes)
        .into_par_iter()
        .map(|i0| {
            let mut acc = vec![C0; size];
            let mut idx = vec![0usize; dims];
            idx[0] = i0;
            let mut pt = vec![0.0; dims];
            loop {
                let mut wt = 1.0;
                for d in 0..dims {
                    pt[d] = sds[d] * xi[idx[d]];
                    wt *= w[idx[d]];
                }
                f(&pt, &mut acc, wt);
                // odometer over dimensions 1..dims
                let mut d = 1;
                while d < dims {
                    idx[d] += 1;
                    if idx[d] < nodes {
                        break;
                    }
                    idx[d] = 0;
                    d += 1;
                }
                if d >= dims {
                    break;
                }
            }
            acc
        })
        .collect();
    partial.into_iter().fold(vec![C0; size], |mut a, p| {
        a.iter_mut().zip(p).for_each(|(x, y)| *x += y);
        a
    })
}

fn algebra(kind: GroupKind, c: &[f64]) -> AlgebraVector<f64> {
    AlgebraVector::new(kind, c).expect("finite")
}

/// `E_B[φ(h_C(Z + B))]` where `B` has independent `N(0, ħN)` coordinates
/// (the lattice heat measure at time ħ).
pub fn lattice_smoothing_expectation(
    phi: &CharacterSeries<f64>,
    base: &ComplexLatticeConnection,
    hbar: f64,
    opts: ExactOptions,
) -> Result<Complex64> {
    if phi.kind() != base.kind() {
        return Err(invalid("series and connection live on different groups"));
    }
    if !(hbar > 0.0) {
        return Err(invalid("hbar must be positive"));
    }
    let kind = base.kind();
    let n = base.n_sites() as f64;
    let sd = (hbar / n).sqrt();
    let dim = kind.dim();
    let mut total = C0;
    for (label, coeff) in phi.terms() {
        let d = rep_matrix(label, &crate::group::ComplexGroupElement::identity(kind))?.nrows();
        let mut prod = DMatrix::<Complex64>::identity(d, d);
        for (a, p) in base.real_part().values().iter().zip(base.imag_part().values()) {
            let (a, p) = (a.scale(1.0 / n), p.scale(1.0 / n));
            let m = gaussian_expectation(&vec![sd; dim], opts.nodes, d * d, |b, acc, w| {
                let x = a + algebra(kind, b);
                let r = rep_matrix(label, &exp_map_complex(&x, &p)).expect("valid label");
                acc.iter_mut().zip(r.iter()).for_each(|(s, v)| *s += v * w);
            });
            prod = DMatrix::from_column_slice(d, d, &m) * prod;
        }
        total += coeff * prod.trace();
    }
    Ok(total)
}

/// `G_{ab} = E_{Z∼M_{s,ħ}}[χ_a(h_C(Z)) conj(χ_b(h_C(Z)))]` on `N` sites for
/// labels `0..=n_max`, from the single-link expectation of
/// `R(U) ⊗ conj R(U)`, `R = ρ_0 ⊕ ⋯ ⊕ ρ_{n_max}`, raised to the `N`-th power.
pub fn lattice_gram_moments(
    kind: GroupKind,
    n_max: usize,
    s: f64,
    hbar: f64,
    n_sites: usize,
    opts: ExactOptions,
) -> Result<DMatrix<Complex64>> {
    let params = crate::euclid::HeatParams::new(s, hbar)?;
    let n = n_sites as f64;
    let dims: Vec<usize> = (0..=n_max).map(|a| if kind == GroupKind::Su2 { a + 1 } else { 1 }).collect();
    let offsets: Vec<usize> = dims.iter().scan(0, |o, d| {
        let cur = *o;
        *o += d;
        Some(cur)
    }).collect();
    let big = dims.iter().sum::<usize>();
    let dim = kind.dim();
    let mut sds = vec![(params.r() / (2.0 * n)).sqrt(); dim];
    sds.extend(vec![(hbar / (2.0 * n)).sqrt(); dim]);

    let m = gaussian_expectation(&sds, opts.nodes, big.pow(4), |c, acc, w| {
        let g = exp_map_complex(&algebra(kind, &c[..dim]), &algebra(kind, &c[dim..]));
        let mut r = DMatrix::<Complex64>::zeros(big, big);
        for (a, off) in offsets.iter().enumerate() {
            let rho = rep_matrix(a as i64, &g).expect("valid label");
            r.view_mut((*off, *off), (dims[a], dims[a])).copy_from(&rho);
        }
        // (R ⊗ conj R)[(i,j),(k,l)] = R_ik conj(R_jl), column-major storage
        let bb = big * big;
        for k in 0..big {
            for l in 0..big {
                let col = (k * big + l) * bb;
                for i in 0..big {
                    let rik = r[(i, k)] * w;
                    if rik == C0 {
                        continue;
                    }
                    for j in 0..big {
                        acc[col + i * big + j] += rik * r[(j, l)].conj();
                    }
                }
            }
        }
    });
    let bb = big * big;
    let single = DMatrix::from_column_slice(bb, bb, &m);
    let power = matrix_power(&single, n_sites);
    let mut g = DMatrix::from_element(n_max + 1, n_max + 1, C0);
    for a in 0..=n_max {
        for b in 0..=n_max {
            for i in offsets[a]..offsets[a] + dims[a] {
                for j in offsets[b]..offsets[b] + dims[b] {
                    let idx = i * big + j;
                    g[(a, b)] += power[(idx, idx)];
                }
            }
        }
    }
    Ok(g)
}

fn matrix_power(m: &DMatrix<Complex64>, mut e: usize) -> DMatrix<Complex64> {
    let mut base = m.clone();
    let mut acc = DMatrix::identity(m.nrows(), m.ncols());
    while e > 0 {
        if e & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}
