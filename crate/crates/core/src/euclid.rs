//! Segal–Bargmann transforms on `ℝ^d`, `d ≤ 2`.
//!
//! `C_ħ f(z) = (2πħ)^{−1/2} ∫ e^{−(z−q)²/2ħ} f(q) dq` is heat evolution for
//! time ħ followed by analytic continuation. The two-parameter transform
//! `S_{s,ħ}` is given by the same formula but viewed as a map from
//! `L²(ℝ, P_s)` onto `HL²(ℂ, M_{s,ħ})`, with
//! `dP_s = (2πs)^{−1/2} e^{−q²/2s} dq` and
//! `dM_{s,ħ} = (πħ)^{−1/2} (πr)^{−1/2} e^{−q²/r} e^{−p²/ħ} dq dp`, `r = 2s − ħ`.

use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quadrature::{gauss_hermite_lebesgue, gauss_hermite_normal};

pub const DEFAULT_NODES: usize = 64;
pub const MAX_DEGREE: usize = 8;

const C0: Complex64 = Complex64 { re: 0.0, im: 0.0 };

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatParams {
    pub s: f64,
    pub hbar: f64,
}

impl HeatParams {
    pub fn new(s: f64, hbar: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(invalid(format!("s must be positive, got {s}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(invalid(format!("hbar must be positive, got {hbar}")));
        }
        if s <= hbar / 2.0 {
            return Err(invalid(format!("need s > hbar/2 so that r = 2s - hbar > 0, got s = {s}, hbar = {hbar}")));
        }
        Ok(Self { s, hbar })
    }

    pub fn r(&self) -> f64 {
        2.0 * self.s - self.hbar
    }
}

/// A function on ℝ by its values at quadrature nodes, with weights for
/// Lebesgue measure.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledFunction1D {
    nodes: Vec<f64>,
    values: Vec<Complex64>,
    weights: Vec<f64>,
}

impl SampledFunction1D {
    pub fn new(nodes: Vec<f64>, values: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != values.len() || nodes.len() != weights.len() {
            return Err(invalid("nodes, values and weights need equal non-zero lengths"));
        }
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(invalid("nodes must be strictly increasing"));
        }
        if !(nodes.iter().chain(&weights).all(|x| x.is_finite()) && values.iter().all(|v| v.is_finite())) {
            return Err(invalid("non-finite sample"));
        }
        Ok(Self { nodes, values, weights })
    }

    /// Trapezoid rule on `n` equally spaced points of `[lo, hi]`.
    pub fn uniform<F: Fn(f64) -> Complex64>(f: F, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(hi > lo) {
            return Err(invalid("uniform grid needs n >= 2 and hi > lo"));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n).map(|i| lo + h * i as f64).collect();
        let weights = (0..n).map(|i| if i == 0 || i == n - 1 { h / 2.0 } else { h }).collect();
        let values = nodes.iter().map(|&q| f(q)).collect();
        Self::new(nodes, values, weights)
    }

    /// Gauss–Hermite nodes matched to a Gaussian envelope of width `sigma`
    /// around `center`.
    pub fn gauss_hermite<F: Fn(f64) -> Complex64>(f: F, n: usize, center: f64, sigma: f64) -> Result<Self> {
        if n == 0 || !(sigma > 0.0) {
            return Err(invalid("Gauss-Hermite sampling needs n > 0 and sigma > 0"));
        }
        let (x, w) = gauss_hermite_lebesgue(n, sigma);
        let nodes: Vec<f64> = x.iter().map(|x| x + center).collect();
        let values = nodes.iter().map(|&q| f(q)).collect();
        Self::new(nodes, values, w)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `f(· − a)`: same values on shifted nodes.
    pub fn translated(&self, a: f64) -> Self {
        Self { nodes: self.nodes.iter().map(|q| q + a).collect(), ..self.clone() }
    }

    pub fn integral(&self) -> Complex64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }
}

/// `C_ħ f(z)` by quadrature.
///
/// Fails with [`Error::QuadratureRange`] unless the nodes cover
/// `±(|Re z| + 8√ħ)`.
pub fn c_transform(f: &SampledFunction1D, hbar: f64, z: Complex64) -> Result<Complex64> {
    if !(hbar > 0.0) {
        return Err(invalid(format!("hbar must be positive, got {hbar}")));
    }
    let reach = z.re.abs() + 8.0 * hbar.sqrt();
    let (lo, hi) = (f.nodes[0], f.nodes[f.nodes.len() - 1]);
    if lo > -reach || hi < reach {
        return Err(Error::QuadratureRange { lo, hi, need_lo: -reach, need_hi: reach });
    }
    let norm = (2.0 * std::f64::consts::PI * hbar).sqrt();
    let sum: Complex64 = f
        .nodes
        .iter()
        .zip(&f.values)
        .zip(&f.weights)
        .map(|((&q, v), w)| {
            let d = z - q;
            (-d * d / (2.0 * hbar)).exp() * v * w
        })
        .sum();
    Ok(sum / norm)
}

/// Polynomial in one variable, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|c| Complex64::new(*c, 0.0)).collect())
    }

    pub fn monomial(degree: usize) -> Self {
        let mut c = vec![C0; degree + 1];
        c[degree] = Complex64::new(1.0, 0.0);
        Self { coeffs: c }
    }

    /// `H_n(q) / (2ⁿ n! √π)^{1/2}`, so that `P_n(q) e^{−q²/2}` is the `n`-th
    /// Hermite function (orthonormal in `L²(ℝ, dq)`).
    pub fn hermite_function_factor(n: usize) -> Self {
        let mut prev = Self::from_real(&[1.0]);
        let mut cur = Self::from_real(&[0.0, 2.0]);
        if n == 0 {
            cur = prev.clone();
        }
        for k in 1..n {
            let next = &(&cur.shift_up() * Complex64::new(2.0, 0.0)) + &(&prev * Complex64::new(-2.0 * k as f64, 0.0));
            prev = cur;
            cur = next;
        }
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        let norm = (2f64.powi(n as i32) * fact * std::f64::consts::PI.sqrt()).sqrt();
        &cur * Complex64::new(1.0 / norm, 0.0)
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&C0) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(C0);
        }
    }

    fn shift_up(&self) -> Self {
        let mut c = vec![C0];
        c.extend_from_slice(&self.coeffs);
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(C0, |acc, c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![C0]);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    /// `e^{tΔ/2} p = Σ_m (t/2)^m p^{(2m)} / m!`, a terminating series; equals
    /// `q ↦ E[p(q + √t ξ)]`, `ξ ~ N(0, 1)`.
    pub fn heat_evolve(&self, t: f64) -> Self {
        let mut out = self.clone();
        let mut term = self.clone();
        let mut m = 0usize;
        loop {
            term = term.derivative().derivative();
            m += 1;
            if term.coeffs.iter().all(|c| *c == C0) {
                break;
            }
            let k = (t / 2.0).powi(m as i32) / (1..=m).map(|j| j as f64).product::<f64>();
            out = &out + &(&term * Complex64::new(k, 0.0));
        }
        out
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|k| self.coeffs.get(k).copied().unwrap_or(C0) + o.coeffs.get(k).copied().unwrap_or(C0))
                .collect(),
        )
    }
}

impl Mul<Complex64> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, k: Complex64) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

/// `S_{s,ħ} p(z)` for a polynomial `p`, exactly (no quadrature).
pub fn s_transform_polynomial(params: &HeatParams, p: &Polynomial, z: Complex64) -> Complex64 {
    p.heat_evolve(params.hbar).eval(z)
}

/// `C_ħ [p(q) e^{−q²/2}](z)` in closed form:
/// `(1+ħ)^{−1/2} e^{−z²/2(1+ħ)} (e^{vΔ/2} p)(z/(1+ħ))` with `v = ħ/(1+ħ)`.
pub fn c_transform_gaussian_weighted(p: &Polynomial, hbar: f64, z: Complex64) -> Complex64 {
    let a = 1.0 + hbar;
    let v = hbar / a;
    (-z * z / (2.0 * a)).exp() / a.sqrt() * p.heat_evolve(v).eval(z / a)
}

/// Gram matrices of the monomial basis on both sides of `S_{s,ħ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramReport {
    /// Exponent multi-indices labelling rows and columns.
    pub basis: Vec<Vec<usize>>,
    /// `⟨q^a, q^b⟩` in `L²(ℝ^d, P_s)`.
    pub real: DMatrix<f64>,
    /// `⟨S q^a, S q^b⟩` in `L²(ℂ^d, M_{s,ħ})`.
    pub complex: DMatrix<Complex64>,
    pub max_abs_deviation: f64,
    /// Deviation normalized by `(G_aa G_bb)^{1/2}`.
    pub max_rel_deviation: f64,
}

fn multi_indices(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    match dim {
        1 => (0..=degree).map(|a| vec![a]).collect(),
        _ => (0..=degree).flat_map(|t| (0..=t).map(move |a| vec![t - a, a])).collect(),
    }
}

/// Tensor-product nodes and weights from a one-dimensional rule.
fn tensor(rules: &[(Vec<f64>, Vec<f64>)]) -> Vec<(Vec<f64>, f64)> {
    let mut out = vec![(Vec::new(), 1.0)];
    for (x, w) in rules {
        out = out
            .into_iter()
            .flat_map(|(pt, wt)| {
                x.iter().zip(w).map(move |(xi, wi)| {
                    let mut p = pt.clone();
                    p.push(*xi);
                    (p, wt * wi)
                })
            })
            .collect();
    }
    out
}

/// Unitarity of `S_{s,ħ}` on monomials of total degree at most `degree` in
/// `dim ∈ {1, 2}` variables. Both Gram matrices are computed by
/// Gauss–Hermite quadrature matched to the Gaussian measures, which is
/// exact for these polynomial integrands; `S` itself uses the terminating
/// heat series.
pub fn s_transform_gram_check(params: &HeatParams, degree: usize, dim: usize) -> Result<GramReport> {
    if degree > MAX_DEGREE {
        return Err(invalid(format!("basis degree at most {MAX_DEGREE}, got {degree}")));
    }
    if !(1..=2).contains(&dim) {
        return Err(invalid(format!("dimension must be 1 or 2, got {dim}")));
    }
    let basis = multi_indices(dim, degree);
    let n_nodes = if dim == 1 { DEFAULT_NODES } else { degree + 2 };
    let scaled = |sd: f64| {
        let (x, w) = gauss_hermite_normal(n_nodes);
        (x.iter().map(|x| x * sd).collect::<Vec<_>>(), w)
    };
    let evolved: Vec<Polynomial> = (0..=degree).map(|k| Polynomial::monomial(k).heat_evolve(params.hbar)).collect();
    let nb = basis.len();

    let mut real = DMatrix::<f64>::zeros(nb, nb);
    for (pt, w) in tensor(&vec![scaled(params.s.sqrt()); dim]) {
        let vals: Vec<f64> = basis.iter().map(|a| a.iter().zip(&pt).map(|(k, q)| q.powi(*k as i32)).product()).collect();
        for i in 0..nb {
            for j in 0..nb {
                real[(i, j)] += w * vals[i] * vals[j];
            }
        }
    }

    // coordinates ordered (q_1, p_1, q_2, p_2)
    let mut rules = Vec::new();
    for _ in 0..dim {
        rules.push(scaled((params.r() / 2.0).sqrt()));
        rules.push(scaled((params.hbar / 2.0).sqrt()));
    }
    let mut complex = DMatrix::from_element(nb, nb, C0);
    for (pt, w) in tensor(&rules) {
        let z: Vec<Complex64> = pt.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        let vals: Vec<Complex64> =
            basis.iter().map(|a| a.iter().zip(&z).map(|(k, zi)| evolved[*k].eval(*zi)).product()).collect();
        for i in 0..nb {
            for j in 0..nb {
                complex[(i, j)] += vals[i].conj() * vals[j] * w;
            }
        }
    }

    let (mut max_abs, mut max_rel) = (0.0f64, 0.0f64);
    for i in 0..nb {
        for j in 0..nb {
            let d = (complex[(i, j)] - real[(i, j)]).norm();
            max_abs = max_abs.max(d);
            max_rel = max_rel.max(d / (real[(i, i)] * real[(j, j)]).sqrt());
        }
    }
    Ok(GramReport { basis, real, complex, max_abs_deviation: max_abs, max_rel_deviation: max_rel })
}

/// Large-`s` comparison with the `C_ħ` picture on Hermite functions
/// `h_0..h_degree` (orthonormal in `L²(ℝ, dq)`).
#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalLimitReport {
    pub s: f64,
    pub hbar: f64,
    /// `(2πs)^{1/2} ⟨h_a, h_b⟩_{L²(P_s)}`.
    pub real_rescaled: DMatrix<f64>,
    /// `(2πs)^{1/2} ⟨C h_a, C h_b⟩_{L²(M_{s,ħ})}`.
    pub complex_rescaled: DMatrix<Complex64>,
    /// `⟨C h_a, C h_b⟩` against `(πħ)^{−1/2} e^{−p²/ħ} dq dp`.
    pub limit_gram: DMatrix<Complex64>,
    /// `max |real_rescaled − I|`.
    pub real_deviation: f64,
    /// `max |complex_rescaled − limit_gram|`.
    pub complex_deviation: f64,
    /// `max |limit_gram − I|`: unitarity of `C_ħ` itself.
    pub limit_unitarity: f64,
}

pub fn classical_limit_gram_check(params: &HeatParams, degree: usize) -> Result<ClassicalLimitReport> {
    if degree > MAX_DEGREE {
        return Err(invalid(format!("basis degree at most {MAX_DEGREE}, got {degree}")));
    }
    let (s, hbar, r) = (params.s, params.hbar, params.r());
    let nb = degree + 1;
    let factors: Vec<Polynomial> = (0..nb).map(Polynomial::hermite_function_factor).collect();
    let pi = std::f64::consts::PI;

    let (xq, wq) = gauss_hermite_lebesgue(DEFAULT_NODES, (2.0 + 1.0 / s).powf(-0.5));
    let mut real_rescaled = DMatrix::zeros(nb, nb);
    for (q, w) in xq.iter().zip(&wq) {
        let env = (-q * q * (1.0 + 1.0 / (2.0 * s))).exp();
        let vals: Vec<f64> = factors.iter().map(|p| p.eval(Complex64::new(*q, 0.0)).re).collect();
        for i in 0..nb {
            for j in 0..nb {
                real_rescaled[(i, j)] += w * env * vals[i] * vals[j];
            }
        }
    }

    let transform = |z: Complex64| -> Vec<Complex64> {
        factors.iter().map(|p| c_transform_gaussian_weighted(p, hbar, z)).collect()
    };
    let gram = |sigma_q: f64, density: &dyn Fn(f64, f64) -> f64| {
        let sigma_p = (hbar * (1.0 + hbar) / 2.0).sqrt();
        let (xq, wq) = gauss_hermite_lebesgue(DEFAULT_NODES, sigma_q);
        let (xp, wp) = gauss_hermite_lebesgue(DEFAULT_NODES, sigma_p);
        let mut g = DMatrix::from_element(nb, nb, C0);
        for (q, w1) in xq.iter().zip(&wq) {
            for (p, w2) in xp.iter().zip(&wp) {
                let vals = transform(Complex64::new(*q, *p));
                let w = w1 * w2 * density(*q, *p);
                for i in 0..nb {
                    for j in 0..nb {
                        g[(i, j)] += vals[i].conj() * vals[j] * w;
                    }
                }
            }
        }
        g
    };
    let limit_gram = gram(((1.0 + hbar) / 2.0).sqrt(), &|_, p| (-p * p / hbar).exp() / (pi * hbar).sqrt());
    let m_norm = (2.0 * pi * s).sqrt() / ((pi * hbar).sqrt() * (pi * r).sqrt());
    let complex_rescaled = gram((2.0 * (1.0 / r + 1.0 / (1.0 + hbar))).powf(-0.5), &|q, p| {
        m_norm * (-q * q / r - p * p / hbar).exp()
    });

    let eye = DMatrix::<f64>::identity(nb, nb);
    let real_deviation = (&real_rescaled - &eye).abs().max();
    let eye_c: DMatrix<Complex64> = eye.map(|x| Complex64::new(x, 0.0));
    let complex_deviation = (&complex_rescaled - &limit_gram).iter().map(|c| c.norm()).fold(0.0, f64::max);
    let limit_unitarity = (&limit_gram - eye_c).iter().map(|c| c.norm()).fold(0.0, f64::max);
    Ok(ClassicalLimitReport {
        s,
        hbar,
        real_rescaled,
        complex_rescaled,
        limit_gram,
        real_deviation,
        complex_deviation,
        limit_unitarity,
    })
}
