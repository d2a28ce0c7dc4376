//! Coherent states on K labelled by points of K_C.
//!
//! For finite `s` the state is `ψ̃_g^{(s)}(x) = conj(ρ_ħ(g x^{−1})) / ρ_s(x)`
//! in `L²(K, ρ_s dx)`; as `s → ∞` it becomes `ψ̃_g(x) = conj(ρ_ħ(g x^{−1}))`
//! in `L²(K, dx)`. Pairing a class function with either gives the
//! holomorphic continuation of its heat-smoothed version at `g`.

use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::group::{
    exp_map_complex, haar_integrate, AlgebraVector, ComplexGroupElement, GroupElement, GroupKind, HaarMode,
    PolarCoordinates,
};
use crate::lattice::{holonomy_complex, lattice_gram_moments, sample_complex_connection, ExactOptions, HolonomyMethod};
use crate::mc::{MCEstimate, MonteCarlo};
use crate::report::ReportRow;
use crate::spectral::{heat_kernel_auto, irrep_info, weighted_inner_product, CharacterSeries};

/// Denominator guard for [`coherent_eval`].
pub const DEFAULT_EVAL_TOL: f64 = 1e-12;

/// Euler-grid level for the quadrature route of [`coherent_overlap`].
pub const DEFAULT_OVERLAP_LEVEL: usize = 24;

/// Step for the Cauchy–Riemann finite differences.
pub const HOLOMORPHY_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Scale {
    Finite(f64),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentLabel {
    g: ComplexGroupElement<f64>,
    hbar: f64,
    s: Scale,
}

impl CoherentLabel {
    pub fn new(g: ComplexGroupElement<f64>, hbar: f64, s: Scale) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(invalid(format!("hbar must be positive, got {hbar}")));
        }
        if let Scale::Finite(s) = s {
            if !(s > hbar / 2.0 && s.is_finite()) {
                return Err(invalid(format!("need s > hbar/2 for a finite-s state, got s = {s}, hbar = {hbar}")));
            }
        }
        Ok(Self { g, hbar, s })
    }

    /// The `s = ∞` state.
    pub fn limit(g: ComplexGroupElement<f64>, hbar: f64) -> Result<Self> {
        Self::new(g, hbar, Scale::Infinite)
    }

    pub fn from_polar(p: &PolarCoordinates<f64>, hbar: f64, s: Scale) -> Result<Self> {
        Self::new(p.reconstruct(), hbar, s)
    }

    pub fn g(&self) -> &ComplexGroupElement<f64> {
        &self.g
    }

    pub fn kind(&self) -> GroupKind {
        self.g.kind()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn scale(&self) -> Scale {
        self.s
    }

    pub fn with_g(&self, g: ComplexGroupElement<f64>) -> Self {
        Self { g, ..*self }
    }
}

/// `ψ̃_g^{(s)}(x)`, or `ψ̃_g(x)` for `s = ∞`.
pub fn coherent_eval(label: &CoherentLabel, x: &GroupElement<f64>, tol: f64) -> Result<Complex64> {
    if x.kind() != label.kind() {
        return Err(Error::GroupMismatch("state and point on different groups".into()));
    }
    let gx = label.g * x.inverse().complexify();
    let num = heat_kernel_auto(label.kind(), label.hbar, &gx)?.conj();
    match label.s {
        Scale::Infinite => Ok(num),
        Scale::Finite(s) => {
            let den = heat_kernel_auto(label.kind(), s, &x.complexify())?.re;
            if !(den > tol) {
                return Err(Error::SmallDenominator(den));
            }
            Ok(num / den)
        }
    }
}

/// The pairing `⟨ψ̃_g|φ⟩` by two independent routes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Overlap {
    /// `(e^{ħΔ/2}φ)(g)` from the character series.
    pub analytic: Complex64,
    /// Haar quadrature of `conj(ψ̃_g) φ w` with `w = ρ_s` (finite `s`) or 1.
    pub quadrature: Complex64,
    /// Difference to a coarser grid.
    pub quadrature_error: f64,
}

impl Overlap {
    pub fn difference(&self) -> f64 {
        (self.analytic - self.quadrature).norm()
    }
}

/// Route A only.
pub fn overlap_analytic(label: &CoherentLabel, phi: &CharacterSeries<f64>) -> Result<Complex64> {
    if phi.kind() != label.kind() {
        return Err(Error::GroupMismatch("state and series on different groups".into()));
    }
    Ok(phi.heat_semigroup(label.hbar)?.evaluate(&label.g))
}

pub fn coherent_overlap(label: &CoherentLabel, phi: &CharacterSeries<f64>, level: usize) -> Result<Overlap> {
    let analytic = overlap_analytic(label, phi)?;
    let kind = label.kind();
    let failure: OnceLock<Error> = OnceLock::new();
    let integrand = |x: &GroupElement<f64>| {
        let weight = match label.s {
            Scale::Infinite => Ok(1.0),
            Scale::Finite(s) => heat_kernel_auto(kind, s, &x.complexify()).map(|w| w.re),
        };
        match coherent_eval(label, x, DEFAULT_EVAL_TOL).and_then(|psi| Ok((psi, weight?))) {
            Ok((psi, w)) => psi.conj() * phi.evaluate(&x.complexify()) * w,
            Err(e) => {
                let _ = failure.set(e);
                Complex64::new(f64::NAN, f64::NAN)
            }
        }
    };
    let integral = haar_integrate(kind, integrand, HaarMode::Quadrature { level })?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(Overlap { analytic, quadrature: integral.value, quadrature_error: integral.error })
}

/// Largest `|∂f/∂ζ̄|` of `ζ ↦ f(g·exp(ζX))` at `ζ = 0` over the directions
/// `X`, by central differences in `Re ζ` and `Im ζ`.
pub fn cauchy_riemann_defect<F>(f: F, g: &ComplexGroupElement<f64>, directions: &[AlgebraVector<f64>], h: f64) -> Result<f64>
where
    F: Fn(&ComplexGroupElement<f64>) -> Result<Complex64>,
{
    if !(h > 0.0) {
        return Err(invalid("finite-difference step must be positive"));
    }
    let at = |re: f64, im: f64, x: &AlgebraVector<f64>| f(&(*g * exp_map_complex(&x.scale(re), &x.scale(im))));
    directions.iter().try_fold(0.0f64, |worst, x| {
        let d_re = (at(h, 0.0, x)? - at(-h, 0.0, x)?) / (2.0 * h);
        let d_im = (at(0.0, h, x)? - at(0.0, -h, x)?) / (2.0 * h);
        Ok(worst.max(((d_re + Complex64::i() * d_im) * 0.5).norm()))
    })
}

/// Resolution-of-identity Gram matrix at one `s`:
/// `R_ab(s) = E_{g∼μ_{s,ħ}}[⟨φ_a|ψ̃_g⟩⟨ψ̃_g|φ_b⟩]` with `φ_a = χ_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionPoint {
    pub s: f64,
    pub seed: u64,
    /// Row-major `(n_max + 1)²` estimates.
    pub estimates: Vec<MCEstimate>,
    /// `⟨χ_a, χ_b⟩_{L²(K, ρ_s dx)}`.
    pub target: DMatrix<Complex64>,
    /// Same expectation on the finite lattice, without sampling.
    pub lattice: DMatrix<Complex64>,
}

impl ResolutionPoint {
    pub fn entry(&self, a: usize, b: usize) -> &MCEstimate {
        &self.estimates[a * self.target.ncols() + b]
    }
}

/// Linear fit in `1/s`, evaluated at `s = ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitExtrapolation {
    pub s_values: Vec<f64>,
    pub intercept: Vec<Complex64>,
    pub std_error: Vec<f64>,
    /// Largest distance from a fitted point to its data.
    pub residual: Vec<f64>,
}

/// Least-squares fit `y = c_0 + c_1/s`; returns `c_0`, its standard error
/// from the point errors, and the largest residual.
pub fn extrapolate_inverse_s(s: &[f64], y: &[Complex64], se: &[f64]) -> Result<(Complex64, f64, f64)> {
    if s.len() < 2 || s.len() != y.len() || s.len() != se.len() {
        return Err(invalid("extrapolation needs at least two matching points"));
    }
    let u: Vec<f64> = s.iter().map(|s| 1.0 / s).collect();
    let n = u.len() as f64;
    let mean_u = u.iter().sum::<f64>() / n;
    let suu: f64 = u.iter().map(|v| (v - mean_u).powi(2)).sum();
    if !(suu > 0.0) {
        return Err(invalid("extrapolation needs distinct s values"));
    }
    // c_0 = Σ w_i y_i with w_i = 1/n − mean_u (u_i − mean_u)/S_uu
    let w: Vec<f64> = u.iter().map(|v| 1.0 / n - mean_u * (v - mean_u) / suu).collect();
    let c0: Complex64 = w.iter().zip(y).map(|(w, y)| y * w).sum();
    let c1: Complex64 = u.iter().zip(y).map(|(v, y)| y * ((v - mean_u) / suu)).sum();
    let err = w.iter().zip(se).map(|(w, e)| (w * e).powi(2)).sum::<f64>().sqrt();
    let residual = u.iter().zip(y).map(|(v, y)| (c0 + c1 * v - y).norm()).fold(0.0, f64::max);
    Ok((c0, err, residual))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResolutionCheck {
    pub kind: GroupKind,
    pub n_max: usize,
    pub hbar: f64,
    pub n_sites: usize,
    pub points: Vec<ResolutionPoint>,
}

impl ResolutionCheck {
    fn delta(a: usize, b: usize) -> Complex64 {
        Complex64::new(if a == b { 1.0 } else { 0.0 }, 0.0)
    }

    fn m(&self) -> usize {
        self.n_max + 1
    }

    /// `|target − δ|` is non-increasing along the `s` list for every entry.
    pub fn targets_monotone(&self) -> bool {
        let m = self.m();
        (0..m * m).all(|i| {
            let (a, b) = (i / m, i % m);
            self.points.windows(2).all(|w| {
                (w[1].target[(a, b)] - Self::delta(a, b)).norm() <= (w[0].target[(a, b)] - Self::delta(a, b)).norm() + 1e-15
            })
        })
    }

    /// `|R − δ|` is non-increasing along the `s` list for every entry, up to
    /// `n_sigma` combined standard errors, after removing the known
    /// finite-`N` offset `lattice − target` from each estimate.
    pub fn estimates_monotone(&self, n_sigma: f64) -> bool {
        let m = self.m();
        (0..m * m).all(|i| {
            let (a, b) = (i / m, i % m);
            let corrected = |p: &ResolutionPoint| p.entry(a, b).mean - (p.lattice[(a, b)] - p.target[(a, b)]);
            self.points.windows(2).all(|w| {
                let slack = n_sigma * w[0].entry(a, b).std_error.hypot(w[1].entry(a, b).std_error);
                (corrected(&w[1]) - Self::delta(a, b)).norm() <= (corrected(&w[0]) - Self::delta(a, b)).norm() + slack
            })
        })
    }

    /// `ν_ħ` Gram matrix by extrapolating the sampled points to `s = ∞`.
    pub fn limit(&self) -> Result<LimitExtrapolation> {
        let m = self.m();
        let s_values: Vec<f64> = self.points.iter().map(|p| p.s).collect();
        let mut out = LimitExtrapolation {
            s_values: s_values.clone(),
            intercept: Vec::new(),
            std_error: Vec::new(),
            residual: Vec::new(),
        };
        for i in 0..m * m {
            let y: Vec<Complex64> = self.points.iter().map(|p| p.estimates[i].mean).collect();
            let se: Vec<f64> = self.points.iter().map(|p| p.estimates[i].std_error).collect();
            let (c0, e, r) = extrapolate_inverse_s(&s_values, &y, &se)?;
            out.intercept.push(c0);
            out.std_error.push(e);
            out.residual.push(r);
        }
        Ok(out)
    }

    /// Per-point rows; with `include_limit`, also the extrapolated `s = ∞`
    /// rows, whose slack is the fit residual plus the distance from the
    /// intercept to the largest-`s` point (the linear model is only a
    /// surrogate for the true approach to the limit).
    pub fn rows(&self, include_limit: bool) -> Vec<ReportRow> {
        let m = self.m();
        let mut rows = Vec::new();
        for p in &self.points {
            for a in 0..m {
                for b in 0..m {
                    let t = p.target[(a, b)];
                    rows.push(
                        ReportRow::stochastic(format!("resolution[{a};{b}]"), p.entry(a, b), t, (p.lattice[(a, b)] - t).norm())
                            .lattice(self.n_sites)
                            .heat(Some(p.s), Some(self.hbar))
                            .seeded(p.seed),
                    );
                }
            }
        }
        if let (true, Ok(lim)) = (include_limit, self.limit()) {
            let last = self.points.last().expect("non-empty");
            for i in 0..m * m {
                let (a, b) = (i / m, i % m);
                let est = MCEstimate {
                    mean: lim.intercept[i],
                    std_error: lim.std_error[i],
                    n_samples: self.points[0].estimates[i].n_samples,
                };
                let slack = lim.residual[i] + (lim.intercept[i] - last.estimates[i].mean).norm();
                rows.push(
                    ReportRow::stochastic(format!("resolution_limit[{a};{b}]"), &est, Self::delta(a, b), slack)
                        .lattice(self.n_sites)
                        .heat(None, Some(self.hbar)),
                );
            }
        }
        rows
    }
}

fn point_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub fn resolution_identity_check(
    kind: GroupKind,
    n_max: usize,
    hbar: f64,
    s_values: &[f64],
    n_sites: usize,
    n_samples: usize,
    seed: u64,
) -> Result<ResolutionCheck> {
    if s_values.is_empty() {
        return Err(invalid("no s values given"));
    }
    for &s in s_values {
        crate::euclid::HeatParams::new(s, hbar)?;
    }
    if n_sites < 2 {
        return Err(invalid("lattice needs at least 2 sites"));
    }
    let m = n_max + 1;
    let smoothed: Vec<CharacterSeries<f64>> = (0..m)
        .map(|a| CharacterSeries::character(kind, a as i64)?.heat_semigroup(hbar))
        .collect::<Result<_>>()?;
    let heat = |a: usize| -> f64 {
        let c = irrep_info::<f64>(kind, a as i64).expect("non-negative label").casimir;
        (-hbar * c / 2.0).exp()
    };
    let points = s_values
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let seed = point_seed(seed, i);
            let estimates = MonteCarlo::new(n_samples, seed).estimate(m * m, |rng, out| {
                let z = sample_complex_connection(kind, n_sites, s, hbar, rng).expect("validated");
                let g = holonomy_complex(&z, HolonomyMethod::Product);
                // ⟨ψ̃_g|φ_a⟩ by the analytic route
                let ov: Vec<Complex64> = smoothed.iter().map(|p| p.evaluate(&g)).collect();
                for a in 0..m {
                    for b in 0..m {
                        out[a * m + b] = ov[a].conj() * ov[b];
                    }
                }
            })?;
            let mut target = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
            for a in 0..m {
                for b in 0..m {
                    target[(a, b)] = weighted_inner_product(kind, a as i64, b as i64, s)?;
                }
            }
            let moments = lattice_gram_moments(kind, n_max, s, hbar, n_sites, ExactOptions::default())?;
            let lattice = DMatrix::from_fn(m, m, |a, b| moments[(b, a)] * heat(a) * heat(b));
            Ok(ResolutionPoint { s, seed, estimates, target, lattice })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResolutionCheck { kind, n_max, hbar, n_sites, points })
}

/// `Σ_ab conj(c_a) c_b R_ab` for `φ = Σ c_a χ_a`, with its standard error
/// from the entry errors (treated as independent).
pub fn reconstructed_norm(point: &ResolutionPoint, coeffs: &[Complex64]) -> Result<MCEstimate> {
    let m = point.target.ncols();
    if coeffs.len() != m {
        return Err(invalid(format!("expected {m} coefficients, got {}", coeffs.len())));
    }
    let mut mean = Complex64::new(0.0, 0.0);
    let mut var = 0.0;
    for a in 0..m {
        for b in 0..m {
            let w = coeffs[a].conj() * coeffs[b];
            let e = point.entry(a, b);
            mean += w * e.mean;
            var += w.norm_sqr() * e.std_error.powi(2);
        }
    }
    Ok(MCEstimate { mean, std_error: var.sqrt(), n_samples: point.entry(0, 0).n_samples })
}
