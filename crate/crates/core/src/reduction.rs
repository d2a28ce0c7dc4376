//! Checks that the lattice Laplacian, heat semigroup and Gaussian measures
//! on connections reduce to their counterparts on K under the holonomy map.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::group::{exp_map, AlgebraVector, GroupElement, GroupKind};
use crate::lattice::{
    holonomy, holonomy_complex, lattice_character_moment, lattice_gram_moments, lattice_smoothing_expectation,
    sample_complex_connection, sample_connection, ComplexLatticeConnection, ExactOptions, HolonomyMethod,
    LatticeConnection,
};
use crate::mc::{MCEstimate, MonteCarlo};
use crate::report::{Report, ReportRow};
use crate::spectral::{character, character_product, irrep_info, weighted_inner_product, CharacterSeries};

pub type ReductionReport = Report;

/// Default finite-difference step, in units of the link exponent `A_k/N`.
pub const DEFAULT_FD_STEP: f64 = 2e-3;

/// Allowed spread between Richardson values at `h` and `h/2`, relative to
/// `1 + |value|`.
const FD_CONSISTENCY: f64 = 1e-6;

/// Tolerance for quantities that are exact up to finite-difference error.
pub const FD_TOLERANCE: f64 = 1e-6;

type Av = AlgebraVector<f64>;

/// Prefix and suffix products so that `h = S_k U_k P_k`.
struct Factorization {
    prefix: Vec<GroupElement<f64>>,
    suffix: Vec<GroupElement<f64>>,
}

impl Factorization {
    fn new(conn: &LatticeConnection) -> Self {
        let links = conn.links();
        let n = links.len();
        let id = GroupElement::identity(conn.kind());
        let mut prefix = vec![id; n];
        for k in 1..n {
            prefix[k] = links[k - 1] * prefix[k - 1];
        }
        let mut suffix = vec![id; n];
        for k in (0..n - 1).rev() {
            suffix[k] = suffix[k + 1] * links[k + 1];
        }
        Self { prefix, suffix }
    }

    /// Holonomy with the exponent of link `k` replaced by `x`.
    fn with_link(&self, k: usize, x: &Av) -> GroupElement<f64> {
        self.suffix[k] * exp_map(x) * self.prefix[k]
    }
}

fn richardson<F: Fn(f64) -> Complex64>(second_diff: F, h: f64) -> Result<Complex64> {
    let d = |h: f64| second_diff(h);
    let (d1, d2, d3) = (d(h), d(h / 2.0), d(h / 4.0));
    let r1 = (d2 * 4.0 - d1) / 3.0;
    let r2 = (d3 * 4.0 - d2) / 3.0;
    let spread = (r1 - r2).norm();
    if !(spread <= FD_CONSISTENCY * (1.0 + r2.norm())) {
        return Err(Error::FiniteDifference { spread });
    }
    Ok(r2)
}

/// Lattice Laplacian of `φ∘h` against `Δ_K φ` at `h(A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianReduction {
    pub kind: GroupKind,
    pub n_sites: usize,
    /// `N Σ_{k,j} ∂²(φ∘h)/∂(A_k^j)²`.
    pub lattice_value: Complex64,
    /// `(Δ_K φ)(h(A))`.
    pub reduced_value: Complex64,
}

impl LaplacianReduction {
    pub fn abs_error(&self) -> f64 {
        (self.lattice_value - self.reduced_value).norm()
    }

    pub fn relative_error(&self) -> f64 {
        self.abs_error() / self.reduced_value.norm().max(1e-300)
    }

    /// Finite-difference tolerance for U(1), where the identity is exact;
    /// `|Δ_K φ|/N` for SU(2), where the lattice error is first order.
    pub fn default_tolerance(&self) -> f64 {
        match self.kind {
            GroupKind::U1 => FD_TOLERANCE,
            GroupKind::Su2 => FD_TOLERANCE + self.reduced_value.norm() / self.n_sites as f64,
        }
    }

    pub fn row(&self) -> ReportRow {
        ReportRow::deterministic("laplacian_reduction", self.lattice_value, self.reduced_value, self.default_tolerance())
            .lattice(self.n_sites)
    }
}

/// `Δ_𝒜(φ∘h)` at `conn` by central differences in the lattice coordinates
/// `A_k^j` (step `fd_step` in link-exponent units, Richardson-extrapolated
/// and checked under halving), against `(Δ_K φ)(h(conn))`.
pub fn laplacian_reduction_check(
    phi: &CharacterSeries<f64>,
    conn: &LatticeConnection,
    fd_step: f64,
) -> Result<LaplacianReduction> {
    if !(fd_step > 0.0) {
        return Err(invalid("finite-difference step must be positive"));
    }
    if phi.kind() != conn.kind() {
        return Err(Error::GroupMismatch("series and connection on different groups".into()));
    }
    let kind = conn.kind();
    let n = conn.n_sites();
    let nf = n as f64;
    let fact = Factorization::new(conn);
    let f = |g: GroupElement<f64>| phi.evaluate(&g.complexify());
    let h0 = holonomy(conn, HolonomyMethod::Product);
    let f0 = f(h0);
    // Σ_{k,j} of second differences in link-exponent units; a coordinate
    // step δ in A_k^j is δ/N in the exponent, so Δ_𝒜 = (1/N) Σ ∂²_exponent
    let sum_second = |h: f64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let x = conn.value(k).scale(1.0 / nf);
            for j in 0..kind.dim() {
                let e = Av::basis(kind, j).scale(h);
                acc += (f(fact.with_link(k, &(x + e))) + f(fact.with_link(k, &(x - e))) - f0 * 2.0) / (h * h);
            }
        }
        acc / nf
    };
    let lattice_value = richardson(sum_second, fd_step)?;
    let reduced_value = phi.laplacian().evaluate(&h0.complexify());
    Ok(LaplacianReduction { kind, n_sites: n, lattice_value, reduced_value })
}

/// Monte Carlo smoothing `E_B[φ(h(base + B))]` against `(e^{ħΔ_K/2}φ)(h_C(base))`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemigroupReduction {
    pub n_sites: usize,
    pub hbar: f64,
    pub seed: u64,
    pub estimate: MCEstimate,
    pub target: Complex64,
    /// Same expectation on the finite lattice, without sampling.
    pub lattice_exact: Complex64,
}

impl SemigroupReduction {
    pub fn bias(&self) -> Complex64 {
        self.lattice_exact - self.target
    }

    pub fn rows(&self) -> Vec<ReportRow> {
        let p = |r: ReportRow| r.lattice(self.n_sites).heat(None, Some(self.hbar)).seeded(self.seed);
        vec![
            p(ReportRow::stochastic("smoothing", &self.estimate, self.target, self.bias().norm())),
            p(ReportRow::stochastic("smoothing_vs_lattice", &self.estimate, self.lattice_exact, 0.0)),
        ]
    }
}

pub fn semigroup_reduction_check(
    phi: &CharacterSeries<f64>,
    base: &ComplexLatticeConnection,
    hbar: f64,
    n_samples: usize,
    seed: u64,
) -> Result<SemigroupReduction> {
    if !(hbar > 0.0) {
        return Err(invalid(format!("hbar must be positive, got {hbar}")));
    }
    if phi.kind() != base.kind() {
        return Err(Error::GroupMismatch("series and connection on different groups".into()));
    }
    let (kind, n) = (base.kind(), base.n_sites());
    let estimate = MonteCarlo::new(n_samples, seed).estimate_scalar(|rng| {
        let b = sample_connection(kind, n, hbar, rng).expect("validated");
        phi.evaluate(&holonomy_complex(&base.shifted(&b).expect("same shape"), HolonomyMethod::Product))
    })?;
    let target = phi.heat_semigroup(hbar)?.evaluate(&holonomy_complex(base, HolonomyMethod::Product));
    let lattice_exact = lattice_smoothing_expectation(phi, base, hbar, ExactOptions::default())?;
    Ok(SemigroupReduction { n_sites: n, hbar, seed, estimate, target, lattice_exact })
}

/// Both legs of the unitarity diagram for characters `0..=n_max`.
#[derive(Clone, Debug, PartialEq)]
pub struct GramIsometry {
    pub kind: GroupKind,
    pub n_max: usize,
    pub s: f64,
    pub hbar: f64,
    pub n_sites: usize,
    pub seed: u64,
    /// `E_{Z∼M_{s,ħ}}[χ_a(h_C) conj χ_b(h_C)] e^{−ħ(c_a+c_b)/2}`, row-major.
    pub complex_leg: Vec<MCEstimate>,
    /// `E_{A∼P_s}[χ_a(h) conj χ_b(h)]`, row-major.
    pub real_leg: Vec<MCEstimate>,
    /// `∫ χ_a conj(χ_b) ρ_s dx`.
    pub target: DMatrix<Complex64>,
    pub complex_lattice: DMatrix<Complex64>,
    pub real_lattice: DMatrix<Complex64>,
}

impl GramIsometry {
    pub fn rows(&self) -> Vec<ReportRow> {
        let m = self.n_max + 1;
        let mut rows = Vec::new();
        for (leg, est, lat) in
            [("gram_complex", &self.complex_leg, &self.complex_lattice), ("gram_real", &self.real_leg, &self.real_lattice)]
        {
            for a in 0..m {
                for b in 0..m {
                    let t = self.target[(a, b)];
                    let bias = (lat[(a, b)] - t).norm();
                    rows.push(
                        ReportRow::stochastic(format!("{leg}[{a};{b}]"), &est[a * m + b], t, bias)
                            .lattice(self.n_sites)
                            .heat(Some(self.s), Some(self.hbar))
                            .seeded(self.seed),
                    );
                }
            }
        }
        rows
    }

    pub fn complex_entry(&self, a: usize, b: usize) -> &MCEstimate {
        &self.complex_leg[a * (self.n_max + 1) + b]
    }

    pub fn real_entry(&self, a: usize, b: usize) -> &MCEstimate {
        &self.real_leg[a * (self.n_max + 1) + b]
    }

    pub fn bias(&self, a: usize, b: usize) -> Complex64 {
        self.complex_lattice[(a, b)] - self.target[(a, b)]
    }
}

fn heat_factor(kind: GroupKind, a: usize, b: usize, hbar: f64) -> f64 {
    let c = |l: usize| irrep_info::<f64>(kind, l as i64).expect("non-negative label").casimir;
    (-hbar * (c(a) + c(b)) / 2.0).exp()
}

/// Closed-form `∫ χ_a conj(χ_b) ρ_s dx` for `a, b ≤ n_max`.
pub fn gram_target(kind: GroupKind, n_max: usize, s: f64) -> Result<DMatrix<Complex64>> {
    let mut t = DMatrix::from_element(n_max + 1, n_max + 1, Complex64::new(0.0, 0.0));
    for a in 0..=n_max {
        for b in 0..=n_max {
            t[(a, b)] = weighted_inner_product(kind, b as i64, a as i64, s)?;
        }
    }
    Ok(t)
}

/// Complex-leg Gram estimates only, for callers that supply their own
/// targets.
pub fn complex_gram_estimates(
    kind: GroupKind,
    n_max: usize,
    s: f64,
    hbar: f64,
    n_sites: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<MCEstimate>> {
    crate::euclid::HeatParams::new(s, hbar)?;
    let m = n_max + 1;
    let factors: Vec<f64> =
        (0..m * m).map(|i| heat_factor(kind, i / m, i % m, hbar)).collect();
    MonteCarlo::new(n_samples, seed).estimate(m * m, |rng, out| {
        let z = sample_complex_connection(kind, n_sites, s, hbar, rng).expect("validated");
        let h = holonomy_complex(&z, HolonomyMethod::Product);
        let chi: Vec<Complex64> = (0..m).map(|a| character(kind, a as i64, &h)).collect();
        for a in 0..m {
            for b in 0..m {
                out[a * m + b] = chi[a] * chi[b].conj() * factors[a * m + b];
            }
        }
    })
}

pub fn gram_isometry_check(
    kind: GroupKind,
    n_max: usize,
    s: f64,
    hbar: f64,
    n_sites: usize,
    n_samples: usize,
    seed: u64,
) -> Result<GramIsometry> {
    crate::euclid::HeatParams::new(s, hbar)?;
    if n_sites < 2 {
        return Err(invalid("lattice needs at least 2 sites"));
    }
    let m = n_max + 1;
    let complex_leg = complex_gram_estimates(kind, n_max, s, hbar, n_sites, n_samples, seed)?;
    let real_leg = MonteCarlo::new(n_samples, seed ^ 0x5_eed0_fa11).estimate(m * m, |rng, out| {
        let a = sample_connection(kind, n_sites, s, rng).expect("validated");
        let h = holonomy(&a, HolonomyMethod::Product).complexify();
        let chi: Vec<Complex64> = (0..m).map(|l| character(kind, l as i64, &h)).collect();
        for a in 0..m {
            for b in 0..m {
                out[a * m + b] = chi[a] * chi[b].conj();
            }
        }
    })?;
    let target = gram_target(kind, n_max, s)?;
    let mut complex_lattice = lattice_gram_moments(kind, n_max, s, hbar, n_sites, ExactOptions::default())?;
    for a in 0..m {
        for b in 0..m {
            complex_lattice[(a, b)] *= heat_factor(kind, a, b, hbar);
        }
    }
    let mut real_lattice = DMatrix::from_element(m, m, Complex64::new(0.0, 0.0));
    for a in 0..m {
        for b in 0..m {
            // χ_a conj χ_b expands into characters with unit coefficients
            for (l, c) in character_product::<f64>(kind, a as i64, b as i64)?.terms() {
                real_lattice[(a, b)] += c * lattice_character_moment(kind, l, s, n_sites)?;
            }
        }
    }
    Ok(GramIsometry { kind, n_max, s, hbar, n_sites, seed, complex_leg, real_leg, target, complex_lattice, real_lattice })
}

/// Radial functions in the plane: five-point Laplacian against
/// `f'' + f'/r`, and the orbit-volume form `f'' + ∇(log V)·∇f` with
/// `V(r)` the numerically measured circumference of the SO(2) orbit.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialPoint {
    pub r: f64,
    pub laplacian_2d: f64,
    pub radial_formula: f64,
    pub orbit_volume: f64,
    /// `∇(log V)·∇f` by planar finite differences.
    pub volume_term: f64,
    /// `f'/r`.
    pub first_order_term: f64,
}

impl RadialPoint {
    pub fn rows(&self) -> Vec<ReportRow> {
        let tol = FD_TOLERANCE;
        vec![
            ReportRow::real(format!("laplacian_2d(r={})", self.r), self.laplacian_2d, self.radial_formula, tol),
            ReportRow::real(
                format!("orbit_volume(r={})", self.r),
                self.orbit_volume,
                std::f64::consts::TAU * self.r,
                tol * self.r.max(1.0),
            ),
            ReportRow::real(format!("volume_term(r={})", self.r), self.volume_term, self.first_order_term, tol),
        ]
    }
}

/// Smallest admissible radius.
pub const MIN_RADIUS: f64 = 0.05;

pub fn radial_laplacian_check<F: Fn(f64) -> f64>(profile: F, r_points: &[f64]) -> Result<Vec<RadialPoint>> {
    if r_points.is_empty() {
        return Err(invalid("no radii given"));
    }
    let f2 = |x: f64, y: f64| profile((x * x + y * y).sqrt());
    r_points
        .iter()
        .map(|&r| {
            if !(r >= MIN_RADIUS && r.is_finite()) {
                return Err(invalid(format!("radius {r} too close to the singular orbit at 0 (minimum {MIN_RADIUS})")));
            }
            let h0 = 0.02 * r.min(1.0);
            // evaluation point off the axes
            let (x, y) = (r * 0.6, r * 0.8);
            let five = |h: f64| {
                Complex64::new(
                    (f2(x + h, y) + f2(x - h, y) + f2(x, y + h) + f2(x, y - h) - 4.0 * f2(x, y)) / (h * h),
                    0.0,
                )
            };
            let laplacian_2d = richardson(five, h0)?.re;
            let fp = first_derivative(&profile, r, h0)?;
            let fpp = richardson(|h| Complex64::new((profile(r + h) + profile(r - h) - 2.0 * profile(r)) / (h * h), 0.0), h0)?.re;
            let orbit_volume = orbit_circumference(r);
            let log_v = |x: f64, y: f64| orbit_circumference((x * x + y * y).sqrt()).ln();
            let grad = |g: &dyn Fn(f64, f64) -> f64| -> Result<(f64, f64)> {
                Ok((
                    first_derivative(&|t| g(t, y), x, h0)?,
                    first_derivative(&|t| g(x, t), y, h0)?,
                ))
            };
            let gv = grad(&log_v)?;
            let gf = grad(&f2)?;
            Ok(RadialPoint {
                r,
                laplacian_2d,
                radial_formula: fpp + fp / r,
                orbit_volume,
                volume_term: gv.0 * gf.0 + gv.1 * gf.1,
                first_order_term: fp / r,
            })
        })
        .collect()
}

/// Central first derivative, Richardson-extrapolated, with the same
/// halving consistency check as the second differences.
fn first_derivative(g: &dyn Fn(f64) -> f64, t: f64, h: f64) -> Result<f64> {
    let d = |h: f64| (g(t + h) - g(t - h)) / (2.0 * h);
    let (d1, d2, d3) = (d(h), d(h / 2.0), d(h / 4.0));
    let r1 = (4.0 * d2 - d1) / 3.0;
    let r2 = (4.0 * d3 - d2) / 3.0;
    let spread = (r1 - r2).abs();
    if !(spread <= FD_CONSISTENCY * (1.0 + r2.abs())) {
        return Err(Error::FiniteDifference { spread });
    }
    Ok(r2)
}

/// Length of the circle of radius `r` as the limit of inscribed polygons,
/// `lim n·2r sin(π/n)`, by Richardson extrapolation in `1/n²`.
fn orbit_circumference(r: f64) -> f64 {
    let poly = |n: f64| n * 2.0 * r * (std::f64::consts::PI / n).sin();
    let (p1, p2, p3) = (poly(256.0), poly(512.0), poly(1024.0));
    let q1 = (4.0 * p2 - p1) / 3.0;
    let q2 = (4.0 * p3 - p2) / 3.0;
    (16.0 * q2 - q1) / 15.0
}

/// Singular values of the differential of `A ↦ h(A)^{−1} h(A + ·)` from
/// `‖·‖`-orthonormal lattice coordinates to 𝔨.
#[derive(Clone, Debug, PartialEq)]
pub struct Submersion {
    pub kind: GroupKind,
    pub n_sites: usize,
    /// All `dim·N` singular values of the Jacobian padded to a square, descending.
    pub singular_values: Vec<f64>,
}

impl Submersion {
    pub fn dim(&self) -> usize {
        self.kind.dim()
    }

    /// Allowed `|σ − 1|`: exact for U(1), first order in `1/N` for SU(2).
    pub fn default_tolerance(&self) -> f64 {
        match self.kind {
            GroupKind::U1 => FD_TOLERANCE,
            GroupKind::Su2 => FD_TOLERANCE + 1.0 / self.n_sites as f64,
        }
    }

    /// Largest `|σ − 1|` over the leading `dim 𝔨` values.
    pub fn max_leading_deviation(&self) -> f64 {
        self.singular_values[..self.dim()].iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Largest of the remaining values.
    pub fn max_trailing(&self) -> f64 {
        self.singular_values[self.dim()..].iter().copied().fold(0.0, f64::max)
    }

    pub fn rows(&self) -> Vec<ReportRow> {
        let tol = self.default_tolerance();
        let mut rows: Vec<ReportRow> = self.singular_values[..self.dim()]
            .iter()
            .enumerate()
            .map(|(i, s)| ReportRow::real(format!("singular_value[{i}]"), *s, 1.0, tol).lattice(self.n_sites))
            .collect();
        rows.push(
            ReportRow::real("max_trailing_singular_value", self.max_trailing(), 0.0, FD_TOLERANCE).lattice(self.n_sites),
        );
        rows
    }
}

pub fn submersion_check(conn: &LatticeConnection, fd_step: f64) -> Result<Submersion> {
    if !(fd_step > 0.0) {
        return Err(invalid("finite-difference step must be positive"));
    }
    let kind = conn.kind();
    let n = conn.n_sites();
    let nf = n as f64;
    let dim = kind.dim();
    let fact = Factorization::new(conn);
    let h0 = holonomy(conn, HolonomyMethod::Product);
    let h0_inv = h0.inverse();
    let mut jac = DMatrix::<f64>::zeros(dim, dim * n);
    for k in 0..n {
        let x = conn.value(k).scale(1.0 / nf);
        for j in 0..dim {
            // unit step in the orthonormal coordinate A_k^j/√N moves the
            // link exponent by 1/√N
            let dir = Av::basis(kind, j).scale(1.0 / nf.sqrt());
            let col = |h: f64| -> Av {
                let plus = (h0_inv * fact.with_link(k, &(x + dir.scale(h)))).log();
                let minus = (h0_inv * fact.with_link(k, &(x - dir.scale(h)))).log();
                (plus - minus).scale(1.0 / (2.0 * h))
            };
            let h = fd_step * nf.sqrt();
            let (c1, c2, c3) = (col(h), col(h / 2.0), col(h / 4.0));
            for i in 0..dim {
                let r1 = (4.0 * c2.coord(i) - c1.coord(i)) / 3.0;
                let r2 = (4.0 * c3.coord(i) - c2.coord(i)) / 3.0;
                if (r1 - r2).abs() > FD_CONSISTENCY * (1.0 + r2.abs()) {
                    return Err(Error::FiniteDifference { spread: (r1 - r2).abs() });
                }
                jac[(i, k * dim + j)] = r2;
            }
        }
    }
    let gram = jac.transpose() * &jac;
    let eig = SymmetricEigen::new(gram);
    let mut sv: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(Submersion { kind, n_sites: n, singular_values: sv })
}

/// `E_{A∼P_s}[χ_λ(h(A))]` sampled, with the finite-`N` exact value and the
/// continuum target `d_λ e^{−s c_λ/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pushforward {
    pub kind: GroupKind,
    pub label: i64,
    pub s: f64,
    pub n_sites: usize,
    pub seed: u64,
    pub estimate: MCEstimate,
    pub target: f64,
    pub lattice_exact: f64,
}

impl Pushforward {
    pub fn bias(&self) -> f64 {
        self.lattice_exact - self.target
    }

    pub fn rows(&self) -> Vec<ReportRow> {
        let p = |r: ReportRow| r.lattice(self.n_sites).heat(Some(self.s), None).seeded(self.seed);
        let c = |x: f64| Complex64::new(x, 0.0);
        vec![
            p(ReportRow::stochastic(format!("pushforward[{}]", self.label), &self.estimate, c(self.target), self.bias().abs())),
            p(ReportRow::real(format!("lattice_bias[{}]", self.label), self.lattice_exact, self.target, f64::INFINITY)),
        ]
    }
}

pub fn pushforward_check(
    kind: GroupKind,
    label: i64,
    s: f64,
    n_sites: usize,
    n_samples: usize,
    seed: u64,
) -> Result<Pushforward> {
    let estimate = crate::lattice::pushforward_moment(kind, label, s, n_sites, n_samples, seed)?;
    let target = crate::lattice::pushforward_target(kind, label, s)?;
    let lattice_exact = lattice_character_moment(kind, label, s, n_sites)?;
    Ok(Pushforward { kind, label, s, n_sites, seed, estimate, target, lattice_exact })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_has_zero_laplacian() {
        let phi = CharacterSeries::<f64>::character(GroupKind::Su2, 0).unwrap();
        let conn = LatticeConnection::zero(GroupKind::Su2, 8).unwrap();
        let r = laplacian_reduction_check(&phi, &conn, DEFAULT_FD_STEP).unwrap();
        assert!(r.lattice_value.norm() < 1e-9 && r.reduced_value.norm() == 0.0);
    }

    #[test]
    fn tiny_steps_are_flagged() {
        let phi = CharacterSeries::<f64>::character(GroupKind::Su2, 1).unwrap();
        let conn = LatticeConnection::zero(GroupKind::Su2, 8).unwrap();
        assert!(matches!(laplacian_reduction_check(&phi, &conn, 1e-7), Err(Error::FiniteDifference { .. })));
    }

    #[test]
    fn radial_rejects_the_origin() {
        assert!(radial_laplacian_check(|r| r * r, &[0.0]).is_err());
        assert!(radial_laplacian_check(|r| r * r, &[]).is_err());
    }

    #[test]
    fn polygon_circumference() {
        assert!((orbit_circumference(1.3) - std::f64::consts::TAU * 1.3).abs() < 1e-12);
    }
}
