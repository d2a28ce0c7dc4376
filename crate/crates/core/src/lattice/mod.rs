//! Connections on the spatial circle discretized on `N` sites.
//!
//! Site `k` carries `A_k ≈ A(k/N)`; the link from site `k` to `k+1` is
//! `U_k = exp(A_k/N)`. The holonomy solves `dh/dτ = A(τ) h`, `h(0) = e`,
//! so `h = U_{N−1} ⋯ U_0`. Coordinates are in the orthonormal algebra
//! basis; `‖A‖² = (1/N) Σ_k |A_k|²`.

mod exact;
mod gauge;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::group::{
    exp_map, exp_map_complex, ordered_product, ordered_product_complex, AlgebraVector, ComplexGroupElement,
    GroupElement, GroupKind, Mat2,
};
use crate::mc::{MCEstimate, MonteCarlo};
use crate::spectral::{character, heat_moment, validate_label};

pub use exact::{
    lattice_character_moment, lattice_gram_moments, lattice_smoothing_expectation, link_character_mean,
    ExactOptions,
};
pub use gauge::{algebra_level_drift, classify_pair, gauge_transform_algebra, gauge_transform_links, LatticeGaugeMap, LinkConfiguration};

type Av = AlgebraVector<f64>;

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeConnection {
    kind: GroupKind,
    values: Vec<Av>,
}

impl LatticeConnection {
    pub fn new(kind: GroupKind, values: Vec<Av>) -> Result<Self> {
        if values.len() < 2 {
            return Err(invalid(format!("lattice needs at least 2 sites, got {}", values.len())));
        }
        if let Some(v) = values.iter().find(|v| v.kind() != kind) {
            return Err(Error::GroupMismatch(format!("site value on {} in a {kind} connection", v.kind())));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(invalid("non-finite connection value"));
        }
        Ok(Self { kind, values })
    }

    pub fn zero(kind: GroupKind, n_sites: usize) -> Result<Self> {
        Self::new(kind, vec![Av::zero(kind); n_sites])
    }

    pub fn constant(x: Av, n_sites: usize) -> Result<Self> {
        Self::new(x.kind(), vec![x; n_sites])
    }

    /// Samples `A(τ)` at `τ = k/N`.
    pub fn from_fn<F: Fn(f64) -> Av>(kind: GroupKind, n_sites: usize, f: F) -> Result<Self> {
        Self::new(kind, (0..n_sites).map(|k| f(k as f64 / n_sites as f64)).collect())
    }

    /// Random smooth profile `A(τ) = Σ_{m ≤ modes} a_m cos 2πmτ + b_m sin 2πmτ`
    /// with coefficients uniform in `[−amplitude, amplitude]`.
    pub fn smooth_random<R: Rng + ?Sized>(
        kind: GroupKind,
        n_sites: usize,
        modes: usize,
        amplitude: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let coef: Vec<[f64; 6]> = (0..=modes)
            .map(|_| [(); 6].map(|_| amplitude * (2.0 * rng.random::<f64>() - 1.0)))
            .collect();
        Self::from_fn(kind, n_sites, |t| {
            let mut c = [0.0; 3];
            for (m, cm) in coef.iter().enumerate() {
                let (s, co) = (std::f64::consts::TAU * m as f64 * t).sin_cos();
                for (j, cj) in c.iter_mut().enumerate() {
                    *cj += cm[2 * j] * co + cm[2 * j + 1] * s;
                }
            }
            Av::new(kind, &c[..kind.dim()]).expect("finite")
        })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n_sites(&self) -> usize {
        self.values.len()
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.n_sites() as f64
    }

    pub fn values(&self) -> &[Av] {
        &self.values
    }

    pub fn value(&self, k: usize) -> Av {
        self.values[k]
    }

    pub fn set_value(&mut self, k: usize, v: Av) {
        assert_eq!(v.kind(), self.kind);
        self.values[k] = v;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dt()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Mean value `(1/N) Σ A_k`.
    pub fn mean(&self) -> Av {
        self.values.iter().fold(Av::zero(self.kind), |a, v| a + *v).scale(self.dt())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.kind != other.kind || self.n_sites() != other.n_sites() {
            return Err(Error::GroupMismatch(format!(
                "{} on {} sites vs {} on {} sites",
                self.kind,
                self.n_sites(),
                other.kind,
                other.n_sites()
            )));
        }
        Ok(())
    }

    /// `self + t·other`.
    pub fn add_scaled(&self, other: &Self, t: f64) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(Self {
            kind: self.kind,
            values: self.values.iter().zip(&other.values).map(|(a, b)| *a + b.scale(t)).collect(),
        })
    }

    pub fn scale(&self, t: f64) -> Self {
        Self { kind: self.kind, values: self.values.iter().map(|v| v.scale(t)).collect() }
    }

    /// `U_k = exp(A_k/N)`.
    pub fn links(&self) -> Vec<GroupElement<f64>> {
        let dt = self.dt();
        self.values.iter().map(|v| exp_map(&v.scale(dt))).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        LatticeJson::from_real(self).to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        match LatticeJson::parse(text)?.into_config()? {
            LatticeConfig::Real(c) => Ok(c),
            LatticeConfig::Complex(_) => Err(invalid("expected a real connection, found imag_values")),
        }
    }
}

/// `Z_k = A_k + i P_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexLatticeConnection {
    real_part: LatticeConnection,
    imag_part: LatticeConnection,
}

impl ComplexLatticeConnection {
    pub fn new(real_part: LatticeConnection, imag_part: LatticeConnection) -> Result<Self> {
        real_part.check_compatible(&imag_part)?;
        Ok(Self { real_part, imag_part })
    }

    pub fn from_real(real_part: LatticeConnection) -> Self {
        let imag_part = LatticeConnection::zero(real_part.kind, real_part.n_sites()).expect("n >= 2");
        Self { real_part, imag_part }
    }

    pub fn kind(&self) -> GroupKind {
        self.real_part.kind
    }

    pub fn n_sites(&self) -> usize {
        self.real_part.n_sites()
    }

    pub fn real_part(&self) -> &LatticeConnection {
        &self.real_part
    }

    pub fn imag_part(&self) -> &LatticeConnection {
        &self.imag_part
    }

    /// `‖A‖² + ‖P‖²`.
    pub fn norm_sqr(&self) -> f64 {
        self.real_part.norm_sqr() + self.imag_part.norm_sqr()
    }

    /// Adds a real connection to the real part.
    pub fn shifted(&self, b: &LatticeConnection) -> Result<Self> {
        Ok(Self { real_part: self.real_part.add_scaled(b, 1.0)?, imag_part: self.imag_part.clone() })
    }

    /// `exp(Z_k/N)` in K_C.
    pub fn links(&self) -> Vec<ComplexGroupElement<f64>> {
        let dt = self.real_part.dt();
        self.real_part
            .values
            .iter()
            .zip(&self.imag_part.values)
            .map(|(a, p)| exp_map_complex(&a.scale(dt), &p.scale(dt)))
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        LatticeJson::from_complex(self).to_string()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        match LatticeJson::parse(text)?.into_config()? {
            LatticeConfig::Real(c) => Ok(Self::from_real(c)),
            LatticeConfig::Complex(c) => Ok(c),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LatticeConfig {
    Real(LatticeConnection),
    Complex(ComplexLatticeConnection),
}

impl LatticeConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        LatticeJson::parse(text)?.into_config()
    }

    pub fn kind(&self) -> GroupKind {
        match self {
            LatticeConfig::Real(c) => c.kind(),
            LatticeConfig::Complex(c) => c.kind(),
        }
    }

    pub fn n_sites(&self) -> usize {
        match self {
            LatticeConfig::Real(c) => c.n_sites(),
            LatticeConfig::Complex(c) => c.n_sites(),
        }
    }
}

/// Wire format `{group, n_sites, values: [[...]], imag_values?: [[...]]}`.
#[derive(Debug, Serialize, Deserialize)]
struct LatticeJson {
    group: GroupKind,
    n_sites: usize,
    values: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    imag_values: Option<Vec<Vec<f64>>>,
}

fn coords(c: &LatticeConnection) -> Vec<Vec<f64>> {
    c.values.iter().map(|v| v.coords().to_vec()).collect()
}

impl LatticeJson {
    fn from_real(c: &LatticeConnection) -> Self {
        Self { group: c.kind, n_sites: c.n_sites(), values: coords(c), imag_values: None }
    }

    fn from_complex(c: &ComplexLatticeConnection) -> Self {
        Self { imag_values: Some(coords(&c.imag_part)), ..Self::from_real(&c.real_part) }
    }

    fn to_string(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }

    fn into_config(self) -> Result<LatticeConfig> {
        let build = |rows: &[Vec<f64>]| -> Result<LatticeConnection> {
            if rows.len() != self.n_sites {
                return Err(invalid(format!("n_sites = {} but {} rows given", self.n_sites, rows.len())));
            }
            let vals = rows.iter().map(|r| Av::new(self.group, r)).collect::<Result<Vec<_>>>()?;
            LatticeConnection::new(self.group, vals)
        };
        let real = build(&self.values)?;
        Ok(match &self.imag_values {
            None => LatticeConfig::Real(real),
            Some(im) => LatticeConfig::Complex(ComplexLatticeConnection::new(real, build(im)?)?),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HolonomyMethod {
    /// Ordered product of link exponentials.
    Product,
    /// Classical Runge–Kutta on `dh/dτ = A h` with `A` piecewise constant,
    /// four steps per site.
    Rk4,
}

const RK4_SUBSTEPS: usize = 4;

fn rk4_matrix(generators: impl Iterator<Item = Mat2<f64>>, n_sites: usize) -> Mat2<f64> {
    let h = 1.0 / (n_sites * RK4_SUBSTEPS) as f64;
    let mut y = Mat2::identity();
    for a in generators {
        for _ in 0..RK4_SUBSTEPS {
            let k1 = a * y;
            let k2 = a * (y + k1.scale_re(h / 2.0));
            let k3 = a * (y + k2.scale_re(h / 2.0));
            let k4 = a * (y + k3.scale_re(h));
            y = y + (k1 + k2.scale_re(2.0) + k3.scale_re(2.0) + k4).scale_re(h / 6.0);
        }
    }
    y
}

fn embed(kind: GroupKind, a: &Av, p: &Av) -> Mat2<f64> {
    match kind {
        // i·a − p on the (0,0) entry; the rest of the 2×2 is unused
        GroupKind::U1 => Mat2::diag(Complex64::new(-p.coord(0), a.coord(0)), Complex64::new(0.0, 0.0)),
        GroupKind::Su2 => a.to_su2_matrix() + p.to_su2_matrix().scale(Complex64::new(0.0, 1.0)),
    }
}

/// `h(A) = U_{N−1} ⋯ U_0` (product) or the RK4 solution of the same ODE.
pub fn holonomy(conn: &LatticeConnection, method: HolonomyMethod) -> GroupElement<f64> {
    match method {
        HolonomyMethod::Product => ordered_product(conn.kind, conn.links()),
        HolonomyMethod::Rk4 => {
            let zero = Av::zero(conn.kind);
            let y = rk4_matrix(conn.values.iter().map(|a| embed(conn.kind, a, &zero)), conn.n_sites());
            match conn.kind {
                GroupKind::U1 => GroupElement::U1(y.m[0][0]),
                GroupKind::Su2 => GroupElement::Su2(y),
            }
        }
    }
}

/// Complex holonomy `h_C(Z)` in K_C.
pub fn holonomy_complex(conn: &ComplexLatticeConnection, method: HolonomyMethod) -> ComplexGroupElement<f64> {
    let kind = conn.kind();
    match method {
        HolonomyMethod::Product => ordered_product_complex(kind, conn.links()),
        HolonomyMethod::Rk4 => {
            let gens = conn.real_part.values.iter().zip(&conn.imag_part.values).map(|(a, p)| embed(kind, a, p));
            let y = rk4_matrix(gens, conn.n_sites());
            match kind {
                GroupKind::U1 => ComplexGroupElement::U1(y.m[0][0]),
                GroupKind::Su2 => ComplexGroupElement::Su2(y),
            }
        }
    }
}

fn normal(var: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, var.sqrt()).map_err(|e| invalid(e.to_string()))
}

fn sample_values<R: Rng + ?Sized>(kind: GroupKind, n: usize, dist: &Normal<f64>, rng: &mut R) -> Vec<Av> {
    (0..n)
        .map(|_| {
            let mut c = [0.0; 3];
            for cj in c.iter_mut().take(kind.dim()) {
                *cj = dist.sample(rng);
            }
            Av::new(kind, &c[..kind.dim()]).expect("finite")
        })
        .collect()
}

/// Draw from the lattice Gaussian `P_s`: every coordinate of every `A_k`
/// is `N(0, sN)`, so the density is proportional to `e^{−‖A‖²/2s}`.
pub fn sample_connection<R: Rng + ?Sized>(kind: GroupKind, n_sites: usize, s: f64, rng: &mut R) -> Result<LatticeConnection> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(invalid(format!("s must be positive, got {s}")));
    }
    if n_sites < 2 {
        return Err(invalid(format!("lattice needs at least 2 sites, got {n_sites}")));
    }
    let dist = normal(s * n_sites as f64)?;
    LatticeConnection::new(kind, sample_values(kind, n_sites, &dist, rng))
}

/// Draw from the lattice `M_{s,ħ}`: real parts `N(0, rN/2)`, imaginary
/// parts `N(0, ħN/2)`, `r = 2s − ħ`.
pub fn sample_complex_connection<R: Rng + ?Sized>(
    kind: GroupKind,
    n_sites: usize,
    s: f64,
    hbar: f64,
    rng: &mut R,
) -> Result<ComplexLatticeConnection> {
    let p = crate::euclid::HeatParams::new(s, hbar)?;
    if n_sites < 2 {
        return Err(invalid(format!("lattice needs at least 2 sites, got {n_sites}")));
    }
    let n = n_sites as f64;
    let re = sample_values(kind, n_sites, &normal(p.r() * n / 2.0)?, rng);
    let im = sample_values(kind, n_sites, &normal(hbar * n / 2.0)?, rng);
    ComplexLatticeConnection::new(LatticeConnection::new(kind, re)?, LatticeConnection::new(kind, im)?)
}

/// Monte Carlo estimate of `E_{A∼P_s}[χ_λ(h(A))]`. The continuum target
/// is [`pushforward_target`].
pub fn pushforward_moment(
    kind: GroupKind,
    label: i64,
    s: f64,
    n_sites: usize,
    n_samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    validate_label(kind, label)?;
    if !(s > 0.0) || n_sites < 2 {
        return Err(invalid("pushforward needs s > 0 and N >= 2"));
    }
    MonteCarlo::new(n_samples, seed).estimate_scalar(|rng| {
        let a = sample_connection(kind, n_sites, s, rng).expect("validated");
        character(kind, label, &holonomy(&a, HolonomyMethod::Product).complexify())
    })
}

/// `∫_K χ_λ ρ_s dx = d_λ e^{−s c_λ/2}`.
pub fn pushforward_target(kind: GroupKind, label: i64, s: f64) -> Result<f64> {
    heat_moment(kind, label, s)
}

#[cfg(test)]
mod tests;
