//! Based gauge maps acting on links and on site values.

use rand::Rng;

use super::{LatticeConnection, HolonomyMethod};
use crate::error::{invalid, Error, Result};
use crate::group::{exp_map, ordered_product, sample_haar, AlgebraVector, GroupElement, GroupKind};
use crate::mc::McRng;

type G = GroupElement<f64>;

/// Tolerance for `g_0 = e`.
const BASED_TOL: f64 = 1e-14;

/// `g_0, …, g_{N−1}` with `g_0 = e`; `g_N` is identified with `g_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeGaugeMap {
    kind: GroupKind,
    elements: Vec<G>,
}

impl LatticeGaugeMap {
    pub fn new(kind: GroupKind, elements: Vec<G>) -> Result<Self> {
        let first = elements.first().ok_or_else(|| invalid("empty gauge map"))?;
        if elements.iter().any(|g| g.kind() != kind) {
            return Err(Error::GroupMismatch(format!("gauge map on {kind} has foreign elements")));
        }
        let d = first.distance(&G::identity(kind));
        if d > BASED_TOL {
            return Err(Error::NotBased(d));
        }
        let mut elements = elements;
        elements[0] = G::identity(kind);
        Ok(Self { kind, elements })
    }

    pub fn identity(kind: GroupKind, n_sites: usize) -> Self {
        Self { kind, elements: vec![G::identity(kind); n_sites] }
    }

    /// Haar-random values at every site but the base point.
    pub fn random(kind: GroupKind, n_sites: usize, rng: &mut McRng) -> Self {
        let mut elements: Vec<G> = (0..n_sites).map(|_| sample_haar(kind, rng)).collect();
        elements[0] = G::identity(kind);
        Self { kind, elements }
    }

    /// `g(τ) = exp(Σ_m c_m sin 2πmτ)` sampled at `τ = k/N`, coefficients
    /// uniform in `[−amplitude, amplitude]`; based because `sin 0 = 0`.
    pub fn smooth_random<R: Rng + ?Sized>(kind: GroupKind, n_sites: usize, modes: usize, amplitude: f64, rng: &mut R) -> Self {
        let coef: Vec<[f64; 3]> =
            (1..=modes).map(|_| [(); 3].map(|_| amplitude * (2.0 * rng.random::<f64>() - 1.0))).collect();
        let elements = (0..n_sites)
            .map(|k| {
                let t = k as f64 / n_sites as f64;
                let mut c = [0.0; 3];
                for (m, cm) in coef.iter().enumerate() {
                    let s = (std::f64::consts::TAU * (m + 1) as f64 * t).sin();
                    for j in 0..3 {
                        c[j] += cm[j] * s;
                    }
                }
                exp_map(&AlgebraVector::new(kind, &c[..kind.dim()]).expect("finite"))
            })
            .collect();
        Self::new(kind, elements).expect("based by construction")
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n_sites(&self) -> usize {
        self.elements.len()
    }

    /// `g_k`, with `g_N = g_0 = e`.
    pub fn element(&self, k: usize) -> G {
        self.elements[k % self.elements.len()]
    }

    pub fn elements(&self) -> &[G] {
        &self.elements
    }

    fn check(&self, kind: GroupKind, n: usize) -> Result<()> {
        if self.kind != kind || self.n_sites() != n {
            return Err(Error::GroupMismatch(format!(
                "gauge map ({}, {} sites) vs lattice ({kind}, {n} sites)",
                self.kind,
                self.n_sites()
            )));
        }
        Ok(())
    }
}

/// Group-valued links `U_0, …, U_{N−1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkConfiguration {
    kind: GroupKind,
    links: Vec<G>,
}

impl LinkConfiguration {
    pub fn new(kind: GroupKind, links: Vec<G>) -> Result<Self> {
        if links.len() < 2 {
            return Err(invalid("link configuration needs at least 2 links"));
        }
        if links.iter().any(|g| g.kind() != kind) {
            return Err(Error::GroupMismatch(format!("link configuration on {kind} has foreign links")));
        }
        Ok(Self { kind, links })
    }

    pub fn from_connection(conn: &LatticeConnection) -> Self {
        Self { kind: conn.kind(), links: conn.links() }
    }

    /// Haar-random links.
    pub fn random(kind: GroupKind, n_sites: usize, rng: &mut McRng) -> Self {
        Self { kind, links: (0..n_sites).map(|_| sample_haar(kind, rng)).collect() }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n_sites(&self) -> usize {
        self.links.len()
    }

    pub fn links(&self) -> &[G] {
        &self.links
    }

    pub fn holonomy(&self) -> G {
        ordered_product(self.kind, self.links.iter().copied())
    }

    /// Largest `d(U_k, V_k)`.
    pub fn max_distance(&self, other: &Self) -> f64 {
        self.links.iter().zip(&other.links).map(|(a, b)| a.distance(b)).fold(0.0, f64::max)
    }
}

/// Link-level action `U_k ↦ g_{k+1} U_k g_k^{−1}`; the holonomy becomes
/// `g_N h g_0^{−1} = h`.
pub fn gauge_transform_links(links: &LinkConfiguration, gauge: &LatticeGaugeMap) -> Result<LinkConfiguration> {
    gauge.check(links.kind, links.n_sites())?;
    let out = links
        .links
        .iter()
        .enumerate()
        .map(|(k, u)| (gauge.element(k + 1) * *u * gauge.element(k).inverse()).reproject())
        .collect();
    Ok(LinkConfiguration { kind: links.kind, links: out })
}

/// Site-level action `A_k ↦ g_k A_k g_k^{−1} + N log(g_{k+1} g_k^{−1})`,
/// the finite-difference form of `gAg^{−1} + (dg/dτ) g^{−1}`. Holonomy is
/// preserved up to `O(1/N)`.
///
/// Fails near the logarithm's branch cut, i.e. when neighbouring gauge
/// values are far apart (a gauge map that is not smooth on the lattice).
pub fn gauge_transform_algebra(conn: &LatticeConnection, gauge: &LatticeGaugeMap) -> Result<LatticeConnection> {
    gauge.check(conn.kind(), conn.n_sites())?;
    let n = conn.n_sites() as f64;
    let values = conn
        .values()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            let gk = gauge.element(k);
            let step = (gauge.element(k + 1) * gk.inverse()).log_checked(1e-6)?;
            Ok(gk.adjoint_action(a) + step.scale(n))
        })
        .collect::<Result<Vec<_>>>()?;
    LatticeConnection::new(conn.kind(), values)
}

/// For link configurations `u`, `v` with equal holonomy, the based gauge
/// map with `v = g·u`: `g_0 = e`, `g_{k+1} = v_k g_k u_k^{−1}`. Returns the
/// map and the closure defect `d(g_N, e)`, which vanishes exactly when the
/// holonomies agree.
pub fn classify_pair(u: &LinkConfiguration, v: &LinkConfiguration) -> Result<(LatticeGaugeMap, f64)> {
    if u.kind != v.kind || u.n_sites() != v.n_sites() {
        return Err(Error::GroupMismatch("link configurations differ in group or size".into()));
    }
    let mut g = vec![G::identity(u.kind)];
    for k in 0..u.n_sites() {
        let next = (v.links[k] * g[k] * u.links[k].inverse()).reproject();
        g.push(next);
    }
    let g_n = g.pop().expect("n_sites + 1 entries");
    let defect = g_n.distance(&G::identity(u.kind));
    Ok((LatticeGaugeMap { kind: u.kind, elements: g }, defect))
}

/// Holonomy of a connection after the algebra-level action, minus the
/// original: `d(h(g·A), h(A))`.
pub fn algebra_level_drift(conn: &LatticeConnection, gauge: &LatticeGaugeMap) -> Result<f64> {
    let moved = gauge_transform_algebra(conn, gauge)?;
    Ok(super::holonomy(&moved, HolonomyMethod::Product).distance(&super::holonomy(conn, HolonomyMethod::Product)))
}
