//! Free classical motion on lattice connections and its reduction to
//! geodesics on K.

use crate::error::{invalid, Error, Result};
use crate::group::{exp_map, AlgebraVector, GroupElement, GroupKind};
use crate::lattice::{gauge_transform_algebra, holonomy, HolonomyMethod, LatticeConnection, LatticeGaugeMap};
use crate::report::ReportRow;

/// Step for the logarithmic derivative that defines the effective
/// generator of the holonomy path.
pub const GEODESIC_EPS: f64 = 1e-5;

/// Distance from the branch cut below which holonomy logarithms are refused.
const LOG_MARGIN: f64 = 1e-6;

/// A point `(A, P)` of the lattice phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub a: LatticeConnection,
    pub p: LatticeConnection,
}

impl PhasePoint {
    pub fn new(a: LatticeConnection, p: LatticeConnection) -> Result<Self> {
        if a.kind() != p.kind() {
            return Err(Error::GroupMismatch("position and momentum on different groups".into()));
        }
        if a.n_sites() != p.n_sites() {
            return Err(invalid(format!("position has {} sites, momentum {}", a.n_sites(), p.n_sites())));
        }
        Ok(Self { a, p })
    }

    pub fn kind(&self) -> GroupKind {
        self.a.kind()
    }

    pub fn n_sites(&self) -> usize {
        self.a.n_sites()
    }
}

/// `½‖P‖² = ½ (1/N) Σ |P_k|²`.
pub fn energy(pt: &PhasePoint) -> f64 {
    0.5 * pt.p.norm_sqr()
}

/// `(A + tP, P)`.
pub fn evolve_free(pt: &PhasePoint, t: f64) -> PhasePoint {
    PhasePoint { a: pt.a.add_scaled(&pt.p, t).expect("same shape"), p: pt.p.clone() }
}

/// Gauge action on phase points: the algebra-level action on `A` and
/// `P_k ↦ Ad(g_k) P_k`.
pub fn gauge_act(pt: &PhasePoint, gauge: &LatticeGaugeMap) -> Result<PhasePoint> {
    if gauge.n_sites() != pt.n_sites() || gauge.kind() != pt.kind() {
        return Err(invalid("gauge map does not match the phase point"));
    }
    let a = gauge_transform_algebra(&pt.a, gauge)?;
    let p = LatticeConnection::new(
        pt.kind(),
        (0..pt.n_sites()).map(|k| gauge.element(k).adjoint_action(&pt.p.value(k))).collect(),
    )?;
    Ok(PhasePoint { a, p })
}

/// Partial holonomies `T_k = U_{k−1} ⋯ U_0`, `T_0 = e`.
fn partial_holonomies(a: &LatticeConnection) -> Vec<GroupElement<f64>> {
    let links = a.links();
    let mut t = Vec::with_capacity(links.len());
    let mut acc = GroupElement::identity(a.kind());
    for u in &links {
        t.push(acc);
        acc = (*u * acc).reproject();
    }
    t
}

/// `(A, P)` with `P_k = Ad(T_k) X0`: momentum transported along `A`.
pub fn make_constrained_pair(a: &LatticeConnection, x0: &AlgebraVector<f64>) -> Result<PhasePoint> {
    if x0.kind() != a.kind() {
        return Err(Error::GroupMismatch("momentum seed and connection on different groups".into()));
    }
    let p = LatticeConnection::new(a.kind(), partial_holonomies(a).iter().map(|t| t.adjoint_action(x0)).collect())?;
    PhasePoint::new(a.clone(), p)
}

/// Largest `|N (P_{k+1} − P_k) − [A_k, P_k]|` along the open chain
/// `k = 0..N−2`: the defect of `P` from solving `dP/dτ = [A, P]`.
pub fn covariant_residual(pt: &PhasePoint) -> f64 {
    let n = pt.n_sites();
    let nf = n as f64;
    (0..n - 1)
        .map(|k| {
            let (pk, pk1, ak) = (pt.p.value(k), pt.p.value(k + 1), pt.a.value(k));
            ((pk1 - pk).scale(nf) - ak.bracket(&pk)).norm()
        })
        .fold(0.0, f64::max)
}

/// Deviation of the holonomy path from a one-parameter geodesic.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicComparison {
    pub n_sites: usize,
    /// `log(h(A)^{−1} h(A + εP)) / ε`.
    pub generator: AlgebraVector<f64>,
    pub times: Vec<f64>,
    /// `distance(h(A + tP), h(A) exp(t X_eff))` per time.
    pub deviations: Vec<f64>,
}

impl GeodesicComparison {
    pub fn max_deviation(&self) -> f64 {
        self.deviations.iter().copied().fold(0.0, f64::max)
    }

    pub fn row(&self, quantity: &str, tolerance: f64) -> ReportRow {
        ReportRow::real(quantity, self.max_deviation(), 0.0, tolerance).lattice(self.n_sites)
    }
}

pub fn geodesic_compare(pt: &PhasePoint, times: &[f64]) -> Result<GeodesicComparison> {
    if times.is_empty() {
        return Err(invalid("no times given"));
    }
    let h0 = holonomy(&pt.a, HolonomyMethod::Product);
    let h_eps = holonomy(&evolve_free(pt, GEODESIC_EPS).a, HolonomyMethod::Product);
    let generator = (h0.inverse() * h_eps).log_checked(LOG_MARGIN)?.scale(1.0 / GEODESIC_EPS);
    let deviations = times
        .iter()
        .map(|&t| {
            let ht = holonomy(&evolve_free(pt, t).a, HolonomyMethod::Product);
            ht.distance(&(h0 * exp_map(&generator.scale(t))))
        })
        .collect();
    Ok(GeodesicComparison { n_sites: pt.n_sites(), generator, times: times.to_vec(), deviations })
}

/// `n` equally spaced times on `[0, t_max]`, endpoints included.
pub fn time_grid(t_max: f64, n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|i| t_max * i as f64 / (n - 1) as f64).collect()
}
