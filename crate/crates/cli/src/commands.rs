//! One function per subcommand: validate, run the check, collect rows.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ymcyl::classical::{covariant_residual, geodesic_compare, make_constrained_pair, time_grid, PhasePoint};
use ymcyl::coherent::{
    coherent_overlap, resolution_identity_check, CoherentLabel, Scale, DEFAULT_OVERLAP_LEVEL,
};
use ymcyl::euclid::{s_transform_gram_check, HeatParams};
use ymcyl::group::{from_polar, AlgebraVector, ComplexGroupElement, GroupKind};
use ymcyl::lattice::{ComplexLatticeConnection, LatticeConfig, LatticeConnection};
use ymcyl::reduction::{
    gram_isometry_check, laplacian_reduction_check, pushforward_check, radial_laplacian_check,
    semigroup_reduction_check, submersion_check, DEFAULT_FD_STEP,
};
use ymcyl::report::{Report, ReportRow};
use ymcyl::spectral::CharacterSeries;

use crate::config::{ConfigError, Params};

/// Allowed relative deviation of the Euclidean Gram matrices.
pub const UNITARITY_TOL: f64 = 1e-7;

/// Allowed agreement between the two overlap routes.
pub const OVERLAP_TOL: f64 = 1e-7;

/// Geodesic deviation allowed per `1/N` for SU(2).
pub const GEODESIC_CONSTANT: f64 = 2.0;

pub const COMMANDS: [&str; 10] = [
    "pushforward",
    "gram",
    "laplacian-check",
    "semigroup-check",
    "euclid-unitarity",
    "coherent-overlap",
    "resolution-check",
    "geodesic",
    "radial-laplacian",
    "submersion-check",
];

/// Failure while running a validated experiment.
pub enum RunError {
    Config(ConfigError),
    Numerical(String),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<ymcyl::Error> for RunError {
    fn from(e: ymcyl::Error) -> Self {
        match e {
            ymcyl::Error::InvalidParameter(_) | ymcyl::Error::GroupMismatch(_) | ymcyl::Error::NotBased(_) => {
                RunError::Config(ConfigError(e.to_string()))
            }
            other => RunError::Numerical(other.to_string()),
        }
    }
}

type Run = Result<Report, RunError>;

fn cfg(msg: impl Into<String>) -> RunError {
    RunError::Config(ConfigError(msg.into()))
}

struct Ctx<'a> {
    p: &'a Params,
    report: Report,
}

impl<'a> Ctx<'a> {
    fn new(command: &str, p: &'a Params) -> Self {
        Self { p, report: Report::new(command).param("seed", p.seed()) }
    }

    fn echo(&mut self, key: &str, value: impl ToString) {
        self.report.params.insert(key.to_string(), value.to_string());
    }

    /// Group and site count of `--lattice`, which then serve as defaults.
    /// Unreadable files are reported when the connection is loaded.
    fn file_shape(&self) -> Option<(GroupKind, usize)> {
        let text = std::fs::read_to_string(self.p.lattice.as_ref()?).ok()?;
        LatticeConfig::from_json(&text).ok().map(|c| (c.kind(), c.n_sites()))
    }

    fn group(&mut self, default: GroupKind) -> GroupKind {
        let g = self.p.group.or(self.file_shape().map(|s| s.0)).unwrap_or(default);
        self.echo("group", g);
        g
    }

    fn positive(&mut self, key: &str, v: Option<f64>, default: f64) -> Result<f64, RunError> {
        let v = v.unwrap_or(default);
        if !(v > 0.0 && v.is_finite()) {
            return Err(cfg(format!("{key} must be positive, got {v}")));
        }
        self.echo(key, v);
        Ok(v)
    }

    fn count(&mut self, key: &str, v: Option<usize>, default: usize, min: usize) -> Result<usize, RunError> {
        let v = v.unwrap_or(default);
        if v < min {
            return Err(cfg(format!("{key} must be at least {min}, got {v}")));
        }
        self.echo(key, v);
        Ok(v)
    }

    fn links(&mut self, default: usize) -> Result<usize, RunError> {
        let default = self.file_shape().map_or(default, |s| s.1);
        self.count("links", self.p.links, default, 2)
    }

    fn samples(&mut self) -> Result<usize, RunError> {
        self.count("samples", self.p.samples, 100_000, 1)
    }

    fn label(&mut self, kind: GroupKind, default: i64) -> Result<i64, RunError> {
        let k = self.p.k.unwrap_or(default);
        if kind == GroupKind::Su2 && k < 0 {
            return Err(cfg(format!("SU(2) labels are non-negative, got {k}")));
        }
        self.echo("k", k);
        Ok(k)
    }

    fn heat(&mut self, s_default: f64, hbar_default: f64) -> Result<(f64, f64), RunError> {
        let s = self.positive("s", self.p.s, s_default)?;
        let hbar = self.positive("hbar", self.p.hbar, hbar_default)?;
        HeatParams::new(s, hbar)?;
        Ok((s, hbar))
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.p.seed());
        rng.set_stream(stream);
        rng
    }

    fn lattice_file(&mut self) -> Result<Option<LatticeConfig>, RunError> {
        let Some(path) = &self.p.lattice else { return Ok(None) };
        let text = std::fs::read_to_string(path).map_err(|e| cfg(format!("{}: {e}", path.display())))?;
        self.echo("lattice", path.display());
        Ok(Some(LatticeConfig::from_json(&text)?))
    }

    /// Connection from `--lattice`, or a random smooth one from the seed.
    fn real_connection(&mut self, kind: GroupKind, n: usize, stream: u64) -> Result<LatticeConnection, RunError> {
        match self.lattice_file()? {
            Some(LatticeConfig::Real(c)) => check_shape(c, kind, n),
            Some(LatticeConfig::Complex(_)) => Err(cfg("this command needs a real connection")),
            None => self.smooth(kind, n, stream),
        }
    }

    fn smooth(&mut self, kind: GroupKind, n: usize, stream: u64) -> Result<LatticeConnection, RunError> {
        let modes = self.count("modes", self.p.modes, 3, 0)?;
        let amplitude = self.p.amplitude.unwrap_or(1.0);
        if !(amplitude >= 0.0 && amplitude.is_finite()) {
            return Err(cfg(format!("amplitude must be non-negative, got {amplitude}")));
        }
        self.echo("amplitude", amplitude);
        Ok(LatticeConnection::smooth_random(kind, n, modes, amplitude, &mut self.rng(stream))?)
    }

    fn finish(self) -> Run {
        Ok(self.report)
    }
}

fn check_shape(c: LatticeConnection, kind: GroupKind, n: usize) -> Result<LatticeConnection, RunError> {
    if c.kind() != kind || c.n_sites() != n {
        return Err(cfg(format!(
            "lattice file holds a {} connection on {} sites, expected {kind} on {n}",
            c.kind(),
            c.n_sites()
        )));
    }
    Ok(c)
}

fn vector(kind: GroupKind, v: &[f64], what: &str) -> Result<AlgebraVector<f64>, RunError> {
    AlgebraVector::new(kind, v).map_err(|_| cfg(format!("{what} needs {} components for {kind}, got {}", kind.dim(), v.len())))
}

pub fn run(command: &str, p: &Params) -> Run {
    match command {
        "pushforward" => pushforward(p),
        "gram" => gram(p),
        "laplacian-check" => laplacian(p),
        "semigroup-check" => semigroup(p),
        "euclid-unitarity" => euclid_unitarity(p),
        "coherent-overlap" => overlap(p),
        "resolution-check" => resolution(p),
        "geodesic" => geodesic(p),
        "radial-laplacian" => radial(p),
        "submersion-check" => submersion(p),
        other => Err(cfg(format!("unknown command '{other}'; expected one of {}", COMMANDS.join(", ")))),
    }
}

fn pushforward(p: &Params) -> Run {
    let mut c = Ctx::new("pushforward", p);
    let kind = c.group(GroupKind::U1);
    let k = c.label(kind, 1)?;
    let s = c.positive("s", p.s, 1.0)?;
    let n = c.links(64)?;
    let samples = c.samples()?;
    c.report.rows.extend(pushforward_check(kind, k, s, n, samples, p.seed())?.rows());
    c.finish()
}

fn gram(p: &Params) -> Run {
    let mut c = Ctx::new("gram", p);
    let kind = c.group(GroupKind::Su2);
    let n_max = c.count("n_max", p.n_max, 2, 0)?;
    let (s, hbar) = c.heat(2.0, 0.5)?;
    let n = c.links(32)?;
    let samples = c.samples()?;
    c.report.rows.extend(gram_isometry_check(kind, n_max, s, hbar, n, samples, p.seed())?.rows());
    c.finish()
}

fn laplacian(p: &Params) -> Run {
    let mut c = Ctx::new("laplacian-check", p);
    let kind = c.group(GroupKind::Su2);
    let k = c.label(kind, 1)?;
    let n = c.links(32)?;
    let step = c.positive("fd_step", p.fd_step, DEFAULT_FD_STEP)?;
    let conn = c.real_connection(kind, n, 0)?;
    let phi = CharacterSeries::character(kind, k)?;
    let r = laplacian_reduction_check(&phi, &conn, step)?;
    c.report.push(r.row());
    c.finish()
}

fn semigroup(p: &Params) -> Run {
    let mut c = Ctx::new("semigroup-check", p);
    let kind = c.group(GroupKind::Su2);
    let k = c.label(kind, 1)?;
    let hbar = c.positive("hbar", p.hbar, 0.5)?;
    let n = c.links(32)?;
    let samples = c.samples()?;
    let base = match c.lattice_file()? {
        Some(LatticeConfig::Complex(z)) => {
            check_shape(z.real_part().clone(), kind, n)?;
            z
        }
        Some(LatticeConfig::Real(a)) => ComplexLatticeConnection::from_real(check_shape(a, kind, n)?),
        None => {
            let imag_scale = p.imag_scale.unwrap_or(0.2);
            c.echo("imag_scale", imag_scale);
            let re = c.smooth(kind, n, 0)?;
            let im = c.smooth(kind, n, 1)?.scale(imag_scale);
            ComplexLatticeConnection::new(re, im)?
        }
    };
    let phi = CharacterSeries::character(kind, k)?;
    c.report.rows.extend(semigroup_reduction_check(&phi, &base, hbar, samples, p.seed())?.rows());
    c.finish()
}

fn euclid_unitarity(p: &Params) -> Run {
    let mut c = Ctx::new("euclid-unitarity", p);
    let (s, hbar) = c.heat(1.0, 0.5)?;
    let degree = c.count("degree", p.degree, 8, 0)?;
    let dim = c.count("dim", p.dim, 1, 1)?;
    let g = s_transform_gram_check(&HeatParams::new(s, hbar)?, degree, dim)?;
    for (a, ia) in g.basis.iter().enumerate() {
        for (b, ib) in g.basis.iter().enumerate() {
            let scale = (g.real[(a, a)] * g.real[(b, b)]).sqrt();
            let name = |i: &Vec<usize>| i.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(".");
            c.report.push(
                ReportRow::deterministic(
                    format!("gram[{};{}]", name(ia), name(ib)),
                    g.complex[(a, b)],
                    Complex64::new(g.real[(a, b)], 0.0),
                    UNITARITY_TOL * scale,
                )
                .heat(Some(s), Some(hbar)),
            );
        }
    }
    c.report.push(ReportRow::real("max_rel_deviation", g.max_rel_deviation, 0.0, UNITARITY_TOL).heat(Some(s), Some(hbar)));
    c.finish()
}

fn overlap(p: &Params) -> Run {
    let mut c = Ctx::new("coherent-overlap", p);
    let kind = c.group(GroupKind::Su2);
    let hbar = c.positive("hbar", p.hbar, 1.0)?;
    let scale = match p.s {
        Some(s) => {
            let s = c.positive("s", Some(s), s)?;
            Scale::Finite(s)
        }
        None => {
            c.echo("s", "inf");
            Scale::Infinite
        }
    };
    let level = c.count("level", p.level, DEFAULT_OVERLAP_LEVEL, 3)?;
    let mut cases: Vec<(ComplexGroupElement<f64>, CharacterSeries<f64>)> = Vec::new();
    if p.polar_x.is_some() || p.polar_y.is_some() {
        let zero = vec![0.0; kind.dim()];
        let x = vector(kind, p.polar_x.as_deref().unwrap_or(&zero), "polar_x")?;
        let y = vector(kind, p.polar_y.as_deref().unwrap_or(&zero), "polar_y")?;
        c.echo("polar_x", format!("{:?}", x.coords()));
        c.echo("polar_y", format!("{:?}", y.coords()));
        let k = c.label(kind, 1)?;
        cases.push((from_polar(&x, &y), CharacterSeries::character(kind, k)?));
    } else {
        let n = c.count("cases", p.cases, 20, 1)?;
        let mut rng = c.rng(0);
        let lo = if kind == GroupKind::U1 { -3 } else { 0 };
        for _ in 0..n {
            let x = random_vector(kind, &mut rng, 2.0);
            let y = random_vector(kind, &mut rng, 0.5);
            let terms: Vec<(i64, Complex64)> = (0..3)
                .map(|_| (rng.random_range(lo..=3), Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)))
                .collect();
            cases.push((from_polar(&x, &y), CharacterSeries::from_terms(kind, terms)?));
        }
    }
    for (i, (g, phi)) in cases.iter().enumerate() {
        let o = coherent_overlap(&CoherentLabel::new(*g, hbar, scale)?, phi, level)?;
        let s = match scale {
            Scale::Finite(s) => Some(s),
            Scale::Infinite => None,
        };
        c.report.push(ReportRow::deterministic(format!("overlap[{i}]"), o.quadrature, o.analytic, OVERLAP_TOL).heat(s, Some(hbar)));
    }
    c.finish()
}

fn random_vector(kind: GroupKind, rng: &mut ChaCha8Rng, scale: f64) -> AlgebraVector<f64> {
    let v: Vec<f64> = (0..kind.dim()).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect();
    AlgebraVector::new(kind, &v).expect("right length")
}

fn resolution(p: &Params) -> Run {
    let mut c = Ctx::new("resolution-check", p);
    let kind = c.group(GroupKind::Su2);
    let n_max = c.count("n_max", p.n_max, 2, 0)?;
    let hbar = c.positive("hbar", p.hbar, 0.5)?;
    let s_values = p.s_values.clone().unwrap_or_else(|| vec![4.0 * hbar, 16.0 * hbar, 64.0 * hbar]);
    if s_values.is_empty() {
        return Err(cfg("s_values must not be empty"));
    }
    for &s in &s_values {
        HeatParams::new(s, hbar)?;
    }
    c.echo("s_values", format!("{s_values:?}"));
    let n = c.links(32)?;
    let samples = c.samples()?;
    c.echo("limit", p.limit);
    let r = resolution_identity_check(kind, n_max, hbar, &s_values, n, samples, p.seed())?;
    c.report.rows.extend(r.rows(p.limit));
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    c.report.push(ReportRow::real("targets_monotone", flag(r.targets_monotone()), 1.0, 0.0));
    c.report.push(ReportRow::real("estimates_monotone", flag(r.estimates_monotone(3.0)), 1.0, 0.0));
    c.finish()
}

fn geodesic(p: &Params) -> Run {
    let mut c = Ctx::new("geodesic", p);
    let kind = c.group(GroupKind::Su2);
    let n = c.links(64)?;
    let t_max = c.positive("t_max", p.t_max, 2.0)?;
    let times = c.count("times", p.times, 21, 2)?;
    let a = c.real_connection(kind, n, 0)?;
    let grid = time_grid(t_max, times);
    c.echo("unconstrained", p.unconstrained);
    if p.unconstrained {
        let mom = c.smooth(kind, n, 1)?;
        let g = geodesic_compare(&PhasePoint::new(a, mom)?, &grid)?;
        // negative control: reported, not judged
        c.report.push(g.row("unconstrained_max_deviation", f64::INFINITY));
    } else {
        let default = match kind {
            GroupKind::U1 => vec![1.0],
            GroupKind::Su2 => vec![0.6, 0.0, 0.8],
        };
        let x0 = vector(kind, p.x0.as_deref().unwrap_or(&default), "x0")?;
        c.echo("x0", format!("{:?}", x0.coords()));
        let pt = make_constrained_pair(&a, &x0)?;
        let tol = match kind {
            GroupKind::U1 => 1e-10,
            GroupKind::Su2 => GEODESIC_CONSTANT / n as f64,
        };
        c.report.push(geodesic_compare(&pt, &grid)?.row("geodesic_max_deviation", tol));
        c.report.push(ReportRow::real("covariant_residual", covariant_residual(&pt), 0.0, f64::INFINITY).lattice(n));
    }
    c.finish()
}

fn radial(p: &Params) -> Run {
    let mut c = Ctx::new("radial-laplacian", p);
    let name = p.profile.clone().unwrap_or_else(|| "r2".into());
    let f: fn(f64) -> f64 = match name.as_str() {
        "r2" => |r| r * r,
        "log" => f64::ln,
        "const" => |_| 1.0,
        "gauss" => |r| (-r * r).exp(),
        other => return Err(cfg(format!("unknown profile '{other}'; expected r2, log, const or gauss"))),
    };
    c.echo("profile", &name);
    let radii = p.radii.clone().unwrap_or_else(|| vec![0.1, 0.5, 1.0, 2.0, 5.0]);
    c.echo("radii", format!("{radii:?}"));
    for pt in radial_laplacian_check(f, &radii)? {
        c.report.rows.extend(pt.rows());
    }
    c.finish()
}

fn submersion(p: &Params) -> Run {
    let mut c = Ctx::new("submersion-check", p);
    let kind = c.group(GroupKind::Su2);
    let n = c.links(32)?;
    let step = c.positive("fd_step", p.fd_step, DEFAULT_FD_STEP)?;
    let conn = c.real_connection(kind, n, 0)?;
    c.report.rows.extend(submersion_check(&conn, step)?.rows());
    c.finish()
}
