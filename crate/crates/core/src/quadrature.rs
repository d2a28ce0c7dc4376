//! Gauss–Legendre and Gauss–Hermite rules.
//!
//! Nodes are found by Newton iteration on the three-term recurrences, in
//! `f64`; callers cast to their scalar type.

use std::f64::consts::PI;

/// Nodes and weights on `[-1, 1]`, exact for polynomials of degree `2n − 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n−1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Physicists' Gauss–Hermite rule for `∫ f(x) e^{−x²} dx`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Hermite rule needs at least one node");
    let pim4 = PI.powf(-0.25);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..m {
        z = match i {
            0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
            1 => z - 1.14 * nf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // orthonormal Hermite recurrence
            let (mut p1, mut p2) = (pim4, 0.0);
            for j in 1..=n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / j as f64).sqrt() * p2 - ((j - 1) as f64 / j as f64).sqrt() * p3;
            }
            pp = (2.0 * nf).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 * z.abs().max(1.0) {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    // descending → ascending
    nodes.reverse();
    weights.reverse();
    (nodes, weights)
}

/// Rule for `E[f(ξ)]`, `ξ ~ N(0, 1)`.
pub fn gauss_hermite_normal(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_hermite(n);
    let s2 = 2f64.sqrt();
    let sp = PI.sqrt();
    (x.iter().map(|x| x * s2).collect(), w.iter().map(|w| w / sp).collect())
}

/// Rule for `∫ g(x) dx` when `g` is close to a Gaussian of standard
/// deviation `sigma` times a smooth factor: Gauss–Hermite nodes `σ√2 ξ`
/// with the weight function divided back out.
pub fn gauss_hermite_lebesgue(n: usize, sigma: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_hermite(n);
    let c = sigma * 2f64.sqrt();
    (x.iter().map(|x| x * c).collect(), x.iter().zip(&w).map(|(x, w)| c * w * (x * x).exp()).collect())
}

/// Equally spaced nodes on `[0, period)` with equal weights summing to one.
/// Exact for trigonometric polynomials of degree below `n`.
pub fn periodic_rule(n: usize, period: f64) -> (Vec<f64>, f64) {
    assert!(n > 0);
    let h = period / n as f64;
    ((0..n).map(|i| i as f64 * h).collect(), 1.0 / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in [1, 2, 5, 16, 33] {
            let (x, w) = gauss_legendre(n);
            for deg in 0..(2 * n) {
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg} q={q}");
            }
        }
    }

    #[test]
    fn hermite_normal_moments() {
        // E[ξ^{2k}] = (2k − 1)!!
        for n in [1, 4, 10, 64, 100] {
            let (x, w) = gauss_hermite_normal(n);
            assert!(x.windows(2).all(|p| p[0] < p[1]));
            for k in 0..n {
                let deg = 2 * k;
                if deg >= 2 * n || deg > 40 {
                    break;
                }
                let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact: f64 = (1..=k).map(|j| (2 * j - 1) as f64).product();
                assert!(((q - exact) / exact).abs() < 1e-11, "n={n} deg={deg} q={q} exact={exact}");
            }
        }
    }

    #[test]
    fn lebesgue_rule_integrates_gaussians() {
        // ∫ e^{−x²/(2·0.7²)} cos(x) dx = √(2π)·0.7·e^{−0.49/2}
        let (x, w) = gauss_hermite_lebesgue(64, 0.7);
        let q: f64 = x.iter().zip(&w).map(|(x, w)| w * (-x * x / 0.98).exp() * x.cos()).sum();
        let exact = (2.0 * PI).sqrt() * 0.7 * (-0.245f64).exp();
        assert!((q - exact).abs() < 1e-13);
    }
}
