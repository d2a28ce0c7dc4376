use nalgebra::DMatrix;
use num_complex::Complex64;

use super::validate_label;
use crate::error::Result;
use crate::group::ComplexGroupElement;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Matrix of the irreducible representation with label `label`.
///
/// SU(2): the action on degree-`n` homogeneous polynomials by
/// `p(x, y) ↦ p((x, y)·g)` in the basis `x^{n−j} y^j`, a homomorphism of
/// SL(2,C) with trace `χ_n`. U(1): the 1×1 matrix `z^k`.
pub fn rep_matrix(label: i64, g: &ComplexGroupElement<f64>) -> Result<DMatrix<Complex64>> {
    validate_label(g.kind(), label)?;
    Ok(match g {
        ComplexGroupElement::U1(z) => DMatrix::from_element(1, 1, z.powi(label as i32)),
        ComplexGroupElement::Su2(m) => {
            let n = label as usize;
            let (a, b, c, d) = (m.m[0][0], m.m[0][1], m.m[1][0], m.m[1][1]);
            // x ↦ a x + c y, y ↦ b x + d y
            DMatrix::from_fn(n + 1, n + 1, |i, j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for p in 0..=(n - j).min(i) {
                    let q = i - p;
                    if q > j {
                        continue;
                    }
                    let left = a.powi((n - j - p) as i32) * c.powi(p as i32) * binomial(n - j, p);
                    let right = b.powi((j - q) as i32) * d.powi(q as i32) * binomial(j, q);
                    acc += left * right;
                }
                acc
            })
        }
    })
}
