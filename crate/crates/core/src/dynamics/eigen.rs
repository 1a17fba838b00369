//! Eigenvalues and right eigenvectors of 2×2 and 4×4 complex matrices.
//!
//! 2×2 matrices use the closed-form quadratic. 4×4 matrices go through the
//! characteristic polynomial (Faddeev–LeVerrier), Aberth simultaneous
//! iteration for its roots, Newton polishing, and inverse iteration for the
//! eigenvectors.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use crate::cmatrix::{CMatrix, C64, ONE, ZERO};
use crate::error::{LicsError, Result};

/// Relative separation below which two eigenvalues are treated as coincident.
const COINCIDENCE_TOL: f64 = 1e-8;
const ABERTH_MAX_ITER: usize = 500;

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Sorted by real part, then imaginary part.
    pub values: Vec<C64>,
    /// Column `k` is the unit-norm right eigenvector for `values[k]`.
    pub vectors: CMatrix,
    /// Set when eigenvalues coincide, so the eigenvectors may not span the space.
    pub degenerate: bool,
}

fn order(a: &C64, b: &C64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Eigenvalues only, sorted.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    Ok(eigen(m)?.values)
}

pub fn eigen(m: &CMatrix) -> Result<Eigen> {
    match m.dim() {
        2 => Ok(eigen_2x2(m)),
        4 => Ok(eigen_general(m)),
        n => Err(LicsError::Dimension {
            expected: 4,
            got: n,
        }),
    }
}

fn unit(v: Vec<C64>) -> Vec<C64> {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        return v;
    }
    v.into_iter().map(|z| z / n).collect()
}

fn coincident(values: &[C64], scale: f64) -> bool {
    let tol = COINCIDENCE_TOL * scale.max(f64::MIN_POSITIVE);
    values
        .iter()
        .enumerate()
        .any(|(i, a)| values[i + 1..].iter().any(|b| (a - b).norm() <= tol))
}

fn assemble(mut pairs: Vec<(C64, Vec<C64>)>, scale: f64) -> Eigen {
    pairs.sort_by(|a, b| order(&a.0, &b.0));
    let n = pairs.len();
    let mut vectors = CMatrix::zeros(n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[i];
        }
    }
    let values: Vec<C64> = pairs.into_iter().map(|(l, _)| l).collect();
    let degenerate = coincident(&values, scale);
    Eigen {
        values,
        vectors,
        degenerate,
    }
}

fn eigen_2x2(m: &CMatrix) -> Eigen {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let scale = m.max_abs();
    if b == ZERO && c == ZERO {
        return assemble(vec![(a, vec![ONE, ZERO]), (d, vec![ZERO, ONE])], scale);
    }
    let half_tr = (a + d) * 0.5;
    let half_diff = (a - d) * 0.5;
    let root = (half_diff * half_diff + b * c).sqrt();
    // Larger-magnitude root first, the other from the determinant.
    let l1 = if (half_tr + root).norm() >= (half_tr - root).norm() {
        half_tr + root
    } else {
        half_tr - root
    };
    let det = a * d - b * c;
    let l2 = if l1 == ZERO {
        half_tr * 2.0 - l1
    } else {
        det / l1
    };
    let vec_for = |l: C64| {
        // Rows of (M - l I) give two candidate null vectors; keep the better scaled one.
        let v1 = vec![b, l - a];
        let v2 = vec![l - d, c];
        let n1 = v1[0].norm() + v1[1].norm();
        let n2 = v2[0].norm() + v2[1].norm();
        if n1 >= n2 {
            unit(v1)
        } else {
            unit(v2)
        }
    };
    assemble(vec![(l1, vec_for(l1)), (l2, vec_for(l2))], scale)
}

/// Monic characteristic polynomial `det(zI - M)`, coefficients in ascending order.
pub fn characteristic_polynomial(m: &CMatrix) -> Vec<C64> {
    let n = m.dim();
    let mut coeffs = vec![ZERO; n + 1];
    coeffs[n] = ONE;
    let id = CMatrix::identity(n);
    let mut mk = CMatrix::zeros(n);
    for k in 1..=n {
        mk = &(m * &mk) + &id.scale(coeffs[n - k + 1]);
        let amk = m * &mk;
        coeffs[n - k] = -amk.trace() / k as f64;
    }
    coeffs
}

/// Value and derivative by Horner's rule.
fn horner(coeffs: &[C64], z: C64) -> (C64, C64) {
    let mut p = ZERO;
    let mut dp = ZERO;
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of a monic polynomial (ascending coefficients) by Aberth's method.
pub fn polynomial_roots(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = coeffs[n];
    let monic: Vec<C64> = coeffs.iter().map(|&c| c / lead).collect();
    if n == 1 {
        return vec![-monic[0]];
    }

    // Fujiwara bound around the centroid.
    let centre = -monic[n - 1] / n as f64;
    let radius = (0..n)
        .map(|k| {
            let mut r = monic[k].norm().powf(1.0 / (n - k) as f64);
            if k == 0 {
                r *= 0.5f64.powf(1.0 / n as f64);
            }
            r
        })
        .fold(0.0, f64::max)
        .max(1e-300)
        * 2.0;
    let mut z: Vec<C64> = (0..n)
        .map(|k| centre + C64::from_polar(radius, TAU * k as f64 / n as f64 + 0.4))
        .collect();

    for _ in 0..ABERTH_MAX_ITER {
        let mut biggest = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(&monic, z[i]);
            if p == ZERO {
                continue;
            }
            let ratio = p / dp;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d == ZERO {
                        ZERO
                    } else {
                        ONE / d
                    }
                })
                .sum();
            let denom = ONE - ratio * repulsion;
            let step = if denom == ZERO || !ratio.is_finite() {
                ZERO
            } else {
                ratio / denom
            };
            if step.is_finite() {
                z[i] -= step;
                biggest = biggest.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if biggest < 1e-16 {
            break;
        }
    }
    for zi in z.iter_mut() {
        *zi = newton_polish(&monic, *zi);
    }
    z
}

fn newton_polish(coeffs: &[C64], mut z: C64) -> C64 {
    let mut best = (horner(coeffs, z).0.norm(), z);
    for _ in 0..8 {
        let (p, dp) = horner(coeffs, z);
        if p == ZERO || dp == ZERO {
            break;
        }
        let next = z - p / dp;
        if !next.is_finite() {
            break;
        }
        z = next;
        let r = horner(coeffs, z).0.norm();
        if r < best.0 {
            best = (r, z);
        } else {
            break;
        }
    }
    best.1
}

/// Right eigenvector of `m` for `lambda` by inverse iteration.
fn inverse_iteration(m: &CMatrix, lambda: C64, scale: f64) -> Vec<C64> {
    let n = m.dim();
    let id = CMatrix::identity(n);
    let mut nudge = scale.max(1.0) * 1e-14;
    let shifted = loop {
        let s = m - &id.scale(lambda + nudge);
        if s.inverse().is_some() || nudge > scale.max(1.0) {
            break s;
        }
        nudge *= 10.0;
    };
    let mut v: Vec<C64> = (0..n)
        .map(|k| C64::new(1.0 + 0.1 * k as f64, 0.05 * k as f64))
        .collect();
    v = unit(v);
    for _ in 0..3 {
        let mut rhs = CMatrix::zeros(n);
        for i in 0..n {
            rhs[(i, 0)] = v[i];
        }
        match shifted.solve(&rhs) {
            Some(x) => v = unit((0..n).map(|i| x[(i, 0)]).collect()),
            None => break,
        }
    }
    v
}

fn eigen_general(m: &CMatrix) -> Eigen {
    let scale = m.max_abs();
    let poly = characteristic_polynomial(m);
    let roots = polynomial_roots(&poly);
    let pairs = roots
        .into_iter()
        .map(|l| (l, inverse_iteration(m, l, scale)))
        .collect();
    assemble(pairs, scale)
}

/// Largest `‖M v - λ v‖` over the computed pairs.
pub fn max_residual(m: &CMatrix, e: &Eigen) -> f64 {
    let n = m.dim();
    (0..n)
        .map(|k| {
            let v: Vec<C64> = (0..n).map(|i| e.vectors[(i, k)]).collect();
            let mv = m.mul_vec(&v);
            mv.iter()
                .zip(&v)
                .map(|(a, b)| (a - e.values[k] * b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}
