//! Roots of real polynomials and the algebraic descriptions of tabulated
//! critical values.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Result};

/// `p(z)` and `p'(z)` by Horner; coefficients highest degree first.
fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in coeffs {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// `|p(z)| / Σ|a_i||z|^i`, the normwise backward error of `z` as a root.
pub fn backward_error(coeffs: &[f64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let r = z.norm();
    let scale = coeffs.iter().fold(0.0, |acc, a| acc * r + a.abs());
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All complex roots (with multiplicity) of a real polynomial given highest
/// degree first, by Aberth–Ehrlich iteration followed by Newton polishing.
pub fn poly_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    if coeffs.len() < 2 {
        return contract("polynomial must have degree at least 1");
    }
    if coeffs[0] == 0.0 || !coeffs.iter().all(|a| a.is_finite()) {
        return contract("leading coefficient must be finite and nonzero");
    }
    let n = coeffs.len() - 1;
    let monic: Vec<f64> = coeffs.iter().map(|a| a / coeffs[0]).collect();
    // Fujiwara-style bound on the root moduli
    let radius = monic[1..]
        .iter()
        .enumerate()
        .map(|(i, a)| a.abs().powf(1.0 / (i + 1) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let (p, dp) = horner(&monic, z[k]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / z[k].norm().max(1.0));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    for root in z.iter_mut() {
        for _ in 0..5 {
            let (p, dp) = horner(&monic, *root);
            if dp == Complex64::new(0.0, 0.0) {
                break;
            }
            let next = *root - p / dp;
            if horner(&monic, next).0.norm() < p.norm() {
                *root = next;
            } else {
                break;
            }
        }
    }
    // roots of a real polynomial come in conjugate pairs; snap tiny
    // imaginary parts of isolated real roots
    for root in z.iter_mut() {
        if root.im.abs() <= 1e-12 * root.norm().max(1.0) {
            root.im = 0.0;
        }
    }
    z.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(z)
}

/// Groups roots closer than `tol` (relative), returning representatives
/// with multiplicities.
pub fn cluster_roots(roots: &[Complex64], tol: f64) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize)> = Vec::new();
    for &r in roots {
        match out.iter_mut().find(|(c, _)| (c - r).norm() <= tol * c.norm().max(1.0)) {
            Some(entry) => entry.1 += 1,
            None => out.push((r, 1)),
        }
    }
    out
}

/// `p(x)·q(x)`, coefficients highest degree first.
fn poly_mul(p: &[f64], q: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn poly_add(p: &[f64], q: &[f64]) -> Vec<f64> {
    let n = p.len().max(q.len());
    let mut out = vec![0.0; n];
    for (i, a) in p.iter().enumerate() {
        out[n - p.len() + i] += a;
    }
    for (i, a) in q.iter().enumerate() {
        out[n - q.len() + i] += a;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RootSelector {
    All,
    Nearest { target: Complex64 },
}

/// An algebraic description of one or more critical values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AlgebraicSpec {
    /// `λ = ±√a ± i√b` with `a + b = d`: roots of `λ⁴ − 2(a−b)λ² + d²`.
    Quartic { d: u64, a: i64, b: i64 },
    /// Roots of a polynomial in `λ`, highest degree first.
    Polynomial { coeffs: Vec<f64>, selector: RootSelector },
    /// `λ² − k·c·λ + m = 0` where `c` runs over the roots of `inner`.
    QuadraticOver { inner: Vec<f64>, k: f64, m: f64, selector: RootSelector },
}

impl AlgebraicSpec {
    /// Minimal-degree description over ℚ as a polynomial in `λ`.
    pub fn lambda_polynomial(&self) -> Vec<f64> {
        match self {
            Self::Quartic { d, a, b } => {
                vec![1.0, 0.0, -2.0 * (a - b) as f64, 0.0, (d * d) as f64]
            }
            Self::Polynomial { coeffs, .. } => coeffs.clone(),
            // (kλ)^n·p((λ² + m)/(kλ)) = Σ_j a_j (λ² + m)^{n−j} (kλ)^j
            Self::QuadraticOver { inner, k, m, .. } => {
                let n = inner.len() - 1;
                let quad = [1.0, 0.0, *m];
                let mut acc = vec![0.0];
                for (j, a) in inner.iter().enumerate() {
                    let mut term = vec![*a];
                    for _ in 0..(n - j) {
                        term = poly_mul(&term, &quad);
                    }
                    for _ in 0..j {
                        term = poly_mul(&term, &[*k, 0.0]);
                    }
                    acc = poly_add(&acc, &term);
                }
                acc
            }
        }
    }

    fn selector(&self) -> RootSelector {
        match self {
            Self::Quartic { .. } => RootSelector::All,
            Self::Polynomial { selector, .. } | Self::QuadraticOver { selector, .. } => selector.clone(),
        }
    }

    /// Every root of the defining data, before selection.
    pub fn all_roots(&self) -> Result<Vec<Complex64>> {
        match self {
            Self::QuadraticOver { inner, k, m, .. } => {
                let mut out = Vec::new();
                for c in poly_roots(inner)? {
                    let disc = (*k * c) * (*k * c) - 4.0 * m;
                    let s = disc.sqrt();
                    out.push((*k * c + s) / 2.0);
                    out.push((*k * c - s) / 2.0);
                }
                Ok(out)
            }
            _ => poly_roots(&self.lambda_polynomial()),
        }
    }

    /// The values this spec designates.
    pub fn values(&self) -> Result<Vec<Complex64>> {
        let roots = self.all_roots()?;
        Ok(match self.selector() {
            RootSelector::All => roots,
            RootSelector::Nearest { target } => roots
                .into_iter()
                .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
                .into_iter()
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilReport {
    pub roots: Vec<Complex64>,
    pub moduli: Vec<f64>,
    /// Number of roots of modulus `√d` within `1e−7`.
    pub on_circle: usize,
    pub is_weil: bool,
}

/// Whether all conjugates (all roots of the defining polynomial over ℚ)
/// have modulus `√d`.
pub fn weil_check(spec: &AlgebraicSpec, d: u64) -> Result<WeilReport> {
    let poly = spec.lambda_polynomial();
    if poly.iter().any(|a| a.fract() != 0.0) {
        return contract("the defining polynomial must have integer coefficients");
    }
    let roots = spec.all_roots()?;
    let target = (d as f64).sqrt();
    let moduli: Vec<f64> = roots.iter().map(|r| r.norm()).collect();
    let on_circle = moduli.iter().filter(|m| (*m - target).abs() <= 1e-7).count();
    Ok(WeilReport { is_weil: on_circle == roots.len(), on_circle, roots, moduli })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    /// Independent oracle: eigenvalues of the companion matrix.
    fn companion_roots(coeffs: &[f64]) -> Vec<Complex64> {
        let n = coeffs.len() - 1;
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == 0 {
                -coeffs[j + 1] / coeffs[0]
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        m.complex_eigenvalues().iter().copied().collect()
    }

    fn matches_oracle(coeffs: &[f64]) {
        let got = poly_roots(coeffs).unwrap();
        let want = companion_roots(coeffs);
        assert_eq!(got.len(), want.len());
        for w in &want {
            let best = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-7 * w.norm().max(1.0), "{w} missing from {got:?}");
        }
        for g in &got {
            assert!(backward_error(coeffs, *g) < 1e-12, "{g}");
        }
    }

    const EQ_C: [f64; 11] = [1.0, -6.0, -15.0, 136.0, -62.0, -628.0, 586.0, 232.0, 733.0, -246.0, 293.0];

    #[test]
    fn roots_match_companion_eigenvalues() {
        matches_oracle(&[1.0, 0.0, -5.0]);
        matches_oracle(&[1.0, -2.0, 0.0, -2.0]);
        matches_oracle(&EQ_C);
        matches_oracle(&[2.0, 3.0, -7.0, 1.0, 9.0, -4.0]);
    }

    #[test]
    fn quadratic_with_small_c_gives_conjugate_pair() {
        for c in [-4.0, -1.5, 0.0, 2.0, 4.1] {
            let r = poly_roots(&[1.0, -2.0 * c, 17.0]).unwrap();
            assert!((r[0] - r[1].conj()).norm() < 1e-12);
            for z in r {
                assert!((z.norm() - 17f64.sqrt()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cubic_real_root_by_bisection() {
        let p = [1.0, -2.0, 0.0, -2.0];
        let f = |x: f64| x * x * x - 2.0 * x * x - 2.0;
        let (mut lo, mut hi) = (0.0, 5.0);
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let real: Vec<_> = poly_roots(&p).unwrap().into_iter().filter(|z| z.im == 0.0).collect();
        assert_eq!(real.len(), 1);
        assert!((real[0].re - lo).abs() < 1e-12);
    }

    #[test]
    fn degree_ten_family() {
        let c = poly_roots(&EQ_C).unwrap();
        let bound = 17f64.sqrt();
        let real_inside = c.iter().filter(|z| z.im == 0.0 && z.re.abs() < bound).count();
        assert_eq!(real_inside, 4);
        // sign changes of p on a fine grid agree
        let p = |x: f64| EQ_C.iter().fold(0.0, |acc, a| acc * x + a);
        let grid: Vec<f64> = (0..=200_000).map(|i| -bound + 2.0 * bound * i as f64 / 200_000.0).collect();
        let changes = grid.windows(2).filter(|w| p(w[0]).signum() != p(w[1]).signum()).count();
        assert_eq!(changes, 4);

        let spec = AlgebraicSpec::QuadraticOver { inner: EQ_C.to_vec(), k: 2.0, m: 17.0, selector: RootSelector::All };
        let rep = weil_check(&spec, 17).unwrap();
        assert_eq!(rep.roots.len(), 20);
        assert_eq!(rep.on_circle, 8);
        assert!(!rep.is_weil);
        // the expanded degree-20 polynomial has the same roots
        for r in &rep.roots {
            assert!(backward_error(&spec.lambda_polynomial(), *r) < 1e-10);
        }
    }

    #[test]
    fn quartic_and_quadratic_weil() {
        let rep = weil_check(&AlgebraicSpec::Quartic { d: 5, a: 1, b: 4 }, 5).unwrap();
        assert!(rep.is_weil);
        assert_eq!(rep.roots.len(), 4);
        let sqrt_d = AlgebraicSpec::Polynomial { coeffs: vec![1.0, 0.0, -13.0], selector: RootSelector::All };
        assert!(weil_check(&sqrt_d, 13).unwrap().is_weil);
        let six = AlgebraicSpec::Polynomial { coeffs: vec![1.0, -12.0, 15.0], selector: RootSelector::All };
        assert!(!weil_check(&six, 15).unwrap().is_weil);
    }

    #[test]
    fn nearest_selector() {
        let spec = AlgebraicSpec::QuadraticOver {
            inner: EQ_C.to_vec(),
            k: 2.0,
            m: 17.0,
            selector: RootSelector::Nearest { target: Complex64::new(3.942, 1.209) },
        };
        let v = spec.values().unwrap();
        assert_eq!(v.len(), 1);
        assert!((v[0] - Complex64::new(3.942, 1.209)).norm() < 5e-3);
    }

    #[test]
    fn clustering_and_errors() {
        let r = poly_roots(&[1.0, -2.0, 1.0]).unwrap();
        let cl = cluster_roots(&r, 1e-6);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].1, 2);
        assert!(poly_roots(&[0.0, 1.0]).is_err());
        assert!(poly_roots(&[3.0]).is_err());
    }
}
