//! The quadratic-phase family `f_{u,v}(k) = η^{u(k−v)²}` with
//! `η = −exp(iπ/d)`, a primitive `d`-th root of unity with `η² = ζ`.
//!
//! `f_{u,v}` is critical with `λ = (u/d)·g_d` where `g_d = Σ_k ζ^{k²}`, and
//! its conjugate Fourier transform is again a member of the family:
//!
//! ```text
//! conj_fourier(f_{u,v}) = (2u/d) · ḡ_d/√d · η^{−u·v²} · f_{u⁻¹, −u·v}
//! ```
//!
//! The phase `η^{−u·v²}` and the sign of the translate only matter for
//! `v ≠ 0`. Exponents of `η` are reduced mod `d` before evaluation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arith::{gcd, jacobi_symbol, mod_inverse};
use crate::error::{contract, Error, Result};
use crate::group::{check_modulus, rescale_to_fixed_point, GroupFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianParams {
    pub modulus: u64,
    pub u: u64,
    pub v: u64,
}

impl GaussianParams {
    pub fn new(d: u64, u: i64, v: i64) -> Result<Self> {
        check_modulus(d)?;
        let ur = u.rem_euclid(d as i64) as u64;
        if gcd(ur, d) != 1 {
            return Err(Error::NotAUnit { q: u, d });
        }
        Ok(Self { modulus: d, u: ur, v: v.rem_euclid(d as i64) as u64 })
    }

    /// `(u/d)·g_d`.
    pub fn critical_value(&self) -> Complex64 {
        let s = jacobi_symbol(self.u as i64, self.modulus as i64).expect("odd modulus");
        classical_gauss_sum(self.modulus) * f64::from(s)
    }
}

/// `η^j` for `η = −exp(iπ/d)`; `j` is reduced mod `d` first.
pub fn eta_pow(d: u64, j: i64) -> Complex64 {
    let j = j.rem_euclid(d as i64) as f64;
    // η = exp(iπ(d+1)/d)
    Complex64::from_polar(1.0, PI * j * (d as f64 + 1.0) / d as f64)
}

/// `g_d = Σ_k exp(2iπk²/d)`.
pub fn classical_gauss_sum(d: u64) -> Complex64 {
    (0..d)
        .map(|k| Complex64::from_polar(1.0, 2.0 * PI * ((k * k) % d) as f64 / d as f64))
        .sum()
}

/// `√d` for `d ≡ 1 mod 4`, `i√d` for `d ≡ 3 mod 4`.
pub fn gauss_sum_closed_form(d: u64) -> Complex64 {
    let s = (d as f64).sqrt();
    if d % 4 == 1 {
        Complex64::new(s, 0.0)
    } else {
        Complex64::new(0.0, s)
    }
}

pub fn gaussian_function(p: &GaussianParams) -> GroupFunction {
    let d = p.modulus as i64;
    GroupFunction::from_fn(p.modulus, |k| {
        let t = (k as i64 - p.v as i64).rem_euclid(d);
        eta_pow(p.modulus, (p.u as i64 * (t * t % d)) % d)
    })
    .expect("validated modulus")
}

/// Parameters and scalar with `conj_fourier(f_p) = scalar · f_image`.
pub fn gaussian_conj_fourier_factor(p: &GaussianParams) -> (GaussianParams, Complex64) {
    let d = p.modulus;
    let di = d as i64;
    let u_inv = mod_inverse(p.u as i64, d).expect("unit");
    let image = GaussianParams {
        modulus: d,
        u: u_inv,
        v: (-(p.u as i64) * p.v as i64).rem_euclid(di) as u64,
    };
    let sign = f64::from(jacobi_symbol(2 * p.u as i64, di).expect("odd modulus"));
    let phase = eta_pow(d, -((p.u as i64 * (p.v as i64 * p.v as i64 % di)) % di));
    let scalar = classical_gauss_sum(d).conj() / (d as f64).sqrt() * sign * phase;
    (image, scalar)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// `λ = g_d`.
    Plus,
    /// `λ = −g_d`.
    Minus,
}

/// A Gaussian witness for `λ ∈ ℬ_d°` (`q = None`) or `λ ∈ ℬ_d` with
/// `conj_fourier(f) = f_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct BdWitness {
    pub lambda: Complex64,
    pub params: GaussianParams,
    /// Rescaled so that `conj_fourier(function) = function_q` exactly.
    pub function: GroupFunction,
    pub q: Option<u64>,
    pub fixed_point_residual: f64,
}

/// Gaussian witnesses for `±g_d`.
///
/// * `Plus`: `f_{1,0}`, a conjugate Fourier fixed point after rescaling.
/// * `Minus`, `d ≡ 3 mod 4`: `u = −1`, again a fixed point, `λ = −i√d`.
/// * `Minus`, `d ≡ 1 mod 4`: the smallest `u` with `(u/d) = −1`; the
///   transform lands on `f_{u⁻¹,0} = (f_{u,0})_q` with `q = ±u⁻¹`, the
///   smaller representative being returned. Fails when `d` is a perfect
///   square since then no such `u` exists.
pub fn gaussian_bd_witness(d: u64, branch: Branch) -> Result<BdWitness> {
    check_modulus(d)?;
    let (u, q) = match branch {
        Branch::Plus => (1, None),
        Branch::Minus if d % 4 == 3 => (d as i64 - 1, None),
        Branch::Minus => {
            let Some(u) = (2..d as i64).find(|&u| jacobi_symbol(u, d as i64) == Ok(-1)) else {
                return contract(format!("no unit with Jacobi symbol −1 modulo the square {d}"));
            };
            let ui = mod_inverse(u, d).expect("unit");
            (u, Some(ui.min(d - ui)))
        }
    };
    let params = GaussianParams::new(d, u, 0)?;
    let h = gaussian_function(&params);
    let r = rescale_to_fixed_point(&h, q.unwrap_or(1) as i64)?;
    Ok(BdWitness {
        lambda: params.critical_value(),
        params,
        function: r.function,
        q,
        fixed_point_residual: r.fixed_point_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{conj_fourier, criticality_residual, reindex, symmetry_class, Symmetry};

    #[test]
    fn eta_has_order_d() {
        for d in (3..=51).step_by(2) {
            assert!((eta_pow(d, 1).powu(d as u32) - 1.0).norm() < 1e-12);
            assert!((eta_pow(d, 2) - Complex64::from_polar(1.0, 2.0 * PI / d as f64)).norm() < 1e-12);
            // η itself, computed without reduction
            let eta = -Complex64::from_polar(1.0, PI / d as f64);
            assert!((eta_pow(d, 1) - eta).norm() < 1e-14);
        }
    }

    #[test]
    fn gauss_sum_values() {
        assert!((classical_gauss_sum(5) - Complex64::new(5f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((classical_gauss_sum(3) - Complex64::new(0.0, 3f64.sqrt())).norm() < 1e-12);
        assert!((classical_gauss_sum(9) - Complex64::new(3.0, 0.0)).norm() < 1e-12);
        for d in (3..=51).step_by(2) {
            assert!((classical_gauss_sum(d) - gauss_sum_closed_form(d)).norm() < 1e-10);
        }
    }

    #[test]
    fn family_is_critical() {
        for (u, want) in [(1, 5f64.sqrt()), (2, -5f64.sqrt())] {
            let p = GaussianParams::new(5, u, 0).unwrap();
            assert!((p.critical_value() - want).norm() < 1e-12);
            assert!(criticality_residual(&gaussian_function(&p), want.into()) < 1e-12);
        }
        for d in [7u64, 9, 15, 21] {
            for u in 1..d as i64 {
                let Ok(p) = GaussianParams::new(d, u, 3) else { continue };
                let f = gaussian_function(&p);
                assert!((f.at(3) - 1.0).norm() < 1e-15);
                assert!(criticality_residual(&f, p.critical_value()) < 1e-10);
            }
        }
    }

    #[test]
    fn conj_fourier_factor_examples() {
        let p = GaussianParams::new(5, 1, 0).unwrap();
        let (img, s) = gaussian_conj_fourier_factor(&p);
        assert_eq!((img.u, img.v), (1, 0));
        assert!((s + 1.0).norm() < 1e-12);

        let p = GaussianParams::new(7, 1, 0).unwrap();
        let (img, s) = gaussian_conj_fourier_factor(&p);
        assert_eq!((img.u, img.v), (1, 0));
        assert!((s - Complex64::new(0.0, -1.0)).norm() < 1e-12);

        for d in [5u64, 7, 9, 11, 25] {
            for u in 1..d as i64 {
                for v in 0..d as i64 {
                    let Ok(p) = GaussianParams::new(d, u, v) else { continue };
                    let (img, s) = gaussian_conj_fourier_factor(&p);
                    let lhs = conj_fourier(&gaussian_function(&p));
                    let rhs = gaussian_function(&img).scale(s);
                    assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-10);
                    let (back, s2) = gaussian_conj_fourier_factor(&img);
                    assert_eq!((back.u, back.v), (p.u, p.v));
                    assert!((s.conj() * s2 - 1.0).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn bd_witnesses() {
        let w = gaussian_bd_witness(5, Branch::Plus).unwrap();
        assert!((w.lambda - 5f64.sqrt()).norm() < 1e-12);
        assert_eq!(w.q, None);
        assert!(w.fixed_point_residual < 1e-12);
        assert_eq!(symmetry_class(&w.function, 1e-12), Symmetry::Symmetric);

        let w = gaussian_bd_witness(5, Branch::Minus).unwrap();
        assert!((w.lambda + 5f64.sqrt()).norm() < 1e-12);
        assert_eq!(w.q, Some(2));
        let f = &w.function;
        assert!(conj_fourier(f).max_abs_diff(&reindex(f, 2).unwrap()).unwrap() < 1e-12);
        assert!(criticality_residual(f, w.lambda) < 1e-12);

        let w = gaussian_bd_witness(7, Branch::Minus).unwrap();
        assert!((w.lambda - Complex64::new(0.0, -7f64.sqrt())).norm() < 1e-12);
        assert_eq!(w.q, None);
        assert!(w.fixed_point_residual < 1e-12);

        assert!(gaussian_bd_witness(9, Branch::Minus).is_err());
        assert!(gaussian_bd_witness(13, Branch::Minus).unwrap().q.is_some());
    }

    #[test]
    fn remark_simplest_value_uses_positive_phase_exponent() {
        // d = 3: k ↦ η^{k²} is i√3-critical and a rescaled fixed point
        let h = GroupFunction::from_fn(3, |k| eta_pow(3, (k * k) as i64)).unwrap();
        assert!(criticality_residual(&h, Complex64::new(0.0, 3f64.sqrt())) < 1e-12);
        let r = rescale_to_fixed_point(&h, 1).unwrap();
        assert!(r.fixed_point_residual < 1e-12);
    }
}
