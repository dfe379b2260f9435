use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::series::{relative_gap, theta_scaled, TruncationPolicy};
use crate::arith::jacobi_symbol;
use crate::error::{contract, Error, Result};
use crate::group::check_modulus;

/// `(d, a, b)` with `a + b = d`, together with `λ₀ = √a + i√b` and
/// `τ₀ = (λ₀² − d²)/(4d²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaCriticalParams {
    pub modulus: u64,
    pub a: f64,
    pub b: f64,
    pub lambda0: Complex64,
    pub tau0: Complex64,
    /// `a`, `b` are integers and `a ≡ (d+1)²/4 mod 4`; the sampled
    /// functions are then `λ₀`-critical.
    pub integral: bool,
}

impl ThetaCriticalParams {
    pub fn new(d: u64, a: f64, b: f64) -> Result<Self> {
        check_modulus(d)?;
        if !(a > 0.0 && b > 0.0) {
            return contract(format!("theta parameters must be positive, got a={a}, b={b}"));
        }
        if (a + b - d as f64).abs() > 1e-12 * d as f64 {
            return contract(format!("a + b must equal {d}, got {a} + {b}"));
        }
        let lambda0 = Complex64::new(a.sqrt(), b.sqrt());
        let df = d as f64;
        let tau0 = (lambda0 * lambda0 - df * df) / (4.0 * df * df);
        let integral = integer_value(a).is_some_and(|ai| {
            let want = ((d + 1) * (d + 1) / 4) % 4;
            ai.rem_euclid(4) as u64 == want
        });
        Ok(Self { modulus: d, a, b, lambda0, tau0, integral })
    }

    pub fn from_integers(d: u64, a: u64) -> Result<Self> {
        if a == 0 || a >= d {
            return contract(format!("need 0 < a < {d}, got {a}"));
        }
        Self::new(d, a as f64, (d - a) as f64)
    }
}

fn integer_value(x: f64) -> Option<i64> {
    let r = x.round();
    ((x - r).abs() <= 1e-12 * x.abs().max(1.0)).then_some(r as i64)
}

/// Integer pairs `(a, b)` with `a + b = d`, `a ≡ (d+1)²/4 mod 4`.
pub fn admissible_pairs(d: u64) -> Vec<(u64, u64)> {
    let want = ((d + 1) * (d + 1) / 4) % 4;
    (1..d).filter(|a| a % 4 == want).map(|a| (a, d - a)).collect()
}

/// `((α, β), (γ, δ))` with determinant one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SL2Matrix {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
    pub delta: i64,
}

impl SL2Matrix {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        if alpha * delta - beta * gamma != 1 {
            return contract(format!("determinant of (({alpha}, {beta}), ({gamma}, {delta})) is not 1"));
        }
        Ok(Self { alpha, beta, gamma, delta })
    }

    /// Checks the hypotheses of the transformation law: congruent to the
    /// identity mod 2, `γ > 0` and `δ > 0`.
    pub fn check_hecke(&self) -> Result<()> {
        let even = |x: i64| x.rem_euclid(2) == 0;
        if even(self.alpha) || !even(self.beta) || !even(self.gamma) || even(self.delta) {
            return contract("matrix must be congruent to the identity mod 2");
        }
        if self.gamma <= 0 || self.delta <= 0 {
            return contract("transformation check needs γ > 0 and δ > 0");
        }
        Ok(())
    }

    /// Möbius action `(ατ + β)/(γτ + δ)`.
    pub fn act(&self, tau: Complex64) -> Complex64 {
        (self.alpha as f64 * tau + self.beta as f64) / (self.gamma as f64 * tau + self.delta as f64)
    }
}

/// `((d², (d²−1)/4), (4, 1))`, which sends `τ₀` to `−d²·τ̄₀`.
pub fn sigma0(d: u64) -> SL2Matrix {
    let d2 = (d * d) as i64;
    SL2Matrix::new(d2, (d2 - 1) / 4, 4, 1).expect("determinant one")
}

/// `((d², (d²−1)/2), (2, 1))`, which sends `2τ₀` to `−2d²·τ̄₀`.
pub fn sigma1(d: u64) -> SL2Matrix {
    let d2 = (d * d) as i64;
    SL2Matrix::new(d2, (d2 - 1) / 2, 2, 1).expect("determinant one")
}

/// Square root with positive real part.
pub(crate) fn sqrt_right_half(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.re < 0.0 {
        -s
    } else {
        s
    }
}

/// Relative gap between the two sides of
///
/// ```text
/// θ(w/(γτ+δ), στ) = i^{(δ−1)/2} (γ/δ) (γτ+δ)^{1/2} exp(iπγw²/(γτ+δ)) θ(w, τ)
/// ```
pub fn hecke_transform_check(s: &SL2Matrix, w: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    s.check_hecke()?;
    if !(tau.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(tau.im));
    }
    let ct = s.gamma as f64 * tau + s.delta as f64;
    let lhs = theta_scaled(w / ct, s.act(tau), policy)?;
    let i_pow = Complex64::i().powi(((s.delta - 1) / 2).rem_euclid(4) as i32);
    let sym = f64::from(jacobi_symbol(s.gamma, s.delta)?);
    let rhs = theta_scaled(w, tau, policy)?
        .mul(i_pow * sym * sqrt_right_half(ct))
        .mul_exp(Complex64::i() * PI * s.gamma as f64 * w * w / ct);
    Ok(relative_gap(lhs, rhs))
}
