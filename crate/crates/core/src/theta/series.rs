//! Truncated evaluation of `θ(z, τ) = Σ_m exp(iπm²τ)·exp(2iπmz)` and of the
//! even/odd characteristic sums
//!
//! ```text
//! θ_[0](z, τ) = Σ_{m even} exp(iπ(τ/2)m²)·exp(2iπmz)
//! θ_[1](z, τ) = Σ_{m odd}  exp(iπ(τ/2)m²)·exp(2iπmz)
//! ```
//!
//! Values are returned as [`ScaledComplex`] (mantissa times `exp(log_scale)`)
//! because the sampled critical functions reach magnitudes far outside the
//! binary64 range once `Im z` is large compared with `Im τ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `mantissa · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledComplex {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl From<Complex64> for ScaledComplex {
    fn from(c: Complex64) -> Self {
        Self { mantissa: c, log_scale: 0.0 }
    }
}

impl ScaledComplex {
    pub fn zero() -> Self {
        Complex64::new(0.0, 0.0).into()
    }

    /// Plain complex value; infinite when the scale overflows.
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// `ln|·|`.
    pub fn ln_norm(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }

    /// `self · exp(c)`.
    pub fn mul_exp(self, c: Complex64) -> Self {
        Self {
            mantissa: self.mantissa * Complex64::from_polar(1.0, c.im),
            log_scale: self.log_scale + c.re,
        }
    }

    pub fn mul(self, c: Complex64) -> Self {
        Self { mantissa: self.mantissa * c, ..self }
    }

    pub fn add(self, other: Self) -> Self {
        if self.mantissa == Complex64::new(0.0, 0.0) {
            return other;
        }
        if other.mantissa == Complex64::new(0.0, 0.0) {
            return self;
        }
        let s = self.log_scale.max(other.log_scale);
        Self {
            mantissa: self.mantissa * (self.log_scale - s).exp() + other.mantissa * (other.log_scale - s).exp(),
            log_scale: s,
        }
    }

    pub fn neg(self) -> Self {
        Self { mantissa: -self.mantissa, ..self }
    }

    pub fn sub(self, other: Self) -> Self {
        self.add(other.neg())
    }

    /// Mantissa re-expressed at scale `s`.
    pub fn at_scale(&self, s: f64) -> Complex64 {
        self.mantissa * (self.log_scale - s).exp()
    }
}

/// `|a − b| / max(|a|, |b|)`; zero when both vanish.
pub fn relative_gap(a: ScaledComplex, b: ScaledComplex) -> f64 {
    let s = a.log_scale.max(b.log_scale);
    let (x, y) = (a.at_scale(s), b.at_scale(s));
    let den = x.norm().max(y.norm());
    if den == 0.0 {
        0.0
    } else {
        (x - y).norm() / den
    }
}

/// Series truncation: the summation window keeps every term whose modulus
/// can exceed `ε/4` times the modulus of the largest term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub tolerance: f64,
    pub max_terms: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self { tolerance: 1e-12, max_terms: 2_000_000 }
    }
}

impl TruncationPolicy {
    /// Half-width `M` solving `π·Im(τ)·M² − 2π·|Im w|·M = ln(4/ε)`, rounded
    /// up, for the series `Σ exp(iπm²τ + 2iπmw)`.
    pub fn half_width(&self, im_tau: f64, im_w: f64) -> f64 {
        let c = (4.0 / self.tolerance).ln();
        let a = PI * im_tau;
        let b = 2.0 * PI * im_w.abs();
        ((b + (b * b + 4.0 * a * c).sqrt()) / (2.0 * a)).ceil() + 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lattice {
    All,
    Even,
    Odd,
}

/// `Σ_{m ∈ S} exp(iπ·t·m² + 2iπ·m·z)` for `S` = all, even or odd integers.
fn lattice_sum(z: Complex64, t: Complex64, set: Lattice, policy: &TruncationPolicy) -> Result<ScaledComplex> {
    if !(t.im > 0.0) {
        return Err(Error::NotInUpperHalfPlane(t.im));
    }
    if !(z.re.is_finite() && z.im.is_finite() && t.re.is_finite()) {
        return Err(Error::NonFinite(format!("theta arguments z={z}, τ={t}")));
    }
    // both shifts are exact symmetries of the summand for integer m
    let zr = z.re - z.re.round();
    let tr = t.re - 2.0 * (t.re / 2.0).round();
    let m_max = policy.half_width(t.im, z.im);
    let n_terms = 2.0 * m_max + 1.0;
    if n_terms > policy.max_terms as f64 {
        return Err(Error::Truncation { needed: n_terms as usize, cap: policy.max_terms });
    }
    let m_max = m_max as i64;
    let keep = |m: i64| match set {
        Lattice::All => true,
        Lattice::Even => m % 2 == 0,
        Lattice::Odd => m % 2 != 0,
    };
    let re_exp = |m: f64| -PI * t.im * m * m - 2.0 * PI * m * z.im;
    // peak of the Gaussian envelope, nudged onto the lattice
    let center = (-z.im / t.im).round().clamp(-(m_max as f64), m_max as f64) as i64;
    let peak = [center - 1, center, center + 1]
        .into_iter()
        .filter(|&m| keep(m))
        .map(|m| re_exp(m as f64))
        .fold(f64::NEG_INFINITY, f64::max);
    let mut acc = Complex64::new(0.0, 0.0);
    for m in -m_max..=m_max {
        if !keep(m) {
            continue;
        }
        let mf = m as f64;
        let re = re_exp(mf) - peak;
        if re < -745.0 {
            continue;
        }
        let phase = PI * (tr * mf * mf + 2.0 * zr * mf);
        acc += Complex64::from_polar(re.exp(), phase);
    }
    Ok(ScaledComplex { mantissa: acc, log_scale: peak })
}

fn finite(v: ScaledComplex) -> Result<Complex64> {
    let c = v.value();
    if c.re.is_finite() && c.im.is_finite() {
        Ok(c)
    } else {
        Err(Error::NonFinite(format!("theta value exp({}) overflows", v.log_scale)))
    }
}

pub fn theta_scaled(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<ScaledComplex> {
    lattice_sum(z, tau, Lattice::All, policy)
}

/// Jacobi theta function `θ(z, τ)`, `Im τ > 0`.
pub fn theta(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    finite(theta_scaled(z, tau, policy)?)
}

pub fn theta_char0_scaled(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<ScaledComplex> {
    lattice_sum(z, tau / 2.0, Lattice::Even, policy)
}

pub fn theta_char1_scaled(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<ScaledComplex> {
    lattice_sum(z, tau / 2.0, Lattice::Odd, policy)
}

/// `θ_[0](z, τ)`: even-index part of the series in `exp(iπ(τ/2)m²)`.
pub fn theta_char0(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    finite(theta_char0_scaled(z, tau, policy)?)
}

/// `θ_[1](z, τ)`: odd-index part.
pub fn theta_char1(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<Complex64> {
    finite(theta_char1_scaled(z, tau, policy)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Independent oracle: plain symmetric partial sum with no recentring.
    fn naive(z: Complex64, tau: Complex64, m: i64) -> Complex64 {
        (-m..=m)
            .map(|k| {
                let kf = k as f64;
                (Complex64::i() * PI * (kf * kf * tau + 2.0 * kf * z)).exp()
            })
            .sum()
    }

    #[test]
    fn theta_at_i() {
        // Σ exp(−πm²) = 1.0864348112133080...
        let want: f64 = (-40..=40i64).map(|m| (-PI * (m * m) as f64).exp()).sum();
        assert!((want - 1.086_434_811_213_308).abs() < 1e-15);
        let p = TruncationPolicy::default();
        assert!((theta(c(0.0, 0.0), c(0.0, 1.0), &p).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn agrees_with_naive_sum() {
        let p = TruncationPolicy::default();
        for (z, t) in [
            (c(0.3, 0.1), c(0.2, 0.7)),
            (c(-1.7, -0.4), c(-0.9, 0.3)),
            (c(0.45, 0.05), c(0.1, 0.05)),
            (c(12.25, 0.2), c(3.5, 1.1)),
        ] {
            let want = naive(z, t, 400);
            let got = theta(z, t, &p).unwrap();
            assert!((got - want).norm() <= 1e-11 * want.norm().max(1.0), "{z} {t}");
        }
    }

    #[test]
    fn periodic_and_even() {
        let p = TruncationPolicy::default();
        let t = c(0.31, 0.42);
        for z in [c(0.1, 0.2), c(-0.37, 0.05), c(2.2, -0.3)] {
            let a = theta(z, t, &p).unwrap();
            assert!((theta(z + 1.0, t, &p).unwrap() - a).norm() < 2e-12 * a.norm().max(1.0));
            assert!((theta(-z, t, &p).unwrap() - a).norm() < 2e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn characteristics_split_the_series() {
        let p = TruncationPolicy::default();
        let t = c(-0.2, 0.6);
        for z in [c(0.1, 0.2), c(0.77, -0.15)] {
            let s = theta_char0(z, t, &p).unwrap() + theta_char1(z, t, &p).unwrap();
            let full = theta(z, t / 2.0, &p).unwrap();
            assert!((s - full).norm() < 1e-12 * full.norm().max(1.0));
            let t0 = theta_char0(z, t, &p).unwrap();
            assert!((t0 - theta(2.0 * z, 2.0 * t, &p).unwrap()).norm() < 1e-12 * t0.norm().max(1.0));
        }
    }

    #[test]
    fn huge_arguments_stay_scaled() {
        let p = TruncationPolicy::default();
        let z = c(0.2, 1.5);
        let t = c(-0.25, 0.007);
        let v = theta_scaled(z, t, &p).unwrap();
        assert!(v.log_scale > 700.0);
        assert!(v.mantissa.norm().is_finite() && v.mantissa.norm() > 0.0);
        assert!(matches!(theta(z, t, &p), Err(Error::NonFinite(_))));
    }

    #[test]
    fn domain_and_truncation_errors() {
        let p = TruncationPolicy::default();
        assert!(matches!(theta(c(0.0, 0.0), c(0.0, 0.0), &p), Err(Error::NotInUpperHalfPlane(_))));
        assert!(matches!(theta(c(0.0, 0.0), c(1.0, -1.0), &p), Err(Error::NotInUpperHalfPlane(_))));
        let tight = TruncationPolicy { max_terms: 10, ..p };
        assert!(matches!(theta(c(0.0, 0.0), c(0.0, 0.01), &tight), Err(Error::Truncation { .. })));
    }
}
