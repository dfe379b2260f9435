//! Functions on `ℤ/dℤ` sampled from theta series along
//! `ℓ ↦ λ₀z + ((d+1)/(2d))·ℓ`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::ThetaCriticalParams;
use super::series::{theta_char0_scaled, theta_char1_scaled, theta_scaled, ScaledComplex, TruncationPolicy};
use crate::error::{Error, Result};
use crate::group::{conj_fourier, GroupFunction};

/// `shape · exp(log_scale)` with `max |shape| = 1` (unless identically zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledFunction {
    pub shape: GroupFunction,
    pub log_scale: f64,
}

impl ScaledFunction {
    pub fn from_samples(samples: &[ScaledComplex]) -> Result<Self> {
        let top = samples
            .iter()
            .filter(|s| s.mantissa.norm() > 0.0)
            .map(ScaledComplex::ln_norm)
            .fold(f64::NEG_INFINITY, f64::max);
        let top = if top.is_finite() { top } else { 0.0 };
        let shape = GroupFunction::new(samples.iter().map(|s| s.at_scale(top)).collect())?;
        Ok(Self { shape, log_scale: top })
    }

    pub fn modulus(&self) -> u64 {
        self.shape.modulus()
    }

    pub fn at(&self, k: i64) -> ScaledComplex {
        ScaledComplex { mantissa: self.shape.at(k), log_scale: self.log_scale }
    }

    /// Plain values; fails when they are not representable.
    pub fn to_function(&self) -> Result<GroupFunction> {
        let s = self.log_scale.exp();
        let f = self.shape.scale(Complex64::new(s, 0.0));
        if f.values().iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            Ok(f)
        } else {
            Err(Error::NonFinite(format!("sampled function of size exp({})", self.log_scale)))
        }
    }

    /// The conjugate Fourier transform commutes with positive scalings.
    pub fn conj_fourier(&self) -> Self {
        Self { shape: conj_fourier(&self.shape), log_scale: self.log_scale }
    }

    pub fn square(&self) -> Self {
        Self { shape: self.shape.square(), log_scale: 2.0 * self.log_scale }
    }

    /// `k ↦ f(2k)`.
    pub fn doubled_index(&self) -> Self {
        Self { shape: self.shape.reindex(2).expect("2 is a unit"), log_scale: self.log_scale }
    }

    pub fn mul(&self, c: Complex64) -> Self {
        Self { shape: self.shape.scale(c), log_scale: self.log_scale }
    }

    pub fn mul_scaled(&self, c: ScaledComplex) -> Self {
        Self { shape: self.shape.scale(c.mantissa), log_scale: self.log_scale + c.log_scale }
    }

    /// `self · exp(c)`.
    pub fn mul_exp(&self, c: Complex64) -> Self {
        Self {
            shape: self.shape.scale(Complex64::from_polar(1.0, c.im)),
            log_scale: self.log_scale + c.re,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let s = self.log_scale.max(other.log_scale);
        let a = self.shape.scale(Complex64::new((self.log_scale - s).exp(), 0.0));
        let b = other.shape.scale(Complex64::new((other.log_scale - s).exp(), 0.0));
        Ok(Self { shape: a.add(&b)?, log_scale: s })
    }

    /// `max_k |f(k) − g(k)| / max(‖f‖∞, ‖g‖∞)`.
    pub fn relative_gap(&self, other: &Self) -> Result<f64> {
        let s = self.log_scale.max(other.log_scale);
        let a = self.shape.scale(Complex64::new((self.log_scale - s).exp(), 0.0));
        let b = other.shape.scale(Complex64::new((other.log_scale - s).exp(), 0.0));
        let den = a.max_abs().max(b.max_abs());
        Ok(if den == 0.0 { 0.0 } else { a.max_abs_diff(&b)? / den })
    }
}

/// `λ₀z + ((d+1)/(2d))·ℓ`, with the real shift reduced mod 1.
pub(crate) fn sample_point(p: &ThetaCriticalParams, z: Complex64, l: u64) -> Complex64 {
    let d = p.modulus;
    let shift = ((d + 1) / 2 * l % d) as f64 / d as f64;
    p.lambda0 * z + shift
}

fn sample(
    p: &ThetaCriticalParams,
    z: Complex64,
    policy: &TruncationPolicy,
    series: fn(Complex64, Complex64, &TruncationPolicy) -> Result<ScaledComplex>,
) -> Result<ScaledFunction> {
    let samples = (0..p.modulus)
        .map(|l| series(sample_point(p, z, l), p.tau0, policy))
        .collect::<Result<Vec<_>>>()?;
    ScaledFunction::from_samples(&samples)
}

/// `f_z(ℓ) = θ(λ₀z + ((d+1)/(2d))ℓ, τ₀)`.
pub fn theta_critical_function(p: &ThetaCriticalParams, z: Complex64, policy: &TruncationPolicy) -> Result<ScaledFunction> {
    sample(p, z, policy, theta_scaled)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaCharFunctions {
    /// Samples of `θ_[0]`.
    pub f0: ScaledFunction,
    /// Samples of `θ_[1]`.
    pub f1: ScaledFunction,
    /// `f_z²`.
    pub square: ScaledFunction,
}

pub fn theta_char_functions(p: &ThetaCriticalParams, z: Complex64, policy: &TruncationPolicy) -> Result<ThetaCharFunctions> {
    Ok(ThetaCharFunctions {
        f0: sample(p, z, policy, theta_char0_scaled)?,
        f1: sample(p, z, policy, theta_char1_scaled)?,
        square: theta_critical_function(p, z, policy)?.square(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{relative_criticality_residual, symmetry_class, Symmetry};
    use crate::theta::series::theta;

    #[test]
    fn samples_match_direct_evaluation() {
        let pol = TruncationPolicy::default();
        let p = ThetaCriticalParams::new(5, 1.0, 4.0).unwrap();
        let z = Complex64::new(0.1, 0.02);
        let f = theta_critical_function(&p, z, &pol).unwrap().to_function().unwrap();
        for l in 0..5u64 {
            let w = p.lambda0 * z + 3.0 * l as f64 / 5.0;
            let want = theta(w, p.tau0, &pol).unwrap();
            assert!((f.at(l as i64) - want).norm() < 1e-12 * want.norm().max(1.0));
        }
    }

    #[test]
    fn d5_witness_is_critical_and_symmetric() {
        let pol = TruncationPolicy::default();
        let p = ThetaCriticalParams::new(5, 1.0, 4.0).unwrap();
        let f = theta_critical_function(&p, Complex64::new(0.0, 0.0), &pol).unwrap();
        assert!(relative_criticality_residual(&f.shape, p.lambda0) < 1e-12);
        assert_eq!(symmetry_class(&f.shape, 1e-12), Symmetry::Symmetric);
    }

    #[test]
    fn square_is_pointwise() {
        let pol = TruncationPolicy::default();
        let p = ThetaCriticalParams::new(7, 4.0, 3.0).unwrap();
        let z = Complex64::new(0.05, 0.01);
        let fs = theta_char_functions(&p, z, &pol).unwrap();
        let f = theta_critical_function(&p, z, &pol).unwrap();
        let sq = f.to_function().unwrap().square();
        assert!(fs.square.to_function().unwrap().max_abs_diff(&sq).unwrap() < 1e-12 * sq.max_abs());
    }

    #[test]
    fn large_imaginary_parts_are_scaled() {
        let pol = TruncationPolicy::default();
        let p = ThetaCriticalParams::new(17, 1.0, 16.0).unwrap();
        let f = theta_critical_function(&p, Complex64::new(0.37, 0.0), &pol).unwrap();
        assert!(f.log_scale > 700.0);
        assert!((f.shape.max_abs() - 1.0).abs() < 1e-12);
        assert!(f.to_function().is_err());
        assert!(relative_criticality_residual(&f.shape, p.lambda0) < 1e-8);
    }
}
