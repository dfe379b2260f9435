use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::gcd;
use crate::error::{contract, Result};
use crate::group::check_modulus;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryConstraint {
    None,
    Symmetric,
    Antisymmetric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// `f(1) = 1`.
    FirstValueOne,
    /// `‖f‖₂ = 1` and `Im f(1) = 0`; the phase pin is dropped under a
    /// fixed-point constraint, which already fixes the phase up to sign.
    UnitNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedPoint {
    None,
    /// `conj_fourier(f) = f`.
    ConjFourier,
    /// `conj_fourier(f) = f_q`.
    ConjFourierWithQ(u64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub modulus: u64,
    pub lambda: Complex64,
    pub symmetry: SymmetryConstraint,
    pub normalization: Normalization,
    pub fixed_point: FixedPoint,
    pub starts: usize,
    pub seed: u64,
    pub convergence_tol: f64,
    pub dedup_tol: f64,
    pub max_iterations: usize,
    /// Also add the images of every witness under the unit reindexings
    /// (and under the conjugate Fourier transform when `|λ|² = d`).
    pub orbit_closure: bool,
}

impl SearchConfig {
    pub fn new(modulus: u64, lambda: Complex64) -> Self {
        Self {
            modulus,
            lambda,
            symmetry: SymmetryConstraint::None,
            normalization: Normalization::FirstValueOne,
            fixed_point: FixedPoint::None,
            starts: 2000,
            seed: 0,
            convergence_tol: 1e-12,
            dedup_tol: 1e-6,
            max_iterations: 200,
            orbit_closure: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_modulus(self.modulus)?;
        if self.starts == 0 {
            return contract("need at least one start");
        }
        if !(self.convergence_tol > 0.0 && self.dedup_tol > 0.0) {
            return contract("tolerances must be positive");
        }
        let m = self.lambda.norm();
        if !(1e-6..=self.modulus as f64 + 1e-9).contains(&m) {
            return contract(format!("|λ| = {m} outside [1e-6, {}]", self.modulus));
        }
        if let FixedPoint::ConjFourierWithQ(q) = self.fixed_point {
            if gcd(q % self.modulus, self.modulus) != 1 {
                return contract(format!("q = {q} is not a unit mod {}", self.modulus));
            }
        }
        if self.normalization == Normalization::FirstValueOne && self.fixed_point != FixedPoint::None {
            return contract("a fixed-point constraint only allows real rescalings; use unit-norm normalization");
        }
        Ok(())
    }
}
