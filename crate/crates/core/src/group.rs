//! Complex functions on `ℤ/dℤ` and the transforms acting on them.
//!
//! Values are stored at the representatives `0..d`; every index computation
//! (`2k`, `qk`, `-k`, `t-ℓ`) is reduced modulo `d` before lookup.
//!
//! Convolution is the unnormalized sum `f⋆g(t) = Σ_ℓ f(ℓ)·g(t−ℓ)`. With the
//! unitary Fourier transform this is the normalization for which
//! `F(f·g) = d^{-1/2}·F(f)⋆F(g)` holds exactly; the criticality equation and
//! the square-function arguments rely on that identity verbatim.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::arith;
use crate::error::{contract, Error, Result};

/// A complex-valued function on `ℤ/dℤ`, `d` odd and at least 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct GroupFunction {
    values: Vec<Complex64>,
}

impl TryFrom<Vec<Complex64>> for GroupFunction {
    type Error = Error;
    fn try_from(values: Vec<Complex64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<GroupFunction> for Vec<Complex64> {
    fn from(f: GroupFunction) -> Self {
        f.values
    }
}

pub(crate) fn check_modulus(d: u64) -> Result<()> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::BadModulus(d as i64));
    }
    Ok(())
}

/// `exp(2iπ·j/d)` for `j = 0..d`.
pub(crate) fn roots_of_unity(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / d as f64))
        .collect()
}

impl GroupFunction {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        check_modulus(values.len() as u64)?;
        Ok(Self { values })
    }

    pub fn from_fn(d: u64, mut f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        check_modulus(d)?;
        Ok(Self {
            values: (0..d as usize).map(&mut f).collect(),
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Point mass at `k`.
    pub fn delta(d: u64, k: i64) -> Result<Self> {
        let k = k.rem_euclid(d as i64) as usize;
        Self::from_fn(d, |j| if j == k { 1.0.into() } else { 0.0.into() })
    }

    pub fn constant(d: u64, c: Complex64) -> Result<Self> {
        Self::from_fn(d, |_| c)
    }

    pub fn modulus(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at `k mod d`.
    pub fn at(&self, k: i64) -> Complex64 {
        self.values[k.rem_euclid(self.values.len() as i64) as usize]
    }

    fn same_modulus(&self, other: &Self) -> Result<()> {
        if self.values.len() != other.values.len() {
            return Err(Error::ModulusMismatch(self.values.len(), other.values.len()));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self {
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    /// Pointwise complex conjugate.
    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    /// Pointwise square `F = f²`.
    pub fn square(&self) -> Self {
        self.map(|z| z * z)
    }

    pub fn pointwise_mul(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_modulus(other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn norm_l2(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// L² distance.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.norm_l2())
    }

    /// Sup-norm distance.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `f(q·k)` for each `k`.
    pub fn reindex(&self, q: i64) -> Result<Self> {
        reindex(self, q)
    }

    /// `k ↦ f(−k)`.
    pub fn negate_index(&self) -> Self {
        let d = self.values.len();
        Self {
            values: (0..d).map(|k| self.values[(d - k) % d]).collect(),
        }
    }
}

/// Symmetric non-degenerate pairing `e(x, y) = exp(2iπ·q·x·y/d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    modulus: u64,
    multiplier: u64,
}

impl Pairing {
    pub fn new(d: u64, q: u64) -> Result<Self> {
        check_modulus(d)?;
        if q == 0 || q >= d || arith::gcd(q, d) != 1 {
            return Err(Error::NotAUnit { q: q as i64, d });
        }
        Ok(Self { modulus: d, multiplier: q })
    }

    /// The pairing of the ordinary conjugate Fourier transform (`q = 1`).
    pub fn standard(d: u64) -> Result<Self> {
        Self::new(d, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }
}

/// `f⋆g(t) = Σ_ℓ f(ℓ)·g(t−ℓ)`.
pub fn convolve(f: &GroupFunction, g: &GroupFunction) -> Result<GroupFunction> {
    f.same_modulus(g)?;
    let d = f.values.len();
    let values = (0..d)
        .map(|t| {
            (0..d)
                .map(|l| f.values[l] * g.values[(t + d - l) % d])
                .sum()
        })
        .collect();
    Ok(GroupFunction { values })
}

/// `Σ_ℓ ω^{sign·k·ℓ} · v(ℓ) / √d` with all exponents reduced mod `d`.
fn dft(values: &[Complex64], multiplier: usize, sign: i32) -> Vec<Complex64> {
    let d = values.len();
    let roots = roots_of_unity(d);
    let norm = 1.0 / (d as f64).sqrt();
    (0..d)
        .map(|k| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, v) in values.iter().enumerate() {
                let e = (multiplier * ((k * l) % d)) % d;
                let w = if sign >= 0 { roots[e] } else { roots[(d - e) % d] };
                acc += w * v;
            }
            acc * norm
        })
        .collect()
}

/// Unitary Fourier transform `F(f)(k) = d^{-1/2} Σ_ℓ exp(−2iπkℓ/d)·f(ℓ)`.
pub fn fourier(f: &GroupFunction) -> GroupFunction {
    GroupFunction {
        values: dft(&f.values, 1, -1),
    }
}

/// Conjugate Fourier transform `d^{-1/2} Σ_ℓ exp(2iπkℓ/d)·conj(f(ℓ))`, an
/// antilinear involution.
pub fn conj_fourier(f: &GroupFunction) -> GroupFunction {
    let conj: Vec<_> = f.values.iter().map(|z| z.conj()).collect();
    GroupFunction {
        values: dft(&conj, 1, 1),
    }
}

/// Conjugate Fourier transform for the pairing `exp(2iπ·q·x·y/d)`.
pub fn conj_fourier_paired(f: &GroupFunction, p: &Pairing) -> Result<GroupFunction> {
    if p.modulus != f.modulus() {
        return Err(Error::ModulusMismatch(p.modulus as usize, f.values.len()));
    }
    let conj: Vec<_> = f.values.iter().map(|z| z.conj()).collect();
    Ok(GroupFunction {
        values: dft(&conj, p.multiplier as usize, 1),
    })
}

/// `f_q(k) = f(q·k)`; `q` must be a unit.
pub fn reindex(f: &GroupFunction, q: i64) -> Result<GroupFunction> {
    let d = f.modulus();
    let qr = q.rem_euclid(d as i64) as u64;
    if arith::gcd(qr, d) != 1 {
        return Err(Error::NotAUnit { q, d });
    }
    let d = d as usize;
    Ok(GroupFunction {
        values: (0..d).map(|k| f.values[(qr as usize * k) % d]).collect(),
    })
}

/// `max_k |f⋆f(2k) − λ·f(k)²|`.
pub fn criticality_residual(f: &GroupFunction, lambda: Complex64) -> f64 {
    let c = convolve(f, f).expect("same modulus");
    let d = f.values.len();
    (0..d)
        .map(|k| (c.values[(2 * k) % d] - lambda * f.values[k] * f.values[k]).norm())
        .fold(0.0, f64::max)
}

/// Criticality residual divided by `max(1, ‖f‖∞²)`, invariant under
/// rescalings of large functions.
pub fn relative_criticality_residual(f: &GroupFunction, lambda: Complex64) -> f64 {
    let s = f.max_abs();
    criticality_residual(f, lambda) / (s * s).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    Neither,
}

/// Parity of `f` under `k ↦ −k`, within `tol` in the sup norm.
pub fn symmetry_class(f: &GroupFunction, tol: f64) -> Symmetry {
    let r = f.negate_index();
    let even = f.values.iter().zip(&r.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if even <= tol {
        return Symmetry::Symmetric;
    }
    let odd = f.values.iter().zip(&r.values).map(|(a, b)| (a + b).norm()).fold(0.0, f64::max);
    if odd <= tol {
        Symmetry::Antisymmetric
    } else {
        Symmetry::Neither
    }
}

/// Outcome of turning `conj_fourier(h) ≈ α·h_q` into an exact relation
/// `conj_fourier(f) = f_q` with `f = β·h`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRescale {
    /// Least-squares proportionality constant α.
    pub alpha: Complex64,
    /// `max_k |conj_fourier(h)(k) − α·h(qk)|`, relative to `‖h‖∞`.
    pub proportionality_residual: f64,
    /// `β·h` with `β = α^{1/2}` (principal branch), so that `β/β̄ = α`.
    pub function: GroupFunction,
    /// `max_k |conj_fourier(f)(k) − f(qk)|`, relative to `‖f‖∞`.
    pub fixed_point_residual: f64,
}

/// Fits `conj_fourier(h) = α·h_q` and rescales `h` so that the conjugate
/// Fourier transform maps it exactly onto its reindexing by `q`. `|α| = 1`
/// whenever the relation holds, so `β/β̄ = α` is solvable.
pub fn rescale_to_fixed_point(h: &GroupFunction, q: i64) -> Result<FixedPointRescale> {
    let scale = h.max_abs();
    if scale == 0.0 {
        return contract("cannot rescale the zero function");
    }
    let hq = reindex(h, q)?;
    let ch = conj_fourier(h);
    let num: Complex64 = hq.values.iter().zip(&ch.values).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = hq.values.iter().map(|a| a.norm_sqr()).sum();
    let alpha = num / den;
    let proportionality_residual = ch.max_abs_diff(&hq.scale(alpha))? / scale;
    let beta = alpha.sqrt();
    let f = h.scale(beta);
    let fixed_point_residual = conj_fourier(&f).max_abs_diff(&reindex(&f, q)?)? / f.max_abs();
    Ok(FixedPointRescale {
        alpha,
        proportionality_residual,
        function: f,
        fixed_point_residual,
    })
}
