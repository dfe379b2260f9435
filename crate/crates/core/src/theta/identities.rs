//! Numerical checks of the transformation identities behind the theta
//! construction. Every check returns a relative residual: the gap between
//! the two sides divided by the size of the quantities being compared, so
//! that the checks stay meaningful when the sampled values are huge.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::params::{sigma0, ThetaCriticalParams};
use super::sampled::{theta_char_functions, theta_critical_function, ScaledFunction};
use super::series::{
    relative_gap, theta_char0_scaled, theta_char1_scaled, theta_scaled, ScaledComplex, TruncationPolicy,
};
use crate::error::{contract, Result};
use crate::group::{relative_criticality_residual, rescale_to_fixed_point, symmetry_class, GroupFunction, Symmetry};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `|a − b|` relative to `scale`, all given as scaled numbers.
fn gap_against(a: ScaledComplex, b: ScaledComplex, scale: f64) -> f64 {
    let s = a.log_scale.max(b.log_scale).max(scale);
    let den = (scale - s).exp();
    let num = (a.at_scale(s) - b.at_scale(s)).norm();
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn sum_scaled(terms: impl IntoIterator<Item = ScaledComplex>) -> ScaledComplex {
    terms.into_iter().fold(ScaledComplex::zero(), ScaledComplex::add)
}

/// `Σ_ℓ exp(−2iπkℓ/d)·θ(w + ℓ/d, τ)` against `d·exp(iπk²τ)·exp(2iπkw)·θ(dw + dkτ, d²τ)`,
/// relative to `d·max_ℓ |θ(w + ℓ/d, τ)|`.
pub fn finite_fourier_identity(w: Complex64, tau: Complex64, d: u64, k: i64, policy: &TruncationPolicy) -> Result<f64> {
    let df = d as f64;
    let k = k.rem_euclid(d as i64);
    let kf = k as f64;
    let terms = (0..d)
        .map(|l| {
            let phase = Complex64::from_polar(1.0, -2.0 * PI * ((k as u64 * l) % d) as f64 / df);
            Ok(theta_scaled(w + l as f64 / df, tau, policy)?.mul(phase))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = terms.iter().map(|t| t.ln_norm()).fold(f64::NEG_INFINITY, f64::max) + df.ln();
    let lhs = sum_scaled(terms);
    let rhs = theta_scaled(df * w + df * kf * tau, df * df * tau, policy)?
        .mul(Complex64::new(df, 0.0))
        .mul_exp(I * PI * (kf * kf * tau + 2.0 * kf * w));
    Ok(gap_against(lhs, rhs, scale))
}

/// Parity-restricted version of [`finite_fourier_identity`]:
/// `Σ_ℓ exp(−2iπkℓ/d)·θ_[ε](w + ℓ/d, τ) = d·exp(iπk²τ/2)·exp(2iπkw)·θ(2dw + dkτ, 2d²τ)`
/// with `k` the representative of its class having parity `ε`.
pub fn finite_fourier_char_identity(
    w: Complex64,
    tau: Complex64,
    d: u64,
    k: i64,
    odd: bool,
    policy: &TruncationPolicy,
) -> Result<f64> {
    let df = d as f64;
    let mut k = k.rem_euclid(d as i64);
    let series = if odd { theta_char1_scaled } else { theta_char0_scaled };
    let terms = (0..d)
        .map(|l| {
            let phase = Complex64::from_polar(1.0, -2.0 * PI * ((k as u64 * l) % d) as f64 / df);
            Ok(series(w + l as f64 / df, tau, policy)?.mul(phase))
        })
        .collect::<Result<Vec<_>>>()?;
    let scale = terms.iter().map(|t| t.ln_norm()).fold(f64::NEG_INFINITY, f64::max) + df.ln();
    let lhs = sum_scaled(terms);
    if (k % 2 == 1) != odd {
        k += d as i64;
    }
    let kf = k as f64;
    let rhs = theta_scaled(2.0 * df * w + df * kf * tau, 2.0 * df * df * tau, policy)?
        .mul(Complex64::new(df, 0.0))
        .mul_exp(I * PI * (kf * kf * tau / 2.0 + 2.0 * kf * w));
    Ok(gap_against(lhs, rhs, scale))
}

/// Residuals of `θ_[0](z,τ) = θ(2z, 2τ)` and
/// `θ_[1](z,τ) = exp(iπτ/2)·exp(2iπz)·θ_[0](z + τ/2, τ)`.
pub fn characteristic_shift_identities(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<(f64, f64)> {
    let t0 = theta_char0_scaled(z, tau, policy)?;
    let r0 = relative_gap(t0, theta_scaled(2.0 * z, 2.0 * tau, policy)?);
    let t1 = theta_char1_scaled(z, tau, policy)?;
    let shifted = theta_char0_scaled(z + tau / 2.0, tau, policy)?.mul_exp(I * PI * (tau / 2.0 + 2.0 * z));
    Ok((r0, relative_gap(t1, shifted)))
}

/// `θ(z,τ)² = θ_[0](0,τ)·θ_[0](z,τ) + θ_[1](0,τ)·θ_[1](z,τ)`, relative to the
/// largest of the three products.
pub fn square_splitting_identity(z: Complex64, tau: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let th = theta_scaled(z, tau, policy)?;
    let sq = ScaledComplex { mantissa: th.mantissa * th.mantissa, log_scale: 2.0 * th.log_scale };
    let a = theta_char0_scaled(z, tau, policy)?.mul(theta_char0_scaled(zero, tau, policy)?.value());
    let b = theta_char1_scaled(z, tau, policy)?.mul(theta_char1_scaled(zero, tau, policy)?.value());
    let scale = sq.ln_norm().max(a.ln_norm()).max(b.ln_norm());
    Ok(gap_against(sq, a.add(b), scale))
}

/// `conj_fourier(f_{z̄}) = (λ₀/√d)·exp(4iπd²z²)·f_z`; holds for all positive
/// `a`, `b`.
pub fn conj_fourier_relation(p: &ThetaCriticalParams, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let d = p.modulus as f64;
    let lhs = theta_critical_function(p, z.conj(), policy)?.conj_fourier();
    let rhs = theta_critical_function(p, z, policy)?
        .mul(p.lambda0 / d.sqrt())
        .mul_exp(4.0 * I * PI * d * d * z * z);
    lhs.relative_gap(&rhs)
}

/// What the sampled function at a real point looks like.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPointReport {
    pub r: f64,
    /// Sampled function, normalized to sup-norm one.
    pub function: GroupFunction,
    pub criticality_residual: f64,
    /// Residual of `conj_fourier(f_r) = (λ₀/√d)·exp(4iπd²r²)·f_r`.
    pub relation_residual: f64,
    pub symmetry: Symmetry,
    /// Residual of `conj_fourier(g) = g` for the rescaled `g = β·f_r`.
    pub fixed_point_residual: f64,
}

/// At real `r` the relation makes `f_r` an eigenvector of the conjugate
/// Fourier transform, hence a fixed point after rescaling.
pub fn real_point_check(p: &ThetaCriticalParams, r: f64, policy: &TruncationPolicy) -> Result<RealPointReport> {
    let z = Complex64::new(r, 0.0);
    let f = theta_critical_function(p, z, policy)?;
    let relation_residual = conj_fourier_relation(p, z, policy)?;
    let fixed = rescale_to_fixed_point(&f.shape, 1)?;
    Ok(RealPointReport {
        r,
        criticality_residual: relative_criticality_residual(&f.shape, p.lambda0),
        relation_residual,
        symmetry: symmetry_class(&f.shape, 1e-10),
        fixed_point_residual: fixed.fixed_point_residual,
        function: f.shape,
    })
}

/// `θ(dλ̄₀z, −d²τ̄₀) = (λ₀/d)·exp(4iπd²z²)·θ(λ₀z, τ₀)`.
pub fn modular_relation(p: &ThetaCriticalParams, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let d = p.modulus as f64;
    let lhs = theta_scaled(d * p.lambda0.conj() * z, -d * d * p.tau0.conj(), policy)?;
    let rhs = theta_scaled(p.lambda0 * z, p.tau0, policy)?
        .mul(p.lambda0 / d)
        .mul_exp(4.0 * I * PI * d * d * z * z);
    Ok(relative_gap(lhs, rhs))
}

/// `σ₀τ₀ = −d²·τ̄₀`, relative to `|d²τ₀|`.
pub fn sigma0_relation(p: &ThetaCriticalParams) -> f64 {
    let d2 = (p.modulus * p.modulus) as f64;
    (sigma0(p.modulus).act(p.tau0) + d2 * p.tau0.conj()).norm() / (d2 * p.tau0.norm())
}

/// `max_k |4dk·τ̄₀ + dk − λ̄₀k/λ₀|` over `k = 0..d−1`, relative to `d²`.
pub fn linear_relation(p: &ThetaCriticalParams) -> f64 {
    let d = p.modulus as f64;
    let ratio = p.lambda0.conj() / p.lambda0;
    (0..p.modulus)
        .map(|k| {
            let k = k as f64;
            (4.0 * d * k * p.tau0.conj() + d * k - ratio * k).norm() / (d * d)
        })
        .fold(0.0, f64::max)
}

/// `(−1)^{(d²−1)/8}`.
fn odd_char_sign(d: u64) -> f64 {
    if (d * d - 1) / 8 % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `θ_[0](dλ̄₀z, −d²τ̄₀) = (λ₀/d)·exp(8iπd²z²)·θ_[0](λ₀z, τ₀)` and the same
/// for `θ_[1]` with the extra sign `(−1)^{(d²−1)/8}` on the left.
pub fn characteristic_modular_relations(
    p: &ThetaCriticalParams,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<(f64, f64)> {
    let d = p.modulus as f64;
    let w = d * p.lambda0.conj() * z;
    let t = -d * d * p.tau0.conj();
    let factor = |v: ScaledComplex| v.mul(p.lambda0 / d).mul_exp(8.0 * I * PI * d * d * z * z);
    let r0 = relative_gap(theta_char0_scaled(w, t, policy)?, factor(theta_char0_scaled(p.lambda0 * z, p.tau0, policy)?));
    let lhs1 = theta_char1_scaled(w, t, policy)?.mul(Complex64::new(odd_char_sign(p.modulus), 0.0));
    let r1 = relative_gap(lhs1, factor(theta_char1_scaled(p.lambda0 * z, p.tau0, policy)?));
    Ok((r0, r1))
}

/// `conj_fourier(f_{0,z̄})(2k) = (λ₀/√d)·exp(8iπd²z²)·f_{0,z}(k)` and the
/// `θ_[1]` analogue with the sign `(−1)^{(d²−1)/8}`.
pub fn characteristic_conj_fourier_relations(
    p: &ThetaCriticalParams,
    z: Complex64,
    policy: &TruncationPolicy,
) -> Result<(f64, f64)> {
    let d = p.modulus as f64;
    let bar = theta_char_functions(p, z.conj(), policy)?;
    let here = theta_char_functions(p, z, policy)?;
    let factor = |f: &ScaledFunction| f.mul(p.lambda0 / d.sqrt()).mul_exp(8.0 * I * PI * d * d * z * z);
    let r0 = bar.f0.conj_fourier().doubled_index().relative_gap(&factor(&here.f0))?;
    let lhs1 = bar.f1.conj_fourier().doubled_index().mul(Complex64::new(odd_char_sign(p.modulus), 0.0));
    let r1 = lhs1.relative_gap(&factor(&here.f1))?;
    Ok((r0, r1))
}

/// `conj_fourier(F_{z̄})(2k) = (λ₀³/(d√d))·exp(8iπd²z²)·F_z(k)` for
/// `F_z = f_z²`. Only expected under the integral flag.
pub fn square_conj_fourier_relation(p: &ThetaCriticalParams, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let d = p.modulus as f64;
    let lhs = theta_critical_function(p, z.conj(), policy)?.square().conj_fourier().doubled_index();
    let rhs = theta_critical_function(p, z, policy)?
        .square()
        .mul(p.lambda0.powu(3) / (d * d.sqrt()))
        .mul_exp(8.0 * I * PI * d * d * z * z);
    lhs.relative_gap(&rhs)
}

/// `F_z = θ_[0](0,τ₀)·f_{0,z} + θ_[1](0,τ₀)·f_{1,z}`.
pub fn square_decomposition(p: &ThetaCriticalParams, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let zero = Complex64::new(0.0, 0.0);
    let fs = theta_char_functions(p, z, policy)?;
    let c0 = theta_char0_scaled(zero, p.tau0, policy)?;
    let c1 = theta_char1_scaled(zero, p.tau0, policy)?;
    let rhs = fs.f0.mul_scaled(c0).add(&fs.f1.mul_scaled(c1))?;
    fs.square.relative_gap(&rhs)
}

/// Least-squares `c` with `g ≈ c·f`.
fn ratio(g: &GroupFunction, f: &GroupFunction) -> Complex64 {
    let num: Complex64 = f.values().iter().zip(g.values()).map(|(a, b)| a.conj() * b).sum();
    let den: f64 = f.values().iter().map(|a| a.norm_sqr()).sum();
    num / den
}

/// Recovers `λ` from Fourier data alone at a real point: with
/// `conj_fourier(f) = α·f` and `conj_fourier(f²)(2k) = β·f(k)²`, a
/// `λ`-critical `f` has `λ = β·√d/α²`.
pub fn lambda_from_fourier_data(p: &ThetaCriticalParams, r: f64, policy: &TruncationPolicy) -> Result<Complex64> {
    let f = theta_critical_function(p, Complex64::new(r, 0.0), policy)?.shape;
    let alpha = ratio(&crate::group::conj_fourier(&f), &f);
    let sq = f.square();
    let beta = ratio(&crate::group::conj_fourier(&sq).reindex(2)?, &sq);
    Ok(beta * (p.modulus as f64).sqrt() / (alpha * alpha))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealityReport {
    /// `λ₀·θ_[0](0, τ₀)`.
    pub char0_constant: Complex64,
    /// `λ₀·θ_[1](0, τ₀)`.
    pub char1_constant: Complex64,
    /// `|Im| / |·|` of the first constant.
    pub char0_off_axis: f64,
    /// Whether the second constant should be real (`d ≡ ±1 mod 8`) rather
    /// than purely imaginary.
    pub char1_expected_real: bool,
    /// Relative size of the component that should vanish.
    pub char1_off_axis: f64,
    /// `(a − b − d²)/2 ≡ (d² − 1)/4 mod 4`.
    pub congruence_holds: bool,
    pub pass: bool,
}

/// Reality of the characteristic constants at `τ₀`; needs the integral flag.
pub fn theta_constant_reality_check(p: &ThetaCriticalParams, policy: &TruncationPolicy, tol: f64) -> Result<RealityReport> {
    if !p.integral {
        return contract("reality of the theta constants needs integral parameters");
    }
    let zero = Complex64::new(0.0, 0.0);
    let c0 = p.lambda0 * theta_char0_scaled(zero, p.tau0, policy)?.value();
    let c1 = p.lambda0 * theta_char1_scaled(zero, p.tau0, policy)?.value();
    let d = p.modulus as i64;
    let char1_expected_real = matches!(d % 8, 1 | 7);
    let char0_off_axis = c0.im.abs() / c0.norm();
    let char1_off_axis = if char1_expected_real { c1.im.abs() } else { c1.re.abs() } / c1.norm();
    let (a, b) = (p.a.round() as i64, p.b.round() as i64);
    let congruence_holds = ((a - b - d * d) / 2 - (d * d - 1) / 4).rem_euclid(4) == 0;
    Ok(RealityReport {
        char0_constant: c0,
        char1_constant: c1,
        char0_off_axis,
        char1_expected_real,
        char1_off_axis,
        congruence_holds,
        pass: char0_off_axis <= tol && char1_off_axis <= tol && congruence_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::params::admissible_pairs;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pol() -> TruncationPolicy {
        TruncationPolicy::default()
    }

    #[test]
    fn finite_fourier_identities() {
        let (w, t) = (c(0.13, 0.07), c(0.21, 0.8));
        for d in [3u64, 5, 7] {
            for k in 0..d as i64 {
                assert!(finite_fourier_identity(w, t, d, k, &pol()).unwrap() < 1e-10);
                for odd in [false, true] {
                    assert!(finite_fourier_char_identity(w, t, d, k, odd, &pol()).unwrap() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn splitting_and_shift() {
        for (z, t) in [(c(0.1, 0.2), c(0.3, 0.5)), (c(-0.4, 0.05), c(-1.2, 0.9))] {
            let (a, b) = characteristic_shift_identities(z, t, &pol()).unwrap();
            assert!(a < 1e-12 && b < 1e-12);
            assert!(square_splitting_identity(z, t, &pol()).unwrap() < 1e-11);
        }
    }

    #[test]
    fn generic_parameter_identities() {
        let z = c(0.1, 0.05);
        for (d, a) in [(5u64, 1.7), (7, 4.0), (9, 5.0), (11, 2.2), (13, 9.0)] {
            let p = ThetaCriticalParams::new(d, a, d as f64 - a).unwrap();
            assert!(conj_fourier_relation(&p, z, &pol()).unwrap() < 1e-10);
            assert!(modular_relation(&p, z, &pol()).unwrap() < 1e-10);
            let (r5, r6) = characteristic_modular_relations(&p, z, &pol()).unwrap();
            assert!(r5 < 1e-10 && r6 < 1e-10, "{d} {a}: {r5} {r6}");
            let (r8, r9) = characteristic_conj_fourier_relations(&p, z, &pol()).unwrap();
            assert!(r8 < 1e-10 && r9 < 1e-10, "{d} {a}: {r8} {r9}");
            assert!(square_decomposition(&p, z, &pol()).unwrap() < 1e-10);
            assert!(sigma0_relation(&p) < 1e-12);
            assert!(linear_relation(&p) < 1e-12);
        }
    }

    #[test]
    fn square_relation_needs_integral_parameters() {
        let z = c(0.1, 0.05);
        let p = ThetaCriticalParams::new(5, 1.0, 4.0).unwrap();
        assert!(square_conj_fourier_relation(&p, z, &pol()).unwrap() < 1e-10);
        let p = ThetaCriticalParams::new(5, 1.7, 3.3).unwrap();
        assert!(square_conj_fourier_relation(&p, z, &pol()).unwrap() > 1e-4);
    }

    #[test]
    fn non_integral_witness_is_not_critical() {
        let p = ThetaCriticalParams::new(5, 1.7, 3.3).unwrap();
        let z = c(0.1, 0.05);
        assert!(conj_fourier_relation(&p, z, &pol()).unwrap() < 1e-10);
        let f = theta_critical_function(&p, z, &pol()).unwrap();
        assert!(relative_criticality_residual(&f.shape, p.lambda0) > 1e-4);
    }

    #[test]
    fn real_points() {
        for d in [5u64, 7, 9, 17] {
            for (a, _) in admissible_pairs(d) {
                let p = ThetaCriticalParams::from_integers(d, a).unwrap();
                for r in [0.0, 0.1, 0.37] {
                    let rep = real_point_check(&p, r, &pol()).unwrap();
                    assert!(rep.criticality_residual < 1e-8, "{d} {a} {r}");
                    assert!(rep.relation_residual < 1e-8);
                    assert!(rep.fixed_point_residual < 1e-8);
                }
                assert_eq!(real_point_check(&p, 0.0, &pol()).unwrap().symmetry, Symmetry::Symmetric);
                let lam = lambda_from_fourier_data(&p, 0.1, &pol()).unwrap();
                assert!((lam - p.lambda0).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn reality_of_constants() {
        for (d, a) in [(5u64, 1u64), (7, 4), (9, 1), (9, 5), (13, 9), (17, 1)] {
            let p = ThetaCriticalParams::from_integers(d, a).unwrap();
            let rep = theta_constant_reality_check(&p, &pol(), 1e-9).unwrap();
            assert!(rep.pass, "{d} {a}: {rep:?}");
            assert_eq!(rep.char1_expected_real, matches!(d % 8, 1 | 7));
        }
        let p = ThetaCriticalParams::new(5, 1.7, 3.3).unwrap();
        assert!(theta_constant_reality_check(&p, &pol(), 1e-9).is_err());
    }
}
