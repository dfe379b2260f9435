//! Jacobi theta functions and the critical functions sampled from them.
//!
//! For `a + b = d` with `a, b > 0`, put `λ₀ = √a + i√b` and
//! `τ₀ = (λ₀² − d²)/(4d²)`. The function
//!
//! ```text
//! f_z(ℓ) = θ(λ₀z + ((d+1)/(2d))·ℓ, τ₀)
//! ```
//!
//! satisfies `conj_fourier(f_{z̄}) = (λ₀/√d)·exp(4iπd²z²)·f_z` for every such
//! pair, and is `λ₀`-critical when `a`, `b` are integers with
//! `a ≡ (d+1)²/4 mod 4`.

mod identities;
mod params;
mod sampled;
mod series;

pub use identities::*;
pub use params::{admissible_pairs, hecke_transform_check, sigma0, sigma1, SL2Matrix, ThetaCriticalParams};
pub use sampled::{theta_char_functions, theta_critical_function, ScaledFunction, ThetaCharFunctions};
pub use series::{
    relative_gap, theta, theta_char0, theta_char0_scaled, theta_char1, theta_char1_scaled, theta_scaled,
    ScaledComplex, TruncationPolicy,
};
