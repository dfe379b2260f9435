//! Shared numerical tolerances.

/// Identities that hold up to binary64 round-off of a handful of operations.
pub const EXACT: f64 = 1e-12;

/// Default tolerance for numerically checked identities.
pub const IDENTITY: f64 = 1e-9;

/// Two critical values closer than this are treated as equal.
pub const LAMBDA_DEDUP: f64 = 1e-8;

/// `|λ|` must be within this of `√d` for a value to be probed for fixed points.
pub const MODULUS_GATE: f64 = 1e-6;

/// Condition allowance in the theta residual budget.
pub const THETA_KAPPA: f64 = 1e3;

/// Residual budget for theta-derived identities: `max(1e-8, ε·d²·κ)`.
pub fn theta_budget(eps: f64, d: u64) -> f64 {
    (eps * (d * d) as f64 * THETA_KAPPA).max(1e-8)
}
