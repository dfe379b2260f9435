//! The `d = 17` family `λ² − 2cλ + 17 = 0` with `c` a root of a degree-ten
//! integer polynomial: critical values of modulus `√17` that are not Weil
//! numbers, one of which admits a conjugate Fourier fixed point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::config::{SearchConfig, SymmetryConstraint};
use super::poly::{poly_roots, weil_check, AlgebraicSpec, RootSelector, WeilReport};
use super::search::{find_critical_functions, StartStats, Witness};
use crate::error::Result;
use crate::group::rescale_to_fixed_point;

/// Coefficients of the polynomial in `c`, highest degree first.
pub const NON_WEIL_C_POLY: [f64; 11] = [1.0, -6.0, -15.0, 136.0, -62.0, -628.0, 586.0, 232.0, 733.0, -246.0, 293.0];

/// Where the fixed-point member is expected.
pub const NON_WEIL_HINT: Complex64 = Complex64::new(3.942, 1.209);

pub fn non_weil_spec(selector: RootSelector) -> AlgebraicSpec {
    AlgebraicSpec::QuadraticOver { inner: NON_WEIL_C_POLY.to_vec(), k: 2.0, m: 17.0, selector }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSearch {
    pub lambda: Complex64,
    pub witnesses: Vec<Witness>,
    pub stats: StartStats,
    /// Residual of the best conjugate Fourier fixed point obtained by
    /// rescaling a witness; `None` when there is no witness.
    pub best_fixed_point_residual: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonWeilReport {
    pub c_roots: Vec<Complex64>,
    /// Real roots `c` with `|c| < √17`.
    pub real_c_inside: Vec<f64>,
    pub weil: WeilReport,
    pub flagged_lambda: Complex64,
    pub flagged_distance: f64,
    pub searches: Vec<LambdaSearch>,
    pub expected_witnesses: usize,
    pub witness_count: usize,
    pub fixed_point_found: bool,
    /// Fewer witnesses than expected were found within the budget.
    pub incomplete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonWeilBudget {
    pub starts: usize,
    pub orbit_closure: bool,
    /// Search every modulus-`√17` value rather than only the flagged one.
    pub all_lambdas: bool,
}

impl Default for NonWeilBudget {
    fn default() -> Self {
        Self { starts: 2000, orbit_closure: true, all_lambdas: false }
    }
}

/// Antisymmetric search with `f(1) = 1` at the values of modulus `√17`.
pub fn non_weil_probe(seed: u64, budget: NonWeilBudget) -> Result<NonWeilReport> {
    let c_roots = poly_roots(&NON_WEIL_C_POLY)?;
    let bound = 17f64.sqrt();
    let real_c_inside: Vec<f64> = c_roots.iter().filter(|c| c.im == 0.0 && c.re.abs() < bound).map(|c| c.re).collect();
    let weil = weil_check(&non_weil_spec(RootSelector::All), 17)?;
    let flagged_lambda = non_weil_spec(RootSelector::Nearest { target: NON_WEIL_HINT }).values()?[0];

    let targets: Vec<Complex64> = if budget.all_lambdas {
        weil.roots.iter().copied().filter(|l| (l.norm() - bound).abs() <= 1e-7).collect()
    } else {
        vec![flagged_lambda]
    };
    let mut searches = Vec::new();
    for lambda in targets {
        let mut cfg = SearchConfig::new(17, lambda);
        cfg.symmetry = SymmetryConstraint::Antisymmetric;
        cfg.starts = budget.starts;
        cfg.seed = seed;
        cfg.orbit_closure = budget.orbit_closure;
        cfg.convergence_tol = 1e-11;
        let res = find_critical_functions(&cfg)?;
        let best_fixed_point_residual = res
            .witnesses
            .iter()
            .filter_map(|w| rescale_to_fixed_point(&w.function, 1).ok())
            .map(|r| r.proportionality_residual)
            .min_by(f64::total_cmp);
        searches.push(LambdaSearch { lambda, witnesses: res.witnesses, stats: res.stats, best_fixed_point_residual });
    }
    let flagged = searches
        .iter()
        .find(|s| s.lambda == flagged_lambda)
        .expect("flagged value is always searched");
    let witness_count = flagged.witnesses.len();
    let fixed_point_found = flagged.best_fixed_point_residual.is_some_and(|r| r < 1e-8);
    let expected_witnesses = 8;
    Ok(NonWeilReport {
        c_roots,
        real_c_inside,
        weil,
        flagged_distance: (flagged_lambda - NON_WEIL_HINT).norm(),
        flagged_lambda,
        witness_count,
        fixed_point_found,
        incomplete: witness_count < expected_witnesses,
        expected_witnesses,
        searches,
    })
}
