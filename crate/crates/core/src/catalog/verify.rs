use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::records::{Construction, CriticalValueRecord, Elementary, ValueClass, VerifyStatus};
use crate::arith::units;
use crate::characters::characters_with_lambda;
use crate::error::{contract, Result};
use crate::gaussians::{gaussian_function, GaussianParams};
use crate::group::{relative_criticality_residual, rescale_to_fixed_point, GroupFunction, Symmetry};
use crate::solver::{
    find_critical_functions, probe_bd, probe_bdo, Normalization, ProbeOutcome, SearchConfig, SymmetryConstraint,
};
use crate::theta::{admissible_pairs, real_point_check, theta_critical_function, ThetaCriticalParams, TruncationPolicy};
use crate::tol;

/// Tolerance on the fixed-point proportionality fit.
const FIXED_POINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyBudget {
    pub starts: usize,
    pub seed: u64,
}

impl Default for VerifyBudget {
    fn default() -> Self {
        Self { starts: 400, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckLine {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckLine {
    /// Non-finite residuals are stored as `f64::MAX` so that reports stay
    /// valid JSON; they always fail.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let residual = if residual.is_finite() { residual } else { f64::MAX };
        Self { name: name.into(), residual, tolerance, pass: residual <= tolerance }
    }

    /// A boolean check, reported as residual 0 or 1 against tolerance 0.
    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordReport {
    pub modulus: u64,
    pub value: String,
    pub lambdas: Vec<Complex64>,
    pub construction: String,
    pub status: VerifyStatus,
    pub checks: Vec<CheckLine>,
    /// Witness for the first value, when one was built or found.
    pub witness: Option<GroupFunction>,
    pub notes: Vec<String>,
}

fn policy() -> TruncationPolicy {
    TruncationPolicy::default()
}

/// The theta witness at `r = 0`, normalized to sup-norm one.
fn theta_witness(d: u64, a: u64, conjugate: bool) -> Result<GroupFunction> {
    let p = ThetaCriticalParams::from_integers(d, a)?;
    let f = theta_critical_function(&p, Complex64::new(0.0, 0.0), &policy())?.shape;
    Ok(if conjugate { f.conj() } else { f })
}

/// Closed-form witness for `λ` on `ℤ/d`; `None` for searched constructions.
pub fn build_witness(d: u64, lambda: Complex64, c: &Construction) -> Result<Option<GroupFunction>> {
    let f = match c {
        Construction::Elementary { which: Elementary::PointMass } => GroupFunction::delta(d, 0)?,
        Construction::Elementary { which: Elementary::Constant } => GroupFunction::constant(d, Complex64::new(1.0, 0.0))?,
        Construction::Gaussian { u } => gaussian_function(&GaussianParams::new(d, *u, 0)?),
        Construction::Dirichlet => match characters_with_lambda(d, lambda, tol::IDENTITY)?.first() {
            Some(chi) => chi.as_function(),
            None => return contract(format!("no character with primitive square has λ_χ = {lambda} mod {d}")),
        },
        Construction::Theta { a, conjugate } => theta_witness(d, *a, *conjugate)?,
        Construction::Lift { from, inner } => {
            if d % from != 0 {
                return contract(format!("{from} does not divide {d}"));
            }
            let inner_lambda = lambda * (*from as f64 / d as f64);
            let Some(g) = build_witness(*from, inner_lambda, inner)? else { return Ok(None) };
            GroupFunction::from_fn(d, |k| g.at(k as i64))?
        }
        Construction::Embed { from, inner } => {
            if d % from != 0 {
                return contract(format!("{from} does not divide {d}"));
            }
            let Some(g) = build_witness(*from, lambda, inner)? else { return Ok(None) };
            let step = (d / from) as usize;
            GroupFunction::from_fn(d, |k| if k % step == 0 { g.at((k / step) as i64) } else { Complex64::new(0.0, 0.0) })?
        }
        Construction::Product { factors } => {
            let mut parts = Vec::new();
            let mut m = 1;
            for fac in factors {
                let Some(g) = build_witness(fac.modulus, fac.value.eval(None)?, &fac.construction)? else {
                    return Ok(None);
                };
                m *= fac.modulus;
                parts.push(g);
            }
            if m != d {
                return contract(format!("factor moduli multiply to {m}, not {d}"));
            }
            GroupFunction::from_fn(d, |k| parts.iter().map(|g| g.at(k as i64)).product())?
        }
        Construction::Solver { .. } | Construction::Polynomial { .. } => return Ok(None),
    };
    Ok(Some(f))
}

/// Smallest unit `q` for which `f` satisfies `conj_fourier(f) ∝ f_q`.
fn fixed_point_unit(f: &GroupFunction) -> Result<Option<(u64, f64)>> {
    for q in units(f.modulus()) {
        let r = rescale_to_fixed_point(f, q as i64)?;
        if r.proportionality_residual <= FIXED_POINT_TOL {
            return Ok(Some((q, r.proportionality_residual)));
        }
    }
    Ok(None)
}

fn verify_constructive(rec: &CriticalValueRecord, lambda: Complex64, report: &mut RecordReport) -> Result<()> {
    let d = rec.modulus;
    let f = build_witness(d, lambda, &rec.construction)?.expect("constructive");
    report.checks.push(CheckLine::new("criticality", relative_criticality_residual(&f, lambda), tol::IDENTITY));
    if rec.has_class(ValueClass::Bdo) {
        let r = rescale_to_fixed_point(&f, 1)?;
        report.checks.push(CheckLine::new("conj-fourier fixed point", r.proportionality_residual, FIXED_POINT_TOL));
    } else if rec.has_class(ValueClass::Bd) {
        match fixed_point_unit(&f)? {
            Some((q, res)) => {
                report.checks.push(CheckLine::new(format!("conj-fourier fixed point up to q = {q}"), res, FIXED_POINT_TOL));
            }
            None => report.checks.push(CheckLine::flag("conj-fourier fixed point up to a unit", false)),
        }
    }
    report.witness = Some(f);
    Ok(())
}

fn search_config(d: u64, lambda: Complex64, symmetry: SymmetryConstraint, budget: VerifyBudget) -> SearchConfig {
    let mut cfg = SearchConfig::new(d, lambda);
    cfg.symmetry = symmetry;
    cfg.normalization = Normalization::UnitNorm;
    cfg.starts = budget.starts;
    cfg.seed = budget.seed;
    cfg
}

/// Searches for the strongest claimed class; returns whether a witness
/// turned up.
fn verify_searched(
    rec: &CriticalValueRecord,
    lambda: Complex64,
    symmetry: SymmetryConstraint,
    budget: VerifyBudget,
    report: &mut RecordReport,
) -> Result<bool> {
    let cfg = search_config(rec.modulus, lambda, symmetry, budget);
    let label = format!("{:.6}{:+.6}i", lambda.re, lambda.im);
    let probe = if rec.has_class(ValueClass::Bdo) {
        Some(("fixed point", probe_bdo(&cfg)?))
    } else if rec.has_class(ValueClass::Bd) {
        Some(("fixed point up to a unit", probe_bd(&cfg)?))
    } else {
        None
    };
    let witness = match probe {
        Some((what, ProbeOutcome::Found { witness, q, .. })) => {
            report.notes.push(format!("{label}: {what} found with q = {q}"));
            Some(witness)
        }
        Some((what, ProbeOutcome::NoneFound { note, .. })) => {
            report.notes.push(format!("{label}: {what}: {note}"));
            None
        }
        Some((_, ProbeOutcome::Rejected { reason })) => {
            report.notes.push(format!("{label}: {reason}"));
            None
        }
        None => {
            let res = find_critical_functions(&cfg)?;
            report.notes.push(format!("{label}: {} witnesses from {} starts", res.witnesses.len(), res.stats.starts));
            res.witnesses.into_iter().next()
        }
    };
    match witness {
        Some(w) => {
            let res = relative_criticality_residual(&w.function, lambda);
            report.checks.push(CheckLine::new(format!("criticality at {label}"), res, tol::IDENTITY));
            if report.witness.is_none() {
                report.witness = Some(w.function);
            }
            Ok(true)
        }
        None => Ok(false),
    }
}

/// Builds or searches for a witness of every value in the record and checks
/// the claimed classes. The verdict is never "disproved": a failed search
/// only makes the record inconclusive.
pub fn verify_record(rec: &CriticalValueRecord, budget: VerifyBudget) -> Result<RecordReport> {
    let lambdas = rec.lambdas()?;
    let mut report = RecordReport {
        modulus: rec.modulus,
        value: rec.value_label(),
        lambdas: lambdas.clone(),
        construction: rec.construction.label().to_string(),
        status: VerifyStatus::Inconclusive,
        checks: Vec::new(),
        witness: None,
        notes: Vec::new(),
    };
    let sqrt_d = (rec.modulus as f64).sqrt();
    if rec.has_class(ValueClass::Bd) || rec.has_class(ValueClass::Bdo) {
        for l in &lambdas {
            report.checks.push(CheckLine::new("|λ| = √d", (l.norm() - sqrt_d).abs(), tol::IDENTITY));
        }
    }
    if rec.construction.is_constructive() {
        for &l in &lambdas {
            verify_constructive(rec, l, &mut report)?;
        }
        report.status = if report.checks.iter().all(|c| c.pass) { VerifyStatus::Verified } else { VerifyStatus::Inconclusive };
        return Ok(report);
    }
    let symmetry = match rec.construction {
        Construction::Solver { symmetry } | Construction::Polynomial { symmetry } => symmetry,
        _ => unreachable!("non-constructive records are searched"),
    };
    let mut missing = 0;
    for &l in &lambdas {
        if l.norm() > rec.modulus as f64 + 1e-9 {
            report.notes.push(format!("{l}: |λ| exceeds d, skipped"));
            missing += 1;
            continue;
        }
        if !verify_searched(rec, l, symmetry, budget, &mut report)? {
            missing += 1;
        }
    }
    report.status = if missing == 0 && report.checks.iter().all(|c| c.pass) {
        VerifyStatus::WitnessFound
    } else {
        if missing > 0 {
            report.notes.push(format!("{missing} of {} values without a witness at this budget", lambdas.len()));
        }
        VerifyStatus::Inconclusive
    };
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub modulus: u64,
    pub a: u64,
    pub b: u64,
    pub lambda: Complex64,
    pub criticality_residual: f64,
    pub relation_residual: f64,
    pub fixed_point_residual: f64,
    pub symmetric: bool,
    /// The same checks for the pointwise conjugate and `λ̄₀`.
    pub conjugate_criticality_residual: f64,
    pub conjugate_fixed_point_residual: f64,
    pub pass: bool,
}

/// Theta witnesses at `r = 0` for every admissible `(d, a, b)` with
/// `d ≤ d_max`.
pub fn admissible_theta_sweep(d_max: u64) -> Result<Vec<SweepEntry>> {
    if d_max < 3 || d_max % 2 == 0 {
        return contract(format!("d_max must be odd and at least 3, got {d_max}"));
    }
    let mut out = Vec::new();
    for d in (3..=d_max).step_by(2) {
        for (a, b) in admissible_pairs(d) {
            let p = ThetaCriticalParams::from_integers(d, a)?;
            let rp = real_point_check(&p, 0.0, &policy())?;
            let g = rp.function.conj();
            let conj_fixed = rescale_to_fixed_point(&g, 1)?;
            let conjugate_criticality_residual = relative_criticality_residual(&g, p.lambda0.conj());
            let budget = tol::theta_budget(f64::EPSILON, d);
            let symmetric = matches!(rp.symmetry, Symmetry::Symmetric);
            let pass = rp.criticality_residual <= budget
                && rp.relation_residual <= budget
                && rp.fixed_point_residual <= budget
                && conjugate_criticality_residual <= budget
                && conj_fixed.fixed_point_residual <= budget
                && symmetric;
            out.push(SweepEntry {
                modulus: d,
                a,
                b,
                lambda: p.lambda0,
                criticality_residual: rp.criticality_residual,
                relation_residual: rp.relation_residual,
                fixed_point_residual: rp.fixed_point_residual,
                symmetric,
                conjugate_criticality_residual,
                conjugate_fixed_point_residual: conj_fixed.fixed_point_residual,
                pass,
            });
        }
    }
    Ok(out)
}

/// Runs the searches for a non-critical value; finding nothing is the
/// consistent outcome.
pub fn negative_fixture_search(d: u64, lambda: Complex64, budget: VerifyBudget) -> Result<usize> {
    let cfg = search_config(d, lambda, SymmetryConstraint::None, budget);
    Ok(find_critical_functions(&cfg)?.witnesses.len())
}
