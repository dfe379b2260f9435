use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{FixedPoint, Normalization, SearchConfig};
use super::system::System;
use crate::arith::units;
use crate::error::Result;
use crate::group::{conj_fourier, reindex, relative_criticality_residual, GroupFunction};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub function: GroupFunction,
    /// Relative criticality residual recomputed by direct convolution.
    pub criticality_residual: f64,
    /// Largest violation of the declared constraints.
    pub constraint_residual: f64,
    /// Index of the start that produced it; `None` for orbit images.
    pub start: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StartStats {
    pub starts: usize,
    pub converged: usize,
    pub diverged: usize,
    pub stalled: usize,
    pub duplicates: usize,
    pub orbit_added: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub witnesses: Vec<Witness>,
    pub stats: StartStats,
    pub notes: Vec<String>,
}

enum Outcome {
    Converged,
    Diverged,
    Stalled,
}

/// Levenberg–Marquardt on the real system, damping raised whenever a step
/// fails to decrease the residual.
fn levenberg_marquardt(sys: &System, mut x: DVector<f64>, max_iter: usize) -> Option<DVector<f64>> {
    let n = sys.n_unknowns();
    if n == 0 {
        return Some(x);
    }
    let mut r = sys.residuals(&x);
    let mut cost = r.norm_squared();
    let mut mu = 1e-3;
    for _ in 0..max_iter {
        if cost < 1e-30 {
            break;
        }
        let jac = sys.jacobian(&x);
        let jt = jac.transpose();
        let a = &jt * &jac;
        let g = &jt * &r;
        let scale = a.diagonal().amax().max(1e-300);
        let mut damped: DMatrix<f64> = a.clone();
        for i in 0..n {
            damped[(i, i)] += mu * scale;
        }
        let Some(chol) = damped.cholesky() else {
            mu *= 10.0;
            continue;
        };
        let step = -chol.solve(&g);
        let x_new = &x + &step;
        let r_new = sys.residuals(&x_new);
        let cost_new = r_new.norm_squared();
        if !cost_new.is_finite() || x_new.amax() > 1e8 {
            return None;
        }
        if cost_new < cost {
            let small = step.norm() < 1e-14 * (1.0 + x.norm());
            x = x_new;
            r = r_new;
            cost = cost_new;
            mu = (mu / 3.0).max(1e-15);
            if small {
                break;
            }
        } else {
            mu *= 4.0;
            if mu > 1e12 {
                break;
            }
        }
    }
    Some(x)
}

struct Checker<'a> {
    cfg: &'a SearchConfig,
    sys: System,
}

impl Checker<'_> {
    fn witness(&self, x: &DVector<f64>, start: Option<usize>) -> Option<Witness> {
        let f = self.sys.function(x);
        if f.max_abs() == 0.0 || !f.values().iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return None;
        }
        let crit = relative_criticality_residual(&f, self.cfg.lambda);
        let mut constraint = self.sys.fixed_point_violation(&f);
        if self.cfg.normalization == Normalization::UnitNorm {
            constraint = constraint.max((f.norm_l2() - 1.0).abs());
        }
        let tol = self.cfg.convergence_tol;
        (crit <= tol && constraint <= tol).then_some(Witness {
            function: f,
            criticality_residual: crit,
            constraint_residual: constraint,
            start,
        })
    }

    fn run_start(&self, index: usize) -> (Outcome, Option<Witness>) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(index as u64);
        let n = self.sys.n_unknowns();
        let mut x = DVector::from_fn(n, |_, _| {
            let v: f64 = StandardNormal.sample(&mut rng);
            v / std::f64::consts::SQRT_2
        });
        if self.cfg.normalization == Normalization::UnitNorm {
            let f = self.sys.function(&x);
            let s = f.norm_l2();
            if s > 0.0 {
                x /= s;
            }
        }
        match levenberg_marquardt(&self.sys, x, self.cfg.max_iterations) {
            None => (Outcome::Diverged, None),
            Some(x) => match self.witness(&x, Some(index)) {
                Some(w) => (Outcome::Converged, Some(w)),
                None => (Outcome::Stalled, None),
            },
        }
    }

    fn normalize(&self, f: &GroupFunction) -> Option<GroupFunction> {
        match self.cfg.normalization {
            Normalization::FirstValueOne => {
                let v = f.at(1);
                (v.norm() > 1e-9 * f.max_abs()).then(|| f.scale(v.inv()))
            }
            Normalization::UnitNorm => {
                let mut g = f.scale(Complex64::new(1.0 / f.norm_l2(), 0.0));
                if self.cfg.fixed_point == FixedPoint::None {
                    let v = g.at(1);
                    if v.norm() < 1e-9 {
                        return None;
                    }
                    g = g.scale(v.conj() / v.norm());
                }
                Some(g)
            }
        }
    }

    fn same(&self, f: &GroupFunction, g: &GroupFunction) -> bool {
        let tol = self.cfg.dedup_tol * f.norm_l2().max(1.0);
        let dist = f.distance(g).expect("same modulus");
        if dist <= tol {
            return true;
        }
        // unit-norm witnesses are only defined up to sign
        self.cfg.normalization == Normalization::UnitNorm
            && f.add(g).expect("same modulus").norm_l2() <= tol
    }
}

/// Canonical order: lexicographic on values rounded to a fine grid.
fn canonical_key(f: &GroupFunction) -> Vec<i64> {
    f.values()
        .iter()
        .flat_map(|v| [(v.re * 1e8).round() as i64, (v.im * 1e8).round() as i64])
        .collect()
}

/// Seeded multistart search for `λ`-critical functions under the given
/// constraints. The result depends only on the configuration, not on how
/// the starts are scheduled across threads.
pub fn find_critical_functions(cfg: &SearchConfig) -> Result<SearchResult> {
    cfg.validate()?;
    let checker = Checker { cfg, sys: System::new(cfg) };
    let runs: Vec<(Outcome, Option<Witness>)> = (0..cfg.starts).into_par_iter().map(|i| checker.run_start(i)).collect();

    let mut stats = StartStats { starts: cfg.starts, ..Default::default() };
    let mut found: Vec<Witness> = Vec::new();
    for (outcome, w) in runs {
        match outcome {
            Outcome::Diverged => stats.diverged += 1,
            Outcome::Stalled => stats.stalled += 1,
            Outcome::Converged => {
                stats.converged += 1;
                let w = w.expect("converged start carries a witness");
                if found.iter().any(|g| checker.same(&g.function, &w.function)) {
                    stats.duplicates += 1;
                } else {
                    found.push(w);
                }
            }
        }
    }

    if cfg.orbit_closure {
        let d = cfg.modulus;
        let self_dual = (cfg.lambda.norm_sqr() - d as f64).abs() < 1e-9 * d as f64;
        let mut i = 0;
        while i < found.len() {
            let f = found[i].function.clone();
            let mut images: Vec<GroupFunction> = units(d)
                .into_iter()
                .skip(1)
                .map(|q| reindex(&f, q as i64).expect("unit"))
                .collect();
            if self_dual {
                images.push(conj_fourier(&f));
            }
            for g in images {
                let Some(g) = checker.normalize(&g) else { continue };
                if found.iter().any(|h| checker.same(&h.function, &g)) {
                    continue;
                }
                let x0 = checker.sys.params_of(&g);
                let Some(x) = levenberg_marquardt(&checker.sys, x0, 20) else { continue };
                if let Some(w) = checker.witness(&x, None) {
                    if !found.iter().any(|h| checker.same(&h.function, &w.function)) {
                        found.push(w);
                        stats.orbit_added += 1;
                    }
                }
            }
            i += 1;
        }
    }

    found.sort_by(|a, b| canonical_key(&a.function).cmp(&canonical_key(&b.function)));
    let mut notes = Vec::new();
    if found.is_empty() {
        notes.push(format!(
            "no witness found in {} starts; a numerical search cannot rule out existence",
            cfg.starts
        ));
    } else {
        notes.push("witness list is what the search found; it is not certified complete".to_string());
    }
    Ok(SearchResult { witnesses: found, stats, notes })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ProbeOutcome {
    Found {
        witness: Witness,
        /// Reindexing unit: `conj_fourier(f) = f_q`; `1` for a fixed point.
        q: u64,
        stats: StartStats,
    },
    NoneFound {
        stats: StartStats,
        note: String,
    },
    Rejected {
        reason: String,
    },
}

impl ProbeOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, Self::Found { .. })
    }
}

fn weil_precondition(d: u64, lambda: Complex64) -> Option<String> {
    let gap = (lambda.norm() - (d as f64).sqrt()).abs();
    (gap > 1e-6).then(|| format!("|λ| = {} differs from √{d}; no conjugate Fourier witness can exist", lambda.norm()))
}

fn probe_with(base: &SearchConfig, q: u64) -> Result<(Option<Witness>, StartStats)> {
    let mut cfg = base.clone();
    cfg.normalization = Normalization::UnitNorm;
    cfg.fixed_point = if q == 1 { FixedPoint::ConjFourier } else { FixedPoint::ConjFourierWithQ(q) };
    let res = find_critical_functions(&cfg)?;
    Ok((res.witnesses.into_iter().next(), res.stats))
}

/// Searches for `f` with `conj_fourier(f) = f`. `base` supplies the budget,
/// seed and symmetry; its normalization and fixed-point fields are
/// overridden.
pub fn probe_bdo(base: &SearchConfig) -> Result<ProbeOutcome> {
    if let Some(reason) = weil_precondition(base.modulus, base.lambda) {
        return Ok(ProbeOutcome::Rejected { reason });
    }
    let (w, stats) = probe_with(base, 1)?;
    Ok(match w {
        Some(witness) => ProbeOutcome::Found { witness, q: 1, stats },
        None => ProbeOutcome::NoneFound {
            stats,
            note: "no fixed point found; this is not a proof that none exists".into(),
        },
    })
}

/// Tries the units `q` in increasing order, looking for `conj_fourier(f) = f_q`.
pub fn probe_bd(base: &SearchConfig) -> Result<ProbeOutcome> {
    if let Some(reason) = weil_precondition(base.modulus, base.lambda) {
        return Ok(ProbeOutcome::Rejected { reason });
    }
    let mut total = StartStats::default();
    for q in units(base.modulus) {
        let (w, stats) = probe_with(base, q)?;
        total.starts += stats.starts;
        total.converged += stats.converged;
        total.diverged += stats.diverged;
        total.stalled += stats.stalled;
        total.duplicates += stats.duplicates;
        if let Some(witness) = w {
            return Ok(ProbeOutcome::Found { witness, q, stats: total });
        }
    }
    Ok(ProbeOutcome::NoneFound {
        stats: total,
        note: "no unit q produced a witness; this is not a proof that none exists".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussians::{eta_pow, gaussian_function, GaussianParams};
    use crate::solver::config::SymmetryConstraint;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_solution() {
        let mut cfg = SearchConfig::new(5, c(5.0, 0.0));
        cfg.starts = 200;
        let res = find_critical_functions(&cfg).unwrap();
        let ones = GroupFunction::constant(5, c(1.0, 0.0)).unwrap();
        assert!(res.witnesses.iter().any(|w| w.function.distance(&ones).unwrap() < 1e-8));
    }

    #[test]
    fn remark_minus_sqrt5_has_ten_witnesses() {
        let mut cfg = SearchConfig::new(5, c(-5f64.sqrt(), 0.0));
        cfg.seed = 7;
        let res = find_critical_functions(&cfg).unwrap();
        assert_eq!(res.witnesses.len(), 10, "{:?}", res.stats);
        for u in [2, 3] {
            for v in 0..5 {
                let g = gaussian_function(&GaussianParams::new(5, u, v).unwrap());
                let g = g.scale(g.at(1).inv());
                assert!(res.witnesses.iter().any(|w| w.function.distance(&g).unwrap() < 1e-6));
            }
        }
        for w in &res.witnesses {
            assert!(w.criticality_residual <= 1e-11);
        }
    }

    #[test]
    fn d3_simplest_value() {
        let mut cfg = SearchConfig::new(3, c(0.0, 3f64.sqrt()));
        cfg.starts = 100;
        let res = find_critical_functions(&cfg).unwrap();
        let h = GroupFunction::from_fn(3, |k| eta_pow(3, (k * k) as i64)).unwrap();
        let h = h.scale(h.at(1).inv());
        assert!(res.witnesses.iter().any(|w| w.function.distance(&h).unwrap() < 1e-8));
    }

    #[test]
    fn deterministic() {
        let mut cfg = SearchConfig::new(7, c(2.0, 3f64.sqrt()));
        cfg.starts = 150;
        cfg.seed = 3;
        let a = find_critical_functions(&cfg).unwrap();
        let b = find_critical_functions(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn probes_at_d5() {
        let mut cfg = SearchConfig::new(5, c(5f64.sqrt(), 0.0));
        cfg.starts = 300;
        assert!(probe_bdo(&cfg).unwrap().is_found());
        cfg.lambda = c(1.0, 2.0);
        assert!(probe_bdo(&cfg).unwrap().is_found());
        cfg.lambda = c(-5f64.sqrt(), 0.0);
        assert!(matches!(probe_bdo(&cfg).unwrap(), ProbeOutcome::NoneFound { .. }));
        match probe_bd(&cfg).unwrap() {
            ProbeOutcome::Found { q, witness, .. } => {
                assert!(q == 2 || q == 3);
                let f = &witness.function;
                assert!(conj_fourier(f).max_abs_diff(&reindex(f, q as i64).unwrap()).unwrap() < 1e-10);
            }
            other => panic!("{other:?}"),
        }
        cfg.lambda = c(1.0, 0.0);
        assert!(matches!(probe_bdo(&cfg).unwrap(), ProbeOutcome::Rejected { .. }));
    }

    #[test]
    fn symmetric_constraint_respected() {
        let mut cfg = SearchConfig::new(7, c(2.0, 3f64.sqrt()));
        cfg.symmetry = SymmetryConstraint::Symmetric;
        cfg.starts = 200;
        let res = find_critical_functions(&cfg).unwrap();
        assert!(!res.witnesses.is_empty());
        for w in &res.witnesses {
            let f = &w.function;
            assert!(f.max_abs_diff(&f.negate_index()).unwrap() == 0.0);
        }
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = SearchConfig::new(5, c(1.0, 0.0));
        cfg.starts = 0;
        assert!(find_critical_functions(&cfg).is_err());
        let mut cfg = SearchConfig::new(5, c(1.0, 0.0));
        cfg.fixed_point = FixedPoint::ConjFourierWithQ(5);
        cfg.normalization = Normalization::UnitNorm;
        assert!(find_critical_functions(&cfg).is_err());
        let cfg = SearchConfig::new(5, c(100.0, 0.0));
        assert!(find_critical_functions(&cfg).is_err());
    }
}
