use convsq::catalog::{
    parse_lambda, records_for, verify_record, write_csv, CheckLine, CriticalValueRecord, VerifyBudget,
    VerifyStatus,
};
use convsq::characters::{count_primitive_square, critical_characters, dedup_values};
use convsq::gaussians::{
    classical_gauss_sum, gauss_sum_closed_form, gaussian_conj_fourier_factor, gaussian_function, GaussianParams,
};
use convsq::group::{conj_fourier, relative_criticality_residual, rescale_to_fixed_point};
use convsq::solver::{
    non_weil_probe, find_critical_functions, non_weil_spec, poly_roots, probe_bd, probe_bdo, weil_check, FixedPoint,
    NonWeilBudget, Normalization, ProbeOutcome, RootSelector, SearchConfig, SymmetryConstraint, Witness,
    NON_WEIL_C_POLY,
};
use convsq::theta::{conj_fourier_relation, real_point_check, ThetaCriticalParams, TruncationPolicy};
use convsq::{tol, Complex64, Symmetry};
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{fmt_complex, ReportDocument, WitnessOut};
use crate::{
    ConstructionArg, Failure, FamilyArg, NormalizationArg, Produced, SearchArgs, SymmetryArg, TableArgs, VerifyArgs,
};

const FIXED_POINT_TOL: f64 = 1e-8;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Io(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Failure::Io(e.to_string()))
}

#[derive(Serialize)]
struct CheckRow<'a> {
    name: &'a str,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

fn checks_csv(report: &ReportDocument) -> Result<Vec<u8>, Failure> {
    csv_bytes(report.checks.iter().map(|c| CheckRow {
        name: &c.name,
        residual: c.residual,
        tolerance: c.tolerance,
        pass: c.pass,
    }))
}

#[derive(Serialize)]
struct ValueRow<'a> {
    witness: &'a str,
    k: usize,
    re: f64,
    im: f64,
}

fn witnesses_csv(ws: &[WitnessOut]) -> Result<Vec<u8>, Failure> {
    csv_bytes(ws.iter().flat_map(|w| {
        w.values.iter().enumerate().map(move |(k, z)| ValueRow { witness: &w.label, k, re: z.re, im: z.im })
    }))
}

pub(crate) fn verify(a: &VerifyArgs, echo: Vec<String>) -> Result<Produced, Failure> {
    let inputs = json!({
        "d": a.d,
        "construction": format!("{:?}", a.construction).to_lowercase(),
        "u": a.u,
        "v": a.v,
        "a": a.a,
        "b": a.b,
        "r": a.r,
    });
    let mut report = ReportDocument::new(echo, inputs);
    let mut text = Vec::new();
    match a.construction {
        ConstructionArg::Gaussian => verify_gaussian(a, &mut report, &mut text)?,
        ConstructionArg::Dirichlet => verify_dirichlet(a, &mut report, &mut text)?,
        ConstructionArg::Theta => verify_theta(a, &mut report, &mut text)?,
    }
    let csv = Some(checks_csv(&report)?);
    Ok(Produced { report, text, csv })
}

fn verify_gaussian(a: &VerifyArgs, report: &mut ReportDocument, text: &mut Vec<String>) -> Result<(), Failure> {
    let p = GaussianParams::new(a.d, a.u, a.v)?;
    let f = gaussian_function(&p);
    let lambda = p.critical_value();
    report.check(CheckLine::new("criticality", relative_criticality_residual(&f, lambda), tol::IDENTITY));
    let (image, scalar) = gaussian_conj_fourier_factor(&p);
    let rhs = gaussian_function(&image).scale(scalar);
    let res = conj_fourier(&f).max_abs_diff(&rhs)?;
    report.check(CheckLine::new("conj-fourier maps onto a Gaussian", res, tol::IDENTITY));
    let g = classical_gauss_sum(a.d);
    let gap = (g - gauss_sum_closed_form(a.d)).norm() / (a.d as f64).sqrt();
    report.check(CheckLine::new("gauss sum closed form", gap, tol::IDENTITY));
    text.push(format!("λ = {}", fmt_complex(lambda)));
    text.push(format!("conj_fourier(f_(u,v)) = c·f_({}, {}), c = {}", image.u, image.v, fmt_complex(scalar)));
    report.outputs = json!({
        "lambda": to_value(&lambda),
        "gauss_sum": to_value(&g),
        "conj_fourier_image": {"u": image.u, "v": image.v, "scalar": to_value(&scalar)},
    });
    report.witnesses.push(WitnessOut::new(format!("f_({},{})", p.u, p.v), &f));
    Ok(())
}

fn verify_dirichlet(a: &VerifyArgs, report: &mut ReportDocument, text: &mut Vec<String>) -> Result<(), Failure> {
    let chars = critical_characters(a.d)?;
    let n0 = count_primitive_square(a.d)?;
    report.check(CheckLine::new("count of characters with primitive square", chars.len().abs_diff(n0 as usize) as f64, 0.0));
    for (i, (chi, lambda)) in chars.iter().enumerate() {
        let f = chi.as_function();
        report.check(CheckLine::new(format!("χ#{i} criticality"), relative_criticality_residual(&f, *lambda), tol::IDENTITY));
        let fp = rescale_to_fixed_point(&f, 1)?;
        report.check(CheckLine::new(format!("χ#{i} conj-fourier fixed point"), fp.proportionality_residual, FIXED_POINT_TOL));
        report.witnesses.push(WitnessOut::new(format!("χ#{i} exponents {:?}", chi.exponents()), &f));
    }
    let values = dedup_values(chars.iter().map(|(_, l)| *l), tol::LAMBDA_DEDUP);
    text.push(format!("N₀({}) = {n0}", a.d));
    text.push(format!(
        "λ_χ = {{{}}}",
        values.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(", ")
    ));
    report.outputs = json!({ "count": n0, "values": to_value(&values) });
    Ok(())
}

fn verify_theta(a: &VerifyArgs, report: &mut ReportDocument, text: &mut Vec<String>) -> Result<(), Failure> {
    let Some(pa) = a.a else {
        return Err(Failure::Usage("--a is required for the theta construction".into()));
    };
    let pb = a.b.unwrap_or(a.d as f64 - pa);
    let p = ThetaCriticalParams::new(a.d, pa, pb)?;
    let policy = TruncationPolicy::default();
    let budget = tol::theta_budget(f64::EPSILON, a.d);
    text.push(format!("λ₀ = {}, τ₀ = {}", fmt_complex(p.lambda0), fmt_complex(p.tau0)));
    if p.integral {
        for (i, &r) in a.r.iter().enumerate() {
            let rp = real_point_check(&p, r, &policy)?;
            report.check(CheckLine::new(format!("r={r} criticality"), rp.criticality_residual, budget));
            report.check(CheckLine::new(format!("r={r} conj-fourier relation"), rp.relation_residual, budget));
            report.check(CheckLine::new(format!("r={r} fixed point after rescaling"), rp.fixed_point_residual, budget));
            if r == 0.0 {
                report.check(CheckLine::flag("r=0 witness is symmetric", rp.symmetry == Symmetry::Symmetric));
            }
            if i == 0 {
                report.witnesses.push(WitnessOut::new(format!("theta at r={r}"), &rp.function));
            }
        }
    } else {
        text.push("a, b are not admissible integers: only the conjugate Fourier relation is checked".into());
        for &r in &a.r {
            let res = conj_fourier_relation(&p, Complex64::new(r, 0.0), &policy)?;
            report.check(CheckLine::new(format!("r={r} conj-fourier relation"), res, budget));
        }
    }
    report.outputs = json!({
        "lambda0": to_value(&p.lambda0),
        "tau0": to_value(&p.tau0),
        "integral": p.integral,
    });
    Ok(())
}

#[derive(Serialize)]
struct TableEntry {
    value: String,
    lambdas: Vec<Complex64>,
    classes: String,
    construction: String,
    source: Value,
    status: VerifyStatus,
    inferred: bool,
    note: Option<String>,
}

fn moduli(a: &TableArgs) -> Vec<u64> {
    match (a.d, a.range) {
        (Some(d), _) => vec![d],
        (None, Some((lo, hi))) => (lo..=hi).filter(|d| d % 2 == 1 && *d >= 3).collect(),
        (None, None) if a.family.is_some() => Vec::new(),
        (None, None) => (3..=17).step_by(2).collect(),
    }
}

pub(crate) fn table(a: &TableArgs, echo: Vec<String>) -> Result<Produced, Failure> {
    if a.family.is_some() && a.d.is_some_and(|d| d != 17) {
        return Err(Failure::Usage("the c-quadratic family lives at d = 17".into()));
    }
    let inputs = json!({
        "d": a.d,
        "range": a.range.map(|(lo, hi)| vec![lo, hi]),
        "family": a.family.map(|_| "c-quadratic"),
        "reproduce": a.reproduce,
        "starts": a.starts,
        "seed": a.seed,
    });
    let mut report = ReportDocument::new(echo, inputs);
    let mut text = Vec::new();
    let budget = VerifyBudget { starts: a.starts, seed: a.seed };
    if a.reproduce {
        report.seed = Some(a.seed);
    }
    let mut rows = Vec::new();
    let mut selected: Vec<CriticalValueRecord> = Vec::new();
    let ds = if a.family.is_some() && a.d.is_some() { Vec::new() } else { moduli(a) };
    for d in ds {
        let recs = records_for(d);
        if recs.is_empty() {
            return Err(Failure::NotFound(format!("no catalog rows for d = {d}")));
        }
        let incomplete = recs.iter().any(|r| r.possibly_incomplete);
        text.push(format!("d = {d}{}", if incomplete { " (list possibly incomplete)" } else { "" }));
        let mut entries = Vec::new();
        for r in &recs {
            let status = if a.reproduce {
                let rep = verify_record(r, budget)?;
                for c in rep.checks {
                    report.check(CheckLine { name: format!("d={d} {}: {}", rep.value, c.name), ..c });
                }
                rep.status
            } else {
                r.cached_status
            };
            report.check(CheckLine::flag(format!("d={d} {} {}", r.value_label(), status.label()), status != VerifyStatus::Inconclusive));
            text.push(format!(
                "  {:<48} {:<20} {:<10} {}{}",
                r.value_label(),
                r.class_label(),
                r.construction.label(),
                status.label(),
                if r.inferred { " (inferred)" } else { "" }
            ));
            entries.push(TableEntry {
                value: r.value_label(),
                lambdas: r.lambdas()?,
                classes: r.class_label(),
                construction: r.construction.label().into(),
                source: to_value(&r.source),
                status,
                inferred: r.inferred,
                note: r.note.clone(),
            });
        }
        rows.push(json!({ "d": d, "possibly_incomplete": incomplete, "entries": to_value(&entries) }));
        selected.extend(recs);
    }
    let mut outputs = json!({ "rows": rows });
    let mut csv = Vec::new();
    write_csv(&selected, &mut csv)?;
    if a.family == Some(FamilyArg::CQuadratic) {
        let (family, family_csv) = family_report(&mut report, &mut text)?;
        outputs["family"] = family;
        if selected.is_empty() {
            csv = family_csv;
        }
    }
    report.outputs = outputs;
    Ok(Produced { report, text, csv: Some(csv) })
}

#[derive(Serialize)]
struct RootRow {
    re: f64,
    im: f64,
    modulus: f64,
    on_circle: bool,
}

fn family_report(report: &mut ReportDocument, text: &mut Vec<String>) -> Result<(Value, Vec<u8>), Failure> {
    let c_roots = poly_roots(&NON_WEIL_C_POLY)?;
    let bound = 17f64.sqrt();
    let real_inside = c_roots.iter().filter(|c| c.im == 0.0 && c.re.abs() < bound).count();
    let w = weil_check(&non_weil_spec(RootSelector::All), 17)?;
    report.check(CheckLine::new("real roots c inside (−√17, √17)", real_inside.abs_diff(4) as f64, 0.0));
    report.check(CheckLine::new("roots λ", w.roots.len().abs_diff(20) as f64, 0.0));
    report.check(CheckLine::new("roots λ of modulus √17", w.on_circle.abs_diff(8) as f64, 0.0));
    report.check(CheckLine::flag("not a Weil family", !w.is_weil));
    text.push("λ² − 2cλ + 17 = 0 over the degree-ten polynomial in c:".into());
    let rows: Vec<RootRow> = w
        .roots
        .iter()
        .zip(&w.moduli)
        .map(|(z, m)| RootRow { re: z.re, im: z.im, modulus: *m, on_circle: (m - bound).abs() <= 1e-7 })
        .collect();
    for r in &rows {
        text.push(format!(
            "  {:<34} |λ| = {:.9}{}",
            fmt_complex(Complex64::new(r.re, r.im)),
            r.modulus,
            if r.on_circle { "  on the circle" } else { "" }
        ));
    }
    let value = json!({
        "c_roots": to_value(&c_roots),
        "roots": to_value(&rows),
        "on_circle": w.on_circle,
        "is_weil": w.is_weil,
    });
    Ok((value, csv_bytes(rows)?))
}

fn symmetry(s: SymmetryArg) -> SymmetryConstraint {
    match s {
        SymmetryArg::None => SymmetryConstraint::None,
        SymmetryArg::Symmetric => SymmetryConstraint::Symmetric,
        SymmetryArg::Antisymmetric => SymmetryConstraint::Antisymmetric,
    }
}

fn witness_checks(report: &mut ReportDocument, lambda: Complex64, ws: &[Witness]) {
    for (i, w) in ws.iter().enumerate() {
        let res = relative_criticality_residual(&w.function, lambda);
        report.check(CheckLine::new(format!("witness #{i} criticality"), res, tol::IDENTITY));
        report.witnesses.push(WitnessOut::new(format!("witness #{i}"), &w.function));
    }
}

pub(crate) fn search(a: &SearchArgs, echo: Vec<String>) -> Result<Produced, Failure> {
    if a.non_weil {
        return non_weil_search(a, echo);
    }
    let src = a.lambda.as_deref().expect("clap requires --lambda here");
    let lambda = parse_lambda(src)?;
    let mut cfg = SearchConfig::new(a.d, lambda);
    cfg.symmetry = symmetry(a.symmetry);
    cfg.starts = a.starts;
    cfg.seed = a.seed;
    cfg.orbit_closure = a.orbit_closure;
    cfg.normalization = match (a.normalization, a.q) {
        (Some(NormalizationArg::FirstValueOne), _) => Normalization::FirstValueOne,
        (Some(NormalizationArg::UnitNorm), _) | (None, Some(_)) => Normalization::UnitNorm,
        (None, None) => Normalization::FirstValueOne,
    };
    if let Some(q) = a.q {
        cfg.fixed_point = if q % a.d == 1 { FixedPoint::ConjFourier } else { FixedPoint::ConjFourierWithQ(q) };
    }
    if a.probe_bdo || a.probe_bd {
        cfg.normalization = Normalization::UnitNorm;
    }
    cfg.validate()?;
    let inputs = json!({
        "d": a.d,
        "lambda": src,
        "lambda_value": to_value(&lambda),
        "symmetry": to_value(&cfg.symmetry),
        "normalization": to_value(&cfg.normalization),
        "q": a.q,
        "starts": a.starts,
        "orbit_closure": a.orbit_closure,
        "mode": if a.probe_bdo { "probe-bdo" } else if a.probe_bd { "probe-bd" } else { "search" },
    });
    let mut report = ReportDocument::new(echo, inputs);
    report.seed = Some(a.seed);
    let mut text = vec![format!("d = {}, λ = {}", a.d, fmt_complex(lambda))];
    if a.probe_bdo || a.probe_bd {
        let outcome = if a.probe_bdo { probe_bdo(&cfg)? } else { probe_bd(&cfg)? };
        match &outcome {
            ProbeOutcome::Found { witness, q, stats } => {
                text.push(format!("found a witness with conj_fourier(f) = f_q, q = {q} ({} starts)", stats.starts));
                witness_checks(&mut report, lambda, std::slice::from_ref(witness));
                let fp = rescale_to_fixed_point(&witness.function, *q as i64)?;
                report.check(CheckLine::new(format!("conj-fourier fixed point up to q = {q}"), fp.fixed_point_residual, FIXED_POINT_TOL));
            }
            ProbeOutcome::NoneFound { stats, note } => {
                text.push(format!("{note} ({} starts)", stats.starts));
                report.check(CheckLine::flag("witness found", false));
            }
            ProbeOutcome::Rejected { reason } => {
                text.push(format!("rejected: {reason}"));
                report.check(CheckLine::flag("|λ| = √d precondition", false));
            }
        }
        report.outputs = json!({ "probe": to_value(&outcome) });
    } else {
        let res = find_critical_functions(&cfg)?;
        text.push(format!(
            "{} witnesses; {} starts: {} converged, {} stalled, {} diverged, {} duplicates, {} orbit images",
            res.witnesses.len(),
            res.stats.starts,
            res.stats.converged,
            res.stats.stalled,
            res.stats.diverged,
            res.stats.duplicates,
            res.stats.orbit_added
        ));
        text.extend(res.notes.iter().cloned());
        report.check(CheckLine::flag("at least one witness", !res.witnesses.is_empty()));
        witness_checks(&mut report, lambda, &res.witnesses);
        report.outputs = json!({ "count": res.witnesses.len(), "stats": to_value(&res.stats), "notes": res.notes });
    }
    let csv = Some(witnesses_csv(&report.witnesses)?);
    Ok(Produced { report, text, csv })
}

fn non_weil_search(a: &SearchArgs, echo: Vec<String>) -> Result<Produced, Failure> {
    if a.d != 17 {
        return Err(Failure::Usage("--non-weil needs --d 17".into()));
    }
    let budget = NonWeilBudget { starts: a.starts, orbit_closure: true, all_lambdas: a.all_lambdas };
    let inputs = json!({ "d": 17, "starts": a.starts, "all_lambdas": a.all_lambdas, "symmetry": "antisymmetric" });
    let mut report = ReportDocument::new(echo, inputs);
    report.seed = Some(a.seed);
    let rep = non_weil_probe(a.seed, budget)?;
    report.check(CheckLine::new("real roots c inside (−√17, √17)", rep.real_c_inside.len().abs_diff(4) as f64, 0.0));
    report.check(CheckLine::new("roots λ of modulus √17", rep.weil.on_circle.abs_diff(8) as f64, 0.0));
    report.check(CheckLine::flag("not a Weil family", !rep.weil.is_weil));
    report.check(CheckLine::new("flagged value near 3.942+1.209i", rep.flagged_distance, 1e-3));
    report.check(CheckLine::flag(
        format!("witness count {} ≤ {}", rep.witness_count, rep.expected_witnesses),
        rep.witness_count <= rep.expected_witnesses,
    ));
    let flagged = rep.searches.iter().find(|s| s.lambda == rep.flagged_lambda).expect("flagged value searched");
    witness_checks(&mut report, rep.flagged_lambda, &flagged.witnesses);
    report.check(CheckLine::flag("conj-fourier fixed point after rescaling", rep.fixed_point_found));
    let mut text = vec![
        format!("flagged λ = {}", fmt_complex(rep.flagged_lambda)),
        format!(
            "{} antisymmetric witnesses with f(1) = 1 (expected {}){}",
            rep.witness_count,
            rep.expected_witnesses,
            if rep.incomplete { ", INCOMPLETE at this budget" } else { "" }
        ),
    ];
    for s in &rep.searches {
        text.push(format!(
            "  λ = {}: {} witnesses, best fixed-point residual {}",
            fmt_complex(s.lambda),
            s.witnesses.len(),
            s.best_fixed_point_residual.map_or("n/a".into(), |r| format!("{r:.2e}"))
        ));
    }
    let summary: Vec<Value> = rep
        .searches
        .iter()
        .map(|s| {
            json!({
                "lambda": to_value(&s.lambda),
                "witnesses": s.witnesses.len(),
                "stats": to_value(&s.stats),
                "best_fixed_point_residual": s.best_fixed_point_residual,
            })
        })
        .collect();
    report.outputs = json!({
        "flagged_lambda": to_value(&rep.flagged_lambda),
        "witness_count": rep.witness_count,
        "expected_witnesses": rep.expected_witnesses,
        "incomplete": rep.incomplete,
        "fixed_point_found": rep.fixed_point_found,
        "real_c_inside": rep.real_c_inside,
        "searches": summary,
    });
    let csv = Some(witnesses_csv(&report.witnesses)?);
    Ok(Produced { report, text, csv })
}
