use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::expr::{parse_expr, Expr};
use crate::error::Result;
use crate::solver::{non_weil_spec, AlgebraicSpec, RootSelector, SymmetryConstraint, NON_WEIL_HINT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueClass {
    Critical,
    /// Fixed by the conjugate Fourier transform up to a unit reindexing.
    Bd,
    /// Fixed by the conjugate Fourier transform.
    Bdo,
}

impl ValueClass {
    pub fn label(self) -> &'static str {
        match self {
            ValueClass::Critical => "critical",
            ValueClass::Bd => "bd",
            ValueClass::Bdo => "bdo",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LambdaValue {
    Exact { expr: Expr },
    Algebraic { spec: AlgebraicSpec },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Elementary {
    /// `δ₀`, critical for `λ = 1`.
    PointMass,
    /// The constant function, critical for `λ = d`.
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Factor {
    pub modulus: u64,
    pub value: Expr,
    pub construction: Construction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    Elementary { which: Elementary },
    /// `η^{u k²}`; the value is `(u/d)·g_d`.
    Gaussian { u: i64 },
    /// A Dirichlet character with primitive square and this `λ_χ`.
    Dirichlet,
    /// The theta function at `r = 0` with `λ₀ = √a + i√(d−a)`, or its
    /// pointwise conjugate for `λ̄₀`.
    Theta { a: u64, conjugate: bool },
    /// Pullback along `ℤ/d → ℤ/m`: the value gets multiplied by `d/m`.
    Lift { from: u64, inner: Box<Construction> },
    /// Pushforward onto the subgroup of order `m`: same value.
    Embed { from: u64, inner: Box<Construction> },
    /// Tensor product over coprime factors of `d`.
    Product { factors: Vec<Factor> },
    /// No closed-form witness; found by multistart search.
    Solver { symmetry: SymmetryConstraint },
    /// Roots of an algebraic specification, each searched for.
    Polynomial { symmetry: SymmetryConstraint },
}

impl Construction {
    pub fn label(&self) -> &'static str {
        match self {
            Construction::Elementary { .. } => "elementary",
            Construction::Gaussian { .. } => "gaussian",
            Construction::Dirichlet => "dirichlet",
            Construction::Theta { .. } => "theta",
            Construction::Lift { .. } => "lift",
            Construction::Embed { .. } => "embed",
            Construction::Product { .. } => "product",
            Construction::Solver { .. } => "solver",
            Construction::Polynomial { .. } => "polynomial",
        }
    }

    /// A closed-form witness can be built without searching.
    pub fn is_constructive(&self) -> bool {
        match self {
            Construction::Solver { .. } | Construction::Polynomial { .. } => false,
            Construction::Lift { inner, .. } | Construction::Embed { inner, .. } => inner.is_constructive(),
            Construction::Product { factors } => factors.iter().all(|f| f.construction.is_constructive()),
            _ => true,
        }
    }
}

/// Where a record comes from, as a neutral tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceTag {
    /// The lists of all critical values for small moduli.
    SmallModulusTable,
    /// The classification of fixed-point classes for `d ≤ 13`.
    MembershipClassification,
    /// The `λ_χ` lists of characters with primitive square.
    CharacterValues,
    /// `d = 15` values with a symmetric witness.
    SymmetricTable15,
    /// `d = 17` values covering every antisymmetric witness.
    AntisymmetricTable17,
    /// The degree-ten family at `d = 17` and its non-Weil member.
    NonWeilFamily,
    /// Values not critical at all, kept as negative fixtures.
    NonCritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyStatus {
    Verified,
    WitnessFound,
    Inconclusive,
}

impl VerifyStatus {
    pub fn label(self) -> &'static str {
        match self {
            VerifyStatus::Verified => "verified",
            VerifyStatus::WitnessFound => "witness-found",
            VerifyStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalValueRecord {
    pub modulus: u64,
    pub value: LambdaValue,
    /// Sign parameter for entries written with `ε = ±1`.
    pub epsilon: Option<i8>,
    pub classes: Vec<ValueClass>,
    pub construction: Construction,
    pub source: SourceTag,
    /// The source list is not claimed complete for this modulus.
    pub possibly_incomplete: bool,
    /// The class membership is our inference rather than stated outright.
    pub inferred: bool,
    pub cached_status: VerifyStatus,
    pub note: Option<String>,
}

impl CriticalValueRecord {
    /// Every value this record stands for: one for exact forms, all
    /// selected roots for algebraic ones.
    pub fn lambdas(&self) -> Result<Vec<Complex64>> {
        match &self.value {
            LambdaValue::Exact { expr } => Ok(vec![expr.eval(self.epsilon)?]),
            LambdaValue::Algebraic { spec } => spec.values(),
        }
    }

    pub fn has_class(&self, c: ValueClass) -> bool {
        self.classes.contains(&c)
    }

    pub fn value_label(&self) -> String {
        match &self.value {
            LambdaValue::Exact { expr } => match self.epsilon {
                Some(e) => format!("{expr} [eps={e:+}]"),
                None => expr.to_string(),
            },
            LambdaValue::Algebraic { spec } => match spec {
                AlgebraicSpec::QuadraticOver { selector: RootSelector::Nearest { target }, .. }
                | AlgebraicSpec::Polynomial { selector: RootSelector::Nearest { target }, .. } => {
                    format!("root near {:.3}{:+.3}i", target.re, target.im)
                }
                _ => format!("roots of degree-{} polynomial", spec.lambda_polynomial().len() - 1),
            },
        }
    }

    pub fn class_label(&self) -> String {
        self.classes.iter().map(|c| c.label()).collect::<Vec<_>>().join("+")
    }
}

const C: &[ValueClass] = &[ValueClass::Critical];
const BD: &[ValueClass] = &[ValueClass::Critical, ValueClass::Bd];
const BDO: &[ValueClass] = &[ValueClass::Critical, ValueClass::Bd, ValueClass::Bdo];

struct Table {
    d: u64,
    source: SourceTag,
    incomplete: bool,
    out: Vec<CriticalValueRecord>,
}

impl Table {
    fn new(d: u64, source: SourceTag, incomplete: bool) -> Self {
        Self { d, source, incomplete, out: Vec::new() }
    }

    fn push(&mut self, value: &str, eps: Option<i8>, classes: &[ValueClass], construction: Construction) -> &mut CriticalValueRecord {
        let expr = parse_expr(value).unwrap_or_else(|e| panic!("built-in value {value:?}: {e}"));
        let cached_status = if construction.is_constructive() { VerifyStatus::Verified } else { VerifyStatus::WitnessFound };
        self.out.push(CriticalValueRecord {
            modulus: self.d,
            value: LambdaValue::Exact { expr },
            epsilon: eps,
            classes: classes.to_vec(),
            construction,
            source: self.source,
            possibly_incomplete: self.incomplete,
            inferred: false,
            cached_status,
            note: None,
        });
        self.out.last_mut().expect("just pushed")
    }

    fn add(&mut self, value: &str, classes: &[ValueClass], construction: Construction) -> &mut CriticalValueRecord {
        self.push(value, None, classes, construction)
    }

    fn elementary(&mut self) {
        let d = self.d.to_string();
        self.add("1", C, Construction::Elementary { which: Elementary::PointMass });
        self.add(&d, C, Construction::Elementary { which: Elementary::Constant });
    }

    /// `a ± b·i` as two records built by the theta function and its conjugate.
    fn theta_pair(&mut self, re: &str, im: &str, a: u64) {
        self.add(&format!("{re}+{im}*i"), BDO, Construction::Theta { a, conjugate: false });
        self.add(&format!("{re}-{im}*i"), BDO, Construction::Theta { a, conjugate: true });
    }

    fn pm_im(&mut self, re: &str, im: &str, classes: &[ValueClass], construction: Construction) {
        for s in ["+", "-"] {
            self.add(&format!("{re}{s}{im}*i"), classes, construction.clone());
        }
    }

    fn finish(self) -> Vec<CriticalValueRecord> {
        self.out
    }
}

fn solver(symmetry: SymmetryConstraint) -> Construction {
    Construction::Solver { symmetry }
}

fn gaussian(u: i64) -> Construction {
    Construction::Gaussian { u }
}

const NONE: SymmetryConstraint = SymmetryConstraint::None;
const SYM: SymmetryConstraint = SymmetryConstraint::Symmetric;
const ANTI: SymmetryConstraint = SymmetryConstraint::Antisymmetric;

fn table3() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(3, SourceTag::SmallModulusTable, false);
    t.elementary();
    t.add("sqrt3*i", BDO, gaussian(1));
    t.add("-sqrt3*i", BDO, gaussian(2));
    t.finish()
}

fn table5() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(5, SourceTag::SmallModulusTable, false);
    t.elementary();
    t.add("sqrt5", BDO, gaussian(1));
    t.add("-sqrt5", BD, gaussian(2));
    t.add("1+2*i", BDO, Construction::Theta { a: 1, conjugate: false });
    t.add("1-2*i", BDO, Construction::Dirichlet);
    t.finish()
}

fn table7() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(7, SourceTag::SmallModulusTable, false);
    t.elementary();
    t.add("sqrt7*i", BDO, gaussian(1));
    t.add("-sqrt7*i", BDO, gaussian(6));
    t.theta_pair("2", "sqrt3", 4);
    t.pm_im("-2", "sqrt3", BDO, Construction::Dirichlet);
    t.finish()
}

fn table9() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(9, SourceTag::SmallModulusTable, false);
    t.elementary();
    for (v, u) in [("sqrt3*i", 1), ("-sqrt3*i", 2)] {
        t.add(v, C, Construction::Embed { from: 3, inner: Box::new(gaussian(u)) });
    }
    for (v, u) in [("3*sqrt3*i", 1), ("-3*sqrt3*i", 2)] {
        t.add(v, C, Construction::Lift { from: 3, inner: Box::new(gaussian(u)) });
    }
    t.add("3", BDO, Construction::Dirichlet);
    t.theta_pair("sqrt5", "2", 5);
    t.theta_pair("1", "2*sqrt2", 1);
    for (re, im) in [("-sqrt5", "2"), ("-1", "2*sqrt2")] {
        for s in ["+", "-"] {
            let r = t.add(&format!("{re}{s}{im}*i"), BDO, solver(SYM));
            r.inferred = true;
            r.note = Some("has a real-valued symmetric witness; modulus assigned by cross-reference".into());
        }
    }
    t.finish()
}

fn table11() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(11, SourceTag::SmallModulusTable, false);
    t.elementary();
    t.add("4+sqrt5", C, solver(NONE));
    t.add("4-sqrt5", C, solver(NONE));
    t.add("sqrt11*i", BDO, gaussian(1));
    t.add("-sqrt11*i", BDO, gaussian(10));
    t.theta_pair("2", "sqrt7", 4);
    t.theta_pair("2*sqrt2", "sqrt3", 8);
    for s in ["+", "-"] {
        let r = t.add(&format!("-2*sqrt2{s}sqrt3*i"), BDO, solver(SYM));
        r.inferred = true;
        r.note = Some("has a real-valued symmetric witness; modulus assigned by cross-reference".into());
    }
    for eps in [1, -1] {
        for (s1, s2) in [("", "+"), ("", "-"), ("-", "+"), ("-", "-")] {
            let v = format!("{s1}(1+eps*sqrt5){s2}sqrt(5-2*eps*sqrt5)*i");
            t.push(&v, Some(eps), BDO, Construction::Dirichlet);
        }
    }
    t.finish()
}

fn table13() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(13, SourceTag::SmallModulusTable, true);
    t.elementary();
    t.add("5+2*sqrt3", C, solver(NONE));
    t.add("5-2*sqrt3", C, solver(NONE));
    t.add("sqrt13", BDO, gaussian(1));
    t.add("-sqrt13", BD, gaussian(2));
    t.theta_pair("3", "2", 9);
    t.pm_im("-3", "2", BDO, Construction::Dirichlet);
    t.theta_pair("sqrt5", "2*sqrt2", 5);
    for s in ["+", "-"] {
        let r = t.add(&format!("-sqrt5{s}2*sqrt2*i"), BD, solver(SYM));
        r.note = Some("symmetric witnesses satisfy conj(f)(k) = f(2k), none with conj(f) = f".into());
    }
    t.theta_pair("1", "2*sqrt3", 1);
    t.pm_im("-1", "2*sqrt3", BDO, Construction::Dirichlet);
    t.finish()
}

/// Values with an explicit witness at `d = 3` and `d = 5`, for products.
fn factor_values(d: u64) -> Vec<(&'static str, Construction)> {
    let pm = Construction::Elementary { which: Elementary::PointMass };
    let one = Construction::Elementary { which: Elementary::Constant };
    match d {
        3 => vec![("1", pm), ("3", one), ("sqrt3*i", gaussian(1)), ("-sqrt3*i", gaussian(2))],
        5 => vec![
            ("1", pm),
            ("5", one),
            ("sqrt5", gaussian(1)),
            ("-sqrt5", gaussian(2)),
            ("1+2*i", Construction::Theta { a: 1, conjugate: false }),
            ("1-2*i", Construction::Theta { a: 1, conjugate: true }),
        ],
        _ => unreachable!("only used for 3 and 5"),
    }
}

fn table15() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(15, SourceTag::SymmetricTable15, false);
    let mut seen: Vec<Complex64> = Vec::new();
    for (v3, c3) in factor_values(3) {
        for (v5, c5) in factor_values(5) {
            let e3 = parse_expr(v3).expect("built-in");
            let e5 = parse_expr(v5).expect("built-in");
            let lam = e3.eval(None).expect("no eps") * e5.eval(None).expect("no eps");
            if seen.iter().any(|s| (s - lam).norm() < 1e-9) {
                continue;
            }
            seen.push(lam);
            let value = match (v3, v5) {
                ("1", _) => v5.to_string(),
                (_, "1") => v3.to_string(),
                _ => format!("({e3})*({e5})"),
            };
            let factors = vec![
                Factor { modulus: 3, value: e3, construction: c3.clone() },
                Factor { modulus: 5, value: e5, construction: c5.clone() },
            ];
            t.add(&value, C, Construction::Product { factors });
        }
    }
    t.add("6+sqrt21", C, solver(SYM));
    t.add("6-sqrt21", C, solver(SYM));
    t.add("-3", C, solver(SYM));
    t.add("-5", C, solver(SYM));
    for s1 in ["", "-"] {
        for s2 in ["+", "-"] {
            for s3 in ["+", "-"] {
                t.add(&format!("{s1}(sqrt3{s2}sqrt2*i)*(sqrt2{s3}i)"), C, solver(SYM));
            }
        }
    }
    t.add("2+sqrt11*i", C, Construction::Theta { a: 4, conjugate: false });
    t.add("2-sqrt11*i", C, Construction::Theta { a: 4, conjugate: true });
    t.pm_im("-2", "sqrt11", C, solver(SYM));
    t.add("2*sqrt2+sqrt7*i", C, Construction::Theta { a: 8, conjugate: false });
    t.add("2*sqrt2-sqrt7*i", C, Construction::Theta { a: 8, conjugate: true });
    t.pm_im("-2*sqrt2", "sqrt7", C, solver(SYM));
    for eps in [1, -1] {
        for s in ["+", "-"] {
            let v = format!("1+eps*sqrt5{s}sqrt(9-2*eps*sqrt5)*i");
            let classes = if eps == 1 && s == "+" { BD } else { C };
            let r = t.push(&v, Some(eps), classes, solver(SYM));
            if eps == 1 && s == "+" {
                r.source = SourceTag::MembershipClassification;
                r.note = Some("not in a cyclotomic field".into());
            }
        }
    }
    for eps in [1, -1] {
        for (s1, s2) in [("", "+"), ("", "-"), ("-", "+"), ("-", "-")] {
            let v = format!("{s1}sqrt(10+2*eps*sqrt5){s2}sqrt(5-2*eps*sqrt5)*i");
            t.push(&v, Some(eps), C, solver(SYM));
        }
    }
    for inner in [
        vec![1.0, -2.0, 0.0, -2.0],
        vec![1.0, -1.0, -1.0, -1.0],
        vec![1.0, -1.0, -10.0, 10.0, 34.0, -38.0, -43.0, 65.0, 8.0, -40.0, 16.0],
    ] {
        let spec = AlgebraicSpec::QuadraticOver { inner, k: 4.0, m: 15.0, selector: RootSelector::All };
        t.out.push(algebraic_record(15, spec, C, Construction::Polynomial { symmetry: SYM }, SourceTag::SymmetricTable15, false));
    }
    t.finish()
}

fn algebraic_record(
    d: u64,
    spec: AlgebraicSpec,
    classes: &[ValueClass],
    construction: Construction,
    source: SourceTag,
    incomplete: bool,
) -> CriticalValueRecord {
    CriticalValueRecord {
        modulus: d,
        value: LambdaValue::Algebraic { spec },
        epsilon: None,
        classes: classes.to_vec(),
        construction,
        source,
        possibly_incomplete: incomplete,
        inferred: false,
        cached_status: VerifyStatus::WitnessFound,
        note: None,
    }
}

fn table17() -> Vec<CriticalValueRecord> {
    let mut t = Table::new(17, SourceTag::AntisymmetricTable17, true);
    t.elementary();
    t.add("7+4*sqrt2", C, solver(SYM));
    t.add("7-4*sqrt2", C, solver(SYM));
    t.add("sqrt17", BDO, gaussian(1));
    t.add("-sqrt17", BD, gaussian(3));
    t.theta_pair("sqrt13", "2", 13);
    t.pm_im("-sqrt13", "2", C, solver(ANTI));
    t.theta_pair("3", "2*sqrt2", 9);
    t.theta_pair("sqrt5", "2*sqrt3", 5);
    t.pm_im("-sqrt5", "2*sqrt3", C, solver(ANTI));
    t.theta_pair("1", "4", 1);
    t.pm_im("-1", "4", BDO, Construction::Dirichlet);
    for eps in [1, -1] {
        for s in ["+", "-"] {
            t.push(&format!("1+2*eps*sqrt2{s}2*sqrt(2-eps*sqrt2)*i"), Some(eps), C, solver(ANTI));
        }
    }
    for eps in [1, -1] {
        for s in ["+", "-"] {
            t.push(&format!("-(1+2*eps*sqrt2){s}2*sqrt(2-eps*sqrt2)*i"), Some(eps), BDO, Construction::Dirichlet);
        }
    }
    let mut out = t.finish();
    out.push(algebraic_record(
        17,
        non_weil_spec(RootSelector::All),
        C,
        Construction::Polynomial { symmetry: ANTI },
        SourceTag::NonWeilFamily,
        true,
    ));
    let mut flagged = algebraic_record(
        17,
        non_weil_spec(RootSelector::Nearest { target: NON_WEIL_HINT }),
        BDO,
        Construction::Solver { symmetry: ANTI },
        SourceTag::NonWeilFamily,
        false,
    );
    flagged.note = Some("not a Weil number".into());
    let mut conjugate = flagged.clone();
    conjugate.value = LambdaValue::Algebraic { spec: non_weil_spec(RootSelector::Nearest { target: NON_WEIL_HINT.conj() }) };
    conjugate.inferred = true;
    conjugate.note = Some("complex conjugate of the non-Weil value".into());
    out.push(flagged);
    out.push(conjugate);
    out
}

/// The whole built-in catalog, ordered by modulus.
pub fn load_catalog() -> Vec<CriticalValueRecord> {
    let mut out = Vec::new();
    for t in [table3, table5, table7, table9, table11, table13, table15, table17] {
        out.extend(t());
    }
    out
}

pub fn records_for(d: u64) -> Vec<CriticalValueRecord> {
    load_catalog().into_iter().filter(|r| r.modulus == d).collect()
}

/// Values that are not critical at all.
pub fn negative_fixtures() -> Vec<(u64, Expr)> {
    [(5, "-1+2*i"), (5, "-1-2*i"), (9, "-3"), (11, "-2+sqrt7*i"), (11, "-2-sqrt7*i")]
        .into_iter()
        .map(|(d, v)| (d, parse_expr(v).expect("built-in")))
        .collect()
}

/// The tabulated `λ_χ` values, for characters with primitive square,
/// with the count of such characters.
pub fn character_value_lists() -> Vec<(u64, u64, Vec<Complex64>)> {
    let eval = |srcs: &[&str], eps: &[i8]| -> Vec<Complex64> {
        let mut out = Vec::new();
        for s in srcs {
            let e = parse_expr(s).expect("built-in");
            if e.uses_eps() {
                out.extend(eps.iter().map(|&x| e.eval(Some(x)).expect("eps given")));
            } else {
                out.push(e.eval(None).expect("no eps"));
            }
        }
        out
    };
    let pm = [1, -1];
    vec![
        (5, 2, eval(&["1+2*i", "1-2*i"], &pm)),
        (7, 4, eval(&["2+sqrt3*i", "2-sqrt3*i", "-2+sqrt3*i", "-2-sqrt3*i"], &pm)),
        (9, 4, eval(&["3"], &pm)),
        (
            11,
            8,
            eval(
                &[
                    "(1+eps*sqrt5)+sqrt(5-2*eps*sqrt5)*i",
                    "(1+eps*sqrt5)-sqrt(5-2*eps*sqrt5)*i",
                    "-(1+eps*sqrt5)+sqrt(5-2*eps*sqrt5)*i",
                    "-(1+eps*sqrt5)-sqrt(5-2*eps*sqrt5)*i",
                ],
                &pm,
            ),
        ),
        (13, 10, eval(&["3+2*i", "3-2*i", "-3+2*i", "-3-2*i", "-1+2*sqrt3*i", "-1-2*sqrt3*i"], &pm)),
        (
            17,
            14,
            eval(
                &[
                    "3+2*sqrt2*i",
                    "3-2*sqrt2*i",
                    "-1+4*i",
                    "-1-4*i",
                    "-1+2*eps*sqrt2+2*sqrt(2+eps*sqrt2)*i",
                    "-1+2*eps*sqrt2-2*sqrt(2+eps*sqrt2)*i",
                ],
                &pm,
            ),
        ),
    ]
}
