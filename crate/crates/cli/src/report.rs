use convsq::catalog::CheckLine;
use convsq::{Complex64, GroupFunction};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const REPORT_SCHEMA: &str = "convsq.report";
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessOut {
    pub label: String,
    pub values: Vec<Complex64>,
}

impl WitnessOut {
    pub fn new(label: impl Into<String>, f: &GroupFunction) -> Self {
        Self { label: label.into(), values: f.values().to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub schema_version: u32,
    /// The arguments as given, program name excluded.
    pub command: Vec<String>,
    pub inputs: Value,
    pub checks: Vec<CheckLine>,
    pub outputs: Value,
    pub witnesses: Vec<WitnessOut>,
    pub seed: Option<u64>,
    pub elapsed_ms: f64,
    /// Conjunction of the check flags.
    pub pass: bool,
}

impl ReportDocument {
    pub fn new(command: Vec<String>, inputs: Value) -> Self {
        Self {
            schema: REPORT_SCHEMA.into(),
            schema_version: REPORT_SCHEMA_VERSION,
            command,
            inputs,
            checks: Vec::new(),
            outputs: Value::Null,
            witnesses: Vec::new(),
            seed: None,
            elapsed_ms: 0.0,
            pass: true,
        }
    }

    pub fn check(&mut self, line: CheckLine) {
        self.checks.push(line);
    }

    pub fn finish(&mut self, elapsed_ms: f64) {
        self.elapsed_ms = elapsed_ms;
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only finite numbers")
    }

    pub fn from_json(src: &str) -> Result<Self, String> {
        let doc: Self = serde_json::from_str(src).map_err(|e| e.to_string())?;
        if doc.schema != REPORT_SCHEMA || doc.schema_version > REPORT_SCHEMA_VERSION {
            return Err(format!("unsupported report schema {} v{}", doc.schema, doc.schema_version));
        }
        Ok(doc)
    }

    /// Human-readable rendering: the command's own lines, then the checks.
    pub fn to_text(&self, body: &[String]) -> String {
        let mut out = String::new();
        out.push_str(&format!("convsq {}\n", self.command.join(" ")));
        for line in body {
            out.push_str(line);
            out.push('\n');
        }
        for c in &self.checks {
            let flag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{flag}] {}: {:.3e} (tol {:.1e})\n", c.name, c.residual, c.tolerance));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed {seed}\n"));
        }
        out.push_str(&format!(
            "{} checks, {} failed, {:.0} ms: {}\n",
            self.checks.len(),
            self.checks.iter().filter(|c| !c.pass).count(),
            self.elapsed_ms,
            if self.pass { "PASS" } else { "FAIL" }
        ));
        out
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("{:.9}{:+.9}i", z.re, z.im)
}
