use std::fmt::Write as _;

use fqg_core::hopf::HopfAlgebra;
use fqg_core::linalg::C64;
use fqg_core::{Element, ToleranceConfig};
use serde::Serialize;

use crate::source::AlgebraSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Below,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = "=")]
    Equal,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Below => "<",
            Relation::Above => ">",
            Relation::AtLeast => ">=",
            Relation::Equal => "=",
        }
    }

    fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Relation::Below => value < bound,
            Relation::Above => value > bound,
            Relation::AtLeast => value >= bound,
            Relation::Equal => value == bound,
        }
    }
}

/// One numeric claim: `value relation bound`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// `null` when the value is not finite or the check was skipped.
    pub value: Option<f64>,
    pub relation: Relation,
    pub bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, bound: f64) -> Self {
        let status = if relation.holds(value, bound) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name: name.into(),
            status,
            value: value.is_finite().then_some(value),
            relation,
            bound,
            note: None,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::new(name, value, Relation::Below, bound)
    }

    pub fn count(name: impl Into<String>, value: usize, relation: Relation, bound: usize) -> Self {
        Self::new(name, value as f64, relation, bound as f64)
    }

    /// A check that could not run; the reason is mandatory.
    pub fn failed(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            value: None,
            relation: Relation::Below,
            bound: 0.0,
            note: Some(reason.into()),
        }
    }

    pub fn skipped(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::Skipped,
            value: None,
            relation: Relation::Below,
            bound: 0.0,
            note: Some(reason.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn line(&self) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let mut out = format!("{tag}  {:<54}", self.name);
        if self.status != Status::Skipped && (self.value.is_some() || self.note.is_none()) {
            let value = self.value.map_or("n/a".to_string(), fmt_num);
            let _ = write!(
                out,
                " {value} {} {}",
                self.relation.symbol(),
                fmt_num(self.bound)
            );
        }
        if let Some(n) = &self.note {
            let _ = write!(out, "  ({n})");
        }
        out.trim_end().to_string()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraSummary {
    pub name: String,
    pub block_dims: Vec<usize>,
    pub dim: usize,
}

impl AlgebraSummary {
    pub fn of(h: &HopfAlgebra) -> Self {
        Self {
            name: h.name().to_string(),
            block_dims: h.algebra().block_dims().to_vec(),
            dim: h.dim(),
        }
    }
}

/// Titled free-form lines for the text report; the JSON report carries the same data in
/// `details`.
#[derive(Debug, Clone, Default)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub version: &'static str,
    pub source: AlgebraSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSummary>,
    pub seed: u64,
    pub tolerances: ToleranceConfig,
    pub checks: Vec<Check>,
    pub details: serde_json::Map<String, serde_json::Value>,
    pub passed: bool,
    #[serde(skip)]
    pub sections: Vec<Section>,
}

impl Report {
    pub fn new(
        command: String,
        source: AlgebraSpec,
        seed: u64,
        tolerances: ToleranceConfig,
    ) -> Self {
        Self {
            command,
            version: env!("CARGO_PKG_VERSION"),
            source,
            algebra: None,
            seed,
            tolerances,
            checks: Vec::new(),
            details: serde_json::Map::new(),
            passed: true,
            sections: Vec::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report details serialize");
        self.details.insert(key.to_string(), v);
    }

    pub fn section(&mut self, title: impl Into<String>, lines: Vec<String>) {
        self.sections.push(Section {
            title: title.into(),
            lines,
        });
    }

    /// Fix the overall verdict: true iff no check failed.
    pub fn finish(&mut self) {
        self.passed = self.checks.iter().all(|c| c.status != Status::Fail);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "fqg {} (version {})", self.command, self.version);
        if let Some(a) = &self.algebra {
            let dims: Vec<String> = a.block_dims.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(
                out,
                "algebra: {} (dim {}, blocks [{}])",
                a.name,
                a.dim,
                dims.join(", ")
            );
        }
        let t = &self.tolerances;
        let _ = writeln!(
            out,
            "seed: {}  tolerances: eq {} inv {} psd {}",
            self.seed,
            fmt_num(t.eq_tol),
            fmt_num(t.inv_tol),
            fmt_num(t.psd_tol)
        );
        for s in &self.sections {
            let _ = writeln!(out, "\n{}:", s.title);
            for l in &s.lines {
                let _ = writeln!(out, "  {l}");
            }
        }
        out.push_str("\nchecks:\n");
        for c in &self.checks {
            let _ = writeln!(out, "  {}", c.line());
        }
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        let _ = write!(
            out,
            "\nresult: {} ({} passed, {} failed",
            if self.passed { "PASS" } else { "FAIL" },
            count(Status::Pass),
            count(Status::Fail)
        );
        let skipped = count(Status::Skipped);
        if skipped > 0 {
            let _ = write!(out, ", {skipped} skipped");
        }
        out.push_str(")\n");
        out
    }
}

/// Compact, deterministic rendering of a residual or threshold.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.fract() == 0.0 && x.abs() < 1e6 {
        format!("{x:.0}")
    } else {
        format!("{x:.3e}")
    }
}

fn fmt_real(x: f64) -> String {
    let x = if x.abs() < 1e-12 { 0.0 } else { x };
    format!("{x:.6}")
}

pub fn fmt_complex(z: C64) -> String {
    let im = if z.im.abs() < 1e-12 { 0.0 } else { z.im };
    if im == 0.0 {
        fmt_real(z.re)
    } else {
        format!(
            "{}{}{}i",
            fmt_real(z.re),
            if im < 0.0 { "-" } else { "+" },
            fmt_real(im.abs())
        )
    }
}

/// One line per block row, blocks separated by `⊕` headers.
pub fn element_lines(x: &Element) -> Vec<String> {
    let mut out = Vec::new();
    for (b, m) in x.blocks().iter().enumerate() {
        for r in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|c| fmt_complex(m[(r, c)])).collect();
            let head = if r == 0 {
                format!("block {b}:")
            } else {
                String::new()
            };
            out.push(format!("{head:<9}[{}]", row.join(", ")));
        }
    }
    out
}
