//! Input documents (JSON), the assembled problem they describe, and the
//! deterministic report document written by every command.
//!
//! File indices are 1-based (matching the e1..en labels) and converted to
//! 0-based internally. Reports print floating-point values with 17
//! significant digits in a fixed field order, so identical inputs and flags
//! produce byte-identical output.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::catalog::NamedExample;
use crate::contact::AlmostContactStructure;
use crate::error::GeometryError;
use crate::lie::{BracketEntry, LieAlgebra};
use crate::linalg;
use crate::metric::MetricLieAlgebra;
use crate::report::CheckItem;

pub const TOOL_NAME: &str = "nilcontact";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Errors at the input boundary; they map to exit code 2.
#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("line {line} column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Schema(String),
}

impl From<GeometryError> for DocumentError {
    fn from(e: GeometryError) -> Self {
        DocumentError::Schema(e.to_string())
    }
}

/// One bracket row: `[e_i, e_j] = Σ coeffs[k]·e_k`, all indices 1-based, i < j.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BracketSpec {
    pub i: usize,
    pub j: usize,
    pub coeffs: BTreeMap<usize, f64>,
}

/// Either the literal string "identity" or a full n×n array.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum MetricSpec {
    Named(String),
    Matrix(Vec<Vec<f64>>),
}

fn identity_metric() -> MetricSpec {
    MetricSpec::Named("identity".to_string())
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StructureSpec {
    pub name: String,
    pub phi: Vec<Vec<f64>>,
    pub xi: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SubalgebraSpec {
    pub name: String,
    pub basis: Vec<Vec<f64>>,
}

/// The on-disk problem description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub dim: usize,
    #[serde(default)]
    pub brackets: Vec<BracketSpec>,
    #[serde(default = "identity_metric")]
    pub metric: MetricSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub structures: Vec<StructureSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subalgebras: Vec<SubalgebraSpec>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        serde_json::from_str(text).map_err(|e| DocumentError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serialization cannot fail")
    }

    /// Describe a catalog example in the file format (1-based indices).
    pub fn from_example(ex: &NamedExample) -> Self {
        let n = ex.dim();
        let mut rows: BTreeMap<(usize, usize), BTreeMap<usize, f64>> = BTreeMap::new();
        for e in ex.algebra().entries() {
            rows.entry((e.i + 1, e.j + 1))
                .or_default()
                .insert(e.k + 1, e.coeff);
        }
        let brackets = rows
            .into_iter()
            .map(|((i, j), coeffs)| BracketSpec { i, j, coeffs })
            .collect();
        let metric = if ex.metric.gram() == &DMatrix::identity(n, n) {
            identity_metric()
        } else {
            MetricSpec::Matrix(matrix_rows(ex.metric.gram()))
        };
        let structures = ex
            .structures
            .iter()
            .map(|(name, s)| StructureSpec {
                name: name.clone(),
                phi: matrix_rows(&s.phi),
                xi: s.xi.iter().copied().collect(),
            })
            .collect();
        let subalgebras = ex
            .subalgebras
            .iter()
            .map(|(name, basis)| SubalgebraSpec {
                name: name.clone(),
                basis: (0..basis.ncols())
                    .map(|c| basis.column(c).iter().copied().collect())
                    .collect(),
            })
            .collect();
        InputDocument {
            dim: n,
            brackets,
            metric,
            structures,
            subalgebras,
        }
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn matrix_from_rows(
    rows: &[Vec<f64>],
    n: usize,
    what: &str,
) -> Result<DMatrix<f64>, DocumentError> {
    if rows.len() != n {
        return Err(DocumentError::Schema(format!(
            "{what} must have {n} rows, got {}",
            rows.len()
        )));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(DocumentError::Schema(format!(
                "{what} row {} must have {n} entries, got {}",
                r + 1,
                row.len()
            )));
        }
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// A fully assembled problem: metric algebra plus optional structures and
/// subalgebra bases, with the digest of the bytes it came from.
#[derive(Debug, Clone)]
pub struct Problem {
    pub metric: MetricLieAlgebra,
    pub structures: Vec<(String, AlmostContactStructure)>,
    pub subalgebras: Vec<(String, DMatrix<f64>)>,
    pub digest: String,
    pub normalized: bool,
    pub scale: f64,
}

impl Problem {
    pub fn from_document(doc: &InputDocument, digest: String) -> Result<Self, DocumentError> {
        let n = doc.dim;
        if n == 0 {
            return Err(DocumentError::Schema("dim must be positive".to_string()));
        }
        let mut entries = Vec::new();
        for row in &doc.brackets {
            if row.i == 0 || row.j == 0 || row.i > n || row.j > n {
                return Err(DocumentError::Schema(format!(
                    "bracket indices must lie in [1, {n}], got ({}, {})",
                    row.i, row.j
                )));
            }
            if row.i >= row.j {
                return Err(DocumentError::Schema(format!(
                    "bracket rows require i < j, got ({}, {})",
                    row.i, row.j
                )));
            }
            for (k, coeff) in &row.coeffs {
                if *k == 0 || *k > n {
                    return Err(DocumentError::Schema(format!(
                        "bracket coefficient index {k} out of range [1, {n}]"
                    )));
                }
                entries.push(BracketEntry::new(row.i - 1, row.j - 1, *k - 1, *coeff));
            }
        }
        let algebra = LieAlgebra::new(n, &entries)?;
        let gram = match &doc.metric {
            MetricSpec::Named(name) if name == "identity" => DMatrix::identity(n, n),
            MetricSpec::Named(name) => {
                return Err(DocumentError::Schema(format!(
                    "unknown metric name {name:?}; expected \"identity\" or an {n}x{n} array"
                )));
            }
            MetricSpec::Matrix(rows) => matrix_from_rows(rows, n, "metric")?,
        };
        let metric = MetricLieAlgebra::new(algebra, gram)?;

        let mut structures = Vec::new();
        for s in &doc.structures {
            let phi = matrix_from_rows(&s.phi, n, &format!("structure {:?} phi", s.name))?;
            if s.xi.len() != n {
                return Err(DocumentError::Schema(format!(
                    "structure {:?} xi must have length {n}, got {}",
                    s.name,
                    s.xi.len()
                )));
            }
            let xi = DVector::from_vec(s.xi.clone());
            structures.push((s.name.clone(), AlmostContactStructure::new(phi, xi)?));
        }

        let mut subalgebras = Vec::new();
        for sub in &doc.subalgebras {
            if sub.basis.is_empty() {
                return Err(DocumentError::Schema(format!(
                    "subalgebra {:?} needs at least one basis vector",
                    sub.name
                )));
            }
            let mut cols = Vec::new();
            for (c, v) in sub.basis.iter().enumerate() {
                if v.len() != n {
                    return Err(DocumentError::Schema(format!(
                        "subalgebra {:?} basis vector {} must have length {n}, got {}",
                        sub.name,
                        c + 1,
                        v.len()
                    )));
                }
                cols.push(DVector::from_vec(v.clone()));
            }
            subalgebras.push((sub.name.clone(), DMatrix::from_columns(&cols)));
        }

        Ok(Problem {
            metric,
            structures,
            subalgebras,
            digest,
            normalized: false,
            scale: 1.0,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let doc = InputDocument::parse(text)?;
        Problem::from_document(&doc, sha256_hex(text.as_bytes()))
    }

    pub fn from_example(ex: &NamedExample) -> Self {
        let doc = InputDocument::from_example(ex);
        let digest = sha256_hex(doc.to_json().as_bytes());
        Problem::from_document(&doc, digest).expect("catalog examples are valid documents")
    }

    /// Express the same geometry in a rescaled basis f = s·e chosen so the
    /// largest structure constant (or, for abelian algebras, the largest Gram
    /// entry) has unit magnitude. Verdicts are invariant; residual magnitudes
    /// become scale-free.
    pub fn normalized(&self) -> Problem {
        let max_c = self.metric.algebra().max_constant();
        let s = if max_c > 0.0 {
            1.0 / max_c
        } else {
            1.0 / linalg::inf_norm_mat(self.metric.gram()).sqrt()
        };
        if s == 1.0 {
            let mut out = self.clone();
            out.normalized = true;
            out.scale = 1.0;
            return out;
        }
        Problem {
            metric: self.metric.rescaled(s),
            structures: self
                .structures
                .iter()
                .map(|(name, st)| (name.clone(), st.rescaled(s)))
                .collect(),
            subalgebras: self
                .subalgebras
                .iter()
                .map(|(name, basis)| (name.clone(), basis * (1.0 / s)))
                .collect(),
            digest: self.digest.clone(),
            normalized: true,
            scale: s,
        }
    }
}

/// A typed fact in a report section.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
    IntList(Vec<i64>),
    RealList(Vec<f64>),
    Table(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Default)]
pub struct Section {
    pub name: String,
    pub facts: Vec<(String, Value)>,
    pub checks: Vec<CheckItem>,
    pub notes: Vec<String>,
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn fact(&mut self, name: impl Into<String>, value: Value) {
        self.facts.push((name.into(), value));
    }
}

/// The machine-readable output of a command run.
#[derive(Debug, Clone)]
pub struct ReportDocument {
    pub command: String,
    pub input_digest: String,
    pub normalized: bool,
    pub scale: f64,
    pub tolerance: f64,
    pub samples: Option<u32>,
    pub seed: Option<u64>,
    pub sections: Vec<Section>,
}

impl ReportDocument {
    pub fn new(command: impl Into<String>, problem: &Problem, tolerance: f64) -> Self {
        ReportDocument {
            command: command.into(),
            input_digest: problem.digest.clone(),
            normalized: problem.normalized,
            scale: problem.scale,
            tolerance,
            samples: None,
            seed: None,
            sections: Vec::new(),
        }
    }

    /// True when every non-advisory check in every section passes.
    pub fn all_pass(&self) -> bool {
        self.sections
            .iter()
            .flat_map(|s| s.checks.iter())
            .all(|c| c.advisory || c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut w = JsonWriter::new();
        w.begin_object();
        w.key("tool");
        w.string(TOOL_NAME);
        w.key("version");
        w.string(TOOL_VERSION);
        w.key("command");
        w.string(&self.command);
        w.key("input_digest");
        w.string(&self.input_digest);
        w.key("normalized");
        w.boolean(self.normalized);
        w.key("scale");
        w.real(self.scale);
        w.key("tolerance");
        w.real(self.tolerance);
        if let Some(samples) = self.samples {
            w.key("samples");
            w.integer(samples as i64);
        }
        if let Some(seed) = self.seed {
            w.key("seed");
            w.integer(seed as i64);
        }
        w.key("sections");
        w.begin_array();
        for section in &self.sections {
            w.begin_object();
            w.key("name");
            w.string(&section.name);
            w.key("facts");
            w.begin_object();
            for (name, value) in &section.facts {
                w.key(name);
                w.value(value);
            }
            w.end_object();
            w.key("checks");
            w.begin_array();
            for c in &section.checks {
                w.begin_object();
                w.key("name");
                w.string(&c.name);
                w.key("residual");
                w.real(c.residual);
                w.key("pass");
                w.boolean(c.pass);
                w.key("advisory");
                w.boolean(c.advisory);
                if let Some(witness) = &c.witness {
                    w.key("witness");
                    w.string(witness);
                }
                w.end_object();
            }
            w.end_array();
            w.key("notes");
            w.begin_array();
            for note in &section.notes {
                w.string_element(note);
            }
            w.end_array();
            w.end_object();
        }
        w.end_array();
        w.key("all_pass");
        w.boolean(self.all_pass());
        w.end_object();
        w.finish()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{TOOL_NAME} {TOOL_VERSION} — {}\n", self.command));
        out.push_str(&format!(
            "input {} (normalized: {}, scale: {:.6})\n",
            &self.input_digest[..12.min(self.input_digest.len())],
            if self.normalized { "yes" } else { "no" },
            self.scale
        ));
        out.push_str(&format!("tolerance {:.3e}", self.tolerance));
        if let Some(samples) = self.samples {
            out.push_str(&format!(", samples {samples}"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!(", seed {seed}"));
        }
        out.push('\n');
        for section in &self.sections {
            out.push_str(&format!("\n[{}]\n", section.name));
            for (name, value) in &section.facts {
                out.push_str(&format!("  {name} = {}\n", render_value(value)));
            }
            if !section.checks.is_empty() {
                out.push_str(&format!(
                    "  {:<28} {:>14} {:>9}  witness\n",
                    "check", "residual", "verdict"
                ));
                for c in &section.checks {
                    let verdict = match (c.pass, c.advisory) {
                        (true, false) => "pass",
                        (false, false) => "FAIL",
                        (true, true) => "ok",
                        (false, true) => "warn",
                    };
                    out.push_str(&format!(
                        "  {:<28} {:>14.6e} {:>9}  {}\n",
                        c.name,
                        c.residual,
                        verdict,
                        c.witness.as_deref().unwrap_or("-")
                    ));
                }
            }
            for note in &section.notes {
                out.push_str(&format!("  note: {note}\n"));
            }
        }
        out.push_str(&format!(
            "\nsummary: {}\n",
            if self.all_pass() { "PASS" } else { "FAIL" }
        ));
        out
    }
}

fn render_value(value: &Value) -> String {
    match value {
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Real(r) => format!("{r:.6e}"),
        Value::Text(t) => t.clone(),
        Value::IntList(v) => format!(
            "[{}]",
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Value::RealList(v) => format!(
            "[{}]",
            v.iter()
                .map(|x| format!("{x:.6e}"))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        Value::Table(rows) => {
            let body: Vec<String> = rows
                .iter()
                .map(|r| {
                    format!(
                        "[{}]",
                        r.iter()
                            .map(|x| format!("{x:.6e}"))
                            .collect::<Vec<_>>()
                            .join(", ")
                    )
                })
                .collect();
            format!("[{}]", body.join(", "))
        }
    }
}

/// Minimal deterministic JSON writer; floats carry 17 significant digits.
struct JsonWriter {
    buf: String,
    needs_comma: Vec<bool>,
}

impl JsonWriter {
    fn new() -> Self {
        JsonWriter {
            buf: String::new(),
            needs_comma: Vec::new(),
        }
    }

    fn element_boundary(&mut self) {
        if let Some(last) = self.needs_comma.last_mut() {
            if *last {
                self.buf.push(',');
            }
            *last = true;
        }
    }

    fn begin_object(&mut self) {
        self.element_boundary();
        self.buf.push('{');
        self.needs_comma.push(false);
    }

    fn end_object(&mut self) {
        self.needs_comma.pop();
        self.buf.push('}');
    }

    fn begin_array(&mut self) {
        self.element_boundary();
        self.buf.push('[');
        self.needs_comma.push(false);
    }

    fn end_array(&mut self) {
        self.needs_comma.pop();
        self.buf.push(']');
    }

    fn key(&mut self, name: &str) {
        self.element_boundary();
        self.push_escaped(name);
        self.buf.push(':');
        // The value that follows provides its own boundary handling.
        if let Some(last) = self.needs_comma.last_mut() {
            *last = false;
        }
    }

    fn string(&mut self, s: &str) {
        self.element_boundary();
        self.push_escaped(s);
    }

    fn string_element(&mut self, s: &str) {
        self.string(s);
    }

    fn boolean(&mut self, b: bool) {
        self.element_boundary();
        self.buf.push_str(if b { "true" } else { "false" });
    }

    fn integer(&mut self, v: i64) {
        self.element_boundary();
        self.buf.push_str(&v.to_string());
    }

    fn real(&mut self, v: f64) {
        self.element_boundary();
        // 17 significant digits round-trip any f64.
        self.buf.push_str(&format!("{v:.16e}"));
    }

    fn value(&mut self, v: &Value) {
        match v {
            Value::Bool(b) => self.boolean(*b),
            Value::Int(i) => self.integer(*i),
            Value::Real(r) => self.real(*r),
            Value::Text(t) => self.string(t),
            Value::IntList(list) => {
                self.begin_array();
                for x in list {
                    self.integer(*x);
                }
                self.end_array();
            }
            Value::RealList(list) => {
                self.begin_array();
                for x in list {
                    self.real(*x);
                }
                self.end_array();
            }
            Value::Table(rows) => {
                self.begin_array();
                for row in rows {
                    self.begin_array();
                    for x in row {
                        self.real(*x);
                    }
                    self.end_array();
                }
                self.end_array();
            }
        }
    }

    fn push_escaped(&mut self, s: &str) {
        self.buf.push('"');
        for ch in s.chars() {
            match ch {
                '"' => self.buf.push_str("\\\""),
                '\\' => self.buf.push_str("\\\\"),
                '\n' => self.buf.push_str("\\n"),
                '\r' => self.buf.push_str("\\r"),
                '\t' => self.buf.push_str("\\t"),
                c if (c as u32) < 0x20 => {
                    self.buf.push_str(&format!("\\u{:04x}", c as u32));
                }
                c => self.buf.push(c),
            }
        }
        self.buf.push('"');
    }

    fn finish(self) -> String {
        debug_assert!(self.needs_comma.is_empty());
        self.buf
    }
}
