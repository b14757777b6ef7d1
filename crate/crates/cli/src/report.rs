//! Report records. The JSON output is the serde form of [`ReportDocument`];
//! the human output is its `Display`, which reads the same fields.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use ttm_core::cohomology::{CohomologyReport, E2Table};
use ttm_core::invariants::GroupPresentation;
use ttm_core::signature::SignatureBreakdown;
use ttm_core::ttm::{Severity, ValidationReport};
use ttm_core::{AbelianGroup, IntMat, IntVec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FindingRecord {
    pub check: String,
    pub severity: String,
    pub location: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationRecord {
    pub valid: bool,
    pub findings: Vec<FindingRecord>,
}

impl From<&ValidationReport> for ValidationRecord {
    fn from(r: &ValidationReport) -> Self {
        ValidationRecord {
            valid: r.valid,
            findings: r
                .findings
                .iter()
                .map(|f| FindingRecord {
                    check: f.check.to_string(),
                    severity: match f.severity {
                        Severity::Failure => "failure".into(),
                        Severity::Warning => "warning".into(),
                    },
                    location: f.location.clone(),
                    message: f.message.clone(),
                })
                .collect(),
        }
    }
}

fn small(x: &BigInt) -> i64 {
    i64::try_from(x).expect("invariant fits in 64 bits")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub rank: usize,
    pub torsion: Vec<i64>,
}

impl From<&AbelianGroup> for GroupRecord {
    fn from(g: &AbelianGroup) -> Self {
        GroupRecord {
            rank: g.free_rank,
            torsion: g.torsion.iter().map(small).collect(),
        }
    }
}

impl fmt::Display for GroupRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRecord {
    #[serde(rename = "H")]
    pub h: Vec<GroupRecord>,
    pub associated_graded: bool,
    /// `e2[p][q]`, present with `--e2`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e2: Option<Vec<Vec<GroupRecord>>>,
}

impl CohomologyRecord {
    pub fn new(report: &CohomologyReport, with_e2: bool) -> Self {
        CohomologyRecord {
            h: report.groups.iter().map(GroupRecord::from).collect(),
            associated_graded: report.associated_graded,
            e2: with_e2.then(|| e2_grid(&report.e2)),
        }
    }
}

fn e2_grid(e2: &E2Table) -> Vec<Vec<GroupRecord>> {
    (0..3).map(|p| (0..3).map(|q| GroupRecord::from(e2.get(p, q))).collect()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationRecord {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
    pub classification: String,
    pub abelianization: GroupRecord,
}

impl From<&GroupPresentation> for PresentationRecord {
    fn from(p: &GroupPresentation) -> Self {
        PresentationRecord {
            generators: p.generators.clone(),
            relators: p.relators.iter().map(|r| p.render_word(r)).collect(),
            classification: p.classification.to_string(),
            abelianization: GroupRecord::from(&p.abelianization()),
        }
    }
}

fn rows(m: &IntMat) -> Vec<Vec<i64>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| small(&m[(i, j)])).collect()).collect()
}

fn vec2(v: &IntVec) -> Vec<i64> {
    v.entries().iter().map(small).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauRecord {
    pub c1: Vec<Vec<i64>>,
    pub c2: Vec<Vec<i64>>,
    pub tau: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BreakdownRecord {
    pub interior_terms: Vec<TauRecord>,
    pub necklace: Vec<Vec<i64>>,
    pub exceptional: Vec<bool>,
    pub wrap: Vec<Vec<i64>>,
    pub boundary_matrix: Vec<Vec<i64>>,
    pub blowup_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureRecord {
    pub sigma_interior: i64,
    pub sigma_boundary: i64,
    pub total: i64,
    /// Present with `--verbose`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub breakdown: Option<BreakdownRecord>,
}

impl SignatureRecord {
    pub fn new(b: &SignatureBreakdown, verbose: bool) -> Self {
        SignatureRecord {
            sigma_interior: b.sigma_interior,
            sigma_boundary: b.sigma_boundary,
            total: b.total,
            breakdown: verbose.then(|| BreakdownRecord {
                interior_terms: b
                    .interior_terms
                    .iter()
                    .map(|(p, t)| TauRecord {
                        c1: rows(&p.c1),
                        c2: rows(&p.c2),
                        tau: *t,
                    })
                    .collect(),
                necklace: b.necklace.vectors.iter().map(vec2).collect(),
                exceptional: b.necklace.exceptional.clone(),
                wrap: rows(&b.necklace.wrap),
                boundary_matrix: rows(&b.boundary_matrix),
                blowup_count: b.blowup_count,
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Usage,
    Io,
    Parse,
    Invalid,
    Unsupported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: ErrorKind,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euler_characteristic: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fundamental_group: Option<PresentationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<CohomologyRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<SignatureRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub written: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes") + "\n"
    }
}

fn matrix_text(m: &[Vec<i64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(", ")))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn vector_text(v: &[i64]) -> String {
    format!("({})", v.iter().map(i64::to_string).collect::<Vec<_>>().join(", "))
}

impl fmt::Display for ReportDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.input {
            Some(input) => writeln!(f, "{}: {input}", self.command)?,
            None => writeln!(f, "{}", self.command)?,
        }
        if let Some(v) = &self.validation {
            writeln!(f, "validation: {}", if v.valid { "valid" } else { "invalid" })?;
            for x in &v.findings {
                writeln!(f, "  {} [{}] {}: {}", x.severity, x.check, x.location, x.message)?;
            }
        }
        if let Some(chi) = self.euler_characteristic {
            writeln!(f, "euler characteristic: {chi}")?;
        }
        if let Some(p) = &self.fundamental_group {
            writeln!(f, "fundamental group: {}", p.classification)?;
            writeln!(f, "  generators: {}", p.generators.join(", "))?;
            let relators = if p.relators.is_empty() { "none".to_string() } else { p.relators.join(", ") };
            writeln!(f, "  relators: {relators}")?;
            writeln!(f, "  abelianization: {}", p.abelianization)?;
        }
        if let Some(c) = &self.cohomology {
            for (k, g) in c.h.iter().enumerate() {
                writeln!(f, "H^{k} = {g}")?;
            }
            writeln!(f, "associated graded: {}", c.associated_graded)?;
            if let Some(grid) = &c.e2 {
                writeln!(f, "E2 page (rows q, columns p):")?;
                for q in (0..3).rev() {
                    let cells: Vec<String> = (0..3).map(|p| format!("{:>10}", grid[p][q].to_string())).collect();
                    writeln!(f, "  q={q} |{}", cells.join(" "))?;
                }
            }
        }
        if let Some(s) = &self.signature {
            if let Some(b) = &s.breakdown {
                for t in &b.interior_terms {
                    writeln!(f, "tau({}, {}) = {}", matrix_text(&t.c1), matrix_text(&t.c2), t.tau)?;
                }
                let beads: Vec<String> = b
                    .necklace
                    .iter()
                    .zip(&b.exceptional)
                    .map(|(v, &e)| if e { format!("{}*", vector_text(v)) } else { vector_text(v) })
                    .collect();
                writeln!(f, "necklace: {}", beads.join(", "))?;
                writeln!(f, "wrap: {}", matrix_text(&b.wrap))?;
                writeln!(f, "boundary matrix: {}", matrix_text(&b.boundary_matrix))?;
                writeln!(f, "blow-ups: {}", b.blowup_count)?;
            }
            writeln!(f, "sigma interior: {}", s.sigma_interior)?;
            writeln!(f, "sigma boundary: {}", s.sigma_boundary)?;
            writeln!(f, "signature: {}", s.total)?;
        }
        if let Some(w) = &self.written {
            writeln!(f, "written: {w}")?;
        }
        if let Some(e) = &self.error {
            let kind = serde_json::to_value(&e.kind).expect("unit variant");
            writeln!(f, "error ({}): {}", kind.as_str().unwrap_or("error"), e.message)?;
        }
        Ok(())
    }
}
