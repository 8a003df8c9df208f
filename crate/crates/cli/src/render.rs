//! Report rendering. The JSON report is the machine contract: stable
//! schema, byte-identical across identical runs. Wall-times go to stderr
//! only, never into the report.

use serde::Serialize;
use spherecert::pipeline::SlackBundle;
use spherecert::slack::{ColumnSign, ParametrizedSlackMatrix, ReducedSlackMatrix};

pub const REPORT_SCHEMA: &str = "spherecert.report.v1";

#[derive(Serialize)]
pub struct SphereSummary {
    pub dimension: usize,
    pub vertices: usize,
    pub facets: usize,
    pub simplicial: bool,
    pub partial: bool,
}

impl SphereSummary {
    pub fn of(bundle: &SlackBundle) -> Self {
        SphereSummary {
            dimension: bundle.sphere.dimension(),
            vertices: bundle.sphere.num_vertices(),
            facets: bundle.sphere.num_facets(),
            simplicial: bundle.sphere.is_simplicial(),
            partial: bundle.sphere.is_partial(),
        }
    }
}

#[derive(Serialize)]
pub struct PoolSummary {
    pub entries: usize,
    pub variables: usize,
    pub constraints: usize,
}

#[derive(Serialize)]
pub struct LpSummary {
    pub status: String,
    pub pivots: u64,
    pub presolve_eliminated: usize,
}

#[derive(Serialize)]
pub struct GrassmannSummary {
    pub trials: usize,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct CertifyReport {
    pub schema: &'static str,
    pub subcommand: &'static str,
    pub input: String,
    pub sphere: SphereSummary,
    pub flag: Vec<usize>,
    pub k: usize,
    pub l: usize,
    pub heuristics: spherecert::certify::HeuristicConfig,
    pub pool: PoolSummary,
    pub monomial_rows: usize,
    pub lp: LpSummary,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grassmann_check: Option<GrassmannSummary>,
    pub warnings: Vec<String>,
}

impl CertifyReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let s = &self.sphere;
        out.push_str(&format!(
            "sphere {}: dimension {}, {} vertices, {} facets{}{}\n",
            self.input,
            s.dimension,
            s.vertices,
            s.facets,
            if s.simplicial { ", simplicial" } else { ", quasi-simplicial" },
            if s.partial { ", partial" } else { "" },
        ));
        out.push_str(&format!("flag: {:?}\n", self.flag));
        out.push_str(&format!(
            "pool (k={}, l={}): {} entry constraints, {} variables, {} LP columns over {} monomial rows\n",
            self.k, self.l, self.pool.entries, self.pool.variables, self.pool.constraints,
            self.monomial_rows
        ));
        out.push_str(&format!(
            "lp: {} after {} pivots ({} columns removed by presolve)\n",
            self.lp.status, self.lp.pivots, self.lp.presolve_eliminated
        ));
        match &self.certificate {
            None => out.push_str(&format!(
                "status: {} (no positive combination in this pool; this does not claim realizability)\n",
                self.status
            )),
            Some(cert) => {
                out.push_str("status: certificate\n");
                out.push_str(&render_certificate_text(cert));
            }
        }
        if let Some(g) = &self.grassmann_check {
            out.push_str(&format!(
                "final polynomial minor check: {} over {} random matrices\n",
                if g.passed { "zero" } else { "NONZERO (fatal)" },
                g.trials
            ));
        }
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

pub fn render_certificate_text(cert: &serde_json::Value) -> String {
    let mut out = String::new();
    if let Some(terms) = cert.get("terms").and_then(|t| t.as_array()) {
        out.push_str(&format!("certificate with {} terms:\n", terms.len()));
        for t in terms {
            let weight = t.get("weight").and_then(|w| w.as_str()).unwrap_or("?");
            let mut factors: Vec<String> = Vec::new();
            if let Some(es) = t.get("entries").and_then(|e| e.as_array()) {
                for e in es {
                    let pair = e.as_array().unwrap();
                    factors.push(format!("S[{},{}]", pair[0], pair[1]));
                }
            }
            if let Some(vs) = t.get("variables").and_then(|e| e.as_array()) {
                for v in vs {
                    let pair = v.as_array().unwrap();
                    factors.push(format!("x_{{{},{}}}", pair[0], pair[1]));
                }
            }
            out.push_str(&format!("  {} * {}\n", weight, factors.join(" ")));
        }
    }
    if let Some(mults) = cert.get("homogeneous_multipliers").and_then(|m| m.as_array()) {
        out.push_str("homogeneous multipliers:\n");
        for m in mults {
            let atoms: Vec<String> = m
                .as_array()
                .unwrap()
                .iter()
                .map(|a| {
                    let pair = a.as_array().unwrap();
                    let var = pair[0].as_str().unwrap();
                    let exp = pair[1].as_u64().unwrap();
                    if exp == 1 {
                        format!("x_{{{var}}}")
                    } else {
                        format!("x_{{{var}}}^{exp}")
                    }
                })
                .collect();
            out.push_str(&format!(
                "  {}\n",
                if atoms.is_empty() { "1".into() } else { atoms.join(" ") }
            ));
        }
    }
    if let Some(fp) = cert.get("final_polynomial").and_then(|m| m.as_array()) {
        out.push_str("final polynomial:\n");
        for term in fp {
            let pair = term.as_array().unwrap();
            let weight = pair[0].as_str().unwrap();
            let ps: Vec<String> = pair[1]
                .as_array()
                .unwrap()
                .iter()
                .map(|seq| {
                    let idx: Vec<String> = seq
                        .as_array()
                        .unwrap()
                        .iter()
                        .map(|x| x.to_string())
                        .collect();
                    format!("p[{}]", idx.join(","))
                })
                .collect();
            out.push_str(&format!("  {} * {}\n", weight, ps.join(" ")));
        }
    }
    out
}

/// Reduced matrix in the worked-example layout: one aligned row per vertex.
pub fn reduced_matrix_text(m: &ReducedSlackMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.num_rows())
        .map(|i| {
            (0..m.num_cols())
                .map(|c| match m.entry(i, c) {
                    spherecert::slack::ReducedEntry::Zero => "0".to_string(),
                    spherecert::slack::ReducedEntry::One => "1".to_string(),
                    spherecert::slack::ReducedEntry::Variable => {
                        format!("x_{{{},{}}}", i + 1, c + 1)
                    }
                })
                .collect()
        })
        .collect();
    align(&cells)
}

/// Reconstructed matrix with oriented polynomial entries.
pub fn parametrized_matrix_text(m: &ParametrizedSlackMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.num_rows())
        .map(|i| {
            (0..m.num_cols())
                .map(|c| match m.sign(c) {
                    ColumnSign::Unknown => format!("±({})", m.raw_entry(i, c)),
                    _ => m.entry(i, c).to_string(),
                })
                .collect()
        })
        .collect();
    align(&cells)
}

fn align(cells: &[Vec<String>]) -> String {
    if cells.is_empty() {
        return String::new();
    }
    let ncols = cells[0].len();
    let widths: Vec<usize> = (0..ncols)
        .map(|c| cells.iter().map(|row| row[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in cells {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(&line.join("  "));
        out.push('\n');
    }
    out
}
