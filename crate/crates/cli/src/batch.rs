//! Batch mode: every sphere file in a directory against a grid of
//! (k, l, heuristics) cells, stopping per sphere at the first certificate.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use spherecert::certify::{
    certificate_to_json, no_certificate_json, rehomogenize, search_certificate, HeuristicConfig,
};
use spherecert::combinatorics::parse_sphere;
use spherecert::pipeline::build_bundle;
use spherecert::{Deadline, Error};

use crate::{CommonArgs, Format};

#[derive(Clone, Debug)]
pub struct GridCell {
    pub k: usize,
    pub l: usize,
    pub heuristics: HeuristicConfig,
}

/// Grid syntax: cells separated by ';', each "k,l" plus optional flags
/// "ms" (monomial simplification), "rb" (redundant bases),
/// "a=v1|v2|..." (avoid), "f=v1|v2|..." (fix).
pub fn parse_grid(spec: &str) -> Result<Vec<GridCell>, Error> {
    let mut cells = Vec::new();
    for cell in spec.split(';') {
        let cell = cell.trim();
        if cell.is_empty() {
            continue;
        }
        let parts: Vec<&str> = cell.split(',').map(str::trim).collect();
        if parts.len() < 2 {
            return Err(Error::Parse(format!("grid cell {cell:?} needs k,l")));
        }
        let k: usize = parts[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad k in {cell:?}")))?;
        let l: usize = parts[1]
            .parse()
            .map_err(|_| Error::Parse(format!("bad l in {cell:?}")))?;
        let mut h = HeuristicConfig::default();
        for flag in &parts[2..] {
            if *flag == "ms" {
                h.monomial_simplify = true;
            } else if *flag == "rb" {
                h.redundant_bases = true;
            } else if let Some(rest) = flag.strip_prefix("a=") {
                h.avoid_vertices = parse_vertex_set(rest)?;
            } else if let Some(rest) = flag.strip_prefix("f=") {
                h.fix_vertices = parse_vertex_set(rest)?;
            } else {
                return Err(Error::Parse(format!("unknown grid flag {flag:?}")));
            }
        }
        h.validate()?;
        cells.push(GridCell { k, l, heuristics: h });
    }
    if cells.is_empty() {
        return Err(Error::Parse("empty grid".into()));
    }
    Ok(cells)
}

fn parse_vertex_set(spec: &str) -> Result<std::collections::BTreeSet<usize>, Error> {
    spec.split('|')
        .map(|v| {
            let v: usize = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad vertex {v:?}")))?;
            if v == 0 {
                return Err(Error::Parse("vertex labels are 1-based".into()));
            }
            Ok(v - 1)
        })
        .collect()
}

enum FileOutcome {
    Certificate { cell: GridCell, terms: usize },
    NoCertificate,
    Error(String),
}

fn run_file(path: &Path, grid: &[GridCell], deadline: Deadline) -> FileOutcome {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return FileOutcome::Error(format!("read: {e}")),
    };
    let (sphere, ov) = match parse_sphere(&text) {
        Ok(x) => x,
        Err(e) => return FileOutcome::Error(e.to_string()),
    };
    // redundant bases are a per-cell heuristic but change the column plan;
    // rebuild the bundle when a cell asks for them
    let mut plain_bundle = None;
    let mut redundant_bundle = None;
    for cell in grid {
        let bundle = if cell.heuristics.redundant_bases {
            &mut redundant_bundle
        } else {
            &mut plain_bundle
        };
        if bundle.is_none() {
            match build_bundle(sphere.clone(), &ov, cell.heuristics.redundant_bases) {
                Ok(b) => *bundle = Some(b),
                Err(e) => return FileOutcome::Error(e.to_string()),
            }
        }
        let b = bundle.as_ref().unwrap();
        match search_certificate(&b.dehom, cell.k, cell.l, &cell.heuristics, deadline) {
            Ok(report) => {
                if let Some(mut cert) = report.certificate {
                    let _ = rehomogenize(&mut cert, &b.ledger, &b.hom, &b.dehom);
                    let terms = cert.terms.len();
                    let artifact = path.with_extension("cert.json");
                    let _ = std::fs::write(&artifact, certificate_to_json(&cert));
                    return FileOutcome::Certificate {
                        cell: cell.clone(),
                        terms,
                    };
                }
            }
            Err(e) => return FileOutcome::Error(e.to_string()),
        }
    }
    let last = &grid[grid.len() - 1];
    let artifact = path.with_extension("cert.json");
    let _ = std::fs::write(
        &artifact,
        no_certificate_json(last.k, last.l, &last.heuristics),
    );
    FileOutcome::NoCertificate
}

pub fn run(dir: &Path, grid_spec: &str, common: &CommonArgs) -> i32 {
    let grid = match parse_grid(grid_spec) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let mut files: Vec<std::path::PathBuf> = match std::fs::read_dir(dir) {
        Ok(rd) => rd
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                p.extension().map(|x| x == "json").unwrap_or(false)
                    && !p
                        .file_name()
                        .map(|n| n.to_string_lossy().ends_with(".cert.json"))
                        .unwrap_or(false)
            })
            .collect(),
        Err(e) => {
            eprintln!("error: reading {}: {e}", dir.display());
            return 2;
        }
    };
    files.sort();
    if files.is_empty() {
        eprintln!("error: no sphere files in {}", dir.display());
        return 2;
    }

    let deadline = Deadline::after_secs(common.time_limit);
    let started = Instant::now();
    let outcomes: Vec<(std::path::PathBuf, FileOutcome)> = files
        .par_iter()
        .map(|path| (path.clone(), run_file(path, &grid, deadline)))
        .collect();
    eprintln!("batch: {} files in {:.2?}", outcomes.len(), started.elapsed());

    match common.format {
        Format::Text => {
            println!("{:<28} {:<12} {:>7}", "name", "(k,l)", "#terms");
            for (path, outcome) in &outcomes {
                let name = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                match outcome {
                    FileOutcome::Certificate { cell, terms } => {
                        println!("{:<28} ({},{})       {:>7}", name, cell.k, cell.l, terms)
                    }
                    FileOutcome::NoCertificate => {
                        println!("{:<28} {:<12} {:>7}", name, "not found", "-")
                    }
                    FileOutcome::Error(_) => println!("{:<28} {:<12} {:>7}", name, "error", "-"),
                }
            }
            let errors: Vec<_> = outcomes
                .iter()
                .filter_map(|(p, o)| match o {
                    FileOutcome::Error(e) => Some((p, e)),
                    _ => None,
                })
                .collect();
            if !errors.is_empty() {
                println!("\nerrors:");
                for (p, e) in errors {
                    println!("  {}: {}", p.display(), e);
                }
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = outcomes
                .iter()
                .map(|(path, outcome)| {
                    let name = path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    match outcome {
                        FileOutcome::Certificate { cell, terms } => serde_json::json!({
                            "name": name, "status": "certificate",
                            "k": cell.k, "l": cell.l, "terms": terms,
                        }),
                        FileOutcome::NoCertificate => serde_json::json!({
                            "name": name, "status": "none",
                        }),
                        FileOutcome::Error(e) => serde_json::json!({
                            "name": name, "status": "error", "message": e,
                        }),
                    }
                })
                .collect();
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::json!({
                    "schema": "spherecert.batch.v1",
                    "results": rows,
                }))
                .unwrap()
            );
        }
    }
    0
}
