//! Implementations of the single-sphere subcommands.

use std::path::Path;
use std::time::Instant;

use spherecert::certify::{
    certificate_from_json, certificate_to_json, grassmann_numeric_check, no_certificate_json,
    rehomogenize, search_certificate, to_final_polynomial, verify_certificate, Certificate,
    HeuristicConfig,
};
use spherecert::combinatorics::{parse_sphere, AbstractSphere, Overrides};
use spherecert::pipeline::{build_bundle, SlackBundle};
use spherecert::slack::{orientation_consistency_violations, ColumnSign};
use spherecert::{Deadline, Error};

use crate::render::{
    parametrized_matrix_text, reduced_matrix_text, CertifyReport, GrassmannSummary, LpSummary,
    PoolSummary, SphereSummary, REPORT_SCHEMA,
};
use crate::{exit_code_for, CommonArgs, Format, HeuristicArgs, OverrideArgs};

fn fail(err: &Error) -> i32 {
    eprintln!("error: {err}");
    exit_code_for(err)
}

fn fail_io(path: &Path, err: std::io::Error) -> i32 {
    eprintln!("error: reading {}: {err}", path.display());
    2
}

fn stage(label: &str, started: Instant) -> Instant {
    eprintln!("stage {label}: {:.2?}", started.elapsed());
    Instant::now()
}

/// Parses "j:v1,v2,..." (all 1-based).
fn parse_keyed_list(spec: &str) -> Result<(usize, Vec<usize>), Error> {
    let (key, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("expected j:v1,v2,... got {spec:?}")))?;
    let j: usize = key
        .parse()
        .map_err(|_| Error::Parse(format!("bad facet index {key:?}")))?;
    let verts = rest
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad vertex label {v:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if j == 0 || verts.contains(&0) {
        return Err(Error::Parse("indices are 1-based".into()));
    }
    Ok((j, verts))
}

fn load_with_overrides(
    input: &Path,
    args: &OverrideArgs,
) -> Result<(AbstractSphere, Overrides), Error> {
    let text = std::fs::read_to_string(input)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", input.display())))?;
    let (sphere, mut ov) = parse_sphere(&text)?;
    if let Some(flag) = &args.flag {
        if flag.iter().any(|&j| j == 0 || j > sphere.num_facets()) {
            return Err(Error::Parse("flag indices are 1-based facet numbers".into()));
        }
        ov.flag = Some(flag.iter().map(|&j| j - 1).collect());
    }
    for spec in &args.bases {
        let (j, verts) = parse_keyed_list(spec)?;
        ov.bases
            .insert(j - 1, verts.iter().map(|&v| v - 1).collect());
    }
    for spec in &args.orientations {
        let (key, sign) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected j:+1 or j:-1, got {spec:?}")))?;
        let j: usize = key
            .parse()
            .map_err(|_| Error::Parse(format!("bad facet index {key:?}")))?;
        let s = match sign.trim() {
            "+1" | "1" | "+" => 1,
            "-1" | "-" => -1,
            other => return Err(Error::Parse(format!("bad orientation {other:?}"))),
        };
        if j == 0 {
            return Err(Error::Parse("facet indices are 1-based".into()));
        }
        ov.orientation.insert(j - 1, s);
    }
    Ok((sphere, ov))
}

fn heuristics_of(args: &HeuristicArgs) -> Result<HeuristicConfig, Error> {
    if args.avoid.iter().chain(&args.fix).any(|&v| v == 0) {
        return Err(Error::Parse("vertex labels are 1-based".into()));
    }
    let h = HeuristicConfig {
        avoid_vertices: args.avoid.iter().map(|&v| v - 1).collect(),
        fix_vertices: args.fix.iter().map(|&v| v - 1).collect(),
        monomial_simplify: args.monomial_simplify,
        redundant_bases: args.redundant_bases,
    };
    h.validate()?;
    Ok(h)
}

#[allow(clippy::too_many_arguments)]
pub fn certify(
    input: &Path,
    k: usize,
    l: usize,
    overrides: &OverrideArgs,
    heuristic_args: &HeuristicArgs,
    common: &CommonArgs,
    trials: usize,
    dump_matrices: bool,
    dump_lp: bool,
    output: Option<&Path>,
) -> i32 {
    let deadline = Deadline::after_secs(common.time_limit);
    let t0 = Instant::now();
    let (sphere, ov) = match load_with_overrides(input, overrides) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let heuristics = match heuristics_of(heuristic_args) {
        Ok(h) => h,
        Err(e) => return fail(&e),
    };
    let t = stage("parse", t0);
    let bundle = match build_bundle(sphere, &ov, heuristics.redundant_bases) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let t = stage("parametrize+orient", t);
    if dump_matrices {
        eprintln!("reduced (dehomogenized):\n{}", reduced_matrix_text(&bundle.reduced_dehom));
        eprintln!("reconstructed (oriented):\n{}", parametrized_matrix_text(&bundle.dehom));
    }
    if let Err(e) = deadline.check() {
        return fail(&e);
    }
    if dump_lp {
        // rebuild the linearization for inspection; the search below
        // regenerates it
        match spherecert::certify::generate_constraints(&bundle.dehom, k, l, &heuristics, deadline)
        {
            Ok(cs) => {
                let m = spherecert::certify::linearize(&cs);
                eprintln!("lp tableau: {} monomial rows x {} columns", m.num_rows(), m.num_cols());
                for j in 0..m.num_cols() {
                    let triplets: Vec<String> = m
                        .column(j)
                        .iter()
                        .map(|(r, v)| format!("({r},{v})"))
                        .collect();
                    eprintln!("  col {j}: {}", triplets.join(" "));
                }
            }
            Err(e) => return fail(&e),
        }
    }

    let report = match search_certificate(&bundle.dehom, k, l, &heuristics, deadline) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let t = stage("generate+linearize+solve", t);

    let mut cert_json_value = None;
    let mut grassmann = None;
    let status = match report.certificate {
        Some(mut cert) => {
            if let Err(e) = rehomogenize(&mut cert, &bundle.ledger, &bundle.hom, &bundle.dehom) {
                return fail(&e);
            }
            match to_final_polynomial(
                &cert,
                &bundle.reduced_hom,
                &bundle.hom,
                &bundle.flag,
                bundle.sphere.num_vertices(),
            ) {
                Ok(fp) => {
                    let passed = grassmann_numeric_check(&fp, trials, 0x5eed);
                    grassmann = Some(GrassmannSummary { trials, passed });
                    cert.final_polynomial = Some(fp);
                    if !passed {
                        eprintln!("error: final polynomial failed the minor check");
                        return 3;
                    }
                }
                Err(Error::TranslationUnavailable(why)) => {
                    eprintln!("note: final-polynomial translation unavailable: {why}");
                }
                Err(e) => return fail(&e),
            }
            let json = certificate_to_json(&cert);
            if let Some(path) = output {
                if let Err(e) = std::fs::write(path, &json) {
                    return fail_io(path, e);
                }
            }
            cert_json_value = Some(serde_json::from_str(&json).expect("valid json"));
            "certificate"
        }
        None => {
            if let Some(path) = output {
                if let Err(e) = std::fs::write(path, no_certificate_json(k, l, &heuristics)) {
                    return fail_io(path, e);
                }
            }
            "none"
        }
    };
    stage("certify", t);

    let out = CertifyReport {
        schema: REPORT_SCHEMA,
        subcommand: "certify",
        input: input.display().to_string(),
        sphere: SphereSummary::of(&bundle),
        flag: bundle.flag.facet_indices.iter().map(|&j| j + 1).collect(),
        k,
        l,
        heuristics,
        pool: PoolSummary {
            entries: report.pool_entries,
            variables: report.pool_variables,
            constraints: report.num_constraints,
        },
        monomial_rows: report.monomial_rows,
        lp: LpSummary {
            status: match report.lp.status {
                spherecert::lp::LpStatus::CertificateFound => "certificate".into(),
                spherecert::lp::LpStatus::NoCertificate => "none".into(),
            },
            pivots: report.lp.pivots,
            presolve_eliminated: report.lp.presolve_eliminated,
        },
        status: status.into(),
        certificate: cert_json_value,
        grassmann_check: grassmann,
        warnings: bundle.warnings.clone(),
    };
    emit(&out, common.format);
    if status == "certificate" {
        0
    } else {
        1
    }
}

fn emit(report: &CertifyReport, format: Format) {
    match format {
        Format::Text => print!("{}", report.render_text()),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("report serialization")
        ),
    }
}

pub fn parametrize(
    input: &Path,
    overrides: &OverrideArgs,
    common: &CommonArgs,
    redundant_bases: bool,
) -> i32 {
    let (sphere, ov) = match load_with_overrides(input, overrides) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let bundle = match build_bundle(sphere, &ov, redundant_bases) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    match common.format {
        Format::Text => {
            println!("reduced slack matrix (homogeneous):");
            print!("{}", reduced_matrix_text(&bundle.reduced_hom));
            println!("\nreduced slack matrix (dehomogenized):");
            print!("{}", reduced_matrix_text(&bundle.reduced_dehom));
            println!("\nreconstructed slack matrix (dehomogenized, oriented):");
            print!("{}", parametrized_matrix_text(&bundle.dehom));
            for w in &bundle.warnings {
                println!("warning: {w}");
            }
        }
        Format::Json => {
            let entries: Vec<Vec<String>> = (0..bundle.dehom.num_rows())
                .map(|i| {
                    (0..bundle.dehom.num_cols())
                        .map(|c| bundle.dehom.entry(i, c).to_string())
                        .collect()
                })
                .collect();
            let doc = serde_json::json!({
                "schema": "spherecert.parametrize.v1",
                "input": input.display().to_string(),
                "flag": bundle.flag.facet_indices.iter().map(|&j| j + 1).collect::<Vec<_>>(),
                "columns": bundle.columns.iter().map(|ck| serde_json::json!({
                    "facet": ck.facet + 1,
                    "basis": ck.basis.iter().map(|&v| v + 1).collect::<Vec<_>>(),
                    "redundant": ck.redundant,
                })).collect::<Vec<_>>(),
                "fixed_entries": bundle.ledger.fixed_entries.iter()
                    .map(|&(i, c)| vec![i + 1, c + 1]).collect::<Vec<_>>(),
                "entries": entries,
                "warnings": bundle.warnings,
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    0
}

pub fn orient(input: &Path, overrides: &OverrideArgs, common: &CommonArgs) -> i32 {
    let (sphere, ov) = match load_with_overrides(input, overrides) {
        Ok(x) => x,
        Err(e) => return fail(&e),
    };
    let bundle = match build_bundle(sphere, &ov, false) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let violations = orientation_consistency_violations(&bundle.dehom);
    match common.format {
        Format::Text => {
            for (c, key) in bundle.columns.iter().enumerate() {
                let sign = match bundle.dehom.sign(c) {
                    ColumnSign::Plus => "+1",
                    ColumnSign::Minus => "-1",
                    ColumnSign::Unknown => "?",
                };
                println!(
                    "column {:>3} facet {:>3} basis {:?} sign {}",
                    c + 1,
                    key.facet + 1,
                    key.basis.iter().map(|&v| v + 1).collect::<Vec<_>>(),
                    sign
                );
            }
            if violations.is_empty() {
                println!("adjacent-basis consistency: ok");
            } else {
                for (a, b) in &violations {
                    println!(
                        "adjacent-basis violation between columns {} and {}",
                        a + 1,
                        b + 1
                    );
                }
            }
        }
        Format::Json => {
            let doc = serde_json::json!({
                "schema": "spherecert.orient.v1",
                "input": input.display().to_string(),
                "signs": bundle.dehom.signs().iter().map(|s| match s {
                    ColumnSign::Plus => 1,
                    ColumnSign::Minus => -1,
                    ColumnSign::Unknown => 0,
                }).collect::<Vec<_>>(),
                "violations": violations.iter().map(|&(a, b)| vec![a + 1, b + 1]).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&doc).unwrap());
        }
    }
    if violations.is_empty() {
        0
    } else {
        3
    }
}

fn load_certificate(path: &Path) -> Result<Certificate, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", path.display())))?;
    certificate_from_json(&text)?
        .ok_or_else(|| Error::Parse("certificate file has status \"none\"".into()))
}

fn bundle_for_verification(sphere_path: &Path) -> Result<SlackBundle, Error> {
    let text = std::fs::read_to_string(sphere_path)
        .map_err(|e| Error::Parse(format!("reading {}: {e}", sphere_path.display())))?;
    let (sphere, ov) = parse_sphere(&text)?;
    build_bundle(sphere, &ov, false)
}

pub fn verify(certificate: &Path, against: &Path, common: &CommonArgs) -> i32 {
    let bundle = match bundle_for_verification(against) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let mut cert = match load_certificate(certificate) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    match verify_certificate(&mut cert, &bundle.dehom) {
        Ok(()) => {
            match common.format {
                Format::Text => println!(
                    "verified: {} terms sum to the zero polynomial",
                    cert.terms.len()
                ),
                Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "schema": "spherecert.verify.v1",
                        "verified": true,
                        "terms": cert.terms.len(),
                    })
                ),
            }
            0
        }
        Err(Error::CertificateInvalid(residual)) => {
            eprintln!("certificate INVALID; residual: {residual}");
            2
        }
        Err(e) => fail(&e),
    }
}

pub fn check_final(certificate: &Path, against: &Path, trials: usize, common: &CommonArgs) -> i32 {
    let bundle = match bundle_for_verification(against) {
        Ok(b) => b,
        Err(e) => return fail(&e),
    };
    let mut cert = match load_certificate(certificate) {
        Ok(c) => c,
        Err(e) => return fail(&e),
    };
    if let Err(e) = verify_certificate(&mut cert, &bundle.dehom) {
        return fail(&e);
    }
    if let Err(e) = rehomogenize(&mut cert, &bundle.ledger, &bundle.hom, &bundle.dehom) {
        return fail(&e);
    }
    let fp = match to_final_polynomial(
        &cert,
        &bundle.reduced_hom,
        &bundle.hom,
        &bundle.flag,
        bundle.sphere.num_vertices(),
    ) {
        Ok(fp) => fp,
        Err(e) => return fail(&e),
    };
    let passed = grassmann_numeric_check(&fp, trials, 0x5eed);
    match common.format {
        Format::Text => println!(
            "final polynomial: {} terms, {} trials, {}",
            fp.terms.len(),
            trials,
            if passed { "all zero" } else { "NONZERO evaluation found" }
        ),
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "schema": "spherecert.check_final.v1",
                "terms": fp.terms.len(),
                "trials": trials,
                "passed": passed,
            })
        ),
    }
    if passed {
        0
    } else {
        3
    }
}
