//! End-to-end assembly: sphere + overrides -> oriented slack matrices.
//!
//! The CLI and the test suites share this; each stage defers to the module
//! that owns it.

use crate::combinatorics::{
    compute_faces, facet_basis, find_facet_flag, validate_basis, validate_flag,
    validate_pseudomanifold, AbstractSphere, FacePoset, FacetBasis, Flag, Overrides,
    PseudomanifoldReport,
};
use crate::error::Error;
use crate::slack::{
    apply_orientation, build_reduced, column_plan, dehomogenize, infer_orientation, reconstruct,
    ColumnKey, ParametrizedSlackMatrix, ReducedSlackMatrix, ScalingLedger,
};

/// Everything the certificate stages need, built once per run.
pub struct SlackBundle {
    pub sphere: AbstractSphere,
    pub poset: FacePoset,
    pub flag: Flag,
    pub bases: Vec<FacetBasis>,
    pub columns: Vec<ColumnKey>,
    pub reduced_hom: ReducedSlackMatrix,
    pub reduced_dehom: ReducedSlackMatrix,
    pub ledger: ScalingLedger,
    /// Oriented dehomogenized reconstruction; the LP operates on this.
    pub dehom: ParametrizedSlackMatrix,
    /// Homogeneous reconstruction with the same column signs.
    pub hom: ParametrizedSlackMatrix,
    pub pseudomanifold: PseudomanifoldReport,
    pub warnings: Vec<String>,
}

pub fn build_bundle(
    sphere: AbstractSphere,
    overrides: &Overrides,
    auto_redundant: bool,
) -> Result<SlackBundle, Error> {
    let mut warnings = Vec::new();

    let poset = compute_faces(&sphere);
    warnings.extend(poset.warnings.iter().cloned());
    let pseudomanifold = validate_pseudomanifold(&sphere);
    if !pseudomanifold.passes() && !sphere.is_partial() {
        warnings.push(format!(
            "pseudo-manifold check failed (advisory): {pseudomanifold}"
        ));
    }

    let flag = match &overrides.flag {
        Some(indices) => validate_flag(&sphere, &poset, indices, &mut warnings)?,
        None => find_facet_flag(&sphere, &poset)?,
    };

    let mut bases = Vec::with_capacity(sphere.num_facets());
    for j in 0..sphere.num_facets() {
        let basis = match overrides.bases.get(&j) {
            Some(verts) => validate_basis(&sphere, &poset, j, verts, &mut warnings)?,
            None => facet_basis(&sphere, &poset, j)?,
        };
        bases.push(basis);
    }
    let flag_bases: Vec<FacetBasis> = flag
        .facet_indices
        .iter()
        .map(|&j| bases[j].clone())
        .collect();

    let reduced_hom = build_reduced(&sphere, &flag, &flag_bases);
    let (reduced_dehom, ledger) =
        dehomogenize(&reduced_hom, overrides.fixed_entries.as_deref())?;

    let columns = column_plan(
        &sphere,
        &poset,
        &flag,
        &bases,
        &overrides.redundant_columns,
        auto_redundant,
    )?;

    let mut dehom = reconstruct(&reduced_dehom, &sphere, &columns);
    warnings.extend(dehom.warnings.iter().cloned());

    // Zero-pattern fidelity: with every non-simplicial facet in the flag,
    // an entry vanishes exactly at the incidences.
    let d = sphere.dimension();
    let all_nonsimplicial_in_flag = (0..sphere.num_facets())
        .all(|j| sphere.facet(j).len() == d || flag.facet_indices.contains(&j));
    if all_nonsimplicial_in_flag {
        for i in 0..dehom.num_rows() {
            for c in 0..dehom.num_cols() {
                let zero = dehom.raw_entry(i, c).is_zero();
                if zero != dehom.incident(i, c) {
                    let msg = format!(
                        "zero-pattern violation at entry ({},{}): {}",
                        i + 1,
                        c + 1,
                        if zero { "unexpected zero" } else { "expected zero" }
                    );
                    if sphere.is_partial() {
                        warnings.push(msg);
                    } else {
                        return Err(Error::Internal(msg));
                    }
                }
            }
        }
    }

    if !overrides.orientation.is_empty() {
        apply_orientation(&mut dehom, &overrides.orientation);
    }
    if !dehom.all_signed() {
        infer_orientation(&mut dehom)?;
    }

    let mut hom = reconstruct(&reduced_hom, &sphere, &columns);
    for c in 0..hom.num_cols() {
        hom.set_sign(c, dehom.sign(c));
    }

    Ok(SlackBundle {
        sphere,
        poset,
        flag,
        bases,
        columns,
        reduced_hom,
        reduced_dehom,
        ledger,
        dehom,
        hom,
        pseudomanifold,
        warnings,
    })
}
