//! Abstract spheres, face posets, flags of facets, and facet bases.
//!
//! Everything here is purely combinatorial: vertices are labels, facets are
//! vertex sets, and faces arise as intersections of facets. Vertex labels
//! are 1-based in all I/O (matching the printed examples this tool
//! reproduces) and 0-based internally.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Combinatorial input: a candidate boundary complex of a `d`-polytope given
/// by its facet vertex-sets. Facet order and the vertex order inside each
/// facet are preserved from the input; the latter carries orientation data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractSphere {
    dimension: usize,
    num_vertices: usize,
    facets: Vec<Facet>,
    /// Partial inputs (only some facets known) skip the vertex-coverage
    /// check and downgrade flag/basis validation to warnings.
    partial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    verts: Vec<usize>,
    set: BTreeSet<usize>,
}

impl Facet {
    fn new(verts: Vec<usize>) -> Self {
        let set = verts.iter().cloned().collect();
        Facet { verts, set }
    }

    /// Vertices in input order (0-based).
    pub fn vertices(&self) -> &[usize] {
        &self.verts
    }

    pub fn set(&self) -> &BTreeSet<usize> {
        &self.set
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.set.contains(&v)
    }
}

impl AbstractSphere {
    /// Builds and validates a sphere from 0-based facet vertex lists.
    pub fn new(
        dimension: usize,
        num_vertices: usize,
        facet_lists: Vec<Vec<usize>>,
        partial: bool,
    ) -> Result<Self, Error> {
        if dimension < 1 {
            return Err(Error::Validation("dimension must be at least 1".into()));
        }
        if num_vertices == 0 {
            return Err(Error::Validation("need at least one vertex".into()));
        }
        if facet_lists.is_empty() {
            return Err(Error::Validation("need at least one facet".into()));
        }
        let mut facets = Vec::with_capacity(facet_lists.len());
        for (j, verts) in facet_lists.into_iter().enumerate() {
            let mut seen = BTreeSet::new();
            for &v in &verts {
                if v >= num_vertices {
                    return Err(Error::Validation(format!(
                        "facet {} contains unknown vertex label {}",
                        j + 1,
                        v + 1
                    )));
                }
                if !seen.insert(v) {
                    return Err(Error::Validation(format!(
                        "facet {} repeats vertex {}",
                        j + 1,
                        v + 1
                    )));
                }
            }
            if verts.len() < dimension {
                return Err(Error::Validation(format!(
                    "facet {} has {} vertices; a {}-polytope facet needs at least {}",
                    j + 1,
                    verts.len(),
                    dimension,
                    dimension
                )));
            }
            facets.push(Facet::new(verts));
        }
        for (a, fa) in facets.iter().enumerate() {
            for (b, fb) in facets.iter().enumerate() {
                if a != b && fa.set.is_subset(&fb.set) {
                    return Err(Error::Validation(format!(
                        "facet {} is contained in facet {}",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        if !partial {
            let mut covered = vec![false; num_vertices];
            for f in &facets {
                for &v in &f.verts {
                    covered[v] = true;
                }
            }
            if let Some(v) = covered.iter().position(|&c| !c) {
                return Err(Error::Validation(format!(
                    "vertex {} appears in no facet",
                    v + 1
                )));
            }
        }
        Ok(AbstractSphere {
            dimension,
            num_vertices,
            facets,
            partial,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn facet(&self, j: usize) -> &Facet {
        &self.facets[j]
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    pub fn is_simplicial(&self) -> bool {
        self.facets.iter().all(|f| f.len() == self.dimension)
    }
}

/// Everything a sphere file may carry besides the complex itself. All
/// indices here are 0-based (converted at parse time).
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub flag: Option<Vec<usize>>,
    pub bases: BTreeMap<usize, Vec<usize>>,
    pub orientation: BTreeMap<usize, i8>,
    pub fixed_entries: Option<Vec<(usize, usize)>>,
    pub redundant_columns: Vec<(usize, Vec<usize>)>,
}

#[derive(Serialize, Deserialize)]
struct SphereFile {
    dimension: usize,
    vertices: usize,
    facets: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    flag: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bases: Option<BTreeMap<String, Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    orientation: Option<BTreeMap<String, i8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fixed_entries: Option<Vec<(i64, i64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    redundant_columns: Option<Vec<RedundantColumnFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    partial: Option<bool>,
}

#[derive(Serialize, Deserialize)]
struct RedundantColumnFile {
    facet: i64,
    basis: Vec<i64>,
}

fn to_zero_based(x: i64, what: &str, max: usize) -> Result<usize, Error> {
    if x < 1 || x as usize > max {
        return Err(Error::Parse(format!(
            "{what} {x} out of range 1..{max}"
        )));
    }
    Ok(x as usize - 1)
}

/// Parses the JSON sphere file format. Optional fields override automatic
/// computation downstream.
pub fn parse_sphere(text: &str) -> Result<(AbstractSphere, Overrides), Error> {
    let file: SphereFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = file.vertices;
    let m = file.facets.len();
    let facets = file
        .facets
        .iter()
        .map(|f| {
            f.iter()
                .map(|&v| to_zero_based(v, "vertex label", n))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let partial = file.partial.unwrap_or(false);
    let sphere = AbstractSphere::new(file.dimension, n, facets, partial)?;

    let mut ov = Overrides::default();
    if let Some(flag) = file.flag {
        ov.flag = Some(
            flag.iter()
                .map(|&j| to_zero_based(j, "facet index", m))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if let Some(bases) = file.bases {
        for (k, verts) in bases {
            let j: i64 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad facet key {k:?} in bases")))?;
            let j = to_zero_based(j, "facet index", m)?;
            let verts = verts
                .iter()
                .map(|&v| to_zero_based(v, "vertex label", n))
                .collect::<Result<Vec<_>, _>>()?;
            ov.bases.insert(j, verts);
        }
    }
    if let Some(orient) = file.orientation {
        for (k, s) in orient {
            let j: i64 = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad facet key {k:?} in orientation")))?;
            let j = to_zero_based(j, "facet index", m)?;
            if s != 1 && s != -1 {
                return Err(Error::Parse(format!("orientation for facet {k} must be +1 or -1")));
            }
            ov.orientation.insert(j, s);
        }
    }
    if let Some(fixed) = file.fixed_entries {
        let d1 = file.dimension + 1;
        ov.fixed_entries = Some(
            fixed
                .iter()
                .map(|&(i, c)| {
                    Ok((
                        to_zero_based(i, "row", n)?,
                        to_zero_based(c, "flag column", d1)?,
                    ))
                })
                .collect::<Result<Vec<_>, Error>>()?,
        );
    }
    if let Some(red) = file.redundant_columns {
        for rc in red {
            let j = to_zero_based(rc.facet, "facet index", m)?;
            let basis = rc
                .basis
                .iter()
                .map(|&v| to_zero_based(v, "vertex label", n))
                .collect::<Result<Vec<_>, _>>()?;
            ov.redundant_columns.push((j, basis));
        }
    }
    Ok((sphere, ov))
}

/// Serializes a sphere (and overrides) back to the file format; 1-based.
pub fn serialize_sphere(sphere: &AbstractSphere, ov: &Overrides) -> String {
    let file = SphereFile {
        dimension: sphere.dimension,
        vertices: sphere.num_vertices,
        facets: sphere
            .facets
            .iter()
            .map(|f| f.verts.iter().map(|&v| v as i64 + 1).collect())
            .collect(),
        flag: ov
            .flag
            .as_ref()
            .map(|fl| fl.iter().map(|&j| j as i64 + 1).collect()),
        bases: if ov.bases.is_empty() {
            None
        } else {
            Some(
                ov.bases
                    .iter()
                    .map(|(&j, vs)| {
                        (
                            (j + 1).to_string(),
                            vs.iter().map(|&v| v as i64 + 1).collect(),
                        )
                    })
                    .collect(),
            )
        },
        orientation: if ov.orientation.is_empty() {
            None
        } else {
            Some(
                ov.orientation
                    .iter()
                    .map(|(&j, &s)| ((j + 1).to_string(), s))
                    .collect(),
            )
        },
        fixed_entries: ov.fixed_entries.as_ref().map(|fx| {
            fx.iter()
                .map(|&(i, c)| (i as i64 + 1, c as i64 + 1))
                .collect()
        }),
        redundant_columns: if ov.redundant_columns.is_empty() {
            None
        } else {
            Some(
                ov.redundant_columns
                    .iter()
                    .map(|(j, basis)| RedundantColumnFile {
                        facet: *j as i64 + 1,
                        basis: basis.iter().map(|&v| v as i64 + 1).collect(),
                    })
                    .collect(),
            )
        },
        partial: if sphere.partial { Some(true) } else { None },
    };
    serde_json::to_string_pretty(&file).expect("sphere serialization cannot fail")
}

/// Intersection-closure of the facets, ranked by longest chain.
#[derive(Clone, Debug)]
pub struct FacePoset {
    /// Sorted vertex-set per face; faces[0] is the empty face.
    faces: Vec<BTreeSet<usize>>,
    index: BTreeMap<BTreeSet<usize>, usize>,
    /// Longest-chain rank; the empty face has dimension -1.
    dim: Vec<i64>,
    pub warnings: Vec<String>,
}

impl FacePoset {
    pub fn faces(&self) -> &[BTreeSet<usize>] {
        &self.faces
    }

    pub fn face_index(&self, set: &BTreeSet<usize>) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn dim_of(&self, set: &BTreeSet<usize>) -> Option<i64> {
        self.face_index(set).map(|i| self.dim[i])
    }

    pub fn dim(&self, face: usize) -> i64 {
        self.dim[face]
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn faces_of_dim(&self, d: i64) -> impl Iterator<Item = &BTreeSet<usize>> {
        self.faces
            .iter()
            .zip(self.dim.iter())
            .filter(move |&(_, &fd)| fd == d)
            .map(|(f, _)| f)
    }
}

/// Closes the facet sets under pairwise intersection, adds the empty face,
/// and assigns dimensions by longest containment chain.
pub fn compute_faces(sphere: &AbstractSphere) -> FacePoset {
    let mut sets: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    sets.insert(BTreeSet::new());
    for f in sphere.facets() {
        sets.insert(f.set().clone());
    }
    // Fixpoint closure under pairwise intersection.
    let mut frontier: Vec<BTreeSet<usize>> = sets.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for f in sphere.facets() {
            for g in &frontier {
                let inter: BTreeSet<usize> = f.set().intersection(g).cloned().collect();
                if !sets.contains(&inter) {
                    sets.insert(inter.clone());
                    fresh.push(inter);
                }
            }
        }
        frontier = fresh;
    }

    // Order faces by (cardinality, lexicographic) so rank computation can
    // sweep upward.
    let mut faces: Vec<BTreeSet<usize>> = sets.into_iter().collect();
    faces.sort_by_key(|f| (f.len(), f.iter().cloned().collect::<Vec<_>>()));
    let index: BTreeMap<BTreeSet<usize>, usize> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.clone(), i))
        .collect();

    let mut dim = vec![-1i64; faces.len()];
    for i in 0..faces.len() {
        if faces[i].is_empty() {
            dim[i] = -1;
            continue;
        }
        let mut best = -1i64;
        for k in 0..i {
            if faces[k].len() < faces[i].len() && faces[k].is_subset(&faces[i]) {
                best = best.max(dim[k]);
            }
        }
        dim[i] = best + 1;
    }

    let mut warnings = Vec::new();
    let d = sphere.dimension() as i64;
    for (j, f) in sphere.facets().iter().enumerate() {
        let fd = dim[index[f.set()]];
        if fd != d - 1 {
            warnings.push(format!(
                "facet {} ranks at dimension {} instead of {}; the input is not a polytopal lattice",
                j + 1,
                fd,
                d - 1
            ));
        }
    }

    FacePoset {
        faces,
        index,
        dim,
        warnings,
    }
}

/// A flag of facets: `d+1` facet indices whose intersections, taken in
/// `chain_order`, drop in dimension by exactly one per step and end empty.
/// `facet_indices` keeps the order columns will take in the reduced matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub facet_indices: Vec<usize>,
    pub chain_order: Vec<usize>,
}

impl Flag {
    pub fn len(&self) -> usize {
        self.facet_indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facet_indices.is_empty()
    }
}

fn intersection_of(sphere: &AbstractSphere, idxs: &[usize]) -> BTreeSet<usize> {
    let mut it = idxs.iter();
    let first = match it.next() {
        Some(&j) => sphere.facet(j).set().clone(),
        None => return BTreeSet::new(),
    };
    it.fold(first, |acc, &j| {
        acc.intersection(sphere.facet(j).set()).cloned().collect()
    })
}

/// Checks whether `order` is a strict chain: prefix intersections are faces
/// of dimensions d-1, d-2, ..., 0, then empty.
fn is_chain_order(sphere: &AbstractSphere, poset: &FacePoset, order: &[usize]) -> bool {
    let d = sphere.dimension() as i64;
    let mut current = sphere.facet(order[0]).set().clone();
    if poset.dim_of(&current) != Some(d - 1) {
        return false;
    }
    for (step, &j) in order.iter().enumerate().skip(1) {
        let next: BTreeSet<usize> = current
            .intersection(sphere.facet(j).set())
            .cloned()
            .collect();
        let want = d - 1 - step as i64;
        if want >= 0 {
            if poset.dim_of(&next) != Some(want) {
                return false;
            }
        } else if !next.is_empty() {
            return false;
        }
        current = next;
    }
    true
}

/// Greedy flag search: first facet lowest index, then repeatedly the
/// lowest-index facet whose intersection with the running prefix drops the
/// dimension by exactly one, with backtracking. Deterministic.
pub fn find_facet_flag(sphere: &AbstractSphere, poset: &FacePoset) -> Result<Flag, Error> {
    let d = sphere.dimension();
    let m = sphere.num_facets();
    if m < d + 1 {
        return Err(Error::NoFlag);
    }

    fn extend(
        sphere: &AbstractSphere,
        poset: &FacePoset,
        prefix: &mut Vec<usize>,
        current: &BTreeSet<usize>,
        want_dim: i64,
    ) -> bool {
        if want_dim < -1 {
            return true;
        }
        for j in 0..sphere.num_facets() {
            if prefix.contains(&j) {
                continue;
            }
            let next: BTreeSet<usize> = current
                .intersection(sphere.facet(j).set())
                .cloned()
                .collect();
            let ok = if want_dim >= 0 {
                poset.dim_of(&next) == Some(want_dim)
            } else {
                next.is_empty()
            };
            if ok {
                prefix.push(j);
                if extend(sphere, poset, prefix, &next, want_dim - 1) {
                    return true;
                }
                prefix.pop();
            }
        }
        false
    }

    let d = d as i64;
    for first in 0..m {
        let start = sphere.facet(first).set().clone();
        if poset.dim_of(&start) != Some(d - 1) {
            continue;
        }
        let mut prefix = vec![first];
        if extend(sphere, poset, &mut prefix, &start, d - 2) {
            return Ok(Flag {
                chain_order: prefix.clone(),
                facet_indices: prefix,
            });
        }
    }
    Err(Error::NoFlag)
}

/// Validates a user-supplied flag. The facet set must admit *some* chain
/// ordering (column order stays as supplied). On partial inputs a failed
/// check is downgraded to a warning, since the impoverished poset cannot
/// rank faces reliably.
pub fn validate_flag(
    sphere: &AbstractSphere,
    poset: &FacePoset,
    indices: &[usize],
    warnings: &mut Vec<String>,
) -> Result<Flag, Error> {
    let d = sphere.dimension();
    if indices.len() != d + 1 {
        return Err(Error::Validation(format!(
            "flag must list {} facets, got {}",
            d + 1,
            indices.len()
        )));
    }
    let mut dedup = indices.to_vec();
    dedup.sort_unstable();
    dedup.dedup();
    if dedup.len() != indices.len() {
        return Err(Error::Validation("flag repeats a facet".into()));
    }
    if !intersection_of(sphere, indices).is_empty() {
        let msg = "flag facets have a common vertex".to_string();
        if sphere.is_partial() {
            warnings.push(msg);
        } else {
            return Err(Error::Validation(msg));
        }
    }

    // Search for a chain ordering.
    fn order_search(
        sphere: &AbstractSphere,
        poset: &FacePoset,
        remaining: &mut Vec<usize>,
        prefix: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if remaining.is_empty() {
            return Some(prefix.clone());
        }
        for k in 0..remaining.len() {
            let j = remaining.remove(k);
            prefix.push(j);
            if is_chain_order(sphere, poset, prefix) {
                if let Some(full) = order_search(sphere, poset, remaining, prefix) {
                    return Some(full);
                }
            }
            prefix.pop();
            remaining.insert(k, j);
        }
        None
    }

    let mut remaining = indices.to_vec();
    let mut prefix = Vec::new();
    match order_search(sphere, poset, &mut remaining, &mut prefix) {
        Some(chain_order) => Ok(Flag {
            facet_indices: indices.to_vec(),
            chain_order,
        }),
        None => {
            let msg = format!(
                "supplied flag {:?} admits no chain ordering in the face poset",
                indices.iter().map(|&j| j + 1).collect::<Vec<_>>()
            );
            if sphere.is_partial() {
                warnings.push(msg);
                Ok(Flag {
                    facet_indices: indices.to_vec(),
                    chain_order: indices.to_vec(),
                })
            } else {
                Err(Error::Validation(msg))
            }
        }
    }
}

/// An ordered affine basis for a facet: `d` vertices forming a flag of
/// vertices inside the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacetBasis {
    pub facet_index: usize,
    pub ordered_vertices: Vec<usize>,
}

/// Basis for facet `j`: a simplicial facet is its own basis in input order;
/// otherwise a greedy chain ascent through the poset restricted to subfaces
/// of the facet, lexicographically smallest face first, with backtracking.
pub fn facet_basis(
    sphere: &AbstractSphere,
    poset: &FacePoset,
    facet_index: usize,
) -> Result<FacetBasis, Error> {
    let d = sphere.dimension();
    let facet = sphere.facet(facet_index);
    if facet.len() == d {
        return Ok(FacetBasis {
            facet_index,
            ordered_vertices: facet.vertices().to_vec(),
        });
    }

    // Candidate subfaces per level, restricted to the facet, sorted.
    let mut by_dim: BTreeMap<i64, Vec<&BTreeSet<usize>>> = BTreeMap::new();
    for (i, f) in poset.faces().iter().enumerate() {
        if f.is_subset(facet.set()) {
            by_dim.entry(poset.dim(i)).or_default().push(f);
        }
    }

    fn ascend(
        by_dim: &BTreeMap<i64, Vec<&BTreeSet<usize>>>,
        chain: &mut Vec<BTreeSet<usize>>,
        level: i64,
        top: i64,
    ) -> bool {
        if level > top {
            return true;
        }
        let prev = chain.last().cloned().unwrap_or_default();
        if let Some(cands) = by_dim.get(&level) {
            for cand in cands {
                if prev.is_subset(cand) {
                    chain.push((*cand).clone());
                    if ascend(by_dim, chain, level + 1, top) {
                        return true;
                    }
                    chain.pop();
                }
            }
        }
        false
    }

    let top = d as i64 - 1;
    let mut chain: Vec<BTreeSet<usize>> = Vec::new();
    if !ascend(&by_dim, &mut chain, 0, top) {
        return Err(Error::NoBasis {
            facet: facet_index + 1,
            needed: d,
        });
    }
    // chain[i] has dimension i; the last element is the facet itself.
    let mut ordered = Vec::with_capacity(d);
    let mut below: BTreeSet<usize> = BTreeSet::new();
    for level in chain.iter().take(d) {
        let v = level
            .difference(&below)
            .next()
            .cloned()
            .ok_or_else(|| Error::Internal("empty chain step in facet basis".into()))?;
        ordered.push(v);
        below = level.clone();
    }
    Ok(FacetBasis {
        facet_index,
        ordered_vertices: ordered,
    })
}

/// Checks a user-supplied basis; partial inputs only warn.
pub fn validate_basis(
    sphere: &AbstractSphere,
    poset: &FacePoset,
    facet_index: usize,
    verts: &[usize],
    warnings: &mut Vec<String>,
) -> Result<FacetBasis, Error> {
    let d = sphere.dimension();
    let facet = sphere.facet(facet_index);
    if verts.len() != d {
        return Err(Error::Validation(format!(
            "basis for facet {} must have {} vertices",
            facet_index + 1,
            d
        )));
    }
    for &v in verts {
        if !facet.contains(v) {
            return Err(Error::Validation(format!(
                "basis vertex {} not in facet {}",
                v + 1,
                facet_index + 1
            )));
        }
    }
    // Each prefix must span a face of the right rank with the next vertex
    // escaping it.
    let mut ok = true;
    'outer: for k in 1..=verts.len() {
        let prefix: BTreeSet<usize> = verts[..k].iter().cloned().collect();
        if prefix.len() != k {
            ok = false;
            break;
        }
        // smallest face containing the prefix, within the facet
        let mut span: Option<&BTreeSet<usize>> = None;
        for f in poset.faces() {
            if prefix.is_subset(f) && f.is_subset(facet.set()) {
                span = match span {
                    None => Some(f),
                    Some(s) if f.len() < s.len() => Some(f),
                    s => s,
                };
            }
        }
        match span {
            Some(s) => {
                if poset.dim_of(s) != Some(k as i64 - 1) {
                    ok = false;
                    break 'outer;
                }
            }
            None => {
                ok = false;
                break;
            }
        }
    }
    if !ok {
        let msg = format!(
            "basis {:?} for facet {} is not a vertex flag in the face poset",
            verts.iter().map(|&v| v + 1).collect::<Vec<_>>(),
            facet_index + 1
        );
        if sphere.is_partial() {
            warnings.push(msg);
        } else {
            return Err(Error::Validation(msg));
        }
    }
    Ok(FacetBasis {
        facet_index,
        ordered_vertices: verts.to_vec(),
    })
}

/// Advisory pseudo-manifold report. Failures never block certification.
#[derive(Clone, Debug, Default)]
pub struct PseudomanifoldReport {
    pub simplicial: bool,
    /// Ridges not contained in exactly two facets (simplicial case).
    pub bad_ridges: Vec<(Vec<usize>, usize)>,
    /// For quasi-simplicial input: facet pairs meeting in >= d-1 vertices.
    pub large_intersections: Vec<(usize, usize, usize)>,
    pub dual_connected: bool,
    pub dual_components: usize,
}

impl PseudomanifoldReport {
    pub fn passes(&self) -> bool {
        self.bad_ridges.is_empty() && self.dual_connected
    }
}

impl fmt::Display for PseudomanifoldReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.simplicial {
            if self.bad_ridges.is_empty() {
                writeln!(f, "every ridge lies in exactly two facets")?;
            } else {
                writeln!(f, "{} ridge(s) violate the two-facet rule:", self.bad_ridges.len())?;
                for (r, c) in &self.bad_ridges {
                    let r1: Vec<usize> = r.iter().map(|&v| v + 1).collect();
                    writeln!(f, "  ridge {r1:?} lies in {c} facet(s)")?;
                }
            }
        } else {
            writeln!(
                f,
                "quasi-simplicial input; {} facet pair(s) meet in >= d-1 vertices",
                self.large_intersections.len()
            )?;
        }
        if self.dual_connected {
            writeln!(f, "dual graph connected")
        } else {
            writeln!(f, "dual graph DISCONNECTED ({} components)", self.dual_components)
        }
    }
}

/// Ridge / dual-graph sanity report; advisory only.
pub fn validate_pseudomanifold(sphere: &AbstractSphere) -> PseudomanifoldReport {
    let d = sphere.dimension();
    let m = sphere.num_facets();
    let simplicial = sphere.is_simplicial();
    let mut report = PseudomanifoldReport {
        simplicial,
        ..Default::default()
    };

    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m];
    if simplicial {
        let mut ridge_count: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
        for f in sphere.facets() {
            let verts: Vec<usize> = f.set().iter().cloned().collect();
            for skip in 0..verts.len() {
                let mut ridge = verts.clone();
                ridge.remove(skip);
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        for (r, c) in &ridge_count {
            if *c != 2 {
                report.bad_ridges.push((r.clone(), *c));
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                let inter = sphere
                    .facet(a)
                    .set()
                    .intersection(sphere.facet(b).set())
                    .count();
                if inter == d - 1 {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
    } else {
        for a in 0..m {
            for b in a + 1..m {
                let inter = sphere
                    .facet(a)
                    .set()
                    .intersection(sphere.facet(b).set())
                    .count();
                if inter >= d - 1 {
                    report.large_intersections.push((a, b, inter));
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
    }

    // Dual-graph connectivity.
    let mut seen = vec![false; m];
    let mut components = 0;
    for start in 0..m {
        if seen[start] {
            continue;
        }
        components += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    report.dual_components = components;
    report.dual_connected = components == 1;
    report
}
