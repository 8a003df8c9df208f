//! Reduced symbolic slack matrices, dehomogenization by row/column scaling,
//! determinant reconstruction of the full slack matrix, and combinatorial
//! orientation inference.
//!
//! The reduced matrix has one column per flag facet; entry (i, j) is zero
//! when vertex i lies on the j-th flag facet and a fresh variable x_{i,j}
//! otherwise. Scaling a spanning forest of nonzero entries to one removes
//! the row/column scaling freedom. Every entry of the full slack matrix is
//! then the determinant of the rows indexed by a facet basis followed by the
//! row of the vertex in question, up to a per-column sign resolved by
//! orientation inference.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rayon::prelude::*;

use crate::combinatorics::{AbstractSphere, FacePoset, FacetBasis, Flag};
use crate::error::Error;
use crate::polynomial::{det_symbolic, LaurentMonomial, Polynomial, Var};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ReducedEntry {
    Zero,
    One,
    Variable,
}

/// Descriptor of one column of the reconstructed matrix: which facet it
/// belongs to and which ordered basis generates it. Redundant columns carry
/// an alternative basis of a non-simplicial facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnKey {
    pub facet: usize,
    pub basis: Vec<usize>,
    pub redundant: bool,
}

/// The n x (d+1) symbolic matrix over {0, 1, variable} for a flag of facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSlackMatrix {
    n: usize,
    cols: Vec<ColumnKey>,
    grid: Vec<Vec<ReducedEntry>>,
    homogeneous: bool,
}

impl ReducedSlackMatrix {
    pub fn num_rows(&self) -> usize {
        self.n
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[ColumnKey] {
        &self.cols
    }

    pub fn entry(&self, i: usize, c: usize) -> ReducedEntry {
        self.grid[i][c]
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Entry as a polynomial in the reduced slack variables.
    pub fn entry_poly(&self, i: usize, c: usize) -> Polynomial {
        match self.grid[i][c] {
            ReducedEntry::Zero => Polynomial::zero(),
            ReducedEntry::One => Polynomial::one(),
            ReducedEntry::Variable => Polynomial::var(Var::new(i, c)),
        }
    }

    /// Row as polynomials, for determinant assembly.
    pub fn row_polys(&self, i: usize) -> Vec<Polynomial> {
        (0..self.cols.len()).map(|c| self.entry_poly(i, c)).collect()
    }

    /// The free variables, in canonical order.
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for c in 0..self.cols.len() {
                if self.grid[i][c] == ReducedEntry::Variable {
                    out.push(Var::new(i, c));
                }
            }
        }
        out
    }

    pub fn ones(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for c in 0..self.cols.len() {
                if self.grid[i][c] == ReducedEntry::One {
                    out.push((i, c));
                }
            }
        }
        out
    }
}

/// One column per flag facet; zero pattern from the incidences, fresh
/// variables elsewhere. Homogeneous: no entry is fixed to one yet.
pub fn build_reduced(sphere: &AbstractSphere, flag: &Flag, bases: &[FacetBasis]) -> ReducedSlackMatrix {
    assert_eq!(flag.facet_indices.len(), bases.len());
    let n = sphere.num_vertices();
    let cols: Vec<ColumnKey> = flag
        .facet_indices
        .iter()
        .zip(bases)
        .map(|(&facet, b)| {
            assert_eq!(b.facet_index, facet);
            ColumnKey {
                facet,
                basis: b.ordered_vertices.clone(),
                redundant: false,
            }
        })
        .collect();
    let grid = (0..n)
        .map(|i| {
            cols.iter()
                .map(|ck| {
                    if sphere.facet(ck.facet).contains(i) {
                        ReducedEntry::Zero
                    } else {
                        ReducedEntry::Variable
                    }
                })
                .collect()
        })
        .collect();
    ReducedSlackMatrix {
        n,
        cols,
        grid,
        homogeneous: true,
    }
}

/// Bookkeeping for the dehomogenization: per-row and per-column scale
/// factors as formal Laurent monomials in the original variables, and the
/// list of entries fixed to one. Applying the recorded scalings to the
/// homogeneous matrix reproduces the dehomogenized one.
#[derive(Clone, Debug)]
pub struct ScalingLedger {
    pub row_scale: Vec<LaurentMonomial>,
    pub col_scale: Vec<LaurentMonomial>,
    pub fixed_entries: Vec<(usize, usize)>,
}

impl ScalingLedger {
    /// Image of a dehomogenized variable in the original (homogeneous)
    /// variables: x'_{i,c} -> x_{i,c} / (rho_i sigma_c).
    pub fn substitution_image(&self, v: Var) -> LaurentMonomial {
        LaurentMonomial::var(v)
            .div(&self.row_scale[v.row as usize])
            .div(&self.col_scale[v.col as usize])
    }
}

/// Fixes a maximal spanning forest of nonzero entries to one, breadth-first
/// from row 1 with rows and columns visited in index order. A user-supplied
/// fixed set overrides, validated for acyclicity and structural zeros.
pub fn dehomogenize(
    m: &ReducedSlackMatrix,
    user_fixed: Option<&[(usize, usize)]>,
) -> Result<(ReducedSlackMatrix, ScalingLedger), Error> {
    if !m.homogeneous {
        return Err(Error::Dehomogenize("matrix is already dehomogenized".into()));
    }
    let n = m.n;
    let ncols = m.cols.len();

    let forest: Vec<(usize, usize)> = match user_fixed {
        Some(fixed) => {
            // Validate: entries exist, are nonzero, and form a forest.
            let mut uf = UnionFind::new(n + ncols);
            let mut seen = HashSet::new();
            for &(i, c) in fixed {
                if i >= n || c >= ncols {
                    return Err(Error::Dehomogenize(format!(
                        "fixed entry ({},{}) out of range",
                        i + 1,
                        c + 1
                    )));
                }
                if m.grid[i][c] == ReducedEntry::Zero {
                    return Err(Error::Dehomogenize(format!(
                        "fixed entry ({},{}) is a structural zero",
                        i + 1,
                        c + 1
                    )));
                }
                if !seen.insert((i, c)) {
                    return Err(Error::Dehomogenize(format!(
                        "fixed entry ({},{}) repeated",
                        i + 1,
                        c + 1
                    )));
                }
                if !uf.union(i, n + c) {
                    return Err(Error::Dehomogenize(format!(
                        "fixed entries contain a cycle through ({},{})",
                        i + 1,
                        c + 1
                    )));
                }
            }
            fixed.to_vec()
        }
        None => {
            // BFS spanning forest; nodes 0..n are rows, n..n+ncols columns.
            let mut visited = vec![false; n + ncols];
            let mut forest = Vec::new();
            let mut queue = std::collections::VecDeque::new();
            for seed in 0..n + ncols {
                if visited[seed] {
                    continue;
                }
                visited[seed] = true;
                queue.push_back(seed);
                while let Some(node) = queue.pop_front() {
                    if node < n {
                        let i = node;
                        for c in 0..ncols {
                            if m.grid[i][c] == ReducedEntry::Variable && !visited[n + c] {
                                visited[n + c] = true;
                                forest.push((i, c));
                                queue.push_back(n + c);
                            }
                        }
                    } else {
                        let c = node - n;
                        for i in 0..n {
                            if m.grid[i][c] == ReducedEntry::Variable && !visited[i] {
                                visited[i] = true;
                                forest.push((i, c));
                                queue.push_back(i);
                            }
                        }
                    }
                }
            }
            forest
        }
    };

    // Solve the scale factors over the forest: rho_i sigma_c = x_{i,c} on
    // every fixed entry; component roots scale to 1.
    let mut row_scale: Vec<Option<LaurentMonomial>> = vec![None; n];
    let mut col_scale: Vec<Option<LaurentMonomial>> = vec![None; ncols];
    let mut adj_row: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut adj_col: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for &(i, c) in &forest {
        adj_row[i].push(c);
        adj_col[c].push(i);
    }
    for seed in 0..n + ncols {
        let seeded = if seed < n {
            if row_scale[seed].is_some() {
                continue;
            }
            row_scale[seed] = Some(LaurentMonomial::one());
            seed
        } else {
            if col_scale[seed - n].is_some() {
                continue;
            }
            col_scale[seed - n] = Some(LaurentMonomial::one());
            seed
        };
        let mut stack = vec![seeded];
        while let Some(node) = stack.pop() {
            if node < n {
                let i = node;
                let rho = row_scale[i].clone().unwrap();
                for &c in &adj_row[i] {
                    if col_scale[c].is_none() {
                        col_scale[c] =
                            Some(LaurentMonomial::var(Var::new(i, c)).div(&rho));
                        stack.push(n + c);
                    }
                }
            } else {
                let c = node - n;
                let sigma = col_scale[c].clone().unwrap();
                for &i in &adj_col[c] {
                    if row_scale[i].is_none() {
                        row_scale[i] =
                            Some(LaurentMonomial::var(Var::new(i, c)).div(&sigma));
                        stack.push(i);
                    }
                }
            }
        }
    }

    let mut grid = m.grid.clone();
    for &(i, c) in &forest {
        grid[i][c] = ReducedEntry::One;
    }
    let ledger = ScalingLedger {
        row_scale: row_scale.into_iter().map(Option::unwrap).collect(),
        col_scale: col_scale.into_iter().map(Option::unwrap).collect(),
        fixed_entries: forest,
    };
    Ok((
        ReducedSlackMatrix {
            n,
            cols: m.cols.clone(),
            grid,
            homogeneous: false,
        },
        ledger,
    ))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    /// False when x and y were already connected (the new edge closes a cycle).
    fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        self.parent[rx] = ry;
        true
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ColumnSign {
    Plus,
    Minus,
    Unknown,
}

impl ColumnSign {
    pub fn factor(self) -> i8 {
        match self {
            ColumnSign::Plus => 1,
            ColumnSign::Minus => -1,
            ColumnSign::Unknown => panic!("column sign still unknown"),
        }
    }
}

/// The reconstructed n x (m + redundant) matrix of determinant polynomials,
/// with a per-column orientation sign.
#[derive(Clone, Debug)]
pub struct ParametrizedSlackMatrix {
    n: usize,
    cols: Vec<ColumnKey>,
    /// Raw determinants, before the orientation sign is applied.
    raw: Vec<Vec<Polynomial>>,
    signs: Vec<ColumnSign>,
    /// Facet vertex-set per column, for incidence tests downstream.
    facet_sets: Vec<BTreeSet<usize>>,
    /// Columns whose incidences are structurally trusted: the facet is
    /// simplicial or belongs to the flag.
    trusted: Vec<bool>,
    pub warnings: Vec<String>,
    homogeneous: bool,
}

impl ParametrizedSlackMatrix {
    pub fn num_rows(&self) -> usize {
        self.n
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[ColumnKey] {
        &self.cols
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn sign(&self, col: usize) -> ColumnSign {
        self.signs[col]
    }

    pub fn signs(&self) -> &[ColumnSign] {
        &self.signs
    }

    pub fn set_sign(&mut self, col: usize, sign: ColumnSign) {
        self.signs[col] = sign;
    }

    pub fn all_signed(&self) -> bool {
        self.signs.iter().all(|&s| s != ColumnSign::Unknown)
    }

    pub fn raw_entry(&self, i: usize, col: usize) -> &Polynomial {
        &self.raw[i][col]
    }

    /// Sign-corrected entry; requires the column sign to be resolved.
    pub fn entry(&self, i: usize, col: usize) -> Polynomial {
        match self.signs[col] {
            ColumnSign::Plus => self.raw[i][col].clone(),
            ColumnSign::Minus => self.raw[i][col].neg(),
            ColumnSign::Unknown => panic!("column {} sign unknown", col + 1),
        }
    }

    pub fn incident(&self, i: usize, col: usize) -> bool {
        self.facet_sets[col].contains(&i)
    }

    /// Incidence zeros of this column are structurally guaranteed.
    pub fn trusted_column(&self, col: usize) -> bool {
        self.trusted[col]
    }

    /// Vertex set of the column's facet, ascending.
    pub fn facet_vertices(&self, col: usize) -> Vec<usize> {
        self.facet_sets[col].iter().cloned().collect()
    }
}

/// Column plan: one column per facet in order (with the chosen basis), then
/// explicitly requested redundant columns, then (optionally) every
/// alternative basis of each non-simplicial flag facet.
pub fn column_plan(
    sphere: &AbstractSphere,
    poset: &FacePoset,
    flag: &Flag,
    bases: &[FacetBasis],
    redundant_requests: &[(usize, Vec<usize>)],
    auto_redundant: bool,
) -> Result<Vec<ColumnKey>, Error> {
    assert_eq!(bases.len(), sphere.num_facets());
    let mut cols: Vec<ColumnKey> = bases
        .iter()
        .enumerate()
        .map(|(j, b)| ColumnKey {
            facet: j,
            basis: b.ordered_vertices.clone(),
            redundant: false,
        })
        .collect();
    for (facet, basis) in redundant_requests {
        cols.push(ColumnKey {
            facet: *facet,
            basis: basis.clone(),
            redundant: true,
        });
    }
    if auto_redundant {
        use itertools::Itertools;
        let d = sphere.dimension();
        for &j in &flag.facet_indices {
            let facet = sphere.facet(j);
            if facet.len() == d {
                continue;
            }
            let primary: BTreeSet<usize> = bases[j].ordered_vertices.iter().cloned().collect();
            let verts: Vec<usize> = facet.set().iter().cloned().collect();
            for combo in verts.into_iter().combinations(d) {
                let set: BTreeSet<usize> = combo.iter().cloned().collect();
                if set == primary {
                    continue;
                }
                if cols
                    .iter()
                    .any(|ck| ck.redundant && ck.facet == j && ck.basis == combo)
                {
                    continue;
                }
                let mut scratch = Vec::new();
                if crate::combinatorics::validate_basis(sphere, poset, j, &combo, &mut scratch)
                    .is_ok()
                    && scratch.is_empty()
                {
                    cols.push(ColumnKey {
                        facet: j,
                        basis: combo,
                        redundant: true,
                    });
                }
            }
        }
    }
    Ok(cols)
}

/// Every entry (i, col) as the symbolic determinant of the basis rows of the
/// column's facet followed by row i. Entries of rows lying in a simplicial
/// or flag facet vanish structurally; a non-simplicial facet outside the
/// flag gets a loud warning because its incidence zeros are NOT structural.
pub fn reconstruct(
    reduced: &ReducedSlackMatrix,
    sphere: &AbstractSphere,
    columns: &[ColumnKey],
) -> ParametrizedSlackMatrix {
    let n = reduced.num_rows();
    let d = sphere.dimension();
    let flag_facets: BTreeSet<usize> = reduced.cols.iter().map(|ck| ck.facet).collect();

    let mut warnings = Vec::new();
    let mut trusted = Vec::with_capacity(columns.len());
    for ck in columns {
        let simplicial = sphere.facet(ck.facet).len() == d;
        let in_flag = flag_facets.contains(&ck.facet);
        trusted.push(simplicial || in_flag);
        if !simplicial && !in_flag {
            warnings.push(format!(
                "facet {} is non-simplicial and outside the flag; its incidence zeros are not structural and the parametrization may miss realizations",
                ck.facet + 1
            ));
        }
    }

    let basis_rows: Vec<Vec<Vec<Polynomial>>> = columns
        .iter()
        .map(|ck| ck.basis.iter().map(|&v| reduced.row_polys(v)).collect())
        .collect();

    let raw: Vec<Vec<Polynomial>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let row_i = reduced.row_polys(i);
            columns
                .iter()
                .enumerate()
                .map(|(c, ck)| {
                    if ck.basis.contains(&i) {
                        return Polynomial::zero();
                    }
                    let mut mat = basis_rows[c].clone();
                    mat.push(row_i.clone());
                    det_symbolic(&mat)
                })
                .collect()
        })
        .collect();

    ParametrizedSlackMatrix {
        n,
        cols: columns.to_vec(),
        raw,
        signs: vec![ColumnSign::Unknown; columns.len()],
        facet_sets: columns
            .iter()
            .map(|ck| sphere.facet(ck.facet).set().clone())
            .collect(),
        trusted,
        warnings,
        homogeneous: reduced.is_homogeneous(),
    }
}

/// Applies user-supplied per-facet signs to all columns of those facets.
pub fn apply_orientation(psm: &mut ParametrizedSlackMatrix, orientation: &BTreeMap<usize, i8>) {
    for (c, ck) in psm.cols.clone().iter().enumerate() {
        if let Some(&s) = orientation.get(&ck.facet) {
            psm.signs[c] = if s >= 0 { ColumnSign::Plus } else { ColumnSign::Minus };
        }
    }
}

/// Orients every column combinatorially: positives start as the variables;
/// a column whose entry is, up to a monomial factor, a signed product of
/// known positives gets the sign making it positive, and then contributes
/// all its entries (monomial content removed) to the positive set.
pub fn infer_orientation(psm: &mut ParametrizedSlackMatrix) -> Result<(), Error> {
    let mut positives: Vec<Polynomial> = Vec::new();
    let mut positive_set: HashSet<Polynomial> = HashSet::new();
    let mut fail_cache: HashSet<Polynomial> = HashSet::new();

    let push_positive =
        |p: Polynomial, positives: &mut Vec<Polynomial>, set: &mut HashSet<Polynomial>| {
            if !p.is_constant() && !set.contains(&p) {
                set.insert(p.clone());
                positives.push(p);
            }
        };

    // Degree-1 generators: every variable occurring in the matrix.
    let mut vars: Vec<Var> = Vec::new();
    for row in &psm.raw {
        for p in row {
            vars.extend(p.variables());
        }
    }
    vars.sort_unstable();
    vars.dedup();
    for v in vars {
        push_positive(
            Polynomial::var(v),
            &mut positives,
            &mut positive_set,
        );
    }

    let absorb = |psm: &ParametrizedSlackMatrix,
                  col: usize,
                  positives: &mut Vec<Polynomial>,
                  set: &mut HashSet<Polynomial>| {
        let sign = psm.signs[col];
        for i in 0..psm.n {
            if psm.incident(i, col) {
                continue; // incidence zeros (or untrusted pseudo-zeros)
            }
            let e = psm.raw_entry(i, col);
            if e.is_zero() {
                continue;
            }
            let oriented = if sign == ColumnSign::Minus { e.neg() } else { e.clone() };
            let (_, cof) = oriented.factor_monomial().expect("nonzero");
            if !cof.is_constant() && !set.contains(&cof) {
                set.insert(cof.clone());
                positives.push(cof);
            }
        }
    };

    for c in 0..psm.num_cols() {
        if psm.signs[c] != ColumnSign::Unknown {
            absorb(psm, c, &mut positives, &mut positive_set);
        }
    }

    loop {
        let mut progress = false;
        for c in 0..psm.num_cols() {
            if psm.signs[c] != ColumnSign::Unknown {
                continue;
            }
            let mut found: Option<ColumnSign> = None;
            for i in 0..psm.n {
                if psm.incident(i, c) {
                    continue;
                }
                let e = psm.raw_entry(i, c);
                if e.is_zero() {
                    continue;
                }
                let (_, cof) = e.factor_monomial().expect("nonzero");
                if let Some(sign) = positive_product_sign(&cof, &positives, &mut fail_cache) {
                    found = Some(if sign > 0 { ColumnSign::Plus } else { ColumnSign::Minus });
                    break;
                }
            }
            if let Some(sign) = found {
                psm.signs[c] = sign;
                absorb(psm, c, &mut positives, &mut positive_set);
                progress = true;
            }
        }
        if psm.all_signed() {
            return Ok(());
        }
        if !progress {
            let unsigned: Vec<usize> = psm
                .signs
                .iter()
                .enumerate()
                .filter(|(_, &s)| s == ColumnSign::Unknown)
                .map(|(c, _)| c + 1)
                .collect();
            return Err(Error::OrientationStalled(unsigned));
        }
    }
}

/// Sign s with `p = s * (positive rational) * product of known positives`,
/// or None. Content-free input expected; recursive exact division with
/// backtracking and a failure cache.
fn positive_product_sign(
    p: &Polynomial,
    positives: &[Polynomial],
    fail_cache: &mut HashSet<Polynomial>,
) -> Option<i8> {
    use num_traits::Signed;
    if p.is_zero() {
        return None;
    }
    if let Some((m, c)) = p.as_single_term() {
        if m.is_one() {
            return Some(if c.is_positive() { 1 } else { -1 });
        }
        // pure monomials are positive up to the coefficient sign
        return Some(if c.is_positive() { 1 } else { -1 });
    }
    if fail_cache.contains(p) {
        return None;
    }
    for q in positives {
        if q.num_terms() > p.num_terms() {
            continue;
        }
        if let Some(quot) = p.divide_exact(q) {
            let (_, cof) = quot.factor_monomial().expect("nonzero quotient");
            if let Some(s) = positive_product_sign(&cof, positives, fail_cache) {
                return Some(s);
            }
        }
    }
    fail_cache.insert(p.clone());
    None
}

/// Per-entry scale relation: the homogeneous entry equals
/// `mu * (dehomogenized entry with the ledger substitution applied)`, where
/// `mu` multiplies the row scales of the basis rows and the vertex row with
/// every column scale.
pub fn scale_multiplier(ledger: &ScalingLedger, row: usize, key: &ColumnKey) -> LaurentMonomial {
    let mut mu = LaurentMonomial::one();
    for &r in &key.basis {
        mu = mu.mul(&ledger.row_scale[r]);
    }
    mu = mu.mul(&ledger.row_scale[row]);
    for sigma in &ledger.col_scale {
        mu = mu.mul(sigma);
    }
    mu
}

/// The spec'd rehomogenization primitive: homogeneous entry plus its
/// multiplier, with the ledger invariant checked on this entry.
pub fn rehomogenize_entry(
    ledger: &ScalingLedger,
    row: usize,
    col: usize,
    hom: &ParametrizedSlackMatrix,
    dehom: &ParametrizedSlackMatrix,
) -> Result<(Polynomial, LaurentMonomial), Error> {
    let key = &hom.cols[col];
    let mu = scale_multiplier(ledger, row, key);
    let hom_entry = hom.raw_entry(row, col);
    let dehom_entry = dehom.raw_entry(row, col);
    check_entry_roundtrip(ledger, hom_entry, dehom_entry, &mu).map_err(|e| {
        Error::Internal(format!(
            "ledger inconsistent at entry ({},{}): {e}",
            row + 1,
            col + 1
        ))
    })?;
    Ok((hom_entry.clone(), mu))
}

fn check_entry_roundtrip(
    ledger: &ScalingLedger,
    hom_entry: &Polynomial,
    dehom_entry: &Polynomial,
    mu: &LaurentMonomial,
) -> Result<(), String> {
    if dehom_entry.is_zero() != hom_entry.is_zero() {
        return Err("zero patterns disagree".into());
    }
    if dehom_entry.is_zero() {
        return Ok(());
    }
    let (img, shift) = dehom_entry.substitute_laurent(|v| ledger.substitution_image(v));
    let total = shift.mul(mu);
    let mono = total
        .to_monomial()
        .ok_or_else(|| "scale multiplier has a negative residual exponent".to_string())?;
    if &img.mul_monomial(&mono) != hom_entry {
        return Err("substituted entry does not match the homogeneous entry".into());
    }
    Ok(())
}

/// Full ledger invariant: every entry satisfies the round-trip relation.
pub fn check_ledger_roundtrip(
    ledger: &ScalingLedger,
    hom: &ParametrizedSlackMatrix,
    dehom: &ParametrizedSlackMatrix,
) -> Result<(), Error> {
    if hom.num_cols() != dehom.num_cols() || hom.num_rows() != dehom.num_rows() {
        return Err(Error::Dimension(
            "homogeneous and dehomogenized reconstructions differ in shape".into(),
        ));
    }
    for i in 0..hom.num_rows() {
        for c in 0..hom.num_cols() {
            let mu = scale_multiplier(ledger, i, &hom.cols[c]);
            check_entry_roundtrip(ledger, hom.raw_entry(i, c), dehom.raw_entry(i, c), &mu)
                .map_err(|e| {
                    Error::Internal(format!("ledger round-trip failed at ({},{}): {e}", i + 1, c + 1))
                })?;
        }
    }
    Ok(())
}

fn perm_sign(from: &[usize], to: &[usize]) -> Option<i8> {
    if from.len() != to.len() {
        return None;
    }
    let mut perm = Vec::with_capacity(from.len());
    for x in from {
        perm.push(to.iter().position(|y| y == x)?);
    }
    let mut sign = 1i8;
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    Some(sign)
}

/// Adjacent-facet consistency: when two oriented facet bases share d-1
/// vertices and their odd vertices lie off the other facet, the two columns
/// must carry opposite orientation after sorting each basis to (shared...,
/// extra). Returns the violating column pairs.
pub fn orientation_consistency_violations(psm: &ParametrizedSlackMatrix) -> Vec<(usize, usize)> {
    let mut bad = Vec::new();
    let cols = &psm.cols;
    for a in 0..cols.len() {
        for b in a + 1..cols.len() {
            if psm.signs[a] == ColumnSign::Unknown || psm.signs[b] == ColumnSign::Unknown {
                continue;
            }
            let sa: BTreeSet<usize> = cols[a].basis.iter().cloned().collect();
            let sb: BTreeSet<usize> = cols[b].basis.iter().cloned().collect();
            let shared: Vec<usize> = sa.intersection(&sb).cloned().collect();
            if shared.len() + 1 != sa.len() {
                continue;
            }
            let ja = *sa.difference(&sb).next().unwrap();
            let jb = *sb.difference(&sa).next().unwrap();
            if psm.facet_sets[b].contains(&ja) || psm.facet_sets[a].contains(&jb) {
                continue;
            }
            let mut ta = shared.clone();
            ta.push(ja);
            let mut tb = shared.clone();
            tb.push(jb);
            let ea = perm_sign(&cols[a].basis, &ta).unwrap();
            let eb = perm_sign(&cols[b].basis, &tb).unwrap();
            let chi_a = psm.signs[a].factor();
            let chi_b = psm.signs[b].factor();
            if chi_a * ea != -chi_b * eb {
                bad.push((a, b));
            }
        }
    }
    bad
}
