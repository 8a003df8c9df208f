//! Certificate search: build the pool of positive products, linearize,
//! solve the exact LP, verify the combination symbolically, rehomogenize,
//! and translate to a final polynomial in Plucker coordinates.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::Flag;
use crate::error::Error;
use crate::lp::{solve_certificate_lp, LpOutcome, LpStatus, SparseRationalMatrix};
use crate::polynomial::{LaurentMonomial, Monomial, Polynomial, Rational, Var};
use crate::slack::{scale_multiplier, ParametrizedSlackMatrix, ReducedSlackMatrix, ScalingLedger};
use crate::Deadline;

/// Constraint-selection heuristics. Avoided vertices drop rows and incident
/// columns; fixed vertices keep only entries whose vertex-facet union covers
/// them; monomial simplification strips positive monomial content from each
/// entry; redundant bases add a column per alternative basis of the
/// non-simplicial flag facets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeuristicConfig {
    #[serde(default)]
    pub avoid_vertices: BTreeSet<usize>,
    #[serde(default)]
    pub fix_vertices: BTreeSet<usize>,
    #[serde(default)]
    pub monomial_simplify: bool,
    #[serde(default)]
    pub redundant_bases: bool,
}

impl HeuristicConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if !self.avoid_vertices.is_disjoint(&self.fix_vertices) {
            return Err(Error::Validation(
                "avoid and fix vertex sets must be disjoint".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PoolKind {
    /// Degree-1 constraint: a reduced-matrix variable.
    Variable(Var),
    /// A distinct slack-matrix entry value, possibly with its monomial
    /// content stripped.
    Entry { row: usize, col: usize },
}

#[derive(Clone, Debug)]
pub struct PoolMember {
    pub kind: PoolKind,
    pub poly: Polynomial,
}

/// A constraint of the linear program: a product of at most `k` pool
/// members, stored by pool indices (sorted multiset).
#[derive(Clone, Debug)]
pub struct ConstraintItem {
    pub factors: Vec<usize>,
    pub poly: Polynomial,
}

#[derive(Clone, Debug)]
pub struct ConstraintSet {
    pub pool: Vec<PoolMember>,
    pub items: Vec<ConstraintItem>,
    pub k: usize,
    pub l: usize,
    pub heuristics: HeuristicConfig,
    pub num_entry_members: usize,
    pub num_variable_members: usize,
}

/// Oriented dehomogenized entry of the pool, after optional simplification.
fn pool_entry_poly(
    psm: &ParametrizedSlackMatrix,
    row: usize,
    col: usize,
    simplify: bool,
) -> Polynomial {
    let e = psm.entry(row, col);
    if simplify {
        let (_, cof) = e.factor_monomial().expect("pool entries are nonzero");
        cof
    } else {
        e
    }
}

/// The pool G_{k,l}: distinct nonzero entries of the oriented matrix
/// filtered by the heuristics and the degree bound, plus every variable as a
/// degree-1 member; then all products of at most k members.
pub fn generate_constraints(
    psm: &ParametrizedSlackMatrix,
    k: usize,
    l: usize,
    heuristics: &HeuristicConfig,
    deadline: Deadline,
) -> Result<ConstraintSet, Error> {
    heuristics.validate()?;
    if k < 1 || l < 1 {
        return Err(Error::Validation("k and l must be at least 1".into()));
    }
    if !psm.all_signed() {
        return Err(Error::Validation(
            "matrix must be oriented before constraint generation".into(),
        ));
    }

    let mut pool: Vec<PoolMember> = Vec::new();
    let mut seen: HashSet<Polynomial> = HashSet::new();
    let avoid = &heuristics.avoid_vertices;
    let fix = &heuristics.fix_vertices;

    for col in 0..psm.num_cols() {
        let facet_hit_avoid = avoid.iter().any(|v| psm.incident(*v, col));
        for row in 0..psm.num_rows() {
            if psm.incident(row, col) {
                continue; // incidence entries vanish on every realization
            }
            if psm.raw_entry(row, col).is_zero() {
                continue;
            }
            if avoid.contains(&row) || facet_hit_avoid {
                continue;
            }
            if !fix.is_empty() {
                let covered = fix.iter().all(|v| *v == row || psm.incident(*v, col));
                if !covered {
                    continue;
                }
            }
            let poly = pool_entry_poly(psm, row, col, heuristics.monomial_simplify);
            if poly.degree() as usize > l {
                continue;
            }
            if seen.insert(poly.clone()) {
                pool.push(PoolMember {
                    kind: PoolKind::Entry { row, col },
                    poly,
                });
            }
        }
    }
    let num_entry_members = pool.len();

    // Degree-1 variable constraints, over the whole (unfiltered) matrix.
    let mut vars: Vec<Var> = Vec::new();
    for row in 0..psm.num_rows() {
        for col in 0..psm.num_cols() {
            vars.extend(psm.raw_entry(row, col).variables());
        }
    }
    vars.sort_unstable();
    vars.dedup();
    let num_variable_members = vars.len();
    for v in vars {
        pool.push(PoolMember {
            kind: PoolKind::Variable(v),
            poly: Polynomial::var(v),
        });
    }

    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    deadline.check()?;

    // All multisets of <= k pool members, expanded.
    let mut multisets: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn emit(
        pool_len: usize,
        k: usize,
        start: usize,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !current.is_empty() {
            out.push(current.clone());
        }
        if current.len() == k {
            return;
        }
        for i in start..pool_len {
            current.push(i);
            emit(pool_len, k, i, current, out);
            current.pop();
        }
    }
    emit(pool.len(), k, 0, &mut current, &mut multisets);

    let items: Vec<ConstraintItem> = multisets
        .into_par_iter()
        .map(|factors| {
            let mut poly = pool[factors[0]].poly.clone();
            for &f in &factors[1..] {
                poly = poly.mul(&pool[f].poly);
            }
            ConstraintItem { factors, poly }
        })
        .collect();
    deadline.check()?;

    Ok(ConstraintSet {
        pool,
        items,
        k,
        l,
        heuristics: heuristics.clone(),
        num_entry_members,
        num_variable_members,
    })
}

/// One row per distinct monomial (descending canonical order), one column
/// per constraint; entries are the exact coefficients.
pub fn linearize(constraints: &ConstraintSet) -> SparseRationalMatrix {
    let mut monomials: BTreeSet<Monomial> = BTreeSet::new();
    for item in &constraints.items {
        for (m, _) in item.poly.terms() {
            monomials.insert(m.clone());
        }
    }
    let row_of: HashMap<&Monomial, usize> = monomials
        .iter()
        .rev()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let cols: Vec<Vec<(usize, Rational)>> = constraints
        .items
        .iter()
        .map(|item| {
            let mut col: Vec<(usize, Rational)> = item
                .poly
                .terms()
                .map(|(m, c)| (row_of[m], c.clone()))
                .collect();
            col.sort_by_key(|&(r, _)| r);
            col
        })
        .collect();
    SparseRationalMatrix::from_columns(monomials.len(), cols)
        .expect("linearization is structurally valid")
}

/// One factor of a certificate term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermFactor {
    Variable(Var),
    Entry { row: usize, col: usize },
}

#[derive(Clone, Debug)]
pub struct CertificateTerm {
    pub weight: Rational,
    pub factors: Vec<TermFactor>,
}

impl CertificateTerm {
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.factors.iter().filter_map(|f| match f {
            TermFactor::Entry { row, col } => Some((*row, *col)),
            TermFactor::Variable(_) => None,
        })
    }

    pub fn variables(&self) -> impl Iterator<Item = Var> + '_ {
        self.factors.iter().filter_map(|f| match f {
            TermFactor::Variable(v) => Some(*v),
            TermFactor::Entry { .. } => None,
        })
    }

    /// The term's constraint polynomial, recomputed from the matrix.
    pub fn polynomial(&self, psm: &ParametrizedSlackMatrix, simplify: bool) -> Polynomial {
        let mut poly = Polynomial::one();
        for f in &self.factors {
            let factor = match f {
                TermFactor::Variable(v) => Polynomial::var(*v),
                TermFactor::Entry { row, col } => pool_entry_poly(psm, *row, *col, simplify),
            };
            poly = poly.mul(&factor);
        }
        poly
    }
}

#[derive(Clone, Debug)]
pub struct HomogeneousTerm {
    /// Monomial multiplier in the original (homogeneous) variables.
    pub multiplier: Monomial,
    pub entries: Vec<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct HomogeneousCertificate {
    pub terms: Vec<HomogeneousTerm>,
}

/// A final polynomial: each term is a positive weight times a product of
/// Plucker coordinates indexed by oriented facet extensions.
///
/// For quasi-simplicial spheres the polynomial lies in the Grassmannian
/// ideal only modulo the vanishing coordinates of the non-simplicial
/// facets, so the numeric check must sample matrices whose rows for each
/// such facet are coplanar; `coplanar_groups` carries those vertex sets.
#[derive(Clone, Debug, PartialEq)]
pub struct FinalPolynomial {
    pub terms: Vec<(Rational, Vec<Vec<usize>>)>,
    pub num_points: usize,
    pub rank: usize,
    pub coplanar_groups: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub k: usize,
    pub l: usize,
    pub heuristics: HeuristicConfig,
    pub terms: Vec<CertificateTerm>,
    pub verified: bool,
    pub homogeneous: Option<HomogeneousCertificate>,
    pub final_polynomial: Option<FinalPolynomial>,
    pub warnings: Vec<String>,
}

/// Search statistics alongside the certificate (when found).
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub pool_entries: usize,
    pub pool_variables: usize,
    pub num_constraints: usize,
    pub monomial_rows: usize,
    pub lp: LpOutcome,
    pub certificate: Option<Certificate>,
}

/// generate -> linearize -> solve -> verify. `NoCertificate` means no
/// certificate exists within this pool; it never claims realizability.
pub fn search_certificate(
    psm: &ParametrizedSlackMatrix,
    k: usize,
    l: usize,
    heuristics: &HeuristicConfig,
    deadline: Deadline,
) -> Result<SearchReport, Error> {
    let constraints = generate_constraints(psm, k, l, heuristics, deadline)?;
    let matrix = linearize(&constraints);
    deadline.check()?;
    let outcome = solve_certificate_lp(&matrix, deadline)?;
    let mut report = SearchReport {
        pool_entries: constraints.num_entry_members,
        pool_variables: constraints.num_variable_members,
        num_constraints: constraints.items.len(),
        monomial_rows: matrix.num_rows(),
        lp: outcome,
        certificate: None,
    };
    if report.lp.status == LpStatus::NoCertificate {
        return Ok(report);
    }

    let terms: Vec<CertificateTerm> = report
        .lp
        .weights
        .iter()
        .map(|(idx, w)| {
            let item = &constraints.items[*idx];
            let mut factors: Vec<TermFactor> = item
                .factors
                .iter()
                .map(|&f| match &constraints.pool[f].kind {
                    PoolKind::Variable(v) => TermFactor::Variable(*v),
                    PoolKind::Entry { row, col } => TermFactor::Entry {
                        row: *row,
                        col: *col,
                    },
                })
                .collect();
            factors.sort();
            CertificateTerm {
                weight: w.clone(),
                factors,
            }
        })
        .collect();

    let mut cert = Certificate {
        k,
        l,
        heuristics: heuristics.clone(),
        terms,
        verified: false,
        homogeneous: None,
        final_polynomial: None,
        warnings: Vec::new(),
    };
    verify_certificate(&mut cert, psm)?;
    report.certificate = Some(cert);
    Ok(report)
}

/// Expands the weighted sum symbolically and demands the zero polynomial.
/// The exact pipeline must never fail here; a nonzero residual is fatal.
pub fn verify_certificate(
    cert: &mut Certificate,
    psm: &ParametrizedSlackMatrix,
) -> Result<(), Error> {
    if cert.terms.is_empty() {
        return Err(Error::CertificateInvalid("certificate has no terms".into()));
    }
    if cert.terms.iter().any(|t| !t.weight.is_positive()) {
        return Err(Error::CertificateInvalid(
            "certificate weights must be strictly positive".into(),
        ));
    }
    let simplify = cert.heuristics.monomial_simplify;
    let mut residual = Polynomial::zero();
    for t in &cert.terms {
        residual = residual.add(&t.polynomial(psm, simplify).scale(&t.weight));
    }
    if !residual.is_zero() {
        return Err(Error::CertificateInvalid(residual.to_string()));
    }
    cert.verified = true;
    Ok(())
}

/// Scale factor nu_q of one term: the entry multipliers, the images of the
/// stripped monomial contents, and the images of the degree-1 variable
/// factors.
fn term_scale(
    term: &CertificateTerm,
    ledger: &ScalingLedger,
    psm_dehom: &ParametrizedSlackMatrix,
    psm_hom: &ParametrizedSlackMatrix,
    simplify: bool,
) -> LaurentMonomial {
    let mut nu = LaurentMonomial::one();
    for f in &term.factors {
        match f {
            TermFactor::Variable(v) => {
                // substitution image is x_v / (rho_v sigma_v); the
                // homogeneous term keeps the bare x_v, so nu absorbs
                // rho_v sigma_v.
                nu = nu.mul(&LaurentMonomial::var(*v).div(&ledger.substitution_image(*v)));
            }
            TermFactor::Entry { row, col } => {
                nu = nu.mul(&scale_multiplier(ledger, *row, &psm_hom.columns()[*col]));
                if simplify {
                    let e = psm_dehom.entry(*row, *col);
                    let (stripped, _) = e.factor_monomial().expect("nonzero entry");
                    // image of the stripped dehomogenized monomial
                    let (img_poly, shift) = Polynomial::from_term(Rational::one(), stripped)
                        .substitute_laurent(|v| ledger.substitution_image(v));
                    debug_assert!(img_poly.is_constant());
                    let (m, _) = img_poly.as_single_term().expect("monomial image");
                    nu = nu
                        .mul(&shift)
                        .mul(&LaurentMonomial::from_monomial(m));
                }
            }
        }
    }
    nu
}

/// Homogeneous multidegree of a term: the multiplier's row/column degrees
/// plus, per entry, its basis rows, vertex row, and one in every column.
fn term_multidegree(
    term: &HomogeneousTerm,
    psm_hom: &ParametrizedSlackMatrix,
    num_rows: usize,
    num_red_cols: usize,
) -> (Vec<i64>, Vec<i64>) {
    let mut rows = vec![0i64; num_rows];
    let mut cols = vec![0i64; num_red_cols];
    for &(v, e) in term.multiplier.exponents() {
        rows[v.row as usize] += e as i64;
        cols[v.col as usize] += e as i64;
    }
    for &(r, c) in &term.entries {
        let key = &psm_hom.columns()[c];
        for &b in &key.basis {
            rows[b] += 1;
        }
        rows[r] += 1;
        for col in cols.iter_mut() {
            *col += 1;
        }
    }
    (rows, cols)
}

/// Lifts a verified certificate to the homogeneous variables: each term is
/// multiplied by the least monomial beta_q bringing all scale factors to a
/// common value, any factor common to every term is cancelled, and the
/// homogeneous identity is checked symbolically.
pub fn rehomogenize(
    cert: &mut Certificate,
    ledger: &ScalingLedger,
    psm_hom: &ParametrizedSlackMatrix,
    psm_dehom: &ParametrizedSlackMatrix,
) -> Result<(), Error> {
    if !cert.verified {
        return Err(Error::Internal(
            "rehomogenize requires a verified certificate".into(),
        ));
    }
    let simplify = cert.heuristics.monomial_simplify;
    let scales: Vec<LaurentMonomial> = cert
        .terms
        .iter()
        .map(|t| term_scale(t, ledger, psm_dehom, psm_hom, simplify))
        .collect();
    let mut join = scales[0].clone();
    for s in &scales[1..] {
        join = join.join(s);
    }

    let mut hom_terms: Vec<HomogeneousTerm> = Vec::with_capacity(cert.terms.len());
    for (t, s) in cert.terms.iter().zip(&scales) {
        let beta = join.div(s).to_monomial().ok_or_else(|| {
            Error::Internal("join of scale factors is not an upper bound".into())
        })?;
        // degree-1 variable factors stay as themselves in the homogeneous form
        let var_mono = Monomial::from_pairs(t.variables().map(|v| (v, 1)).collect());
        hom_terms.push(HomogeneousTerm {
            multiplier: beta.mul(&var_mono),
            entries: t.entries().collect(),
        });
    }

    // Cancel any factor common to all terms: first monomial content, then
    // entries present in every term.
    let mut common_mono = hom_terms[0].multiplier.clone();
    for t in &hom_terms[1..] {
        common_mono = common_mono.gcd(&t.multiplier);
    }
    if !common_mono.is_one() {
        for t in &mut hom_terms {
            t.multiplier = t.multiplier.div(&common_mono).expect("gcd divides");
        }
    }
    let mut common_entries: Vec<(usize, usize)> = sorted_entries(&hom_terms[0].entries);
    for t in &hom_terms[1..] {
        common_entries = multiset_intersection(&common_entries, &sorted_entries(&t.entries));
        if common_entries.is_empty() {
            break;
        }
    }
    if !common_entries.is_empty() {
        for t in &mut hom_terms {
            let mut es = sorted_entries(&t.entries);
            es = multiset_difference(&es, &common_entries);
            t.entries = es;
        }
    }

    // The homogeneous identity must be exactly zero.
    let mut residual = Polynomial::zero();
    for (ht, t) in hom_terms.iter().zip(&cert.terms) {
        let mut poly = Polynomial::from_term(Rational::one(), ht.multiplier.clone());
        for &(r, c) in &ht.entries {
            poly = poly.mul(&psm_hom.entry(r, c));
        }
        residual = residual.add(&poly.scale(&t.weight));
    }
    if !residual.is_zero() {
        return Err(Error::Internal(format!(
            "homogeneous residual is nonzero: {residual}"
        )));
    }

    // Every term shares one multidegree; solver output cannot decompose
    // (basic solutions are irreducible), so a mismatch is cause for a warning
    // only on hand-fed certificates.
    let first = term_multidegree(&hom_terms[0], psm_hom, psm_hom.num_rows(), ledger.col_scale.len());
    for t in &hom_terms[1..] {
        let md = term_multidegree(t, psm_hom, psm_hom.num_rows(), ledger.col_scale.len());
        if md != first {
            cert.warnings
                .push("rehomogenized terms have unequal multidegrees".into());
            break;
        }
    }

    cert.homogeneous = Some(HomogeneousCertificate { terms: hom_terms });
    Ok(())
}

fn sorted_entries(es: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = es.to_vec();
    out.sort_unstable();
    out
}

fn multiset_intersection(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn multiset_difference(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() {
        if j < b.len() && a[i] == b[j] {
            i += 1;
            j += 1;
        } else {
            out.push(a[i]);
            i += 1;
        }
    }
    out
}

/// The common polynomial factor of a homogeneous flag column: the oriented
/// entry divided by its reduced-matrix variable. Needed as a +1-coefficient
/// monomial for the entry-substitution step of the translation.
fn flag_column_factor(
    reduced_hom: &ReducedSlackMatrix,
    psm_hom: &ParametrizedSlackMatrix,
    flag: &Flag,
    pos: usize,
) -> Result<Polynomial, Error> {
    let facet_col = flag.facet_indices[pos];
    for row in 0..reduced_hom.num_rows() {
        if reduced_hom.entry(row, pos) != crate::slack::ReducedEntry::Variable {
            continue;
        }
        let e = psm_hom.entry(row, facet_col);
        if e.is_zero() {
            continue;
        }
        let x = Polynomial::var(Var::new(row, pos));
        return e.divide_exact(&x).ok_or_else(|| {
            Error::Internal(format!(
                "flag column {} entry is not a multiple of its variable",
                pos + 1
            ))
        });
    }
    Err(Error::Internal(format!(
        "flag column {} has no variable entry",
        pos + 1
    )))
}

/// Translates the homogeneous certificate into a classical final
/// polynomial. Residual multiplier variables are replaced by homogeneous
/// slack entries (valid because the per-column variable counts agree across
/// terms once entry counts are equalized by monomial substitution), each
/// entry becomes the Plucker coordinate of its facet extension, and factors
/// common to every term are cancelled.
pub fn to_final_polynomial(
    cert: &Certificate,
    reduced_hom: &ReducedSlackMatrix,
    psm_hom: &ParametrizedSlackMatrix,
    flag: &Flag,
    num_vertices: usize,
) -> Result<FinalPolynomial, Error> {
    let hom = cert.homogeneous.as_ref().ok_or_else(|| {
        Error::TranslationUnavailable("certificate has no homogeneous form".into())
    })?;
    let d1 = reduced_hom.num_cols();

    struct Work {
        residual: Monomial,
        entries: Vec<(usize, usize)>,
    }
    let mut work: Vec<Work> = hom
        .terms
        .iter()
        .map(|t| Work {
            residual: t.multiplier.clone(),
            entries: sorted_entries(&t.entries),
        })
        .collect();

    // All residual variables must live in flag columns (they do by
    // construction: the reduced matrix has only flag columns).
    for w in &work {
        for v in w.residual.variables() {
            if v.col as usize >= d1 {
                return Err(Error::TranslationUnavailable(format!(
                    "variable {v} lies outside the flag columns"
                )));
            }
        }
    }

    // Equalize entry counts by substituting entry-shaped monomials
    // x_{i,p} * column_factor(p) when the column factor is a +monomial.
    let target = work.iter().map(|w| w.entries.len()).max().unwrap_or(0);
    let mut col_factor_mono: Vec<Option<Monomial>> = Vec::with_capacity(d1);
    for pos in 0..d1 {
        let f = flag_column_factor(reduced_hom, psm_hom, flag, pos)?;
        col_factor_mono.push(match f.as_single_term() {
            Some((m, c)) if c.is_one() => Some(m.clone()),
            _ => None,
        });
    }
    for w in work.iter_mut() {
        'grow: while w.entries.len() < target {
            for pos in 0..d1 {
                let Some(cf) = &col_factor_mono[pos] else {
                    continue;
                };
                for row in 0..psm_hom.num_rows() {
                    let v = Var::new(row, pos);
                    if w.residual.exponent_of(v) == 0 {
                        continue;
                    }
                    let candidate = Monomial::var(v).mul(cf);
                    if let Some(rest) = w.residual.div(&candidate) {
                        w.residual = rest;
                        w.entries.push((row, flag.facet_indices[pos]));
                        w.entries.sort_unstable();
                        continue 'grow;
                    }
                }
            }
            return Err(Error::TranslationUnavailable(
                "cannot equalize entry counts by monomial substitution".into(),
            ));
        }
    }

    // Residual per-column variable counts must now agree across terms.
    let counts = |w: &Work| -> Vec<u32> {
        let mut c = vec![0u32; d1];
        for &(v, e) in w.residual.exponents() {
            c[v.col as usize] += e;
        }
        c
    };
    let first_counts = counts(&work[0]);
    for w in &work[1..] {
        if counts(w) != first_counts {
            return Err(Error::TranslationUnavailable(
                "per-column multiplier counts differ across terms".into(),
            ));
        }
    }

    // Replace every residual variable by its homogeneous entry; each term
    // picks up the same product of column factors, preserving the identity.
    for w in work.iter_mut() {
        let residual = std::mem::take(&mut w.residual);
        for &(v, e) in residual.exponents() {
            for _ in 0..e {
                w.entries.push((v.row as usize, flag.facet_indices[v.col as usize]));
            }
        }
        w.entries.sort_unstable();
    }

    // Cancel entries common to all terms.
    let mut common = work[0].entries.clone();
    for w in &work[1..] {
        common = multiset_intersection(&common, &w.entries);
        if common.is_empty() {
            break;
        }
    }
    if !common.is_empty() {
        for w in work.iter_mut() {
            w.entries = multiset_difference(&w.entries, &common);
        }
    }

    // Emit oriented facet extensions: basis order followed by the vertex.
    let terms: Vec<(Rational, Vec<Vec<usize>>)> = work
        .iter()
        .zip(&cert.terms)
        .map(|(w, t)| {
            let mut ps: Vec<Vec<usize>> = w
                .entries
                .iter()
                .map(|&(r, c)| {
                    let key = &psm_hom.columns()[c];
                    let mut seq = key.basis.clone();
                    seq.push(r);
                    seq
                })
                .collect();
            ps.sort();
            (t.weight.clone(), ps)
        })
        .collect();

    // Non-simplicial facets impose rank conditions on their rows; the
    // numeric check must respect them.
    let d = d1 - 1;
    let mut coplanar_groups: Vec<Vec<usize>> = Vec::new();
    for c in 0..psm_hom.num_cols() {
        let key = &psm_hom.columns()[c];
        if key.redundant {
            continue;
        }
        let set: Vec<usize> = psm_hom.facet_vertices(c);
        if set.len() > d && !coplanar_groups.contains(&set) {
            coplanar_groups.push(set);
        }
    }

    Ok(FinalPolynomial {
        terms,
        num_points: num_vertices,
        rank: d1,
        coplanar_groups,
    })
}

/// Exact determinant of a square rational matrix by Gaussian elimination;
/// the numeric route, independent of the symbolic expansion.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(r) => r,
            None => return Rational::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let sub = &f * &a[col][c];
                a[r][c] -= sub;
            }
        }
    }
    det
}

/// Monte-Carlo membership check in the Grassmannian ideal: the final
/// polynomial must vanish when every Plucker coordinate is evaluated as the
/// corresponding minor of an arbitrary matrix. Exact per trial; a single
/// nonzero evaluation disproves membership. Rows of each coplanar group are
/// sampled inside a random hyperplane (the rank condition of a
/// non-simplicial facet); groups must be pairwise disjoint.
pub fn grassmann_numeric_check(fp: &FinalPolynomial, trials: usize, seed: u64) -> bool {
    for (gi, g) in fp.coplanar_groups.iter().enumerate() {
        for h in &fp.coplanar_groups[gi + 1..] {
            if g.iter().any(|v| h.contains(v)) {
                // overlapping rank constraints are not sampled here
                return false;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = fp.rank - 1;
    for _ in 0..trials {
        let mut mat: Vec<Vec<Rational>> = (0..fp.num_points)
            .map(|_| {
                (0..fp.rank)
                    .map(|_| Rational::from_integer(rng.gen_range(-9i64..=9).into()))
                    .collect()
            })
            .collect();
        for group in &fp.coplanar_groups {
            // d spanning vectors of a random hyperplane in R^{d+1}
            let basis: Vec<Vec<Rational>> = (0..d)
                .map(|_| {
                    (0..fp.rank)
                        .map(|_| Rational::from_integer(rng.gen_range(-9i64..=9).into()))
                        .collect()
                })
                .collect();
            for &row in group {
                let coeffs: Vec<Rational> = (0..d)
                    .map(|_| Rational::from_integer(rng.gen_range(-9i64..=9).into()))
                    .collect();
                let mut v = vec![Rational::zero(); fp.rank];
                for (c, b) in coeffs.iter().zip(&basis) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi += c * bi;
                    }
                }
                mat[row] = v;
            }
        }
        let mut cache: HashMap<Vec<usize>, Rational> = HashMap::new();
        let mut total = Rational::zero();
        for (w, ps) in &fp.terms {
            let mut prod = w.clone();
            for seq in ps {
                let minor = cache
                    .entry(seq.clone())
                    .or_insert_with(|| {
                        let rows: Vec<Vec<Rational>> =
                            seq.iter().map(|&r| mat[r].clone()).collect();
                        det_rational(&rows)
                    })
                    .clone();
                prod *= minor;
            }
            total += prod;
        }
        if !total.is_zero() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Certificate JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CertificateFileTerm {
    weight: String,
    entries: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    variables: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct CertificateFile {
    status: String,
    k: usize,
    l: usize,
    heuristics: HeuristicsFile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    terms: Vec<CertificateFileTerm>,
    #[serde(skip_serializing_if = "Option::is_none")]
    homogeneous_multipliers: Option<Vec<Vec<(String, u32)>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_polynomial: Option<Vec<(String, Vec<Vec<usize>>)>>,
    verified: bool,
}

#[derive(Serialize, Deserialize, Default)]
struct HeuristicsFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    avoid: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    fix: Vec<usize>,
    #[serde(default)]
    monomial_simplify: bool,
    #[serde(default)]
    redundant_bases: bool,
}

/// Serializes a certificate (1-based indices, weights as exact fractions).
pub fn certificate_to_json(cert: &Certificate) -> String {
    let file = CertificateFile {
        status: "certificate".into(),
        k: cert.k,
        l: cert.l,
        heuristics: HeuristicsFile {
            avoid: cert.heuristics.avoid_vertices.iter().map(|v| v + 1).collect(),
            fix: cert.heuristics.fix_vertices.iter().map(|v| v + 1).collect(),
            monomial_simplify: cert.heuristics.monomial_simplify,
            redundant_bases: cert.heuristics.redundant_bases,
        },
        terms: cert
            .terms
            .iter()
            .map(|t| CertificateFileTerm {
                weight: t.weight.to_string(),
                entries: t.entries().map(|(r, c)| (r + 1, c + 1)).collect(),
                variables: t
                    .variables()
                    .map(|v| (v.row as usize + 1, v.col as usize + 1))
                    .collect(),
            })
            .collect(),
        homogeneous_multipliers: cert.homogeneous.as_ref().map(|h| {
            h.terms
                .iter()
                .map(|t| {
                    t.multiplier
                        .exponents()
                        .iter()
                        .map(|&(v, e)| (format!("{},{}", v.row + 1, v.col + 1), e))
                        .collect()
                })
                .collect()
        }),
        final_polynomial: cert.final_polynomial.as_ref().map(|fp| {
            fp.terms
                .iter()
                .map(|(w, ps)| {
                    let sign = if w.is_negative() { "" } else { "+" };
                    (
                        format!("{sign}{w}"),
                        ps.iter()
                            .map(|seq| seq.iter().map(|&r| r + 1).collect())
                            .collect(),
                    )
                })
                .collect()
        }),
        verified: cert.verified,
    };
    serde_json::to_string_pretty(&file).expect("certificate serialization cannot fail")
}

/// Serializes the no-certificate outcome for a (k, l, heuristics) cell.
pub fn no_certificate_json(k: usize, l: usize, heuristics: &HeuristicConfig) -> String {
    let file = CertificateFile {
        status: "none".into(),
        k,
        l,
        heuristics: HeuristicsFile {
            avoid: heuristics.avoid_vertices.iter().map(|v| v + 1).collect(),
            fix: heuristics.fix_vertices.iter().map(|v| v + 1).collect(),
            monomial_simplify: heuristics.monomial_simplify,
            redundant_bases: heuristics.redundant_bases,
        },
        terms: Vec::new(),
        homogeneous_multipliers: None,
        final_polynomial: None,
        verified: false,
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}

/// Parses a certificate file back into an unverified certificate (call
/// `verify_certificate` against the matrix to establish validity).
pub fn certificate_from_json(text: &str) -> Result<Option<Certificate>, Error> {
    let file: CertificateFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.status == "none" {
        return Ok(None);
    }
    let mut terms = Vec::with_capacity(file.terms.len());
    for t in &file.terms {
        let weight: Rational = t
            .weight
            .parse()
            .map_err(|_| Error::Parse(format!("bad weight {:?}", t.weight)))?;
        let mut factors: Vec<TermFactor> = Vec::new();
        for &(r, c) in &t.entries {
            if r == 0 || c == 0 {
                return Err(Error::Parse("certificate entries are 1-based".into()));
            }
            factors.push(TermFactor::Entry {
                row: r - 1,
                col: c - 1,
            });
        }
        for &(r, c) in &t.variables {
            if r == 0 || c == 0 {
                return Err(Error::Parse("certificate variables are 1-based".into()));
            }
            factors.push(TermFactor::Variable(Var::new(r - 1, c - 1)));
        }
        factors.sort();
        terms.push(CertificateTerm { weight, factors });
    }
    Ok(Some(Certificate {
        k: file.k,
        l: file.l,
        heuristics: HeuristicConfig {
            avoid_vertices: file.heuristics.avoid.iter().map(|v| v - 1).collect(),
            fix_vertices: file.heuristics.fix.iter().map(|v| v - 1).collect(),
            monomial_simplify: file.heuristics.monomial_simplify,
            redundant_bases: file.heuristics.redundant_bases,
        },
        terms,
        verified: false,
        homogeneous: None,
        final_polynomial: None,
        warnings: Vec::new(),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::rat;

    #[test]
    fn linearize_cancellation_pair() {
        let x1 = Polynomial::var(Var::new(0, 0));
        let x2 = Polynomial::var(Var::new(1, 0));
        let cs = ConstraintSet {
            pool: vec![
                PoolMember {
                    kind: PoolKind::Variable(Var::new(0, 0)),
                    poly: x1.clone(),
                },
                PoolMember {
                    kind: PoolKind::Variable(Var::new(1, 0)),
                    poly: x2.clone(),
                },
            ],
            items: vec![
                ConstraintItem {
                    factors: vec![0],
                    poly: x1.sub(&x2),
                },
                ConstraintItem {
                    factors: vec![1],
                    poly: x2.sub(&x1),
                },
            ],
            k: 1,
            l: 1,
            heuristics: HeuristicConfig::default(),
            num_entry_members: 0,
            num_variable_members: 2,
        };
        let m = linearize(&cs);
        assert_eq!((m.num_rows(), m.num_cols()), (2, 2));
        // descending canonical order puts x2 (larger var, same degree:
        // grevlex makes the later variable smaller) after x1
        assert_eq!(m.column(0).len(), 2);
        assert_eq!(m.column(1).len(), 2);
    }

    #[test]
    fn linearize_monomial_union() {
        let x1 = Polynomial::var(Var::new(0, 0));
        let x2 = Polynomial::var(Var::new(1, 0));
        let x3 = Polynomial::var(Var::new(2, 0));
        let cs = ConstraintSet {
            pool: vec![],
            items: vec![
                ConstraintItem {
                    factors: vec![0],
                    poly: x1.mul(&x2).add(&x3),
                },
                ConstraintItem {
                    factors: vec![1],
                    poly: x3.clone(),
                },
            ],
            k: 1,
            l: 2,
            heuristics: HeuristicConfig::default(),
            num_entry_members: 2,
            num_variable_members: 0,
        };
        let m = linearize(&cs);
        assert_eq!(m.num_rows(), 2); // rows x1*x2 and x3
        assert_eq!(m.num_cols(), 2);
    }

    #[test]
    fn det_rational_matches_known() {
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(4), rat(5), rat(6)],
            vec![rat(7), rat(8), rat(10)],
        ];
        assert_eq!(det_rational(&m), rat(-3));
        let singular = vec![
            vec![rat(1), rat(2)],
            vec![rat(2), rat(4)],
        ];
        assert_eq!(det_rational(&singular), rat(0));
    }

    #[test]
    fn three_term_plucker_relation_vanishes() {
        // p_{ijS} p_{klS} - p_{ikS} p_{jlS} + p_{ilS} p_{jkS} with
        // S = {4, 5}, (i,j,k,l) = (0,1,2,3) on random 6x4 matrices
        let s = [4usize, 5];
        let seq = |a: usize, b: usize| -> Vec<usize> {
            let mut v = vec![a, b];
            v.extend_from_slice(&s);
            v
        };
        let fp = FinalPolynomial {
            terms: vec![
                (rat(1), vec![seq(0, 1), seq(2, 3)]),
                (rat(-1), vec![seq(0, 2), seq(1, 3)]),
                (rat(1), vec![seq(0, 3), seq(1, 2)]),
            ],
            num_points: 6,
            rank: 4,
            coplanar_groups: vec![],
        };
        assert!(grassmann_numeric_check(&fp, 50, 7));
    }

    #[test]
    fn grassmann_check_rejects_non_member() {
        // p_{0123}^2 alone is not in the ideal
        let fp = FinalPolynomial {
            terms: vec![(rat(1), vec![vec![0, 1, 2, 3], vec![0, 1, 2, 3]])],
            num_points: 5,
            rank: 4,
            coplanar_groups: vec![],
        };
        assert!(!grassmann_numeric_check(&fp, 20, 11));
    }

    #[test]
    fn certificate_json_roundtrip() {
        let cert = Certificate {
            k: 2,
            l: 3,
            heuristics: HeuristicConfig {
                avoid_vertices: [1usize, 3].into_iter().collect(),
                ..Default::default()
            },
            terms: vec![CertificateTerm {
                weight: rat(1) / rat(2),
                factors: vec![
                    TermFactor::Variable(Var::new(0, 2)),
                    TermFactor::Entry { row: 8, col: 7 },
                ],
            }],
            verified: true,
            homogeneous: None,
            final_polynomial: None,
            warnings: Vec::new(),
        };
        let json = certificate_to_json(&cert);
        let back = certificate_from_json(&json).unwrap().unwrap();
        assert_eq!(back.k, 2);
        assert_eq!(back.l, 3);
        assert_eq!(back.terms.len(), 1);
        assert_eq!(back.terms[0].weight, rat(1) / rat(2));
        assert_eq!(back.heuristics.avoid_vertices, cert.heuristics.avoid_vertices);
        assert_eq!(back.terms[0].factors, cert.terms[0].factors);
    }
}
