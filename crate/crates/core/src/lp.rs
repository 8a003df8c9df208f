//! Exact rational linear programming for the positive-combination system.
//!
//! The one problem solved here: given the linearization matrix M (one row
//! per monomial, one column per constraint), minimize `1 - sum c_i` subject
//! to `M c = 0`, `sum c_i <= 1`, `c >= 0`. The optimum is 0 exactly when a
//! nonzero nonnegative combination of the constraint polynomials cancels
//! identically, and 1 otherwise, so it suffices to decide feasibility of
//! `{M c = 0, sum c = 1, c >= 0}` by a phase-1 primal simplex with Bland's
//! anti-cycling rule and exact rational pivots. Deterministic throughout.

use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::polynomial::Rational;
use crate::Deadline;

/// Sparse exact matrix, column-major; rows are monomials, columns are the
/// `c`-variables of the linear program.
#[derive(Clone, Debug, Default)]
pub struct SparseRationalMatrix {
    nrows: usize,
    cols: Vec<Vec<(usize, Rational)>>,
}

impl SparseRationalMatrix {
    pub fn from_columns(nrows: usize, cols: Vec<Vec<(usize, Rational)>>) -> Result<Self, Error> {
        for (j, col) in cols.iter().enumerate() {
            let mut last = None;
            for (r, v) in col {
                if *r >= nrows {
                    return Err(Error::Dimension(format!(
                        "column {j} references row {r} of {nrows}"
                    )));
                }
                if v.is_zero() {
                    return Err(Error::Dimension(format!(
                        "explicit zero stored in column {j}"
                    )));
                }
                if let Some(prev) = last {
                    if prev >= *r {
                        return Err(Error::Dimension(format!(
                            "column {j} rows out of order"
                        )));
                    }
                }
                last = Some(*r);
            }
        }
        Ok(SparseRationalMatrix { nrows, cols })
    }

    pub fn num_rows(&self) -> usize {
        self.nrows
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, Rational)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Exact matrix-vector product against a sparse weight vector.
    pub fn times(&self, weights: &[(usize, Rational)]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.nrows];
        for (j, w) in weights {
            for (r, v) in &self.cols[*j] {
                out[*r] += v * w;
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LpStatus {
    CertificateFound,
    NoCertificate,
}

/// Outcome of the certificate LP; weights present iff a certificate exists,
/// strictly positive and summing to one.
#[derive(Clone, Debug)]
pub struct LpOutcome {
    pub status: LpStatus,
    pub weights: Vec<(usize, Rational)>,
    pub objective: Rational,
    pub pivots: u64,
    pub presolve_eliminated: usize,
}

/// Support of the optimal combination, ascending by constraint index.
pub fn extract_support(outcome: &LpOutcome) -> Result<Vec<(usize, Rational)>, Error> {
    match outcome.status {
        LpStatus::CertificateFound => Ok(outcome.weights.clone()),
        LpStatus::NoCertificate => Err(Error::Internal(
            "extract_support called on NoCertificate outcome".into(),
        )),
    }
}

/// Iterated forced-zero elimination: a monomial row whose surviving
/// coefficients all share one sign forces those c's to zero (a sum of
/// same-signed nonnegative terms vanishes only termwise). Preserves the
/// feasible set exactly. Returns the surviving column indices.
fn presolve(m: &SparseRationalMatrix) -> Vec<usize> {
    let ncols = m.num_cols();
    let mut alive = vec![true; ncols];
    // row -> list of (col, sign)
    let mut rows: Vec<Vec<(usize, bool)>> = vec![Vec::new(); m.num_rows()];
    for (j, col) in m.cols.iter().enumerate() {
        for (r, v) in col {
            rows[*r].push((j, v.is_positive()));
        }
    }
    loop {
        let mut changed = false;
        for row in &rows {
            let mut pos = 0usize;
            let mut neg = 0usize;
            for &(j, positive) in row {
                if alive[j] {
                    if positive {
                        pos += 1;
                    } else {
                        neg += 1;
                    }
                }
            }
            if (pos > 0) ^ (neg > 0) {
                for &(j, _) in row {
                    if alive[j] {
                        alive[j] = false;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    (0..ncols).filter(|&j| alive[j]).collect()
}

/// Tableau rows switch to a dense representation once fill-in crosses a
/// quarter of the live width; exact pivots either way.
const DENSE_FILL_THRESHOLD: f64 = 0.25;

#[derive(Clone, Debug)]
enum TableauRow {
    Sparse(Vec<(usize, Rational)>),
    Dense(Vec<Rational>),
}

impl TableauRow {
    fn get(&self, j: usize) -> Rational {
        match self {
            TableauRow::Sparse(v) => v
                .binary_search_by_key(&j, |&(c, _)| c)
                .map(|i| v[i].1.clone())
                .unwrap_or_else(|_| Rational::zero()),
            TableauRow::Dense(v) => v[j].clone(),
        }
    }

    fn nnz(&self) -> usize {
        match self {
            TableauRow::Sparse(v) => v.len(),
            TableauRow::Dense(v) => v.iter().filter(|x| !x.is_zero()).count(),
        }
    }

    fn scale(&mut self, f: &Rational) {
        match self {
            TableauRow::Sparse(v) => {
                for (_, x) in v.iter_mut() {
                    *x *= f;
                }
            }
            TableauRow::Dense(v) => {
                for x in v.iter_mut() {
                    if !x.is_zero() {
                        *x *= f;
                    }
                }
            }
        }
    }

    /// self -= f * other
    fn sub_scaled(&mut self, f: &Rational, other: &TableauRow, width: usize) {
        if f.is_zero() {
            return;
        }
        match (&mut *self, other) {
            (TableauRow::Dense(a), TableauRow::Dense(b)) => {
                for j in 0..width {
                    if !b[j].is_zero() {
                        a[j] -= f * &b[j];
                    }
                }
            }
            (TableauRow::Dense(a), TableauRow::Sparse(b)) => {
                for (j, x) in b {
                    a[*j] -= f * x;
                }
            }
            (TableauRow::Sparse(_), _) => {
                let a = match std::mem::replace(self, TableauRow::Sparse(Vec::new())) {
                    TableauRow::Sparse(a) => a,
                    TableauRow::Dense(_) => unreachable!(),
                };
                let mut out: Vec<(usize, Rational)> = Vec::with_capacity(a.len() + other.nnz());
                match other {
                    TableauRow::Sparse(b) => {
                        let (mut ia, mut ib) = (0, 0);
                        while ia < a.len() || ib < b.len() {
                            let ca = a.get(ia).map(|&(c, _)| c).unwrap_or(usize::MAX);
                            let cb = b.get(ib).map(|&(c, _)| c).unwrap_or(usize::MAX);
                            if ca < cb {
                                out.push(a[ia].clone());
                                ia += 1;
                            } else if cb < ca {
                                out.push((cb, -(f * &b[ib].1)));
                                ib += 1;
                            } else {
                                let x = &a[ia].1 - f * &b[ib].1;
                                if !x.is_zero() {
                                    out.push((ca, x));
                                }
                                ia += 1;
                                ib += 1;
                            }
                        }
                    }
                    TableauRow::Dense(b) => {
                        let mut ia = 0;
                        for (j, bj) in b.iter().enumerate().take(width) {
                            while ia < a.len() && a[ia].0 < j {
                                out.push(a[ia].clone());
                                ia += 1;
                            }
                            let has_a = ia < a.len() && a[ia].0 == j;
                            if bj.is_zero() {
                                continue;
                            }
                            let x = if has_a {
                                let x = &a[ia].1 - f * bj;
                                ia += 1;
                                x
                            } else {
                                -(f * bj)
                            };
                            if !x.is_zero() {
                                out.push((j, x));
                            }
                        }
                        while ia < a.len() {
                            out.push(a[ia].clone());
                            ia += 1;
                        }
                    }
                }
                *self = TableauRow::Sparse(out);
            }
        }
    }

    fn to_dense(&mut self, width: usize) {
        if let TableauRow::Sparse(v) = self {
            let mut dense = vec![Rational::zero(); width];
            for (j, x) in v.drain(..) {
                dense[j] = x;
            }
            *self = TableauRow::Dense(dense);
        }
    }
}

/// Decides problem (min 1 - sum c, Mc = 0, sum c <= 1, c >= 0) exactly.
/// Status `CertificateFound` comes with the support and weights of an
/// optimal c; `NoCertificate` means the optimum is 1, i.e. no nonzero
/// nonnegative combination exists in this pool.
pub fn solve_certificate_lp(
    m: &SparseRationalMatrix,
    deadline: Deadline,
) -> Result<LpOutcome, Error> {
    let alive = presolve(m);
    let eliminated = m.num_cols() - alive.len();
    if alive.is_empty() {
        return Ok(LpOutcome {
            status: LpStatus::NoCertificate,
            weights: Vec::new(),
            objective: Rational::one(),
            pivots: 0,
            presolve_eliminated: eliminated,
        });
    }

    // Keep only rows touched by surviving columns.
    let mut row_map = vec![usize::MAX; m.num_rows()];
    let mut nrows = 0;
    for &j in &alive {
        for (r, _) in m.column(j) {
            if row_map[*r] == usize::MAX {
                row_map[*r] = nrows;
                nrows += 1;
            }
        }
    }

    let (feasible, weights_alive, pivots) =
        phase_one(m, &alive, &row_map, nrows, deadline)?;

    if !feasible {
        return Ok(LpOutcome {
            status: LpStatus::NoCertificate,
            weights: Vec::new(),
            objective: Rational::one(),
            pivots,
            presolve_eliminated: eliminated,
        });
    }

    // Map back to original column indices and assert soundness.
    let mut weights: Vec<(usize, Rational)> = weights_alive
        .into_iter()
        .map(|(k, w)| (alive[k], w))
        .filter(|(_, w)| !w.is_zero())
        .collect();
    weights.sort_by_key(|&(j, _)| j);

    let residual = m.times(&weights);
    if residual.iter().any(|x| !x.is_zero()) {
        return Err(Error::Internal(
            "simplex returned weights with nonzero M*c".into(),
        ));
    }
    let total: Rational = weights.iter().map(|(_, w)| w.clone()).sum();
    if !total.is_one() || weights.iter().any(|(_, w)| !w.is_positive()) {
        return Err(Error::Internal(
            "simplex weights are not a positive convex combination".into(),
        ));
    }

    Ok(LpOutcome {
        status: LpStatus::CertificateFound,
        weights,
        objective: Rational::zero(),
        pivots,
        presolve_eliminated: eliminated,
    })
}

/// Phase-1 simplex on {Mc = 0, sum c = 1, c >= 0} over the alive columns.
/// Returns feasibility, the c-values, and the pivot count.
fn phase_one(
    m: &SparseRationalMatrix,
    alive: &[usize],
    row_map: &[usize],
    nrows: usize,
    deadline: Deadline,
) -> Result<(bool, Vec<(usize, Rational)>, u64), Error> {
    let nc = alive.len();
    let total_rows = nrows + 1; // + normalization row
    let width = nc + total_rows; // c's then artificials

    // Structural columns.
    let mut rows: Vec<TableauRow> = (0..total_rows)
        .map(|_| TableauRow::Sparse(Vec::new()))
        .collect();
    let mut cells: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); total_rows];
    for (k, &j) in alive.iter().enumerate() {
        for (r, v) in m.column(j) {
            cells[row_map[*r]].push((k, v.clone()));
        }
        cells[nrows].push((k, Rational::one())); // normalization
    }
    let mut rhs = vec![Rational::zero(); total_rows];
    rhs[nrows] = Rational::one();
    for (r, mut cell) in cells.into_iter().enumerate() {
        cell.push((nc + r, Rational::one())); // artificial
        cell.sort_by_key(|&(c, _)| c);
        rows[r] = TableauRow::Sparse(cell);
    }

    // basis[r] = variable index basic in row r (artificials initially)
    let mut basis: Vec<usize> = (0..total_rows).map(|r| nc + r).collect();
    let mut dead = vec![false; width]; // artificials dropped on exit

    // Phase-1 reduced costs d_j = c_j - sum_r T[r][j]; objective w = sum rhs.
    let mut drow: TableauRow = {
        let mut acc: Vec<Rational> = vec![Rational::zero(); width];
        for row in &rows {
            match row {
                TableauRow::Sparse(v) => {
                    for (j, x) in v {
                        acc[*j] -= x;
                    }
                }
                TableauRow::Dense(_) => unreachable!(),
            }
        }
        for j in nc..width {
            acc[j] += Rational::one(); // c_j = 1 for artificials
        }
        TableauRow::Sparse(
            acc.into_iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .collect(),
        )
    };
    let mut objective: Rational = rhs.iter().sum();

    let mut pivots: u64 = 0;
    let mut dense_mode = false;
    loop {
        if pivots % 64 == 0 {
            deadline.check()?;
        }

        // Bland: entering variable = lowest index with negative reduced cost.
        let entering = match &drow {
            TableauRow::Sparse(v) => v
                .iter()
                .filter(|(j, x)| !dead[*j] && x.is_negative())
                .map(|&(j, _)| j)
                .min(),
            TableauRow::Dense(v) => (0..width)
                .find(|&j| !dead[j] && v[j].is_negative()),
        };
        let entering = match entering {
            Some(j) => j,
            None => break,
        };

        // Ratio test; Bland tie-break on the basic variable's index.
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..total_rows {
            let a = rows[r].get(entering);
            if !a.is_positive() {
                continue;
            }
            let ratio = &rhs[r] / &a;
            match &leave {
                None => leave = Some((r, ratio)),
                Some((br, best)) => {
                    if &ratio < best || (&ratio == best && basis[r] < basis[*br]) {
                        leave = Some((r, ratio));
                    }
                }
            }
        }
        let (pr, _) = leave.ok_or_else(|| {
            Error::Internal("phase-1 column unbounded; the simplex tableau is corrupt".into())
        })?;

        // Pivot on (pr, entering).
        let pivot_val = rows[pr].get(entering);
        let inv = Rational::one() / &pivot_val;
        rows[pr].scale(&inv);
        rhs[pr] *= &inv;
        let pivot_row = rows[pr].clone();
        let pivot_rhs = rhs[pr].clone();
        for r in 0..total_rows {
            if r == pr {
                continue;
            }
            let f = rows[r].get(entering);
            if f.is_zero() {
                continue;
            }
            rows[r].sub_scaled(&f, &pivot_row, width);
            rhs[r] -= &f * &pivot_rhs;
        }
        let fd = drow.get(entering);
        if !fd.is_zero() {
            drow.sub_scaled(&fd, &pivot_row, width);
            // substituting the entering variable's value t: w += d_e * t
            objective += &fd * &pivot_rhs;
        }

        let leaving_var = basis[pr];
        basis[pr] = entering;
        if leaving_var >= nc {
            dead[leaving_var] = true; // artificial never re-enters
        }
        pivots += 1;

        if !dense_mode {
            let nnz: usize = rows.iter().map(TableauRow::nnz).sum();
            if (nnz as f64) > DENSE_FILL_THRESHOLD * (total_rows * width) as f64 {
                for row in &mut rows {
                    row.to_dense(width);
                }
                drow.to_dense(width);
                dense_mode = true;
            }
        }
    }

    if !objective.is_zero() {
        if objective.is_negative() {
            return Err(Error::Internal("phase-1 objective went negative".into()));
        }
        return Ok((false, Vec::new(), pivots));
    }

    let mut weights = Vec::new();
    for r in 0..total_rows {
        if basis[r] < nc && !rhs[r].is_zero() {
            weights.push((basis[r], rhs[r].clone()));
        }
    }
    Ok((true, weights, pivots))
}
