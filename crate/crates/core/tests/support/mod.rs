//! Shared helpers for the integration suites: exact linear algebra oracles
//! kept independent of the library's own solution paths. Each test target
//! uses its own subset.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use spherecert::combinatorics::{parse_sphere, AbstractSphere, Overrides};
use spherecert::lp::SparseRationalMatrix;
use spherecert::pipeline::SlackBundle;
use spherecert::polynomial::{Rational, Var};

pub fn fixture(name: &str) -> String {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path:?}: {e}"))
}

pub fn load_sphere(name: &str) -> (AbstractSphere, Overrides) {
    parse_sphere(&fixture(name)).unwrap()
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Reduced row echelon form; returns pivot columns. Plain rational
/// elimination, deliberately naive.
pub fn rref(a: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Rational::one() / &a[r][c];
        for x in &mut a[r] {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for cc in 0..cols {
                    let sub = &f * &a[r][cc];
                    a[i][cc] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// One nonzero kernel vector of `a`, or None when the kernel is trivial.
pub fn kernel_vector(a: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    if a.is_empty() {
        return None;
    }
    let cols = a[0].len();
    let mut m = a.to_vec();
    let pivots = rref(&mut m);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational::zero(); cols];
    v[free] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[r][free].clone();
    }
    Some(v)
}

/// Unique solution of `a x = b` when the columns are independent and the
/// system consistent; None otherwise.
pub fn solve_unique(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // inconsistent: pivot in the augmented column
    if pivots.contains(&cols) {
        return None;
    }
    if pivots.len() != cols {
        return None; // underdetermined
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

/// Brute-force oracle for the certificate LP: enumerates candidate vertex
/// supports of {Mc = 0, sum c = 1, c >= 0} (all column subsets; ≤ 6
/// columns) and solves each square system exactly.
pub fn kernel_simplex_feasible(m: &SparseRationalMatrix) -> bool {
    let nc = m.num_cols();
    assert!(nc <= 16, "oracle is exponential in columns");
    let dense: Vec<Vec<Rational>> = (0..nc)
        .map(|j| {
            let mut col = vec![Rational::zero(); m.num_rows()];
            for (r, v) in m.column(j) {
                col[*r] = v.clone();
            }
            col
        })
        .collect();
    for mask in 1u32..(1 << nc) {
        let support: Vec<usize> = (0..nc).filter(|j| mask >> j & 1 == 1).collect();
        // rows: every matrix row + the normalization row
        let mut a: Vec<Vec<Rational>> = (0..m.num_rows())
            .map(|r| support.iter().map(|&j| dense[j][r].clone()).collect())
            .collect();
        a.push(vec![Rational::one(); support.len()]);
        let mut b = vec![Rational::zero(); m.num_rows()];
        b.push(Rational::one());
        if let Some(x) = solve_unique(&a, &b) {
            if x.iter().all(|v| !v.is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Exact facet inequality (alpha, b) with alpha.v = b on the facet and
/// alpha.v < b off it.
fn facet_inequality(
    sphere: &AbstractSphere,
    coords: &[Vec<Rational>],
    facet: usize,
) -> (Vec<Rational>, Rational) {
    let d = sphere.dimension();
    // unknowns (alpha_1..alpha_d, b): alpha . v - b = 0 on facet vertices
    let rows: Vec<Vec<Rational>> = sphere
        .facet(facet)
        .set()
        .iter()
        .map(|&v| {
            let mut row = coords[v].clone();
            row.push(-Rational::one());
            row
        })
        .collect();
    let sol = kernel_vector(&rows).expect("facet spans a hyperplane");
    let (alpha, b) = (sol[..d].to_vec(), sol[d].clone());
    // orient: slack positive off the facet
    let slack = |v: usize| -> Rational {
        let dot: Rational = alpha
            .iter()
            .zip(&coords[v])
            .map(|(a, x)| a * x)
            .sum();
        &b - &dot
    };
    let mut sign = 0i8;
    for v in 0..sphere.num_vertices() {
        if sphere.facet(facet).contains(v) {
            assert!(slack(v).is_zero(), "vertex {v} not on its facet hyperplane");
            continue;
        }
        let s = slack(v);
        assert!(!s.is_zero(), "vertex {v} unexpectedly on facet {facet}");
        let this = if s.is_positive() { 1 } else { -1 };
        if sign == 0 {
            sign = this;
        } else {
            assert_eq!(sign, this, "facet {facet} does not support the polytope");
        }
    }
    if sign < 0 {
        (alpha.iter().map(|a| -a.clone()).collect(), -b)
    } else {
        (alpha, b)
    }
}

/// The dehomogenized variable assignment induced by an exact realization:
/// true slacks, scaled so every ledger-fixed entry is one. Independent
/// route for validating orientation and positivity.
pub fn realization_assignment(
    bundle: &SlackBundle,
    coords: &[Vec<Rational>],
) -> BTreeMap<Var, Rational> {
    let sphere = &bundle.sphere;
    let n = sphere.num_vertices();
    assert_eq!(coords.len(), n);

    // slack values for the flag facets only (the reduced matrix columns)
    let flag = &bundle.flag.facet_indices;
    let inequalities: Vec<(Vec<Rational>, Rational)> = flag
        .iter()
        .map(|&j| facet_inequality(sphere, coords, j))
        .collect();
    let slack: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            inequalities
                .iter()
                .map(|(alpha, b)| {
                    let dot: Rational = alpha
                        .iter()
                        .zip(&coords[i])
                        .map(|(a, x)| a * x)
                        .sum();
                    b - &dot
                })
                .collect()
        })
        .collect();

    // row/column scales making the fixed entries one, solved over the forest
    let ledger = &bundle.ledger;
    let ncols = flag.len();
    let mut row_scale: Vec<Option<Rational>> = vec![None; n];
    let mut col_scale: Vec<Option<Rational>> = vec![None; ncols];
    let mut adj_row: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut adj_col: Vec<Vec<usize>> = vec![Vec::new(); ncols];
    for &(i, c) in &ledger.fixed_entries {
        adj_row[i].push(c);
        adj_col[c].push(i);
    }
    for seed in 0..n + ncols {
        let start = if seed < n {
            if row_scale[seed].is_some() {
                continue;
            }
            row_scale[seed] = Some(Rational::one());
            seed
        } else {
            if col_scale[seed - n].is_some() {
                continue;
            }
            col_scale[seed - n] = Some(Rational::one());
            seed
        };
        let mut stack = vec![start];
        while let Some(node) = stack.pop() {
            if node < n {
                let i = node;
                let r = row_scale[i].clone().unwrap();
                for &c in &adj_row[i] {
                    if col_scale[c].is_none() {
                        // r * slack * sigma = 1
                        col_scale[c] = Some(Rational::one() / (&r * &slack[i][c]));
                        stack.push(n + c);
                    }
                }
            } else {
                let c = node - n;
                let s = col_scale[c].clone().unwrap();
                for &i in &adj_col[c] {
                    if row_scale[i].is_none() {
                        row_scale[i] = Some(Rational::one() / (&s * &slack[i][c]));
                        stack.push(i);
                    }
                }
            }
        }
    }

    let mut assignment = BTreeMap::new();
    for v in bundle.reduced_dehom.variables() {
        let (i, c) = (v.row as usize, v.col as usize);
        let value = row_scale[i].clone().unwrap()
            * &slack[i][c]
            * col_scale[c].clone().unwrap();
        assert!(value.is_positive(), "scaled slack at ({i},{c}) not positive");
        assignment.insert(v, value);
    }
    assignment
}
