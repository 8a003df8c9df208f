//! Sparse multivariate polynomial arithmetic over the slack variables.
//!
//! Variables are the entries `x_{i,j}` of a reduced slack matrix (row,
//! column). Coefficients are exact rationals. The distinguished monomial
//! order is graded reverse-lexicographic over the canonical `(row, col)`
//! variable order, which fixes the linearization's row order across runs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// A slack variable `x_{i,j}`: `row` and `col` are 0-based internally and
/// printed 1-based.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub row: u32,
    pub col: u32,
}

impl Var {
    pub fn new(row: usize, col: usize) -> Self {
        Var {
            row: row as u32,
            col: col as u32,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_{{{},{}}}", self.row + 1, self.col + 1)
    }
}

/// Power product of variables; no zero exponents stored, variables in
/// canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        Monomial { exps: vec![(v, 1)] }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable_by_key(|&(v, _)| v);
        let mut exps: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match exps.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => exps.push((v, e)),
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponents(&self) -> &[(Var, u32)] {
        &self.exps
    }

    pub fn exponent_of(&self, v: Var) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut pairs = Vec::with_capacity(self.exps.len() + other.exps.len());
        pairs.extend_from_slice(&self.exps);
        pairs.extend_from_slice(&other.exps);
        Monomial::from_pairs(pairs)
    }

    /// Exact division; `None` when some exponent of `other` exceeds ours.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = Vec::with_capacity(self.exps.len());
        let mut rem: BTreeMap<Var, u32> = other.exps.iter().cloned().collect();
        for &(v, e) in &self.exps {
            match rem.remove(&v) {
                None => exps.push((v, e)),
                Some(eb) => match e.cmp(&eb) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => exps.push((v, e - eb)),
                },
            }
        }
        if !rem.is_empty() {
            return None;
        }
        Some(Monomial { exps })
    }

    /// Componentwise min (gcd of power products).
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::new();
        for &(v, e) in &self.exps {
            let eb = other.exponent_of(v);
            if eb > 0 {
                exps.push((v, e.min(eb)));
            }
        }
        Monomial { exps }
    }

    pub fn variables(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }
}

/// Graded reverse-lexicographic: higher total degree is greater; on degree
/// ties, the monomial with the larger exponent at the last differing
/// variable is smaller.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Scan from the largest variable downward; the first discrepancy is
        // the last differing coordinate of the exponent vectors.
        let (mut a, mut b) = (self.exps.iter().rev(), other.exps.iter().rev());
        loop {
            match (a.next(), b.next()) {
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    // other has a strictly later variable with positive
                    // exponent, so other is smaller there... careful: the
                    // side holding the later variable has the larger last
                    // coordinate, hence is grevlex-smaller.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {}
                    },
                },
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Power product with integer (possibly negative) exponents; the currency of
/// the dehomogenization ledger.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct LaurentMonomial {
    exps: Vec<(Var, i64)>,
}

impl LaurentMonomial {
    pub fn one() -> Self {
        LaurentMonomial::default()
    }

    pub fn var(v: Var) -> Self {
        LaurentMonomial { exps: vec![(v, 1)] }
    }

    pub fn from_pairs(mut pairs: Vec<(Var, i64)>) -> Self {
        pairs.sort_unstable_by_key(|&(v, _)| v);
        let mut exps: Vec<(Var, i64)> = Vec::new();
        for (v, e) in pairs {
            match exps.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => exps.push((v, e)),
            }
        }
        exps.retain(|&(_, e)| e != 0);
        LaurentMonomial { exps }
    }

    pub fn from_monomial(m: &Monomial) -> LaurentMonomial {
        LaurentMonomial {
            exps: m.exponents().iter().map(|&(v, e)| (v, e as i64)).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponents(&self) -> &[(Var, i64)] {
        &self.exps
    }

    pub fn exponent_of(&self, v: Var) -> i64 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &LaurentMonomial) -> LaurentMonomial {
        let mut pairs = self.exps.clone();
        pairs.extend_from_slice(&other.exps);
        LaurentMonomial::from_pairs(pairs)
    }

    pub fn inv(&self) -> LaurentMonomial {
        LaurentMonomial {
            exps: self.exps.iter().map(|&(v, e)| (v, -e)).collect(),
        }
    }

    pub fn div(&self, other: &LaurentMonomial) -> LaurentMonomial {
        self.mul(&other.inv())
    }

    /// Componentwise max over the union of variables (absent = 0).
    pub fn join(&self, other: &LaurentMonomial) -> LaurentMonomial {
        let mut vars: Vec<Var> = self.variables().chain(other.variables()).collect();
        vars.sort_unstable();
        vars.dedup();
        LaurentMonomial::from_pairs(
            vars.into_iter()
                .map(|v| (v, self.exponent_of(v).max(other.exponent_of(v))))
                .collect(),
        )
    }

    pub fn variables(&self) -> impl Iterator<Item = Var> + '_ {
        self.exps.iter().map(|&(v, _)| v)
    }

    /// Conversion to a true monomial; `None` if any exponent is negative.
    pub fn to_monomial(&self) -> Option<Monomial> {
        let mut pairs = Vec::with_capacity(self.exps.len());
        for &(v, e) in &self.exps {
            if e < 0 {
                return None;
            }
            pairs.push((v, e as u32));
        }
        Some(Monomial::from_pairs(pairs))
    }
}

impl fmt::Display for LaurentMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exps.is_empty() {
            return write!(f, "1");
        }
        for (k, &(v, e)) in self.exps.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            write!(f, "{v}")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial in canonical form: no zero coefficients,
/// merged monomials, terms ordered by grevlex.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    pub fn var(v: Var) -> Self {
        Polynomial::from_term(Rational::one(), Monomial::var(v))
    }

    pub fn from_term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn from_terms(pairs: Vec<(Rational, Monomial)>) -> Self {
        let mut p = Polynomial::zero();
        for (c, m) in pairs {
            p.add_term(&c, &m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Terms in descending grevlex order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Present iff the polynomial is a single term `c * m`.
    pub fn as_single_term(&self) -> Option<(&Monomial, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    fn add_term(&mut self, c: &Rational, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c, m);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(&-c.clone(), m);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(&(ca * cb), &ma.mul(mb));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(mm, c)| (mm.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vars: Vec<Var> = self.terms.keys().flat_map(|m| m.variables()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Exact rational value under a total assignment.
    pub fn evaluate(&self, assignment: &BTreeMap<Var, Rational>) -> Result<Rational, Error> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for &(v, e) in m.exponents() {
                let x = assignment
                    .get(&v)
                    .ok_or_else(|| Error::MissingVariable(v.to_string()))?;
                for _ in 0..e {
                    val *= x;
                }
            }
            total += val;
        }
        Ok(total)
    }

    /// Splits off the monomial content: `self = content * cofactor`, where
    /// `content` is the gcd of all term monomials and the cofactor's own
    /// term-gcd is trivial. Errors on the zero polynomial.
    pub fn factor_monomial(&self) -> Result<(Monomial, Polynomial), Error> {
        let mut it = self.terms.keys();
        let first = it
            .next()
            .ok_or_else(|| Error::Internal("factor_monomial of zero polynomial".into()))?;
        let mut content = first.clone();
        for m in it {
            if content.is_one() {
                break;
            }
            content = content.gcd(m);
        }
        let cofactor = Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.div(&content).expect("content divides"), c.clone()))
                .collect(),
        };
        Ok((content, cofactor))
    }

    /// Exact polynomial division; `None` when `other` does not divide.
    pub fn divide_exact(&self, other: &Polynomial) -> Option<Polynomial> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        let (lm, lc) = other.leading().unwrap();
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let m = rm.div(lm)?;
            let c = rc / lc;
            let t = Polynomial::from_term(c, m);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Maps every variable to a Laurent monomial. The image, a sum of
    /// Laurent monomials, is returned normalized as `(poly, shift)` with
    /// `image = poly * shift`, `shift` the componentwise min over all
    /// mapped terms.
    pub fn substitute_laurent<F>(&self, image: F) -> (Polynomial, LaurentMonomial)
    where
        F: Fn(Var) -> LaurentMonomial,
    {
        let mapped: Vec<(Rational, LaurentMonomial)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut lm = LaurentMonomial::one();
                for &(v, e) in m.exponents() {
                    let iv = image(v);
                    for _ in 0..e {
                        lm = lm.mul(&iv);
                    }
                }
                (c.clone(), lm)
            })
            .collect();
        if mapped.is_empty() {
            return (Polynomial::zero(), LaurentMonomial::one());
        }
        let mut vars: Vec<Var> = mapped
            .iter()
            .flat_map(|(_, lm)| lm.variables().collect::<Vec<_>>())
            .collect();
        vars.sort_unstable();
        vars.dedup();
        let shift = LaurentMonomial::from_pairs(
            vars.into_iter()
                .map(|v| {
                    (
                        v,
                        mapped
                            .iter()
                            .map(|(_, lm)| lm.exponent_of(v))
                            .min()
                            .unwrap(),
                    )
                })
                .collect(),
        );
        let mut poly = Polynomial::zero();
        for (c, lm) in mapped {
            let m = lm
                .div(&shift)
                .to_monomial()
                .expect("shift is the componentwise min");
            poly.add_term(&c, &m);
        }
        (poly, shift)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

/// Exact symbolic determinant by Laplace expansion along the row or column
/// with the most structural zeros, memoized on the remaining minor's index
/// sets. The result is independent of expansion order.
pub fn det_symbolic(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return Polynomial::one();
    }
    assert!(n < 64, "determinant dimension limited to 63");
    let mut memo: HashMap<(u64, u64), Polynomial> = HashMap::new();
    let full = (1u64 << n) - 1;
    det_rec(m, full, full, &mut memo)
}

fn det_rec(
    m: &[Vec<Polynomial>],
    rows: u64,
    cols: u64,
    memo: &mut HashMap<(u64, u64), Polynomial>,
) -> Polynomial {
    if rows == 0 {
        return Polynomial::one();
    }
    if let Some(p) = memo.get(&(rows, cols)) {
        return p.clone();
    }
    let row_idx: Vec<usize> = (0..64).filter(|i| rows >> i & 1 == 1).collect();
    let col_idx: Vec<usize> = (0..64).filter(|j| cols >> j & 1 == 1).collect();

    if row_idx.len() == 1 {
        return m[row_idx[0]][col_idx[0]].clone();
    }

    // Line with the most zero entries; rows first on ties.
    let mut best_is_row = true;
    let mut best_pos = 0usize;
    let mut best_zeros = 0usize;
    let mut first = true;
    for (pi, &i) in row_idx.iter().enumerate() {
        let zeros = col_idx.iter().filter(|&&j| m[i][j].is_zero()).count();
        if first || zeros > best_zeros {
            best_zeros = zeros;
            best_is_row = true;
            best_pos = pi;
            first = false;
        }
    }
    for (pj, &j) in col_idx.iter().enumerate() {
        let zeros = row_idx.iter().filter(|&&i| m[i][j].is_zero()).count();
        if zeros > best_zeros {
            best_zeros = zeros;
            best_is_row = false;
            best_pos = pj;
        }
    }

    let mut acc = Polynomial::zero();
    if best_is_row {
        let i = row_idx[best_pos];
        for (pj, &j) in col_idx.iter().enumerate() {
            let e = &m[i][j];
            if e.is_zero() {
                continue;
            }
            let minor = det_rec(m, rows & !(1 << i), cols & !(1 << j), memo);
            let term = e.mul(&minor);
            acc = if (best_pos + pj) % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
    } else {
        let j = col_idx[best_pos];
        for (pi, &i) in row_idx.iter().enumerate() {
            let e = &m[i][j];
            if e.is_zero() {
                continue;
            }
            let minor = det_rec(m, rows & !(1 << i), cols & !(1 << j), memo);
            let term = e.mul(&minor);
            acc = if (pi + best_pos) % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
    }
    memo.insert((rows, cols), acc.clone());
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(r: u32, c: u32) -> Var {
        Var { row: r, col: c }
    }

    fn x(r: u32, c: u32) -> Polynomial {
        Polynomial::var(v(r, c))
    }

    #[test]
    fn difference_of_squares() {
        let x1 = x(0, 0);
        let x2 = x(1, 0);
        let lhs = x1.add(&x2).mul(&x1.sub(&x2));
        let rhs = x1.mul(&x1).sub(&x2.mul(&x2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mul_by_zero_annihilates() {
        let p = x(0, 0).add(&Polynomial::one());
        assert!(p.mul(&Polynomial::zero()).is_zero());
    }

    #[test]
    fn square_of_binomial() {
        let p = x(0, 0).add(&Polynomial::one());
        let sq = p.mul(&p);
        let expected = Polynomial::from_terms(vec![
            (rat(1), Monomial::from_pairs(vec![(v(0, 0), 2)])),
            (rat(2), Monomial::var(v(0, 0))),
            (rat(1), Monomial::one()),
        ]);
        assert_eq!(sq, expected);
    }

    #[test]
    fn grevlex_degree_dominates() {
        let m1 = Monomial::from_pairs(vec![(v(0, 0), 2)]);
        let m2 = Monomial::var(v(5, 5));
        assert!(m1 > m2);
    }

    #[test]
    fn grevlex_tie_break_on_last_variable() {
        // Classic grevlex on 3 vars a<b<c, degree 2: a^2 > ab > b^2 > ac > bc > c^2.
        let a = v(0, 0);
        let b = v(0, 1);
        let c = v(0, 2);
        let mono = |ps: &[(Var, u32)]| Monomial::from_pairs(ps.to_vec());
        let order = [
            mono(&[(a, 2)]),
            mono(&[(a, 1), (b, 1)]),
            mono(&[(b, 2)]),
            mono(&[(a, 1), (c, 1)]),
            mono(&[(b, 1), (c, 1)]),
            mono(&[(c, 2)]),
        ];
        for w in order.windows(2) {
            assert!(w[0] > w[1], "{} should exceed {}", w[0], w[1]);
        }
    }

    #[test]
    fn identity_determinant() {
        let n = 4;
        let m: Vec<Vec<Polynomial>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Polynomial::one() } else { Polynomial::zero() })
                    .collect()
            })
            .collect();
        assert_eq!(det_symbolic(&m), Polynomial::one());
    }

    #[test]
    fn repeated_row_kills_determinant() {
        let row: Vec<Polynomial> = vec![x(0, 0), x(0, 1), x(0, 2)];
        let other: Vec<Polynomial> = vec![x(1, 0), x(1, 1), x(1, 2)];
        let m = vec![row.clone(), other, row];
        assert!(det_symbolic(&m).is_zero());
    }

    #[test]
    fn row_swap_negates_determinant() {
        let m = vec![
            vec![x(0, 0), x(0, 1)],
            vec![x(1, 0), x(1, 1)],
        ];
        let swapped = vec![m[1].clone(), m[0].clone()];
        assert_eq!(det_symbolic(&m), det_symbolic(&swapped).neg());
    }

    #[test]
    fn evaluate_arithmetic() {
        // x1^2 - x2^2 at (3, 2) = 5
        let p = x(0, 0).mul(&x(0, 0)).sub(&x(1, 0).mul(&x(1, 0)));
        let mut a = BTreeMap::new();
        a.insert(v(0, 0), rat(3));
        a.insert(v(1, 0), rat(2));
        assert_eq!(p.evaluate(&a).unwrap(), rat(5));
    }

    #[test]
    fn evaluate_missing_variable_errors() {
        let p = x(0, 0);
        let a = BTreeMap::new();
        assert!(p.evaluate(&a).is_err());
    }

    #[test]
    fn factor_common_monomial() {
        // x1*x2 + x1*x3 -> (x1, x2 + x3)
        let p = x(0, 0).mul(&x(1, 0)).add(&x(0, 0).mul(&x(2, 0)));
        let (content, cof) = p.factor_monomial().unwrap();
        assert_eq!(content, Monomial::var(v(0, 0)));
        assert_eq!(cof, x(1, 0).add(&x(2, 0)));
        assert_eq!(cof.mul_monomial(&content), p);
    }

    #[test]
    fn factor_coprime_terms() {
        let p = x(0, 0).add(&x(1, 0));
        let (content, cof) = p.factor_monomial().unwrap();
        assert!(content.is_one());
        assert_eq!(cof, p);
    }

    #[test]
    fn exact_division() {
        let p = x(0, 0).add(&x(1, 0));
        let q = x(0, 0).sub(&x(1, 0));
        let prod = p.mul(&q);
        assert_eq!(prod.divide_exact(&p).unwrap(), q);
        assert_eq!(prod.divide_exact(&q).unwrap(), p);
        assert!(prod.divide_exact(&x(2, 0)).is_none());
    }

    #[test]
    fn laurent_join_and_div() {
        let a = LaurentMonomial::from_pairs(vec![(v(0, 0), 2), (v(1, 0), -1)]);
        let b = LaurentMonomial::from_pairs(vec![(v(0, 0), 1), (v(2, 0), 3)]);
        let j = a.join(&b);
        assert_eq!(j.exponent_of(v(0, 0)), 2);
        assert_eq!(j.exponent_of(v(1, 0)), 0);
        assert_eq!(j.exponent_of(v(2, 0)), 3);
        let q = j.div(&a);
        assert!(q.to_monomial().is_some());
    }

    #[test]
    fn display_notation() {
        let p = x(0, 3).mul(&x(2, 0)).sub(&Polynomial::constant(rat(2)));
        assert_eq!(p.to_string(), "x_{1,4}*x_{3,1} - 2");
    }
}
