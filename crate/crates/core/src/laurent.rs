//! Laurent polynomials in one variable `t`, matrices over `k[t, t⁻¹]`, and the
//! splitting type of the bundle on P¹ glued by such a matrix.
//!
//! Gluing convention: a section is a pair `(u, v)` with `u` a column over
//! `k[t]`, `v` a column over `k[t⁻¹]`, and `u = A·v`. With this convention the
//! 1×1 matrix `(t^d)` glues `O(d)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::linalg::{json_usize, Matrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    field: Field,
    terms: BTreeMap<i64, FieldElem>,
}

impl LaurentPoly {
    pub fn zero(field: Field) -> LaurentPoly {
        LaurentPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> LaurentPoly {
        LaurentPoly::monomial(field.one(), 0)
    }

    pub fn monomial(c: FieldElem, e: i64) -> LaurentPoly {
        let field = c.field();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { field, terms }
    }

    pub fn constant(c: FieldElem) -> LaurentPoly {
        LaurentPoly::monomial(c, 0)
    }

    /// Sums the given terms; repeated exponents are combined and zero
    /// coefficients dropped.
    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (i64, FieldElem)>) -> LaurentPoly {
        let mut p = LaurentPoly::zero(field);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: i64, c: &FieldElem) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.get(&e) {
            Some(old) => old + c,
            None => c.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, v);
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> &BTreeMap<i64, FieldElem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Units of `k[t, t⁻¹]` are exactly the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&e| e == 0)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i64) -> FieldElem {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &FieldElem) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.field);
        }
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Substitutes `t ↦ t⁻¹`.
    pub fn invert_variable(&self) -> LaurentPoly {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// True when only nonnegative exponents occur.
    pub fn is_polynomial(&self) -> bool {
        self.min_exp().is_none_or(|e| e >= 0)
    }

    /// True when only nonpositive exponents occur.
    pub fn is_inverse_polynomial(&self) -> bool {
        self.max_exp().is_none_or(|e| e <= 0)
    }

    /// Exact quotient in `k[t, t⁻¹]`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (Some(b), Some(db)) = (d.min_exp(), d.max_exp()) else {
            return None;
        };
        let Some(a) = self.min_exp() else {
            return Some(LaurentPoly::zero(self.field));
        };
        // Normalize both to polynomials with nonzero constant term; the
        // quotient of such polynomials, if it exists, is a polynomial.
        let mut rem = self.shift(-a);
        let d_lead_inv = d.terms[&db].inv().expect("nonzero leading coefficient");
        let d_deg = db - b;
        let d0 = d.shift(-b);
        let mut q = LaurentPoly::zero(self.field);
        while let Some(top) = rem.max_exp() {
            if top < d_deg {
                break;
            }
            let c = &rem.terms[&top] * &d_lead_inv;
            let e = top - d_deg;
            rem = &rem - &d0.shift(e).scale(&c);
            q.add_term(e, &c);
        }
        rem.is_zero().then(|| q.shift(a - b))
    }

    /// `[[exponent, "coefficient"], ...]` in increasing exponent order.
    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|(e, c)| json!([e, c.to_string()])).collect())
    }

    pub fn from_json(field: Field, v: &Value) -> Result<LaurentPoly> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial must be a list of [exponent, coefficient]".into()))?;
        let mut p = LaurentPoly::zero(field);
        for t in arr {
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse(format!("bad polynomial term {t}")))?;
            let e = pair[0].as_i64().ok_or_else(|| Error::Parse(format!("bad exponent {}", pair[0])))?;
            let c = match &pair[1] {
                Value::String(s) => field.parse_elem(s)?,
                Value::Number(n) => field.from_i64(n.as_i64().ok_or_else(|| Error::Parse(format!("bad coefficient {n}")))?),
                other => return Err(Error::Parse(format!("bad coefficient {other}"))),
            };
            p.add_term(e, &c);
        }
        Ok(p)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match e {
                0 => c.to_string(),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

/// Matrix over `k[t, t⁻¹]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> LaurentMatrix {
        LaurentMatrix { field, rows, cols, entries: vec![LaurentPoly::zero(field); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> LaurentMatrix {
        LaurentMatrix::diag_monomials(field, &vec![0; n])
    }

    /// `diag(t^{e_1}, ..., t^{e_n})`.
    pub fn diag_monomials(field: Field, exps: &[i64]) -> LaurentMatrix {
        let n = exps.len();
        let mut m = LaurentMatrix::zero(field, n, n);
        for (i, &e) in exps.iter().enumerate() {
            m.set(i, i, LaurentPoly::monomial(field.one(), e));
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<LaurentPoly>>) -> Result<LaurentMatrix> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::SizeMismatch("ragged Laurent matrix".into()));
            }
            entries.extend(row);
        }
        Ok(LaurentMatrix { field, rows: n, cols, entries })
    }

    pub fn from_constant(m: &Matrix) -> LaurentMatrix {
        let mut out = LaurentMatrix::zero(m.field(), m.rows(), m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.set(i, j, LaurentPoly::constant(m.get(i, j).clone()));
            }
        }
        out
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.entries.iter()
    }

    pub fn mul(&self, other: &LaurentMatrix) -> LaurentMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes for product");
        let mut out = LaurentMatrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero(self.field);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * other.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::min_exp).min()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.entries.iter().filter_map(LaurentPoly::max_exp).max()
    }

    pub fn is_polynomial(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_polynomial)
    }

    pub fn is_inverse_polynomial(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_inverse_polynomial)
    }

    pub fn shift(&self, k: i64) -> LaurentMatrix {
        LaurentMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|p| p.shift(k)).collect(),
        }
    }

    pub fn invert_variable(&self) -> LaurentMatrix {
        LaurentMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(LaurentPoly::invert_variable).collect(),
        }
    }

    /// If the matrix is diagonal with monomial diagonal `c_i t^{e_i}`, returns
    /// the exponents `e_i`.
    pub fn diagonal_exponents(&self) -> Option<Vec<i64>> {
        if self.rows != self.cols {
            return None;
        }
        let mut exps = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let p = self.get(i, j);
                if i == j {
                    if !p.is_unit() {
                        return None;
                    }
                    exps.push(p.min_exp().unwrap());
                } else if !p.is_zero() {
                    return None;
                }
            }
        }
        Some(exps)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<LaurentPoly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one(self.field));
        }
        let mut m: Vec<Vec<LaurentPoly>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut negate = false;
        let mut prev = LaurentPoly::one(self.field);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return Ok(LaurentPoly::zero(self.field));
                };
                m.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                    m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
                }
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        Ok(if negate { -&d } else { d })
    }

    pub fn is_invertible(&self) -> bool {
        self.det().is_ok_and(|d| d.is_unit())
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> LaurentMatrix {
        let rows = (0..self.rows)
            .filter(|&i| i != skip_row)
            .map(|i| (0..self.cols).filter(|&j| j != skip_col).map(|j| self.get(i, j).clone()).collect())
            .collect();
        LaurentMatrix::from_rows(self.field, rows).unwrap()
    }

    /// Inverse over `k[t, t⁻¹]` through the adjugate.
    pub fn inverse(&self) -> Result<LaurentMatrix> {
        let det = self.det()?;
        if !det.is_unit() {
            return Err(Error::NotInvertible(format!("determinant {det} is not a unit")));
        }
        let (e, c) = det.terms().iter().next().map(|(e, c)| (*e, c.clone())).unwrap();
        let det_inv = LaurentPoly::monomial(c.inv().unwrap(), -e);
        let n = self.rows;
        let mut out = LaurentMatrix::zero(self.field, n, n);
        if n == 1 {
            out.set(0, 0, det_inv);
            return Ok(out);
        }
        for i in 0..n {
            for j in 0..n {
                let mut cof = self.minor(j, i).det()?;
                if (i + j) % 2 == 1 {
                    cof = -&cof;
                }
                out.set(i, j, &cof * &det_inv);
            }
        }
        Ok(out)
    }

    /// Reorders rows so that new row `i` is old row `perm[i]`.
    pub fn permute_rows(&self, perm: &[usize]) -> LaurentMatrix {
        let rows = perm.iter().map(|&p| (0..self.cols).map(|j| self.get(p, j).clone()).collect()).collect();
        LaurentMatrix::from_rows(self.field, rows).unwrap()
    }

    /// Reorders columns so that new column `j` is old column `perm[j]`.
    pub fn permute_cols(&self, perm: &[usize]) -> LaurentMatrix {
        let rows = (0..self.rows).map(|i| perm.iter().map(|&p| self.get(i, p).clone()).collect()).collect();
        LaurentMatrix::from_rows(self.field, rows).unwrap()
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &LaurentPoly) {
        for j in 0..self.cols {
            let v = self.get(dst, j) + &(c * self.get(src, j));
            self.set(dst, j, v);
        }
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> =
            (0..self.rows).map(|i| Value::Array((0..self.cols).map(|j| self.get(i, j).to_json()).collect())).collect();
        json!({ "rows": self.rows, "cols": self.cols, "entries": entries })
    }

    pub fn from_json(field: Field, v: &Value) -> Result<LaurentMatrix> {
        let rows = json_usize(v, "rows")?;
        let cols = json_usize(v, "cols")?;
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix needs an `entries` array".into()))?;
        if entries.len() != rows {
            return Err(Error::SizeMismatch(format!("expected {rows} rows, got {}", entries.len())));
        }
        let mut out = Vec::with_capacity(rows);
        for row in entries {
            let row = row.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
            if row.len() != cols {
                return Err(Error::SizeMismatch(format!("expected {cols} columns, got {}", row.len())));
            }
            out.push(row.iter().map(|p| LaurentPoly::from_json(field, p)).collect::<Result<Vec<_>>>()?);
        }
        if rows == 0 {
            return Ok(LaurentMatrix::zero(field, 0, cols));
        }
        LaurentMatrix::from_rows(field, out)
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// `S·A·T = diag(t^{d_1}, ..., t^{d_r})` with `S` over `k[t]`, `T` over
/// `k[t⁻¹]`, both with constant determinant, and `d_1 ≥ ... ≥ d_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalizationResult {
    pub s: LaurentMatrix,
    pub t: LaurentMatrix,
    pub degrees: Vec<i64>,
}

/// Splitting type of the bundle glued by `a`.
///
/// `t^N·a` is brought to row-reduced form over `k[t]` (leading coefficient
/// matrix invertible) by unimodular row operations. The row degrees `δ_i` are
/// then the splitting type up to the shift `N`, and
/// `diag(t^{-δ})·S·t^N·a` is invertible over `k[t⁻¹]`; its inverse is `T`.
pub fn diagonalize(a: &LaurentMatrix) -> Result<DiagonalizationResult> {
    if a.rows != a.cols {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let det = a.det()?;
    if !det.is_unit() {
        return Err(Error::NotInvertible(format!("determinant {det} is not a unit of k[t, t^-1]")));
    }
    let field = a.field;
    let r = a.rows;
    if r == 0 {
        return Ok(DiagonalizationResult {
            s: LaurentMatrix::identity(field, 0),
            t: LaurentMatrix::identity(field, 0),
            degrees: Vec::new(),
        });
    }
    let n_shift = -a.min_exp().expect("invertible matrix has a nonzero entry");
    let mut p = a.shift(n_shift);
    let mut s = LaurentMatrix::identity(field, r);

    let row_degree = |m: &LaurentMatrix, i: usize| -> i64 {
        (0..m.cols).filter_map(|j| m.get(i, j).max_exp()).max().expect("invertible matrix has no zero row")
    };
    loop {
        let deg: Vec<i64> = (0..r).map(|i| row_degree(&p, i)).collect();
        let mut lead = Matrix::zero(field, r, r);
        for i in 0..r {
            for j in 0..r {
                lead.set(i, j, p.get(i, j).coeff(deg[i]));
            }
        }
        // A left-kernel vector of the leading coefficient matrix gives a
        // combination that lowers the degree of one row.
        let Some(c) = lead.transpose().kernel().into_iter().next() else {
            break;
        };
        let k = (0..r)
            .filter(|&i| !c[i].is_zero())
            .max_by_key(|&i| (deg[i], std::cmp::Reverse(i)))
            .unwrap();
        let ck_inv = c[k].inv().unwrap();
        for i in 0..r {
            if i == k || c[i].is_zero() {
                continue;
            }
            let mult = LaurentPoly::monomial(&c[i] * &ck_inv, deg[k] - deg[i]);
            p.add_row_multiple(k, i, &mult);
            s.add_row_multiple(k, i, &mult);
        }
    }
    let deg: Vec<i64> = (0..r).map(|i| row_degree(&p, i)).collect();
    let neg: Vec<i64> = deg.iter().map(|d| -d).collect();
    let u = LaurentMatrix::diag_monomials(field, &neg).mul(&p);
    let t = u.inverse()?;

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&x, &y| deg[y].cmp(&deg[x]).then(x.cmp(&y)));
    let s = s.permute_rows(&order);
    let t = t.permute_cols(&order);
    let degrees = order.iter().map(|&i| deg[i] - n_shift).collect();
    Ok(DiagonalizationResult { s, t, degrees })
}

/// `h⁰(O(n) ⊗ E_A)` computed by finite linear algebra, independently of
/// [`diagonalize`].
///
/// Counts columns `v` over `k[t⁻¹]` such that `t^n·A·v` is polynomial in `t`.
/// Writing `det A = c·t^e` and `a_min` for the least exponent of `A`, the
/// adjugate formula `v = t^{-n}·adj(A)·u / det A` shows any such `v` has
/// `t⁻¹`-degree at most `n + e − (r−1)·a_min`, so a truncated system of that
/// size has the same solution space.
pub fn section_dim_oracle(a: &LaurentMatrix, twist: i64) -> Result<usize> {
    if a.rows != a.cols {
        return Err(Error::NotSquare { rows: a.rows, cols: a.cols });
    }
    let det = a.det()?;
    if !det.is_unit() {
        return Err(Error::NotInvertible("gluing matrix is not invertible over k[t, t^-1]".into()));
    }
    let r = a.rows;
    if r == 0 {
        return Ok(0);
    }
    let a_min = a.min_exp().unwrap();
    let e = det.min_exp().unwrap();
    let bound = twist + e - (r as i64 - 1) * a_min;
    if bound < 0 {
        return Ok(0);
    }
    let b = bound as usize;
    let unknowns = r * (b + 1);
    // Equation rows are indexed by (output row, negative exponent).
    let mut eqs: BTreeMap<(usize, i64), Vec<FieldElem>> = BTreeMap::new();
    for row in 0..r {
        for i in 0..r {
            for (e, c) in a.get(row, i).terms() {
                for j in 0..=b {
                    let exp = e + twist - j as i64;
                    if exp < 0 {
                        let eq = eqs.entry((row, exp)).or_insert_with(|| vec![a.field.zero(); unknowns]);
                        let idx = i * (b + 1) + j;
                        eq[idx] = &eq[idx] + c;
                    }
                }
            }
        }
    }
    if eqs.is_empty() {
        return Ok(unknowns);
    }
    let m = Matrix::from_rows(a.field, unknowns, eqs.into_values().collect())?;
    Ok(m.nullity())
}

/// A random matrix in `GL(r, k[t, t⁻¹])` with every exponent in `[lo, hi]`:
/// a permuted monomial diagonal scrambled by elementary row and column
/// operations with monomial multipliers.
pub fn random_invertible<R: Rng + ?Sized>(field: Field, r: usize, lo: i64, hi: i64, rng: &mut R) -> LaurentMatrix {
    assert!(lo <= 0 && hi >= 0, "exponent range must contain 0");
    let mut m = LaurentMatrix::zero(field, r, r);
    let mut perm: Vec<usize> = (0..r).collect();
    for i in (1..r).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    for (i, &j) in perm.iter().enumerate() {
        m.set(i, j, LaurentPoly::monomial(field.random_nonzero(rng), rng.gen_range(lo..=hi)));
    }
    if r < 2 {
        return m;
    }
    for _ in 0..6 * r {
        let (x, y) = (rng.gen_range(0..r), rng.gen_range(0..r));
        if x == y {
            continue;
        }
        let mult = LaurentPoly::monomial(field.random_nonzero(rng), rng.gen_range(lo..=hi));
        let mut cand = m.clone();
        if rng.gen_bool(0.5) {
            cand.add_row_multiple(x, y, &mult);
        } else {
            for i in 0..r {
                let v = cand.get(i, x) + &(cand.get(i, y) * &mult);
                cand.set(i, x, v);
            }
        }
        if cand.min_exp().is_none_or(|e| e >= lo) && cand.max_exp().is_none_or(|e| e <= hi) {
            m = cand;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mono(c: i64, e: i64) -> LaurentPoly {
        LaurentPoly::monomial(Field::Rational.from_i64(c), e)
    }

    fn check(a: &LaurentMatrix) -> Vec<i64> {
        let res = diagonalize(a).unwrap();
        let prod = res.s.mul(a).mul(&res.t);
        assert_eq!(prod.diagonal_exponents().unwrap(), res.degrees);
        assert!(prod.entries().all(|p| p.is_zero() || p.terms().values().all(FieldElem::is_one)));
        assert!(res.s.is_polynomial());
        assert!(res.t.is_inverse_polynomial());
        let ds = res.s.det().unwrap();
        let dt = res.t.det().unwrap();
        assert!(ds.is_unit() && ds.is_constant());
        assert!(dt.is_unit() && dt.is_constant());
        res.degrees
    }

    #[test]
    fn unit_detection() {
        assert!(mono(3, -2).is_unit());
        assert!(!(&mono(1, 0) + &mono(1, 1)).is_unit());
        assert!(!LaurentPoly::zero(Field::Rational).is_unit());
    }

    #[test]
    fn identity_splits_trivially() {
        let id = LaurentMatrix::identity(Field::Rational, 2);
        let res = diagonalize(&id).unwrap();
        assert_eq!(res.degrees, vec![0, 0]);
        assert_eq!(res.s, id);
        assert_eq!(res.t, id);
    }

    #[test]
    fn monomial_line_bundle() {
        for d in -4..=4 {
            let a = LaurentMatrix::diag_monomials(Field::Rational, &[d]);
            assert_eq!(check(&a), vec![d]);
        }
    }

    #[test]
    fn antidiagonal_example() {
        let q = Field::Rational;
        let a = LaurentMatrix::from_rows(q, vec![vec![LaurentPoly::zero(q), mono(1, 1)], vec![mono(1, -1), LaurentPoly::zero(q)]])
            .unwrap();
        assert_eq!(check(&a), vec![1, -1]);
        assert_eq!(section_dim_oracle(&a, 0).unwrap(), 2);
    }

    #[test]
    fn non_diagonal_gluing() {
        // [[t, 0], [1, t^-1]] is a nonsplit extension of O(1) by O(-1), so the
        // bundle is O ⊕ O; the transposed shape stays O(1) ⊕ O(-1).
        let q = Field::Rational;
        let a = LaurentMatrix::from_rows(q, vec![vec![mono(1, 1), LaurentPoly::zero(q)], vec![mono(1, 0), mono(1, -1)]])
            .unwrap();
        assert_eq!(check(&a), vec![0, 0]);
        assert_eq!(section_dim_oracle(&a, -1).unwrap(), 0);
        let b = LaurentMatrix::from_rows(q, vec![vec![mono(1, 1), mono(1, 0)], vec![LaurentPoly::zero(q), mono(1, -1)]])
            .unwrap();
        assert_eq!(check(&b), vec![1, -1]);
    }

    #[test]
    fn singular_matrix_rejected() {
        let q = Field::Rational;
        let a = LaurentMatrix::from_rows(q, vec![vec![&mono(1, 0) + &mono(1, 1)]]).unwrap();
        assert!(matches!(diagonalize(&a), Err(Error::NotInvertible(_))));
        let b = LaurentMatrix::zero(q, 2, 3);
        assert!(matches!(diagonalize(&b), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn oracle_small_cases() {
        let q = Field::Rational;
        assert_eq!(section_dim_oracle(&LaurentMatrix::identity(q, 3), 0).unwrap(), 3);
        assert_eq!(section_dim_oracle(&LaurentMatrix::diag_monomials(q, &[2]), 0).unwrap(), 3);
        assert_eq!(section_dim_oracle(&LaurentMatrix::diag_monomials(q, &[5]), 0).unwrap(), 6);
        assert_eq!(section_dim_oracle(&LaurentMatrix::diag_monomials(q, &[-3]), 1).unwrap(), 0);
    }

    #[test]
    fn random_matrices_over_both_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for field in [Field::Rational, Field::Prime(7)] {
            for _ in 0..20 {
                let a = random_invertible(field, 3, -3, 3, &mut rng);
                let res = diagonalize(&a).unwrap();
                let prod = res.s.mul(&a).mul(&res.t);
                assert_eq!(prod.diagonal_exponents().unwrap(), res.degrees);
                let e = a.det().unwrap().min_exp().unwrap();
                assert_eq!(res.degrees.iter().sum::<i64>(), e);
                for n in -2..=2 {
                    let expect: i64 = res.degrees.iter().map(|d| (d + n + 1).max(0)).sum();
                    assert_eq!(section_dim_oracle(&a, n).unwrap() as i64, expect);
                }
            }
        }
    }

    #[test]
    fn exact_division() {
        let f = &(&mono(1, 0) + &mono(1, 1)) * &(&mono(2, -1) + &mono(-1, 3));
        let d = &mono(1, 0) + &mono(1, 1);
        assert_eq!(f.div_exact(&d).unwrap(), &mono(2, -1) + &mono(-1, 3));
        assert!(mono(1, 0).div_exact(&d).is_none());
    }

    #[test]
    fn json_round_trip() {
        let q = Field::Rational;
        let p = &mono(3, -2) + &LaurentPoly::monomial(q.parse_elem("1/2").unwrap(), 4);
        assert_eq!(p.to_json().to_string(), r#"[[-2,"3/1"],[4,"1/2"]]"#);
        assert_eq!(LaurentPoly::from_json(q, &p.to_json()).unwrap(), p);
        let m = LaurentMatrix::from_rows(q, vec![vec![p.clone(), LaurentPoly::zero(q)]]).unwrap();
        assert_eq!(LaurentMatrix::from_json(q, &m.to_json()).unwrap(), m);
    }
}
