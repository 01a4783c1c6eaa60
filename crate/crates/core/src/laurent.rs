//! Laurent polynomials over [`Fq`] and small square matrices over them.
//!
//! Ring arithmetic is exact and unbounded; the degree window is enforced
//! where inputs enter the decomposition routines (see [`LaurentMatrix::check_window`]).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Fq};

pub const DEFAULT_WINDOW: i32 = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    field: Field,
    terms: BTreeMap<i32, Fq>,
}

impl LaurentPoly {
    pub fn zero(field: Field) -> Self {
        LaurentPoly { field, terms: BTreeMap::new() }
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Fq) -> Self {
        Self::monomial(c, 0)
    }

    /// `c·t^k`.
    pub fn monomial(c: Fq, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPoly { field: c.field(), terms }
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (i32, Fq)>) -> Self {
        let mut p = Self::zero(field);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, Fq)> + '_ {
        self.terms.iter().map(|(&k, &c)| (k, c))
    }

    pub fn coeff(&self, k: i32) -> Fq {
        self.terms.get(&k).copied().unwrap_or(self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(0).is_one()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((c, k))` when this is the single term `c·t^k`.
    pub fn as_monomial(&self) -> Option<(Fq, i32)> {
        if self.terms.len() == 1 {
            let (&k, &c) = self.terms.iter().next().unwrap();
            Some((c, k))
        } else {
            None
        }
    }

    fn add_term(&mut self, k: i32, c: Fq) {
        assert_eq!(c.field(), self.field, "field mismatch");
        if c.is_zero() {
            return;
        }
        let s = self.coeff(k) + c;
        if s.is_zero() {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, s);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (k, c) in o.terms() {
            r.add_term(k, c);
        }
        r
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(&k, &c)| (k, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero(self.field);
        for (k1, c1) in self.terms() {
            for (k2, c2) in o.terms() {
                r.add_term(k1 + k2, c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: Fq) -> Self {
        self.mul(&Self::constant(c))
    }

    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(&e, &c)| (e + k, c)).collect() }
    }

    /// Units of `F[t, t⁻¹]` are the nonzero monomials.
    pub fn inverse(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((c, k)) => Ok(Self::monomial(c.inv()?, -k)),
            None => Err(Error::DivisionByZero),
        }
    }

    /// Coefficientwise map, e.g. Frobenius.
    pub fn map_coeffs(&self, f: impl Fn(Fq) -> Fq) -> Self {
        Self::from_terms(self.field, self.terms().map(|(k, c)| (k, f(c))))
    }

    /// `t ↦ t⁻¹`.
    pub fn invert_variable(&self) -> Self {
        LaurentPoly { field: self.field, terms: self.terms.iter().map(|(&k, &c)| (-k, c)).collect() }
    }

    pub fn is_polynomial(&self) -> bool {
        self.min_degree().is_none_or(|k| k >= 0)
    }

    pub fn is_polynomial_in_inverse(&self) -> bool {
        self.max_degree().is_none_or(|k| k <= 0)
    }

    pub fn within_window(&self, w: i32) -> bool {
        self.terms.keys().all(|k| k.abs() <= w)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{k}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: i32,
    c: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    n: usize,
    entries: Vec<Vec<Vec<TermJson>>>,
}

/// Square matrix over `F[t, t⁻¹]`, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentMatrix {
    n: usize,
    field: Field,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zero(field: Field, n: usize) -> Self {
        LaurentMatrix { n, field, entries: vec![LaurentPoly::zero(field); n * n] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zero(field, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one(field));
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: r, len: row.len(), n });
            }
            for p in row {
                if p.field() != field {
                    return Err(Error::FieldMismatch);
                }
                entries.push(p);
            }
        }
        Ok(LaurentMatrix { n, field, entries })
    }

    /// Constant matrix from field elements.
    pub fn from_constants(field: Field, rows: &[Vec<Fq>]) -> Result<Self> {
        Self::from_rows(field, rows.iter().map(|r| r.iter().map(|&c| LaurentPoly::constant(c)).collect()).collect())
    }

    pub fn diagonal(diag: &[LaurentPoly]) -> Self {
        let field = diag[0].field();
        let mut m = Self::zero(field, diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, r: usize, c: usize) -> &LaurentPoly {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, p: LaurentPoly) {
        self.entries[r * self.n + c] = p;
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut m = Self::zero(self.field, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = LaurentPoly::zero(self.field);
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(o.get(k, j)));
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut m = self.clone();
        for (a, b) in m.entries.iter_mut().zip(&o.entries) {
            *a = a.sub(b);
        }
        m
    }

    pub fn determinant(&self) -> LaurentPoly {
        let g = |r, c| self.get(r, c);
        match self.n {
            1 => g(0, 0).clone(),
            2 => g(0, 0).mul(g(1, 1)).sub(&g(0, 1).mul(g(1, 0))),
            _ => {
                // cofactor expansion along the first row
                let mut acc = LaurentPoly::zero(self.field);
                for c in 0..self.n {
                    let minor = self.minor(0, c);
                    let term = g(0, c).mul(&minor.determinant());
                    acc = if c % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        }
    }

    fn minor(&self, r: usize, c: usize) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                entries.push(self.get(i, j).clone());
            }
        }
        LaurentMatrix { n: n - 1, field: self.field, entries }
    }

    /// Inverse via the adjugate; requires a unit determinant.
    pub fn inverse(&self) -> Result<Self> {
        let det_inv = self.determinant().inverse().map_err(|_| Error::NotUnimodular)?;
        let n = self.n;
        if n == 1 {
            return Ok(LaurentMatrix { n, field: self.field, entries: vec![det_inv] });
        }
        let mut m = Self::zero(self.field, n);
        for i in 0..n {
            for j in 0..n {
                let cof = self.minor(j, i).determinant().mul(&det_inv);
                m.set(i, j, if (i + j) % 2 == 0 { cof } else { cof.neg() });
            }
        }
        Ok(m)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.field, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn map_entries(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        LaurentMatrix { n: self.n, field: self.field, entries: self.entries.iter().map(f).collect() }
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.field, self.n)
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_one()
    }

    pub fn check_unimodular(&self) -> Result<()> {
        if self.is_unimodular() {
            Ok(())
        } else {
            Err(Error::NotUnimodular)
        }
    }

    pub fn within_window(&self, w: i32) -> bool {
        self.entries.iter().all(|p| p.within_window(w))
    }

    pub fn check_window(&self, w: i32) -> Result<()> {
        if self.within_window(w) {
            Ok(())
        } else {
            Err(Error::DegreeWindowExceeded { window: w })
        }
    }

    /// Smallest and largest exponent over all entries.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        let lo = self.entries.iter().filter_map(|p| p.min_degree()).min()?;
        let hi = self.entries.iter().filter_map(|p| p.max_degree()).max()?;
        Some((lo, hi))
    }

    pub fn conjugate(&self, g: &Self) -> Result<Self> {
        Ok(g.mul(self).mul(&g.inverse()?))
    }

    pub fn commutator(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(o).mul(&self.inverse()?).mul(&o.inverse()?))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j).terms().map(|(k, c)| TermJson { k, c: c.to_coeff_vec() }).collect())
                    .collect()
            })
            .collect();
        serde_json::to_value(MatrixJson { n: self.n, entries }).expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value, field: Field) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if raw.entries.len() != raw.n {
            return Err(Error::NotSquare { row: raw.entries.len(), len: raw.entries.len(), n: raw.n });
        }
        let rows = raw
            .entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|terms| {
                        let t = terms
                            .into_iter()
                            .map(|t| Ok((t.k, field.from_coeffs(&t.c)?)))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(LaurentPoly::from_terms(field, t))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(field, rows)
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
