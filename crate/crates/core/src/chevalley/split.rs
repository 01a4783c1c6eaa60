//! `SL_n` over `F[t, t⁻¹]` (affine type) or over `F` (finite type), `n ∈ {2, 3}`.
//!
//! Simple roots of the affine group are `(i, i+1, 0)` for `i < n-1` and the
//! affine root `(n-1, 0, 1)`. The affine root `(i, j, k)` is `e_i - e_j + kδ`
//! and its root group is `r ↦ I + r·t^k·E_ij`.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::gcm::GeneralizedCartanMatrix;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::roots::RootVector;
use crate::weyl::WeylElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct AffineRoot {
    pub i: usize,
    pub j: usize,
    pub k: i32,
}

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.i, self.j, self.k)
    }
}

impl AffineRoot {
    pub fn new(n: usize, i: usize, j: usize, k: i32) -> Result<Self> {
        if i == j || i >= n || j >= n {
            return Err(Error::BadRoot(format!("({i},{j},{k}) for n = {n}")));
        }
        Ok(AffineRoot { i, j, k })
    }

    pub fn is_positive(&self) -> bool {
        self.k > 0 || (self.k == 0 && self.i < self.j)
    }

    pub fn neg(&self) -> Self {
        AffineRoot { i: self.j, j: self.i, k: -self.k }
    }

    /// Coordinates over the simple roots; `affine` selects affine `A_{n-1}`
    /// (rank `n`) or finite `A_{n-1}` (rank `n-1`).
    pub fn to_root_vector(&self, n: usize, affine: bool) -> RootVector {
        let rank = if affine { n } else { n - 1 };
        let mut c = vec![if affine { self.k as i64 } else { 0 }; rank];
        let (lo, hi, sign) = if self.i < self.j { (self.i, self.j, 1) } else { (self.j, self.i, -1) };
        for x in &mut c[lo..hi] {
            *x += sign;
        }
        RootVector(c)
    }

    pub fn from_root_vector(v: &RootVector, n: usize, affine: bool) -> Result<Self> {
        let bad = || Error::BadRoot(format!("{v} is not a real root of type A{}", n - 1));
        let c = v.coords();
        if !affine {
            if c.len() != n - 1 {
                return Err(bad());
            }
            let mut ext = c.to_vec();
            ext.push(0);
            return Self::from_levels(&ext, n, 0).ok_or_else(bad);
        }
        if c.len() != n {
            return Err(bad());
        }
        let m = *c.iter().min().unwrap();
        let top = *c.iter().max().unwrap();
        if top != m + 1 {
            return Err(bad());
        }
        // top-valued positions avoid n-1 exactly when i < j
        if c[n - 1] == m {
            let shifted: Vec<i64> = c.iter().map(|x| x - m).collect();
            Self::from_levels(&shifted, n, m as i32).ok_or_else(bad)
        } else {
            let shifted: Vec<i64> = c.iter().map(|x| x - top).collect();
            Self::from_levels(&shifted, n, top as i32).ok_or_else(bad)
        }
    }

    /// `c` is `±` the indicator of a contiguous interval `[lo, hi)` with `hi <= n-1`.
    fn from_levels(c: &[i64], n: usize, k: i32) -> Option<Self> {
        let nz: Vec<usize> = (0..c.len()).filter(|&x| c[x] != 0).collect();
        let (&lo, &last) = (nz.first()?, nz.last()?);
        let sign = c[lo];
        if sign.abs() != 1 || last - lo + 1 != nz.len() || nz.iter().any(|&x| c[x] != sign) {
            return None;
        }
        let hi = last + 1;
        if hi > n - 1 {
            return None;
        }
        if sign > 0 {
            Some(AffineRoot { i: lo, j: hi, k })
        } else {
            Some(AffineRoot { i: hi, j: lo, k })
        }
    }
}

/// `SL_n(F[t, t⁻¹])` or `SL_n(F)` with its standard twin root datum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitGroup {
    pub n: usize,
    pub field: Field,
    pub affine: bool,
}

impl fmt::Display for SplitGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.affine {
            write!(f, "SL{}({}[t,t^-1])", self.n, self.field)
        } else {
            write!(f, "SL{}({})", self.n, self.field)
        }
    }
}

impl SplitGroup {
    pub fn loop_group(n: usize, field: Field) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::RankMismatch { left: n, right: 3 });
        }
        Ok(SplitGroup { n, field, affine: true })
    }

    pub fn finite(n: usize, field: Field) -> Result<Self> {
        if !(2..=3).contains(&n) {
            return Err(Error::RankMismatch { left: n, right: 3 });
        }
        Ok(SplitGroup { n, field, affine: false })
    }

    pub fn gcm(&self) -> GeneralizedCartanMatrix {
        if self.affine {
            GeneralizedCartanMatrix::affine_a(self.n)
        } else {
            GeneralizedCartanMatrix::finite_a(self.n)
        }
    }

    pub fn rank(&self) -> usize {
        if self.affine {
            self.n
        } else {
            self.n - 1
        }
    }

    pub fn simple_root(&self, a: usize) -> Result<AffineRoot> {
        if a >= self.rank() {
            return Err(Error::IndexOutOfRange { index: a, rank: self.rank() });
        }
        if a + 1 < self.n {
            Ok(AffineRoot { i: a, j: a + 1, k: 0 })
        } else {
            Ok(AffineRoot { i: self.n - 1, j: 0, k: 1 })
        }
    }

    pub fn check_root(&self, root: &AffineRoot) -> Result<()> {
        AffineRoot::new(self.n, root.i, root.j, root.k)?;
        if !self.affine && root.k != 0 {
            return Err(Error::BadRoot(format!("{root} in a finite group")));
        }
        Ok(())
    }

    pub fn root_of(&self, v: &RootVector) -> Result<AffineRoot> {
        AffineRoot::from_root_vector(v, self.n, self.affine)
    }

    pub fn root_vector(&self, root: &AffineRoot) -> RootVector {
        root.to_root_vector(self.n, self.affine)
    }

    pub fn identity(&self) -> LaurentMatrix {
        LaurentMatrix::identity(self.field, self.n)
    }

    /// Product of `steps` random root elements with `|k| <= 1` (`k = 0` in
    /// finite type).
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, steps: usize) -> LaurentMatrix {
        let mut g = self.identity();
        for _ in 0..steps {
            let i = rng.gen_range(0..self.n);
            let j = (i + rng.gen_range(1..self.n)) % self.n;
            let k = if self.affine { rng.gen_range(-1..=1) } else { 0 };
            let root = AffineRoot { i, j, k };
            g = g.mul(&self.root_element(&root, self.field.random(rng)).expect("valid root"));
        }
        g
    }

    /// `I + r·t^k·E_ij`.
    pub fn root_element(&self, root: &AffineRoot, r: Fq) -> Result<LaurentMatrix> {
        self.check_root(root)?;
        if r.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let mut m = self.identity();
        m.set(root.i, root.j, LaurentPoly::monomial(r, root.k));
        Ok(m)
    }

    /// The parameter `r` with `g = u_root(r)`, if any.
    pub fn root_parameter(&self, root: &AffineRoot, g: &LaurentMatrix) -> Option<Fq> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let p = g.get(i, j);
                if i == j {
                    if !p.is_one() {
                        return None;
                    }
                } else if (i, j) != (root.i, root.j) && !p.is_zero() {
                    return None;
                }
            }
        }
        let p = g.get(root.i, root.j);
        if p.is_zero() {
            return Some(self.field.zero());
        }
        match p.as_monomial() {
            Some((c, k)) if k == root.k => Some(c),
            _ => None,
        }
    }

    pub fn root_group(&self, root: &AffineRoot) -> Result<Vec<LaurentMatrix>> {
        self.field.elements().into_iter().map(|r| self.root_element(root, r)).collect()
    }

    pub fn torus_element(&self, diag: &[Fq]) -> Result<LaurentMatrix> {
        if diag.len() != self.n {
            return Err(Error::DimensionMismatch { got: diag.len(), expected: self.n });
        }
        let polys: Vec<LaurentPoly> = diag.iter().map(|&c| LaurentPoly::constant(c)).collect();
        let m = LaurentMatrix::diagonal(&polys);
        m.check_unimodular()?;
        Ok(m)
    }

    /// All constant diagonal matrices of determinant one.
    pub fn torus(&self) -> Vec<LaurentMatrix> {
        let units = self.field.nonzero();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.n - 1];
        loop {
            let mut diag: Vec<Fq> = idx.iter().map(|&i| units[i]).collect();
            let prod = diag.iter().fold(self.field.one(), |a, &b| a * b);
            diag.push(prod.inv().expect("unit"));
            out.push(self.torus_element(&diag).expect("det one"));
            let mut p = 0;
            loop {
                if p == idx.len() {
                    return out;
                }
                idx[p] += 1;
                if idx[p] < units.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    pub fn is_torus(&self, g: &LaurentMatrix) -> bool {
        g.size() == self.n
            && (0..self.n).all(|i| {
                (0..self.n).all(|j| {
                    let p = g.get(i, j);
                    if i == j {
                        p.as_monomial().is_some_and(|(_, k)| k == 0)
                    } else {
                        p.is_zero()
                    }
                })
            })
            && g.is_unimodular()
    }

    /// `h·u_root(r)·h⁻¹ = u_root(χ(h)·r)` with `χ(h) = h_i / h_j`.
    pub fn character(&self, root: &AffineRoot, h: &LaurentMatrix) -> Result<Fq> {
        let hi = h.get(root.i, root.i).coeff(0);
        let hj = h.get(root.j, root.j).coeff(0);
        hi.div(hj)
    }

    /// `u_{-α}(-r⁻¹)·u_α(r)·u_{-α}(-r⁻¹)`.
    pub fn mu(&self, root: &AffineRoot, r: Fq) -> Result<LaurentMatrix> {
        if r.is_zero() {
            return Err(Error::TrivialElement);
        }
        let side = self.root_element(&root.neg(), -r.inv()?)?;
        Ok(side.mul(&self.root_element(root, r)?).mul(&side))
    }

    /// `ṡ_a = m(u_{α_a}(1))`.
    pub fn representative(&self, a: usize) -> Result<LaurentMatrix> {
        self.mu(&self.simple_root(a)?, self.field.one())
    }

    /// Product of the simple representatives along the canonical word.
    pub fn weyl_representative(&self, w: &WeylElement) -> Result<LaurentMatrix> {
        let mut m = self.identity();
        for &a in w.word() {
            m = m.mul(&self.representative(a)?);
        }
        Ok(m)
    }

    /// `SL_n(F[t])` with upper triangular constant term.
    pub fn in_b_plus(&self, g: &LaurentMatrix) -> bool {
        triangular_at(g, true, false) && g.is_unimodular()
    }

    pub fn in_u_plus(&self, g: &LaurentMatrix) -> bool {
        triangular_at(g, true, true)
    }

    /// `SL_n(F[t⁻¹])` with lower triangular value at infinity.
    pub fn in_b_minus(&self, g: &LaurentMatrix) -> bool {
        triangular_at(&g.map_entries(|p| p.invert_variable()), false, false) && g.is_unimodular()
    }

    pub fn in_u_minus(&self, g: &LaurentMatrix) -> bool {
        triangular_at(&g.map_entries(|p| p.invert_variable()), false, true)
    }

    /// `ψ(g) = J·g(t⁻¹)·J` with `J` the antidiagonal of ones; `ψ(B_-) = B_+`.
    pub fn flip(&self, g: &LaurentMatrix) -> LaurentMatrix {
        let n = self.n;
        let mut m = LaurentMatrix::zero(self.field, n);
        for i in 0..n {
            for j in 0..n {
                m.set(n - 1 - i, n - 1 - j, g.get(i, j).invert_variable());
            }
        }
        m
    }
}

/// Entries are polynomials in `t` whose constant term is upper (or lower)
/// triangular, optionally unipotent.
fn triangular_at(g: &LaurentMatrix, upper: bool, unipotent: bool) -> bool {
    let n = g.size();
    for i in 0..n {
        for j in 0..n {
            let p = g.get(i, j);
            if !p.is_polynomial() {
                return false;
            }
            let c0 = p.coeff(0);
            let below = if upper { i > j } else { i < j };
            if below && !c0.is_zero() {
                return false;
            }
            if unipotent && i == j && !c0.is_one() {
                return false;
            }
        }
    }
    true
}
