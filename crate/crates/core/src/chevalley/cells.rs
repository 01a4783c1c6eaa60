//! Bruhat and Birkhoff cells of `SL_n(F[t, t⁻¹])`.
//!
//! A matrix `g` is unrolled into the periodic `Z × Z` matrix whose entry at
//! `(i + n·m, j + n·(m + k))` is the coefficient of `t^k` in `g_ij`. Under
//! this embedding `B_+` becomes upper triangular and `B_-` lower triangular,
//! so the cell of `g` is read off from rank conditions on corner submatrices
//! and encoded as an affine permutation.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::laurent::{LaurentMatrix, DEFAULT_WINDOW};
use crate::weyl::{WeylElement, WeylGroup};

use super::split::SplitGroup;

/// Window notation `[π(0), …, π(n-1)]` of a bijection `π: Z → Z` with
/// `π(a + n) = π(a) + n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffinePermutation(pub Vec<i64>);

impl AffinePermutation {
    pub fn n(&self) -> i64 {
        self.0.len() as i64
    }

    pub fn eval(&self, a: i64) -> i64 {
        let n = self.n();
        self.0[a.rem_euclid(n) as usize] + n * a.div_euclid(n)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        AffinePermutation((0..self.n()).map(|a| self.eval(other.eval(a))).collect())
    }

    /// Bijective on residues with window sum `0 + … + (n-1)`.
    pub fn is_valid(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n as usize];
        for &x in &self.0 {
            let r = x.rem_euclid(n) as usize;
            if seen[r] {
                return false;
            }
            seen[r] = true;
        }
        let sum: i64 = self.0.iter().sum();
        sum == n * (n - 1) / 2
    }

    /// `#{(a, b) : 0 <= a < n, a < b, π(a) > π(b)}`.
    pub fn length(&self) -> usize {
        let n = self.n();
        let d = (0..n).map(|a| (self.eval(a) - a).abs()).max().unwrap_or(0) + n;
        let mut count = 0;
        for a in 0..n {
            let pa = self.eval(a);
            for b in a + 1..=pa + d {
                if self.eval(b) < pa {
                    count += 1;
                }
            }
        }
        count
    }
}

fn periodic_row(g: &LaurentMatrix, a: i64) -> Vec<(i64, Fq)> {
    let n = g.size() as i64;
    let (i, m) = (a.rem_euclid(n) as usize, a.div_euclid(n));
    let mut out = Vec::new();
    for j in 0..g.size() {
        for (k, c) in g.get(i, j).terms() {
            out.push((j as i64 + n * (m + k as i64), c));
        }
    }
    out
}

/// Echelon basis keyed by pivot column; `leftmost` selects the pivot side.
struct Echelon {
    leftmost: bool,
    basis: HashMap<usize, Vec<Fq>>,
}

impl Echelon {
    fn pivot(&self, v: &[Fq]) -> Option<usize> {
        if self.leftmost {
            v.iter().position(|x| !x.is_zero())
        } else {
            v.iter().rposition(|x| !x.is_zero())
        }
    }

    /// Reduces `v` against the basis, inserts it and returns its pivot.
    fn insert(&mut self, mut v: Vec<Fq>) -> Option<usize> {
        loop {
            let p = self.pivot(&v)?;
            match self.basis.get(&p) {
                Some(b) => {
                    let c = v[p];
                    for (x, y) in v.iter_mut().zip(b) {
                        if !y.is_zero() {
                            *x = *x - c * *y;
                        }
                    }
                }
                None => {
                    let inv = v[p].inv().expect("nonzero pivot");
                    for x in v.iter_mut() {
                        *x = *x * inv;
                    }
                    self.basis.insert(p, v);
                    return Some(p);
                }
            }
        }
    }
}

const MAX_DOUBLINGS: u32 = 8;

/// Affine permutation `π` with `g ∈ B_+ π B_+`: `π(p)` is the leftmost
/// column at which row `p` becomes independent of the rows below it.
pub fn bruhat_permutation(g: &LaurentMatrix) -> Result<AffinePermutation> {
    let n = g.size() as i64;
    let (kmin, kmax) = g.degree_range().map(|(a, b)| (a as i64, b as i64)).ok_or(Error::NotUnimodular)?;
    let mut slack = n;
    for _ in 0..MAX_DOUBLINGS {
        let cmax = (n - 1) + n * kmax + slack;
        let cmin = -(n - 1) + n * kmin;
        let rmax = cmax + (n - 1) - n * kmin;
        let width = (cmax - cmin + 1) as usize;
        let mut ech = Echelon { leftmost: true, basis: HashMap::new() };
        let mut found = vec![None; n as usize];
        for a in (0..=rmax).rev() {
            let mut v = vec![g.field().zero(); width];
            for (c, x) in periodic_row(g, a) {
                if c <= cmax {
                    v[(c - cmin) as usize] = x;
                }
            }
            let p = ech.insert(v);
            if a < n {
                found[a as usize] = p.map(|p| p as i64 + cmin);
            }
        }
        if let Some(win) = found.into_iter().collect::<Option<Vec<i64>>>() {
            let pi = AffinePermutation(win);
            if pi.is_valid() {
                return Ok(pi);
            }
            return Err(Error::NotUnimodular);
        }
        slack *= 2;
    }
    Err(Error::OracleInconsistent("Bruhat window did not close".into()))
}

fn birkhoff_attempt(g: &LaurentMatrix, rows: i64, kmin: i64, kmax: i64) -> Option<AffinePermutation> {
    let n = g.size() as i64;
    let cmin = -(n - 1) + n * kmin;
    let cmax = rows + (n - 1) + n * kmax;
    let width = (cmax - cmin + 1) as usize;
    let mut ech = Echelon { leftmost: false, basis: HashMap::new() };
    let mut found = vec![None; n as usize];
    for a in (0..=rows).rev() {
        let mut v = vec![g.field().zero(); width];
        for (c, x) in periodic_row(g, a) {
            v[(c - cmin) as usize] = x;
        }
        let p = ech.insert(v);
        if a < n {
            found[a as usize] = p.map(|p| p as i64 + cmin);
        }
    }
    found.into_iter().collect::<Option<Vec<i64>>>().map(AffinePermutation)
}

/// Affine permutation `π` with `g ∈ B_+ π B_-`: `π(p)` is the rightmost
/// column at which row `p` is independent of the rows below it. The row
/// window grows until two successive answers agree.
pub fn birkhoff_permutation(g: &LaurentMatrix) -> Result<AffinePermutation> {
    let n = g.size() as i64;
    let (kmin, kmax) = g.degree_range().map(|(a, b)| (a as i64, b as i64)).ok_or(Error::NotUnimodular)?;
    let mut rows = 2 * n * (kmax - kmin + 2);
    let mut prev = birkhoff_attempt(g, rows, kmin, kmax);
    for _ in 0..MAX_DOUBLINGS {
        rows *= 2;
        let next = birkhoff_attempt(g, rows, kmin, kmax);
        if let (Some(a), Some(b)) = (&prev, &next) {
            if a == b && a.is_valid() {
                return Ok(b.clone());
            }
        }
        prev = next;
    }
    Err(Error::OracleInconsistent("Birkhoff window did not stabilize".into()))
}

/// Dictionary between affine permutations and Weyl elements of a split group.
#[derive(Debug, Clone)]
pub struct CellEngine {
    pub group: SplitGroup,
    weyl: WeylGroup,
    gens: Vec<AffinePermutation>,
    reps: Vec<LaurentMatrix>,
    reps_inv: Vec<LaurentMatrix>,
}

/// `g = b1·ẇ·b2` with `b1, b2 ∈ B_+` and `ẇ` the canonical representative.
#[derive(Debug, Clone, Serialize)]
pub struct BruhatDecomposition {
    pub w: WeylElement,
    #[serde(skip)]
    pub b1: LaurentMatrix,
    #[serde(skip)]
    pub w_dot: LaurentMatrix,
    #[serde(skip)]
    pub b2: LaurentMatrix,
    /// `(generator, parameter)` per step of the descent chain.
    pub steps: Vec<(usize, Fq)>,
}

impl CellEngine {
    pub fn new(group: SplitGroup) -> Result<Self> {
        let weyl = WeylGroup::new(&group.gcm());
        let reps: Vec<LaurentMatrix> = (0..group.rank()).map(|a| group.representative(a)).collect::<Result<_>>()?;
        let reps_inv = reps.iter().map(|r| r.inverse()).collect::<Result<_>>()?;
        let gens = reps.iter().map(bruhat_permutation).collect::<Result<_>>()?;
        Ok(CellEngine { group, weyl, gens, reps, reps_inv })
    }

    pub fn weyl(&self) -> &WeylGroup {
        &self.weyl
    }

    pub fn representative(&self, a: usize) -> &LaurentMatrix {
        &self.reps[a]
    }

    pub fn representative_inverse(&self, a: usize) -> &LaurentMatrix {
        &self.reps_inv[a]
    }

    pub fn weyl_representative(&self, w: &WeylElement) -> LaurentMatrix {
        w.word().iter().fold(self.group.identity(), |m, &a| m.mul(&self.reps[a]))
    }

    /// Left multiplication by `s_a` on the permutation side.
    fn left(&self, pi: &AffinePermutation, a: usize) -> AffinePermutation {
        pi.compose(&self.gens[a])
    }

    pub fn left_descents(&self, pi: &AffinePermutation) -> Vec<usize> {
        let l = pi.length();
        (0..self.gens.len()).filter(|&a| self.left(pi, a).length() < l).collect()
    }

    pub fn weyl_element(&self, pi: &AffinePermutation) -> Result<WeylElement> {
        let mut word = Vec::new();
        let mut cur = pi.clone();
        while cur.length() > 0 {
            let a = *self
                .left_descents(&cur)
                .first()
                .ok_or_else(|| Error::OracleInconsistent(format!("{cur:?} has no descent")))?;
            word.push(a);
            cur = self.left(&cur, a);
        }
        if cur.0 != (0..cur.n()).collect::<Vec<_>>() {
            return Err(Error::OracleInconsistent(format!("{pi:?} is not in the Weyl group")));
        }
        self.weyl.element(&word)
    }

    fn check_input(&self, g: &LaurentMatrix, window: i32) -> Result<()> {
        if g.size() != self.group.n || g.field() != self.group.field {
            return Err(Error::RankMismatch { left: g.size(), right: self.group.n });
        }
        g.check_unimodular()?;
        g.check_window(window)
    }

    /// Peels `u_a(r)·ṡ_a` off the left while the Bruhat length drops.
    /// Returns the chain and the residual element of `B_+`.
    fn descent_chain(
        &self,
        g: &LaurentMatrix,
        mut choose: impl FnMut(&[usize]) -> usize,
    ) -> Result<(Vec<(usize, Fq)>, LaurentMatrix)> {
        let mut x = g.clone();
        let mut pi = bruhat_permutation(&x)?;
        let mut steps = Vec::new();
        while pi.length() > 0 {
            let desc = self.left_descents(&pi);
            let a = desc[choose(&desc)];
            let target = self.left(&pi, a);
            let root = self.group.simple_root(a)?;
            let mut next = None;
            for r in self.group.field.elements() {
                let u = self.group.root_element(&root, -r)?;
                let cand = self.reps_inv[a].mul(&u.mul(&x));
                if bruhat_permutation(&cand)? == target {
                    next = Some((r, cand));
                    break;
                }
            }
            let (r, cand) =
                next.ok_or_else(|| Error::OracleInconsistent(format!("no root-group parameter peels s{a}")))?;
            steps.push((a, r));
            x = cand;
            pi = target;
        }
        if !self.group.in_b_plus(&x) {
            return Err(Error::OracleInconsistent("descent residual is not in B+".into()));
        }
        Ok((steps, x))
    }

    fn assemble(&self, g: &LaurentMatrix, steps: Vec<(usize, Fq)>, b2: LaurentMatrix) -> Result<BruhatDecomposition> {
        let word: Vec<usize> = steps.iter().map(|s| s.0).collect();
        let w = self.weyl.element(&word)?;
        let mut prefix = self.group.identity();
        let mut w_raw = self.group.identity();
        for &(a, r) in &steps {
            prefix = prefix.mul(&self.group.root_element(&self.group.simple_root(a)?, r)?).mul(&self.reps[a]);
            w_raw = w_raw.mul(&self.reps[a]);
        }
        let w_dot = self.weyl_representative(&w);
        // the chain word may differ from the canonical word by braid moves, which
        // change the representative by a torus element absorbed into b2
        let b2 = w_dot.inverse()?.mul(&w_raw).mul(&b2);
        let b1 = prefix.mul(&w_raw.inverse()?);
        if !self.group.in_b_plus(&b1) || !self.group.in_b_plus(&b2) || b1.mul(&w_dot).mul(&b2) != *g {
            return Err(Error::OracleInconsistent("Bruhat reconstruction failed".into()));
        }
        Ok(BruhatDecomposition { w, b1, w_dot, b2, steps })
    }

    /// Decomposition along the chain of smallest left descents.
    pub fn bruhat_cell(&self, g: &LaurentMatrix, window: i32) -> Result<BruhatDecomposition> {
        self.check_input(g, window)?;
        let (steps, b2) = self.descent_chain(g, |_| 0)?;
        self.assemble(g, steps, b2)
    }

    /// Same decomposition with descents chosen at random.
    pub fn bruhat_cell_randomized<R: Rng>(
        &self,
        g: &LaurentMatrix,
        window: i32,
        rng: &mut R,
    ) -> Result<BruhatDecomposition> {
        self.check_input(g, window)?;
        let (steps, b2) = self.descent_chain(g, |d| {
            let idx: Vec<usize> = (0..d.len()).collect();
            *idx.choose(rng).expect("nonempty")
        })?;
        self.assemble(g, steps, b2)
    }

    pub fn birkhoff_cell(&self, g: &LaurentMatrix, window: i32) -> Result<WeylElement> {
        self.check_input(g, window)?;
        self.weyl_element(&birkhoff_permutation(g)?)
    }

    /// Birkhoff cell without the window check, for internally generated products.
    pub fn birkhoff_cell_unbounded(&self, g: &LaurentMatrix) -> Result<WeylElement> {
        g.check_unimodular()?;
        self.weyl_element(&birkhoff_permutation(g)?)
    }

    /// Canonical name of the coset `g·B_+`: smallest-descent chain words and
    /// parameters, which do not depend on the representative.
    pub fn chamber_key(&self, g: &LaurentMatrix) -> Result<Vec<(usize, Fq)>> {
        Ok(self.descent_chain(g, |_| 0)?.0)
    }

    /// Canonical name of `g·B_-`, via the flip exchanging `B_-` and `B_+`.
    pub fn minus_chamber_key(&self, g: &LaurentMatrix) -> Result<Vec<(usize, Fq)>> {
        self.chamber_key(&self.group.flip(g))
    }
}

pub fn default_window() -> i32 {
    DEFAULT_WINDOW
}
