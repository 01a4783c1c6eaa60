//! Coxeter/Weyl group of a generalized Cartan matrix, realized by its exact
//! integral action on the root lattice `Q = Z^n`.
//!
//! Elements are identified by their action matrix. The word attached to an
//! element is always the ShortLex-least reduced word, obtained by repeatedly
//! stripping the smallest left descent.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcm::GeneralizedCartanMatrix;

/// Default cap for ball enumeration.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

/// Order of `s_i s_j`; `None` stands for infinity.
pub type CoxeterOrder = Option<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterMatrix {
    pub n: usize,
    pub m: Vec<Vec<CoxeterOrder>>,
}

impl CoxeterMatrix {
    pub fn get(&self, i: usize, j: usize) -> CoxeterOrder {
        self.m[i][j]
    }

    /// Symmetric, ones on the diagonal, entries at least 2 elsewhere.
    pub fn is_valid(&self) -> bool {
        (0..self.n).all(|i| {
            self.m[i][i] == Some(1)
                && (0..self.n).all(|j| self.m[i][j] == self.m[j][i] && (i == j || self.m[i][j].is_none_or(|x| x >= 2)))
        })
    }

    pub fn is_two_spherical(&self) -> bool {
        self.m.iter().flatten().all(|x| x.is_some())
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.m {
            let cells: Vec<String> =
                row.iter().map(|x| x.map_or_else(|| "inf".to_string(), |v| v.to_string())).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// `m_ij = 2, 3, 4, 6, inf` for `a_ij a_ji = 0, 1, 2, 3, >= 4`.
pub fn coxeter_matrix(a: &GeneralizedCartanMatrix) -> CoxeterMatrix {
    let n = a.rank();
    let m = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return Some(1);
                    }
                    match a.entry(i, j) * a.entry(j, i) {
                        0 => Some(2),
                        1 => Some(3),
                        2 => Some(4),
                        3 => Some(6),
                        _ => None,
                    }
                })
                .collect()
        })
        .collect();
    CoxeterMatrix { n, m }
}

/// Square integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.n).map(|r| self.data[r * self.n..(r + 1) * self.n].to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.n;
        let mut data = vec![0i64; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                if x == 0 {
                    continue;
                }
                for j in 0..n {
                    let y = other.get(k, j);
                    if y == 0 {
                        continue;
                    }
                    let p = x.checked_mul(y).ok_or(Error::Overflow)?;
                    let cell = &mut data[i * n + j];
                    *cell = cell.checked_add(p).ok_or(Error::Overflow)?;
                }
            }
        }
        Ok(IntMatrix { n, data })
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n).try_fold(0i64, |acc, k| {
                    self.get(i, k).checked_mul(v[k]).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut data = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j);
            }
        }
        IntMatrix { n, data }
    }

    pub fn determinant(&self) -> i64 {
        crate::gcm::determinant(&self.to_rows())
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.n)
    }
}

/// Sign of a sign-coherent nonzero vector: `Some(true)` for positive.
pub(crate) fn coherent_sign(v: &[i64]) -> Option<bool> {
    let pos = v.iter().any(|&x| x > 0);
    let neg = v.iter().any(|&x| x < 0);
    match (pos, neg) {
        (true, false) => Some(true),
        (false, true) => Some(false),
        _ => None,
    }
}

fn is_negative(v: &[i64]) -> bool {
    v.iter().any(|&x| x < 0)
}

/// Matrix of `s_i` on `Q`: column `j` is `v_j - a_ij v_i`.
pub fn simple_reflection_action(a: &GeneralizedCartanMatrix, i: usize) -> Result<IntMatrix> {
    let n = a.rank();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    let mut m = IntMatrix::identity(n);
    for j in 0..n {
        m.data[i * n + j] -= a.entry(i, j);
    }
    Ok(m)
}

/// An element of the Weyl group. Equality and hashing use the action matrix.
#[derive(Clone)]
pub struct WeylElement {
    gcm: Arc<GeneralizedCartanMatrix>,
    word: Vec<usize>,
    action: IntMatrix,
    inverse: IntMatrix,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action && *self.gcm == *other.gcm
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.action.hash(state);
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement{:?}", self.word)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.word.iter().map(|i| format!("s{i}")).collect();
        write!(f, "{}", parts.join("·"))
    }
}

#[derive(Serialize)]
struct WordJson<'a> {
    word: &'a [usize],
}

impl Serialize for WeylElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WordJson { word: &self.word }.serialize(s)
    }
}

impl WeylElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    pub fn inverse_action(&self) -> &IntMatrix {
        &self.inverse
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// `w(v)` for `v` in `Q`.
    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { got: v.len(), expected: self.rank() });
        }
        self.action.apply(v)
    }

    pub fn apply_inverse(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { got: v.len(), expected: self.rank() });
        }
        self.inverse.apply(v)
    }

    /// `l(w s_i) < l(w)`, i.e. `w(v_i) < 0`.
    pub fn is_right_descent(&self, i: usize) -> bool {
        is_negative(&self.action.column(i))
    }

    /// `l(s_i w) < l(w)`, i.e. `w^{-1}(v_i) < 0`.
    pub fn is_left_descent(&self, i: usize) -> bool {
        is_negative(&self.inverse.column(i))
    }

    pub fn left_descents(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.is_left_descent(i)).collect()
    }

    pub fn right_descents(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.is_right_descent(i)).collect()
    }

    pub fn inverse(&self) -> WeylElement {
        normalize(self.gcm.clone(), self.inverse.clone(), self.action.clone())
            .expect("inverse of a normalized element normalizes")
    }

    pub fn multiply(&self, other: &WeylElement) -> Result<WeylElement> {
        if self.gcm.rank() != other.gcm.rank() {
            return Err(Error::RankMismatch { left: self.gcm.rank(), right: other.gcm.rank() });
        }
        if *self.gcm != *other.gcm {
            return Err(Error::RankMismatch { left: self.gcm.rank(), right: other.gcm.rank() });
        }
        let action = self.action.mul(&other.action)?;
        let inverse = other.inverse.mul(&self.inverse)?;
        normalize(self.gcm.clone(), action, inverse)
    }

    /// `w * s_i`.
    pub fn times_generator(&self, i: usize) -> Result<WeylElement> {
        let s = simple_reflection_action(&self.gcm, i)?;
        let action = self.action.mul(&s)?;
        let inverse = s.mul(&self.inverse)?;
        normalize(self.gcm.clone(), action, inverse)
    }

    /// `s_i * w`.
    pub fn generator_times(&self, i: usize) -> Result<WeylElement> {
        let s = simple_reflection_action(&self.gcm, i)?;
        let action = s.mul(&self.action)?;
        let inverse = self.inverse.mul(&s)?;
        normalize(self.gcm.clone(), action, inverse)
    }

    pub fn pow(&self, k: u32) -> Result<WeylElement> {
        let mut acc = WeylGroup::identity_for(self.gcm.clone());
        for _ in 0..k {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }
}

/// Strips smallest left descents until the identity is reached. The stripped
/// letters form the ShortLex-least reduced word.
fn normalize(gcm: Arc<GeneralizedCartanMatrix>, action: IntMatrix, inverse: IntMatrix) -> Result<WeylElement> {
    let n = gcm.rank();
    let mut word = Vec::new();
    let mut m = action.clone();
    let mut minv = inverse.clone();
    let refl: Vec<IntMatrix> = (0..n).map(|i| simple_reflection_action(&gcm, i)).collect::<Result<_>>()?;
    loop {
        match (0..n).find(|&i| is_negative(&minv.column(i))) {
            None => break,
            Some(i) => {
                word.push(i);
                m = refl[i].mul(&m)?;
                minv = minv.mul(&refl[i])?;
            }
        }
    }
    debug_assert!(m.is_identity());
    Ok(WeylElement { gcm, word, action, inverse })
}

/// Convenience handle bundling a GCM with its Weyl group operations.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    gcm: Arc<GeneralizedCartanMatrix>,
    reflections: Vec<IntMatrix>,
    cap: usize,
}

impl WeylGroup {
    pub fn new(gcm: &GeneralizedCartanMatrix) -> Self {
        let reflections = (0..gcm.rank()).map(|i| simple_reflection_action(gcm, i).unwrap()).collect();
        WeylGroup { gcm: Arc::new(gcm.clone()), reflections, cap: DEFAULT_BALL_CAP }
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn gcm(&self) -> &GeneralizedCartanMatrix {
        &self.gcm
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coxeter_matrix(&self) -> CoxeterMatrix {
        coxeter_matrix(&self.gcm)
    }

    fn identity_for(gcm: Arc<GeneralizedCartanMatrix>) -> WeylElement {
        let n = gcm.rank();
        WeylElement { gcm, word: vec![], action: IntMatrix::identity(n), inverse: IntMatrix::identity(n) }
    }

    pub fn identity(&self) -> WeylElement {
        Self::identity_for(self.gcm.clone())
    }

    pub fn generator(&self, i: usize) -> Result<WeylElement> {
        self.element(&[i])
    }

    /// The element represented by an arbitrary word.
    pub fn element(&self, word: &[usize]) -> Result<WeylElement> {
        let n = self.rank();
        let mut action = IntMatrix::identity(n);
        let mut inverse = IntMatrix::identity(n);
        for &i in word {
            let s = self.reflections.get(i).ok_or(Error::IndexOutOfRange { index: i, rank: n })?;
            action = action.mul(s)?;
            inverse = s.mul(&inverse)?;
        }
        normalize(self.gcm.clone(), action, inverse)
    }

    pub fn length(&self, w: &WeylElement) -> usize {
        w.length()
    }

    /// Reducedness by the descent criterion: each appended letter must be an
    /// ascent of the prefix read so far.
    pub fn is_reduced(&self, word: &[usize]) -> Result<bool> {
        let n = self.rank();
        let mut prefix = IntMatrix::identity(n);
        for &i in word {
            let s = self.reflections.get(i).ok_or(Error::IndexOutOfRange { index: i, rank: n })?;
            if is_negative(&prefix.column(i)) {
                return Ok(false);
            }
            prefix = prefix.mul(s)?;
        }
        Ok(true)
    }

    /// All elements of length at most `max_len`, in (length, ShortLex) order.
    pub fn enumerate_ball(&self, max_len: usize) -> Result<Vec<WeylElement>> {
        self.enumerate_ball_in(max_len, &(0..self.rank()).collect::<Vec<_>>())
    }

    /// Ball of the standard parabolic subgroup generated by `gens`.
    pub fn enumerate_ball_in(&self, max_len: usize, gens: &[usize]) -> Result<Vec<WeylElement>> {
        let n = self.rank();
        for &g in gens {
            if g >= n {
                return Err(Error::IndexOutOfRange { index: g, rank: n });
            }
        }
        let mut gens = gens.to_vec();
        gens.sort_unstable();
        gens.dedup();
        let mut all = vec![self.identity()];
        let mut layer = vec![self.identity()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &i in &gens {
                    if w.is_left_descent(i) {
                        continue;
                    }
                    // i must become the smallest left descent of s_i w
                    let s = &self.reflections[i];
                    let inverse = w.inverse.mul(s)?;
                    if gens.iter().take_while(|&&j| j < i).any(|&j| is_negative(&inverse.column(j))) {
                        continue;
                    }
                    let action = s.mul(&w.action)?;
                    let mut word = Vec::with_capacity(w.word.len() + 1);
                    word.push(i);
                    word.extend_from_slice(&w.word);
                    next.push(WeylElement { gcm: self.gcm.clone(), word, action, inverse });
                    if all.len() + next.len() > self.cap {
                        return Err(Error::ExplosionGuard { cap: self.cap });
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            next.sort_by(|a, b| a.word.cmp(&b.word));
            all.extend(next.iter().cloned());
            layer = next;
        }
        Ok(all)
    }

    /// Closure of a finite parabolic subgroup; fails with `NotSpherical` when
    /// the cap is hit.
    pub fn parabolic_closure(&self, gens: &[usize], cap: usize) -> Result<Vec<WeylElement>> {
        // longest elements of finite Weyl groups of rank k have length <= max(k^2, 120) (E8)
        let bound = (gens.len() * gens.len()).max(120) + 1;
        let capped = self.clone().with_cap(cap);
        let ball = capped.enumerate_ball_in(bound, gens).map_err(|_| Error::NotSpherical(gens.to_vec()))?;
        let top = ball.last().map_or(0, |w| w.length());
        if top >= bound {
            return Err(Error::NotSpherical(gens.to_vec()));
        }
        Ok(ball)
    }

    /// Longest element of a finite standard parabolic subgroup.
    pub fn longest_element(&self, gens: &[usize]) -> Result<WeylElement> {
        let all = self.parabolic_closure(gens, 100_000)?;
        Ok(all.last().cloned().expect("nonempty"))
    }

    /// Order of an element by iterating its action, `None` when the cap is reached.
    pub fn order(&self, w: &WeylElement, cap: u32) -> Result<Option<u32>> {
        let mut acc = w.action.clone();
        for k in 1..=cap {
            if acc.is_identity() {
                return Ok(Some(k));
            }
            acc = acc.mul(&w.action)?;
        }
        Ok(None)
    }
}
