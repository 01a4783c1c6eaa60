//! Real roots of a generalized Cartan matrix, viewed both as vectors in `Q`
//! and as half-spaces of the Coxeter complex.
//!
//! A chamber is a Weyl element `c`; it lies in the half-space of `α` when
//! `c⁻¹·α` is positive. All chamber searches run over the Weyl ball of a
//! configurable radius and report [`Error::Undecided`] when it is exhausted.

use std::collections::HashSet;
use std::fmt;
use std::sync::OnceLock;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcm::GeneralizedCartanMatrix;
use crate::weyl::{coherent_sign, WeylElement, WeylGroup};

pub const DEFAULT_SEARCH_RADIUS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RootVector(pub Vec<i64>);

impl RootVector {
    pub fn simple(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        RootVector(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        RootVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn height(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Index `i` if this is `±v_i`.
    pub fn simple_index(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..self.0.len()).filter(|&i| self.0[i] != 0).collect();
        match nz.as_slice() {
            [i] if self.0[*i].abs() == 1 => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `true` for positive roots. Mixed or zero vectors are rejected.
pub fn is_positive(alpha: &RootVector) -> Result<bool> {
    coherent_sign(&alpha.0).ok_or_else(|| Error::MixedSign(alpha.0.clone()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootInterval {
    pub alpha: RootVector,
    pub beta: RootVector,
    pub members: Vec<RootVector>,
}

impl RootInterval {
    pub fn contains(&self, gamma: &RootVector) -> bool {
        self.members.contains(gamma)
    }

    /// `(α, β)`.
    pub fn open(&self) -> Vec<RootVector> {
        self.members.iter().filter(|g| **g != self.alpha && **g != self.beta).cloned().collect()
    }

    /// `[α, β)`.
    pub fn half_open_right(&self) -> Vec<RootVector> {
        self.members.iter().filter(|g| **g != self.beta).cloned().collect()
    }

    /// `(α, β]`.
    pub fn half_open_left(&self) -> Vec<RootVector> {
        self.members.iter().filter(|g| **g != self.alpha).cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NibblingSequence {
    pub roots: Vec<RootVector>,
}

/// Decomposition `α = ε·w(v_i)` with `w` of minimal length found by height descent.
#[derive(Debug, Clone)]
pub struct RootWitness {
    pub w: WeylElement,
    pub index: usize,
    pub positive: bool,
}

#[derive(Debug)]
pub struct RootSystem {
    group: WeylGroup,
    radius: usize,
    ball: OnceLock<Result<Vec<WeylElement>>>,
}

impl Clone for RootSystem {
    fn clone(&self) -> Self {
        RootSystem { group: self.group.clone(), radius: self.radius, ball: OnceLock::new() }
    }
}

impl RootSystem {
    pub fn new(gcm: &GeneralizedCartanMatrix) -> Self {
        Self::with_radius(gcm, DEFAULT_SEARCH_RADIUS)
    }

    pub fn with_radius(gcm: &GeneralizedCartanMatrix, radius: usize) -> Self {
        RootSystem { group: WeylGroup::new(gcm), radius, ball: OnceLock::new() }
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.group.rank()
    }

    pub fn search_radius(&self) -> usize {
        self.radius
    }

    pub fn simple(&self, i: usize) -> Result<RootVector> {
        let n = self.rank();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, rank: n });
        }
        Ok(RootVector::simple(n, i))
    }

    fn chambers(&self) -> Result<&[WeylElement]> {
        self.ball
            .get_or_init(|| self.group.enumerate_ball(self.radius))
            .as_ref()
            .map(|v| v.as_slice())
            .map_err(|e| e.clone())
    }

    fn check_rank(&self, alpha: &RootVector) -> Result<()> {
        if alpha.rank() != self.rank() {
            return Err(Error::RankMismatch { left: alpha.rank(), right: self.rank() });
        }
        Ok(())
    }

    /// Height descent to a simple root; fails on vectors outside the real roots.
    pub fn witness(&self, alpha: &RootVector) -> Result<RootWitness> {
        self.check_rank(alpha)?;
        let positive = is_positive(alpha)?;
        let a = self.group.gcm();
        let n = self.rank();
        let mut v: Vec<i64> = if positive { alpha.0.clone() } else { alpha.neg().0 };
        let mut word = Vec::new();
        loop {
            if let Some(i) = RootVector(v.clone()).simple_index() {
                let w = self.group.element(&word)?;
                return Ok(RootWitness { w, index: i, positive });
            }
            let pick = (0..n).find_map(|i| {
                let c: i64 = (0..n).map(|j| a.entry(i, j) * v[j]).sum();
                (c > 0).then_some((i, c))
            });
            let Some((i, c)) = pick else {
                return Err(Error::NotARealRoot(alpha.0.clone()));
            };
            v[i] -= c;
            if v[i] < 0 {
                return Err(Error::NotARealRoot(alpha.0.clone()));
            }
            word.push(i);
        }
    }

    pub fn is_real_root(&self, alpha: &RootVector) -> bool {
        self.witness(alpha).is_ok()
    }

    /// The reflection `r_α = w s_i w⁻¹`.
    pub fn reflection(&self, alpha: &RootVector) -> Result<WeylElement> {
        let wit = self.witness(alpha)?;
        let mut word = wit.w.word().to_vec();
        word.push(wit.index);
        word.extend(wit.w.word().iter().rev());
        self.group.element(&word)
    }

    pub fn apply(&self, w: &WeylElement, alpha: &RootVector) -> Result<RootVector> {
        Ok(RootVector(w.apply(&alpha.0)?))
    }

    /// All distinct `w(±v_i)` with `l(w) <= max_len`, in order of discovery
    /// along the Weyl ball.
    pub fn enumerate_real_roots(&self, max_len: usize) -> Result<Vec<RootVector>> {
        let ball = self.group.enumerate_ball(max_len)?;
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for w in &ball {
            for i in 0..self.rank() {
                let r = RootVector(w.action().column(i));
                for cand in [r.clone(), r.neg()] {
                    if seen.insert(cand.clone()) {
                        out.push(cand);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Whether chamber `c` lies in the half-space of `alpha`.
    fn chamber_in(&self, c: &WeylElement, alpha: &RootVector) -> Result<bool> {
        let v = c.apply_inverse(&alpha.0)?;
        coherent_sign(&v).ok_or_else(|| Error::MixedSign(alpha.0.clone()))
    }

    /// A chamber in `α∩β` (or `−α∩−β`), searched around the fundamental chamber
    /// and around its images under `r_α`, `r_β` and their products.
    fn find_sector(&self, alpha: &RootVector, beta: &RootVector, sign: bool) -> Result<Option<WeylElement>> {
        let ra = self.reflection(alpha)?;
        let rb = self.reflection(beta)?;
        let centers = [self.group.identity(), ra.multiply(&rb)?, rb.multiply(&ra)?, ra.clone(), rb.clone()];
        for c in &centers {
            if let Some(found) = self.find_chamber_near(c, &[(alpha, sign), (beta, sign)])? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    /// First chamber of the ball around `center` in the given sectors, if any.
    fn find_chamber_near(&self, center: &WeylElement, roots: &[(&RootVector, bool)]) -> Result<Option<WeylElement>> {
        for b in self.chambers()? {
            let c = center.multiply(b)?;
            let c = &c;
            let mut ok = true;
            for (r, sign) in roots {
                if self.chamber_in(c, r)? != *sign {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some(c.clone()));
            }
        }
        Ok(None)
    }

    /// Prenilpotency of `{α, β}`. Crossing walls (finite `r_α r_β`) are
    /// prenilpotent; otherwise exactly one of the four sectors is empty, and
    /// the pair is prenilpotent unless that sector is `α∩β` or `−α∩−β`.
    pub fn is_prenilpotent_pair(&self, alpha: &RootVector, beta: &RootVector) -> Result<bool> {
        self.check_rank(alpha)?;
        self.check_rank(beta)?;
        self.witness(alpha)?;
        self.witness(beta)?;
        if alpha == beta {
            return Ok(true);
        }
        if *alpha == beta.neg() {
            return Ok(false);
        }
        let prod = self.reflection(alpha)?.multiply(&self.reflection(beta)?)?;
        if prod.pow(12)?.is_identity() {
            return Ok(true);
        }
        let mut found = [false; 4];
        for c in self.chambers()? {
            let a = self.chamber_in(c, alpha)?;
            let b = self.chamber_in(c, beta)?;
            found[(a as usize) * 2 + b as usize] = true;
            if found.iter().filter(|x| **x).count() == 3 {
                // index 3 is α∩β, index 0 is −α∩−β
                return Ok(found[0] && found[3]);
            }
        }
        Err(Error::Undecided { radius: self.radius })
    }

    /// Roots separating chamber `u⁻¹` from `v⁻¹`, in gallery order.
    fn separating(&self, u: &WeylElement, v: &WeylElement) -> Result<Vec<RootVector>> {
        let z = u.multiply(&v.inverse())?;
        let n = self.rank();
        let uinv = u.inverse();
        let mut prefix = self.group.identity();
        let mut out = Vec::with_capacity(z.length());
        for &i in z.word() {
            let beta = prefix.apply(&RootVector::simple(n, i).0)?;
            out.push(RootVector(uinv.apply(&beta)?));
            prefix = prefix.times_generator(i)?;
        }
        Ok(out)
    }

    /// `[α, β]`: real `γ` whose half-space contains `α∩β` and whose opposite
    /// contains `−α∩−β`.
    pub fn closed_interval(&self, alpha: &RootVector, beta: &RootVector) -> Result<RootInterval> {
        if !self.is_prenilpotent_pair(alpha, beta)? {
            return Err(Error::NotPrenilpotent);
        }
        if alpha == beta {
            return Ok(RootInterval { alpha: alpha.clone(), beta: beta.clone(), members: vec![alpha.clone()] });
        }
        let undecided = Error::Undecided { radius: self.radius };
        let pos = self.find_sector(alpha, beta, true)?.ok_or(undecided.clone())?;
        let neg = self.find_sector(alpha, beta, false)?.ok_or(undecided.clone())?;
        // chamber c = u⁻¹ means u = c⁻¹ sends both roots to the given sign
        let candidates = self.separating(&pos.inverse(), &neg.inverse())?;
        let mut members = Vec::new();
        for gamma in candidates {
            if gamma == *alpha || gamma == *beta || in_positive_cone(alpha, beta, &gamma) {
                members.push(gamma);
                continue;
            }
            let out1 = self.find_chamber_near(&pos, &[(alpha, true), (beta, true), (&gamma, false)])?;
            let out2 = self.find_chamber_near(&neg, &[(alpha, false), (beta, false), (&gamma, true)])?;
            if out1.is_none() && out2.is_none() {
                return Err(undecided);
            }
        }
        Ok(RootInterval { alpha: alpha.clone(), beta: beta.clone(), members })
    }

    pub fn open_interval(&self, alpha: &RootVector, beta: &RootVector) -> Result<Vec<RootVector>> {
        Ok(self.closed_interval(alpha, beta)?.open())
    }

    /// Nilpotency of a finite root set: pairwise prenilpotent and closed under
    /// closed intervals.
    pub fn check_nilpotent(&self, psi: &[RootVector]) -> Result<()> {
        for (i, a) in psi.iter().enumerate() {
            for b in &psi[i + 1..] {
                if !self.is_prenilpotent_pair(a, b)? {
                    return Err(Error::NotNilpotentSet(format!("{a} and {b} are not prenilpotent")));
                }
                for g in self.closed_interval(a, b)?.members {
                    if !psi.contains(&g) {
                        return Err(Error::NotNilpotentSet(format!("[{a}, {b}] contains {g}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Definition check: for `i < j` the open interval lies among the roots
    /// strictly between positions `i` and `j`.
    pub fn is_nibbling(&self, roots: &[RootVector]) -> Result<bool> {
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                if !self.is_prenilpotent_pair(&roots[i], &roots[j])? {
                    return Ok(false);
                }
                let between = &roots[i + 1..j];
                if self.open_interval(&roots[i], &roots[j])?.iter().any(|g| !between.contains(g)) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Orders `psi` by the inversion order of the ShortLex-least reduced word
    /// of the longest element of `W_J`.
    pub fn nibbling_sequence(&self, j: &[usize], psi: &[RootVector]) -> Result<NibblingSequence> {
        for r in psi {
            self.check_rank(r)?;
        }
        let w0 = self.group.longest_element(j)?;
        let n = self.rank();
        let mut order = Vec::new();
        let mut prefix = self.group.identity();
        for &i in w0.word() {
            order.push(RootVector(prefix.apply(&RootVector::simple(n, i).0)?));
            prefix = prefix.times_generator(i)?;
        }
        for r in psi {
            if !order.contains(r) {
                return Err(Error::NotNilpotentSet(format!("{r} is not a positive root of W_J")));
            }
        }
        self.check_nilpotent(psi)?;
        let roots: Vec<RootVector> = order.into_iter().filter(|r| psi.contains(r)).collect();
        if !self.is_nibbling(&roots)? {
            return Err(Error::OrderingFailed(format!("{roots:?}")));
        }
        Ok(NibblingSequence { roots })
    }
}

/// `γ ∈ Q≥0·α + Q≥0·β`, solved exactly on two coordinates.
pub fn in_positive_cone(alpha: &RootVector, beta: &RootVector, gamma: &RootVector) -> bool {
    let n = alpha.rank();
    for p in 0..n {
        for q in p + 1..n {
            let det = alpha.0[p] * beta.0[q] - alpha.0[q] * beta.0[p];
            if det == 0 {
                continue;
            }
            let a = Rational64::new(gamma.0[p] * beta.0[q] - gamma.0[q] * beta.0[p], det);
            let b = Rational64::new(alpha.0[p] * gamma.0[q] - alpha.0[q] * gamma.0[p], det);
            if a.is_negative() || b.is_negative() {
                return false;
            }
            return (0..n).all(|k| {
                a * Rational64::from(alpha.0[k]) + b * Rational64::from(beta.0[k]) == Rational64::from(gamma.0[k])
            }) && !(a.is_zero() && b.is_zero());
        }
    }
    false
}
