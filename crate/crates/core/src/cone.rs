//! Contragredient action on `V*`, facets of the fundamental chamber, fixed
//! subspaces of diagram automorphism groups and the folded Coxeter matrix.
//!
//! A co-functional is stored by its values `f(e_i)` on the simple roots.

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gcm::GeneralizedCartanMatrix;
use crate::weyl::{CoxeterMatrix, IntMatrix, WeylElement, WeylGroup};

pub const DEFAULT_ORDER_CAP: u32 = 60;
pub const DEFAULT_DESCENT_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoFunctional(pub Vec<Rational64>);

#[derive(Serialize, Deserialize)]
struct Frac {
    num: i64,
    den: i64,
}

impl Serialize for CoFunctional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&Frac { num: *x.numer(), den: *x.denom() })?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for CoFunctional {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Frac>::deserialize(d)?;
        raw.into_iter()
            .map(|f| {
                if f.den == 0 {
                    Err(serde::de::Error::custom("zero denominator"))
                } else {
                    Ok(Rational64::new(f.num, f.den))
                }
            })
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(CoFunctional)
    }
}

impl CoFunctional {
    pub fn from_ints(v: &[i64]) -> Self {
        CoFunctional(v.iter().map(|&x| Rational64::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        CoFunctional(vec![Rational64::zero(); n])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    /// `f(v)` for `v` in `Q`.
    pub fn eval(&self, v: &[i64]) -> Rational64 {
        self.0.iter().zip(v).map(|(f, &x)| f * Rational64::from(x)).sum()
    }

    pub fn is_in_closed_chamber(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }
}

fn act(m: &IntMatrix, f: &CoFunctional) -> CoFunctional {
    // (w·f)(e_j) = f(w⁻¹ e_j), i.e. the transpose of w⁻¹ applied to f
    let n = m.size();
    CoFunctional((0..n).map(|j| (0..n).map(|i| f.0[i] * Rational64::from(m.get(i, j))).sum()).collect())
}

/// `(w·f)(v) = f(w⁻¹·v)`.
pub fn dual_action(w: &WeylElement, f: &CoFunctional) -> Result<CoFunctional> {
    if f.rank() != w.rank() {
        return Err(Error::RankMismatch { left: w.rank(), right: f.rank() });
    }
    Ok(act(w.inverse_action(), f))
}

/// `J(f) = {i : f(e_i) = 0}` for `f` in the closed fundamental chamber.
pub fn facet_type(f: &CoFunctional) -> Result<Vec<usize>> {
    if let Some(i) = f.0.iter().position(|x| x.is_negative()) {
        return Err(Error::NotInFundamentalChamber { index: i, value: f.0[i].to_string() });
    }
    Ok((0..f.rank()).filter(|&i| f.0[i].is_zero()).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TitsConeMembership {
    /// `f = w·f0` with `f0` in the closed fundamental chamber.
    Inside {
        word: Vec<usize>,
        fundamental: CoFunctional,
    },
    Undecided {
        steps: usize,
    },
}

/// Bounded descent: apply `s_i` while some `f(e_i) < 0`.
pub fn tits_cone_membership(a: &GeneralizedCartanMatrix, f: &CoFunctional, cap: usize) -> Result<TitsConeMembership> {
    let n = a.rank();
    if f.rank() != n {
        return Err(Error::RankMismatch { left: n, right: f.rank() });
    }
    let mut g = f.clone();
    let mut word = Vec::new();
    for _ in 0..=cap {
        let Some(i) = (0..n).find(|&i| g.0[i].is_negative()) else {
            // f = s_{i1}···s_{ik}·g, word is applied right to left
            return Ok(TitsConeMembership::Inside { word, fundamental: g });
        };
        if word.len() == cap {
            break;
        }
        let gi = g.0[i];
        for j in 0..n {
            g.0[j] -= Rational64::from(a.entry(i, j)) * gi;
        }
        word.push(i);
    }
    Ok(TitsConeMembership::Undecided { steps: cap })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DiagramAutomorphism {
    perm: Vec<usize>,
}

impl DiagramAutomorphism {
    pub fn new(a: &GeneralizedCartanMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = a.rank();
        let distinct: BTreeSet<usize> = perm.iter().copied().collect();
        if perm.len() != n || distinct.len() != n || perm.iter().any(|&p| p >= n) {
            return Err(Error::NotAnAutomorphism(perm));
        }
        for i in 0..n {
            for j in 0..n {
                if a.entry(perm[i], perm[j]) != a.entry(i, j) {
                    return Err(Error::NotAnAutomorphism(perm));
                }
            }
        }
        Ok(DiagramAutomorphism { perm })
    }

    pub fn identity(n: usize) -> Self {
        DiagramAutomorphism { perm: (0..n).collect() }
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        DiagramAutomorphism { perm: other.perm.iter().map(|&i| self.perm[i]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }
}

/// Closure under composition, the identity being implicit.
pub fn check_group(group: &[DiagramAutomorphism]) -> Result<()> {
    for g in group {
        for h in group {
            let gh = g.compose(h);
            if !gh.is_identity() && !group.contains(&gh) {
                return Err(Error::NotClosedUnderComposition);
            }
        }
    }
    Ok(())
}

/// Orbits of the group on `{0..n-1}`, each sorted, ordered by least element.
pub fn orbits(n: usize, group: &[DiagramAutomorphism]) -> Vec<Vec<usize>> {
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while c[r] != r {
            r = c[r];
        }
        c[x] = r;
        r
    }
    for g in group {
        for i in 0..n {
            let (a, b) = (find(&mut comp, i), find(&mut comp, g.apply(i)));
            if a != b {
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = find(&mut comp, i);
        match out.iter_mut().find(|o| o[0] == r) {
            Some(o) => o.push(i),
            None => out.push(vec![i]),
        }
    }
    out
}

/// Basis of `{x : e_i(x) = 0 on S0, e_i(x) = e_j(x) along orbits}`: one
/// indicator vector per orbit outside `S0`.
pub fn fixed_subspace(
    a: &GeneralizedCartanMatrix,
    group: &[DiagramAutomorphism],
    s0: &[usize],
) -> Result<Vec<CoFunctional>> {
    let n = a.rank();
    check_group(group)?;
    if let Some(&i) = s0.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index: i, rank: n });
    }
    if group.iter().any(|g| s0.iter().any(|&i| !s0.contains(&g.apply(i)))) {
        return Err(Error::NotStable);
    }
    Ok(orbits(n, group)
        .into_iter()
        .filter(|o| !o.iter().any(|i| s0.contains(i)))
        .map(|o| {
            let mut f = CoFunctional::zero(n);
            for i in o {
                f.0[i] = Rational64::one();
            }
            f
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelativeCoxeterMatrix {
    pub orbits: Vec<Vec<usize>>,
    pub matrix: CoxeterMatrix,
}

/// Longest elements of the orbit subgroups, one per orbit.
pub fn relative_generators(
    a: &GeneralizedCartanMatrix,
    group: &[DiagramAutomorphism],
) -> Result<Vec<(Vec<usize>, WeylElement)>> {
    check_group(group)?;
    let w = WeylGroup::new(a);
    orbits(a.rank(), group)
        .into_iter()
        .map(|o| {
            let r = w.longest_element(&o).map_err(|_| Error::OrbitNotSpherical(o.clone()))?;
            Ok((o, r))
        })
        .collect()
}

/// Folded Coxeter matrix: `m(O, O')` is the order of `r_O r_O'` on the fixed
/// subspace, `None` once `cap` is reached.
pub fn relative_coxeter(
    a: &GeneralizedCartanMatrix,
    group: &[DiagramAutomorphism],
    cap: u32,
) -> Result<RelativeCoxeterMatrix> {
    let gens = relative_generators(a, group)?;
    let basis = fixed_subspace(a, group, &[])?;
    let in_l = |f: &CoFunctional, orbits: &[Vec<usize>]| orbits.iter().all(|o| o.iter().all(|&i| f.0[i] == f.0[o[0]]));
    let orbit_list: Vec<Vec<usize>> = gens.iter().map(|(o, _)| o.clone()).collect();
    for (o, r) in &gens {
        for b in &basis {
            let img = dual_action(r, b)?;
            if !in_l(&img, &orbit_list) || dual_action(r, &img)? != *b {
                return Err(Error::OrbitNotSpherical(o.clone()));
            }
        }
    }
    let k = gens.len();
    let mut m = vec![vec![Some(1u32); k]; k];
    for p in 0..k {
        for q in p + 1..k {
            let prod = gens[p].1.multiply(&gens[q].1)?;
            let mut cur = basis.clone();
            let mut order = None;
            for step in 1..=cap {
                cur = cur.iter().map(|f| dual_action(&prod, f)).collect::<Result<_>>()?;
                if cur == basis {
                    order = Some(step);
                    break;
                }
            }
            m[p][q] = order;
            m[q][p] = order;
        }
    }
    Ok(RelativeCoxeterMatrix { orbits: orbit_list, matrix: CoxeterMatrix { n: k, m } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::coxeter_matrix;

    fn swap_pairs() -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::affine_a1().direct_sum(&GeneralizedCartanMatrix::affine_a1())
    }

    #[test]
    fn dual_action_examples() {
        let a2 = GeneralizedCartanMatrix::a2();
        let w = WeylGroup::new(&a2);
        let f = CoFunctional::from_ints(&[0, 1]);
        assert_eq!(dual_action(&w.identity(), &f).unwrap(), f);
        let s0 = w.generator(0).unwrap();
        let g = dual_action(&s0, &f).unwrap();
        assert_eq!(g, f);
        let x = w.element(&[0, 1]).unwrap();
        let h = CoFunctional::from_ints(&[3, -2]);
        let v = [2, 5];
        let wv = x.apply(&v).unwrap();
        assert_eq!(dual_action(&x, &h).unwrap().eval(&wv), h.eval(&v));
        let bad = CoFunctional::from_ints(&[1]);
        assert!(matches!(dual_action(&x, &bad), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn facet_types() {
        assert!(facet_type(&CoFunctional::from_ints(&[1, 2])).unwrap().is_empty());
        assert_eq!(facet_type(&CoFunctional::from_ints(&[0, 0, 0])).unwrap(), vec![0, 1, 2]);
        assert_eq!(facet_type(&CoFunctional::from_ints(&[0, 1])).unwrap(), vec![0]);
        assert!(matches!(
            facet_type(&CoFunctional::from_ints(&[1, -1])),
            Err(Error::NotInFundamentalChamber { index: 1, .. })
        ));
    }

    #[test]
    fn automorphisms() {
        let aff = GeneralizedCartanMatrix::affine_a2();
        assert!(DiagramAutomorphism::new(&aff, vec![0, 2, 1]).is_ok());
        let b2 = GeneralizedCartanMatrix::b2();
        assert!(matches!(DiagramAutomorphism::new(&b2, vec![1, 0]), Err(Error::NotAnAutomorphism(_))));
        let rot = DiagramAutomorphism::new(&aff, vec![1, 2, 0]).unwrap();
        assert_eq!(check_group(std::slice::from_ref(&rot)), Err(Error::NotClosedUnderComposition));
        let rot2 = rot.compose(&rot);
        assert!(check_group(&[rot, rot2]).is_ok());
    }

    #[test]
    fn fixed_subspace_examples() {
        let a2 = GeneralizedCartanMatrix::a2();
        assert_eq!(fixed_subspace(&a2, &[], &[]).unwrap().len(), 2);
        let aff = GeneralizedCartanMatrix::affine_a2();
        let flip = DiagramAutomorphism::new(&aff, vec![0, 2, 1]).unwrap();
        let l = fixed_subspace(&aff, std::slice::from_ref(&flip), &[]).unwrap();
        assert_eq!(l.len(), 2);
        assert!(l.iter().all(|f| f.0[1] == f.0[2]));
        assert_eq!(fixed_subspace(&aff, std::slice::from_ref(&flip), &[1]), Err(Error::NotStable));
        assert_eq!(fixed_subspace(&aff, &[flip], &[1, 2]).unwrap().len(), 1);
        let d = swap_pairs();
        let sw = DiagramAutomorphism::new(&d, vec![2, 3, 0, 1]).unwrap();
        assert_eq!(fixed_subspace(&d, &[sw], &[]).unwrap().len(), 2);
    }

    #[test]
    fn relative_coxeter_examples() {
        for a in [GeneralizedCartanMatrix::a2(), GeneralizedCartanMatrix::g2(), GeneralizedCartanMatrix::affine_a2()] {
            let r = relative_coxeter(&a, &[], DEFAULT_ORDER_CAP).unwrap();
            assert_eq!(r.matrix, coxeter_matrix(&a));
        }
        let aff = GeneralizedCartanMatrix::affine_a2();
        let flip = DiagramAutomorphism::new(&aff, vec![0, 2, 1]).unwrap();
        let r = relative_coxeter(&aff, &[flip], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(r.orbits, vec![vec![0], vec![1, 2]]);
        assert_eq!(r.matrix.m, vec![vec![Some(1), None], vec![None, Some(1)]]);
        let d = swap_pairs();
        let sw = DiagramAutomorphism::new(&d, vec![2, 3, 0, 1]).unwrap();
        let r = relative_coxeter(&d, &[sw], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(r.matrix, coxeter_matrix(&GeneralizedCartanMatrix::affine_a1()));
        // A3 folded by its flip gives B2
        let a3 = GeneralizedCartanMatrix::finite_a(4);
        let flip = DiagramAutomorphism::new(&a3, vec![2, 1, 0]).unwrap();
        let r = relative_coxeter(&a3, &[flip], DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(r.matrix.get(0, 1), Some(4));
    }

    #[test]
    fn orbit_not_spherical() {
        let d = GeneralizedCartanMatrix::affine_a1();
        let sw = DiagramAutomorphism::new(&d, vec![1, 0]).unwrap();
        assert!(matches!(relative_coxeter(&d, &[sw], 60), Err(Error::OrbitNotSpherical(_))));
    }

    #[test]
    fn tits_cone_descent() {
        let aff = GeneralizedCartanMatrix::affine_a2();
        let w = WeylGroup::new(&aff);
        let f0 = CoFunctional::from_ints(&[1, 2, 0]);
        let x = w.element(&[0, 1, 2, 0]).unwrap();
        let f = dual_action(&x, &f0).unwrap();
        match tits_cone_membership(&aff, &f, DEFAULT_DESCENT_CAP).unwrap() {
            TitsConeMembership::Inside { word, fundamental } => {
                assert_eq!(fundamental, f0);
                let back = dual_action(&w.element(&word).unwrap(), &fundamental).unwrap();
                assert_eq!(back, f);
            }
            other => panic!("{other:?}"),
        }
        // negative imaginary direction lies outside the Tits cone
        let delta = CoFunctional::from_ints(&[-1, -1, -1]);
        let r = tits_cone_membership(&aff, &CoFunctional(delta.0.clone()), 50).unwrap();
        assert_eq!(r, TitsConeMembership::Undecided { steps: 50 });
    }
}
