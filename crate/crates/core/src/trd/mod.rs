//! Twin root data given by group oracles: axiom checks, integration of root
//! subdata, twin building balls and codistances.
//!
//! Every oracle lives inside an ambient split loop group, so group elements
//! are [`LaurentMatrix`] values and chambers are named by the ambient
//! [`CellEngine`]. Root groups of non-simple roots are obtained by
//! conjugating simple root groups with products of representatives.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::chevalley::cells::CellEngine;
use crate::chevalley::split::{AffineRoot, SplitGroup};
use crate::chevalley::su3::{HermitianDescentDatum, RELATIVE_WORDS};
use crate::error::{Error, Result};
use crate::gcm::GeneralizedCartanMatrix;
use crate::laurent::LaurentMatrix;
use crate::roots::{RootSystem, RootVector};
use crate::weyl::{WeylElement, WeylGroup};

pub mod axioms;
pub mod building;
pub mod integrate;

pub use axioms::{check_rsd, check_trd, AxiomResult, AxiomStatus, CheckConfig, CheckReport, RsdBasis};
pub use building::{building_ball, codistance, BallConfig, ChamberGraph, Sign, TwinChamber};
pub use integrate::{
    extend_scalars, integrate_subdatum, match_balls, subfield_basis, vwv_normal_form, IntegratedSubgroup,
    IntegrationReport, MatchReport, Token, VwvForm,
};

pub trait GroupOracle: Send + Sync {
    fn name(&self) -> String;

    /// Cartan matrix of the (possibly relative) root system.
    fn gcm(&self) -> GeneralizedCartanMatrix;

    /// Ambient split group with its cell computations.
    fn engine(&self) -> &CellEngine;

    /// The torus `H`, enumerated at level 0.
    fn torus(&self) -> Vec<LaurentMatrix>;

    fn in_torus(&self, g: &LaurentMatrix) -> bool {
        self.torus().contains(g)
    }

    /// `U_{α_i}` with the identity first.
    fn simple_root_group(&self, i: usize) -> Vec<LaurentMatrix>;

    /// A lift of `s_i` normalizing the torus.
    fn representative(&self, i: usize) -> LaurentMatrix;

    /// Word in the ambient simple reflections realizing `s_i`.
    fn absolute_word(&self, i: usize) -> Vec<usize>;

    /// `m(u) = u'·u·u''` with `u', u'' ∈ U_{-α_i}`.
    fn mu(&self, i: usize, u: &LaurentMatrix) -> Result<LaurentMatrix> {
        default_mu(self, i, u)
    }
}

/// Each row and column has exactly one nonzero entry, and it is a monomial.
pub fn is_monomial(g: &LaurentMatrix) -> bool {
    let n = g.size();
    let mut cols = vec![false; n];
    for r in 0..n {
        let mut found = None;
        for c in 0..n {
            if !g.get(r, c).is_zero() {
                if found.is_some() || g.get(r, c).as_monomial().is_none() {
                    return false;
                }
                found = Some(c);
            }
        }
        match found {
            Some(c) if !cols[c] => cols[c] = true,
            _ => return false,
        }
    }
    true
}

/// Searches `U_{-α} = ṡ·U_α·ṡ⁻¹` for the pair making `u'·u·u''` monomial.
pub fn default_mu<O: GroupOracle + ?Sized>(oracle: &O, i: usize, u: &LaurentMatrix) -> Result<LaurentMatrix> {
    if u.is_identity() {
        return Err(Error::TrivialElement);
    }
    let s = oracle.representative(i);
    let s_inv = s.inverse()?;
    let neg: Vec<LaurentMatrix> = oracle.simple_root_group(i).iter().skip(1).map(|x| s.mul(x).mul(&s_inv)).collect();
    for a in &neg {
        let au = a.mul(u);
        for b in &neg {
            let m = au.mul(b);
            if is_monomial(&m) {
                return Ok(m);
            }
        }
    }
    Err(Error::OracleInconsistent(format!("no μ-map for a nontrivial element of U_{i}")))
}

/// Positions `(row, column, t-degree)` where `g` differs from the identity.
pub fn support(g: &LaurentMatrix) -> BTreeSet<(usize, usize, i32)> {
    let n = g.size();
    let mut out = BTreeSet::new();
    for r in 0..n {
        for c in 0..n {
            let p = g.get(r, c);
            for (k, x) in p.terms() {
                let is_one = r == c && k == 0 && x.is_one();
                if !is_one {
                    out.insert((r, c, k));
                }
            }
            if r == c && p.coeff(0).is_zero() {
                out.insert((r, c, 0));
            }
        }
    }
    out
}

/// Derived data of an oracle: root system, lifts and cached root groups.
pub struct Datum<'a> {
    pub oracle: &'a dyn GroupOracle,
    pub roots: RootSystem,
    reps: Vec<LaurentMatrix>,
    groups: Vec<Vec<LaurentMatrix>>,
    cache: RefCell<HashMap<RootVector, Vec<LaurentMatrix>>>,
}

impl<'a> Datum<'a> {
    pub fn new(oracle: &'a dyn GroupOracle, search_radius: usize) -> Self {
        let gcm = oracle.gcm();
        let n = gcm.rank();
        Datum {
            oracle,
            roots: RootSystem::with_radius(&gcm, search_radius),
            reps: (0..n).map(|i| oracle.representative(i)).collect(),
            groups: (0..n).map(|i| oracle.simple_root_group(i)).collect(),
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    pub fn weyl(&self) -> &WeylGroup {
        self.roots.group()
    }

    pub fn representative(&self, i: usize) -> &LaurentMatrix {
        &self.reps[i]
    }

    pub fn simple_group(&self, i: usize) -> &[LaurentMatrix] {
        &self.groups[i]
    }

    /// Product of representatives along the word of `w`.
    pub fn lift(&self, w: &WeylElement) -> LaurentMatrix {
        let id = self.oracle.engine().group.identity();
        w.word().iter().fold(id, |m, &i| m.mul(&self.reps[i]))
    }

    /// `U_γ = w̃·U_{α_i}·w̃⁻¹` for `γ = w(α_i)`.
    pub fn root_group(&self, gamma: &RootVector) -> Result<Vec<LaurentMatrix>> {
        if let Some(g) = self.cache.borrow().get(gamma) {
            return Ok(g.clone());
        }
        let wit = self.roots.witness(gamma)?;
        let w = if wit.positive { wit.w.clone() } else { wit.w.times_generator(wit.index)? };
        let lift = self.lift(&w);
        let inv = lift.inverse()?;
        let group: Vec<LaurentMatrix> = self.groups[wit.index].iter().map(|u| lift.mul(u).mul(&inv)).collect();
        self.cache.borrow_mut().insert(gamma.clone(), group.clone());
        Ok(group)
    }

    /// Union of the supports of `U_γ` for `γ ∈ psi`.
    pub fn pattern(&self, psi: &[RootVector]) -> Result<BTreeSet<(usize, usize, i32)>> {
        let mut out = BTreeSet::new();
        for gamma in psi {
            for u in self.root_group(gamma)? {
                out.extend(support(&u));
            }
        }
        Ok(out)
    }

    pub fn in_pattern(&self, g: &LaurentMatrix, pattern: &BTreeSet<(usize, usize, i32)>) -> bool {
        support(g).is_subset(pattern)
    }
}

/// The standard datum of a split group.
#[derive(Debug, Clone)]
pub struct SplitOracle {
    engine: CellEngine,
}

impl SplitOracle {
    pub fn new(group: SplitGroup) -> Result<Self> {
        Ok(SplitOracle { engine: CellEngine::new(group)? })
    }

    pub fn group(&self) -> &SplitGroup {
        &self.engine.group
    }
}

impl GroupOracle for SplitOracle {
    fn name(&self) -> String {
        self.engine.group.to_string()
    }

    fn gcm(&self) -> GeneralizedCartanMatrix {
        self.engine.group.gcm()
    }

    fn engine(&self) -> &CellEngine {
        &self.engine
    }

    fn torus(&self) -> Vec<LaurentMatrix> {
        self.engine.group.torus()
    }

    fn in_torus(&self, g: &LaurentMatrix) -> bool {
        self.engine.group.is_torus(g)
    }

    fn simple_root_group(&self, i: usize) -> Vec<LaurentMatrix> {
        let g = &self.engine.group;
        g.root_group(&g.simple_root(i).expect("simple index")).expect("valid root")
    }

    fn representative(&self, i: usize) -> LaurentMatrix {
        self.engine.representative(i).clone()
    }

    fn absolute_word(&self, i: usize) -> Vec<usize> {
        vec![i]
    }

    fn mu(&self, i: usize, u: &LaurentMatrix) -> Result<LaurentMatrix> {
        let g = &self.engine.group;
        let root = g.simple_root(i)?;
        match g.root_parameter(&root, u) {
            Some(r) => g.mu(&root, r),
            None => Err(Error::BadRoot(format!("element is not in U_{root}"))),
        }
    }
}

/// The relative datum of quasi-split `SU_3`.
#[derive(Debug, Clone)]
pub struct Su3Oracle {
    pub datum: HermitianDescentDatum,
    engine: CellEngine,
    groups: [Vec<LaurentMatrix>; 2],
    kernel: Vec<LaurentMatrix>,
}

impl Su3Oracle {
    pub fn new(q: u32) -> Result<Self> {
        let datum = HermitianDescentDatum::new(q)?;
        let engine = CellEngine::new(datum.group)?;
        let groups = [datum.relative_root_group(0, 0)?.elements, datum.relative_root_group(1, 0)?.elements];
        let kernel = datum.anisotropic_kernel().elements;
        Ok(Su3Oracle { datum, engine, groups, kernel })
    }

    /// Centers of the relative root groups with the split torus.
    pub fn center_line_basis(&self) -> Result<RsdBasis> {
        Ok(RsdBasis {
            name: format!("center lines of SU3(F{})", self.datum.q),
            torus: self.datum.split_torus(),
            groups: vec![self.datum.relative_root_group(0, 0)?.center, self.datum.relative_root_group(1, 0)?.center],
        })
    }
}

impl GroupOracle for Su3Oracle {
    fn name(&self) -> String {
        format!("SU3(F{}[t,t^-1])", self.datum.q)
    }

    fn gcm(&self) -> GeneralizedCartanMatrix {
        self.datum.relative_gcm()
    }

    fn engine(&self) -> &CellEngine {
        &self.engine
    }

    fn torus(&self) -> Vec<LaurentMatrix> {
        self.kernel.clone()
    }

    fn simple_root_group(&self, i: usize) -> Vec<LaurentMatrix> {
        self.groups[i].clone()
    }

    fn representative(&self, i: usize) -> LaurentMatrix {
        self.datum.relative_representative(i).expect("relative index")
    }

    fn absolute_word(&self, i: usize) -> Vec<usize> {
        RELATIVE_WORDS[i].to_vec()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `U_{α_0}` replaced by its conjugate under `u_{α_1}(1)`.
    ConjugatedRootGroup,
    /// `m(u)` multiplied on the right by `u_{α_i}(1)`.
    WrongMu,
    /// `U_{α_1}` replaced by `U_{-α_1}`.
    NegatedRootGroup,
}

impl fmt::Display for Fault {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Fault::ConjugatedRootGroup => "conjugated root group",
            Fault::WrongMu => "wrong mu-map",
            Fault::NegatedRootGroup => "negated root group",
        };
        f.write_str(s)
    }
}

/// A split datum with one deliberate defect.
#[derive(Debug, Clone)]
pub struct FaultyOracle {
    pub inner: SplitOracle,
    pub fault: Fault,
}

impl FaultyOracle {
    pub fn new(inner: SplitOracle, fault: Fault) -> Self {
        FaultyOracle { inner, fault }
    }

    fn unit(&self, i: usize) -> LaurentMatrix {
        let g = self.inner.group();
        g.root_element(&g.simple_root(i).expect("simple index"), g.field.one()).expect("valid root")
    }
}

impl GroupOracle for FaultyOracle {
    fn name(&self) -> String {
        format!("{} with {}", self.inner.name(), self.fault)
    }

    fn gcm(&self) -> GeneralizedCartanMatrix {
        self.inner.gcm()
    }

    fn engine(&self) -> &CellEngine {
        self.inner.engine()
    }

    fn torus(&self) -> Vec<LaurentMatrix> {
        self.inner.torus()
    }

    fn in_torus(&self, g: &LaurentMatrix) -> bool {
        self.inner.in_torus(g)
    }

    fn simple_root_group(&self, i: usize) -> Vec<LaurentMatrix> {
        let base = self.inner.simple_root_group(i);
        match (self.fault, i) {
            (Fault::ConjugatedRootGroup, 0) => {
                let c = self.unit(1);
                base.iter().map(|u| u.conjugate(&c).expect("unimodular")).collect()
            }
            (Fault::NegatedRootGroup, 1) => {
                let g = self.inner.group();
                let root: AffineRoot = g.simple_root(1).expect("rank at least 2").neg();
                g.root_group(&root).expect("valid root")
            }
            _ => base,
        }
    }

    fn representative(&self, i: usize) -> LaurentMatrix {
        self.inner.representative(i)
    }

    fn absolute_word(&self, i: usize) -> Vec<usize> {
        self.inner.absolute_word(i)
    }

    fn mu(&self, i: usize, u: &LaurentMatrix) -> Result<LaurentMatrix> {
        match self.fault {
            Fault::WrongMu => Ok(self.inner.mu(i, u)?.mul(&self.unit(i))),
            _ => default_mu(self, i, u),
        }
    }
}

/// The level of a root: its coefficient on the last simple root for affine
/// types, zero otherwise.
pub fn level(gcm: &GeneralizedCartanMatrix, gamma: &RootVector) -> i64 {
    if gcm.determinant() == 0 {
        *gamma.coords().last().unwrap_or(&0)
    } else {
        0
    }
}

/// Substitutes each relative generator by its absolute word.
pub fn to_absolute(oracle: &dyn GroupOracle, w: &WeylElement) -> Result<WeylElement> {
    let word: Vec<usize> = w.word().iter().flat_map(|&i| oracle.absolute_word(i)).collect();
    oracle.engine().weyl().element(&word)
}
