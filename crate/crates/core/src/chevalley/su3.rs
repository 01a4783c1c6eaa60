//! Quasi-split `SU_3(F_q[t, t⁻¹])` as the fixed points of a semilinear
//! involution of `SL_3(F_{q²}[t, t⁻¹])`.
//!
//! The involution is `σ(g) = J·(ḡᵀ)⁻¹·J` with `J` the antidiagonal matrix of
//! ones and `ḡ` the coefficientwise Frobenius `x ↦ x^q`. It swaps the two
//! finite simple roots and fixes the affine one, so the relative Weyl group
//! is infinite dihedral. Relative root `a` (index 0) is the orbit of the two
//! finite simple roots, relative root `b` (index 1) is the affine root.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, Fq};
use crate::gcm::GeneralizedCartanMatrix;
use crate::laurent::{LaurentMatrix, LaurentPoly};

use super::split::{AffineRoot, SplitGroup};

/// Absolute word of each relative simple reflection.
pub const RELATIVE_WORDS: [&[usize]; 2] = [&[0, 1, 0], &[2]];

#[derive(Debug, Clone)]
pub struct HermitianDescentDatum {
    pub q: u32,
    pub base: Field,
    pub ext: Field,
    pub group: SplitGroup,
    j: LaurentMatrix,
    eps: Fq,
}

#[derive(Debug, Clone)]
pub struct RelativeRootGroup {
    /// All elements, the center first and the identity at position 0.
    pub elements: Vec<LaurentMatrix>,
    pub center: Vec<LaurentMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KernelReport {
    #[serde(skip)]
    pub elements: Vec<LaurentMatrix>,
    pub size: usize,
    pub commutative: bool,
}

impl HermitianDescentDatum {
    pub fn new(q: u32) -> Result<Self> {
        if !matches!(q, 2 | 3) {
            return Err(Error::UnsupportedField { p: q as u8, e: 1 });
        }
        let base = Field::with_order(q)?;
        let ext = base.quadratic_extension()?;
        let group = SplitGroup::loop_group(3, ext)?;
        let one = ext.one();
        let z = ext.zero();
        let j = LaurentMatrix::from_constants(ext, &[vec![z, z, one], vec![z, one, z], vec![one, z, z]])?;
        let eps = ext
            .nonzero()
            .into_iter()
            .find(|e| e.pow(q as u64) == -*e)
            .expect("trace-zero elements exist in every quadratic extension");
        Ok(HermitianDescentDatum { q, base, ext, group, j, eps })
    }

    /// Nonzero `ε` with `ε̄ = -ε`, used to embed `SL_2` along the long root.
    pub fn epsilon(&self) -> Fq {
        self.eps
    }

    pub fn bar_scalar(&self, x: Fq) -> Fq {
        x.pow(self.q as u64)
    }

    pub fn bar(&self, g: &LaurentMatrix) -> LaurentMatrix {
        g.map_entries(|p| p.map_coeffs(|c| c.pow(self.q as u64)))
    }

    pub fn sigma(&self, g: &LaurentMatrix) -> Result<LaurentMatrix> {
        if g.size() != 3 {
            return Err(Error::RankMismatch { left: g.size(), right: 3 });
        }
        if g.field() != self.ext {
            return Err(Error::FieldMismatch);
        }
        Ok(self.j.mul(&self.bar(g).transpose().inverse()?).mul(&self.j))
    }

    pub fn is_fixed(&self, g: &LaurentMatrix) -> Result<bool> {
        Ok(self.sigma(g)? == *g)
    }

    /// `[[1, a, b], [0, 1, -ā], [0, 0, 1]]`, which is σ-fixed iff `b + b̄ = -a·ā`.
    pub fn va_element(&self, a: Fq, b: Fq) -> Result<LaurentMatrix> {
        if b + self.bar_scalar(b) != -(a * self.bar_scalar(a)) {
            return Err(Error::BadRoot(format!("({a}, {b}) violates the trace condition")));
        }
        let mut m = self.group.identity();
        m.set(0, 1, LaurentPoly::constant(a));
        m.set(0, 2, LaurentPoly::constant(b));
        m.set(1, 2, LaurentPoly::constant(-self.bar_scalar(a)));
        Ok(m)
    }

    /// `I + r·t·E_20` with `r̄ = -r`.
    pub fn vb_element(&self, r: Fq) -> Result<LaurentMatrix> {
        if self.bar_scalar(r) != -r {
            return Err(Error::BadRoot(format!("{r} is not trace-zero")));
        }
        self.group.root_element(&AffineRoot { i: 2, j: 0, k: 1 }, r)
    }

    /// Relative root group at level 0, exhaustively.
    pub fn relative_root_group(&self, index: usize, level: i32) -> Result<RelativeRootGroup> {
        if level != 0 {
            return Err(Error::UnsupportedLevel(level));
        }
        let els = self.ext.elements();
        match index {
            0 => {
                let mut center = Vec::new();
                let mut rest = Vec::new();
                for &a in &els {
                    for &b in &els {
                        if let Ok(m) = self.va_element(a, b) {
                            if a.is_zero() {
                                center.push(m);
                            } else {
                                rest.push(m);
                            }
                        }
                    }
                }
                let mut elements = center.clone();
                elements.extend(rest);
                Ok(RelativeRootGroup { elements, center })
            }
            1 => {
                let elements: Vec<LaurentMatrix> = els.iter().filter_map(|&r| self.vb_element(r).ok()).collect();
                Ok(RelativeRootGroup { center: elements.clone(), elements })
            }
            _ => Err(Error::IndexOutOfRange { index, rank: 2 }),
        }
    }

    /// σ-fixed diagonal matrices `diag(x, x̄/x, x̄⁻¹)`.
    pub fn anisotropic_kernel(&self) -> KernelReport {
        let elements: Vec<LaurentMatrix> = self
            .ext
            .nonzero()
            .into_iter()
            .map(|x| {
                let xb = self.bar_scalar(x);
                let d = [x, xb.div(x).expect("nonzero"), xb.inv().expect("nonzero")];
                self.group.torus_element(&d).expect("determinant one")
            })
            .collect();
        let commutative = elements.iter().all(|a| elements.iter().all(|b| a.mul(b) == b.mul(a)));
        KernelReport { size: elements.len(), elements, commutative }
    }

    /// `T_d = {diag(x, 1, x⁻¹) : x ∈ F_q^×}`.
    pub fn split_torus(&self) -> Vec<LaurentMatrix> {
        self.base
            .nonzero()
            .into_iter()
            .map(|x| {
                let x = self.lift(x);
                self.group.torus_element(&[x, self.ext.one(), x.inv().expect("nonzero")]).expect("determinant one")
            })
            .collect()
    }

    /// The inclusion `F_q ⊂ F_{q²}`.
    pub fn lift(&self, x: Fq) -> Fq {
        self.ext.from_int(x.coeffs().0 as i64)
    }

    pub fn sl2(&self) -> SplitGroup {
        SplitGroup::loop_group(2, self.base).expect("rank 2 is supported")
    }

    pub fn relative_gcm(&self) -> GeneralizedCartanMatrix {
        GeneralizedCartanMatrix::affine_a1()
    }

    /// `[[a, b], [c, d]] ↦ [[a, 0, εb], [0, 1, 0], [ε⁻¹c, 0, d]]`.
    pub fn embed(&self, g: &LaurentMatrix) -> Result<LaurentMatrix> {
        if g.size() != 2 {
            return Err(Error::RankMismatch { left: g.size(), right: 2 });
        }
        if g.field() != self.base {
            return Err(Error::FieldMismatch);
        }
        let lift = |p: &LaurentPoly| LaurentPoly::from_terms(self.ext, p.terms().map(|(k, c)| (k, self.lift(c))));
        let e = LaurentPoly::constant(self.eps);
        let einv = LaurentPoly::constant(self.eps.inv()?);
        let mut m = self.group.identity();
        m.set(0, 0, lift(g.get(0, 0)));
        m.set(0, 2, e.mul(&lift(g.get(0, 1))));
        m.set(2, 0, einv.mul(&lift(g.get(1, 0))));
        m.set(2, 2, lift(g.get(1, 1)));
        Ok(m)
    }

    /// Image of the standard `SL_2` reflection representatives.
    pub fn relative_representative(&self, index: usize) -> Result<LaurentMatrix> {
        self.embed(&self.sl2().representative(index)?)
    }
}
