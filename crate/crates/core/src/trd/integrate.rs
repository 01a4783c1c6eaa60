//! The subgroup `F = ⟨T_d, E_α, s_α⟩` generated by a basis for a root
//! subdatum, its root groups `F_γ`, and its `V·w·V` normal forms.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::cells::CellEngine;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gcm::GeneralizedCartanMatrix;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::weyl::{WeylElement, WeylGroup};

use super::axioms::{check_rsd, CheckConfig, CheckReport, RsdBasis};
use super::building::{building_ball, codistance_of, BallConfig, ChamberGraph, Sign, TwinChamber};
use super::{to_absolute, Datum, GroupOracle, SplitOracle};

/// `F` as a group oracle: torus `T_d`, simple root groups `E_α`, and
/// representatives `s_α = m(v)` computed in the ambient datum.
#[derive(Clone)]
pub struct IntegratedSubgroup {
    pub ambient: Arc<dyn GroupOracle>,
    pub basis: RsdBasis,
    reps: Vec<LaurentMatrix>,
}

impl std::fmt::Debug for IntegratedSubgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IntegratedSubgroup")
            .field("ambient", &self.ambient.name())
            .field("basis", &self.basis.name)
            .finish()
    }
}

impl GroupOracle for IntegratedSubgroup {
    fn name(&self) -> String {
        format!("<{}> in {}", self.basis.name, self.ambient.name())
    }

    fn gcm(&self) -> GeneralizedCartanMatrix {
        self.ambient.gcm()
    }

    fn engine(&self) -> &CellEngine {
        self.ambient.engine()
    }

    fn torus(&self) -> Vec<LaurentMatrix> {
        self.basis.torus.clone()
    }

    fn in_torus(&self, g: &LaurentMatrix) -> bool {
        self.basis.in_torus(g)
    }

    fn simple_root_group(&self, i: usize) -> Vec<LaurentMatrix> {
        self.basis.groups[i].clone()
    }

    fn representative(&self, i: usize) -> LaurentMatrix {
        self.reps[i].clone()
    }

    fn absolute_word(&self, i: usize) -> Vec<usize> {
        self.ambient.absolute_word(i)
    }

    fn mu(&self, i: usize, u: &LaurentMatrix) -> Result<LaurentMatrix> {
        self.ambient.mu(i, u)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegrationReport {
    pub radius: usize,
    /// Roots `γ = w(α)` compared, as `(word of w, α)`.
    pub cells: Vec<(Vec<usize>, usize)>,
    pub mismatches: Vec<String>,
}

impl IntegrationReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Builds `F` after checking the basis axioms.
pub fn integrate_subdatum(
    ambient: Arc<dyn GroupOracle>,
    basis: RsdBasis,
    config: &CheckConfig,
) -> Result<(IntegratedSubgroup, CheckReport)> {
    let report = check_rsd(ambient.as_ref(), &basis, config)?;
    if let Some(bad) = report.axioms.iter().find(|a| a.status == super::AxiomStatus::Fail) {
        return Err(Error::RsdViolation(format!("{}: {}", bad.axiom, bad.witness.clone().unwrap_or_default())));
    }
    let reps = basis.reflections(ambient.as_ref())?;
    Ok((IntegratedSubgroup { ambient, basis, reps }, report))
}

impl IntegratedSubgroup {
    /// Verifies `F ∩ U_γ = s̃·E_α·s̃⁻¹` for every `γ = w(α)` with
    /// `l(w s_α) > l(w)` and `l(w) < radius`. `F ∩ U_γ` is read off the ball:
    /// `u ∈ U_γ` lies in `F` exactly when it maps the chamber `w̃·ṡ_α·B` of
    /// the `F`-apartment to a chamber of the `F`-ball.
    pub fn check_root_groups(&self, radius: usize) -> Result<IntegrationReport> {
        let ball = building_ball(self, Sign::Plus, &BallConfig { radius, ..BallConfig::default() })?;
        let keys: HashSet<&TwinChamber> = ball.chambers.iter().map(|c| &c.chamber).collect();
        let amb = Datum::new(self.ambient.as_ref(), 1);
        let own = Datum::new(self, 1);
        let engine = self.engine();
        let mut report = IntegrationReport { radius, cells: Vec::new(), mismatches: Vec::new() };
        if radius == 0 {
            return Ok(report);
        }
        let ws = own.weyl().enumerate_ball(radius - 1)?;
        for w in &ws {
            for a in 0..own.rank() {
                if w.times_generator(a)?.length() < w.length() {
                    continue;
                }
                let gamma = own.roots.apply(w, &own.roots.simple(a)?)?;
                let lift = own.lift(w);
                let lift_inv = lift.inverse()?;
                let chamber = lift.mul(own.representative(a));
                let expected: BTreeSet<String> =
                    self.basis.groups[a].iter().map(|e| lift.mul(e).mul(&lift_inv).to_json().to_string()).collect();
                let mut found = BTreeSet::new();
                for u in amb.root_group(&gamma)? {
                    let key = TwinChamber::of(engine, Sign::Plus, &u.mul(&chamber))?;
                    if keys.contains(&key) {
                        found.insert(u.to_json().to_string());
                    }
                }
                report.cells.push((w.word().to_vec(), a));
                if found != expected {
                    report.mismatches.push(format!(
                        "gamma={:?}: |F_gamma|={} but |E_gamma|={}",
                        gamma.coords(),
                        found.len(),
                        expected.len()
                    ));
                }
            }
        }
        Ok(report)
    }
}

/// Image of a matrix over the prime field in `SL_n(field)`.
pub fn extend_scalars(g: &LaurentMatrix, field: Field) -> Result<LaurentMatrix> {
    if g.field() != field.prime_field() {
        return Err(Error::FieldMismatch);
    }
    let n = g.size();
    let lift = |p: &LaurentPoly| {
        LaurentPoly::from_terms(field, p.terms().map(|(k, c)| (k, field.from_int(c.coeffs().0 as i64))))
    };
    LaurentMatrix::from_rows(field, (0..n).map(|r| (0..n).map(|c| lift(g.get(r, c))).collect()).collect())
}

/// `E_α = U_α(F_p)` and `T_d = T(F_p)` inside a group over `F_{p²}`.
pub fn subfield_basis(o: &SplitOracle) -> Result<RsdBasis> {
    let group = o.group();
    let field = group.field;
    if field.degree() != 2 {
        return Err(Error::UnsupportedField { p: field.p(), e: field.degree() });
    }
    let small = crate::chevalley::split::SplitGroup { n: group.n, field: field.prime_field(), affine: group.affine };
    let torus = small.torus().iter().map(|t| extend_scalars(t, field)).collect::<Result<_>>()?;
    let groups = (0..group.rank())
        .map(|i| {
            let root = group.simple_root(i)?;
            small.root_group(&root)?.iter().map(|u| extend_scalars(u, field)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(RsdBasis { name: format!("{} points", field.prime_field()), torus, groups })
}

#[derive(Debug, Clone)]
pub enum Token {
    Torus(LaurentMatrix),
    Root(usize, LaurentMatrix),
    Reflection(usize),
}

/// `v1·w̃·v2` with `v1, v2 ∈ V = ⟨E_α⟩` and `w̃ ∈ M` a lift of `w`.
#[derive(Debug, Clone)]
pub struct VwvForm {
    pub v1: LaurentMatrix,
    pub w: WeylElement,
    pub w_lift: LaurentMatrix,
    pub v2: LaurentMatrix,
}

impl VwvForm {
    pub fn product(&self) -> LaurentMatrix {
        self.v1.mul(&self.w_lift).mul(&self.v2)
    }
}

/// Rewrites a word over `T_d ∪ E_α ∪ {s_α}` into `V·w·V` form, multiplying
/// from the right and splitting `v2 = e·v2'` with `e ∈ E_α`, `v2' ∈ E_α'`
/// before each reflection.
pub fn vwv_normal_form(f: &dyn GroupOracle, tokens: &[Token]) -> Result<VwvForm> {
    let d = Datum::new(f, 1);
    let engine = f.engine();
    let id = engine.group.identity();
    let weyl = WeylGroup::new(&f.gcm());
    let torus = f.torus();
    let mut form = VwvForm { v1: id.clone(), w: weyl.identity(), w_lift: id.clone(), v2: id.clone() };
    let mut product = id.clone();
    for tok in tokens {
        match tok {
            Token::Torus(t) => {
                if !f.in_torus(t) {
                    return Err(Error::NotInGeneratedGroup);
                }
                product = product.mul(t);
                form.w_lift = form.w_lift.mul(t);
                form.v2 = t.inverse()?.mul(&form.v2).mul(t);
            }
            Token::Root(a, e) => {
                if !d.simple_group(*a).contains(e) {
                    return Err(Error::NotInGeneratedGroup);
                }
                product = product.mul(e);
                form.v2 = form.v2.mul(e);
            }
            Token::Reflection(a) => {
                let a = *a;
                let s = d.representative(a).clone();
                let s_inv = s.inverse()?;
                product = product.mul(&s);
                let target = TwinChamber::of(engine, Sign::Plus, &form.v2.mul(&s))?;
                let mut e = None;
                for x in d.simple_group(a) {
                    if TwinChamber::of(engine, Sign::Plus, &x.mul(&s))? == target {
                        e = Some(x.clone());
                        break;
                    }
                }
                let e = e.ok_or(Error::NotInGeneratedGroup)?;
                let rest = s_inv.mul(&e.inverse()?).mul(&form.v2).mul(&s);
                let ws = form.w.times_generator(a)?;
                if ws.length() > form.w.length() {
                    let conj = form.w_lift.mul(&e).mul(&form.w_lift.inverse()?);
                    form.v1 = form.v1.mul(&conj);
                    form.w_lift = form.w_lift.mul(&s);
                    form.w = ws;
                    form.v2 = rest;
                } else if e.is_identity() {
                    form.w_lift = form.w_lift.mul(&s);
                    form.w = ws;
                    form.v2 = rest;
                } else {
                    // s·e·s⁻¹ ∈ E_{-α} ⊆ T_d·E_α·s·E_α
                    let v = s.mul(&e).mul(&s_inv);
                    let group = d.simple_group(a);
                    let mut split = None;
                    'search: for x in group {
                        let xs_inv = x.mul(&s).inverse()?;
                        for y in group {
                            let t = v.mul(&y.inverse()?).mul(&xs_inv);
                            if torus.contains(&t) {
                                split = Some((t, x.clone(), y.clone()));
                                break 'search;
                            }
                        }
                    }
                    let (t, x, y) = split.ok_or(Error::NotInGeneratedGroup)?;
                    let s2 = s.mul(&s);
                    let lift = form.w_lift.mul(&s_inv).mul(&t);
                    form.v1 = form.v1.mul(&lift.mul(&x).mul(&lift.inverse()?));
                    form.w_lift = lift.mul(&s).mul(&s2);
                    form.v2 = s2.inverse()?.mul(&y).mul(&s2).mul(&rest);
                }
            }
        }
    }
    if form.product() != product {
        return Err(Error::OracleInconsistent("normal form does not reconstruct the product".into()));
    }
    if !engine.group.in_u_plus(&form.v1) || !engine.group.in_u_plus(&form.v2) {
        return Err(Error::NotInGeneratedGroup);
    }
    Ok(form)
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub chambers: usize,
    pub panels: usize,
    pub bijective: bool,
    pub panels_match: bool,
    pub codistance_samples: usize,
    pub codistance_mismatches: usize,
}

impl MatchReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.panels_match && self.codistance_mismatches == 0
    }
}

fn mapped_keys(
    engine: &CellEngine,
    ball: &ChamberGraph,
    map: &dyn Fn(&LaurentMatrix) -> Result<LaurentMatrix>,
) -> Result<Vec<TwinChamber>> {
    ball.chambers.iter().map(|c| TwinChamber::of(engine, ball.sign, &map(&c.rep)?)).collect()
}

fn panel_sets(ball: &ChamberGraph, name: &dyn Fn(usize) -> Option<usize>) -> Option<BTreeSet<(usize, Vec<usize>)>> {
    let mut out = BTreeSet::new();
    for p in &ball.panels {
        let mut m: Vec<usize> = p.members.iter().map(|&x| name(x)).collect::<Option<_>>()?;
        m.sort_unstable();
        out.insert((p.kind, m));
    }
    Some(out)
}

/// Compares the balls of `f` with the balls of an independent model group
/// mapped into the ambient group by `map`: chamber sets, panels, and
/// codistances on `samples` random pairs.
pub fn match_balls(
    f: &dyn GroupOracle,
    model: &dyn GroupOracle,
    map: &dyn Fn(&LaurentMatrix) -> Result<LaurentMatrix>,
    radius: usize,
    samples: usize,
    seed: u64,
) -> Result<MatchReport> {
    let cfg = BallConfig { radius, ..BallConfig::default() };
    let engine = f.engine();
    let mut report = MatchReport {
        chambers: 0,
        panels: 0,
        bijective: true,
        panels_match: true,
        codistance_samples: 0,
        codistance_mismatches: 0,
    };
    let mut balls = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let fb = building_ball(f, sign, &cfg)?;
        let mb = building_ball(model, sign, &cfg)?;
        let keys = mapped_keys(engine, &mb, map)?;
        let ids: Vec<Option<usize>> = keys.iter().map(|k| fb.find(k)).collect();
        let distinct: HashSet<usize> = ids.iter().flatten().copied().collect();
        if fb.chambers.len() != mb.chambers.len() || distinct.len() != mb.chambers.len() {
            report.bijective = false;
        }
        let renamed = panel_sets(&mb, &|x| ids[x]);
        let own = panel_sets(&fb, &|x| Some(x));
        if renamed.is_none() || renamed != own {
            report.panels_match = false;
        }
        report.chambers += fb.chambers.len();
        report.panels += fb.panels.len();
        balls.push(mb);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (plus, minus) = (&balls[0], &balls[1]);
    for _ in 0..samples {
        let a = plus.chambers.choose(&mut rng).expect("nonempty ball");
        let b = minus.chambers.choose(&mut rng).expect("nonempty ball");
        let inside = codistance_of(model.engine(), &a.rep, &b.rep)?;
        let inside = to_absolute(f, &model_word(model, &inside)?)?;
        let outside = codistance_of(engine, &map(&a.rep)?, &map(&b.rep)?)?;
        report.codistance_samples += 1;
        if inside != outside {
            report.codistance_mismatches += 1;
        }
    }
    Ok(report)
}

/// Reads a Weyl element of the model's ambient group as an element of the
/// relative Weyl group shared with `f`.
fn model_word(model: &dyn GroupOracle, w: &WeylElement) -> Result<WeylElement> {
    WeylGroup::new(&model.gcm()).element(w.word())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::split::SplitGroup;
    use crate::field::Field;
    use crate::trd::{SplitOracle, Su3Oracle};

    fn cfg() -> CheckConfig {
        CheckConfig { samples: 20, level_window: 1, search_radius: 6, seed: 2 }
    }

    #[test]
    fn full_basis_gives_everything() {
        let o = SplitOracle::new(SplitGroup::loop_group(2, Field::F2).unwrap()).unwrap();
        let basis = RsdBasis {
            name: "full".into(),
            torus: o.torus(),
            groups: (0..2).map(|i| o.simple_root_group(i)).collect(),
        };
        let (f, _) = integrate_subdatum(Arc::new(o), basis, &cfg()).unwrap();
        let r = f.check_root_groups(2).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.cells.len(), 4);
    }

    #[test]
    fn su3_center_lines_integrate() {
        let o = Su3Oracle::new(2).unwrap();
        let basis = o.center_line_basis().unwrap();
        let datum = o.datum.clone();
        let (f, _) = integrate_subdatum(Arc::new(o), basis, &cfg()).unwrap();
        assert!(f.check_root_groups(2).unwrap().passed());
        let model = SplitOracle::new(datum.sl2()).unwrap();
        let m = match_balls(&f, &model, &|g| datum.embed(g), 2, 10, 0).unwrap();
        assert!(m.passed(), "{m:?}");
    }

    #[test]
    fn normal_forms() {
        let o = SplitOracle::new(SplitGroup::loop_group(2, Field::F3).unwrap()).unwrap();
        let t = o.torus()[1].clone();
        let nf = vwv_normal_form(&o, &[Token::Torus(t.clone())]).unwrap();
        assert!(nf.w.is_identity() && nf.v1.is_identity() && nf.v2.is_identity());
        assert_eq!(nf.w_lift, t);
        let u = o.simple_root_group(0)[2].clone();
        let nf = vwv_normal_form(&o, &[Token::Reflection(0), Token::Root(0, u.clone())]).unwrap();
        assert_eq!(nf.w.word(), &[0]);
        let s = o.representative(0);
        let s_inv2 = s.mul(&s).inverse().unwrap();
        let toks = [Token::Reflection(0), Token::Root(0, u), Token::Reflection(0), Token::Torus(s_inv2)];
        let nf = vwv_normal_form(&o, &toks).unwrap();
        assert_eq!(nf.w.word(), &[0]);
        let toks = [
            Token::Reflection(1),
            Token::Reflection(0),
            Token::Reflection(0),
            Token::Root(1, o.simple_root_group(1)[1].clone()),
            Token::Reflection(1),
            Token::Reflection(0),
        ];
        let nf = vwv_normal_form(&o, &toks).unwrap();
        assert_eq!(nf.w.length() % 2, 0);
    }
}
