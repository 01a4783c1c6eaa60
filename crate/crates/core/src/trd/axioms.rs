//! Sampled verification of the twin root datum axioms and of the axioms of
//! a basis for a root subdatum.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentMatrix;
use crate::roots::RootVector;

use super::{level, support, Datum, GroupOracle};

#[derive(Debug, Clone, Serialize)]
pub struct CheckConfig {
    pub samples: usize,
    pub level_window: i64,
    pub search_radius: usize,
    pub seed: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { samples: 200, level_window: 2, search_radius: 8, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomStatus {
    Pass,
    Fail,
    Vacuous,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomResult {
    pub axiom: String,
    pub status: AxiomStatus,
    pub checked: usize,
    pub witness: Option<String>,
    pub note: Option<String>,
}

impl AxiomResult {
    fn new(axiom: &str) -> Self {
        AxiomResult { axiom: axiom.into(), status: AxiomStatus::Pass, checked: 0, witness: None, note: None }
    }

    fn fail(&mut self, witness: String) {
        if self.status != AxiomStatus::Fail {
            self.status = AxiomStatus::Fail;
            self.witness = Some(witness);
        }
    }

    fn failed(&self) -> bool {
        self.status == AxiomStatus::Fail
    }

    fn finish(mut self) -> Self {
        if self.checked == 0 && self.status == AxiomStatus::Pass {
            self.status = AxiomStatus::Vacuous;
        }
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub oracle: String,
    pub config: CheckConfig,
    pub axioms: Vec<AxiomResult>,
    /// Sampled root pairs whose prenilpotency or interval was undecided.
    pub undecided: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.status != AxiomStatus::Fail)
    }

    pub fn get(&self, axiom: &str) -> Option<&AxiomResult> {
        self.axioms.iter().find(|a| a.axiom == axiom)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("axiom\tstatus\tchecked\twitness\n");
        for a in &self.axioms {
            let status = serde_json::to_value(a.status).expect("serializable");
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                a.axiom,
                status.as_str().unwrap_or(""),
                a.checked,
                a.witness.as_deref().unwrap_or("-")
            ));
        }
        out
    }
}

fn roots_in_window(d: &Datum, window: i64) -> Result<Vec<RootVector>> {
    let gcm = d.oracle.gcm();
    let radius = d.roots.search_radius();
    Ok(d.roots.enumerate_real_roots(radius)?.into_iter().filter(|g| level(&gcm, g).abs() <= window).collect())
}

fn contains(set: &[LaurentMatrix], g: &LaurentMatrix) -> bool {
    set.iter().any(|x| x == g)
}

fn short(g: &LaurentMatrix) -> String {
    g.to_json().to_string()
}

/// Checks the four axioms on samples from the configured level window.
pub fn check_trd(oracle: &dyn GroupOracle, config: &CheckConfig) -> Result<CheckReport> {
    let d = Datum::new(oracle, config.search_radius);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let roots = roots_in_window(&d, config.level_window)?;
    let torus = oracle.torus();
    let n = d.rank();
    let mut undecided = 0;

    let mut trd1 = AxiomResult::new("TRD1");
    trd1.note = Some("torus normalizes each simple root group and root groups are nontrivial".into());
    for i in 0..n {
        let group = d.simple_group(i);
        if group.len() < 2 || !group[0].is_identity() {
            trd1.fail(format!("U_{i} is trivial or does not start with the identity"));
        }
        for h in &torus {
            for u in group {
                trd1.checked += 1;
                if !contains(group, &u.conjugate(h)?) {
                    trd1.fail(format!("h={} does not normalize U_{i} at u={}", short(h), short(u)));
                }
            }
        }
    }

    let mut trd2 = AxiomResult::new("TRD2");
    trd2.note = Some(format!("level window |k| <= {}", config.level_window));
    let mut attempts = 0;
    while trd2.checked < config.samples && attempts < config.samples * 50 && roots.len() >= 2 && !trd2.failed() {
        attempts += 1;
        let a = roots.choose(&mut rng).expect("nonempty");
        let b = roots.choose(&mut rng).expect("nonempty");
        if a == b || *a == b.neg() {
            continue;
        }
        match d.roots.is_prenilpotent_pair(a, b) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(Error::Undecided { .. }) => {
                undecided += 1;
                continue;
            }
            Err(e) => return Err(e),
        }
        let open = match d.roots.open_interval(a, b) {
            Ok(o) => o,
            Err(Error::Undecided { .. }) => {
                undecided += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let pattern = d.pattern(&open)?;
        let ua = d.root_group(a)?;
        let ub = d.root_group(b)?;
        let u = &ua[rng.gen_range(1..ua.len())];
        let v = &ub[rng.gen_range(1..ub.len())];
        let c = u.commutator(v)?;
        trd2.checked += 1;
        if !d.in_pattern(&c, &pattern) {
            trd2.fail(format!(
                "alpha={:?} beta={:?}: [u,v]={} leaves U_(alpha,beta) with {} roots",
                a.coords(),
                b.coords(),
                short(&c),
                open.len()
            ));
        }
    }

    let mut trd3 = AxiomResult::new("TRD3");
    trd3.note = Some("canonical u = first nontrivial element of each simple root group".into());
    'outer: for i in 0..n {
        let group = d.simple_group(i).to_vec();
        let s = d.representative(i).clone();
        let s_inv = s.inverse()?;
        let neg: Vec<LaurentMatrix> = group.iter().map(|x| s.mul(x).mul(&s_inv)).collect();
        let si = d.weyl().generator(i)?;
        let Some(u0) = group.get(1) else { continue };
        let m0 = match oracle.mu(i, u0) {
            Ok(m) => m,
            Err(e) => {
                trd3.fail(format!("no mu-map for the canonical element of U_{i}: {e}"));
                continue;
            }
        };
        let m0_inv = m0.inverse()?;
        for u in &group[1..] {
            let m = match oracle.mu(i, u) {
                Ok(m) => m,
                Err(e) => {
                    trd3.fail(format!("no mu-map for u={} in U_{i}: {e}", short(u)));
                    continue 'outer;
                }
            };
            let u_inv = u.inverse()?;
            let factored = neg.iter().any(|a| contains(&neg, &u_inv.mul(&a.inverse().expect("unimodular")).mul(&m)));
            if !factored {
                trd3.fail(format!("m(u)={} is not in U_-a u U_-a for u={}", short(&m), short(u)));
                continue 'outer;
            }
            if !oracle.in_torus(&m.mul(&m0_inv)) {
                trd3.fail(format!("m(u)m(u0)^-1 = {} is not in H", short(&m.mul(&m0_inv))));
                continue 'outer;
            }
            let m_inv = m.inverse()?;
            let per_u = (config.samples / (n * (group.len() - 1))).max(1);
            for _ in 0..per_u {
                let beta = roots.choose(&mut rng).expect("nonempty");
                let target = d.roots.apply(&si, beta)?;
                let ub = d.root_group(beta)?;
                let ut = d.root_group(&target)?;
                trd3.checked += 1;
                let images: HashSet<String> = ub.iter().map(|x| short(&m.mul(x).mul(&m_inv))).collect();
                let expect: HashSet<String> = ut.iter().map(short).collect();
                if images != expect {
                    trd3.fail(format!(
                        "m(u) for u={} does not conjugate U_{:?} onto U_{:?}",
                        short(u),
                        beta.coords(),
                        target.coords()
                    ));
                    continue 'outer;
                }
            }
        }
    }

    let mut trd4 = AxiomResult::new("TRD4");
    let group = &oracle.engine().group;
    for i in 0..n {
        let s = d.representative(i);
        let s_inv = s.inverse()?;
        let pos = d.simple_group(i);
        trd4.checked += 2;
        if pos.iter().all(|u| group.in_u_minus(u)) {
            trd4.fail(format!("U_{i} is contained in U_-"));
        }
        if pos.iter().all(|u| group.in_u_plus(&s.mul(u).mul(&s_inv))) {
            trd4.fail(format!("U_-{i} is contained in U_+"));
        }
    }

    Ok(CheckReport {
        oracle: oracle.name(),
        config: config.clone(),
        axioms: vec![trd1.finish(), trd2.finish(), trd3.finish(), trd4.finish()],
        undecided,
    })
}

/// Torus part and simple sub-root-groups, each listed with the identity first.
#[derive(Debug, Clone)]
pub struct RsdBasis {
    pub name: String,
    pub torus: Vec<LaurentMatrix>,
    pub groups: Vec<Vec<LaurentMatrix>>,
}

impl RsdBasis {
    /// `s_α = m(v)` for the first nontrivial `v ∈ E_α`.
    pub fn reflections(&self, oracle: &dyn GroupOracle) -> Result<Vec<LaurentMatrix>> {
        self.groups
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let v = e.get(1).ok_or_else(|| Error::RsdViolation(format!("E_{i} is trivial")))?;
                oracle.mu(i, v)
            })
            .collect()
    }

    pub fn in_torus(&self, g: &LaurentMatrix) -> bool {
        contains(&self.torus, g)
    }
}

fn closure(gens: &[LaurentMatrix], cap: usize) -> Result<Vec<LaurentMatrix>> {
    let mut seen: HashSet<String> = HashSet::new();
    let mut out = Vec::new();
    let id = gens[0].mul(&gens[0].inverse()?);
    seen.insert(short(&id));
    out.push(id);
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let x = out[i].mul(g);
            if seen.insert(short(&x)) {
                if out.len() >= cap {
                    return Err(Error::ExplosionGuard { cap });
                }
                out.push(x);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Checks the five axioms of a basis for a root subdatum.
pub fn check_rsd(oracle: &dyn GroupOracle, basis: &RsdBasis, config: &CheckConfig) -> Result<CheckReport> {
    let d = Datum::new(oracle, config.search_radius);
    let n = d.rank();
    if basis.groups.len() != n {
        return Err(Error::RankMismatch { left: basis.groups.len(), right: n });
    }
    for (i, e) in basis.groups.iter().enumerate() {
        if e.len() < 2 || !e[0].is_identity() {
            return Err(Error::RsdViolation(format!("E_{i} must be nontrivial with the identity first")));
        }
    }
    let s = basis.reflections(oracle)?;
    let s_inv: Vec<LaurentMatrix> = s.iter().map(|x| x.inverse()).collect::<Result<_>>()?;
    let cox = d.weyl().coxeter_matrix();

    let mut rsd1 = AxiomResult::new("RSD1");
    let mut skipped = 0;
    for i in 0..n {
        for j in 0..n {
            let Some(m) = cox.get(i, j) else {
                skipped += 1;
                continue;
            };
            let prod = s[i].mul(&s[j]);
            let mut p = prod.clone();
            for _ in 1..m {
                p = p.mul(&prod);
            }
            rsd1.checked += 1;
            if !basis.in_torus(&p) {
                rsd1.fail(format!("(s_{i} s_{j})^{m} = {} is not in T_d", short(&p)));
            }
        }
    }
    if skipped > 0 {
        rsd1.note = Some(format!("{skipped} ordered pairs with m = inf skipped"));
    }

    let mut rsd2 = AxiomResult::new("RSD2");
    for (i, e) in basis.groups.iter().enumerate() {
        let ms: Vec<LaurentMatrix> = e[1..].iter().map(|v| oracle.mu(i, v)).collect::<Result<_>>()?;
        for (a, ma) in ms.iter().enumerate() {
            for (b, mb) in ms.iter().enumerate() {
                rsd2.checked += 1;
                let q = ma.mul(&mb.inverse()?);
                if !basis.in_torus(&q) {
                    rsd2.fail(format!(
                        "m(r)m(t)^-1 = {} not in T_d for r = E_{i}[{}], t = E_{i}[{}]",
                        short(&q),
                        a + 1,
                        b + 1
                    ));
                }
            }
        }
    }

    let mut rsd3 = AxiomResult::new("RSD3");
    for (i, e) in basis.groups.iter().enumerate() {
        for t in &basis.torus {
            for v in e {
                rsd3.checked += 1;
                let c = v.conjugate(t)?;
                if !contains(e, &c) {
                    rsd3.fail(format!("t = {} moves {} out of E_{i}", short(t), short(v)));
                }
            }
            rsd3.checked += 1;
            let c = s[i].mul(t).mul(&s_inv[i]);
            if !basis.in_torus(&c) {
                rsd3.fail(format!("s_{i} moves t = {} out of T_d", short(t)));
            }
        }
    }

    let mut rsd4 = AxiomResult::new("RSD4");
    for (i, e) in basis.groups.iter().enumerate() {
        let conj: Vec<LaurentMatrix> = e[1..].iter().map(|x| s[i].mul(x).mul(&s_inv[i])).collect();
        for v in &e[1..] {
            rsd4.checked += 1;
            let m = oracle.mu(i, v)?;
            let found = conj.iter().any(|a| {
                let rest = a.mul(v);
                conj.iter().any(|b| rest.mul(b) == m)
            });
            if !found {
                rsd4.fail(format!("no v1, v2 in E_{i}* decompose m(v) for v = {}", short(v)));
            }
        }
    }

    let mut rsd5 = AxiomResult::new("RSD5");
    for i in 0..n {
        for j in 0..n {
            if i == j || cox.get(i, j).is_none() {
                continue;
            }
            let alpha = d.roots.simple(i)?;
            let beta = d.roots.simple(j)?;
            let open = d.roots.open_interval(&alpha, &beta)?;
            let pattern = d.pattern(&open)?;
            let ub = d.root_group(&beta)?;
            let mut gens = Vec::new();
            for ua in &basis.groups[i][1..] {
                let ua_inv = ua.inverse()?;
                for v in &basis.groups[j] {
                    gens.push(ua.mul(v).mul(&ua_inv));
                }
            }
            let x = closure(&gens, 20_000)?;
            let keys: HashSet<String> = x.iter().map(short).collect();
            for g in &x {
                rsd5.checked += 1;
                let split = ub.iter().find_map(|u2| {
                    let u1 = g.mul(&u2.inverse().ok()?);
                    d.in_pattern(&u1, &pattern).then_some((u1, u2.clone()))
                });
                match split {
                    Some((u1, u2)) if keys.contains(&short(&u1)) && keys.contains(&short(&u2)) => {}
                    Some((u1, _)) => rsd5.fail(format!(
                        "x = {} in X for ({i},{j}) has components outside X (support {:?})",
                        short(g),
                        support(&u1)
                    )),
                    None => rsd5.fail(format!("x = {} is not in U_(a,b) U_b for ({i},{j})", short(g))),
                }
            }
        }
    }
    if rsd5.checked == 0 {
        rsd5.note = Some("no pair of distinct simple roots with finite m".into());
    }

    Ok(CheckReport {
        oracle: format!("{} / {}", oracle.name(), basis.name),
        config: config.clone(),
        axioms: vec![rsd1.finish(), rsd2.finish(), rsd3.finish(), rsd4.finish(), rsd5.finish()],
        undecided: 0,
    })
}
