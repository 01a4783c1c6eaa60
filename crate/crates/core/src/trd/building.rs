//! Balls in the two halves of a twin building and the codistance between
//! chambers of opposite sign.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;
use serde_json::json;

use crate::chevalley::cells::CellEngine;
use crate::error::{Error, Result};
use crate::field::Fq;
use crate::laurent::LaurentMatrix;
use crate::weyl::WeylElement;

use super::{Datum, GroupOracle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// The coset `g·B_±`, named by its normal form: the word and the root-group
/// parameters of `g·B_± = u_{a_1}(r_1)ṡ_{a_1} ⋯ u_{a_l}(r_l)ṡ_{a_l}·B_±`
/// (read through the flip on the minus side).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TwinChamber {
    pub sign: Sign,
    pub word: Vec<usize>,
    pub params: Vec<Fq>,
}

impl TwinChamber {
    pub fn of(engine: &CellEngine, sign: Sign, g: &LaurentMatrix) -> Result<Self> {
        let key = match sign {
            Sign::Plus => engine.chamber_key(g)?,
            Sign::Minus => engine.minus_chamber_key(g)?,
        };
        let (word, params) = key.into_iter().unzip();
        Ok(TwinChamber { sign, word, params })
    }

    pub fn base(sign: Sign) -> Self {
        TwinChamber { sign, word: Vec::new(), params: Vec::new() }
    }

    /// A matrix `g` with `g·B_± ` equal to this chamber.
    pub fn representative(&self, engine: &CellEngine) -> Result<LaurentMatrix> {
        let group = &engine.group;
        let mut g = group.identity();
        for (&a, &r) in self.word.iter().zip(&self.params) {
            g = g.mul(&group.root_element(&group.simple_root(a)?, r)?).mul(engine.representative(a));
        }
        Ok(match self.sign {
            Sign::Plus => g,
            Sign::Minus => group.flip(&g),
        })
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.word.iter().zip(&self.params).map(|(a, r)| format!("{a}:{r}")).collect();
        format!("{}[{}]", self.sign, parts.join(" "))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChamberNode {
    pub id: usize,
    pub chamber: TwinChamber,
    pub distance: usize,
    #[serde(skip)]
    pub rep: LaurentMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct Panel {
    pub id: usize,
    #[serde(rename = "type")]
    pub kind: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BallConfig {
    pub radius: usize,
    pub max_chambers: usize,
    pub jobs: usize,
}

impl Default for BallConfig {
    fn default() -> Self {
        BallConfig { radius: 2, max_chambers: 20_000, jobs: 1 }
    }
}

/// Chambers within gallery distance `radius` of the base chamber, with every
/// panel through a chamber at distance below `radius`.
#[derive(Debug, Clone, Serialize)]
pub struct ChamberGraph {
    pub oracle: String,
    pub sign: Sign,
    pub radius: usize,
    pub chambers: Vec<ChamberNode>,
    pub panels: Vec<Panel>,
    #[serde(skip)]
    index: HashMap<TwinChamber, usize>,
}

impl ChamberGraph {
    pub fn find(&self, c: &TwinChamber) -> Option<usize> {
        self.index.get(c).copied()
    }

    /// Sorted distinct panel sizes per panel type.
    pub fn panel_sizes(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for p in &self.panels {
            let sizes = out.entry(p.kind).or_default();
            if !sizes.contains(&p.members.len()) {
                sizes.push(p.members.len());
            }
        }
        for v in out.values_mut() {
            v.sort_unstable();
        }
        out
    }

    /// Pairs of chambers sharing a panel.
    pub fn adjacency(&self) -> Vec<(usize, usize, usize)> {
        let mut edges = Vec::new();
        for p in &self.panels {
            for (x, &a) in p.members.iter().enumerate() {
                for &b in &p.members[x + 1..] {
                    edges.push((a.min(b), a.max(b), p.kind));
                }
            }
        }
        edges.sort_unstable();
        edges
    }

    pub fn to_json(&self) -> serde_json::Value {
        let nodes: Vec<_> = self
            .chambers
            .iter()
            .map(|c| json!({"id": c.id, "label": c.chamber.label(), "distance": c.distance, "chamber": c.chamber}))
            .collect();
        let edges: Vec<_> = self.adjacency().into_iter().map(|(a, b, t)| json!({"a": a, "b": b, "type": t})).collect();
        let panels: Vec<_> =
            self.panels.iter().map(|p| json!({"id": p.id, "type": p.kind, "members": p.members})).collect();
        json!({"oracle": self.oracle, "sign": self.sign, "radius": self.radius, "nodes": nodes, "edges": edges, "panels": panels})
    }

    /// Chamber-panel incidence graph; panel nodes are shaped by type.
    pub fn to_dot(&self) -> String {
        const SHAPES: [&str; 4] = ["box", "diamond", "triangle", "hexagon"];
        let name = match self.sign {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        };
        let mut out = format!("graph {name} {{\n");
        for c in &self.chambers {
            out.push_str(&format!("  c{} [shape=circle,label=\"{}\"];\n", c.id, c.chamber.label()));
        }
        for p in &self.panels {
            let shape = SHAPES[p.kind % SHAPES.len()];
            out.push_str(&format!("  p{} [shape={shape},label=\"{}\"];\n", p.id, p.kind));
        }
        for p in &self.panels {
            for m in &p.members {
                out.push_str(&format!("  c{m} -- p{};\n", p.id));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tdistance\tchamber\n");
        for c in &self.chambers {
            out.push_str(&format!("{}\t{}\t{}\n", c.id, c.distance, c.chamber.label()));
        }
        out
    }
}

fn keys_parallel(engine: &CellEngine, sign: Sign, mats: &[LaurentMatrix], jobs: usize) -> Result<Vec<TwinChamber>> {
    if jobs <= 1 || mats.len() < 2 {
        return mats.iter().map(|g| TwinChamber::of(engine, sign, g)).collect();
    }
    let chunk = mats.len().div_ceil(jobs);
    std::thread::scope(|scope| {
        let handles: Vec<_> = mats
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || part.iter().map(|g| TwinChamber::of(engine, sign, g)).collect::<Result<Vec<_>>>())
            })
            .collect();
        let mut out = Vec::with_capacity(mats.len());
        for h in handles {
            out.extend(h.join().expect("worker panicked")?);
        }
        Ok(out)
    })
}

/// Breadth-first enumeration of the ball around `B_sign`. The panel of type
/// `s` at `g·B` consists of `g·B` and `g·u·ṡ·B` for `u` in `U_{α_s}` (plus
/// side) or `U_{-α_s}` (minus side).
pub fn building_ball(oracle: &dyn GroupOracle, sign: Sign, config: &BallConfig) -> Result<ChamberGraph> {
    let d = Datum::new(oracle, 1);
    let engine = oracle.engine();
    let n = d.rank();
    let mut steps: Vec<Vec<LaurentMatrix>> = Vec::with_capacity(n);
    for i in 0..n {
        let s = d.representative(i);
        let s_inv = s.inverse()?;
        let us: Vec<LaurentMatrix> = match sign {
            Sign::Plus => d.simple_group(i).to_vec(),
            Sign::Minus => d.simple_group(i).iter().map(|u| s.mul(u).mul(&s_inv)).collect(),
        };
        steps.push(us.iter().map(|u| u.mul(s)).collect());
    }
    let base = oracle.engine().group.identity();
    let base_key = TwinChamber::of(engine, sign, &base)?;
    let mut graph = ChamberGraph {
        oracle: oracle.name(),
        sign,
        radius: config.radius,
        chambers: vec![ChamberNode { id: 0, chamber: base_key.clone(), distance: 0, rep: base }],
        panels: Vec::new(),
        index: HashMap::from([(base_key, 0)]),
    };
    let mut panel_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut head = 0;
    while head < graph.chambers.len() {
        let (dist, g) = (graph.chambers[head].distance, graph.chambers[head].rep.clone());
        if dist >= config.radius {
            head += 1;
            continue;
        }
        for (i, step) in steps.iter().enumerate() {
            if panel_of.contains_key(&(i, head)) {
                continue;
            }
            let mats: Vec<LaurentMatrix> = step.iter().map(|x| g.mul(x)).collect();
            let keys = keys_parallel(engine, sign, &mats, config.jobs)?;
            let pid = graph.panels.len();
            let mut members = vec![head];
            for (key, m) in keys.into_iter().zip(mats) {
                let id = match graph.index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = graph.chambers.len();
                        if id >= config.max_chambers {
                            return Err(Error::ExplosionGuard { cap: config.max_chambers });
                        }
                        graph.index.insert(key.clone(), id);
                        graph.chambers.push(ChamberNode { id, chamber: key, distance: dist + 1, rep: m });
                        id
                    }
                };
                if !members.contains(&id) {
                    members.push(id);
                }
            }
            for &m in &members {
                panel_of.insert((i, m), pid);
            }
            graph.panels.push(Panel { id: pid, kind: i, members });
        }
        head += 1;
    }
    Ok(graph)
}

/// `w` with `g⁻¹·h ∈ B_+·w·B_-` for `c_+ = g·B_+` and `c_- = h·B_-`.
pub fn codistance(engine: &CellEngine, a: &TwinChamber, b: &TwinChamber) -> Result<WeylElement> {
    let (plus, minus) = match (a.sign, b.sign) {
        (Sign::Plus, Sign::Minus) => (a, b),
        (Sign::Minus, Sign::Plus) => (b, a),
        _ => return Err(Error::SameSign),
    };
    let g = plus.representative(engine)?;
    let h = minus.representative(engine)?;
    engine.birkhoff_cell_unbounded(&g.inverse()?.mul(&h))
}

/// Codistance from representatives.
pub fn codistance_of(engine: &CellEngine, g: &LaurentMatrix, h: &LaurentMatrix) -> Result<WeylElement> {
    engine.birkhoff_cell_unbounded(&g.inverse()?.mul(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::split::SplitGroup;
    use crate::field::Field;
    use crate::trd::{SplitOracle, Su3Oracle};

    fn cfg(radius: usize) -> BallConfig {
        BallConfig { radius, ..BallConfig::default() }
    }

    #[test]
    fn sl2_small_balls() {
        let o = SplitOracle::new(SplitGroup::loop_group(2, Field::F2).unwrap()).unwrap();
        let b0 = building_ball(&o, Sign::Plus, &cfg(0)).unwrap();
        assert_eq!(b0.chambers.len(), 1);
        assert!(b0.panels.is_empty());
        let b1 = building_ball(&o, Sign::Plus, &cfg(1)).unwrap();
        assert_eq!(b1.chambers.len(), 5);
        assert_eq!(b1.panel_sizes(), BTreeMap::from([(0, vec![3]), (1, vec![3])]));
        let b2 = building_ball(&o, Sign::Minus, &cfg(2)).unwrap();
        assert_eq!(b2.chambers.len(), 1 + 4 + 8);
    }

    #[test]
    fn normal_forms_name_cosets() {
        let o = SplitOracle::new(SplitGroup::loop_group(2, Field::F3).unwrap()).unwrap();
        let e = o.engine();
        for sign in [Sign::Plus, Sign::Minus] {
            let ball = building_ball(&o, sign, &cfg(2)).unwrap();
            for c in &ball.chambers {
                let r = c.chamber.representative(e).unwrap();
                let x = r.inverse().unwrap().mul(&c.rep);
                match sign {
                    Sign::Plus => assert!(e.group.in_b_plus(&x)),
                    Sign::Minus => assert!(e.group.in_b_minus(&x)),
                }
                assert_eq!(TwinChamber::of(e, sign, &r).unwrap(), c.chamber);
            }
            for (i, a) in ball.chambers.iter().enumerate() {
                for b in &ball.chambers[i + 1..] {
                    let x = a.rep.inverse().unwrap().mul(&b.rep);
                    let same = match sign {
                        Sign::Plus => e.group.in_b_plus(&x),
                        Sign::Minus => e.group.in_b_minus(&x),
                    };
                    assert!(!same);
                }
            }
        }
    }

    #[test]
    fn codistance_examples() {
        let o = SplitOracle::new(SplitGroup::loop_group(2, Field::F2).unwrap()).unwrap();
        let e = o.engine();
        let p = TwinChamber::base(Sign::Plus);
        let m = TwinChamber::base(Sign::Minus);
        assert!(codistance(e, &p, &m).unwrap().is_identity());
        let s = TwinChamber::of(e, Sign::Plus, e.representative(0)).unwrap();
        assert_eq!(codistance(e, &s, &m).unwrap().word(), &[0]);
        assert_eq!(codistance(e, &p, &p).unwrap_err(), Error::SameSign);
    }

    #[test]
    fn su3_valencies_q2() {
        let o = Su3Oracle::new(2).unwrap();
        let b = building_ball(&o, Sign::Plus, &cfg(2)).unwrap();
        assert_eq!(b.panel_sizes(), BTreeMap::from([(0, vec![9]), (1, vec![3])]));
        let dot = b.to_dot();
        assert!(dot.starts_with("graph plus {"));
    }

    #[test]
    fn parallel_matches_serial() {
        let o = SplitOracle::new(SplitGroup::loop_group(3, Field::F2).unwrap()).unwrap();
        let a = building_ball(&o, Sign::Plus, &cfg(2)).unwrap();
        let b = building_ball(&o, Sign::Plus, &BallConfig { radius: 2, jobs: 3, ..BallConfig::default() }).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
