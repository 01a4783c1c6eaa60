//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twinroot::chevalley::{AffineRoot, CellEngine, SplitGroup};
use twinroot::cone::{relative_coxeter, DiagramAutomorphism};
use twinroot::field::Field;
use twinroot::gcm::GeneralizedCartanMatrix;
use twinroot::laurent::{LaurentMatrix, LaurentPoly};
use twinroot::roots::{RootSystem, RootVector};
use twinroot::trd::{
    building_ball, check_trd, extend_scalars, integrate_subdatum, match_balls, subfield_basis, AxiomStatus, BallConfig,
    CheckConfig, Fault, FaultyOracle, GroupOracle, RsdBasis, Sign, SplitOracle, Su3Oracle,
};
use twinroot::weyl::{coxeter_matrix, WeylGroup};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn suite() -> Vec<(&'static str, GeneralizedCartanMatrix)> {
    vec![
        ("A2", GeneralizedCartanMatrix::a2()),
        ("B2", GeneralizedCartanMatrix::b2()),
        ("G2", GeneralizedCartanMatrix::g2()),
        ("affine A1", GeneralizedCartanMatrix::affine_a1()),
        ("affine A2", GeneralizedCartanMatrix::affine_a2()),
    ]
}

/// Order of `s1 s2` from the 2x2 reflection matrices, computed from scratch.
fn brute_order(a12: i64, a21: i64, cap: u32) -> Option<u32> {
    // s_i(α_j) = α_j - a_ij α_i on the basis (α_1, α_2); columns are images
    let s1 = [[-1, -a12], [0, 1]];
    let s2 = [[1, 0], [-a21, -1]];
    // entries of infinite-order products grow without bound; overflow means infinite
    let mul = |x: [[i64; 2]; 2], y: [[i64; 2]; 2]| {
        let mut z = [[0; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                z[r][c] = x[r][0].checked_mul(y[0][c])?.checked_add(x[r][1].checked_mul(y[1][c])?)?;
            }
        }
        Some(z)
    };
    let p = mul(s1, s2)?;
    let mut cur = p;
    for k in 1..=cap {
        if cur == [[1, 0], [0, 1]] {
            return Some(k);
        }
        cur = mul(cur, p)?;
    }
    None
}

fn coxeter_table() -> Outcome {
    let table = |prod: i64| match prod {
        0 => Some(2),
        1 => Some(3),
        2 => Some(4),
        3 => Some(6),
        _ => None,
    };
    let mut checked = 0;
    for a12 in -4..=0i64 {
        for a21 in -4..=0i64 {
            if (a12 == 0) != (a21 == 0) {
                continue;
            }
            let a = GeneralizedCartanMatrix::new(vec![vec![2, a12], vec![a21, 2]]).map_err(e)?;
            let got = coxeter_matrix(&a).get(0, 1);
            let want = table(a12 * a21);
            ensure(got == want, || format!("a12={a12} a21={a21}: got {got:?}, table {want:?}"))?;
            let brute = brute_order(a12, a21, 24);
            ensure(brute == want, || format!("a12={a12} a21={a21}: matrix order {brute:?}, table {want:?}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} matrices"))
}

fn weyl_orders() -> Outcome {
    let mut sizes = Vec::new();
    for (name, a, want) in [
        ("A2", GeneralizedCartanMatrix::a2(), 6),
        ("B2", GeneralizedCartanMatrix::b2(), 8),
        ("G2", GeneralizedCartanMatrix::g2(), 12),
    ] {
        let w = WeylGroup::new(&a);
        let all = w.enumerate_ball(64).map_err(e)?;
        ensure(all.len() == want, || format!("|W({name})| = {}, expected {want}", all.len()))?;
        let closed = all.iter().all(|x| (0..2).all(|i| all.contains(&x.times_generator(i).expect("index"))));
        ensure(closed, || format!("ball for {name} is not closed"))?;
        sizes.push(format!("{name}={}", all.len()));
    }
    Ok(sizes.join(" "))
}

fn opposite_simple_intervals() -> Outcome {
    let mut pairs = 0;
    for (name, a) in suite() {
        let rs = RootSystem::new(&a);
        let n = a.rank();
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let open = rs.open_interval(&RootVector::simple(n, i).neg(), &RootVector::simple(n, j)).map_err(e)?;
                ensure(open.is_empty(), || format!("{name}: (-a{i}, a{j}) = {open:?}"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn prenilpotency_brute_force() -> Outcome {
    let mut compared = 0;
    for (name, a) in
        [("affine A1", GeneralizedCartanMatrix::affine_a1()), ("affine A2", GeneralizedCartanMatrix::affine_a2())]
    {
        let n = a.rank();
        let w = WeylGroup::new(&a);
        let ball = w.enumerate_ball(8).map_err(e)?;
        let mut roots: BTreeSet<Vec<i64>> = BTreeSet::new();
        for x in w.enumerate_ball(3).map_err(e)? {
            for i in 0..n {
                let r = x.apply(&RootVector::simple(n, i).0).map_err(e)?;
                roots.insert(r.iter().map(|c| -c).collect());
                roots.insert(r);
            }
        }
        let roots: Vec<Vec<i64>> = roots.into_iter().collect();
        let images: Vec<Vec<(bool, bool)>> = ball
            .iter()
            .map(|x| {
                roots
                    .iter()
                    .map(|r| {
                        let img = x.apply(r).expect("in range");
                        (img.iter().all(|&c| c >= 0), img.iter().all(|&c| c <= 0))
                    })
                    .collect()
            })
            .collect();
        let rs = RootSystem::with_radius(&a, 8);
        for p in 0..roots.len() {
            for q in 0..roots.len() {
                if p == q {
                    continue;
                }
                let both_pos = images.iter().any(|im| im[p].0 && im[q].0);
                let both_neg = images.iter().any(|im| im[p].1 && im[q].1);
                let brute = both_pos && both_neg;
                let got = rs
                    .is_prenilpotent_pair(&RootVector(roots[p].clone()), &RootVector(roots[q].clone()))
                    .map_err(|err| format!("{name} {:?} {:?}: {err}", roots[p], roots[q]))?;
                ensure(got == brute, || format!("{name} {:?} {:?}: oracle {got}, search {brute}", roots[p], roots[q]))?;
                compared += 1;
            }
        }
    }
    Ok(format!("{compared} pairs, 0 undecided"))
}

/// `γ = xα + yβ` with `x, y > 0`, solved in the rationals.
fn strictly_between(alpha: &[i64], beta: &[i64], gamma: &[i64]) -> bool {
    let n = alpha.len();
    for r in 0..n {
        for s in r + 1..n {
            let det = alpha[r] * beta[s] - alpha[s] * beta[r];
            if det == 0 {
                continue;
            }
            let x = Rational64::new(gamma[r] * beta[s] - gamma[s] * beta[r], det);
            let y = Rational64::new(alpha[r] * gamma[s] - alpha[s] * gamma[r], det);
            let zero = Rational64::from_integer(0);
            let fits = (0..n).all(|c| x * alpha[c] + y * beta[c] == Rational64::from_integer(gamma[c]));
            return fits && x > zero && y > zero;
        }
    }
    false
}

fn nibbling() -> Outcome {
    let mut lens = Vec::new();
    for (name, a) in [
        ("A2", GeneralizedCartanMatrix::a2()),
        ("B2", GeneralizedCartanMatrix::b2()),
        ("G2", GeneralizedCartanMatrix::g2()),
    ] {
        let rs = RootSystem::new(&a);
        let w = WeylGroup::new(&a);
        let mut positive: BTreeSet<Vec<i64>> = BTreeSet::new();
        for x in w.enumerate_ball(64).map_err(e)? {
            for i in 0..2 {
                let r = x.apply(&RootVector::simple(2, i).0).map_err(e)?;
                if r.iter().all(|&c| c >= 0) {
                    positive.insert(r);
                }
            }
        }
        let psi: Vec<RootVector> = positive.iter().cloned().map(RootVector).collect();
        let seq = rs.nibbling_sequence(&[0, 1], &psi).map_err(e)?.roots;
        let got: BTreeSet<Vec<i64>> = seq.iter().map(|r| r.0.clone()).collect();
        ensure(got == positive && seq.len() == positive.len(), || {
            format!("{name}: sequence is not a permutation of the positive roots")
        })?;
        for i in 0..seq.len() {
            for j in i + 1..seq.len() {
                for g in &positive {
                    if strictly_between(&seq[i].0, &seq[j].0, g) {
                        let inside = seq[i + 1..j].iter().any(|r| &r.0 == g);
                        ensure(inside, || {
                            format!(
                                "{name}: {g:?} lies between {} and {} but not between them in the order",
                                seq[i], seq[j]
                            )
                        })?;
                    }
                }
            }
        }
        lens.push(format!("{name}:{}", seq.len()));
    }
    Ok(lens.join(" "))
}

fn mu_coroot() -> Outcome {
    let mut checked = 0;
    for f in [Field::F2, Field::F3, Field::F4, Field::F9] {
        let group = SplitGroup::loop_group(2, f).map_err(e)?;
        let oracle = SplitOracle::new(group).map_err(e)?;
        let root = group.simple_root(0).map_err(e)?;
        let m1_inv = group.mu(&root, f.one()).map_err(e)?.inverse().map_err(e)?;
        for r in f.nonzero() {
            let h = LaurentMatrix::diagonal(&[LaurentPoly::constant(r), LaurentPoly::constant(r.inv().map_err(e)?)]);
            let m = group.mu(&root, r).map_err(e)?;
            ensure(m.mul(&m1_inv) == h, || format!("F{}: m(u(r))m(u(1))^-1 != diag(r, r^-1)", f.order()))?;
            let searched = oracle.mu(0, &group.root_element(&root, r).map_err(e)?).map_err(e)?;
            ensure(searched == m, || format!("F{}: searched mu disagrees with the closed form", f.order()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} scalars"))
}

fn random_sl2(engine: &CellEngine, rng: &mut ChaCha8Rng, window: i32) -> LaurentMatrix {
    let f = engine.group.field;
    loop {
        let mut g = engine.group.identity();
        for _ in 0..rng.gen_range(1..10) {
            let k = rng.gen_range(-2..=2);
            let (i, j) = if rng.gen_bool(0.5) { (0, 1) } else { (1, 0) };
            let root = AffineRoot::new(2, i, j, k).expect("valid root");
            g = g.mul(&engine.group.root_element(&root, f.random_nonzero(rng)).expect("root element"));
        }
        if g.within_window(window) {
            return g;
        }
    }
}

fn bruhat_soundness() -> Outcome {
    let engine = CellEngine::new(SplitGroup::loop_group(2, Field::F2).map_err(e)?).map_err(e)?;
    let window = twinroot::chevalley::cells::default_window();
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let mut cells: BTreeMap<usize, usize> = BTreeMap::new();
    for k in 0..500 {
        let g = random_sl2(&engine, &mut rng, window);
        let d = engine.bruhat_cell(&g, window).map_err(e)?;
        ensure(d.b1.mul(&d.w_dot).mul(&d.b2) == g, || format!("sample {k}: b1 w b2 != g"))?;
        ensure(engine.group.in_b_plus(&d.b1) && engine.group.in_b_plus(&d.b2), || {
            format!("sample {k}: factor outside B+")
        })?;
        for _ in 0..3 {
            let r = engine.bruhat_cell_randomized(&g, window, &mut rng).map_err(e)?;
            ensure(r.w == d.w, || format!("sample {k}: cell {:?} vs {:?}", r.w.word(), d.w.word()))?;
            ensure(r.b1.mul(&r.w_dot).mul(&r.b2) == g, || format!("sample {k}: randomized round trip"))?;
        }
        *cells.entry(d.w.length()).or_default() += 1;
    }
    Ok(format!("cell lengths {cells:?}"))
}

fn trd_suite() -> Outcome {
    let config = CheckConfig { samples: 200, level_window: 2, search_radius: 8, seed: 7 };
    let mut lines = Vec::new();
    for (n, f) in [(2, Field::F3), (3, Field::F2)] {
        let o = SplitOracle::new(SplitGroup::loop_group(n, f).map_err(e)?).map_err(e)?;
        let r = check_trd(&o, &config).map_err(e)?;
        ensure(r.passed(), || format!("{}: {}", r.oracle, r.to_tsv()))?;
        ensure(r.undecided == 0, || format!("{}: {} undecided", r.oracle, r.undecided))?;
        let counts: Vec<String> = r.axioms.iter().map(|a| format!("{}={}", a.axiom, a.checked)).collect();
        lines.push(format!("{} [{}]", r.oracle, counts.join(",")));
    }
    let base = SplitOracle::new(SplitGroup::loop_group(2, Field::F3).map_err(e)?).map_err(e)?;
    for fault in [Fault::ConjugatedRootGroup, Fault::WrongMu, Fault::NegatedRootGroup] {
        let r = check_trd(&FaultyOracle::new(base.clone(), fault), &config).map_err(e)?;
        let failed: Vec<&str> = r
            .axioms
            .iter()
            .filter(|a| a.status == AxiomStatus::Fail && a.witness.is_some())
            .map(|a| a.axiom.as_str())
            .collect();
        ensure(!failed.is_empty(), || format!("fault {fault} not detected"))?;
        lines.push(format!("{fault} caught by {}", failed.join(",")));
    }
    Ok(lines.join("; "))
}

fn su3_structure() -> Outcome {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        let o = Su3Oracle::new(q).map_err(e)?;
        let va = o.datum.relative_root_group(0, 0).map_err(e)?.elements;
        ensure(va.len() == (q * q * q) as usize, || format!("q={q}: |V_a| = {}", va.len()))?;
        let keys: HashSet<&LaurentMatrix> = va.iter().collect();
        ensure(keys.len() == va.len(), || format!("q={q}: V_a has repeated elements"))?;
        let closed = va.iter().all(|x| va.iter().all(|y| keys.contains(&x.mul(y))));
        ensure(closed, || format!("q={q}: V_a is not closed"))?;
        let center = va.iter().filter(|x| va.iter().all(|y| x.mul(y) == y.mul(x))).count();
        ensure(center == q as usize, || format!("q={q}: |Z(V_a)| = {center}"))?;
        let kernel = o.datum.anisotropic_kernel();
        let commutes = kernel.elements.iter().all(|x| kernel.elements.iter().all(|y| x.mul(y) == y.mul(x)));
        ensure(commutes, || format!("q={q}: anisotropic kernel is not commutative"))?;
        ensure(kernel.commutative, || format!("q={q}: kernel report disagrees"))?;
        out.push(format!("q={q}: |V_a|={} |Z|={center} |kernel|={}", va.len(), kernel.size));
    }
    Ok(out.join("; "))
}

fn sizes_by_type(oracle: &dyn GroupOracle, radius: usize) -> Result<BTreeMap<usize, BTreeSet<usize>>, String> {
    let ball = building_ball(oracle, Sign::Plus, &BallConfig { radius, ..BallConfig::default() }).map_err(e)?;
    Ok(ball.panel_sizes().into_iter().map(|(t, v)| (t, v.into_iter().collect())).collect())
}

fn valencies() -> Outcome {
    let mut out = Vec::new();
    for q in [2usize, 3] {
        let start = Instant::now();
        let o = Su3Oracle::new(q as u32).map_err(e)?;
        let basis = o.center_line_basis().map_err(e)?;
        let sizes = sizes_by_type(&o, 2)?;
        let want = BTreeMap::from([(0, BTreeSet::from([1 + q * q * q])), (1, BTreeSet::from([1 + q]))]);
        ensure(sizes == want, || format!("SU3 q={q}: panel sizes {sizes:?}"))?;
        let (f, _) = integrate_subdatum(Arc::new(o), basis, &CheckConfig::default()).map_err(e)?;
        let fsizes = sizes_by_type(&f, 2)?;
        let fwant = BTreeMap::from([(0, BTreeSet::from([1 + q])), (1, BTreeSet::from([1 + q]))]);
        ensure(fsizes == fwant, || format!("F in SU3 q={q}: panel sizes {fsizes:?}"))?;
        let took = start.elapsed();
        if q == 3 {
            ensure(took < Duration::from_secs(120), || format!("q=3 took {took:?}"))?;
        }
        out.push(format!(
            "q={q}: ({}, {}) and ({}, {}) in {:.1}s",
            1 + q,
            1 + q * q * q,
            1 + q,
            1 + q,
            took.as_secs_f64()
        ));
    }
    Ok(out.join("; "))
}

fn integrate_and_match(
    ambient: Arc<dyn GroupOracle>,
    basis: RsdBasis,
    model: &dyn GroupOracle,
    map: &dyn Fn(&LaurentMatrix) -> twinroot::error::Result<LaurentMatrix>,
) -> Outcome {
    let config = CheckConfig { samples: 200, level_window: 2, search_radius: 8, seed: 11 };
    let (f, report) = integrate_subdatum(ambient, basis, &config).map_err(e)?;
    let name = report.oracle.clone();
    ensure(report.passed(), || format!("{name}: {}", report.to_tsv()))?;
    let cells = f.check_root_groups(3).map_err(e)?;
    ensure(cells.passed(), || format!("{name}: {}", cells.mismatches.join("; ")))?;
    let m = match_balls(&f, model, map, 3, 50, 5).map_err(e)?;
    ensure(m.passed(), || format!("{name}: {m:?}"))?;
    Ok(format!("{name}: {} cells, {} chambers, {} codistances", cells.cells.len(), m.chambers, m.codistance_samples))
}

fn theorem_instances() -> Outcome {
    let mut out = Vec::new();
    for q in [2u32, 3] {
        let o = Su3Oracle::new(q).map_err(e)?;
        let basis = o.center_line_basis().map_err(e)?;
        let datum = o.datum.clone();
        let model = SplitOracle::new(datum.sl2()).map_err(e)?;
        out.push(integrate_and_match(Arc::new(o), basis, &model, &|g| datum.embed(g))?);
    }
    let big = SplitOracle::new(SplitGroup::loop_group(2, Field::F9).map_err(e)?).map_err(e)?;
    let basis = subfield_basis(&big).map_err(e)?;
    let model = SplitOracle::new(SplitGroup::loop_group(2, Field::F3).map_err(e)?).map_err(e)?;
    out.push(integrate_and_match(Arc::new(big), basis, &model, &|g| extend_scalars(g, Field::F9))?);
    Ok(out.join("; "))
}

fn folding() -> Outcome {
    let a = GeneralizedCartanMatrix::affine_a2();
    let flip = DiagramAutomorphism::new(&a, vec![0, 2, 1]).map_err(e)?;
    let rel = relative_coxeter(&a, &[flip], 64).map_err(e)?;
    let m = &rel.matrix.m;
    ensure(*m == vec![vec![Some(1), None], vec![None, Some(1)]], || format!("affine A2 flip: {m:?}"))?;
    let mut out = vec![format!("affine A2 flip orbits {:?}", rel.orbits)];
    for (name, single) in [
        ("A2", GeneralizedCartanMatrix::a2()),
        ("B2", GeneralizedCartanMatrix::b2()),
        ("G2", GeneralizedCartanMatrix::g2()),
    ] {
        let double = single.direct_sum(&single);
        let swap = DiagramAutomorphism::new(&double, vec![2, 3, 0, 1]).map_err(e)?;
        let rel = relative_coxeter(&double, &[swap], 64).map_err(e)?;
        let want = coxeter_matrix(&single);
        ensure(rel.matrix == want, || format!("{name} x {name}: {:?} vs {:?}", rel.matrix.m, want.m))?;
        out.push(format!("{name} x {name} folds to {name}"));
    }
    Ok(out.join("; "))
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Option<Duration>, fn() -> Outcome)> = vec![
        ("coxeter table", Some(Duration::from_secs(1)), coxeter_table),
        ("weyl orders", Some(Duration::from_secs(1)), weyl_orders),
        ("opposite simple intervals", Some(Duration::from_secs(10)), opposite_simple_intervals),
        ("prenilpotency vs brute force", Some(Duration::from_secs(60)), prenilpotency_brute_force),
        ("nibbling", Some(Duration::from_secs(10)), nibbling),
        ("mu and co-roots", None, mu_coroot),
        ("bruhat soundness", Some(Duration::from_secs(60)), bruhat_soundness),
        ("trd suite", None, trd_suite),
        ("su3 structure constants", None, su3_structure),
        ("twin tree valencies", None, valencies),
        ("integration of subdata", None, theorem_instances),
        ("folding", None, folding),
    ];
    let mut failed = 0;
    for (name, budget, run) in criteria {
        let start = Instant::now();
        let mut result = run();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, budget) {
            if took > limit {
                result = Err(format!("took {took:?}, budget {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("PASS {name} ({:.2}s): {detail}", took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({:.2}s): {why}", took.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
