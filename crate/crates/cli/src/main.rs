use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use twinroot::chevalley::{CellEngine, HermitianDescentDatum, SplitGroup};
use twinroot::cone::{fixed_subspace, relative_coxeter, DiagramAutomorphism};
use twinroot::field::Field;
use twinroot::gcm::GeneralizedCartanMatrix;
use twinroot::roots::{RootSystem, RootVector};
use twinroot::trd::{
    building_ball, check_trd, integrate_subdatum, match_balls, subfield_basis, BallConfig, CheckConfig, GroupOracle,
    Sign, SplitOracle, Su3Oracle, TwinChamber,
};
use twinroot::weyl::{coxeter_matrix, WeylGroup};
use twinroot::Error;

#[derive(Parser)]
#[command(name = "twinroot", version, about = "Root data, Weyl groups and twin buildings of small Kac-Moody groups")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Generalized Cartan matrices
    Gcm {
        #[command(subcommand)]
        cmd: GcmCmd,
    },
    /// Weyl group words, lengths and balls
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Real roots, prenilpotency and root intervals
    Roots {
        #[command(subcommand)]
        cmd: RootsCmd,
    },
    /// Fixed subspaces and folding by diagram automorphisms
    Cone {
        #[command(subcommand)]
        cmd: ConeCmd,
    },
    /// Matrix groups over F_q[t,t^-1]
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Twin root data, root subdata and twin buildings
    Trd {
        #[command(subcommand)]
        cmd: TrdCmd,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Dot,
    Json,
    Tsv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum GroupKind {
    Sl2,
    Sl3,
    Su3,
}

#[derive(Args, Serialize)]
struct GcmArg {
    /// JSON file {"n": int, "a": [[int]]}
    #[arg(long, value_name = "PATH")]
    gcm: PathBuf,
}

#[derive(Args, Serialize)]
struct GroupArgs {
    #[arg(long, value_enum)]
    group: GroupKind,
    #[arg(long, value_parser = parse_q, value_name = "2|3")]
    q: u32,
}

#[derive(Args, Serialize)]
struct SeedArg {
    /// Defaults to $TWINROOT_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
}

fn parse_q(s: &str) -> Result<u32, String> {
    match s {
        "2" => Ok(2),
        "3" => Ok(3),
        _ => Err(format!("q must be 2 or 3, got {s:?}")),
    }
}

impl SeedArg {
    fn resolve(&self) -> Result<u64, Error> {
        match self.seed {
            Some(s) => Ok(s),
            None => match std::env::var("TWINROOT_SEED") {
                Ok(v) => v.parse().map_err(|_| Error::Parse(format!("TWINROOT_SEED={v:?} is not an integer"))),
                Err(_) => Ok(0),
            },
        }
    }
}

#[derive(Subcommand)]
enum GcmCmd {
    /// Validate a matrix and print it
    Validate(GcmArg),
    /// Coxeter matrix
    Coxeter {
        #[command(flatten)]
        gcm: GcmArg,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Length of the element named by a word
    Length {
        #[command(flatten)]
        gcm: GcmArg,
        #[arg(long, value_name = "CSV")]
        word: String,
    },
    /// ShortLex-least reduced word
    Reduce {
        #[command(flatten)]
        gcm: GcmArg,
        #[arg(long, value_name = "CSV")]
        word: String,
    },
    /// All elements up to a length
    Ball {
        #[command(flatten)]
        gcm: GcmArg,
        #[arg(long, default_value_t = 3)]
        radius: usize,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
}

#[derive(Args, Serialize)]
#[serde(rename_all = "kebab-case")]
struct PairArgs {
    #[command(flatten)]
    #[serde(flatten)]
    gcm: GcmArg,
    /// Simple root index or coordinate vector
    #[arg(long, value_name = "IDX|CSV", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, value_name = "IDX|CSV", allow_hyphen_values = true)]
    beta: String,
    #[arg(long, default_value_t = 8)]
    search_radius: usize,
}

#[derive(Subcommand)]
enum RootsCmd {
    /// Closed interval [alpha, beta]
    Interval(PairArgs),
    /// Whether {alpha, beta} is prenilpotent
    Prenilpotent(PairArgs),
    /// Real roots w(a_i) with l(w) <= radius
    Enumerate {
        #[command(flatten)]
        gcm: GcmArg,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Nibbling order of the positive roots of a finite type matrix
    Nibbling(GcmArg),
}

#[derive(Subcommand)]
enum ConeCmd {
    /// Relative Coxeter matrix of the folding by a diagram automorphism
    Fold {
        #[command(flatten)]
        gcm: GcmArg,
        /// The automorphism as a permutation of the nodes
        #[arg(long, value_name = "CSV")]
        word: String,
    },
    /// Basis of the subspace fixed by a diagram automorphism
    Fixed {
        #[command(flatten)]
        gcm: GcmArg,
        #[arg(long, value_name = "CSV")]
        word: String,
    },
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Bruhat and Birkhoff cells of a random element
    Sample {
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Sizes of V_a, its center and the anisotropic kernel of SU3
    Structure {
        #[arg(long, value_parser = parse_q, value_name = "2|3")]
        q: u32,
    },
}

#[derive(Subcommand)]
enum TrdCmd {
    /// Sampled check of the twin root datum axioms
    Check {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        level_window: i64,
        #[arg(long, default_value_t = 8)]
        search_radius: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value = "tsv")]
        format: Format,
    },
    /// Balls in both halves of the twin building
    Twintree {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Integrate the maximal split subdatum and compare with SL2
    Integrate {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value_t = 2)]
        level_window: i64,
        #[arg(long, default_value_t = 8)]
        search_radius: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
}

struct Output {
    command: String,
    config: Value,
    format: Format,
    body: Body,
}

enum Body {
    Text(String),
    Json(Value),
}

impl Output {
    fn render(&self) -> String {
        let header: Vec<String> = match &self.config {
            Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect(),
            _ => Vec::new(),
        };
        let line = format!("twinroot {} {}", self.command, header.join(" "));
        match &self.body {
            Body::Json(v) => {
                let doc = json!({"command": self.command, "config": self.config, "result": v});
                format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
            }
            Body::Text(t) if self.format == Format::Dot => format!("// {}\n{t}", line.trim_end()),
            Body::Text(t) => format!("# {}\n{t}", line.trim_end()),
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn load_gcm(arg: &GcmArg) -> Result<GeneralizedCartanMatrix, Error> {
    let text = std::fs::read_to_string(&arg.gcm).map_err(|e| Error::Parse(format!("{}: {e}", arg.gcm.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", arg.gcm.display())))
}

fn parse_csv(s: &str) -> Result<Vec<i64>, Error> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|_| Error::Parse(format!("{x:?} is not an integer"))))
        .collect()
}

fn parse_indices(s: &str) -> Result<Vec<usize>, Error> {
    parse_csv(s)?
        .into_iter()
        .map(|x| usize::try_from(x).map_err(|_| Error::Parse(format!("negative index {x}"))))
        .collect()
}

fn parse_root(s: &str, n: usize) -> Result<RootVector, Error> {
    let v = parse_csv(s)?;
    match v.as_slice() {
        [i] if n != 1 => {
            let i = usize::try_from(*i).map_err(|_| Error::Parse(format!("negative index {i}")))?;
            if i >= n {
                return Err(Error::IndexOutOfRange { index: i, rank: n });
            }
            Ok(RootVector::simple(n, i))
        }
        _ if v.len() == n => Ok(RootVector(v)),
        _ => Err(Error::DimensionMismatch { got: v.len(), expected: n }),
    }
}

fn field(q: u32) -> Result<Field, Error> {
    Field::with_order(q)
}

fn oracle(args: &GroupArgs) -> Result<Box<dyn GroupOracle>, Error> {
    Ok(match args.group {
        GroupKind::Sl2 => Box::new(SplitOracle::new(SplitGroup::loop_group(2, field(args.q)?)?)?),
        GroupKind::Sl3 => Box::new(SplitOracle::new(SplitGroup::loop_group(3, field(args.q)?)?)?),
        GroupKind::Su3 => Box::new(Su3Oracle::new(args.q)?),
    })
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn run(verb: Verb) -> Result<Output, Error> {
    match verb {
        Verb::Gcm { cmd } => gcm(cmd),
        Verb::Weyl { cmd } => weyl(cmd),
        Verb::Roots { cmd } => roots(cmd),
        Verb::Cone { cmd } => cone(cmd),
        Verb::Group { cmd } => group(cmd),
        Verb::Trd { cmd } => trd(cmd),
    }
}

fn gcm(cmd: GcmCmd) -> Result<Output, Error> {
    match cmd {
        GcmCmd::Validate(arg) => {
            let a = load_gcm(&arg)?;
            Ok(Output {
                command: "gcm validate".into(),
                config: to_value(&arg),
                format: Format::Json,
                body: Body::Json(json!({"gcm": a, "determinant": a.determinant()})),
            })
        }
        GcmCmd::Coxeter { gcm, format } => {
            let a = load_gcm(&gcm)?;
            let m = coxeter_matrix(&a);
            let body = match format {
                Format::Json => Body::Json(to_value(&m)),
                Format::Tsv => Body::Text(m.to_string()),
                Format::Dot => return Err(Error::UnknownFormat("dot".into())),
            };
            Ok(Output {
                command: "gcm coxeter".into(),
                config: json!({"gcm": gcm.gcm, "format": format}),
                format,
                body,
            })
        }
    }
}

fn weyl(cmd: WeylCmd) -> Result<Output, Error> {
    match cmd {
        WeylCmd::Length { gcm, word } => {
            let a = load_gcm(&gcm)?;
            let w = WeylGroup::new(&a).element(&parse_indices(&word)?)?;
            Ok(Output {
                command: "weyl length".into(),
                config: json!({"gcm": gcm.gcm, "word": word}),
                format: Format::Tsv,
                body: Body::Text(format!("{}\n", w.length())),
            })
        }
        WeylCmd::Reduce { gcm, word } => {
            let a = load_gcm(&gcm)?;
            let w = WeylGroup::new(&a).element(&parse_indices(&word)?)?;
            let csv: Vec<String> = w.word().iter().map(|i| i.to_string()).collect();
            Ok(Output {
                command: "weyl reduce".into(),
                config: json!({"gcm": gcm.gcm, "word": word}),
                format: Format::Tsv,
                body: Body::Text(format!("{}\n", csv.join(","))),
            })
        }
        WeylCmd::Ball { gcm, radius, format } => {
            let a = load_gcm(&gcm)?;
            let ball = WeylGroup::new(&a).enumerate_ball(radius)?;
            let body = match format {
                Format::Json => Body::Json(to_value(&ball)),
                Format::Tsv => {
                    let mut out = String::from("length\tword\n");
                    for w in &ball {
                        let csv: Vec<String> = w.word().iter().map(|i| i.to_string()).collect();
                        out.push_str(&format!("{}\t{}\n", w.length(), csv.join(",")));
                    }
                    Body::Text(out)
                }
                Format::Dot => return Err(Error::UnknownFormat("dot".into())),
            };
            Ok(Output {
                command: "weyl ball".into(),
                config: json!({"gcm": gcm.gcm, "radius": radius, "format": format}),
                format,
                body,
            })
        }
    }
}

fn roots(cmd: RootsCmd) -> Result<Output, Error> {
    match cmd {
        RootsCmd::Interval(p) => {
            let a = load_gcm(&p.gcm)?;
            let rs = RootSystem::with_radius(&a, p.search_radius);
            let (alpha, beta) = (parse_root(&p.alpha, a.rank())?, parse_root(&p.beta, a.rank())?);
            let members = rs.closed_interval(&alpha, &beta)?.members;
            Ok(Output {
                command: "roots interval".into(),
                config: to_value(&p),
                format: Format::Json,
                body: Body::Json(to_value(&members)),
            })
        }
        RootsCmd::Prenilpotent(p) => {
            let a = load_gcm(&p.gcm)?;
            let rs = RootSystem::with_radius(&a, p.search_radius);
            let (alpha, beta) = (parse_root(&p.alpha, a.rank())?, parse_root(&p.beta, a.rank())?);
            let answer = rs.is_prenilpotent_pair(&alpha, &beta)?;
            Ok(Output {
                command: "roots prenilpotent".into(),
                config: to_value(&p),
                format: Format::Tsv,
                body: Body::Text(format!("{answer}\n")),
            })
        }
        RootsCmd::Enumerate { gcm, radius, format } => {
            let a = load_gcm(&gcm)?;
            let roots = RootSystem::new(&a).enumerate_real_roots(radius)?;
            let body = match format {
                Format::Json => Body::Json(to_value(&roots)),
                Format::Tsv => {
                    let mut out = String::from("height\troot\n");
                    for r in &roots {
                        let csv: Vec<String> = r.coords().iter().map(|c| c.to_string()).collect();
                        out.push_str(&format!("{}\t{}\n", r.height(), csv.join(",")));
                    }
                    Body::Text(out)
                }
                Format::Dot => return Err(Error::UnknownFormat("dot".into())),
            };
            Ok(Output {
                command: "roots enumerate".into(),
                config: json!({"gcm": gcm.gcm, "radius": radius, "format": format}),
                format,
                body,
            })
        }
        RootsCmd::Nibbling(arg) => {
            let a = load_gcm(&arg)?;
            let n = a.rank();
            let all: Vec<usize> = (0..n).collect();
            let w = WeylGroup::new(&a);
            w.longest_element(&all)?;
            let rs = RootSystem::new(&a);
            let positive: Vec<RootVector> = rs
                .enumerate_real_roots(n * n.max(11))?
                .into_iter()
                .filter(|r| r.coords().iter().all(|&c| c >= 0))
                .collect();
            let seq = rs.nibbling_sequence(&all, &positive)?;
            Ok(Output {
                command: "roots nibbling".into(),
                config: to_value(&arg),
                format: Format::Json,
                body: Body::Json(to_value(&seq.roots)),
            })
        }
    }
}

fn automorphism(a: &GeneralizedCartanMatrix, word: &str) -> Result<Vec<DiagramAutomorphism>, Error> {
    let perm = parse_indices(word)?;
    let sigma = DiagramAutomorphism::new(a, perm)?;
    let mut group = vec![DiagramAutomorphism::identity(a.rank())];
    let mut cur = sigma.clone();
    while !cur.is_identity() {
        group.push(cur.clone());
        cur = cur.compose(&sigma);
    }
    Ok(group)
}

fn cone(cmd: ConeCmd) -> Result<Output, Error> {
    match cmd {
        ConeCmd::Fold { gcm, word } => {
            let a = load_gcm(&gcm)?;
            let rel = relative_coxeter(&a, &automorphism(&a, &word)?, 60)?;
            Ok(Output {
                command: "cone fold".into(),
                config: json!({"gcm": gcm.gcm, "word": word}),
                format: Format::Json,
                body: Body::Json(json!({"orbits": rel.orbits, "coxeter": rel.matrix})),
            })
        }
        ConeCmd::Fixed { gcm, word } => {
            let a = load_gcm(&gcm)?;
            let basis = fixed_subspace(&a, &automorphism(&a, &word)?, &[])?;
            Ok(Output {
                command: "cone fixed".into(),
                config: json!({"gcm": gcm.gcm, "word": word}),
                format: Format::Json,
                body: Body::Json(to_value(&basis)),
            })
        }
    }
}

fn group(cmd: GroupCmd) -> Result<Output, Error> {
    match cmd {
        GroupCmd::Sample { group, seed } => {
            let s = seed.resolve()?;
            let split = match group.group {
                GroupKind::Sl2 => SplitGroup::loop_group(2, field(group.q)?)?,
                GroupKind::Sl3 => SplitGroup::loop_group(3, field(group.q)?)?,
                GroupKind::Su3 => HermitianDescentDatum::new(group.q)?.group,
            };
            let engine = CellEngine::new(split)?;
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let g = engine.group.random_element(&mut rng, 6);
            let bruhat = engine.bruhat_cell(&g, twinroot::chevalley::cells::default_window())?;
            let birkhoff = engine.birkhoff_cell_unbounded(&g)?;
            let plus = TwinChamber::of(&engine, Sign::Plus, &g)?;
            Ok(Output {
                command: "group sample".into(),
                config: json!({"group": group.group, "q": group.q, "seed": s}),
                format: Format::Json,
                body: Body::Json(json!({
                    "element": g.to_json(),
                    "bruhat": bruhat,
                    "birkhoff": birkhoff,
                    "chamber": plus,
                })),
            })
        }
        GroupCmd::Structure { q } => {
            let d = HermitianDescentDatum::new(q)?;
            let va = d.relative_root_group(0, 0)?;
            let vb = d.relative_root_group(1, 0)?;
            let kernel = d.anisotropic_kernel();
            let text = format!(
                "quantity\tvalue\nV_a\t{}\nZ(V_a)\t{}\nV_b\t{}\nkernel\t{}\nkernel_commutative\t{}\n",
                va.elements.len(),
                va.center.len(),
                vb.elements.len(),
                kernel.size,
                kernel.commutative
            );
            Ok(Output {
                command: "group structure".into(),
                config: json!({"group": "su3", "q": q}),
                format: Format::Tsv,
                body: Body::Text(text),
            })
        }
    }
}

fn trd(cmd: TrdCmd) -> Result<Output, Error> {
    match cmd {
        TrdCmd::Check { group, level_window, search_radius, seed, format } => {
            let o = oracle(&group)?;
            let config = CheckConfig { samples: 200, level_window, search_radius, seed: seed.resolve()? };
            let report = check_trd(o.as_ref(), &config)?;
            let body = match format {
                Format::Json => Body::Json(to_value(&report)),
                Format::Tsv => Body::Text(report.to_tsv()),
                Format::Dot => return Err(Error::UnknownFormat("dot".into())),
            };
            Ok(Output {
                command: "trd check".into(),
                config: json!({
                    "group": group.group, "q": group.q, "samples": config.samples, "level-window": level_window,
                    "search-radius": search_radius, "seed": config.seed, "format": format,
                }),
                format,
                body,
            })
        }
        TrdCmd::Twintree { group, radius, format, jobs } => {
            let o = oracle(&group)?;
            let cfg = BallConfig { radius, jobs: jobs.max(1), ..BallConfig::default() };
            let plus = building_ball(o.as_ref(), Sign::Plus, &cfg)?;
            let minus = building_ball(o.as_ref(), Sign::Minus, &cfg)?;
            let body = match format {
                Format::Dot => Body::Text(format!("{}{}", plus.to_dot(), minus.to_dot())),
                Format::Json => Body::Json(json!({"plus": plus.to_json(), "minus": minus.to_json()})),
                Format::Tsv => Body::Text(format!(
                    "sign\tid\tdistance\tchamber\n{}{}",
                    signed_rows(&plus.to_tsv(), "+"),
                    signed_rows(&minus.to_tsv(), "-")
                )),
            };
            Ok(Output {
                command: "trd twintree".into(),
                config: json!({"group": group.group, "q": group.q, "radius": radius, "format": format, "jobs": cfg.jobs}),
                format,
                body,
            })
        }
        TrdCmd::Integrate { group, radius, level_window, search_radius, seed } => {
            integrate(group, radius, level_window, search_radius, seed)
        }
    }
}

fn signed_rows(tsv: &str, sign: &str) -> String {
    tsv.lines().skip(1).map(|l| format!("{sign}\t{l}\n")).collect()
}

fn integrate(
    group: GroupArgs,
    radius: usize,
    level_window: i64,
    search_radius: usize,
    seed: SeedArg,
) -> Result<Output, Error> {
    let s = seed.resolve()?;
    let config = CheckConfig { samples: 200, level_window, search_radius, seed: s };
    let (ambient, basis, model, map): (Arc<dyn GroupOracle>, _, SplitOracle, Box<dyn Fn(&_) -> _>) = match group.group {
        GroupKind::Su3 => {
            let o = Su3Oracle::new(group.q)?;
            let basis = o.center_line_basis()?;
            let datum = o.datum.clone();
            let model = SplitOracle::new(datum.sl2())?;
            (Arc::new(o), basis, model, Box::new(move |g| datum.embed(g)))
        }
        GroupKind::Sl2 => {
            let small = field(group.q)?;
            let big = small.quadratic_extension()?;
            let o = SplitOracle::new(SplitGroup::loop_group(2, big)?)?;
            let basis = subfield_basis(&o)?;
            let model = SplitOracle::new(SplitGroup::loop_group(2, small)?)?;
            (Arc::new(o), basis, model, Box::new(move |g| twinroot::trd::extend_scalars(g, big)))
        }
        GroupKind::Sl3 => return Err(Error::Parse("integrate supports --group su3 or sl2".into())),
    };
    let (f, report) = integrate_subdatum(ambient, basis, &config)?;
    let cells = f.check_root_groups(radius)?;
    let matched = match_balls(&f, &model, map.as_ref(), radius, 50, s)?;
    let mut text = report.to_tsv();
    text.push_str(&format!(
        "root groups\t{}\t{}\t{}\n",
        pass(cells.passed()),
        cells.cells.len(),
        cells.mismatches.first().map_or("-", |m| m.as_str())
    ));
    text.push_str(&format!(
        "ball match\t{}\t{}\tchambers={} panels={} codistance_mismatches={}\n",
        pass(matched.passed()),
        matched.codistance_samples,
        matched.chambers,
        matched.panels,
        matched.codistance_mismatches
    ));
    Ok(Output {
        command: "trd integrate".into(),
        config: json!({
            "group": group.group, "q": group.q, "radius": radius, "level-window": level_window,
            "search-radius": search_radius, "seed": s,
        }),
        format: Format::Tsv,
        body: Body::Text(text),
    })
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.verb) {
        Ok(out) => {
            print!("{}", out.render());
            ExitCode::SUCCESS
        }
        Err(e @ (Error::Undecided { .. } | Error::ExplosionGuard { .. })) => {
            eprintln!("undecided: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
