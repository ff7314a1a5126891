use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::Value;

use rect_escape::approx::{solve_disjoint, solve_general_4d, Solution};
use rect_escape::boxes::{
    brute_force_rho3, max_density3, apply_assignment3, solve_boxes_disjoint, solve_boxes_general, Assignment3, Dir3,
    ExactMis, GreedyMis, Instance3, MisPlugin, DEFAULT_BRUTE_CAP3, DEFAULT_MIS_CAP,
};
use rect_escape::exact::{brute_force_restricted, brute_force_rho, constrained_solve, fpt_solve, ConstrainedVerdict, DEFAULT_BRUTE_CAP, DEFAULT_NODE_BUDGET};
use rect_escape::generate::{random_boxes, random_grid, random_rects, RectSpec};
use rect_escape::geometry::{apply_assignment, max_density, Assignment, Coord, Direction, Instance};
use rect_escape::io::{
    formula_from_json, graph_from_json, render_svg, verify, AssignmentDoc, BenchRow, BenchTable, InstanceDoc,
    RoleSidecar,
};
use rect_escape::lp::{randomized_solve, RoundingParams, DEFAULT_TRIALS};
use rect_escape::reductions::{reduce_mcc, reduce_naesat};
use rect_escape::rng::Rng;
use rect_escape::square::{to_rect_instance, two_approx, GridInstance};
use rect_escape::Error;

const EXIT_INPUT: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_VERIFY_FAILED: u8 = 4;

#[derive(Parser)]
#[command(name = "rect-escape", version, about = "Escape problems for rectangles, squares and boxes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a solver on an instance document.
    Solve(SolveArgs),
    /// Generate instance documents.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Check an assignment against its instance.
    Verify(VerifyArgs),
    /// Draw an instance, optionally with an assignment, as SVG.
    Render(RenderArgs),
    /// Run solvers over a corpus directory.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Alg {
    Brute,
    Fpt,
    Approx4d,
    Disjoint,
    LpRound,
    Square2x,
    BoxesGeneral,
    BoxesDisjoint,
    Constrained,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MisChoice {
    /// Exact up to the default cap, greedy above it.
    Auto,
    Exact,
    Greedy,
}

#[derive(Args, Clone)]
struct SolveParams {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "RECT_ESCAPE_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    #[arg(long, value_enum, default_value_t = MisChoice::Auto)]
    mis: MisChoice,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_enum)]
    alg: Alg,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock runtime in the output.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    params: SolveParams,
}

#[derive(Subcommand)]
enum GenCmd {
    RandomRect(RandomRectArgs),
    RandomGrid(RandomGridArgs),
    RandomBox(RandomBoxArgs),
    /// A square instance from a not-all-equal SAT formula document.
    ReduceNaesat(ReduceArgs),
    /// A constrained rectangle instance from a multicolored clique graph document.
    ReduceMcc(ReduceArgs),
    /// A directory of seeded random instances.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct RandomRectArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    coord_max: Coord,
    #[arg(long)]
    max_side: Option<Coord>,
    #[arg(long, default_value_t = 2)]
    d: u32,
    /// Reject candidates that would overlap.
    #[arg(long)]
    disjoint: bool,
    #[arg(long)]
    density_cap: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomGridArgs {
    #[arg(long, default_value_t = 6)]
    m: u32,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RandomBoxArgs {
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    side: Coord,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long)]
    disjoint: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    /// Formula or graph document.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the role-map sidecar.
    #[arg(long)]
    roles: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CorpusKind {
    Rect,
    Disjoint,
    Grid,
    Box3,
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, value_enum, default_value_t = CorpusKind::Rect)]
    kind: CorpusKind,
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Upper bound on objects per instance; each instance draws its size.
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long, default_value_t = 20)]
    coord_max: Coord,
    #[arg(long, default_value_t = 2)]
    d: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    assignment: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    assignment: Option<PathBuf>,
    #[arg(long)]
    roles: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    algs: Vec<Alg>,
    /// Largest instance for which the exact optimum is computed.
    #[arg(long, default_value_t = DEFAULT_BRUTE_CAP)]
    brute_cap: usize,
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    params: SolveParams,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, msg: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleInput { .. } | Error::DensityPrecondition { .. } | Error::NotDisjoint(_) => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        };
        Self { code, msg: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

enum AnyAssignment {
    Plane(Assignment),
    Space(Assignment3),
}

struct Outcome {
    assignment: AnyAssignment,
    algorithm: String,
    status: String,
    claimed_ratio: Option<String>,
    details: BTreeMap<String, Value>,
    code: u8,
}

impl Outcome {
    fn from_solution(s: Solution) -> CliResult<Self> {
        Self::from_parts(s.input_infeasible, s.algorithm, s.claimed_ratio.to_string(), AnyAssignment::Plane(s.assignment))
    }

    fn from_solution3(s: Solution<Dir3>) -> CliResult<Self> {
        Self::from_parts(s.input_infeasible, s.algorithm, s.claimed_ratio.to_string(), AnyAssignment::Space(s.assignment))
    }

    fn from_parts(infeasible: bool, algorithm: String, ratio: String, assignment: AnyAssignment) -> CliResult<Self> {
        if infeasible {
            return Err(Failure { code: EXIT_INFEASIBLE, msg: "input density already exceeds d".into() });
        }
        Ok(Self {
            assignment,
            algorithm,
            status: "ok".into(),
            claimed_ratio: Some(ratio),
            details: BTreeMap::new(),
            code: 0,
        })
    }

    fn count(&self) -> usize {
        match &self.assignment {
            AnyAssignment::Plane(a) => a.extended_count(),
            AnyAssignment::Space(a) => a.extended_count(),
        }
    }
}

fn with_overrides(doc: InstanceDoc, p: &SolveParams) -> CliResult<InstanceDoc> {
    let Some(d) = p.d else { return Ok(doc) };
    Ok(match doc {
        InstanceDoc::Rect { instance, p, q } => InstanceDoc::Rect { instance: instance.with_d(d)?, p, q },
        InstanceDoc::Grid(g) => InstanceDoc::Grid(GridInstance::new(g.m, g.squares, d, g.k)?),
        InstanceDoc::Box3(b) => InstanceDoc::Box3(Instance3::new(b.region, b.boxes, d, b.k)?),
    })
}

fn planar(doc: &InstanceDoc, alg: Alg) -> CliResult<Instance> {
    match doc {
        InstanceDoc::Rect { instance, .. } => Ok(instance.clone()),
        InstanceDoc::Grid(g) => Ok(to_rect_instance(g)),
        InstanceDoc::Box3(_) => Err(Failure::input(format!("{} does not accept box instances", alg_name(alg)))),
    }
}

fn plugin(choice: MisChoice, n: usize) -> Box<dyn MisPlugin + Sync> {
    match choice {
        MisChoice::Exact => Box::new(ExactMis { cap: usize::MAX }),
        MisChoice::Greedy => Box::new(GreedyMis),
        MisChoice::Auto if n <= DEFAULT_MIS_CAP => Box::new(ExactMis::default()),
        MisChoice::Auto => Box::new(GreedyMis),
    }
}

fn run_alg(doc: &InstanceDoc, alg: Alg, params: &SolveParams) -> CliResult<Outcome> {
    match alg {
        Alg::Brute => {
            let (rho, a) = brute_force_rho(&planar(doc, alg)?)?;
            let mut o = Outcome::from_parts(false, "brute".into(), "exact".into(), AnyAssignment::Plane(a))?;
            o.details.insert("rho".into(), rho.into());
            Ok(o)
        }
        Alg::Fpt => {
            let inst = planar(doc, alg)?;
            let k = params
                .k
                .or(inst.k.map(|k| k as usize))
                .ok_or_else(|| Failure::input("fpt needs --k or a k field in the instance"))?;
            let trace = fpt_solve(&inst, k)?;
            let a = trace.witness.clone().unwrap_or_else(|| Assignment::none_for(inst.ids()));
            let mut o = Outcome::from_parts(false, "fpt".into(), "exact".into(), AnyAssignment::Plane(a))?;
            o.status = if trace.verdict { "yes" } else { "no" }.into();
            o.details.insert("k".into(), k.into());
            o.details.insert("candidates".into(), trace.candidate_count.into());
            o.details.insert("tight_bound".into(), trace.tight_bound.into());
            o.details.insert("subsets_tried".into(), trace.subsets_tried.into());
            Ok(o)
        }
        Alg::Approx4d => Outcome::from_solution(solve_general_4d(&planar(doc, alg)?)),
        Alg::Disjoint => Outcome::from_solution(solve_disjoint(&planar(doc, alg)?)?),
        Alg::LpRound => {
            let inst = planar(doc, alg)?;
            let rp = RoundingParams::new(params.epsilon, params.trials, params.seed)?;
            let out = randomized_solve(&inst, &rp)?;
            let feasible = out.feasible_trials(inst.d);
            let mut o = match out.solution {
                Some(s) => Outcome::from_solution(s)?,
                None => {
                    let mut o = Outcome::from_parts(
                        false,
                        "lp-round".into(),
                        String::new(),
                        AnyAssignment::Plane(Assignment::none_for(inst.ids())),
                    )?;
                    o.status = "no-feasible-trial".into();
                    o.claimed_ratio = None;
                    o.code = EXIT_INCONCLUSIVE;
                    o
                }
            };
            o.details.insert("lp_objective".into(), out.lp_objective.into());
            o.details.insert("feasible_trials".into(), feasible.into());
            o.details.insert("trials".into(), params.trials.into());
            o.details.insert("seed".into(), params.seed.into());
            Ok(o)
        }
        Alg::Square2x => match doc {
            InstanceDoc::Grid(g) => Outcome::from_solution(two_approx(g)?),
            _ => Err(Failure::input("square2x needs a grid instance")),
        },
        Alg::BoxesGeneral | Alg::BoxesDisjoint => {
            let InstanceDoc::Box3(b) = doc else {
                return Err(Failure::input(format!("{} needs a box3 instance", alg_name(alg))));
            };
            let plug = plugin(params.mis, b.n());
            let sol = if alg == Alg::BoxesGeneral {
                solve_boxes_general(b, plug.as_ref())?
            } else {
                solve_boxes_disjoint(b, plug.as_ref())?
            };
            Outcome::from_solution3(sol)
        }
        Alg::Constrained => {
            let inst = planar(doc, alg)?;
            let (dp, dq) = match doc {
                InstanceDoc::Rect { p, q, .. } => (*p, *q),
                _ => (None, None),
            };
            let p = params.p.or(dp).ok_or_else(|| Failure::input("constrained needs --p"))?;
            let q = params.q.or(dq).ok_or_else(|| Failure::input("constrained needs --q"))?;
            let verdict = constrained_solve(&inst, p, q, params.node_budget)?;
            let none = || AnyAssignment::Plane(Assignment::none_for(inst.ids()));
            let (status, a, code) = match verdict {
                ConstrainedVerdict::Satisfiable(a) => ("satisfiable", AnyAssignment::Plane(a), 0),
                ConstrainedVerdict::Unsatisfiable => ("unsatisfiable", none(), 0),
                ConstrainedVerdict::Inconclusive { .. } => ("inconclusive", none(), EXIT_INCONCLUSIVE),
            };
            let mut o = Outcome::from_parts(false, "constrained".into(), "exact".into(), a)?;
            o.status = status.into();
            o.code = code;
            o.details.insert("p".into(), p.into());
            o.details.insert("q".into(), q.into());
            o.details.insert("node_budget".into(), params.node_budget.into());
            Ok(o)
        }
    }
}

fn achieved_density(doc: &InstanceDoc, a: &AnyAssignment) -> CliResult<u32> {
    Ok(match (doc, a) {
        (InstanceDoc::Box3(b), AnyAssignment::Space(a)) => max_density3(&apply_assignment3(b, a)?).max_density,
        (_, AnyAssignment::Plane(a)) => {
            let inst = planar(doc, Alg::Brute)?;
            max_density(&apply_assignment(&inst, a)?).max_density
        }
        _ => return Err(Failure::input("assignment kind does not match the instance")),
    })
}

fn solve(args: SolveArgs) -> CliResult<u8> {
    let original = InstanceDoc::from_json(&read(&args.input)?)?;
    let digest = original.digest();
    let doc = with_overrides(original, &args.params)?;
    let start = Instant::now();
    let o = run_alg(&doc, args.alg, &args.params)?;
    let elapsed = start.elapsed();
    let mut adoc = match &o.assignment {
        AnyAssignment::Plane(a) => AssignmentDoc::new(digest, a),
        AnyAssignment::Space(a) => AssignmentDoc::new(digest, a),
    };
    adoc.algorithm = Some(o.algorithm.clone());
    adoc.status = Some(o.status.clone());
    adoc.claimed_ratio = o.claimed_ratio.clone();
    adoc.count = Some(o.count());
    adoc.max_density = Some(achieved_density(&doc, &o.assignment)?);
    adoc.details = o.details;
    if let Some(d) = args.params.d {
        adoc.details.insert("d_override".into(), d.into());
    }
    if args.timing {
        adoc.runtime_ms = Some(elapsed.as_secs_f64() * 1e3);
    }
    emit(args.out.as_deref(), &adoc.to_json())?;
    Ok(o.code)
}

fn write_instance(doc: &InstanceDoc, out: Option<&Path>) -> CliResult<()> {
    emit(out, &doc.to_json())
}

fn gen(cmd: GenCmd) -> CliResult<u8> {
    match cmd {
        GenCmd::RandomRect(a) => {
            let mut spec = RectSpec::new(a.n, a.coord_max, a.d);
            if let Some(s) = a.max_side {
                spec.max_side = s;
            }
            if let Some(c) = a.density_cap {
                spec = spec.capped(c);
            }
            if a.disjoint {
                spec = spec.disjoint();
            }
            let inst = random_rects(&spec, &mut Rng::new(a.seed))?;
            write_instance(&InstanceDoc::Rect { instance: inst, p: None, q: None }, a.out.as_deref())?;
        }
        GenCmd::RandomGrid(a) => {
            let g = random_grid(a.m, a.n, a.d, &mut Rng::new(a.seed))?;
            write_instance(&InstanceDoc::Grid(g), a.out.as_deref())?;
        }
        GenCmd::RandomBox(a) => {
            let cap = if a.disjoint { 1 } else { a.d };
            let b = random_boxes(a.n, a.side, a.d, cap, &mut Rng::new(a.seed))?;
            write_instance(&InstanceDoc::Box3(b), a.out.as_deref())?;
        }
        GenCmd::ReduceNaesat(a) => {
            let art = reduce_naesat(&formula_from_json(&read(&a.input)?)?)?;
            let doc = InstanceDoc::Grid(art.instance.clone());
            write_instance(&doc, a.out.as_deref())?;
            if let Some(r) = &a.roles {
                emit(Some(r), &RoleSidecar::new(&doc, art.labels()).to_json())?;
            }
        }
        GenCmd::ReduceMcc(a) => {
            let art = reduce_mcc(&graph_from_json(&read(&a.input)?)?)?;
            let doc = InstanceDoc::Rect { instance: art.instance.clone(), p: Some(art.p), q: Some(art.q) };
            write_instance(&doc, a.out.as_deref())?;
            if let Some(r) = &a.roles {
                emit(Some(r), &RoleSidecar::new(&doc, art.labels()).to_json())?;
            }
        }
        GenCmd::Corpus(a) => {
            fs::create_dir_all(&a.dir).map_err(|e| Failure::input(format!("{}: {e}", a.dir.display())))?;
            for i in 0..a.count {
                let mut rng = Rng::derive(a.seed, i as u64);
                let n = 1 + rng.below(a.n.max(1));
                let doc = match a.kind {
                    CorpusKind::Rect => InstanceDoc::Rect {
                        instance: random_rects(&RectSpec::new(n, a.coord_max, a.d), &mut rng)?,
                        p: None,
                        q: None,
                    },
                    CorpusKind::Disjoint => InstanceDoc::Rect {
                        instance: random_rects(&RectSpec::new(n, a.coord_max, a.d).disjoint(), &mut rng)?,
                        p: None,
                        q: None,
                    },
                    CorpusKind::Grid => InstanceDoc::Grid(random_grid(a.coord_max.clamp(1, 64) as u32, n, a.d, &mut rng)?),
                    CorpusKind::Box3 => InstanceDoc::Box3(random_boxes(n, a.coord_max.max(2), a.d, a.d, &mut rng)?),
                };
                write_instance(&doc, Some(&a.dir.join(format!("inst-{i:05}.json"))))?;
            }
        }
    }
    Ok(0)
}

fn verify_cmd(args: VerifyArgs) -> CliResult<u8> {
    let doc = InstanceDoc::from_json(&read(&args.instance)?)?;
    let adoc = AssignmentDoc::from_json(&read(&args.assignment)?)?;
    let report = verify(&doc, &adoc)?;
    emit(args.out.as_deref(), &report.to_json())?;
    Ok(if report.feasible { 0 } else { EXIT_VERIFY_FAILED })
}

fn render(args: RenderArgs) -> CliResult<u8> {
    let doc = InstanceDoc::from_json(&read(&args.instance)?)?;
    let adoc = args.assignment.as_deref().map(|p| read(p).and_then(|t| Ok(AssignmentDoc::from_json(&t)?))).transpose()?;
    let roles = args.roles.as_deref().map(|p| read(p).and_then(|t| Ok(RoleSidecar::from_json(&t)?))).transpose()?;
    emit(args.out.as_deref(), &render_svg(&doc, adoc.as_ref(), roles.as_ref())?)?;
    Ok(0)
}

fn alg_name(alg: Alg) -> String {
    alg.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn applicable(doc: &InstanceDoc, alg: Alg) -> bool {
    match (doc, alg) {
        (InstanceDoc::Box3(_), a) => matches!(a, Alg::BoxesGeneral | Alg::BoxesDisjoint),
        (InstanceDoc::Grid(_), a) => !matches!(a, Alg::BoxesGeneral | Alg::BoxesDisjoint),
        (InstanceDoc::Rect { .. }, a) => !matches!(a, Alg::Square2x | Alg::BoxesGeneral | Alg::BoxesDisjoint),
    }
}

fn optimum(doc: &InstanceDoc, cap: usize) -> Option<usize> {
    match doc {
        InstanceDoc::Box3(b) if b.n() <= cap.min(DEFAULT_BRUTE_CAP3) => {
            brute_force_rho3(b, &Dir3::ALL, DEFAULT_BRUTE_CAP3).ok().map(|r| r.0)
        }
        InstanceDoc::Box3(_) => None,
        _ => {
            let inst = planar(doc, Alg::Brute).ok()?;
            brute_force_restricted(&inst, &Direction::ALL, cap).ok().map(|r| r.0)
        }
    }
}

fn bench(args: BenchArgs) -> CliResult<u8> {
    let mut files: Vec<PathBuf> = fs::read_dir(&args.corpus)
        .map_err(|e| Failure::input(format!("{}: {e}", args.corpus.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let rows: Vec<Vec<BenchRow>> = files
        .par_iter()
        .map(|path| -> CliResult<Vec<BenchRow>> {
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let doc = with_overrides(InstanceDoc::from_json(&read(path)?)?, &args.params)?;
            let opt = optimum(&doc, args.brute_cap);
            let mut rows = Vec::new();
            for &alg in args.algs.iter().filter(|&&a| applicable(&doc, a)) {
                let start = Instant::now();
                let res = run_alg(&doc, alg, &args.params);
                let runtime = start.elapsed().as_secs_f64() * 1e3;
                let (status, count) = match &res {
                    Ok(o) => (o.status.clone(), o.count()),
                    Err(f) => (format!("error: {}", f.msg), 0),
                };
                let ratio = match (opt, count) {
                    (Some(0), _) => Some(1.0),
                    (Some(o), c) if c > 0 => Some(o as f64 / c as f64),
                    _ => None,
                };
                rows.push(BenchRow {
                    instance: name.clone(),
                    algorithm: alg_name(alg),
                    status,
                    count,
                    opt,
                    ratio: if res.is_ok() { ratio } else { None },
                    runtime_ms: args.timing.then_some(runtime),
                });
            }
            Ok(rows)
        })
        .collect::<CliResult<_>>()?;
    let table = BenchTable::new(rows.into_iter().flatten().collect());
    emit(args.out.as_deref(), &table.to_json())?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Gen(g) => gen(g),
        Cmd::Verify(a) => verify_cmd(a),
        Cmd::Render(a) => render(a),
        Cmd::Bench(a) => bench(a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("rect-escape: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
