use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dismantler::constructions::{
    cc, cc_solution_trace, corridor, cuboid_fixtures, cyclic_base, cyclic_base_trace, fig3_fixture,
    theorem_cyc_trace, triangular_set, Board,
};
use dismantler::engine::{greedy_closure, is_solution, verify_trace};
use dismantler::enumeration::{
    cuboid_conjecture_scan, enumerate_all_solutions, enumerate_perfect_solutions, level_permutation_table,
    order7_exception_check, Catalogue, CuboidFamily, SearchOptions, DEFAULT_SCREENING_DEPTH,
};
use dismantler::latin::{position_from_latin, solution_fraction_experiment};
use dismantler::percolation::{bootstrap_closure, modified_bootstrap_closure, random_convex_positions};
use dismantler::position::bounds;
use dismantler::{GridShape, LatinHypercube, Position, Trace};

#[derive(Parser)]
#[command(name = "dismantler", version, about = "Dismantling and build-up of cubical grids")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the searches; 1 runs the serial reference mode.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for every randomized path.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a position (or a Latin square's position) is a solution.
    #[command(group(ArgGroup::new("input").required(true).args(["position", "latin"])))]
    Check {
        #[arg(long)]
        position: Option<PathBuf>,
        #[arg(long)]
        latin: Option<PathBuf>,
    },
    /// Build one of the explicit positions or traces.
    Construct {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        s: usize,
        /// Level of the corridor construction, side 2^t.
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long)]
        ascii: bool,
        /// Write the position or trace JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive solution search for a small box.
    Enumerate {
        /// Side lengths, e.g. 4,4,4.
        #[arg(long)]
        shape: String,
        /// Only solutions coming from Latin squares.
        #[arg(long)]
        perfect: bool,
        #[arg(long)]
        long_running: bool,
        #[arg(long, default_value_t = DEFAULT_SCREENING_DEPTH)]
        screening_depth: usize,
        /// Directory for catalogue.json and summary.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare greedy build-up with the two bootstrap closures.
    #[command(group(ArgGroup::new("input").required(true).args(["position", "random"])))]
    Percolate {
        #[arg(long)]
        position: Option<PathBuf>,
        /// Test this many seeded random convex positions of --shape.
        #[arg(long, requires = "shape")]
        random: Option<usize>,
        #[arg(long)]
        shape: Option<String>,
    },
    /// Counting experiments.
    Experiment {
        #[arg(long, value_enum, default_value_t = ExperimentKind::Fraction)]
        kind: ExperimentKind,
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Family::TwoTwo)]
        family: Family,
        #[arg(long, default_value_t = 7)]
        k_max: usize,
        #[arg(long)]
        long_running: bool,
    },
    /// Print a position as side-by-side layers.
    Render {
        #[arg(long)]
        position: PathBuf,
    },
    /// Replay a trace file move by move.
    VerifyTrace {
        #[arg(long)]
        trace: PathBuf,
    },
    /// Lower bounds on black cells for a box.
    Bounds {
        #[arg(long)]
        shape: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Cyclic,
    Cc,
    Corridor,
    Nho,
    Dnh,
    Fig3,
    Cuboid225,
    Cuboid236,
    Cuboid334,
    /// Full cube to the nested heap pair.
    TraceCyc,
    /// Full cube to the cyclic base.
    TraceCyclic,
    /// Full cube to cc(n, s).
    TraceCc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    Fraction,
    Levels,
    Order7,
    Cuboids,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    #[value(name = "2x2")]
    TwoTwo,
    #[value(name = "2x3")]
    TwoThree,
    #[value(name = "3x3")]
    ThreeThree,
}

impl From<Family> for CuboidFamily {
    fn from(f: Family) -> Self {
        match f {
            Family::TwoTwo => CuboidFamily::TwoTwo,
            Family::TwoThree => CuboidFamily::TwoThree,
            Family::ThreeThree => CuboidFamily::ThreeThree,
        }
    }
}

/// Verdict of a successful run: exit 0, or exit 1 when a checked property
/// fails.
enum Verdict {
    Holds,
    Violated,
}

struct Ctx {
    json: bool,
    seed: u64,
    parallel: bool,
}

impl Ctx {
    fn search(&self, long_running: bool, screening_depth: usize) -> SearchOptions {
        SearchOptions {
            screening_depth,
            parallel: self.parallel,
            long_running: long_running || dismantler::long_running_enabled(),
        }
    }

    fn emit(&self, value: Value, text: impl FnOnce() -> String) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json value serializes"));
        } else {
            print!("{}", text());
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Violated) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Verdict> {
    if let Some(t) = cli.threads {
        if t == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let ctx = Ctx {
        json: cli.json,
        seed: cli.seed,
        parallel: cli.threads != Some(1),
    };
    match cli.command {
        Command::Check { position, latin } => check(&ctx, position, latin),
        Command::Construct {
            kind,
            n,
            s,
            t,
            ascii,
            out,
        } => construct(&ctx, kind, n, s, t, ascii, out),
        Command::Enumerate {
            shape,
            perfect,
            long_running,
            screening_depth,
            out,
        } => enumerate(&ctx, &shape, perfect, ctx.search(long_running, screening_depth), out),
        Command::Percolate { position, random, shape } => percolate(&ctx, position, random, shape),
        Command::Experiment {
            kind,
            n,
            samples,
            family,
            k_max,
            long_running,
        } => experiment(&ctx, kind, n, samples, family, k_max, ctx.search(long_running, DEFAULT_SCREENING_DEPTH)),
        Command::Render { position } => {
            let p = read_position(&position)?;
            print!("{}", p.render_ascii()?);
            Ok(Verdict::Holds)
        }
        Command::VerifyTrace { trace } => verify(&ctx, &trace),
        Command::Bounds { shape } => show_bounds(&ctx, &shape),
    }
}

// ---------------------------------------------------------------------------
// input

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_position(path: &Path) -> Result<Position> {
    Position::from_json(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn parse_shape(s: &str) -> Result<GridShape> {
    let dims = s
        .split([',', 'x'])
        .map(|t| t.trim().parse::<usize>().map_err(|_| anyhow!("bad side length {t:?} in shape {s:?}")))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridShape::new(&dims)?)
}

fn dims_str(shape: &GridShape) -> String {
    shape.dims().iter().map(|d| d.to_string()).collect::<Vec<_>>().join("x")
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// ---------------------------------------------------------------------------
// commands

fn check(ctx: &Ctx, position: Option<PathBuf>, latin: Option<PathBuf>) -> Result<Verdict> {
    let pos = match (position, latin) {
        (Some(p), _) => read_position(&p)?,
        (None, Some(l)) => {
            let square = LatinHypercube::parse_text(&read(&l)?).with_context(|| format!("{}", l.display()))?;
            position_from_latin(&square)
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let base = pos.is_base_position();
    let solution = base && is_solution(&pos)?;
    let perfect = base && pos.shape().is_hypercube() && pos.is_perfect()?;
    let min = dismantler::position::min_black(pos.shape());
    ctx.emit(
        json!({
            "dims": pos.shape().dims(),
            "black": pos.black_count(),
            "min_black": min,
            "base_position": base,
            "solution": solution,
            "perfect": perfect,
        }),
        || {
            format!(
                "shape: {}\nblack cells: {} (minimum {min})\nbase position: {}\nsolution: {}, perfect: {}\n",
                dims_str(pos.shape()),
                pos.black_count(),
                yes(base),
                yes(solution),
                yes(perfect)
            )
        },
    );
    Ok(if solution { Verdict::Holds } else { Verdict::Violated })
}

enum Built {
    Position(String, Position),
    Trace(String, Trace),
}

fn build(kind: Kind, n: usize, s: usize, t: u32) -> Result<Built> {
    let board = |name: &str, b: Board| -> Result<Built> {
        let cells = triangular_set(n, b)?;
        let shape = GridShape::cube(n, 3)?;
        Ok(Built::Position(name.to_string(), Position::from_coords(&shape, &cells)?))
    };
    let cuboid = |i: usize, name: &str| Built::Position(name.to_string(), cuboid_fixtures().swap_remove(i));
    Ok(match kind {
        Kind::Cyclic => Built::Position(format!("cyclic base of [{n}]^3"), cyclic_base(n)?),
        Kind::Cc => Built::Position(format!("cc({n}, {s})"), cc(n, s)?),
        Kind::Corridor => {
            let p = corridor(t)?;
            Built::Position(format!("corridor of [{}]^3", 1usize << t), p)
        }
        Kind::Nho => board(&format!("NHO({n})"), Board::Nho(n))?,
        Kind::Dnh => board(&format!("DNH({n}, {s})"), Board::Dnh(s))?,
        Kind::Fig3 => Built::Position("imperfect solution of [4]^3".into(), fig3_fixture()),
        Kind::Cuboid225 => cuboid(0, "solution of C(2,2,5)"),
        Kind::Cuboid236 => cuboid(1, "solution of C(2,3,6)"),
        Kind::Cuboid334 => cuboid(2, "solution of C(3,3,4)"),
        Kind::TraceCyc => Built::Trace(format!("[{n}]^3 to the nested heap pair"), theorem_cyc_trace(n)?),
        Kind::TraceCyclic => Built::Trace(format!("[{n}]^3 to the cyclic base"), cyclic_base_trace(n)?),
        Kind::TraceCc => Built::Trace(format!("[{n}]^3 to cc({n}, {s})"), cc_solution_trace(n, s)?),
    })
}

fn construct(ctx: &Ctx, kind: Kind, n: usize, s: usize, t: u32, ascii: bool, out: Option<PathBuf>) -> Result<Verdict> {
    let built = build(kind, n, s, t)?;
    let (doc, end) = match &built {
        Built::Position(_, p) => (serde_json::to_value(p.to_file())?, p.clone()),
        Built::Trace(_, tr) => (serde_json::to_value(tr.to_file())?, verify_trace(tr)?),
    };
    if let Some(path) = &out {
        fs::write(path, serde_json::to_string(&doc)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(&doc)?);
    } else {
        match &built {
            Built::Position(name, p) => {
                let solves = p.is_base_position() && is_solution(p)?;
                println!("{name}: {} black cells, solution: {}", p.black_count(), yes(solves));
            }
            Built::Trace(name, tr) => {
                println!(
                    "{name}: {} moves, verified, ends with {} black cells, all balanced: {}",
                    tr.len(),
                    end.black_count(),
                    yes(tr.all_balanced())
                );
            }
        }
        if ascii {
            print!("{}", end.render_ascii()?);
        }
    }
    Ok(Verdict::Holds)
}

fn summary_table(cat: &Catalogue) -> String {
    let what = if cat.perfect_only { "perfect solutions" } else { "all solutions" };
    let label = match cat.shape.hypercube_order() {
        Some(n) if cat.shape.dim() == 3 => format!("n = {n}"),
        _ => format!("shape {}", dims_str(&cat.shape)),
    };
    let rows = [
        (format!("# {what}"), cat.total),
        (format!("# {what} up to isometry"), cat.class_count() as u64),
    ];
    let width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
    let mut out = format!("{:<width$}  {label}\n", "");
    for (l, v) in rows {
        out += &format!("{l:<width$}  {v}\n");
    }
    out
}

fn enumerate(ctx: &Ctx, shape: &str, perfect: bool, opts: SearchOptions, out: Option<PathBuf>) -> Result<Verdict> {
    let shape = parse_shape(shape)?;
    let cat = if perfect {
        let n = match (shape.hypercube_order(), shape.dim()) {
            (Some(n), 3) => n,
            _ => bail!("--perfect needs a cube n,n,n"),
        };
        enumerate_perfect_solutions(n, &opts)?
    } else {
        enumerate_all_solutions(&shape, &opts)?
    };
    let table = summary_table(&cat);
    if let Some(dir) = &out {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("catalogue.json"), serde_json::to_string_pretty(&cat.to_file())? + "\n")?;
        fs::write(dir.join("summary.txt"), &table)?;
    }
    ctx.emit(
        json!({
            "dims": cat.shape.dims(),
            "perfect_only": cat.perfect_only,
            "total": cat.total,
            "classes": cat.class_count(),
        }),
        || table.clone(),
    );
    Ok(Verdict::Holds)
}

fn percolate(ctx: &Ctx, position: Option<PathBuf>, random: Option<usize>, shape: Option<String>) -> Result<Verdict> {
    if let Some(p) = position {
        let pos = read_position(&p)?;
        let greedy = greedy_closure(&pos);
        let boot = bootstrap_closure(&pos);
        let modified = modified_bootstrap_closure(&pos);
        let convex = pos.is_convex();
        let agree = greedy == boot && greedy == modified;
        ctx.emit(
            json!({
                "convex": convex,
                "greedy": greedy.black_count(),
                "bootstrap": boot.black_count(),
                "modified": modified.black_count(),
                "agree": agree,
            }),
            || {
                format!(
                    "convex: {}\ngreedy closure: {}\nbootstrap closure: {}\nmodified closure: {}\nall equal: {}\n",
                    yes(convex),
                    greedy.black_count(),
                    boot.black_count(),
                    modified.black_count(),
                    yes(agree)
                )
            },
        );
        // only convex starts are expected to agree
        return Ok(if convex && !agree { Verdict::Violated } else { Verdict::Holds });
    }
    let count = random.expect("clap requires one input");
    let shape = parse_shape(shape.as_deref().expect("clap requires --shape"))?;
    let violations = random_convex_positions(&shape, count, ctx.seed)
        .iter()
        .filter(|p| {
            let g = greedy_closure(p);
            g != bootstrap_closure(p) || g != modified_bootstrap_closure(p)
        })
        .count();
    ctx.emit(
        json!({ "dims": shape.dims(), "positions": count, "seed": ctx.seed, "violations": violations }),
        || format!("{count} convex positions of {}: {violations} violations\n", dims_str(&shape)),
    );
    Ok(if violations == 0 { Verdict::Holds } else { Verdict::Violated })
}

fn experiment(
    ctx: &Ctx,
    kind: ExperimentKind,
    n: usize,
    samples: usize,
    family: Family,
    k_max: usize,
    opts: SearchOptions,
) -> Result<Verdict> {
    match kind {
        ExperimentKind::Fraction => {
            let r = solution_fraction_experiment(n, samples, ctx.seed)?;
            ctx.emit(serde_json::to_value(&r)?, || {
                let exact = r.exact.map_or("not computed".into(), |(a, b)| format!("{a}/{b}"));
                format!(
                    "order {}: {} of {} sampled squares give solutions ({:.5}), 95% upper bound {:.5}\nexact fraction: {exact}\n",
                    r.n, r.successes, r.samples, r.fraction, r.upper_95
                )
            });
        }
        ExperimentKind::Levels => {
            let count = level_permutation_table(n, &opts)?;
            ctx.emit(json!({ "n": n, "solutions": count }), || {
                format!("order {n}: {count} level permutations of the cyclic base give solutions\n")
            });
        }
        ExperimentKind::Order7 => {
            let r = order7_exception_check()?;
            let confirmed = r.exception_confirmed();
            ctx.emit(serde_json::to_value(&r)?, || {
                format!(
                    "printed square solves: {}\nconjugates solving: {}\ncyclic base solves: {}\n",
                    yes(r.representative_solves),
                    r.conjugates_solving,
                    yes(r.cyclic_solves)
                )
            });
            return Ok(if confirmed { Verdict::Holds } else { Verdict::Violated });
        }
        ExperimentKind::Cuboids => {
            let v = cuboid_conjecture_scan(family.into(), k_max, &opts)?;
            ctx.emit(serde_json::to_value(&v)?, || {
                let mut out = String::from("cuboid      min  feasible  solutions  classes  conjectured\n");
                for x in &v {
                    let name = format!("C({},{},{})", x.dims[0], x.dims[1], x.dims[2]);
                    out += &format!(
                        "{name:<10}  {:>3}  {:<8}  {:>9}  {:>7}  {}\n",
                        x.min_black,
                        yes(x.feasible),
                        x.solutions,
                        x.classes,
                        yes(x.conjectured)
                    );
                }
                out
            });
        }
    }
    Ok(Verdict::Holds)
}

fn verify(ctx: &Ctx, path: &Path) -> Result<Verdict> {
    let trace = Trace::from_json(&read(path)?).with_context(|| format!("{}", path.display()))?;
    match verify_trace(&trace) {
        Ok(end) => {
            ctx.emit(
                json!({
                    "valid": true,
                    "moves": trace.len(),
                    "end_black": end.black_count(),
                    "all_balanced": trace.all_balanced(),
                }),
                || {
                    format!(
                        "valid: {} moves, ends with {} black cells, all balanced: {}\n",
                        trace.len(),
                        end.black_count(),
                        yes(trace.all_balanced())
                    )
                },
            );
            Ok(Verdict::Holds)
        }
        Err(e) => {
            ctx.emit(json!({ "valid": false, "error": e.to_string() }), || format!("invalid: {e}\n"));
            Ok(Verdict::Violated)
        }
    }
}

fn show_bounds(ctx: &Ctx, shape: &str) -> Result<Verdict> {
    let shape = parse_shape(shape)?;
    let b = bounds(&shape);
    let na = |x: Option<usize>| x.map_or("not applicable".to_string(), |v| format!(">= {v}"));
    ctx.emit(serde_json::to_value(&b)?, || {
        format!(
            "shape: {}\nmin_black: {}\nfacial section: {}\nprojection area: {}\n",
            dims_str(&shape),
            b.min_black,
            na(b.facial_min),
            na(b.projection_min)
        )
    });
    Ok(Verdict::Holds)
}
