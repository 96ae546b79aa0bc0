use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tsn_core::minors::minor;
use tsn_core::placement::valid_placements;
use tsn_core::solver::{verify_witness, ReceiverSet, SolveOptions, Strategy};
use tsn_core::{Field, Lattice, Placement};

use tsn::cache::TableStore;
use tsn::parallel;
use tsn::report::*;
use tsn::split::{self, Checkpoint, Limits, SplitSetup};

const AFTER_HELP: &str = "\
Placements are comma-separated vertex indices, e.g. --placement 1,4,5,10. \
Repeat --placement to form a receiver set; the two side receivers are \
added unless --no-sides is given.

Points are comma-separated field elements, one per edge variable in the \
order a1_1,a1_2,a2_1,a2_2,... . Elements of F_p are 0..p-1. Elements of \
F_{p^m} are written as integers whose base-p digits are the coefficients \
of the generator, lowest first: over F_4, 0,1,2,3 stand for 0,1,a,a+1.

Exit codes: 0 success, 1 not solvable (solve, verify), 2 budget exceeded, \
3 bad input.";

#[derive(Parser, Debug)]
#[command(
    name = "tsn",
    version,
    about = "Receiver placements and field-size questions on triangular semilattice code graphs"
)]
#[command(after_help = AFTER_HELP)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads; all cores by default.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for cached evaluation tables.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "auto")]
    mode: SearchMode,
    /// Largest point space scanned exhaustively.
    #[arg(long, global = true, default_value_t = 1 << 26)]
    budget_points: u128,
    /// Points drawn by a randomized search.
    #[arg(long, global = true, default_value_t = 1 << 20)]
    trials: u64,
    /// Wall-clock budget for checkpointed runs.
    #[arg(long, global = true)]
    budget_seconds: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct SetArgs {
    #[arg(long)]
    n: usize,
    #[arg(long = "placement")]
    placements: Vec<String>,
    /// Leave out the left and right side receivers.
    #[arg(long)]
    no_sides: bool,
}

#[derive(Args, Debug, Clone)]
struct OneArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    placement: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count valid and invalid placements of TSN(n).
    Census {
        #[arg(long)]
        n: usize,
        /// Also print every valid placement, one per line.
        #[arg(long)]
        stream: bool,
        /// Allow n >= 9.
        #[arg(long)]
        extended: bool,
        /// Cap on search nodes.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Print the minor polynomial of a placement.
    Minor(OneArgs),
    /// Check validity; show an overcrowded triangle or disjoint paths.
    Valid(OneArgs),
    /// Images of a placement under rotation and reflection.
    Symmetry(OneArgs),
    /// Decide solvability over one field.
    Solve {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        q: u32,
    },
    /// Smallest field over which the receivers are solvable.
    Minfield {
        #[command(flatten)]
        set: SetArgs,
        /// Use every valid placement as a receiver.
        #[arg(long)]
        all_valid: bool,
    },
    /// Check a point against every receiver minor.
    Verify {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long)]
        q: u32,
        #[arg(long)]
        point: String,
    },
    /// Minimum fields of all pairs of valid placements.
    CensusPairs(SubsetArgs),
    /// Minimum fields of all triples of valid placements.
    CensusTriples(SubsetArgs),
    /// Minimum fields of all 6-sets of valid placements (checkpointed).
    CensusSextuples {
        #[command(flatten)]
        sub: SubsetArgs,
        #[arg(long, default_value_t = 6)]
        size: usize,
        /// JSON file holding finished branches; resumed when present.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Finish at most this many branches in this run.
        #[arg(long)]
        max_branches: Option<usize>,
    },
}

#[derive(Args, Debug, Clone)]
struct SubsetArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Largest field order tabulated.
    #[arg(long)]
    max_q: Option<u32>,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("{0}")]
    BadInput(String),
    #[error("{0}")]
    Budget(String),
}

fn classify(e: &anyhow::Error) -> u8 {
    if let Some(f) = e.downcast_ref::<Failure>() {
        return match f {
            Failure::BadInput(_) => 3,
            Failure::Budget(_) => 2,
        };
    }
    match e.downcast_ref::<tsn_core::Error>() {
        Some(tsn_core::Error::Budget { .. }) => 2,
        Some(_) => 3,
        None => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok((text, code)) => {
            let mut out = io::stdout().lock();
            let _ = out.write_all(text.as_bytes());
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(classify(&e))
        }
    }
}

struct Ctx<'a> {
    cli: &'a Cli,
    start: Instant,
}

impl Ctx<'_> {
    fn config(
        &self,
        command: &str,
        n: usize,
        placements: Vec<String>,
        q: Option<u32>,
        include_sides: bool,
    ) -> RunConfig {
        let cli = self.cli;
        RunConfig {
            command: command.to_string(),
            n,
            placements,
            q,
            include_sides,
            mode: cli.mode,
            budget_points: cli.budget_points,
            budget_seconds: cli.budget_seconds,
            trials: cli.trials,
            seed: cli.seed,
            format: cli.format,
            jobs: rayon::current_num_threads(),
            cache_dir: cli.cache_dir.as_ref().map(|p| p.display().to_string()),
        }
    }

    fn emit<T: Serialize + Render>(&self, config: RunConfig, result: T) -> anyhow::Result<String> {
        let report = Report {
            config,
            result,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        };
        render(&report, self.cli.format)
    }

    fn options(&self) -> SolveOptions {
        let strategy = match self.cli.mode {
            SearchMode::Exhaustive => Strategy::Exhaustive,
            SearchMode::Randomized => Strategy::Randomized,
            SearchMode::Auto => Strategy::Auto,
        };
        SolveOptions {
            strategy,
            budget_points: self.cli.budget_points,
            trials: self.cli.trials,
            seed: self.cli.seed,
        }
    }

    fn store(&self) -> anyhow::Result<TableStore> {
        TableStore::new(self.cli.cache_dir.clone()).context("opening the cache directory")
    }
}

fn bad(msg: impl Into<String>) -> anyhow::Error {
    Failure::BadInput(msg.into()).into()
}

fn lattice(n: usize) -> anyhow::Result<Lattice> {
    Ok(Lattice::new(n)?)
}

fn placement(lat: &Lattice, s: &str) -> anyhow::Result<Placement> {
    Ok(Placement::parse(lat, s)?)
}

fn receivers(lat: &Lattice, set: &SetArgs) -> anyhow::Result<ReceiverSet> {
    let ps = set
        .placements
        .iter()
        .map(|s| placement(lat, s))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(ReceiverSet::new(lat, ps, !set.no_sides)?)
}

fn labels(rs: &ReceiverSet) -> Vec<String> {
    rs.placements().iter().map(|p| p.to_string()).collect()
}

fn run(cli: &Cli) -> anyhow::Result<(String, u8)> {
    let ctx = Ctx {
        cli,
        start: Instant::now(),
    };
    match &cli.command {
        Command::Census {
            n,
            stream,
            extended,
            budget,
        } => {
            let lat = lattice(*n)?;
            if *n >= 9 && !extended {
                return Err(Failure::Budget(format!(
                    "census of TSN({n}) is a long run; pass --extended"
                ))
                .into());
            }
            let row = if *stream {
                let mut out = io::BufWriter::new(io::stdout().lock());
                let row = parallel::census_stream(&lat, *budget, &mut out)?;
                out.flush()?;
                row
            } else {
                parallel::census(&lat, *budget)?
            };
            Ok((
                ctx.emit(
                    ctx.config("census", *n, vec![], None, false),
                    CensusResult::from(row),
                )?,
                0,
            ))
        }
        Command::Minor(a) => {
            let lat = lattice(a.n)?;
            let p = placement(&lat, &a.placement)?;
            let m = minor(&lat, &p);
            let result = MinorResult {
                placement: p.to_string(),
                valid: p.is_valid(&lat),
                polynomial: m.to_string(),
                terms: m.terms().len(),
            };
            Ok((
                ctx.emit(
                    ctx.config("minor", a.n, vec![p.to_string()], None, false),
                    result,
                )?,
                0,
            ))
        }
        Command::Valid(a) => {
            let lat = lattice(a.n)?;
            let p = placement(&lat, &a.placement)?;
            let overcrowded = p.overcrowded_triangle(&lat).map(|t| {
                let vertices: Vec<usize> = t
                    .vertices()
                    .map(|v| lat.index_of(v).expect("triangle inside lattice"))
                    .collect();
                let labels_inside = vertices.iter().filter(|&&v| p.contains(v)).count();
                TriangleResult {
                    corner: (t.corner.x, t.corner.y),
                    k: t.k,
                    vertices,
                    labels_inside,
                }
            });
            let result = ValidityResult {
                placement: p.to_string(),
                valid: p.is_valid(&lat),
                overcrowded,
                paths: p.disjoint_paths(&lat).map(|s| s.paths),
            };
            Ok((
                ctx.emit(
                    ctx.config("valid", a.n, vec![p.to_string()], None, false),
                    result,
                )?,
                0,
            ))
        }
        Command::Symmetry(a) => {
            let lat = lattice(a.n)?;
            let p = placement(&lat, &a.placement)?;
            let r1 = p.rotate(&lat);
            let r2 = r1.rotate(&lat);
            let mut orbit: Vec<String> = [
                p.clone(),
                r1.clone(),
                r2.clone(),
                p.reflect(&lat),
                r1.reflect(&lat),
                r2.reflect(&lat),
            ]
            .iter()
            .map(|x| x.to_string())
            .collect();
            orbit.sort_by_key(|s| {
                s.split(',')
                    .map(|x| x.parse::<usize>().unwrap_or(0))
                    .collect::<Vec<_>>()
            });
            orbit.dedup();
            let result = SymmetryResult {
                placement: p.to_string(),
                rotation: r1.to_string(),
                rotation_squared: r2.to_string(),
                reflection: p.reflect(&lat).to_string(),
                orbit_size: orbit.len(),
                orbit,
                valid: p.is_valid(&lat),
            };
            Ok((
                ctx.emit(
                    ctx.config("symmetry", a.n, vec![p.to_string()], None, false),
                    result,
                )?,
                0,
            ))
        }
        Command::Solve { set, q } => {
            let lat = lattice(set.n)?;
            let rs = receivers(&lat, set)?;
            let field = Field::new(*q)?;
            let r = parallel::is_solvable(&lat, &rs, &field, &ctx.options())?;
            let verified = r
                .witness
                .as_ref()
                .map(|w| verify_witness(&lat, &rs, &field, w))
                .transpose()?;
            let code = if r.is_solvable() { 0 } else { 1 };
            let out = SolveOutput::new(rs.placements(), rs.include_sides(), &r, verified);
            Ok((
                ctx.emit(
                    ctx.config("solve", set.n, labels(&rs), Some(*q), rs.include_sides()),
                    out,
                )?,
                code,
            ))
        }
        Command::Minfield { set, all_valid } => {
            let lat = lattice(set.n)?;
            let rs = if *all_valid {
                if !set.placements.is_empty() {
                    return Err(bad("--all-valid takes no --placement"));
                }
                ReceiverSet::new(&lat, valid_placements(&lat), !set.no_sides)?
            } else {
                receivers(&lat, set)?
            };
            let r = parallel::min_field(&lat, &rs, &ctx.options())?;
            let verified = match &r.witness {
                Some((q, w)) => Some(verify_witness(&lat, &rs, &Field::new(*q)?, w)?),
                None => None,
            };
            let code = if r.stopped_by_budget && r.exact.is_none() {
                2
            } else {
                0
            };
            let out = MinFieldOutput::new(rs.placements(), rs.include_sides(), &r, verified);
            let names = if *all_valid {
                vec!["all-valid".to_string()]
            } else {
                labels(&rs)
            };
            Ok((
                ctx.emit(
                    ctx.config("minfield", set.n, names, None, rs.include_sides()),
                    out,
                )?,
                code,
            ))
        }
        Command::Verify { set, q, point } => {
            let lat = lattice(set.n)?;
            let rs = receivers(&lat, set)?;
            let field = Field::new(*q)?;
            let pt = point
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u8>()
                        .map_err(|_| bad(format!("bad field element {s:?}")))
                })
                .collect::<anyhow::Result<Vec<u8>>>()?;
            let valid = verify_witness(&lat, &rs, &field, &pt)?;
            let values = rs
                .minors(&lat)
                .iter()
                .map(|m| field.eval(m, &pt))
                .collect::<Result<Vec<_>, _>>()?;
            let out = VerifyOutput {
                receivers: receiver_names(rs.placements(), rs.include_sides()),
                q: *q,
                point: pt,
                valid,
                values,
            };
            Ok((
                ctx.emit(
                    ctx.config("verify", set.n, labels(&rs), Some(*q), rs.include_sides()),
                    out,
                )?,
                if valid { 0 } else { 1 },
            ))
        }
        Command::CensusPairs(sub) => subset_command(&ctx, "census-pairs", sub, 2),
        Command::CensusTriples(sub) => subset_command(&ctx, "census-triples", sub, 3),
        Command::CensusSextuples {
            sub,
            size,
            checkpoint,
            max_branches,
        } => sextuple_command(&ctx, sub, *size, checkpoint.as_deref(), *max_branches),
    }
}

fn orders_up_to(max_q: u32, budget: u128, k: usize) -> anyhow::Result<Vec<u32>> {
    let orders: Vec<u32> = Field::supported_orders()
        .into_iter()
        .filter(|&q| q <= max_q)
        .collect();
    if orders.is_empty() {
        return Err(bad(format!("no supported field order up to {max_q}")));
    }
    for &q in &orders {
        let space = tsn_core::PointSpace::new(q, k, true);
        space.check_budget(budget)?;
    }
    Ok(orders)
}

fn subset_command(
    ctx: &Ctx<'_>,
    name: &str,
    sub: &SubsetArgs,
    size: usize,
) -> anyhow::Result<(String, u8)> {
    let lat = lattice(sub.n)?;
    let orders = orders_up_to(
        sub.max_q.unwrap_or(4),
        ctx.cli.budget_points,
        lat.num_vars(),
    )?;
    let store = ctx.store()?;
    let placements = valid_placements(&lat);
    eprintln!(
        "building {} tables over orders {:?}",
        placements.len() * orders.len(),
        orders
    );
    let bank = store.bank(&lat, placements.clone(), &orders)?;
    let report = parallel::subset_census(&bank, size);
    let mut out = SubsetCensusOutput::new(sub.n, &placements, &orders, &report);
    out.branches_total = placements.len().saturating_sub(size - 1);
    out.branches_done = out.branches_total;
    Ok((
        ctx.emit(ctx.config(name, sub.n, vec![], None, true), out)?,
        0,
    ))
}

fn sextuple_command(
    ctx: &Ctx<'_>,
    sub: &SubsetArgs,
    size: usize,
    checkpoint: Option<&std::path::Path>,
    max_branches: Option<usize>,
) -> anyhow::Result<(String, u8)> {
    if size == 0 {
        return Err(bad("--size must be positive"));
    }
    let lat = lattice(sub.n)?;
    let orders = orders_up_to(
        sub.max_q.unwrap_or(5),
        ctx.cli.budget_points,
        lat.num_vars(),
    )?;
    let store = ctx.store()?;
    let setup = SplitSetup::new(&lat, &orders, &store)?;
    eprintln!(
        "{} placements: {} with non-monomial minors",
        setup.placements.len(),
        setup.core.len()
    );
    let census = setup.census(size)?;
    let fresh = Checkpoint::fresh(&setup, size);
    let mut cp = match checkpoint {
        Some(p) if p.exists() => {
            let cp = Checkpoint::load(p)?;
            if !cp.matches(&fresh) {
                return Err(bad(format!(
                    "checkpoint {} belongs to a different census",
                    p.display()
                )));
            }
            cp
        }
        _ => fresh,
    };
    let limits = Limits {
        seconds: ctx.cli.budget_seconds,
        branches: max_branches,
    };
    split::run(&census, &mut cp, checkpoint, limits, |done, total| {
        eprintln!("branches {done}/{total}")
    })?;
    let report = cp.report();
    let mut out = SubsetCensusOutput::new(sub.n, &setup.placements, &orders, &report);
    out.complete = cp.is_complete();
    out.branches_done = cp.completed.len();
    out.branches_total = cp.branches_total;
    let code = if out.complete { 0 } else { 2 };
    let name = if size == 6 {
        "census-sextuples".to_string()
    } else {
        format!("census-sextuples --size {size}")
    };
    Ok((
        ctx.emit(ctx.config(&name, sub.n, vec![], None, true), out)?,
        code,
    ))
}
