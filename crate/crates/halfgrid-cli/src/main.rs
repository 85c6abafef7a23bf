//! Batch front-end: run learners on generated informants, verify recorded
//! traces against behavioral restrictions, sweep benchmark grids, and
//! expose the exact geometry and stream transforms.
//!
//! Exit codes: 0 success, 1 error, 2 run did not converge.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use halfgrid::harness::{
    run, validate, Adapter, Restriction, RunOutcome, Verdict,
};
use halfgrid::lattice::{
    count_primitive_normals_within, min_j_distance, min_parallel_distance_sq,
    primitive_normals_in_box, reduce_hyperplane, tangents, HalfSpace, Int, IntVec,
};
use halfgrid::learners::{
    CannyLearner, Coded2dLearner, HalfSpaceLearner, WitnessLearner,
};
use halfgrid::streams::{bool_map_informant, bool_map_text, StreamKind, StreamSpec};

use halfgrid_cli::jsonl::{
    bench_csv, stream_from_jsonl, stream_to_jsonl, text_to_jsonl, trace_from_jsonl,
    trace_to_jsonl, BenchRow,
};
use halfgrid_cli::{build_stream, parse_point, parse_rational, parse_target, target_label};

#[derive(Parser)]
#[command(name = "halfgrid", about = "Iterative identification of integral half-spaces from labeled lattice points", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a learner on a generated informant and record the trace.
    Run(RunArgs),
    /// Check behavioral restrictions against a recorded trace.
    Verify(VerifyArgs),
    /// Sweep a target grid, one run per (target, seed) cell, to CSV.
    Bench(BenchArgs),
    /// Exact lattice-geometry utilities.
    #[command(subcommand)]
    Geom(GeomCommand),
    /// Apply the even/odd mapping to an informant stream file.
    Transform(TransformArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Ambient dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Target inequality slope coefficients, exact rationals: "2/3,-1".
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    /// Target inequality offset, an exact rational like "1/6".
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    offset: String,
    /// Stream layout: canonical | permuted | repeat | withhold.
    #[arg(long, default_value = "canonical")]
    stream: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repeat percentage for the repeat stream.
    #[arg(long, default_value_t = 50)]
    repeat_rate: u8,
    /// Point to withhold, for the withhold stream: "x,y".
    #[arg(long, allow_hyphen_values = true)]
    withhold: Option<String>,
    /// Step at which the withheld point appears.
    #[arg(long, default_value_t = 64)]
    release_at: u64,
    /// Learner: general | coded2d | canny(general) | witness(general).
    #[arg(long, default_value = "general")]
    learner: String,
    #[arg(long, default_value_t = 2000)]
    max_steps: usize,
    /// Steps the hypothesis must be held for convergence.
    #[arg(long, default_value_t = 20)]
    window: usize,
    /// Trace output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Trace file to check.
    #[arg(long)]
    trace: PathBuf,
    /// Comma-separated restriction ids, or "all":
    /// conv,dec,caut,wmon,mon,smon,nu,snu,sdec,locconv,wb,canny.
    #[arg(long, default_value = "all")]
    restrictions: String,
    /// Compare languages only on the box of this radius (membership-only
    /// mode; verdicts become BOUNDED-PASS).
    #[arg(long, conflicts_with = "membership_only")]
    radius: Option<u64>,
    /// Drop the exact equality/inclusion deciders without a fallback
    /// radius; semantic restrictions then fail with an adapter error.
    #[arg(long)]
    membership_only: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// All primitive normals with coordinates bounded by this value.
    #[arg(long, default_value_t = 3)]
    coeff_bound: i64,
    #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
    offset_min: i64,
    #[arg(long, default_value_t = 3)]
    offset_max: i64,
    /// Number of permuted-stream seeds per target (0..seeds).
    #[arg(long, default_value_t = 3)]
    seeds: u64,
    #[arg(long, default_value_t = 2000)]
    max_steps: usize,
    #[arg(long, default_value_t = 20)]
    window: usize,
    /// CSV output path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum GeomCommand {
    /// Integral reduced form of "sum slopes_i x_i + displacement = 0";
    /// the last argument is the displacement.
    Reduce {
        #[arg(allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// Tangent half-space pair of the same equation.
    Tangent {
        #[arg(allow_hyphen_values = true)]
        values: Vec<String>,
    },
    /// Squared distance of closest parallel lattice hyperplanes for a
    /// primitive integer normal.
    Mindist {
        #[arg(allow_hyphen_values = true)]
        normal: Vec<String>,
    },
    /// Smallest axis distance from a lattice point off the plane; the
    /// last value is the displacement, the axis is 1-based.
    Jdist {
        #[arg(allow_hyphen_values = true)]
        values: Vec<String>,
        #[arg(long)]
        axis: usize,
    },
}

#[derive(Args)]
struct TransformArgs {
    /// Input stream file: one [n, label] pair per line.
    #[arg(long)]
    input: PathBuf,
    /// Output file.
    #[arg(long)]
    output: PathBuf,
    /// Emit the projected text (one natural per line) instead of the
    /// interwoven informant.
    #[arg(long)]
    text: bool,
}

fn main() -> ExitCode {
    // usage errors are configuration errors and exit 1; help and version
    // are not errors
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Geom(args) => cmd_geom(args).map(|()| ExitCode::SUCCESS),
        Command::Transform(args) => cmd_transform(args).map(|()| ExitCode::SUCCESS),
    }
}

fn run_learner(learner_id: &str, spec: &StreamSpec, max_steps: usize, window: usize) -> Result<RunOutcome> {
    let dim = spec.dim();
    let outcome = match learner_id {
        "general" => run(&HalfSpaceLearner::new(dim), "general", spec, max_steps, window),
        "coded2d" | "paper2d" => {
            if dim != 2 {
                bail!("learner coded2d requires dimension 2");
            }
            run(&Coded2dLearner, "coded2d", spec, max_steps, window)
        }
        "canny" | "canny(general)" => run(
            &CannyLearner::new(HalfSpaceLearner::new(dim)),
            "canny(general)",
            spec,
            max_steps,
            window,
        ),
        "witness" | "witness(general)" => run(
            &WitnessLearner::new(HalfSpaceLearner::new(dim)),
            "witness(general)",
            spec,
            max_steps,
            window,
        ),
        other => bail!("unknown learner {other:?}"),
    };
    outcome.map_err(|e| anyhow!("run failed: {e}"))
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let target = parse_target(&args.coeffs, &args.offset)?;
    if target.dim() != args.dim {
        bail!("target coeffs have {} entries but dim is {}", target.dim(), args.dim);
    }
    let withhold = args.withhold.as_deref().map(parse_point).transpose()?;
    let spec = build_stream(
        target,
        &args.stream,
        args.seed,
        args.repeat_rate,
        withhold.as_ref(),
        args.release_at,
    )?;
    if args.window == 0 || args.max_steps < args.window {
        bail!("max_steps must be at least window, window at least 1");
    }
    let outcome = run_learner(&args.learner, &spec, args.max_steps, args.window)?;
    fs::write(&args.out, trace_to_jsonl(&outcome.trace)?)
        .with_context(|| format!("writing {}", args.out.display()))?;
    match outcome.verdict {
        Verdict::Converged { at } => {
            println!("CONVERGED t={} locks={}", at, outcome.lock_count);
            Ok(ExitCode::SUCCESS)
        }
        Verdict::NotConverged { .. } => {
            println!("NOT_CONVERGED");
            Ok(ExitCode::from(2))
        }
    }
}

fn verdict_line(restriction: Restriction, trace: &halfgrid::harness::Trace, adapter: &Adapter) -> Result<(String, bool)> {
    use halfgrid::harness::RestrictionVerdict as V;
    match validate(trace, restriction, adapter) {
        Ok(V::Pass) => Ok((format!("{}: PASS", restriction.id()), true)),
        Ok(V::BoundedPass { radius }) => Ok((
            format!("{}: BOUNDED-PASS({})", restriction.id(), radius),
            true,
        )),
        Ok(V::Fail { r, s, t }) => Ok((
            format!("{}: FAIL({},{},{})", restriction.id(), r, s, t),
            false,
        )),
        Err(e) => Err(anyhow!("{}: {e}", restriction.id())),
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.trace)
        .with_context(|| format!("reading {}", args.trace.display()))?;
    let trace = trace_from_jsonl(&text)?;
    let restrictions: Vec<Restriction> = if args.restrictions == "all" {
        Restriction::ALL.to_vec()
    } else {
        args.restrictions
            .split(',')
            .map(|s| {
                Restriction::parse(s.trim())
                    .ok_or_else(|| anyhow!("unknown restriction {s:?}"))
            })
            .collect::<Result<_>>()?
    };
    let dim = trace.meta.dim;
    let adapter = if let Some(radius) = args.radius {
        Adapter::bounded(dim, radius)
    } else if args.membership_only {
        Adapter::custom(
            dim,
            Box::new(|tag, p| halfgrid::learners::Language::parse(tag)?.member(p).ok()),
            None,
        )
    } else {
        Adapter::exact(dim)
    };
    let mut all_ok = true;
    for restriction in restrictions {
        let (line, ok) = verdict_line(restriction, &trace, &adapter)?;
        println!("{line}");
        all_ok &= ok;
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    if args.offset_min > args.offset_max {
        bail!("offset_min above offset_max");
    }
    let mut rows: Vec<BenchRow> = Vec::new();
    for normal in primitive_normals_in_box(args.dim, args.coeff_bound) {
        for floor in args.offset_min..=args.offset_max {
            let target = HalfSpace::new(normal.clone(), Int::from(floor)).expect("primitive");
            let bound = count_primitive_normals_within(args.dim, &target.normal().norm_sq());
            for seed in 0..args.seeds {
                let spec = StreamSpec::new(target.clone(), StreamKind::Permuted, seed)
                    .map_err(|e| anyhow!("stream: {e}"))?;
                let outcome = run(
                    &HalfSpaceLearner::new(args.dim),
                    "general",
                    &spec,
                    args.max_steps,
                    args.window,
                )
                .map_err(|e| anyhow!("run failed: {e}"))?;
                rows.push(BenchRow {
                    target: target_label(&target),
                    seed,
                    steps_to_converge: match outcome.verdict {
                        Verdict::Converged { at } => Some(at),
                        Verdict::NotConverged { .. } => None,
                    },
                    lock_count: outcome.lock_count,
                    max_lock_count_bound: bound,
                });
            }
        }
    }
    fs::write(&args.out, bench_csv(&rows))
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {} rows", rows.len());
    Ok(ExitCode::SUCCESS)
}

fn split_equation(values: &[String]) -> Result<(Vec<halfgrid::lattice::Rat>, halfgrid::lattice::Rat)> {
    if values.len() < 2 {
        bail!("expected at least one slope and a displacement");
    }
    let (slopes, disp) = values.split_at(values.len() - 1);
    let slopes: Result<Vec<_>> = slopes.iter().map(|s| parse_rational(s)).collect();
    Ok((slopes?, parse_rational(&disp[0])?))
}

fn cmd_geom(cmd: GeomCommand) -> Result<()> {
    match cmd {
        GeomCommand::Reduce { values } => {
            let (slopes, disp) = split_equation(&values)?;
            let h = reduce_hyperplane(&slopes, &disp).map_err(|e| anyhow!("{e}"))?;
            let coords: Vec<String> = h.normal().coords().iter().map(|c| c.to_string()).collect();
            println!("{} | {}", coords.join(" "), h.offset());
        }
        GeomCommand::Tangent { values } => {
            let (slopes, disp) = split_equation(&values)?;
            let h = reduce_hyperplane(&slopes, &disp).map_err(|e| anyhow!("{e}"))?;
            let pair = tangents(&h);
            for (name, hs) in [("plus", &pair.plus), ("minus", &pair.minus)] {
                let coords: Vec<String> =
                    hs.normal().coords().iter().map(|c| c.to_string()).collect();
                println!("{name}: {} | {}", coords.join(" "), hs.floor_offset());
            }
        }
        GeomCommand::Mindist { normal } => {
            let coords: Result<Vec<Int>> = normal
                .iter()
                .map(|c| c.parse::<Int>().map_err(|e| anyhow!("normal: {e}")))
                .collect();
            let n = IntVec::new(coords?);
            let d = min_parallel_distance_sq(&n).map_err(|e| anyhow!("{e}"))?;
            println!("{d} (squared)");
        }
        GeomCommand::Jdist { values, axis } => {
            if axis == 0 {
                bail!("axis is 1-based");
            }
            let (slopes, disp) = split_equation(&values)?;
            let h = reduce_hyperplane(&slopes, &disp).map_err(|e| anyhow!("{e}"))?;
            if axis > h.dim() {
                bail!("axis beyond dimension");
            }
            match min_j_distance(&h, axis - 1).map_err(|e| anyhow!("{e}"))? {
                Some(d) => println!("{d}"),
                None => println!("undefined"),
            }
        }
    }
    Ok(())
}

fn cmd_transform(args: TransformArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let prefix = stream_from_jsonl(&text)?;
    let out = if args.text {
        text_to_jsonl(&bool_map_text(&prefix))?
    } else {
        let mapped = bool_map_informant(&prefix).map_err(|e| anyhow!("{e}"))?;
        stream_to_jsonl(&mapped)?
    };
    fs::write(&args.output, out)
        .with_context(|| format!("writing {}", args.output.display()))?;
    Ok(())
}
