//! Batch front door for the exact LP bound library: parse instance and
//! witness files, solve bound programs, verify witnesses, run the
//! brute-force baselines, and emit deterministic JSON reports.
//!
//! Exit codes: 0 success, 1 a checked inequality or witness failed,
//! 2 input error, 3 resource cap exceeded.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use serde_json::{json, Value};

use lpbound::comm::conventional::TildeRec;
use lpbound::comm::lemmas::{
    disc_distribution_to_rec_dual, distribution_to_rec_dual, distribution_to_sdisc_dual,
    distribution_to_srec_dual, rec_dual_to_distribution, sdisc_dual_to_distribution,
    srec_dual_to_distribution,
};
use lpbound::comm::{check_comm_witness, comm_bound_program, compute_comm_bound};
use lpbound::instances::lne::{lne_primal_witness, make_lne, verify_lne_primal, LneCheckMode};
use lpbound::instances::random::{comm_corpus, query_corpus};
use lpbound::instances::standard::make_standard;
use lpbound::instances::tribes::{make_tribes, tribes_dual_witness, verify_tribes_dual};
use lpbound::instances::Instance;
use lpbound::model::{BoundKind, Distribution, RunConfig};
use lpbound::oracle::{deterministic_cc, deterministic_query, exact_rank};
use lpbound::query::degree::approx_degree;
use lpbound::query::measures::certificate_complexity;
use lpbound::query::witnesses::bs_dual_witness;
use lpbound::query::{check_query_witness, compute_query_bound, query_bound_program};
use lpbound::rat::{fmt_rat, parse_rat, pow2, rat, ratio, Rat};
use lpbound::textio::{
    parse_instance, parse_witness, serialize_instance, serialize_protocol_tree,
    serialize_query_tree, serialize_witness,
};
use lpbound::{Error, Result};

mod report;
use report::{distribution_json, emit, emit_text, feas_json, instance_json, rat_json};

#[derive(Parser)]
#[command(
    name = "lpbound",
    version,
    about = "Exact LP lower bounds for communication and query complexity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and solve one bound LP for an instance file.
    Compute(ComputeArgs),
    /// Check an explicit witness file against its bound program.
    #[command(name = "verify-witness")]
    VerifyWitness(VerifyArgs),
    /// Run the brute-force baselines on an instance file.
    Oracle(OracleArgs),
    /// Run one dual/distribution transformation round trip.
    Lemma(LemmaArgs),
    /// Generate a named instance, or construct and check a named witness.
    Example(ExampleArgs),
    /// Run an inequality suite over seeded random instances.
    Suite(SuiteArgs),
}

/// Caps and behavior flags shared by every command.
#[derive(Args)]
struct Knobs {
    /// Cap on enumerated regions and LP variables.
    #[arg(long)]
    cap_vars: Option<usize>,
    /// Cap on simplex pivots per solve.
    #[arg(long)]
    cap_pivots: Option<u64>,
    /// Restrict output labels to the instance's image (pass false for the
    /// full declared alphabet).
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    restrict_z_image: bool,
    /// Check list-nonequality witnesses on the full grid (pass false for
    /// the all-blocks-nonzero restriction).
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    lne_full_grid: bool,
}

impl Knobs {
    fn config(&self) -> RunConfig {
        let mut config = RunConfig::new();
        if let Some(v) = self.cap_vars {
            config.caps.max_lp_vars = v;
            config.caps.max_regions = v;
        }
        if let Some(p) = self.cap_pivots {
            config.caps.max_pivots = p;
        }
        config.restrict_z_image = self.restrict_z_image;
        config.lne_full_grid = self.lne_full_grid;
        config
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::VerifyWitness(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Lemma(args) => cmd_lemma(args),
        Command::Example(args) => cmd_example(args),
        Command::Suite(args) => cmd_suite(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance> {
    parse_instance(&read_file(path)?)
}

/// `--kind rec --z 1` and `--kind rec@1` both name the same bound.
fn bound_kind(token: &str, z: Option<u16>) -> Result<BoundKind> {
    match (z, token) {
        (Some(z), "rec" | "srec") => BoundKind::from_token(&format!("{token}@{z}")),
        _ => BoundKind::from_token(token),
    }
}

#[derive(Args)]
struct ComputeArgs {
    /// Bound kind token: prt, rec@z, srec@z, srec_max, disc, sdisc, prt_lv,
    /// prt_lv_star, prt_relation, prt0_mono, qprt, qprt_relation,
    /// qsrec_relaxed.
    #[arg(long)]
    kind: String,
    /// Error parameter as a fraction `p/q` or an integer.
    #[arg(long, default_value = "0")]
    eps: String,
    /// Output label for `--kind rec` / `--kind srec`.
    #[arg(long)]
    z: Option<u16>,
    /// Instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the full LP text in the report.
    #[arg(long)]
    dump_lp: bool,
    #[command(flatten)]
    knobs: Knobs,
}

fn cmd_compute(args: ComputeArgs) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let kind = bound_kind(&args.kind, args.z)?;
    let eps = parse_rat(&args.eps)?;
    let config = args.knobs.config();

    let dump = if args.dump_lp {
        if kind == BoundKind::SrecMax {
            return Err(Error::Input(
                "srec_max solves one LP per output; dump a concrete srec@z instead".into(),
            ));
        }
        Some(match &instance {
            Instance::Comm(f) => comm_bound_program(f, kind, &eps, &config)?.lp().dump(),
            Instance::Query(q) => query_bound_program(q, kind, &eps, &config)?.lp().dump(),
        })
    } else {
        None
    };

    let rep = match &instance {
        Instance::Comm(f) => compute_comm_bound(f, kind, &eps, &config)?,
        Instance::Query(q) => compute_query_bound(q, kind, &eps, &config)?,
    };

    let mut value = json!({
        "command": "compute",
        "instance": instance_json(&instance),
        "kind": rep.kind.token(),
        "epsilon": fmt_rat(&rep.epsilon),
        "value": fmt_rat(&rep.value),
        "log2_value": rep.log2_value,
        "pivots": rep.pivots,
        "lp_vars": rep.lp_vars,
        "lp_constraints": rep.lp_cons,
        "primal_witness": serialize_witness(&rep.primal),
        "dual_witness": serialize_witness(&rep.dual),
    });
    if let Some(z) = rep.chosen_z {
        value["chosen_z"] = json!(z);
    }
    if let Some(text) = dump {
        value["lp"] = json!(text);
    }
    emit(args.out.as_deref(), &value)
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Witness file to check.
    #[arg(long)]
    witness: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    knobs: Knobs,
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let witness = parse_witness(&read_file(&args.witness)?)?;
    let config = args.knobs.config();
    let check = match &instance {
        Instance::Comm(f) => check_comm_witness(f, &witness, &config)?,
        Instance::Query(q) => check_query_witness(q, &witness, &config)?,
    };
    let value = json!({
        "command": "verify-witness",
        "instance": instance_json(&instance),
        "kind": witness.kind,
        "side": check.side.token(),
        "epsilon": fmt_rat(&witness.epsilon),
        "check": feas_json(&check.report),
    });
    emit(args.out.as_deref(), &value)?;
    if !check.feasible() {
        return Err(Error::Check(format!(
            "witness infeasible: {}",
            check.report.describe()
        )));
    }
    Ok(())
}

#[derive(Args)]
struct OracleArgs {
    /// Instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// One of dcc, rank (communication) or dquery (query); default runs
    /// every oracle the instance supports.
    #[arg(long)]
    name: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_oracle(args: OracleArgs) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let mut value = json!({
        "command": "oracle",
        "instance": instance_json(&instance),
    });
    let which = args.name.as_deref();
    match &instance {
        Instance::Comm(f) => match which {
            None => {
                let (depth, tree) = deterministic_cc(f)?;
                value["dcc"] = json!(depth);
                value["protocol"] = json!(serialize_protocol_tree(&tree));
                if !f.is_relation() && f.is_total() && f.alphabet() == 2 {
                    value["rank"] = json!(exact_rank(f)?);
                }
            }
            Some("dcc") => {
                let (depth, tree) = deterministic_cc(f)?;
                value["dcc"] = json!(depth);
                value["protocol"] = json!(serialize_protocol_tree(&tree));
            }
            Some("rank") => value["rank"] = json!(exact_rank(f)?),
            Some(other) => {
                return Err(Error::Input(format!(
                    "unknown communication oracle {other:?}, expected dcc or rank"
                )))
            }
        },
        Instance::Query(q) => match which {
            None | Some("dquery") => {
                let (depth, tree) = deterministic_query(q)?;
                value["dquery"] = json!(depth);
                value["decision_tree"] = json!(serialize_query_tree(&tree));
            }
            Some(other) => {
                return Err(Error::Input(format!(
                    "unknown query oracle {other:?}, expected dquery"
                )))
            }
        },
    }
    emit(args.out.as_deref(), &value)
}

#[derive(Args)]
struct LemmaArgs {
    /// Transformation family: rec, srec, sdisc (dual -> distribution ->
    /// dual round trips) or disc (distribution -> rectangle dual).
    #[arg(long)]
    name: String,
    /// Communication instance file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output label (default 1).
    #[arg(long)]
    z: Option<u16>,
    /// Error parameter.
    #[arg(long, default_value = "1/8")]
    eps: String,
    /// Distribution for `disc`: `uniform` or a file of `<cell-index> <p/q>`
    /// weight lines (weights are normalized).
    #[arg(long)]
    lambda: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    knobs: Knobs,
}

fn tilde_json(tilde: &TildeRec) -> Value {
    match tilde {
        TildeRec::Finite(v) => json!(fmt_rat(v)),
        TildeRec::NoQualifying => json!("no qualifying rectangle"),
    }
}

fn load_lambda(spec: &str, cells: usize) -> Result<Distribution> {
    if spec == "uniform" {
        return Distribution::uniform_over(0..cells);
    }
    let text = read_file(Path::new(spec))?;
    let mut weights = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 2 {
            return Err(Error::Input(format!(
                "line {}: expected `<cell-index> <p/q>`",
                i + 1
            )));
        }
        let idx = toks[0]
            .parse::<usize>()
            .map_err(|_| Error::Input(format!("line {}: bad index {:?}", i + 1, toks[0])))?;
        let w = parse_rat(toks[1])
            .map_err(|_| Error::Input(format!("line {}: bad fraction {:?}", i + 1, toks[1])))?;
        if weights.insert(idx, w).is_some() {
            return Err(Error::Input(format!(
                "line {}: duplicate cell {idx}",
                i + 1
            )));
        }
    }
    Distribution::normalized(weights)
}

fn cmd_lemma(args: LemmaArgs) -> Result<()> {
    let instance = load_instance(&args.input)?;
    let Instance::Comm(f) = &instance else {
        return Err(Error::Input(
            "lemma transformations run on communication instances".into(),
        ));
    };
    let eps = parse_rat(&args.eps)?;
    let z = args.z.unwrap_or(1);
    let config = args.knobs.config();
    let quarter = &eps / rat(4);

    let body = match args.name.as_str() {
        "rec" => {
            let rep = compute_comm_bound(f, BoundKind::Rec(z), &eps, &config)?;
            let ext = rec_dual_to_distribution(f, &rep.dual, &config)?;
            let back = distribution_to_rec_dual(f, z, &ext.lambda, &quarter, &config)?;
            json!({
                "lp_value": rat_json(&rep.value),
                "extraction": {
                    "k": rat_json(&ext.k),
                    "z_mass": rat_json(&ext.z_mass),
                    "tilde": tilde_json(&ext.tilde),
                    "vacuous": ext.vacuous,
                    "lambda": distribution_json(&ext.lambda),
                },
                "construction": {
                    "epsilon": fmt_rat(&quarter),
                    "objective": rat_json(&back.objective),
                    "k": rat_json(&back.k),
                    "printed_bound": rat_json(&back.printed_bound),
                    "printed_bound_holds": back.printed_bound_holds,
                    "witness": serialize_witness(&back.witness),
                },
            })
        }
        "srec" => {
            let rep = compute_comm_bound(f, BoundKind::Srec(z), &eps, &config)?;
            let ext = srec_dual_to_distribution(f, &rep.dual, &config)?;
            let back = distribution_to_srec_dual(f, z, &ext.lambda, &ext.g, &quarter, &config)?;
            json!({
                "lp_value": rat_json(&rep.value),
                "extraction": {
                    "k": rat_json(&ext.k),
                    "z_mass": rat_json(&ext.z_mass),
                    "tilde": tilde_json(&ext.tilde),
                    "vacuous": ext.vacuous,
                    "flipped_cells": ext.flips,
                    "error_mass": rat_json(&ext.error_mass),
                    "error_mass_small": ext.error_mass_small,
                    "lambda": distribution_json(&ext.lambda),
                },
                "construction": {
                    "epsilon": fmt_rat(&quarter),
                    "objective": rat_json(&back.objective),
                    "k": rat_json(&back.k),
                    "srec_value": rat_json(&back.srec_value),
                    "printed_bound": rat_json(&back.printed_bound),
                    "printed_bound_holds": back.printed_bound_holds,
                    "canonical": back.canonical,
                    "error_mass": rat_json(&back.error_mass),
                    "witness": serialize_witness(&back.witness),
                },
            })
        }
        "sdisc" => {
            let rep = compute_comm_bound(f, BoundKind::Sdisc, &eps, &config)?;
            let ext = sdisc_dual_to_distribution(f, &rep.dual, &config)?;
            let threshold = rat(1) / (rat(4) + rat(2) * &eps);
            let construction = if ext.error_mass <= threshold {
                let back = distribution_to_sdisc_dual(f, &ext.lambda, &ext.g, &eps, &config)?;
                json!({
                    "objective": rat_json(&back.objective),
                    "k": rat_json(&back.k),
                    "error_mass": rat_json(&back.error_mass),
                    "threshold": rat_json(&back.threshold),
                    "witness": serialize_witness(&back.witness),
                })
            } else {
                json!({
                    "skipped": format!(
                        "disagreement mass {} exceeds the admissible {}",
                        fmt_rat(&ext.error_mass),
                        fmt_rat(&threshold)
                    ),
                })
            };
            json!({
                "lp_value": rat_json(&rep.value),
                "extraction": {
                    "k": rat_json(&ext.k),
                    "total_mass": rat_json(&ext.total_mass),
                    "disc": rat_json(&ext.disc),
                    "flipped_cells": ext.flips,
                    "error_mass": rat_json(&ext.error_mass),
                    "lambda": distribution_json(&ext.lambda),
                },
                "construction": construction,
            })
        }
        "disc" => {
            let cells = f.nrows() * f.ncols();
            let lambda = load_lambda(args.lambda.as_deref().unwrap_or("uniform"), cells)?;
            let out = disc_distribution_to_rec_dual(f, z, &lambda, &eps, &config)?;
            json!({
                "k": rat_json(&out.k),
                "objective": rat_json(&out.objective),
                "guaranteed": rat_json(&out.guaranteed),
                "lambda": distribution_json(&lambda),
                "witness": serialize_witness(&out.witness),
            })
        }
        other => {
            return Err(Error::Input(format!(
                "unknown lemma {other:?}, expected rec, srec, sdisc or disc"
            )))
        }
    };

    let value = json!({
        "command": "lemma",
        "name": args.name,
        "instance": instance_json(&instance),
        "epsilon": fmt_rat(&eps),
        "z": z,
        "report": body,
    });
    emit(args.out.as_deref(), &value)
}

#[derive(Args)]
struct ExampleArgs {
    /// `tribes` or `lne` (construct and optionally verify the named
    /// witness), `bs` (block-sensitivity dual for the instance in `--in`),
    /// or a standard instance name like `eq`, `or`, `xor`, `and` combined
    /// with `--n` (emits the instance file itself).
    #[arg(long)]
    name: String,
    /// Size parameter for the named construction.
    #[arg(long)]
    n: Option<usize>,
    /// Error parameter.
    #[arg(long, default_value = "1/32")]
    eps: String,
    /// Verify the constructed witness exhaustively.
    #[arg(long)]
    verify: bool,
    /// Query instance file (for `bs`).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Sampling seed for checks too large to enumerate.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Sample size for checks too large to enumerate.
    #[arg(long, default_value_t = 2048)]
    count: usize,
    /// Write the report (or generated instance) here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    knobs: Knobs,
}

fn cmd_example(args: ExampleArgs) -> Result<()> {
    let eps = parse_rat(&args.eps)?;
    let config = args.knobs.config();
    match args.name.as_str() {
        "tribes" => {
            let n = args.n.unwrap_or(4);
            let witness = tribes_dual_witness(n, &eps)?;
            let mut value = json!({
                "command": "example",
                "name": "tribes",
                "n": n,
                "epsilon": fmt_rat(&eps),
                "kind": BoundKind::QSrecRelaxed.token(),
                "scale_log2": witness.scale_log2,
                "objective": rat_json(&witness.objective),
                "objective_formula": witness.objective_formula,
                "support": {
                    "mu": witness.mu.len(),
                    "phi": witness.phi.len(),
                },
            });
            if args.verify {
                let instance = make_tribes(n)?;
                let check = verify_tribes_dual(&instance, &witness, &config.caps)?;
                value["verified"] = json!({
                    "assignments_checked": check.assignments_checked,
                });
            }
            emit(args.out.as_deref(), &value)
        }
        "lne" => {
            let n = args.n.unwrap_or(2);
            let witness = lne_primal_witness(n)?;
            let cap = rat(2) * pow2(3 * n as i64);
            let mut value = json!({
                "command": "example",
                "name": "lne",
                "n": n,
                "one_total": rat_json(&witness.one_total),
                "zero_total": rat_json(&witness.zero_total),
                "grand_total": rat_json(&witness.grand_total),
                "weight_cap": rat_json(&cap),
                "within_cap": witness.grand_total <= cap,
            });
            if args.verify {
                let mode = if config.lne_full_grid {
                    LneCheckMode::FullGrid
                } else {
                    LneCheckMode::RestrictedGrid
                };
                let sample = (n >= 3).then_some((args.seed, args.count));
                let check = verify_lne_primal(&witness, mode, sample)?;
                value["verified"] = json!({
                    "mode": format!("{:?}", check.mode),
                    "cells_checked": check.cells_checked,
                    "sampled": check.sampled,
                    "findings": check.findings,
                });
            }
            if n == 2 {
                value["rank"] = json!(exact_rank(&make_lne(2)?)?);
            }
            emit(args.out.as_deref(), &value)
        }
        "bs" => {
            let Some(path) = &args.input else {
                return Err(Error::Input(
                    "the block-sensitivity example needs a query instance via --in".into(),
                ));
            };
            let instance = load_instance(path)?;
            let Instance::Query(q) = &instance else {
                return Err(Error::Input(
                    "the block-sensitivity witness is built on query instances".into(),
                ));
            };
            let witness = bs_dual_witness(q, &eps, &config.caps)?;
            let mut value = json!({
                "command": "example",
                "name": "bs",
                "instance": instance_json(&instance),
                "epsilon": fmt_rat(&eps),
                "input_point": witness.input,
                "blocks": witness.blocks,
                "objective": rat_json(&witness.objective),
                "program_epsilon": fmt_rat(&witness.witness.epsilon),
                "witness": serialize_witness(&witness.witness),
            });
            if args.verify {
                let check = check_query_witness(q, &witness.witness, &config)?;
                value["verified"] = json!({ "lp_route": feas_json(&check.report) });
                if !check.feasible() {
                    emit(args.out.as_deref(), &value)?;
                    return Err(Error::Check(format!(
                        "witness infeasible: {}",
                        check.report.describe()
                    )));
                }
            }
            emit(args.out.as_deref(), &value)
        }
        name => {
            // Instance generators: `--name eq --n 4` or a full token like
            // `eq_4` directly. Output is the instance file itself.
            let token = match args.n {
                Some(n) if !name.contains('_') => format!("{name}_{n}"),
                _ => name.to_string(),
            };
            let instance = make_standard(&token)?;
            emit_text(args.out.as_deref(), &serialize_instance(&instance))
        }
    }
}

#[derive(Args)]
struct SuiteArgs {
    /// chain, lv, query-chain, oracle or lemmas.
    #[arg(long)]
    name: String,
    /// Seed for the random corpus.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of random instances.
    #[arg(long, default_value_t = 20)]
    count: usize,
    /// Run only this error parameter instead of the default list.
    #[arg(long)]
    eps: Option<String>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    knobs: Knobs,
}

fn cmd_suite(args: SuiteArgs) -> Result<()> {
    let config = args.knobs.config();
    let eps_list: Vec<Rat> = match &args.eps {
        Some(text) => vec![parse_rat(text)?],
        None => vec![rat(0), ratio(1, 8), ratio(1, 4)],
    };
    let mut failures: Vec<String> = Vec::new();
    let results = match args.name.as_str() {
        "chain" => suite_chain(args.seed, args.count, &eps_list, &config, &mut failures)?,
        "lv" => suite_lv(args.seed, args.count, &config, &mut failures)?,
        "query-chain" => suite_query_chain(args.seed, args.count, &config, &mut failures)?,
        "oracle" => suite_oracle(args.seed, args.count, &config, &mut failures)?,
        "lemmas" => suite_lemmas(args.seed, args.count, &config, &mut failures)?,
        other => {
            return Err(Error::Input(format!(
                "unknown suite {other:?}, expected chain, lv, query-chain, oracle or lemmas"
            )))
        }
    };

    let value = json!({
        "command": "suite",
        "name": args.name,
        "seed": args.seed,
        "count": args.count,
        "results": results,
        "failures": failures,
    });
    emit(args.out.as_deref(), &value)?;
    if !failures.is_empty() {
        return Err(Error::Check(format!(
            "{} inequality checks failed",
            failures.len()
        )));
    }
    Ok(())
}

/// prt >= srec@z >= rec@z for both outputs at every requested error.
fn suite_chain(
    seed: u64,
    count: usize,
    eps_list: &[Rat],
    config: &RunConfig,
    failures: &mut Vec<String>,
) -> Result<Vec<Value>> {
    let mut results = Vec::new();
    for (i, f) in comm_corpus(4, 4, seed, count)?.iter().enumerate() {
        let mut checks = Vec::new();
        for eps in eps_list {
            let prt = compute_comm_bound(f, BoundKind::Prt, eps, config)?.value;
            let mut row = json!({
                "eps": fmt_rat(eps),
                "prt": fmt_rat(&prt),
            });
            for z in [0u16, 1] {
                let srec = compute_comm_bound(f, BoundKind::Srec(z), eps, config)?.value;
                let rec = compute_comm_bound(f, BoundKind::Rec(z), eps, config)?.value;
                if prt < srec {
                    failures.push(format!(
                        "instance {i} eps {}: prt {} < srec@{z} {}",
                        fmt_rat(eps),
                        fmt_rat(&prt),
                        fmt_rat(&srec)
                    ));
                }
                if srec < rec {
                    failures.push(format!(
                        "instance {i} eps {}: srec@{z} {} < rec@{z} {}",
                        fmt_rat(eps),
                        fmt_rat(&srec),
                        fmt_rat(&rec)
                    ));
                }
                row[format!("srec@{z}")] = json!(fmt_rat(&srec));
                row[format!("rec@{z}")] = json!(fmt_rat(&rec));
            }
            checks.push(row);
        }
        results.push(json!({ "instance": i, "checks": checks }));
    }
    Ok(results)
}

/// prt0 >= lv* >= prt0 / 2.
fn suite_lv(
    seed: u64,
    count: usize,
    config: &RunConfig,
    failures: &mut Vec<String>,
) -> Result<Vec<Value>> {
    let mut results = Vec::new();
    for (i, f) in comm_corpus(4, 4, seed, count)?.iter().enumerate() {
        let prt0 = compute_comm_bound(f, BoundKind::Prt, &rat(0), config)?.value;
        let lv = compute_comm_bound(f, BoundKind::PrtLvStar, &rat(0), config)?.value;
        if prt0 < lv || rat(2) * &lv < prt0 {
            failures.push(format!(
                "instance {i}: prt0 {} and lv* {} break the bracket",
                fmt_rat(&prt0),
                fmt_rat(&lv)
            ));
        }
        results.push(json!({
            "instance": i,
            "prt0": fmt_rat(&prt0),
            "lv_star": fmt_rat(&lv),
        }));
    }
    Ok(results)
}

/// 2^C <= qprt0 and qprt_{1/8} >= 2^deg / 8 on random total functions.
fn suite_query_chain(
    seed: u64,
    count: usize,
    config: &RunConfig,
    failures: &mut Vec<String>,
) -> Result<Vec<Value>> {
    let mut results = Vec::new();
    for (i, q) in query_corpus(4, seed, count)?.iter().enumerate() {
        let qprt0 = compute_query_bound(q, BoundKind::QPrt, &rat(0), config)?.value;
        let c = certificate_complexity(q)?;
        if qprt0 < pow2(i64::from(c)) {
            failures.push(format!("instance {i}: qprt0 {} < 2^{c}", fmt_rat(&qprt0)));
        }
        let qprt8 = compute_query_bound(q, BoundKind::QPrt, &ratio(1, 8), config)?.value;
        let deg = approx_degree(q, &ratio(1, 4), &config.caps)?.degree;
        if qprt8 < ratio(1, 8) * pow2(i64::from(deg)) {
            failures.push(format!(
                "instance {i}: qprt_1/8 {} < 2^{deg}/8",
                fmt_rat(&qprt8)
            ));
        }
        results.push(json!({
            "instance": i,
            "certificate": c,
            "qprt0": fmt_rat(&qprt0),
            "approx_degree": deg,
            "qprt_eighth": fmt_rat(&qprt8),
        }));
    }
    Ok(results)
}

/// Brute-force baselines dominate the LP optima.
fn suite_oracle(
    seed: u64,
    count: usize,
    config: &RunConfig,
    failures: &mut Vec<String>,
) -> Result<Vec<Value>> {
    let mut results = Vec::new();
    for (i, f) in comm_corpus(4, 4, seed, count)?.iter().enumerate() {
        let (depth, _) = deterministic_cc(f)?;
        let prt0 = compute_comm_bound(f, BoundKind::Prt, &rat(0), config)?.value;
        let rank = exact_rank(f)?;
        if pow2(i64::from(depth)) < prt0 {
            failures.push(format!("comm {i}: 2^{depth} < prt0 {}", fmt_rat(&prt0)));
        }
        if pow2(i64::from(depth)) < rat(rank as i64) {
            failures.push(format!("comm {i}: 2^{depth} < rank {rank}"));
        }
        results.push(json!({
            "flavor": "comm",
            "instance": i,
            "dcc": depth,
            "rank": rank,
            "prt0": fmt_rat(&prt0),
        }));
    }
    for (i, q) in query_corpus(4, seed, count)?.iter().enumerate() {
        let (depth, _) = deterministic_query(q)?;
        let qprt0 = compute_query_bound(q, BoundKind::QPrt, &rat(0), config)?.value;
        if pow2(2 * i64::from(depth)) < qprt0 {
            failures.push(format!(
                "query {i}: 2^(2*{depth}) < qprt0 {}",
                fmt_rat(&qprt0)
            ));
        }
        results.push(json!({
            "flavor": "query",
            "instance": i,
            "dquery": depth,
            "qprt0": fmt_rat(&qprt0),
        }));
    }
    Ok(results)
}

/// Dual/distribution round trips on random instances; instances outside a
/// headline regime are listed, not failed.
fn suite_lemmas(
    seed: u64,
    count: usize,
    config: &RunConfig,
    failures: &mut Vec<String>,
) -> Result<Vec<Value>> {
    let eps = ratio(1, 8);
    let quarter = &eps / rat(4);
    let mut results = Vec::new();
    for (i, f) in comm_corpus(4, 4, seed, count)?.iter().enumerate() {
        let mut excluded: Vec<String> = Vec::new();
        let z = 1u16;
        if !f.image().contains(&z) {
            excluded.push("no 1-cells; skipped".into());
            results.push(json!({ "instance": i, "excluded": excluded }));
            continue;
        }

        let rec = compute_comm_bound(f, BoundKind::Rec(z), &eps, config)?;
        let ext = rec_dual_to_distribution(f, &rec.dual, config)?;
        if ext.vacuous {
            excluded.push("rectangle extraction vacuous".into());
        }
        let back = distribution_to_rec_dual(f, z, &ext.lambda, &quarter, config)?;
        if back.printed_bound_holds {
            if back.objective < back.printed_bound {
                failures.push(format!("instance {i}: rectangle headline missed"));
            }
        } else {
            excluded.push("rectangle headline needs z-mass >= 1/2".into());
        }

        let srec = compute_comm_bound(f, BoundKind::Srec(z), &eps, config)?;
        let sext = srec_dual_to_distribution(f, &srec.dual, config)?;
        if sext.k < srec.value {
            failures.push(format!("instance {i}: smooth extraction lost value"));
        }
        let sback = distribution_to_srec_dual(f, z, &sext.lambda, &sext.g, &quarter, config)?;
        if sback.canonical {
            if !sback.printed_bound_holds {
                failures.push(format!("instance {i}: canonical smooth headline missed"));
            }
        } else {
            excluded.push("smooth headline constant outside the stated regime".into());
        }

        let sdisc = compute_comm_bound(f, BoundKind::Sdisc, &eps, config)?;
        let dext = sdisc_dual_to_distribution(f, &sdisc.dual, config)?;
        let threshold = rat(1) / (rat(4) + rat(2) * &eps);
        if dext.error_mass <= threshold {
            let dback = distribution_to_sdisc_dual(f, &dext.lambda, &dext.g, &eps, config)?;
            if dback.objective < &dback.k / rat(2) {
                failures.push(format!("instance {i}: discrepancy construction too weak"));
            }
        } else {
            excluded.push("discrepancy disagreement above threshold".into());
        }

        let uniform = Distribution::uniform_over(0..f.nrows() * f.ncols())?;
        let direct = disc_distribution_to_rec_dual(f, z, &uniform, &ratio(1, 4), config)?;
        if direct.objective < direct.guaranteed {
            failures.push(format!("instance {i}: uniform discrepancy bound missed"));
        }

        results.push(json!({ "instance": i, "excluded": excluded }));
    }
    Ok(results)
}
