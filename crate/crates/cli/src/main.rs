use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use primnorm::backtrack::{
    brute_force_normalizer, is_normalizing, normalizer_in_group, ENUMERATION_CAP,
};
use primnorm::bench::{Family, TopGroup};
use primnorm::io::{group_to_json, parse_group, permutations_to_json, SetMapJson};
use primnorm::reduction::normalizer_pa_with;
use primnorm::structure::{classify_pa, socle};
use primnorm::wreath::{product_action_wreath_capped, wreath, WreathAction, DEFAULT_DEGREE_CAP};
use primnorm::{Error, PermGroup};

mod bench;

#[derive(Parser)]
#[command(
    name = "primnorm",
    version,
    about = "Normalizers of primitive permutation groups of product-action type"
)]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalizer in the symmetric group of a PA group, or in a given ambient group.
    Normalizer(NormalizerArgs),
    /// Decide whether a group is primitive of type PA.
    Classify { file: PathBuf },
    /// Product decomposition: relabelling and projection maps.
    Decompose { file: PathBuf },
    /// Socle and its simple factors.
    Socle { file: PathBuf },
    /// Build a wreath product from two group files.
    MakeWreath {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        top: PathBuf,
        #[arg(long, value_enum, default_value_t = Action::Product)]
        action: Action,
        #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
        cap: usize,
    },
    /// Run the benchmark matrix.
    Bench(bench::BenchArgs),
    /// One benchmark case as JSON; used by `bench --jobs`.
    #[command(hide = true)]
    BenchCase {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        top: TopGroup,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Args)]
struct NormalizerArgs {
    /// A primitive group of type PA.
    #[arg(long, conflicts_with_all = ["ambient", "group"], required_unless_present = "group")]
    pa: Option<PathBuf>,
    /// Generators of the socle, skipping its computation.
    #[arg(long, requires = "pa")]
    socle: Option<PathBuf>,
    #[arg(long, requires = "group")]
    ambient: Option<PathBuf>,
    #[arg(long, requires = "ambient")]
    group: Option<PathBuf>,
    /// Include orders and per-phase timings.
    #[arg(long)]
    report: bool,
    /// Cross-check against enumeration when the search group is small enough.
    #[arg(long)]
    brute_force: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Action {
    Product,
    Imprimitive,
}

fn read_group(path: &Path) -> anyhow::Result<PermGroup> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_group(&text).with_context(|| format!("parsing {}", path.display()))
}

fn print(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("json value")
    );
}

fn small_enough(group: &PermGroup) -> bool {
    group.order() <= BigUint::from(ENUMERATION_CAP)
}

/// Recomputed from the output generators, not taken from the pipeline.
fn verification(
    result: &PermGroup,
    group: &PermGroup,
) -> anyhow::Result<serde_json::Map<String, Value>> {
    let fresh = PermGroup::new(result.degree(), result.generators().to_vec())?;
    let mut out = serde_json::Map::new();
    out.insert("contains_G".into(), json!(fresh.is_subgroup(group)?));
    let normalizes = fresh
        .generators()
        .iter()
        .map(|x| is_normalizing(x, group))
        .collect::<primnorm::Result<Vec<_>>>()?;
    out.insert(
        "all_generators_normalize".into(),
        json!(normalizes.iter().all(|&b| b)),
    );
    Ok(out)
}

fn cmd_normalizer(args: &NormalizerArgs, seed: u64) -> anyhow::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (result, group, report, oracle) = if let Some(pa) = &args.pa {
        let group = read_group(pa)?;
        let socle_gens = match &args.socle {
            Some(path) => Some(read_group(path)?.generators().to_vec()),
            None => None,
        };
        let res = normalizer_pa_with(&group, socle_gens, &mut rng)?;
        let oracle = if args.brute_force && small_enough(&res.ambient) {
            let brute =
                brute_force_normalizer(&res.ambient, &res.decomposition.g_hat, ENUMERATION_CAP)?;
            Some(
                res.decomposition
                    .pull_back(&brute)
                    .same_group(&res.normalizer)?,
            )
        } else {
            None
        };
        (
            res.normalizer,
            group,
            Some(serde_json::to_value(&res.report)?),
            oracle,
        )
    } else {
        let (Some(ambient), Some(group)) = (&args.ambient, &args.group) else {
            bail!("either --pa or --ambient with --group is required");
        };
        let ambient = read_group(ambient)?;
        let group = read_group(group)?;
        let result = normalizer_in_group(&ambient, &group)?;
        let oracle = if args.brute_force && small_enough(&ambient) {
            Some(brute_force_normalizer(&ambient, &group, ENUMERATION_CAP)?.same_group(&result)?)
        } else {
            None
        };
        (result, group, None, oracle)
    };

    let mut verification = verification(&result, &group)?;
    if args.brute_force {
        verification.insert(
            "oracle_match".into(),
            oracle.map_or(Value::Null, Value::Bool),
        );
    }
    let mut out = group_to_json(&result);
    out["order"] = json!(result.order().to_string());
    out["verification"] = Value::Object(verification);
    if args.report {
        out["report"] = report.unwrap_or(Value::Null);
    }
    print(&out);
    Ok(())
}

fn cmd_classify(path: &Path, seed: u64) -> anyhow::Result<()> {
    let group = read_group(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let out = match classify_pa(&group, &mut rng) {
        Ok(d) => json!({
            "type": "PA",
            "ell": d.ell,
            "m": d.m,
            "socle_order": d.socle.socle.order().to_string(),
        }),
        Err(Error::NotPa(reason)) => json!({ "type": "not-PA", "reason": reason }),
        Err(e) => return Err(e.into()),
    };
    print(&out);
    Ok(())
}

fn cmd_decompose(path: &Path, seed: u64) -> anyhow::Result<()> {
    let group = read_group(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = classify_pa(&group, &mut rng)?;
    let projections: Vec<SetMapJson> = d.projections.iter().map(SetMapJson::from_map).collect();
    print(&json!({
        "ell": d.ell,
        "m": d.m,
        "socle_order": d.socle.socle.order().to_string(),
        "relabeling": d.relabeling.one_based(),
        "projections": projections,
        "t": group_to_json(&d.t),
        "g_hat": group_to_json(&d.g_hat),
    }));
    Ok(())
}

fn cmd_socle(path: &Path, seed: u64) -> anyhow::Result<()> {
    let group = read_group(path)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = socle(&group, &mut rng)?;
    print(&json!({
        "order": s.socle.order().to_string(),
        "degree": s.socle.degree(),
        "generators": permutations_to_json(s.socle.generators()),
        "factors": s.factors.iter().map(group_to_json).collect::<Vec<_>>(),
    }));
    Ok(())
}

fn cmd_make_wreath(base: &Path, top: &Path, action: Action, cap: usize) -> anyhow::Result<()> {
    let h = read_group(base)?;
    let k = read_group(top)?;
    let w = match action {
        Action::Product => product_action_wreath_capped(&h, &k, cap)?,
        Action::Imprimitive => wreath(&h, &k, WreathAction::Imprimitive)?,
    };
    print(&group_to_json(&w));
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Normalizer(args) => cmd_normalizer(args, cli.seed),
        Command::Classify { file } => cmd_classify(file, cli.seed),
        Command::Decompose { file } => cmd_decompose(file, cli.seed),
        Command::Socle { file } => cmd_socle(file, cli.seed),
        Command::MakeWreath {
            base,
            top,
            action,
            cap,
        } => cmd_make_wreath(base, top, *action, *cap),
        Command::Bench(args) => bench::cmd_bench(args, cli.seed),
        Command::BenchCase {
            family,
            ell,
            top,
            out_dir,
        } => {
            let case = bench::run_one(*family, *ell, *top, cli.seed, out_dir.as_deref())?;
            println!("{}", serde_json::to_string(&case)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::NotPa(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
