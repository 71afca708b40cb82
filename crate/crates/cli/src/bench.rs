use std::collections::VecDeque;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Stdio};

use anyhow::{bail, Context};
use clap::Args;

use primnorm::bench::{run_case_detailed, BenchCase, Family, TopGroup};
use primnorm::io::group_to_json;

#[derive(Args)]
pub struct BenchArgs {
    /// Repeatable; all three families if omitted.
    #[arg(long = "family")]
    families: Vec<Family>,
    /// A single value like `3` or an inclusive range like `2..4`.
    #[arg(long, default_value = "2..4")]
    ell: String,
    #[arg(long, default_value = "symmetric")]
    top: TopGroup,
    /// Run cases in this many parallel processes.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// CSV instead of a markdown table.
    #[arg(long)]
    csv: bool,
    /// Write each input group and its normalizer as JSON here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => {
            let v = s.trim().parse()?;
            (v, v)
        }
    };
    if lo < 2 || hi < lo {
        bail!("bad ell range {s:?}");
    }
    Ok((lo, hi))
}

pub fn run_one(
    family: Family,
    ell: usize,
    top: TopGroup,
    seed: u64,
    out_dir: Option<&Path>,
) -> anyhow::Result<BenchCase> {
    let (case, group, res) = run_case_detailed(family, ell, top, seed)?;
    if let Some(dir) = out_dir {
        fs::create_dir_all(dir)?;
        let stem = format!("{family}-{top}-l{ell}");
        fs::write(
            dir.join(format!("{stem}.json")),
            serde_json::to_string_pretty(&group_to_json(&group))?,
        )?;
        fs::write(
            dir.join(format!("{stem}-normalizer.json")),
            serde_json::to_string_pretty(&group_to_json(&res.normalizer))?,
        )?;
    }
    Ok(case)
}

fn spawn(family: Family, ell: usize, args: &BenchArgs, seed: u64) -> anyhow::Result<Child> {
    let mut cmd = Command::new(std::env::current_exe()?);
    cmd.args(["--seed", &seed.to_string(), "bench-case"]).args([
        "--family",
        &family.to_string(),
        "--ell",
        &ell.to_string(),
        "--top",
        &args.top.to_string(),
    ]);
    if let Some(dir) = &args.out_dir {
        cmd.arg("--out-dir").arg(dir);
    }
    Ok(cmd.stdout(Stdio::piped()).spawn()?)
}

fn collect(child: Child) -> anyhow::Result<BenchCase> {
    let out = child.wait_with_output()?;
    if !out.status.success() {
        bail!("bench case failed with {}", out.status);
    }
    serde_json::from_slice(&out.stdout).context("reading bench case output")
}

pub fn cmd_bench(args: &BenchArgs, seed: u64) -> anyhow::Result<()> {
    let (lo, hi) = parse_range(&args.ell)?;
    let families = if args.families.is_empty() {
        Family::ALL.to_vec()
    } else {
        args.families.clone()
    };
    let plan: Vec<(Family, usize)> = families
        .iter()
        .flat_map(|&f| (lo..=hi).map(move |l| (f, l)))
        .collect();

    let mut cases = Vec::with_capacity(plan.len());
    if args.jobs <= 1 {
        for &(family, ell) in &plan {
            cases.push(run_one(
                family,
                ell,
                args.top,
                seed,
                args.out_dir.as_deref(),
            )?);
        }
    } else {
        let mut running = VecDeque::new();
        for &(family, ell) in &plan {
            if running.len() == args.jobs {
                cases.push(collect(running.pop_front().expect("non-empty"))?);
            }
            running.push_back(spawn(family, ell, args, seed)?);
        }
        for child in running {
            cases.push(collect(child)?);
        }
    }

    let stdout = std::io::stdout();
    if args.csv {
        write_csv(&cases, stdout.lock())
    } else {
        write_markdown(&cases, &mut stdout.lock())
    }
}

const PHASES: [&str; 6] = [
    "socle",
    "decomposition",
    "m_construction",
    "reduction",
    "backtrack",
    "preimage",
];

fn phase_values(c: &BenchCase) -> [f64; 7] {
    let t = &c.timings_ms;
    [
        t.socle,
        t.decomposition,
        t.m_construction,
        t.reduction,
        t.backtrack,
        t.preimage,
        t.total(),
    ]
}

fn write_csv(cases: &[BenchCase], out: impl Write) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["family".to_owned(), "ell".into(), "degree".into()];
    header.extend(PHASES.iter().map(|p| format!("{p}_ms")));
    header.extend(["total_ms".into(), "order".into()]);
    w.write_record(&header)?;
    for c in cases {
        let mut row = vec![
            c.family.to_string(),
            c.ell.to_string(),
            c.degree.to_string(),
        ];
        row.extend(phase_values(c).iter().map(|v| format!("{v:.3}")));
        row.push(c.order.clone());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_markdown(cases: &[BenchCase], out: &mut impl Write) -> anyhow::Result<()> {
    write!(out, "| socle type | degree |")?;
    for p in PHASES {
        write!(out, " {p} (ms) |")?;
    }
    writeln!(out, " total (ms) | order |")?;
    writeln!(out, "|---|---:|{}---:|---:|", "---:|".repeat(PHASES.len()))?;
    for c in cases {
        let label = format!("{}^{}", c.family.label(), c.ell);
        write!(out, "| {label} | {} |", c.degree)?;
        for v in phase_values(c) {
            write!(out, " {v:.1} |")?;
        }
        writeln!(out, " {} |", c.order)?;
    }
    Ok(())
}
