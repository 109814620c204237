//! Batch command-line surface: classify, search, verify, wp, oracle.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config error.

mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use config::{resolve, JobConfig};
use output::*;
use xrel_core::{
    classify_with_policy, derive_caseb_constant, find_solutions_with, identity_residual,
    lemma2_scan, verify_family_symbolic, LatticeData, QuadNum, SearchOptions,
};

#[derive(Parser)]
#[command(
    name = "xrel",
    about = "Classify and search linear x-coordinate relations on elliptic curve triples",
    version
)]
struct Cli {
    /// TOML job config; flags override individual fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Curve coefficients "a2,a4,a6" (exact text)
    #[arg(long, global = true, value_parser = parse_triple)]
    curve: Option<[String; 3]>,
    /// Relation coefficients "c1,c2,c3" (exact text)
    #[arg(long, global = true, value_parser = parse_triple)]
    coeffs: Option<[String; 3]>,
    /// Working field discriminant (1 = rationals)
    #[arg(short, long, global = true, allow_negative_numbers = true)]
    disc: Option<i64>,
    /// Coefficient box radius for enumeration
    #[arg(long, global = true)]
    box_n: Option<u32>,
    /// Enumeration cap (memory guard)
    #[arg(long, global = true)]
    max_box: Option<u32>,
    /// Floating precision in bits (>= 53; evaluation saturates at doubles)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Worker threads for the search loop
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Endomorphism policy: auto | none | d=<disc>
    #[arg(long, global = true)]
    cm: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the families inside the relation surface, as JSON
    Classify,
    /// Enumerate the subgroup box and emit solution records as JSON lines
    Search(SearchArgs),
    /// Re-verify every classified family symbolically and numerically
    Verify(VerifyArgs),
    /// Evaluate the Weierstrass functions for the curve's lattice
    Wp(WpArgs),
    /// Brute-force verifiers
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Echo the resolved configuration as canonical TOML
    Config,
}

#[derive(Args)]
struct SearchArgs {
    /// Also run at the doubled box and report both counts
    #[arg(long)]
    stabilize: bool,
    /// Write the summary as CSV to this path
    #[arg(long)]
    summary_csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Samples per family for the numeric residual
    #[arg(long, default_value_t = 50)]
    samples: usize,
    /// Residual tolerance
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
}

#[derive(Args)]
struct WpArgs {
    /// Evaluation point as "re,im"
    #[arg(long)]
    z: Option<String>,
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Exhaustive covering-property scan over small abelian groups
    Lemma2 {
        #[arg(long, default_value_t = 64)]
        max_order: u64,
    },
    /// Solve the case-(b) identity for its constant term
    CasebConstant {
        /// Constant slot (1-3)
        #[arg(long)]
        const_slot: u8,
        /// Unit multiplier as exact text, e.g. "1*sqrt(-1)"
        #[arg(long)]
        unit: String,
    },
}

fn parse_triple(s: &str) -> Result<[String; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated values, got `{s}`"));
    }
    Ok([parts[0].into(), parts[1].into(), parts[2].into()])
}

fn cli_overrides(cli: &Cli) -> JobConfig {
    JobConfig {
        d: cli.disc,
        curve: cli.curve.clone(),
        coeffs: cli.coeffs.clone(),
        box_n: cli.box_n,
        max_box: cli.max_box,
        precision: cli.precision,
        threads: cli.threads,
        cm: cli.cm.clone(),
        subgroup: None,
    }
}

fn main() -> ExitCode {
    // die quietly when the consumer closes the pipe (e.g. `xrel ... | head`)
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<ExitCode> {
    let base = match &cli.config {
        Some(path) => JobConfig::load(path)?,
        None => JobConfig::default(),
    };
    let merged = base.merged_with(cli_overrides(cli));

    match &cli.command {
        Command::Config => {
            print!("{}", merged.canonical_toml()?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle(OracleCommand::Lemma2 { max_order }) => {
            let report = lemma2_scan(*max_order)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(if report.counterexamples == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Oracle(OracleCommand::CasebConstant { const_slot, unit }) => {
            let job = resolve(&merged)?;
            if !(1..=3).contains(const_slot) {
                anyhow::bail!("const_slot must be 1, 2 or 3");
            }
            let unit: QuadNum = unit.parse().map_err(|e| anyhow::anyhow!("{e}"))?;
            let x_r = derive_caseb_constant(&job.curve, &job.coeffs, *const_slot, &unit)?;
            let verified = xrel_core::verify_caseb_with_x(
                &job.curve,
                &job.coeffs,
                *const_slot,
                &unit,
                &x_r,
            )?;
            let report = CasebConstantReport {
                const_slot: *const_slot,
                unit: unit.to_string(),
                x_r: x_r.to_string(),
                verified,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Classify => {
            let job = resolve(&merged)?;
            let list = classify_with_policy(&job.curve, &job.coeffs, job.cm_policy)?;
            let report = ClassifyReport::new(&job.curve, job.coeffs.as_array(), &list);
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => run_verify(&merged, args),
        Command::Search(args) => run_search(&merged, args),
        Command::Wp(args) => run_wp(&merged, args),
    }
}

fn run_verify(merged: &JobConfig, args: &VerifyArgs) -> anyhow::Result<ExitCode> {
    let job = resolve(merged)?;
    let list = classify_with_policy(&job.curve, &job.coeffs, job.cm_policy)?;
    let mut results = Vec::new();
    let mut all_passed = true;
    for (id, family) in list.families.iter().enumerate() {
        let symbolic = verify_family_symbolic(&job.curve, &job.coeffs, family)?;
        let residual = identity_residual(&job.curve, job.coeffs.as_array(), family, args.samples)?;
        let numeric_ok = residual < args.tolerance;
        all_passed &= symbolic && numeric_ok;
        results.push(VerifyEntry {
            id,
            label: family.label(),
            symbolic,
            residual,
            numeric_ok,
        });
    }
    let report = VerifyReport {
        curve: CurveInfo::new(&job.curve),
        coeffs: coeff_strings(job.coeffs.as_array()),
        results,
        all_passed,
    };
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn run_search(merged: &JobConfig, args: &SearchArgs) -> anyhow::Result<ExitCode> {
    let job = resolve(merged)?;
    let spec = job
        .subgroup
        .as_ref()
        .context("search needs a [subgroup] section")?;
    let report = find_solutions_with(
        &job.curve,
        &job.coeffs,
        spec,
        job.box_n,
        SearchOptions {
            threads: job.threads,
            max_box: job.max_box,
            stabilize: args.stabilize,
            cm_policy: job.cm_policy,
        },
    )?;
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for record in &report.solutions {
        writeln!(out, "{}", serde_json::to_string(record)?)?;
    }
    writeln!(
        out,
        "{}",
        serde_json::to_string(&serde_json::json!({ "summary": report.summary }))?
    )?;
    if let Some(path) = &args.summary_csv {
        write_summary_csv(path, &report.summary)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn write_summary_csv(
    path: &std::path::Path,
    summary: &xrel_core::SearchSummary,
) -> anyhow::Result<()> {
    let mut text = String::from("box_n,elements,duplicates,total,trivial,sporadic\n");
    let mut push_row = |s: &xrel_core::SearchSummary| {
        text.push_str(&format!(
            "{},{},{},{},{},{}\n",
            s.box_n, s.elements, s.duplicates, s.total, s.trivial, s.sporadic
        ));
    };
    push_row(summary);
    if let Some(stab) = &summary.stabilization {
        push_row(stab);
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run_wp(merged: &JobConfig, args: &WpArgs) -> anyhow::Result<ExitCode> {
    let curve = config::resolve_curve(merged)?;
    let precision = merged.precision.unwrap_or(53);
    let lattice = LatticeData::from_curve(&curve, precision)?;
    let mut report = WpReport {
        omega1: fmt_complex(lattice.omega1),
        omega2: fmt_complex(lattice.omega2),
        tau: fmt_complex(lattice.tau()),
        g2: fmt_complex(lattice.g2),
        g3: fmt_complex(lattice.g3),
        z: None,
        wp: None,
        wp_prime: None,
    };
    if let Some(ztext) = &args.z {
        let z = parse_complex(ztext)?;
        let (p, dp) = lattice.wp(z)?;
        report.z = Some(fmt_complex(z));
        report.wp = Some(fmt_complex(p));
        report.wp_prime = Some(fmt_complex(dp));
    }
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(ExitCode::SUCCESS)
}

fn parse_complex(s: &str) -> anyhow::Result<Complex64> {
    let (re, im) = s
        .split_once(',')
        .with_context(|| format!("complex values are \"re,im\", got `{s}`"))?;
    Ok(Complex64::new(
        re.trim().parse::<f64>().context("real part")?,
        im.trim().parse::<f64>().context("imaginary part")?,
    ))
}
