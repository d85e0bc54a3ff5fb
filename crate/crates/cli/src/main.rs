use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qdiode_core::experiments::acceptance;
use qdiode_core::experiments::figures::{self, Fig3};
use qdiode_core::experiments::{config, StyleChoice, SweepConfig, Table};
use qdiode_core::parallel::{self, Execution};
use qdiode_core::Error;

/// Steady-state heat currents through coupled spins between two thermal baths.
#[derive(Debug, Parser)]
#[command(name = "qdiode", version)]
struct Cli {
    /// Bath coupling strength κ
    #[arg(long, global = true)]
    kappa: Option<f64>,

    /// Output directory for CSV files
    #[arg(long, global = true, default_value = "./out/")]
    out: PathBuf,

    /// Dissipator style: global, local or both
    #[arg(long, global = true)]
    style: Option<StyleChoice>,

    /// Worker threads (default: one per processor)
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Run sweeps on the calling thread only
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ising pair: current versus left-bath temperature
    Fig2,
    /// Ising pair: current versus coupling, both bias directions, plus gradient inset
    Fig3,
    /// Open XY chain: global versus local current versus left-bath temperature
    XyCompare {
        #[arg(long, default_value_t = 4)]
        spins: usize,
    },
    /// Run every acceptance criterion and report pass/fail
    Acceptance,
    /// Sweep described by a key-value config file
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
}

enum Failure {
    Criteria(usize),
    BadConfig(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::InvalidSpec(_) => Failure::BadConfig(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let jobs = cli.jobs;
    match parallel::with_jobs(jobs, || run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Criteria(n)) => {
            eprintln!("{n} acceptance criteria failed");
            ExitCode::from(1)
        }
        Err(Failure::BadConfig(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.jobs == Some(0) {
        return Err(Failure::BadConfig("--jobs must be at least 1".into()));
    }
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let kappa = cli.kappa.unwrap_or(1.0);
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Failure::BadConfig(format!("--kappa must be positive, got {kappa}")));
    }
    match &cli.command {
        Command::Fig2 => {
            let table = figures::run_fig2(kappa, exec)?;
            let path = cli.out.join("fig2.csv");
            table.write(&path)?;
            summarize_fig2(&table, kappa);
            println!("wrote {}", path.display());
        }
        Command::Fig3 => {
            let fig = figures::run_fig3(kappa, exec)?;
            figures::write_fig3(&fig, &cli.out)?;
            summarize_fig3(&fig);
            println!("wrote fig3a.csv, fig3b.csv, fig3_inset.csv to {}", cli.out.display());
        }
        Command::XyCompare { spins } => {
            let style = cli.style.unwrap_or(StyleChoice::Both);
            let table = figures::run_xy_comparison(*spins, kappa, style, exec)?;
            let path = cli.out.join("xy_compare.csv");
            table.write(&path)?;
            summarize_xy(&table);
            println!("wrote {}", path.display());
        }
        Command::Acceptance => {
            let outcomes = acceptance::run_all(exec);
            for o in &outcomes {
                println!("{}", o.line());
            }
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            println!("acceptance: {} criteria, {failed} failed", outcomes.len());
            if failed > 0 {
                return Err(Failure::Criteria(failed));
            }
        }
        Command::Sweep { config } => {
            let text = fs::read_to_string(config)
                .map_err(|e| Failure::BadConfig(format!("cannot read {}: {e}", config.display())))?;
            let mut cfg = SweepConfig::parse(&text)?;
            if let Some(k) = cli.kappa {
                cfg.kappa = k;
            }
            if let Some(s) = cli.style {
                cfg.style = s;
            }
            let path = sweep_path(&cfg, &cli.out, config);
            let table = config::run_sweep(&cfg, exec)?;
            table.write(&path)?;
            println!("{} points, columns {}", table.rows.len(), table.columns.join(","));
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

// Relative output paths in a config file resolve against the file's directory.
fn sweep_path(cfg: &SweepConfig, out: &Path, config: &Path) -> PathBuf {
    match &cfg.output_path {
        Some(p) if p.is_absolute() => p.clone(),
        Some(p) => config.parent().unwrap_or(Path::new(".")).join(p),
        None => out.join("sweep.csv"),
    }
}

fn column(table: &Table, name: &str) -> Vec<f64> {
    table.column(name).unwrap_or_default()
}

fn summarize_fig2(table: &Table, kappa: f64) {
    for &d in &figures::FIG2_DELTAS {
        let name = table.columns.iter().find(|c| c.starts_with("J_global") && c.ends_with(&format!("_{d}")));
        if let Some(j) = name.map(|n| column(table, n)).and_then(|j| j.last().copied()) {
            let sat = kappa * d * d / 2.0;
            println!("delta={d:<5} J(T_L=100) = {j:.6e}  kappa*delta^2/2 = {sat:.6e}  ratio {:.4}", j / sat);
        }
    }
    let local = table
        .columns
        .iter()
        .find(|c| c.starts_with("J_local"))
        .map(|n| column(table, n))
        .unwrap_or_default();
    let worst = local.iter().fold(0.0f64, |m, j| m.max(j.abs()));
    println!("local dissipator: max |J| = {worst:.3e}");
}

fn summarize_fig3(fig: &Fig3) {
    let forward = column(&fig.panel_a, &fig.panel_a.columns[1]);
    let reverse = column(&fig.panel_b, &fig.panel_b.columns[1]);
    let fwd_max = forward.iter().fold(0.0f64, |m, j| m.max(*j));
    let rev_max = reverse.iter().fold(0.0f64, |m, j| m.max(j.abs()));
    println!("forward ({}): max J = {fwd_max:.6e}", fig.panel_a.columns[1]);
    println!("reverse ({}): max |J| = {rev_max:.3e}", fig.panel_b.columns[1]);
    for name in &fig.panel_b.columns[2..] {
        let j = column(&fig.panel_b, name);
        println!("reverse ({name}): max |J| = {:.3e}", j.iter().fold(0.0f64, |m, j| m.max(j.abs())));
    }
    println!("inset: {} points", fig.inset.rows.len());
}

fn summarize_xy(table: &Table) {
    let t = column(table, "T_L");
    for name in &table.columns[1..] {
        let j = column(table, name);
        let (k_max, j_max) = j
            .iter()
            .enumerate()
            .fold((0, f64::MIN), |best, (k, &v)| if v > best.1 { (k, v) } else { best });
        let last = j.last().copied().unwrap_or(0.0);
        println!("{name}: max {j_max:.6e} at T_L={:.4}, J(T_L={}) = {last:.6e}", t[k_max], t[t.len() - 1]);
    }
}
