//! `dlm`: exact loop densities of the O(1) dense loop model on a cylinder.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dlm_core::closed_form::{expansion_residual, nu_c_asymptotic, nu_c_exact, nu_nc_asymptotic, nu_nc_exact, Quantity};
use dlm_core::mc::{self, MCConfig, MCStats};
use dlm_core::oracle::{double_row_matrix, oracle_densities, MAX_ORACLE_L};
use dlm_core::tq::{fsz_suite, kummer_suite, verify_suite, ReportRow};
use dlm_core::{DensityRecord, Error, Method};

#[derive(Parser)]
#[command(name = "dlm", version, about = "Loop densities of the O(1) dense loop model on a cylinder")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "DLM_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact densities for one circumference or an even range.
    Density {
        #[arg(long, conflicts_with = "l_range", required_unless_present = "l_range")]
        l: Option<u32>,
        /// Inclusive range a:b; odd values inside are skipped.
        #[arg(long)]
        l_range: Option<LRange>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Exact identity checks for N = 1…n_max.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Transfer-matrix densities compared with the closed forms.
    Oracle {
        #[arg(long)]
        l: u32,
        /// Write the transfer matrix as JSON to this file.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Monte Carlo estimate on an L × H torus.
    Simulate {
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 200_000)]
        height: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 16)]
        replicas: usize,
    },
    /// Exact values against the truncated large-L expansion, as CSV.
    Asymptote {
        #[arg(long, default_value = "2:200")]
        l_range: LRange,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=2))]
        order: u32,
        #[arg(long, value_enum, default_value_t = Density::Contractible)]
        quantity: Density,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Fsz,
    Tq,
    Kummer,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Density {
    #[value(name = "c")]
    Contractible,
    #[value(name = "nc")]
    NonContractible,
}

#[derive(Clone, Copy, Debug)]
struct LRange {
    from: u32,
    to: u32,
}

impl FromStr for LRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or("expected a:b")?;
        let from: u32 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
        let to: u32 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
        if from == 0 || from > to {
            return Err(format!("empty or invalid range {from}:{to}"));
        }
        Ok(LRange { from, to })
    }
}

impl LRange {
    fn even(self) -> Vec<u32> {
        (self.from..=self.to).filter(|l| l % 2 == 0).collect()
    }
}

/// Outcome of a command, mapped onto the exit-code contract.
enum Failure {
    Usage(String),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(msg) => Failure::Usage(msg),
            other => Failure::Check(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn check_even(l: u32) -> CmdResult {
    if l < 2 || l % 2 == 1 {
        return Err(Failure::Usage(format!(
            "L = {l}: the circumference must be an even number of sites (L = 2N, N ≥ 1)"
        )));
    }
    Ok(())
}

fn closed_record(l: u32) -> DensityRecord {
    let n = l / 2;
    DensityRecord::new(n, nu_c_exact(n), nu_nc_exact(n), Method::ClosedForm)
}

fn cmd_density(l: Option<u32>, range: Option<LRange>, format: Format, mode: Mode) -> CmdResult {
    let sizes = match (l, range) {
        (Some(l), _) => {
            check_even(l)?;
            vec![l]
        }
        (None, Some(r)) => r.even(),
        (None, None) => unreachable!("clap requires one of --l, --l-range"),
    };
    if sizes.is_empty() {
        return Err(Failure::Usage("range contains no even circumference".into()));
    }
    let records: Vec<DensityRecord> = sizes.into_iter().map(closed_record).collect();
    let mut out = String::new();
    match format {
        Format::Text => {
            for r in &records {
                match mode {
                    Mode::Exact => writeln!(out, "L={}: {} {}", r.l, r.nu_c, r.nu_nc),
                    Mode::Float => writeln!(out, "L={}: {} {}", r.l, r.nu_c_float, r.nu_nc_float),
                }
                .unwrap();
            }
        }
        Format::Csv => {
            out.push_str("L,nu_c_num,nu_c_den,nu_nc_num,nu_nc_den,nu_c_float,nu_nc_float\n");
            for r in &records {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.l,
                    r.nu_c.numer(),
                    r.nu_c.denom(),
                    r.nu_nc.numer(),
                    r.nu_nc.denom(),
                    r.nu_c_float,
                    r.nu_nc_float
                )
                .unwrap();
            }
        }
        Format::Json => match mode {
            Mode::Exact => out = json(&records) + "\n",
            Mode::Float => {
                #[derive(Serialize)]
                struct FloatRow<'a> {
                    l: u32,
                    nu_c: &'a str,
                    nu_nc: &'a str,
                }
                let rows: Vec<FloatRow> =
                    records.iter().map(|r| FloatRow { l: r.l, nu_c: &r.nu_c_float, nu_nc: &r.nu_nc_float }).collect();
                out = json(&rows) + "\n";
            }
        },
    }
    print!("{out}");
    Ok(())
}

fn cmd_verify(suite: Suite, n_max: u32, format: ReportFormat) -> CmdResult {
    let rows: Vec<ReportRow> = match suite {
        Suite::Fsz => fsz_suite(n_max),
        Suite::Tq => verify_suite(n_max),
        Suite::Kummer => kummer_suite(n_max),
        Suite::All => {
            let mut rows = fsz_suite(n_max);
            rows.extend(verify_suite(n_max));
            rows.extend(kummer_suite(n_max));
            rows
        }
    };
    match format {
        ReportFormat::Json => println!("{}", json(&rows)),
        ReportFormat::Text => {
            println!("{:<20} {:>4}  status", "identity", "N");
            for r in &rows {
                println!("{:<20} {:>4}  {}", r.identity, r.n, r.check);
            }
        }
    }
    match rows.iter().find(|r| !r.check.passed()) {
        None => Ok(()),
        Some(r) => Err(Failure::Check(format!("identity {} failed at N = {}: {}", r.identity, r.n, r.check))),
    }
}

fn cmd_oracle(l: u32, dump: Option<PathBuf>) -> CmdResult {
    check_even(l)?;
    if l as usize > MAX_ORACLE_L {
        return Err(Failure::Usage(format!("L = {l}: the exact oracle is limited to L ≤ {MAX_ORACLE_L}")));
    }
    let oracle = oracle_densities(l as usize)?;
    let closed = closed_record(l);
    if let Some(path) = dump {
        let tm = double_row_matrix(l as usize)?;
        fs::write(&path, tm.to_json()).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    }
    println!("L={l}");
    println!("oracle      nu_c = {:<24} nu_nc = {}", oracle.nu_c.to_string(), oracle.nu_nc);
    println!("closed form nu_c = {:<24} nu_nc = {}", closed.nu_c.to_string(), closed.nu_nc);
    if oracle.nu_c == closed.nu_c && oracle.nu_nc == closed.nu_nc {
        println!("EXACT-MATCH");
        Ok(())
    } else {
        println!("MISMATCH");
        Err(Failure::Check(format!(
            "oracle {} {} differs from closed form {} {}",
            oracle.nu_c, oracle.nu_nc, closed.nu_c, closed.nu_nc
        )))
    }
}

/// |z| bound for `simulate` to report success.
const Z_GATE: f64 = 4.0;

#[derive(Serialize)]
struct SimulateReport {
    #[serde(flatten)]
    stats: MCStats,
    exact_nu_c: String,
    exact_nu_nc: String,
    target_nu_c: f64,
    target_nu_nc: f64,
    z_nu_c: f64,
    z_nu_nc: f64,
    pass: bool,
}

fn cmd_simulate(l: usize, height: usize, seed: u64, replicas: usize) -> CmdResult {
    let cfg = MCConfig::new(l, height, seed, replicas);
    cfg.validate()?;
    let stats = mc::run(&cfg)?;
    let n = (l / 2) as u32;
    let (c, nc) = (nu_c_exact(n), nu_nc_exact(n));
    let (z_nu_c, z_nu_nc) = stats.z_scores(c.to_f64(), nc.to_f64());
    let pass = z_nu_c.abs() < Z_GATE && z_nu_nc.abs() < Z_GATE;
    let report = SimulateReport {
        stats,
        target_nu_c: c.to_f64(),
        target_nu_nc: nc.to_f64(),
        exact_nu_c: c.to_string(),
        exact_nu_nc: nc.to_string(),
        z_nu_c,
        z_nu_nc,
        pass,
    };
    println!("{}", json(&report));
    if pass {
        Ok(())
    } else {
        Err(Failure::Check(format!("z-scores {z_nu_c:.2}, {z_nu_nc:.2} exceed {Z_GATE}")))
    }
}

fn cmd_asymptote(range: LRange, order: u32, quantity: Density) -> CmdResult {
    let sizes = range.even();
    if sizes.is_empty() {
        return Err(Failure::Usage("range contains no even circumference".into()));
    }
    let mut out = String::from("L,exact,series,residual,scaled\n");
    for l in sizes {
        let n = l / 2;
        let lf = l as f64;
        // ν_nc's series starts one power of L^{−2} later
        let (exact, series, which, power) = match quantity {
            Density::Contractible => {
                (nu_c_exact(n).to_f64(), nu_c_asymptotic(n, order), Quantity::Contractible, 2 * (order + 1))
            }
            Density::NonContractible => {
                (nu_nc_exact(n).to_f64(), nu_nc_asymptotic(n, order), Quantity::NonContractible, 2 * (order + 2))
            }
        };
        let residual = expansion_residual(which, n, order as usize + 1);
        let scaled = residual * lf.powi(power as i32);
        writeln!(out, "{l},{exact:e},{series:e},{residual:e},{scaled:e}").unwrap();
    }
    print!("{out}");
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("dlm: cannot configure {threads} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Density { l, l_range, format, mode } => cmd_density(l, l_range, format, mode),
        Command::Verify { suite, n_max, format } => cmd_verify(suite, n_max, format),
        Command::Oracle { l, dump } => cmd_oracle(l, dump),
        Command::Simulate { l, height, seed, replicas } => cmd_simulate(l, height, seed, replicas),
        Command::Asymptote { l_range, order, quantity } => cmd_asymptote(l_range, order, quantity),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("dlm: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("dlm: {msg}");
            ExitCode::from(2)
        }
    }
}
