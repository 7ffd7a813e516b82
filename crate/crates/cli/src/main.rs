mod bundle;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use extoric::decode::DecoderConfig;
use extoric::expand::BinaryExpandedPair;
use extoric::io::{write_binary_alist, write_qary_alist};
use extoric::lift::lift_pair;
use extoric::sim::{run_sweep_on, SimConfig};
use extoric::toric::{brute_force_distance, build_skeleton, ExtendedToricCode, Side};
use extoric::verify::verify_pair;
use extoric::Error;

use bundle::{read_skeleton, skeleton_text, Bundle, ConstructionKind};

const EXIT_IO: u8 = 3;
const EXIT_INVARIANT: u8 = 4;
const EXIT_BUDGET: u8 = 5;
const EXIT_PARAM: u8 = 6;

const EXIT_CODES: &str = "\
Exit codes:
  0  success
  2  usage error
  3  file could not be read, written or parsed
  4  a code invariant is violated
  5  distance enumeration budget exceeded
  6  parameter out of range";

#[derive(Parser)]
#[command(name = "extoric", version, about = "Extended toric codes over GF(2^m)", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the binary toric pair of size n as two stacked alist blocks.
    Skeleton {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Lift a skeleton to GF(2^m) and write a bundle directory.
    Build {
        /// Toric size; mutually exclusive with --skeleton.
        #[arg(long, conflicts_with = "skeleton", required_unless_present = "skeleton")]
        n: Option<usize>,
        /// Binary pair file (H_X block then H_Z block).
        #[arg(long)]
        skeleton: Option<PathBuf>,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every invariant check on a bundle.
    Verify {
        bundle: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Ranks and dimensions of a bundle.
    Dimension { bundle: PathBuf },
    /// Minimum distance of one side by full enumeration.
    Distance {
        bundle: PathBuf,
        #[arg(long, default_value_t = Side::X)]
        side: Side,
    },
    /// Monte Carlo word and qubit error rates on the depolarizing channel.
    Simulate {
        bundle: PathBuf,
        /// Comma-separated depolarizing probabilities.
        #[arg(long, value_delimiter = ',', required = true)]
        p_grid: Vec<f64>,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        max_iters: usize,
        #[arg(long, default_value_t = 1.0)]
        damping: f64,
        /// CSV path; metadata goes next to it with a .json extension.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the parity-check pair to one file of two stacked alist blocks.
    Export {
        bundle: PathBuf,
        /// Binary expansion over GF(2) instead of the q-ary matrices.
        #[arg(long)]
        binary: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(path: &Path, e: std::io::Error) -> Self {
        Failure { code: EXIT_IO, message: format!("{}: {e}", path.display()) }
    }

    fn parse(message: String) -> Self {
        Failure { code: EXIT_IO, message: format!("parse error: {message}") }
    }

    fn param(message: String) -> Self {
        Failure { code: EXIT_PARAM, message: format!("invalid parameter: {message}") }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_IO,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::InvalidParameter(_) => EXIT_PARAM,
            _ => EXIT_INVARIANT,
        };
        Failure { code, message: e.to_string() }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

fn cmd_build(n: Option<usize>, skeleton: Option<PathBuf>, m: u32, seed: u64, out: &Path) -> Result<(), Failure> {
    let (bundle, pair) = match (n, skeleton) {
        (Some(n), _) => {
            let code = ExtendedToricCode::build(n, m, seed)?;
            (Bundle::from_pair(code.pair(), Some(n), ConstructionKind::ExtendedToric), code.pair().clone())
        }
        (None, Some(path)) => {
            let pair = lift_pair(&read_skeleton(&path)?, m, seed)?;
            (Bundle::from_pair(&pair, None, ConstructionKind::LiftedGeneric), pair)
        }
        (None, None) => unreachable!("clap requires --n or --skeleton"),
    };
    bundle.save(out)?;
    let len = pair.len() * m as usize;
    let k = pair.qubit_dimension();
    let g = gcd(k, len).max(1);
    println!("length {len}");
    println!("dimension {k}");
    println!("rate {}/{}", k / g, len / g);
    Ok(())
}

fn cmd_verify(dir: &Path, json: bool) -> Result<(), Failure> {
    let b = Bundle::load(dir)?;
    let report = verify_pair(&b.hxq, &b.hzq, &b.construction());
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        for c in &report.checks {
            println!("{:<14} {}  {}", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail);
        }
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|c| c.name).collect();
        Err(Failure { code: EXIT_INVARIANT, message: format!("checks failed: {}", names.join(", ")) })
    }
}

fn cmd_dimension(dir: &Path) -> Result<(), Failure> {
    let b = Bundle::load(dir)?;
    let pair = b.pair()?;
    println!("rank H_X {}", pair.hxq().rank());
    println!("rank H_Z {}", pair.hzq().rank());
    println!("q-ary dimension {}", pair.quantum_dimension());
    println!("qubit dimension {}", pair.qubit_dimension());
    Ok(())
}

fn cmd_distance(dir: &Path, side: Side) -> Result<(), Failure> {
    let pair = Bundle::load(dir)?.pair()?;
    let r = brute_force_distance(&pair, side)?;
    println!("{}", r.distance);
    eprintln!("{} minimum-weight logical words on side {side}", r.minimizers.len());
    Ok(())
}

fn cmd_simulate(dir: &Path, cfg: SimConfig, out: &Path) -> Result<(), Failure> {
    let code = Bundle::load(dir)?.toric_code()?;
    let stats = run_sweep_on(&code, &cfg)?;
    write_file(out, &stats.to_csv_string()?)?;
    let sidecar = out.with_extension("json");
    write_file(&sidecar, &(serde_json::to_string_pretty(&stats.meta()).expect("metadata serializes") + "\n"))?;
    for pt in &stats.points {
        let (lo, hi) = pt.wer_interval();
        println!("p={} wer={:.4e} [{lo:.3e}, {hi:.3e}] qer={:.4e}", pt.p, pt.wer(), pt.qer());
    }
    Ok(())
}

fn cmd_export(dir: &Path, binary: bool, out: &Path) -> Result<(), Failure> {
    let pair = Bundle::load(dir)?.pair()?;
    let text = if binary {
        let bin = BinaryExpandedPair::from_pair(&pair);
        bin.check_orthogonal()?;
        write_binary_alist(&bin.hxb)? + &write_binary_alist(&bin.hzb)?
    } else {
        write_qary_alist(pair.hxq()) + &write_qary_alist(pair.hzq())
    };
    write_file(out, &text)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Skeleton { n, out } => {
            let (skeleton, _) = build_skeleton(n)?;
            write_file(&out, &skeleton_text(&skeleton)?)
        }
        Command::Build { n, skeleton, m, seed, out } => cmd_build(n, skeleton, m, seed, &out),
        Command::Verify { bundle, json } => cmd_verify(&bundle, json),
        Command::Dimension { bundle } => cmd_dimension(&bundle),
        Command::Distance { bundle, side } => cmd_distance(&bundle, side),
        Command::Simulate { bundle, p_grid, trials, seed, max_iters, damping, out } => {
            let cfg = SimConfig { p_grid, trials, decoder: DecoderConfig { max_iters, damping }, master_seed: seed };
            cmd_simulate(&bundle, cfg, &out)
        }
        Command::Export { bundle, binary, out } => cmd_export(&bundle, binary, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
