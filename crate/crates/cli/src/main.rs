use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod cmd;

/// Bounded-round union-size estimation over set oracles, and lattice-point
/// tools for balls.
#[derive(Parser, Debug)]
#[command(name = "unionscope", disable_version_flag = true)]
struct Cli {
    /// Print the output schema version and exit.
    #[arg(short = 'V', long)]
    version: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every derived constant for (m, epsilon, gamma, c1, z_min, z_max).
    Schedule(ScheduleArgs),
    /// Estimate the size of the union of an instance's sets.
    Estimate(EstimateArgs),
    /// Estimate the number of lattice points in a union of balls.
    BallUnion(EstimateArgs),
    /// Count lattice points in a ball with a structured center.
    CountBall(CountArgs),
    /// Draw lattice points from a ball.
    SampleBall(SampleArgs),
    /// Greedy maximum coverage driven by union estimates.
    Coverage(CoverageArgs),
    /// Brute-force reference answers, as JSON lines.
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Sweep (m, epsilon, c1) on synthetic instances and write CSV.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
pub struct ScheduleArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c1: f64,
    /// Lower thickness bound; defaults to 1.
    #[arg(long)]
    pub z_min: Option<f64>,
    /// Upper thickness bound; defaults to m.
    #[arg(long)]
    pub z_max: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ScaleArgs {
    /// Multiplier on h1 (values below 1 void the guarantee).
    #[arg(long, default_value_t = 1.0)]
    pub sample_scale: f64,
    /// Multiplier on f6 (values below 1 void the guarantee).
    #[arg(long, default_value_t = 1.0)]
    pub index_scale: f64,
    /// Scale h1 down to about this many initial samples. Overrides the scale flags.
    #[arg(long, requires = "target_f6")]
    pub target_h1: Option<f64>,
    /// Scale f6 down to about this value. Overrides the scale flags.
    #[arg(long, requires = "target_h1")]
    pub target_f6: Option<f64>,
    /// Refuse any round with more logical queries than this.
    #[arg(long, default_value_t = unionscope::rounds::DEFAULT_QUERY_CAP)]
    pub query_cap: u64,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long)]
    pub instance: std::path::PathBuf,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.0)]
    pub c1: f64,
    /// Root seed; defaults to the instance's seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sampler bias target for ball sets.
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    /// Size approximation target for ball sets.
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    /// Independent trials, run concurrently and reported in trial order.
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Write one JSON line per round to this file.
    #[arg(long)]
    pub transcript: Option<std::path::PathBuf>,
    /// Also compute the exact union by brute force.
    #[arg(long)]
    pub check: bool,
    #[command(flatten)]
    pub scale: ScaleArgs,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(long)]
    pub dim: usize,
    /// Radius as an exact decimal or fraction.
    #[arg(long)]
    pub radius: String,
    #[arg(long, default_value = "0")]
    pub lambda: String,
    #[arg(long, default_value_t = 0)]
    pub l: u64,
    /// Comma-separated `i+jL` coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub center: String,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub dim: usize,
    #[arg(long)]
    pub radius: String,
    #[arg(long, default_value = "0")]
    pub lambda: String,
    #[arg(long, default_value_t = 0)]
    pub l: u64,
    /// Structured center (`i+jL,...`); sampled exactly unless `--alpha` is given.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "free_center")]
    pub center: Option<String>,
    /// Arbitrary real center (`x,y,...`); sampled by rejection, needs `--alpha`.
    #[arg(long, allow_hyphen_values = true)]
    pub free_center: Option<String>,
    /// Bias target; selects the biased sampler.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 10)]
    pub n: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct CoverageArgs {
    #[arg(long)]
    pub instance: std::path::PathBuf,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0.25)]
    pub xi: f64,
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 0.2)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    #[command(flatten)]
    pub scale: ScaleArgs,
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Exact union size of an instance.
    Union {
        #[arg(long)]
        instance: std::path::PathBuf,
    },
    /// Every lattice point of a ball with a real center.
    Enumerate {
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long)]
        radius: String,
    },
    /// Optimal and exact-greedy coverage of an explicit instance.
    Coverage {
        #[arg(long)]
        instance: std::path::PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Write a synthetic explicit instance.
    Generate {
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1000)]
        universe: usize,
        #[arg(long, default_value_t = 200)]
        max_set: usize,
        #[arg(long)]
        clustered: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Comma-separated list of m.
    #[arg(long, default_value = "4,16,64")]
    pub m: String,
    #[arg(long, default_value = "0.25")]
    pub epsilon: String,
    #[arg(long, default_value = "0")]
    pub c1: String,
    #[arg(long, default_value_t = 0.1)]
    pub gamma: f64,
    #[arg(long, default_value_t = 3)]
    pub trials: u64,
    #[arg(long, default_value_t = 2000)]
    pub universe: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub scale: ScaleArgs,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.version {
        println!("{}", unionscope::SCHEMA_VERSION);
        return ExitCode::SUCCESS;
    }
    let Some(command) = cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(1);
    };
    let result = match command {
        Command::Schedule(a) => cmd::schedule(a),
        Command::Estimate(a) => cmd::estimate(a, false),
        Command::BallUnion(a) => cmd::estimate(a, true),
        Command::CountBall(a) => cmd::count_ball(a),
        Command::SampleBall(a) => cmd::sample_ball(a),
        Command::Coverage(a) => cmd::coverage(a),
        Command::Oracle(o) => cmd::oracle(o),
        Command::Bench(a) => cmd::bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let unionscope::Error::CapExceeded { .. } = e {
                eprintln!("hint: full-scale sample counts are astronomically large; try --target-h1 4000 --target-f6 1000");
            }
            match e {
                unionscope::Error::Internal(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
