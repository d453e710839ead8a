use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use ise_lab::companion::{rescaled_chain, run_stuck, Freeze, TripleState};
use ise_lab::diffusion::{
    compare_chain_to_diffusion, integrate, ComparisonConfig, IntegratorConfig,
};
use ise_lab::profile_law::{count_profile, profile_distribution};
use ise_lab::rng::{rng_for, streams};
use ise_lab::series::{
    increment_moment, moment_exact, small_gap_check, solve_algebraic, Substitution,
};
use ise_lab::tree::{stream_profile, RealTriple, RescaledTriple, Scaling, VerticalProfile};
use ise_lab::verify::{run_suites, Level, Suite};
use ise_lab::Error;

#[derive(Parser)]
#[command(
    name = "ise-lab",
    version,
    about = "Profiles of random binary trees and their companion processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a uniform tree and write its profile triple as CSV
    SampleProfile {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Write the rescaled triple instead of the integer one
        #[arg(long)]
        rescale: bool,
        #[arg(long, value_enum, default_value_t = ScalingArg::QuarterPower)]
        scaling: ScalingArg,
    },
    /// Run verification suites
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
        /// JSON summary
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the companion chain with sticking
    Companion {
        /// Rescale with this n; without it the start and level are integers
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta0: f64,
        #[arg(long, default_value_t = 1.0)]
        m0: f64,
        #[arg(long, default_value_t = 0.0)]
        s0: f64,
        /// Rescaled sticking level
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        horizon: f64,
        /// Integer sticking level, without --n
        #[arg(long, default_value_t = 1)]
        level: i64,
        /// Number of steps, without --n
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = FreezeArg::AtCrossing)]
        freeze: FreezeArg,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate the diffusion, or compare it with the rescaled chain
    Sde {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        delta0: f64,
        #[arg(long, default_value_t = 1.0)]
        m0: f64,
        #[arg(long, default_value_t = 0.0)]
        s0: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long = "T", default_value_t = 1.0)]
        horizon: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Compare the chain at these n (comma separated) with Euler–Maruyama samples
        #[arg(long, value_delimiter = ',')]
        compare: Vec<u64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = FreezeArg::AtCrossing)]
        freeze: FreezeArg,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Number of binary trees with a given profile
    Count {
        /// `ℓ:r:m_ℓ,…,m_r` or `(m_ℓ,…;m_0,…,m_r)`
        #[arg(long, allow_hyphen_values = true)]
        profile: String,
    },
    /// Exact law of the profile over all trees with n vertices, as JSON
    Distribution {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact moments of profile increments
    Moments {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        b: i64,
        /// Moment of the single increment `Δ_i` instead of `Δ_{b+1} − Δ_{a+1}`
        #[arg(long, allow_negative_numbers = true)]
        increment: Option<i64>,
        /// Compare both sides of the small-gap moment approximation with exponent 2r, r = p
        #[arg(long)]
        small_gap: bool,
    },
    /// Dump a power series as a JSON array of exact rationals
    Series {
        #[arg(long, value_enum)]
        what: SeriesArg,
        #[arg(long, default_value_t = 32)]
        order: usize,
        /// Branch increment for `--what branch`
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        i: i64,
        #[arg(long)]
        shifted: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ScalingArg {
    QuarterPower,
    DoubledSize,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SuiteArg {
    Formula,
    Markov,
    Diffusion,
    Series,
    Moments,
    Sampler,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FreezeArg {
    AtCrossing,
    BeforeCrossing,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesArg {
    Trees,
    Y,
    U,
    B,
    Step,
    Branch,
}

impl From<FreezeArg> for Freeze {
    fn from(f: FreezeArg) -> Self {
        match f {
            FreezeArg::AtCrossing => Freeze::AtCrossing,
            FreezeArg::BeforeCrossing => Freeze::BeforeCrossing,
        }
    }
}

fn create(path: &PathBuf) -> ise_lab::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Outcome of a command that ran to completion.
enum Done {
    Ok,
    GateFailed,
}

fn run(cli: Cli) -> ise_lab::Result<Done> {
    match cli.command {
        Command::SampleProfile {
            n,
            seed,
            out,
            rescale,
            scaling,
        } => {
            let profile = stream_profile(n, seed)?;
            let mut w = create(&out)?;
            if rescale {
                let scaling = match scaling {
                    ScalingArg::QuarterPower => Scaling::QuarterPower,
                    ScalingArg::DoubledSize => Scaling::DoubledSize,
                };
                RescaledTriple::new(&profile, scaling).write_csv(&mut w)?;
            } else {
                profile.triple_on_support().write_csv(&mut w)?;
            }
            w.flush()?;
            println!("width {}", profile.width());
            println!("max_m {}", profile.max_count());
        }
        Command::Verify { suite, level, out } => {
            let suites = if suite == SuiteArg::All {
                Suite::ALL.to_vec()
            } else {
                vec![match suite {
                    SuiteArg::Formula => Suite::Formula,
                    SuiteArg::Markov => Suite::Markov,
                    SuiteArg::Diffusion => Suite::Diffusion,
                    SuiteArg::Series => Suite::Series,
                    SuiteArg::Moments => Suite::Moments,
                    SuiteArg::Sampler | SuiteArg::All => Suite::Sampler,
                }]
            };
            let level = match level {
                LevelArg::Fast => Level::Fast,
                LevelArg::Full => Level::Full,
            };
            let report = run_suites(&suites, level, |g| println!("{g}"))?;
            if let Some(path) = out {
                let mut w = create(&path)?;
                report.write_json(&mut w)?;
                w.flush()?;
            }
            if !report.passed {
                for g in report.failing() {
                    eprintln!("failed: gate {} {}", g.gate, g.name);
                }
                return Ok(Done::GateFailed);
            }
        }
        Command::Companion {
            n,
            delta0,
            m0,
            s0,
            epsilon,
            horizon,
            level,
            steps,
            freeze,
            seed,
            out,
        } => {
            let mut rng = rng_for(seed, streams::CHAIN);
            let mut w = create(&out)?;
            if let Some(n) = n {
                let z0 = RealTriple {
                    delta: delta0,
                    m: m0,
                    s: s0,
                };
                let path = rescaled_chain(n, z0, epsilon, horizon, freeze.into(), &mut rng)?;
                path.write_csv(&mut w)?;
                println!("stuck {}", path.is_stuck());
            } else {
                let int = |x: f64, what: &str| {
                    if x.fract() == 0.0 {
                        Ok(x as i64)
                    } else {
                        Err(Error::InvalidArgument(format!(
                            "{what} must be an integer without --n"
                        )))
                    }
                };
                let z0 = TripleState::alive(int(delta0, "delta0")?, int(m0, "m0")?, int(s0, "s0")?);
                let states = run_stuck(z0, level, steps, freeze.into(), &mut rng)?;
                writeln!(w, "# format_version: 1")?;
                writeln!(w, "k,delta,m,s,status")?;
                for (k, z) in states.iter().enumerate() {
                    writeln!(w, "{k},{},{},{},{:?}", z.delta, z.m, z.s, z.status)?;
                }
            }
            w.flush()?;
        }
        Command::Sde {
            delta0,
            m0,
            s0,
            epsilon,
            horizon,
            dt,
            compare,
            trials,
            freeze,
            seed,
            out,
        } => {
            let z0 = RealTriple {
                delta: delta0,
                m: m0,
                s: s0,
            };
            let mut w = create(&out)?;
            if compare.is_empty() {
                let cfg = IntegratorConfig::new(dt, epsilon, horizon)?;
                let path = integrate(z0, &cfg, &mut rng_for(seed, streams::DIFFUSION))?;
                path.write_csv(&mut w)?;
                println!(
                    "stuck_time {}",
                    path.stuck_time().map_or("none".into(), |t| t.to_string())
                );
            } else {
                let cfg = ComparisonConfig {
                    z0,
                    epsilon,
                    horizon,
                    trials,
                    reference_dt: dt,
                    freeze: freeze.into(),
                };
                let report = compare_chain_to_diffusion(&compare, &cfg, seed)?;
                report.write_json(&mut w)?;
                for r in &report.rows {
                    println!(
                        "n={} {:?} {:?} t={} ks={:.4} p={:.3e}",
                        r.n, r.reference, r.coordinate, r.time, r.statistic, r.p_value
                    );
                }
            }
            w.flush()?;
        }
        Command::Count { profile } => {
            let p: VerticalProfile = profile.parse()?;
            println!("{}", count_profile(&p)?);
        }
        Command::Distribution { n, out } => {
            let dist = profile_distribution(n)?;
            match out {
                Some(path) => {
                    let mut w = create(&path)?;
                    dist.write_json(&mut w)?;
                    w.flush()?;
                    println!("{} profiles, total {}", dist.len(), dist.total());
                }
                None => {
                    let stdout = io::stdout();
                    dist.write_json(stdout.lock())?;
                    println!();
                }
            }
        }
        Command::Moments {
            n,
            p,
            a,
            b,
            increment,
            small_gap,
        } => {
            if small_gap {
                let rep = small_gap_check(n, p, a, b)?;
                println!("lhs {}", rep.lhs);
                println!("rhs {}", rep.rhs);
                match rep.ratio_f64() {
                    Some(r) => println!(
                        "ratio {} ≈ {r:.6}",
                        rep.ratio.as_ref().expect("ratio is defined")
                    ),
                    None => println!("ratio undefined"),
                }
            } else if let Some(i) = increment {
                println!("{}", increment_moment(n, p, i)?);
            } else {
                println!("{}", moment_exact(n, p, a, b)?);
            }
        }
        Command::Series {
            what,
            order,
            i,
            shifted,
        } => {
            let sub = if shifted {
                Substitution::ShiftedTree
            } else {
                Substitution::TreeWeight
            };
            let sys = solve_algebraic(order, sub)?;
            let f = match what {
                SeriesArg::Trees => sys.trees.clone(),
                SeriesArg::Y => sys.y.clone(),
                SeriesArg::U => sys.u.clone(),
                SeriesArg::B => sys.b.clone(),
                SeriesArg::Step => sys.step.clone(),
                SeriesArg::Branch => sys.branch(i),
            };
            println!("{}", f.to_json());
        }
    }
    Ok(Done::Ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = std::env::var("ISE_LAB_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
    {
        // Ignore the error if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match run(cli) {
        Ok(Done::Ok) => ExitCode::SUCCESS,
        Ok(Done::GateFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            let usage = matches!(
                e,
                Error::InvalidArgument(_) | Error::InvalidProfile(_) | Error::CapExceeded { .. }
            );
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
