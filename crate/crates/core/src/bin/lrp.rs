use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lrp::certificates::{certify, find_min_ln_m, iterate_recursion, ConstantsSpec};
use lrp::harness::{
    estimate_block_goodness, parse_distances, regime_diagnostics, run_ratio_experiment,
    ExperimentPlan, Regime,
};
use lrp::{
    chemical_distance, classify_block, load_bundle, sample_configuration, save_bundle, Backend,
    Block, BlockHierarchy, Boundary, Error, LatticeBox, Norm, Params,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "lrp", version, about = "Long-range percolation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Model {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    s: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long, default_value = "euclidean", value_parser = parse_norm)]
    norm: Norm,
    #[arg(long)]
    force_nn: bool,
}

impl Model {
    fn params(&self, boundary: Boundary) -> lrp::Result<Params> {
        Params::builder(self.d, self.s, self.beta)
            .norm(self.norm)
            .boundary(boundary)
            .force_nn(self.force_nn)
            .build()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sample a configuration and write it as a bundle.
    Sample {
        #[command(flatten)]
        model: Model,
        /// Box side length; the box is `[0, side)^d` unless `--lo` is given.
        #[arg(long = "box")]
        side: u64,
        #[arg(long)]
        lo: Option<String>,
        #[arg(long, default_value_t = 0)]
        halo: u64,
        #[arg(long)]
        torus: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "skip", value_parser = parse_backend)]
        backend: Backend,
        #[arg(long)]
        out: PathBuf,
    },
    /// Chemical distance between two points of a bundle.
    Dist {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        witness: bool,
    },
    /// Classify one block of a bundle as GOOD or BAD.
    Classify {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long = "M")]
        m: u64,
        #[arg(long)]
        level: u32,
        #[arg(long)]
        corner: String,
    },
    /// Check the scale-constant inequalities and the probability recursion.
    VerifyConstants {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        sprime: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long = "lnM", conflicts_with = "find_min", required_unless_present = "find_min")]
        ln_m: Option<f64>,
        #[arg(long)]
        find_min: bool,
        #[arg(long, default_value_t = 200)]
        kmax: u64,
    },
    /// Print the bad-block probability bounds as CSV.
    Recursion {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        kmax: u64,
    },
    /// Run the distance-ratio experiment and write CSV.
    Experiment {
        #[command(flatten)]
        model: Model,
        #[arg(long)]
        direction: Option<String>,
        #[arg(long)]
        distances: String,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the probability that origin blocks are bad.
    Pk {
        #[command(flatten)]
        model: Model,
        #[arg(long = "M")]
        m: u64,
        #[arg(long, default_value_t = 0)]
        level: u32,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_norm(s: &str) -> Result<Norm, String> {
    serde_json::from_value(json!(s)).map_err(|_| format!("unknown norm {s:?} (euclidean, sup, l1)"))
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str) -> lrp::Result<Vec<T>> {
    s.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Domain(format!("cannot parse {x:?} in {s:?}"))))
        .collect()
}

fn print_json(value: &impl serde::Serialize) -> lrp::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> lrp::Result<()> {
    match cli.command {
        Command::Sample { model, side, lo, halo, torus, seed, backend, out } => {
            let params = model.params(if torus { Boundary::Torus } else { Boundary::Free })?;
            let bx = match lo {
                Some(lo) => LatticeBox::new(parse_list(&lo)?, side)?,
                None => LatticeBox::origin(params.d(), side)?,
            };
            let config = sample_configuration(&params, &bx, halo, seed, backend)?;
            save_bundle(&config, &out)?;
            print_json(&json!({ "out": out, "edge_count": config.edge_count() }))
        }
        Command::Dist { bundle, from, to, witness } => {
            let config = load_bundle(&bundle)?;
            let result = chemical_distance(&config, &parse_list::<i64>(&from)?, &parse_list::<i64>(&to)?, witness)?;
            print_json(&json!({
                "distance": result.value.to_string(),
                "witness": result.witness.map(|p| p.vertices().to_vec()),
            }))
        }
        Command::Classify { bundle, m, level, corner } => {
            let config = load_bundle(&bundle)?;
            let hierarchy = BlockHierarchy::new(m, level)?;
            print_json(&classify_block(&config, &hierarchy, &Block::new(level, parse_list(&corner)?))?)
        }
        Command::VerifyConstants { d, s, sprime, beta, ln_m, find_min, kmax } => {
            let ln_m = match ln_m {
                Some(v) if !find_min => v,
                _ => find_min_ln_m(d, s, sprime, beta, kmax)?,
            };
            let cert = certify(&ConstantsSpec::new(d, s, sprime, beta, ln_m)?, kmax, kmax)?;
            let mut value = serde_json::to_value(&cert)?;
            value["ok"] = json!(cert.ok());
            print_json(&value)
        }
        Command::Recursion { d, kmax } => {
            let table = iterate_recursion(d, kmax)?;
            let mut out = BufWriter::new(io::stdout().lock());
            writeln!(out, "k,ln_pk_bound,inductive_bound,ok")?;
            for r in &table.rows {
                writeln!(out, "{},{:e},{:e},{}", r.k, r.ln_pk_bound, r.inductive_bound, r.ok)?;
            }
            out.flush()?;
            eprintln!("sum_k>=1 P_k <= {:e}; inductive bound holds: {}", table.sum, table.inductive_ok);
            Ok(())
        }
        Command::Experiment { model, direction, distances, trials, seed, out } => {
            let params = model.params(Boundary::Free)?;
            let direction = match direction {
                Some(text) => parse_list(&text)?,
                None => {
                    let mut v = vec![0.0; params.d()];
                    v[0] = 1.0;
                    v
                }
            };
            let plan = ExperimentPlan::new(params, parse_distances(&distances)?, direction, trials, seed)?;
            let result = run_ratio_experiment(&plan)?;
            match out {
                Some(path) => {
                    let mut w = BufWriter::new(File::create(&path)?);
                    result.write_csv(&mut w)?;
                    w.flush()?;
                }
                None => result.write_csv(io::stdout().lock())?,
            }
            let regime = Regime::of(model.d, model.s);
            match regime_diagnostics(&result, regime) {
                Ok(diag) => eprintln!("{}", serde_json::to_string(&diag)?),
                Err(e) => eprintln!("no regime fit: {e}"),
            }
            eprintln!("wall time {:.2} s", result.wall_time_secs);
            Ok(())
        }
        Command::Pk { model, m, level, trials, seed } => {
            let params = model.params(Boundary::Free)?;
            print_json(&estimate_block_goodness(&params, m, level, trials, seed)?)
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) | Error::OutOfRange(_) | Error::Overflow(_) => 2,
        Error::BudgetExceeded { .. } => 3,
        _ => 4,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
