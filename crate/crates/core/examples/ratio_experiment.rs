//! Monte Carlo estimate of `D(0, x) / ‖x‖` along the first axis.

use lrp::{run_ratio_experiment, ExperimentPlan, Params};

fn main() -> lrp::Result<()> {
    let params = Params::builder(1, 1.5, 1.0).force_nn(true).build()?;
    let plan = ExperimentPlan::new(params, vec![64, 256, 1024, 4096], vec![1.0], 40, 99)?;
    let result = run_ratio_experiment(&plan)?;
    print!("{}", result.to_csv());
    eprintln!("box side {}, {:.2}s", result.box_side, result.wall_time_secs);
    Ok(())
}
