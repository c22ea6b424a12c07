//! Runs the ratio experiment across exponents and fits each regime's model.

use lrp::{regime_diagnostics, run_ratio_experiment, ExperimentPlan, Params, Regime};

fn main() -> lrp::Result<()> {
    let distances: Vec<u64> = (8..=12).map(|e| 1u64 << e).collect();
    for s in [0.5, 1.5, 2.0, 4.0] {
        let params = Params::builder(1, s, 1.0).force_nn(true).build()?;
        let plan = ExperimentPlan::new(params, distances.clone(), vec![1.0], 30, 5)?;
        let result = run_ratio_experiment(&plan)?;
        let regime = Regime::of(1, s);
        let diag = regime_diagnostics(&result, regime)?;
        let medians: Vec<String> = result.medians().iter().map(|(_, m)| format!("{m:.0}")).collect();
        println!("s = {s}: {regime:?}, medians [{}]", medians.join(", "));
        println!("  model {}", diag.model);
        match &diag.fit {
            Some(fit) if fit.r_squared.is_finite() => {
                println!("  slope {:.4}, intercept {:.4}, R^2 {:.4}", fit.slope, fit.intercept, fit.r_squared)
            }
            Some(fit) => println!("  constant {:.4}, spread {}", fit.intercept, diag.spread),
            None => println!("  spread {}", diag.spread),
        }
        if let Some(e) = diag.exponent {
            println!("  polylog exponent {e:.3}");
        }
    }
    Ok(())
}
