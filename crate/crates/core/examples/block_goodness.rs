//! Frequency of bad blocks per level, with the exact level-0 value.

use lrp::{empirical_p0, estimate_block_goodness, Params};

fn main() -> lrp::Result<()> {
    let params = Params::builder(1, 3.0, 0.01).build()?;
    let rows = estimate_block_goodness(&params, 100, 2, 300, 1)?;
    println!("level  side    bad/trials  p_hat    95% CI             exact");
    for r in &rows {
        let exact = r.exact.map_or(String::from("-"), |p| format!("{p:.5}"));
        println!(
            "{:>5}  {:>6}  {:>4}/{:<5}  {:.4}   [{:.4}, {:.4}]   {exact}",
            r.level, r.block_side, r.bad, r.trials, r.p_hat, r.ci_low, r.ci_high
        );
    }

    let p0 = empirical_p0(&params, 100, 20_000, 2)?;
    println!("level 0 over {} trials: {:.4} vs exact {:.4} (se {:.4})", p0.trials, p0.empirical, p0.exact, p0.std_error);
    Ok(())
}
