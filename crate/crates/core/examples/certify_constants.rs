//! Finds the smallest admissible `ln M` and checks the scale inequalities.

use lrp::{certify, find_min_ln_m, ConstantsSpec};

fn main() -> lrp::Result<()> {
    let (d, s, s_prime, beta) = (1, 3.0, 2.5, 1.0);
    let ln_m = find_min_ln_m(d, s, s_prime, beta, 200)?;
    println!("smallest ln M for d={d}, s={s}, s'={s_prime}, beta={beta}: {ln_m:.6e}");

    let spec = ConstantsSpec::new(d, s, s_prime, beta, ln_m)?;
    println!("worst n = {:.3}, worst k = {:.3}", spec.critical_n()?, spec.critical_k()?);

    for candidate in [ln_m * 0.99, ln_m] {
        let cert = certify(&ConstantsSpec::new(d, s, s_prime, beta, candidate)?, 200, 200)?;
        println!(
            "ln M = {candidate:.6e}: ineq3 {} ineq4 {} ineq5 {} tails {} recursion {} -> {}",
            cert.ineq3.ok, cert.ineq4.ok, cert.ineq5.ok, cert.tails_monotone, cert.inductive_ok, cert.ok()
        );
        if let Some(k) = cert.ineq5.witness {
            let verdict = if cert.ineq5.ok { "tightest" } else { "fails" };
            println!("  {verdict} at k = {k}, log margin {:.3e}", cert.ineq5.log_margin);
        }
    }
    Ok(())
}
