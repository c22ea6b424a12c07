//! Iterates the bad-block probability recursion and prints the first levels.

use lrp::iterate_recursion;

fn main() -> lrp::Result<()> {
    for d in 1..=3 {
        let table = iterate_recursion(d, 200)?;
        println!("d = {d}: sum of P_k = {:.6e}, inductive bound holds: {}", table.sum, table.inductive_ok);
        for row in table.rows.iter().take(6) {
            println!(
                "  k = {}  ln P_k <= {:>10.4}  (inductive {:>10.4})",
                row.k, row.ln_pk_bound, row.inductive_bound
            );
        }
    }
    Ok(())
}
