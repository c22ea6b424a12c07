//! Chemical distance along one axis, with a shortest path as witness.

use lrp::{chemical_distance, path_stats, sample_configuration, Backend, LatticeBox, Params};

fn main() -> lrp::Result<()> {
    let params = Params::builder(1, 1.5, 1.0).force_nn(true).build()?;
    let bx = LatticeBox::new(vec![-600], 1200)?;
    let config = sample_configuration(&params, &bx, 0, 7, Backend::Skip)?;

    for n in [10i64, 50, 100, 500] {
        let result = chemical_distance(&config, &[0], &[n], true)?;
        let path = result.witness.expect("forced bonds connect the box");
        let stats = path_stats(&path, params.norm());
        println!("D(0, {n:>3}) = {:>3}   hops {:>3}   ratio {:.3}", result.value, stats.hops, stats.hops as f64 / n as f64);
    }

    let short = chemical_distance(&config, &[0], &[40], true)?.witness.unwrap();
    let stops: Vec<String> = short.vertices().iter().map(|v| v[0].to_string()).collect();
    println!("0 -> 40 via {}", stops.join(" "));
    Ok(())
}
