//! Samples a two-dimensional configuration and tallies open edges by length.

use std::collections::BTreeMap;

use lrp::{sample_configuration, Backend, LatticeBox, Params};

fn main() -> lrp::Result<()> {
    let params = Params::builder(2, 3.0, 1.0).force_nn(true).build()?;
    let bx = LatticeBox::origin(2, 64)?;
    let config = sample_configuration(&params, &bx, 0, 2024, Backend::Skip)?;
    println!("{} open edges in a box of side {}", config.edge_count(), bx.side());

    let mut by_length: BTreeMap<u64, usize> = BTreeMap::new();
    for (x, y) in config.edges() {
        let len = params.norm().length(&config.displacement(&x, &y));
        *by_length.entry(len.ceil() as u64).or_default() += 1;
    }
    for (len, count) in by_length.iter().take(10) {
        println!("length <= {len:>3}: {count}");
    }
    Ok(())
}
