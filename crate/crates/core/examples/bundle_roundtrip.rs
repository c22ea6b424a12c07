//! Writes a configuration to a bundle file and reads it back.

use lrp::{load_bundle, sample_configuration, save_bundle, Backend, Boundary, LatticeBox, Params};

fn main() -> lrp::Result<()> {
    let params = Params::builder(2, 2.5, 0.8).boundary(Boundary::Torus).build()?;
    let config = sample_configuration(&params, &LatticeBox::origin(2, 32)?, 0, 11, Backend::Hash)?;

    let path = std::env::temp_dir().join("lrp_example.bundle");
    save_bundle(&config, &path)?;
    let back = load_bundle(&path)?;
    println!("wrote {} edges to {}", config.edge_count(), path.display());
    println!("read back {} edges, identical: {}", back.edge_count(), back.edge_indices() == config.edge_indices());
    println!("provenance: {:?}", back.provenance());

    // flip one payload byte: the checksum catches it
    let mut bytes = std::fs::read(&path)?;
    let last = bytes.len() - 6;
    bytes[last] ^= 0x40;
    std::fs::write(&path, &bytes)?;
    match load_bundle(&path) {
        Ok(_) => println!("corruption went unnoticed"),
        Err(e) => println!("corrupted copy rejected: {e}"),
    }
    std::fs::remove_file(&path)?;
    Ok(())
}
