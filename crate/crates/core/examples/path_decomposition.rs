//! Splits a geodesic inside a good level-3 block around its bad children.
//!
//! With `M = 100` the first two block sides coincide, so a good 2-block has
//! no bad children; level 3 is the first where the split is visible.

use lrp::{
    decompose_path, restricted_distance, sample_configuration, Backend, Block, BlockHierarchy,
    Classifier, LatticeBox, Params,
};

fn main() -> lrp::Result<()> {
    let h = BlockHierarchy::new(100, 3)?;
    let side = h.block_side(3)?;
    let block = Block::new(3, vec![0]);
    let params = Params::builder(1, 3.0, 0.001).force_nn(true).build()?;
    let bx = LatticeBox::origin(1, side)?;
    let halo = h.classification_margin(3)?;

    for seed in 0..100 {
        let config = sample_configuration(&params, &bx, halo, seed, Backend::Skip)?;
        if !Classifier::new(&config, h).classify(&block)?.is_good() {
            continue;
        }
        let region = block.region(&h)?;
        let (x, y) = (vec![5], vec![side as i64 - 5]);
        let path = restricted_distance(&config, &x, &y, &region, true)?.witness.expect("connected");
        let dec = decompose_path(&config, &h, &block, &path)?;
        if dec.nu.is_empty() {
            continue;
        }
        println!("seed {seed}: geodesic of {} hops from {x:?} to {y:?}", path.hops());
        println!("bad blocks: {:?}", dec.bad_blocks.iter().map(|b| &b.corner).collect::<Vec<_>>());
        for (kind, seg) in &dec.pieces {
            let v = path.vertices();
            println!("  {kind:?}: vertices {}..={} ({} -> {})", seg.start, seg.end, v[seg.start][0], v[seg.end][0]);
        }
        return Ok(());
    }
    println!("no good block with a bad child among the seeds tried");
    Ok(())
}
