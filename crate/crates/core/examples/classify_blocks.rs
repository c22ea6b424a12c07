//! Classifies the blocks of a small hierarchy as good or bad, level by level.

use lrp::{
    sample_configuration, Backend, Block, BlockHierarchy, Classifier, LatticeBox, Params,
};

fn main() -> lrp::Result<()> {
    let m = 100;
    let h = BlockHierarchy::new(m, 3)?;
    let top = h.block_side(3)?;
    let params = Params::builder(1, 3.0, 0.01).force_nn(true).build()?;
    let bx = LatticeBox::origin(1, top)?;
    let config = sample_configuration(&params, &bx, h.classification_margin(3)?, 3, Backend::Skip)?;
    let mut classifier = Classifier::new(&config, h);

    for level in 0..=3 {
        let side = h.block_side(level)?;
        let (mut good, mut total) = (0, 0);
        let mut first_bad = None;
        for i in 0..top / side {
            let status = classifier.classify(&Block::new(level, vec![(i * side) as i64]))?;
            total += 1;
            if status.is_good() {
                good += 1;
            } else if first_bad.is_none() {
                first_bad = Some(status);
            }
        }
        println!("level {level}: side {side:>6}, {good}/{total} good");
        if let Some(bad) = first_bad {
            println!("  first bad block at {:?}: {:?}", bad.corner, bad.reason);
        }
    }
    Ok(())
}
