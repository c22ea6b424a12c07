//! Good-block classification and the path constructions built on it.
//!
//! A 0-block is good when it contains no edge longer than `A_0 / 100`. A
//! `k`-block `Q` is good when
//!
//! * (a) it contains no edge longer than `A_{k-1} / 100`,
//! * (b) at most one of its children is bad, and
//! * (c) some configuration agreeing with the current one on every pair that
//!   touches `Q` makes each shifted copy `Q + j A_{k-1} / 2`, `j ∈ {0,±1}^d`,
//!   satisfy (a) and (b).
//!
//! Opening edges can only break (a) and (b), so goodness is antitone in the
//! edge set and the best witness for (c) keeps exactly the edges touching `Q`.
//! Goodness of a block under any configuration also depends only on the edges
//! touching it, which lets the recursion carry an explicit edge list whenever
//! it evaluates under a modified configuration.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lattice_model::{
    checked_volume, children_of, shift_directions, shifted_copies, Block, BlockHierarchy, Norm,
    Point, Region,
};
use crate::metric::{path_stats, Path};
use crate::sampler::Configuration;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Good,
    Bad,
}

/// Why a block is bad. A good block always carries `None`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reason {
    None,
    /// An edge inside the block longer than the level's threshold.
    LongEdge { edge: (Point, Point) },
    /// Corners of the first two bad children found.
    TwoBadChildren { children: (Point, Point) },
    /// Shifted copy `Q + j step` fails (a) or (b) under the repaired configuration.
    ShiftedFail { j: Vec<i64>, cause: Box<Reason> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockStatus {
    pub level: u32,
    pub corner: Point,
    pub verdict: Verdict,
    pub reason: Reason,
}

impl BlockStatus {
    pub fn is_good(&self) -> bool {
        self.verdict == Verdict::Good
    }

    fn good(block: &Block) -> Self {
        BlockStatus {
            level: block.level,
            corner: block.corner.clone(),
            verdict: Verdict::Good,
            reason: Reason::None,
        }
    }

    fn bad(block: &Block, reason: Reason) -> Self {
        BlockStatus {
            level: block.level,
            corner: block.corner.clone(),
            verdict: Verdict::Bad,
            reason,
        }
    }
}

type Edge = (Point, Point);

/// Edge set a block is evaluated under: the sampled configuration itself, or
/// an explicit list that already contains every relevant edge.
#[derive(Clone, Copy)]
enum Ctx<'e> {
    Root,
    Edges(&'e [Edge]),
}

fn touches(region: &Region, e: &Edge) -> bool {
    region.contains(&e.0) || region.contains(&e.1)
}

fn inside(region: &Region, e: &Edge) -> bool {
    region.contains(&e.0) && region.contains(&e.1)
}

fn disp(e: &Edge) -> Point {
    e.1.iter().zip(&e.0).map(|(b, a)| b - a).collect()
}

/// Classifies blocks of one configuration, memoizing verdicts under the
/// unmodified configuration by `(level, corner)`.
///
/// Not shared across threads; build one per worker.
pub struct Classifier<'a> {
    config: &'a Configuration,
    hierarchy: BlockHierarchy,
    norm: Norm,
    memo: HashMap<Block, BlockStatus>,
}

impl<'a> Classifier<'a> {
    pub fn new(config: &'a Configuration, hierarchy: BlockHierarchy) -> Self {
        Classifier { config, hierarchy, norm: config.params().norm(), memo: HashMap::new() }
    }

    pub fn hierarchy(&self) -> &BlockHierarchy {
        &self.hierarchy
    }

    /// Checks the block sits in the box and that the frame extends the
    /// classification margin beyond it.
    pub fn check_support(&self, block: &Block) -> Result<()> {
        if block.corner.len() != self.config.params().d() {
            return Err(domain("block dimension does not match the configuration"));
        }
        if block.level > self.hierarchy.levels() {
            return Err(domain(format!(
                "level {} exceeds the hierarchy's {} levels",
                block.level,
                self.hierarchy.levels()
            )));
        }
        let region = block.region(&self.hierarchy)?;
        if !self.config.lattice_box().region().covers(&region) {
            return Err(Error::OutOfRange(format!("block {block:?} is not inside the box")));
        }
        let required = self.hierarchy.classification_margin(block.level)?;
        let frame = self.config.frame().region();
        let available = (0..region.d())
            .map(|i| (region.lo[i] - frame.lo[i]).min(frame.hi[i] - region.hi[i]))
            .min()
            .unwrap_or(0)
            .max(0) as u64;
        if available < required {
            return Err(Error::InsufficientHalo { required, available });
        }
        Ok(())
    }

    pub fn classify(&mut self, block: &Block) -> Result<BlockStatus> {
        self.check_support(block)?;
        Ok(self.status(block, Ctx::Root))
    }

    /// Edges with at least one endpoint in `region` under the context.
    fn touching(&self, region: &Region, ctx: Ctx<'_>) -> Vec<Edge> {
        match ctx {
            Ctx::Edges(list) => list.iter().filter(|e| touches(region, e)).cloned().collect(),
            Ctx::Root => {
                let frame = self.config.frame();
                let adj = self.config.adjacency();
                let d = region.d();
                let mut pairs = Vec::new();
                let mut cur = region.lo.clone();
                let mut scratch = vec![0i64; d];
                if region.is_empty() {
                    return Vec::new();
                }
                loop {
                    if let Some(u) = frame.index(&cur) {
                        for &v in adj.neighbors(u) {
                            frame.write_point(v, &mut scratch);
                            if region.contains(&scratch) && v < u {
                                continue;
                            }
                            pairs.push((u.min(v), u.max(v)));
                        }
                    }
                    let mut i = d;
                    loop {
                        if i == 0 {
                            pairs.sort_unstable();
                            return pairs
                                .into_iter()
                                .map(|(a, b)| (frame.point(a), frame.point(b)))
                                .collect();
                        }
                        i -= 1;
                        cur[i] += 1;
                        if cur[i] < region.hi[i] {
                            break;
                        }
                        cur[i] = region.lo[i];
                    }
                }
            }
        }
    }

    /// Threshold numerator for clause (a): length must not exceed `num / 100`.
    fn long_edge_scale(&self, level: u32) -> u64 {
        let below = level.saturating_sub(1);
        self.hierarchy.block_side(below).expect("validated level")
    }

    fn long_edge(&self, region: &Region, level: u32, edges: &[Edge]) -> Option<Edge> {
        let scale = self.long_edge_scale(level);
        edges
            .iter()
            .find(|e| inside(region, e) && self.norm.exceeds(&disp(e), scale, 100))
            .cloned()
    }

    /// Clauses (a) and (b) for a block, children evaluated under `child_ctx`.
    fn local_clauses(&mut self, block: &Block, region: &Region, edges: &[Edge], child_ctx: Ctx<'_>) -> Reason {
        if let Some(e) = self.long_edge(region, block.level, edges) {
            return Reason::LongEdge { edge: e };
        }
        if block.level == 0 {
            return Reason::None;
        }
        let mut first_bad: Option<Point> = None;
        for child in children_of(&self.hierarchy, block).expect("level >= 1") {
            if !self.status(&child, child_ctx).is_good() {
                match first_bad.take() {
                    None => first_bad = Some(child.corner),
                    Some(first) => {
                        return Reason::TwoBadChildren { children: (first, child.corner) };
                    }
                }
            }
        }
        Reason::None
    }

    fn status(&mut self, block: &Block, ctx: Ctx<'_>) -> BlockStatus {
        if let Ctx::Root = ctx {
            if let Some(s) = self.memo.get(block) {
                return s.clone();
            }
        }
        let status = self.evaluate(block, ctx);
        if let Ctx::Root = ctx {
            self.memo.insert(block.clone(), status.clone());
        }
        status
    }

    fn evaluate(&mut self, block: &Block, ctx: Ctx<'_>) -> BlockStatus {
        let region = block.region(&self.hierarchy).expect("validated level");
        let here = self.touching(&region, ctx);
        let child_ctx = match ctx {
            Ctx::Root => Ctx::Root,
            Ctx::Edges(_) => Ctx::Edges(&here),
        };
        let reason = self.local_clauses(block, &region, &here, child_ctx);
        if reason != Reason::None {
            return BlockStatus::bad(block, reason);
        }
        if block.level == 0 {
            return BlockStatus::good(block);
        }
        // clause (c): the repaired configuration is `here`; j = 0 repeats (a), (b)
        let step = self.hierarchy.block_side(block.level - 1).expect("validated") / 2;
        if step == 0 {
            return BlockStatus::good(block);
        }
        let dirs = shift_directions(block.corner.len());
        let copies = shifted_copies(block, step).expect("step >= 1");
        for (j, copy) in dirs.into_iter().zip(copies).skip(1) {
            let copy_region = copy.region(&self.hierarchy).expect("validated");
            let copy_edges: Vec<Edge> =
                here.iter().filter(|e| touches(&copy_region, e)).cloned().collect();
            let cause = self.local_clauses(&copy, &copy_region, &copy_edges, Ctx::Edges(&here));
            if cause != Reason::None {
                return BlockStatus::bad(block, Reason::ShiftedFail { j, cause: Box::new(cause) });
            }
        }
        BlockStatus::good(block)
    }

    fn bad_children(&mut self, block: &Block, ctx: Ctx<'_>) -> Vec<Block> {
        children_of(&self.hierarchy, block)
            .expect("level >= 1")
            .into_iter()
            .filter(|c| !self.status(c, ctx).is_good())
            .collect()
    }

    /// Bad children of `Q` and of its shifted copies `Q + j A_{k-1}/2` (the
    /// latter under the repaired configuration), deduplicated, in order.
    pub fn bad_blocks_around(&mut self, block: &Block) -> Result<Vec<Block>> {
        self.check_support(block)?;
        if block.level == 0 {
            return Err(domain("0-blocks have no children"));
        }
        let region = block.region(&self.hierarchy)?;
        let here = self.touching(&region, Ctx::Root);
        let step = self.hierarchy.block_side(block.level - 1)? / 2;
        let mut out = self.bad_children(block, Ctx::Root);
        if step > 0 {
            for copy in shifted_copies(block, step)?.into_iter().skip(1) {
                for b in self.bad_children(&copy, Ctx::Edges(&here)) {
                    if !out.contains(&b) {
                        out.push(b);
                    }
                }
            }
        }
        Ok(out)
    }
}

pub fn classify_block(
    config: &Configuration,
    hierarchy: &BlockHierarchy,
    block: &Block,
) -> Result<BlockStatus> {
    Classifier::new(config, *hierarchy).classify(block)
}

/// Largest `‖x - y‖` over open edges with both endpoints in `region`; 0 if none.
pub fn max_edge_length_in(config: &Configuration, region: &Region) -> f64 {
    let norm = config.params().norm();
    config
        .edges()
        .filter(|e| inside(region, e))
        .map(|e| norm.length(&disp(&e)))
        .fold(0.0, f64::max)
}

/// Inclusive index range `[start, end]` into a path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Gamma,
    Nu,
}

/// Split of a path into bad-block-avoiding (`gamma`) and bad-block-crossing
/// (`nu`) segments. Consecutive pieces share their boundary vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub gamma: Vec<Segment>,
    pub nu: Vec<Segment>,
    /// Index into `bad_blocks` crossed by each `nu` segment.
    pub nu_blocks: Vec<usize>,
    pub bad_blocks: Vec<Block>,
    /// Indices of `gamma` segments whose endpoint distance exceeds `A_{k-1} / 2`.
    pub large_gammas: Vec<usize>,
    /// All pieces in path order.
    pub pieces: Vec<(SegmentKind, Segment)>,
}

/// Index construction over a path given the bad blocks as regions.
pub(crate) fn decompose_indices(vertices: &[Point], bad: &[Region]) -> Vec<(SegmentKind, Segment, Option<usize>)> {
    let l = vertices.len();
    let which = |i: usize| bad.iter().position(|r| r.contains(&vertices[i]));
    let mut pieces = Vec::new();
    let mut cursor = 0usize;
    loop {
        let Some(a) = (cursor..l).find(|&i| which(i).is_some()) else {
            pieces.push((SegmentKind::Gamma, Segment { start: cursor, end: l - 1 }, None));
            break;
        };
        let b = which(a).expect("found above");
        let z = (a..l).rev().find(|&i| bad[b].contains(&vertices[i])).expect("a qualifies");
        if a > cursor {
            pieces.push((SegmentKind::Gamma, Segment { start: cursor, end: a - 1 }, None));
        }
        let start = if a > cursor { a - 1 } else { cursor };
        let end = (z + 1).min(l - 1);
        pieces.push((SegmentKind::Nu, Segment { start, end }, Some(b)));
        if z + 1 >= l {
            break;
        }
        cursor = z + 1;
    }
    pieces
}

/// Splits `path` (inside the good block `block`) around the bad children of
/// the block and of its shifted copies.
pub fn decompose_path(
    config: &Configuration,
    hierarchy: &BlockHierarchy,
    block: &Block,
    path: &Path,
) -> Result<Decomposition> {
    let mut classifier = Classifier::new(config, *hierarchy);
    decompose_path_with(&mut classifier, block, path)
}

pub fn decompose_path_with(
    classifier: &mut Classifier<'_>,
    block: &Block,
    path: &Path,
) -> Result<Decomposition> {
    let hierarchy = *classifier.hierarchy();
    let region = block.region(&hierarchy)?;
    if let Some(v) = path.vertices().iter().find(|v| !region.contains(v)) {
        return Err(Error::OutOfRange(format!("path vertex {v:?} leaves the block")));
    }
    if block.level == 0 {
        return Err(domain("path decomposition needs a block of level >= 1"));
    }
    let status = classifier.classify(block)?;
    if !status.is_good() {
        return Err(domain(format!("block {block:?} is not good: {:?}", status.reason)));
    }
    let bad_blocks = classifier.bad_blocks_around(block)?;
    let bad_regions: Vec<Region> = bad_blocks
        .iter()
        .map(|b| b.region(&hierarchy))
        .collect::<Result<_>>()?;
    let raw = decompose_indices(path.vertices(), &bad_regions);

    let scale = hierarchy.block_side(block.level - 1)?;
    let norm = classifier.config.params().norm();
    let mut out = Decomposition {
        gamma: Vec::new(),
        nu: Vec::new(),
        nu_blocks: Vec::new(),
        bad_blocks,
        large_gammas: Vec::new(),
        pieces: Vec::new(),
    };
    for (kind, seg, b) in raw {
        out.pieces.push((kind, seg));
        match kind {
            SegmentKind::Gamma => {
                let v = path.vertices();
                let dv: Point = v[seg.end].iter().zip(&v[seg.start]).map(|(a, b)| a - b).collect();
                if norm.exceeds(&dv, scale, 2) {
                    out.large_gammas.push(out.gamma.len());
                }
                out.gamma.push(seg);
            }
            SegmentKind::Nu => {
                out.nu.push(seg);
                out.nu_blocks.push(b.expect("nu carries its block"));
            }
        }
    }
    Ok(out)
}

impl Decomposition {
    /// `Σ D(γ_i) + Σ D(ν_i)` under `norm`.
    pub fn total_displacement(&self, path: &Path, norm: Norm) -> f64 {
        self.pieces
            .iter()
            .map(|(_, s)| path_stats(&path.slice(s.start, s.end), norm).displacement)
            .sum()
    }
}

/// Greedy waypoints along a path at scale `A = scale`: each next waypoint is
/// the first vertex farther than `A/4` from the current one, stopping once
/// the rest of the path stays within `A/2` of the last waypoint.
pub fn select_waypoints(path: &Path, scale: u64, norm: Norm) -> Result<Vec<usize>> {
    let v = path.vertices();
    let delta = |i: usize, j: usize| -> Point { v[j].iter().zip(&v[i]).map(|(a, b)| a - b).collect() };
    for i in 1..v.len() {
        if !norm.cmp_ratio(&delta(i - 1, i), scale, 100).is_lt() {
            return Err(domain(format!(
                "step {} of the path is not shorter than {scale}/100",
                i - 1
            )));
        }
    }
    let mut out = vec![0];
    let mut cur = 0;
    loop {
        let tail_close = (cur + 1..v.len()).all(|j| norm.cmp_ratio(&delta(cur, j), scale, 2).is_lt());
        if tail_close {
            break;
        }
        let next = (cur + 1..v.len())
            .find(|&j| norm.exceeds(&delta(cur, j), scale, 4))
            .expect("a vertex at distance >= A/2 exceeds A/4");
        out.push(next);
        cur = next;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvironmentReport {
    pub ok: bool,
    pub first_failure: Option<(u32, Block)>,
}

/// The level-`level` block of the aligned grid `A_level Z^d` whose center is
/// nearest to the center of `block`; ties go to the lower corner.
pub fn centered_block(hierarchy: &BlockHierarchy, block: &Block, level: u32) -> Result<Block> {
    let a_k = hierarchy.block_side(block.level)? as i128;
    let a_j = hierarchy.block_side(level)? as i128;
    let corner = block
        .corner
        .iter()
        .map(|&c| {
            // doubled coordinates: 2 center_Q = 2c + A_k, 2 center_m = (2m + 1) A_j
            let t = 2 * c as i128 + a_k - a_j;
            let q = t.div_euclid(2 * a_j);
            let r = t.rem_euclid(2 * a_j);
            let m = if r > a_j { q + 1 } else { q };
            (m * a_j) as i64
        })
        .collect();
    Ok(Block::new(level, corner))
}

/// Checks that all `3^d` shifted copies `Q + j A_k / 2` are good and that every
/// centered block of level `k < j <= max_level` is good.
pub fn environment_is_good(
    config: &Configuration,
    hierarchy: &BlockHierarchy,
    block: &Block,
    max_level: u32,
) -> Result<EnvironmentReport> {
    if max_level > hierarchy.levels() {
        return Err(domain(format!(
            "max level {max_level} exceeds the hierarchy's {} levels",
            hierarchy.levels()
        )));
    }
    let mut classifier = Classifier::new(config, *hierarchy);
    let step = (hierarchy.block_side(block.level)? / 2).max(1);
    let mut candidates = shifted_copies(block, step)?;
    for j in block.level + 1..=max_level {
        candidates.push(centered_block(hierarchy, block, j)?);
    }
    for c in &candidates {
        classifier.check_support(c)?;
    }
    for c in candidates {
        if !classifier.classify(&c)?.is_good() {
            return Ok(EnvironmentReport { ok: false, first_failure: Some((c.level, c)) });
        }
    }
    Ok(EnvironmentReport { ok: true, first_failure: None })
}

/// `C' ∏_{h = k_from}^{k_to} (1 - kappa / h^2)`.
pub fn lower_bound_constant(kappa: f64, k_from: u64, k_to: u64, c_prime: f64) -> Result<f64> {
    if !(kappa >= 2.0) {
        return Err(domain(format!("kappa must be at least 2, got {kappa}")));
    }
    if ((k_from as f64) * (k_from as f64)) <= kappa {
        return Err(domain(format!("factor at h = {k_from} is not positive (kappa = {kappa})")));
    }
    let mut acc = c_prime;
    for h in k_from..=k_to {
        let hf = h as f64;
        acc *= 1.0 - kappa / (hf * hf);
    }
    Ok(acc)
}

/// Volume of a block, for callers sizing work.
pub fn block_volume(hierarchy: &BlockHierarchy, level: u32, d: usize) -> Result<u64> {
    checked_volume(hierarchy.block_side(level)?, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice_model::{LatticeBox, Params};
    use crate::sampler::{Backend, Provenance, FORMAT_VERSION};

    fn prov() -> Provenance {
        Provenance { seed: 0, backend: Backend::Skip, format_version: FORMAT_VERSION }
    }

    fn config_1d(lo: i64, side: u64, halo: u64, edges: &[(i64, i64)]) -> Configuration {
        let p = Params::builder(1, 3.0, 0.0).build().unwrap();
        Configuration::from_edges(
            p,
            LatticeBox::new(vec![lo], side).unwrap(),
            halo,
            prov(),
            edges.iter().map(|&(a, b)| (vec![a], vec![b])),
        )
        .unwrap()
    }

    #[test]
    fn empty_configuration_is_good_everywhere() {
        let c = config_1d(0, 400, 100, &[]);
        let h = BlockHierarchy::new(100, 2).unwrap();
        let mut cl = Classifier::new(&c, h);
        for level in 0..=2u32 {
            let side = h.block_side(level).unwrap() as i64;
            for corner in (0..400).step_by(side as usize) {
                let s = cl.classify(&Block::new(level, vec![corner])).unwrap();
                assert!(s.is_good());
                assert_eq!(s.reason, Reason::None);
            }
        }
    }

    #[test]
    fn single_long_edge_in_zero_block() {
        let c = config_1d(0, 200, 0, &[(0, 3)]);
        let h = BlockHierarchy::new(200, 1).unwrap();
        let s = classify_block(&c, &h, &Block::new(0, vec![0])).unwrap();
        assert_eq!(s.verdict, Verdict::Bad);
        assert_eq!(s.reason, Reason::LongEdge { edge: (vec![0], vec![3]) });
        // a length-2 edge is not longer than 200/100
        let c = config_1d(0, 200, 0, &[(0, 2)]);
        assert!(classify_block(&c, &h, &Block::new(0, vec![0])).unwrap().is_good());
    }

    #[test]
    fn insufficient_halo_names_margin() {
        let c = config_1d(0, 400, 20, &[]);
        let h = BlockHierarchy::new(100, 2).unwrap();
        match classify_block(&c, &h, &Block::new(2, vec![0])) {
            Err(Error::InsufficientHalo { required, available }) => {
                assert_eq!(required, 100);
                assert_eq!(available, 20);
            }
            other => panic!("unexpected {other:?}"),
        }
        // level 0 needs no margin
        assert!(classify_block(&c, &h, &Block::new(0, vec![0])).is_ok());
    }

    // Level-3 blocks with M = 100: clause (a) tolerates length 4 at level 3 but
    // only length 1 inside the 2-block children, so length-2 edges make bad
    // children without making Q bad directly.
    fn level3(edges: &[(i64, i64)]) -> BlockStatus {
        let c = config_1d(0, 3600, 300, edges);
        let h = BlockHierarchy::new(100, 3).unwrap();
        classify_block(&c, &h, &Block::new(3, vec![0])).unwrap()
    }

    #[test]
    fn two_bad_children() {
        let s = level3(&[(420, 422), (820, 822)]);
        assert_eq!(s.reason, Reason::TwoBadChildren { children: (vec![400], vec![800]) });
    }

    #[test]
    fn one_bad_child_is_tolerated() {
        assert!(level3(&[(420, 422)]).is_good());
    }

    #[test]
    fn shifted_copy_with_two_bad_children() {
        // All three edges sit in Q's child [0, 400), its only bad child. In
        // Q - 200 they spread over two children: [-200, 200) has two bad
        // 1-blocks and [200, 600) holds {310, 312}.
        let s = level3(&[(10, 12), (110, 112), (310, 312)]);
        match s.reason {
            Reason::ShiftedFail { j, cause } => {
                assert_eq!(j, vec![-1]);
                assert_eq!(*cause, Reason::TwoBadChildren { children: (vec![-200], vec![200]) });
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn shifted_copy_with_long_edge() {
        let s = level3(&[(-5, 3)]);
        assert_eq!(
            s.reason,
            Reason::ShiftedFail {
                j: vec![-1],
                cause: Box::new(Reason::LongEdge { edge: (vec![-5], vec![3]) })
            }
        );
    }

    #[test]
    fn status_json_shape() {
        let c = config_1d(0, 200, 0, &[(0, 3)]);
        let h = BlockHierarchy::new(200, 1).unwrap();
        let s = classify_block(&c, &h, &Block::new(0, vec![0])).unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["level"], 0);
        assert_eq!(v["verdict"], "BAD");
        assert_eq!(v["reason"]["kind"], "long_edge");
        assert_eq!(v["corner"], serde_json::json!([0]));
    }

    #[test]
    fn max_edge_length_examples() {
        let c = config_1d(0, 20, 0, &[]);
        assert_eq!(max_edge_length_in(&c, &Region::new(vec![0], vec![20]).unwrap()), 0.0);
        let c = config_1d(0, 20, 0, &[(0, 1), (0, 10)]);
        assert_eq!(max_edge_length_in(&c, &Region::new(vec![0], vec![20]).unwrap()), 10.0);
        assert_eq!(max_edge_length_in(&c, &Region::new(vec![0], vec![10]).unwrap()), 1.0);
    }

    #[test]
    fn decomposition_without_bad_blocks() {
        let edges: Vec<(i64, i64)> = (0..99).map(|i| (i, i + 1)).collect();
        let c = config_1d(0, 400, 100, &edges);
        let h = BlockHierarchy::new(100, 2).unwrap();
        let path = Path::new((0..100).map(|i| vec![i]).collect()).unwrap();
        let dec = decompose_path(&c, &h, &Block::new(2, vec![0]), &path).unwrap();
        assert_eq!(dec.gamma, vec![Segment { start: 0, end: 99 }]);
        assert!(dec.nu.is_empty());
        assert!(dec.bad_blocks.is_empty());
        assert_eq!(dec.large_gammas, vec![0]);
    }

    #[test]
    fn decomposition_golden_instance() {
        // Level-3 block [0, 3600) with M = 100: children are 2-blocks of side 400.
        // The edge {420, 422} is longer than A_1/100 = 1, so the child [400, 800)
        // is bad; the copies shifted by ±A_2/2 = ±200 each see the bad child
        // [200, 600). Q tolerates both (threshold A_2/100 = 4, one bad child each).
        let c = config_1d(0, 3600, 300, &[(420, 422)]);
        let h = BlockHierarchy::new(100, 3).unwrap();
        let q = Block::new(3, vec![0]);
        assert!(classify_block(&c, &h, &q).unwrap().is_good());
        let path = Path::new(vec![vec![100], vec![350], vec![450], vec![900], vec![1000]]).unwrap();
        let dec = decompose_path(&c, &h, &q, &path).unwrap();
        assert_eq!(dec.bad_blocks, vec![Block::new(2, vec![400]), Block::new(2, vec![200])]);
        // v_1 = 350 is the first vertex in a bad block; 350 lies only in [200,600)
        // (block index 1), whose last visit is v_2 = 450.
        assert_eq!(dec.gamma, vec![Segment { start: 0, end: 0 }, Segment { start: 3, end: 4 }]);
        assert_eq!(dec.nu, vec![Segment { start: 0, end: 3 }]);
        assert_eq!(dec.nu_blocks, vec![1]);
        assert!(dec.large_gammas.is_empty());
        let pieces: Vec<_> = dec.pieces.iter().map(|(k, _)| *k).collect();
        assert_eq!(pieces, vec![SegmentKind::Gamma, SegmentKind::Nu, SegmentKind::Gamma]);
    }

    #[test]
    fn decomposition_rejects_bad_input() {
        let c = config_1d(0, 400, 100, &[]);
        let h = BlockHierarchy::new(100, 2).unwrap();
        let outside = Path::new(vec![vec![10], vec![500]]);
        assert!(outside.is_err() || decompose_path(&c, &h, &Block::new(2, vec![0]), &outside.unwrap()).is_err());
        let p = Path::new(vec![vec![10], vec![399]]).unwrap();
        assert!(decompose_path(&c, &h, &Block::new(2, vec![400]), &p).is_err());
    }

    #[test]
    fn index_construction_edge_cases() {
        let pts = |xs: &[i64]| xs.iter().map(|&x| vec![x]).collect::<Vec<_>>();
        let bad = vec![Region::new(vec![10], vec![20]).unwrap()];
        // path starting inside the bad block
        let r = decompose_indices(&pts(&[12, 15, 25, 30]), &bad);
        assert_eq!(r[0], (SegmentKind::Nu, Segment { start: 0, end: 2 }, Some(0)));
        assert_eq!(r[1], (SegmentKind::Gamma, Segment { start: 2, end: 3 }, None));
        // path ending inside the bad block
        let r = decompose_indices(&pts(&[0, 5, 12]), &bad);
        assert_eq!(r.len(), 2);
        assert_eq!(r[1], (SegmentKind::Nu, Segment { start: 1, end: 2 }, Some(0)));
        // leaving and re-entering: one nu spans to the last visit
        let r = decompose_indices(&pts(&[0, 11, 25, 13, 40, 41]), &bad);
        assert_eq!(r[1], (SegmentKind::Nu, Segment { start: 0, end: 4 }, Some(0)));
        assert_eq!(r[2], (SegmentKind::Gamma, Segment { start: 4, end: 5 }, None));
    }

    #[test]
    fn waypoint_examples() {
        let short = Path::new((0..20).map(|i| vec![i]).collect()).unwrap();
        assert_eq!(select_waypoints(&short, 1000, Norm::Euclidean).unwrap(), vec![0]);
        let line = Path::new((0..=400).map(|i| vec![i]).collect()).unwrap();
        let w = select_waypoints(&line, 400, Norm::Euclidean).unwrap();
        for pair in w.windows(2) {
            let gap = pair[1] - pair[0];
            assert!(gap > 100 && gap <= 101, "gap {gap}");
        }
        let jumpy = Path::new(vec![vec![0], vec![5]]).unwrap();
        assert!(select_waypoints(&jumpy, 400, Norm::Euclidean).is_err());
    }

    #[test]
    fn centered_block_tie_breaking() {
        let h = BlockHierarchy::new(10, 3).unwrap();
        // Q = [0,10): center 5. level-2 grid side 40: centers 20, -20 -> nearest is [0,40)
        assert_eq!(centered_block(&h, &Block::new(0, vec![0]), 2).unwrap().corner, vec![0]);
        // Q = [30,40): center 35; grid centers 20 and 60 -> 20 wins
        assert_eq!(centered_block(&h, &Block::new(0, vec![30]), 2).unwrap().corner, vec![0]);
        // Q = [35,45): center 40, equidistant from 20 and 60 -> lower corner 0
        assert_eq!(centered_block(&h, &Block::new(0, vec![35]), 2).unwrap().corner, vec![0]);
        assert_eq!(centered_block(&h, &Block::new(0, vec![36]), 2).unwrap().corner, vec![40]);
        assert_eq!(centered_block(&h, &Block::new(0, vec![-30]), 2).unwrap().corner, vec![-40]);
    }

    #[test]
    fn environment_examples() {
        let h = BlockHierarchy::new(100, 2).unwrap();
        let c = config_1d(-400, 1200, 100, &[]);
        let env = environment_is_good(&c, &h, &Block::new(1, vec![100]), 2).unwrap();
        assert!(env.ok);
        // long edge inside Q - A_1/2 = [-50, 50) only
        let c = config_1d(-400, 1200, 100, &[(-40, -37)]);
        let env = environment_is_good(&c, &h, &Block::new(1, vec![0]), 1).unwrap();
        assert!(!env.ok);
        let (level, b) = env.first_failure.unwrap();
        assert_eq!(level, 1);
        assert_eq!(b.corner, vec![-50]);
    }

    #[test]
    fn lower_bound_constant_examples() {
        assert_eq!(lower_bound_constant(48.0, 48, 10, 2.5).unwrap(), 2.5);
        assert!(lower_bound_constant(1.0, 48, 100, 1.0).is_err());
        assert!(lower_bound_constant(49.0, 7, 100, 1.0).is_err());
        let a = lower_bound_constant(48.0, 48, 5_000, 1.0).unwrap();
        let b = lower_bound_constant(48.0, 48, 10_000, 1.0).unwrap();
        assert!(b <= a && b > 0.0);
        let tail: f64 = (5_001..=10_000u64).map(|h| 48.0 / (h as f64 * h as f64)).sum();
        assert!(a - b < tail);
    }
}
