//! Connection kernel, lattice windows and the multiscale block hierarchy.
//!
//! Everything here is pure. A `k`-block is a cube `corner + [0, A_k)^d` with
//! `A_k = M (k!)^2`; its children are the `(k^2)^d` blocks of side `A_{k-1}`
//! tiling it (a level-1 block has a single child because `C_1 = 1`).

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A lattice point of `Z^d`.
pub type Point = Vec<i64>;

/// Norm used for edge lengths and block distances.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Euclidean,
    Sup,
    L1,
}

impl Norm {
    pub fn length(self, disp: &[i64]) -> f64 {
        match self {
            Norm::Euclidean => (disp.iter().map(|&x| (x as f64) * (x as f64)).sum::<f64>()).sqrt(),
            Norm::Sup => disp.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as f64,
            Norm::L1 => disp.iter().map(|x| x.unsigned_abs()).sum::<u64>() as f64,
        }
    }

    /// Compares `‖disp‖` with the rational `num / den` without rounding.
    pub fn cmp_ratio(self, disp: &[i64], num: u64, den: u64) -> Ordering {
        assert!(den > 0, "zero denominator");
        match self {
            Norm::Euclidean => {
                let sq: u128 = disp.iter().map(|&x| (x as i128 * x as i128) as u128).sum();
                let den = den as u128;
                let num = num as u128;
                (den * den * sq).cmp(&(num * num))
            }
            Norm::Sup | Norm::L1 => {
                let len: u128 = if self == Norm::Sup {
                    disp.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0) as u128
                } else {
                    disp.iter().map(|x| x.unsigned_abs() as u128).sum()
                };
                (den as u128 * len).cmp(&(num as u128))
            }
        }
    }

    /// `‖disp‖ > num / den`, exactly.
    pub fn exceeds(self, disp: &[i64], num: u64, den: u64) -> bool {
        self.cmp_ratio(disp, num, den) == Ordering::Greater
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Norm::Euclidean => "euclidean",
            Norm::Sup => "sup",
            Norm::L1 => "l1",
        })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Free,
    Torus,
}

/// Model parameters. Immutable once built; use [`Params::builder`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct Params {
    d: usize,
    s: f64,
    beta: f64,
    norm: Norm,
    boundary: Boundary,
    force_nn: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    d: usize,
    s: f64,
    beta: f64,
    norm: Norm,
    boundary: Boundary,
    force_nn: bool,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params::new(raw.d, raw.s, raw.beta, raw.norm, raw.boundary, raw.force_nn)
    }
}

impl From<Params> for RawParams {
    fn from(p: Params) -> Self {
        RawParams {
            d: p.d,
            s: p.s,
            beta: p.beta,
            norm: p.norm,
            boundary: p.boundary,
            force_nn: p.force_nn,
        }
    }
}

impl Params {
    pub fn new(
        d: usize,
        s: f64,
        beta: f64,
        norm: Norm,
        boundary: Boundary,
        force_nn: bool,
    ) -> Result<Self> {
        if d == 0 {
            return Err(domain("dimension d must be at least 1"));
        }
        if !(s.is_finite() && s > 0.0) {
            return Err(domain(format!("decay exponent s must be positive, got {s}")));
        }
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(domain(format!("beta must be non-negative, got {beta}")));
        }
        Ok(Params { d, s, beta, norm, boundary, force_nn })
    }

    /// Free boundary, euclidean norm, no forced nearest-neighbour bonds.
    pub fn builder(d: usize, s: f64, beta: f64) -> ParamsBuilder {
        ParamsBuilder {
            d,
            s,
            beta,
            norm: Norm::default(),
            boundary: Boundary::default(),
            force_nn: false,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn norm(&self) -> Norm {
        self.norm
    }
    pub fn boundary(&self) -> Boundary {
        self.boundary
    }
    pub fn force_nn(&self) -> bool {
        self.force_nn
    }
}

#[derive(Clone, Debug)]
pub struct ParamsBuilder {
    d: usize,
    s: f64,
    beta: f64,
    norm: Norm,
    boundary: Boundary,
    force_nn: bool,
}

impl ParamsBuilder {
    pub fn norm(mut self, norm: Norm) -> Self {
        self.norm = norm;
        self
    }
    pub fn boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }
    pub fn force_nn(mut self, force_nn: bool) -> Self {
        self.force_nn = force_nn;
        self
    }
    pub fn build(self) -> Result<Params> {
        Params::new(self.d, self.s, self.beta, self.norm, self.boundary, self.force_nn)
    }
}

/// Probability that the pair at displacement `k` is open:
/// `min(1, beta ‖k‖^{-s})`, or 1 for a forced nearest-neighbour bond.
pub fn connection_probability(params: &Params, k: &[i64]) -> Result<f64> {
    if k.len() != params.d {
        return Err(domain(format!(
            "displacement has {} coordinates, expected {}",
            k.len(),
            params.d
        )));
    }
    if k.iter().all(|&x| x == 0) {
        return Err(domain("zero displacement has no connection probability"));
    }
    Ok(kernel(params, k))
}

/// Kernel evaluation for a known non-zero displacement of the right dimension.
pub(crate) fn kernel(params: &Params, k: &[i64]) -> f64 {
    if params.force_nn && k.iter().map(|x| x.unsigned_abs()).sum::<u64>() == 1 {
        return 1.0;
    }
    if params.beta == 0.0 {
        return 0.0;
    }
    let len = params.norm.length(k);
    (params.beta * len.powf(-params.s)).min(1.0)
}

/// A finite window `lo + [0, side)^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct LatticeBox {
    lo: Point,
    side: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBox {
    lo: Point,
    side: u64,
}

impl TryFrom<RawBox> for LatticeBox {
    type Error = Error;
    fn try_from(raw: RawBox) -> Result<Self> {
        LatticeBox::new(raw.lo, raw.side)
    }
}

impl LatticeBox {
    pub fn new(lo: Point, side: u64) -> Result<Self> {
        if lo.is_empty() {
            return Err(domain("box corner must have at least one coordinate"));
        }
        if side == 0 {
            return Err(domain("box side must be at least 1"));
        }
        checked_volume(side, lo.len())?;
        for &c in &lo {
            if c.checked_add(side as i64).is_none() {
                return Err(Error::Overflow("box extent".into()));
            }
        }
        Ok(LatticeBox { lo, side })
    }

    /// Box `[0, side)^d`.
    pub fn origin(d: usize, side: u64) -> Result<Self> {
        LatticeBox::new(vec![0; d], side)
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }
    pub fn side(&self) -> u64 {
        self.side
    }
    pub fn d(&self) -> usize {
        self.lo.len()
    }
    pub fn volume(&self) -> u64 {
        self.side.pow(self.lo.len() as u32)
    }
    pub fn region(&self) -> Region {
        Region::cube(&self.lo, self.side)
    }
    pub fn contains(&self, x: &[i64]) -> bool {
        self.region().contains(x)
    }
    /// The box grown by `margin` on every side.
    pub fn expanded(&self, margin: u64) -> Result<LatticeBox> {
        let side = margin
            .checked_mul(2)
            .and_then(|m| m.checked_add(self.side))
            .ok_or_else(|| Error::Overflow("expanded box side".into()))?;
        LatticeBox::new(self.lo.iter().map(|&c| c - margin as i64).collect(), side)
    }
}

pub(crate) fn checked_volume(side: u64, d: usize) -> Result<u64> {
    let v = u32::try_from(d)
        .ok()
        .and_then(|d| side.checked_pow(d))
        .ok_or_else(|| Error::Overflow(format!("vertex count {side}^{d}")))?;
    usize::try_from(v).map_err(|_| Error::Overflow(format!("vertex count {side}^{d}")))?;
    Ok(v)
}

/// Axis-aligned half-open rectangle `[lo_i, hi_i)` in every coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub lo: Point,
    pub hi: Point,
}

impl Region {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        if lo.len() != hi.len() || lo.is_empty() {
            return Err(domain("region corners must have the same positive dimension"));
        }
        Ok(Region { lo, hi })
    }

    pub fn cube(lo: &[i64], side: u64) -> Self {
        Region {
            lo: lo.to_vec(),
            hi: lo.iter().map(|&c| c + side as i64).collect(),
        }
    }

    pub fn d(&self) -> usize {
        self.lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lo.iter().zip(&self.hi).any(|(l, h)| h <= l)
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.lo.len()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(&c, (&l, &h))| l <= c && c < h)
    }

    /// Whether `other` lies inside `self` (empty regions are contained anywhere).
    pub fn covers(&self, other: &Region) -> bool {
        other.is_empty()
            || (other.d() == self.d()
                && (0..self.d()).all(|i| self.lo[i] <= other.lo[i] && other.hi[i] <= self.hi[i]))
    }

    pub fn grown(&self, margin: u64) -> Region {
        Region {
            lo: self.lo.iter().map(|&c| c - margin as i64).collect(),
            hi: self.hi.iter().map(|&c| c + margin as i64).collect(),
        }
    }
}

/// Scale structure `C_0 = M`, `C_n = n^2`, `A_n = M (n!)^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockHierarchy {
    m: u64,
    levels: u32,
}

impl BlockHierarchy {
    pub fn new(m: u64, levels: u32) -> Result<Self> {
        if m == 0 {
            return Err(domain("base scale M must be positive"));
        }
        let h = BlockHierarchy { m, levels };
        h.block_side(levels)?;
        Ok(h)
    }

    /// Hierarchy with as many levels as fit inside `bx` (largest `k` with `A_k <= side`).
    pub fn for_box(m: u64, bx: &LatticeBox) -> Result<Self> {
        if m == 0 {
            return Err(domain("base scale M must be positive"));
        }
        if m > bx.side() {
            return Err(domain(format!("base scale {m} exceeds box side {}", bx.side())));
        }
        let mut levels = 0;
        while let Ok(a) = block_side_raw(m, levels + 1) {
            if a > bx.side() {
                break;
            }
            levels += 1;
        }
        Ok(BlockHierarchy { m, levels })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn levels(&self) -> u32 {
        self.levels
    }

    /// `C_k`: number of children per axis of a `k`-block.
    pub fn branching(&self, level: u32) -> u64 {
        if level == 0 {
            self.m
        } else {
            level as u64 * level as u64
        }
    }

    /// Exact `A_k = M (k!)^2`.
    pub fn block_side(&self, level: u32) -> Result<u64> {
        block_side_raw(self.m, level)
    }

    /// Margin around a `level`-block needed to decide its goodness:
    /// nested shifted copies reach `sum_{i<level} A_i / 2` beyond the block.
    pub fn classification_margin(&self, level: u32) -> Result<u64> {
        let mut total = 0u64;
        for i in 0..level {
            total = total
                .checked_add(self.block_side(i)? / 2)
                .ok_or_else(|| Error::Overflow("classification margin".into()))?;
        }
        Ok(total)
    }
}

fn block_side_raw(m: u64, level: u32) -> Result<u64> {
    let mut a = m;
    for n in 2..=level as u64 {
        a = a
            .checked_mul(n * n)
            .ok_or_else(|| Error::Overflow(format!("A_{level} with M = {m}")))?;
    }
    Ok(a)
}

/// Convenience wrapper over [`BlockHierarchy::block_side`].
pub fn block_side(hierarchy: &BlockHierarchy, level: u32) -> Result<u64> {
    hierarchy.block_side(level)
}

/// The cube `corner + [0, A_level)^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Block {
    pub level: u32,
    pub corner: Point,
}

impl Block {
    pub fn new(level: u32, corner: Point) -> Self {
        Block { level, corner }
    }

    pub fn region(&self, hierarchy: &BlockHierarchy) -> Result<Region> {
        Ok(Region::cube(&self.corner, hierarchy.block_side(self.level)?))
    }

    pub fn translated(&self, offset: &[i64]) -> Block {
        Block {
            level: self.level,
            corner: self.corner.iter().zip(offset).map(|(c, o)| c + o).collect(),
        }
    }
}

/// The `C_k^d` children of a block of level `k >= 1`, in row-major order of `h`.
pub fn children_of(hierarchy: &BlockHierarchy, block: &Block) -> Result<Vec<Block>> {
    if block.level == 0 {
        return Err(domain("a 0-block has no children"));
    }
    let per_axis = hierarchy.branching(block.level);
    let child_side = hierarchy.block_side(block.level - 1)? as i64;
    let d = block.corner.len();
    let count = checked_volume(per_axis, d)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut h = vec![0u64; d];
    for _ in 0..count {
        let corner = block
            .corner
            .iter()
            .zip(&h)
            .map(|(&c, &hi)| c + hi as i64 * child_side)
            .collect();
        out.push(Block::new(block.level - 1, corner));
        for i in (0..d).rev() {
            h[i] += 1;
            if h[i] < per_axis {
                break;
            }
            h[i] = 0;
        }
    }
    Ok(out)
}

/// All `j in {0, +1, -1}^d` with the zero vector first.
pub fn shift_directions(d: usize) -> Vec<Vec<i64>> {
    const STEPS: [i64; 3] = [0, 1, -1];
    let mut out = Vec::with_capacity(3usize.pow(d as u32));
    let mut idx = vec![0usize; d];
    loop {
        out.push(idx.iter().map(|&i| STEPS[i]).collect());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < 3 {
                break;
            }
            idx[i] = 0;
        }
    }
}

/// `{block + j * step : j in {0, +1, -1}^d}`; entry 0 is the block itself.
pub fn shifted_copies(block: &Block, step: u64) -> Result<Vec<Block>> {
    if step == 0 {
        return Err(domain("shift step must be at least 1"));
    }
    Ok(shift_directions(block.corner.len())
        .into_iter()
        .map(|j| {
            let offset: Vec<i64> = j.iter().map(|&x| x * step as i64).collect();
            block.translated(&offset)
        })
        .collect())
}
