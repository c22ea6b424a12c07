//! Configuration sampling and bundle persistence.
//!
//! A [`Configuration`] holds every open pair with at least one endpoint in
//! the box and both endpoints in the box grown by the halo (the *frame*).
//! Vertices are addressed by their row-major index in the frame, so the
//! lexicographic order on coordinates coincides with the order on indices.
//!
//! Two backends produce the same law:
//!
//! * `skip` walks every displacement class `k` and jumps between open pairs
//!   with geometric gaps, so the cost is `O(#classes + #open edges)`.
//! * `hash` decides each pair independently from a 64-bit mix of the seed and
//!   the pair's coordinates. It is quadratic and only meant as an oracle.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, BundleError, Error, Result};
use crate::lattice_model::{kernel, Boundary, LatticeBox, Params, Point, Region};

pub const FORMAT_VERSION: u32 = 1;
pub const DEFAULT_EDGE_BUDGET: u64 = 50_000_000;
/// Largest number of candidate pairs the hash backend will enumerate.
pub const HASH_PAIR_LIMIT: u64 = 200_000_000;
/// Largest number of displacement classes either backend will enumerate.
pub const CLASS_LIMIT: u64 = 1_000_000_000;

pub type VertexId = u32;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Skip,
    Hash,
}

impl std::str::FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "skip" => Ok(Backend::Skip),
            "hash" => Ok(Backend::Hash),
            other => Err(domain(format!("unknown backend {other:?} (expected skip or hash)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub backend: Backend,
    pub format_version: u32,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent child seed; used for per-trial and per-class streams.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    mix64(seed ^ mix64(index ^ 0x6A09_E667_F3BC_C909))
}

fn to_unit(h: u64) -> f64 {
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Uniform in `[0, 1)` that depends only on the seed and the unordered pair.
pub fn pair_uniform(seed: u64, x: &[i64], y: &[i64]) -> f64 {
    let (a, b) = if x <= y { (x, y) } else { (y, x) };
    let mut h = mix64(seed);
    for &c in a.iter().chain(b) {
        h = mix64(h ^ c as u64);
    }
    to_unit(h)
}

/// Row-major addressing of the frame `lo + [0, width)^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    lo: Point,
    width: u64,
    strides: Vec<u64>,
}

impl Frame {
    fn new(bx: &LatticeBox) -> Result<Self> {
        if bx.volume() > VertexId::MAX as u64 {
            return Err(Error::Overflow(format!("frame of {} vertices", bx.volume())));
        }
        let d = bx.d();
        let mut strides = vec![1u64; d];
        for i in (0..d.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * bx.side();
        }
        Ok(Frame { lo: bx.lo().to_vec(), width: bx.side(), strides })
    }

    pub fn d(&self) -> usize {
        self.lo.len()
    }
    pub fn width(&self) -> u64 {
        self.width
    }
    pub fn lo(&self) -> &[i64] {
        &self.lo
    }
    pub fn vertex_count(&self) -> usize {
        (self.width as usize).pow(self.d() as u32)
    }
    pub fn region(&self) -> Region {
        Region::cube(&self.lo, self.width)
    }

    pub fn index(&self, x: &[i64]) -> Option<VertexId> {
        if x.len() != self.d() {
            return None;
        }
        let mut idx = 0u64;
        for ((&c, &l), &st) in x.iter().zip(&self.lo).zip(&self.strides) {
            let off = c.checked_sub(l)?;
            if off < 0 || off as u64 >= self.width {
                return None;
            }
            idx += off as u64 * st;
        }
        Some(idx as VertexId)
    }

    pub fn point(&self, idx: VertexId) -> Point {
        let mut rest = idx as u64;
        self.strides
            .iter()
            .zip(&self.lo)
            .map(|(&st, &l)| {
                let q = rest / st;
                rest %= st;
                l + q as i64
            })
            .collect()
    }

    pub(crate) fn write_point(&self, idx: VertexId, out: &mut [i64]) {
        let mut rest = idx as u64;
        for ((o, &st), &l) in out.iter_mut().zip(&self.strides).zip(&self.lo) {
            *o = l + (rest / st) as i64;
            rest %= st;
        }
    }
}

/// Compressed adjacency over frame vertices.
#[derive(Debug)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Adjacency {
    fn build(vertex_count: usize, edges: &[(VertexId, VertexId)]) -> Self {
        let mut offsets = vec![0usize; vertex_count + 1];
        for &(u, v) in edges {
            offsets[u as usize + 1] += 1;
            offsets[v as usize + 1] += 1;
        }
        for i in 0..vertex_count {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; offsets[vertex_count]];
        for &(u, v) in edges {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        Adjacency { offsets, targets }
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }
}

/// A sampled (or constructed) edge set on a box plus halo.
#[derive(Debug)]
pub struct Configuration {
    params: Params,
    bx: LatticeBox,
    halo: u64,
    provenance: Provenance,
    frame: Frame,
    edges: Vec<(VertexId, VertexId)>,
    adjacency: OnceLock<Adjacency>,
}

impl Clone for Configuration {
    fn clone(&self) -> Self {
        Configuration {
            params: self.params.clone(),
            bx: self.bx.clone(),
            halo: self.halo,
            provenance: self.provenance,
            frame: self.frame.clone(),
            edges: self.edges.clone(),
            adjacency: OnceLock::new(),
        }
    }
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
            && self.bx == other.bx
            && self.halo == other.halo
            && self.provenance == other.provenance
            && self.edges == other.edges
    }
}

fn frame_box(params: &Params, bx: &LatticeBox, halo: u64) -> Result<LatticeBox> {
    if params.d() != bx.d() {
        return Err(domain(format!(
            "box has dimension {}, params have d = {}",
            bx.d(),
            params.d()
        )));
    }
    if params.boundary() == Boundary::Torus && halo != 0 {
        return Err(domain("a torus configuration cannot carry a halo"));
    }
    bx.expanded(halo)
}

impl Configuration {
    /// Builds a configuration from an explicit edge list. Duplicate pairs are
    /// merged; self-loops and pairs outside the frame are rejected.
    pub fn from_edges<I>(
        params: Params,
        bx: LatticeBox,
        halo: u64,
        provenance: Provenance,
        edges: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = (Point, Point)>,
    {
        let frame = Frame::new(&frame_box(&params, &bx, halo)?)?;
        let mut list = Vec::new();
        for (x, y) in edges {
            let (Some(a), Some(b)) = (frame.index(&x), frame.index(&y)) else {
                return Err(Error::OutOfRange(format!("edge {x:?}-{y:?} leaves the frame")));
            };
            if a == b {
                return Err(domain(format!("self-loop at {x:?}")));
            }
            if !bx.contains(&x) && !bx.contains(&y) {
                return Err(Error::OutOfRange(format!("edge {x:?}-{y:?} does not touch the box")));
            }
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        list.dedup();
        Ok(Configuration {
            params,
            bx,
            halo,
            provenance,
            frame,
            edges: list,
            adjacency: OnceLock::new(),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }
    pub fn lattice_box(&self) -> &LatticeBox {
        &self.bx
    }
    pub fn halo(&self) -> u64 {
        self.halo
    }
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }
    pub fn frame(&self) -> &Frame {
        &self.frame
    }
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(u, v)` frame indices with `u < v`.
    pub fn edge_indices(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    /// Edges as coordinate pairs in canonical (lexicographic) order.
    pub fn edges(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (self.frame.point(u), self.frame.point(v)))
    }

    pub fn contains_edge(&self, x: &[i64], y: &[i64]) -> bool {
        match (self.frame.index(x), self.frame.index(y)) {
            (Some(a), Some(b)) => self.edges.binary_search(&(a.min(b), a.max(b))).is_ok(),
            _ => false,
        }
    }

    /// Displacement `y - x`, reduced to the minimal image on a torus.
    pub fn displacement(&self, x: &[i64], y: &[i64]) -> Point {
        let l = self.bx.side() as i64;
        x.iter()
            .zip(y)
            .map(|(&a, &b)| {
                let k = b - a;
                if self.params.boundary() == Boundary::Torus {
                    let r = k.rem_euclid(l);
                    if 2 * r > l {
                        r - l
                    } else {
                        r
                    }
                } else {
                    k
                }
            })
            .collect()
    }

    /// Copy keeping only the edges (by position in [`Self::edge_indices`]) accepted by `keep`.
    pub fn retain_edges(&self, mut keep: impl FnMut(usize, &(Point, Point)) -> bool) -> Configuration {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, &(u, v))| keep(*i, &(self.frame.point(u), self.frame.point(v))))
            .map(|(_, &e)| e)
            .collect();
        Configuration {
            params: self.params.clone(),
            bx: self.bx.clone(),
            halo: self.halo,
            provenance: self.provenance,
            frame: self.frame.clone(),
            edges,
            adjacency: OnceLock::new(),
        }
    }

    pub fn adjacency(&self) -> &Adjacency {
        self.adjacency
            .get_or_init(|| Adjacency::build(self.frame.vertex_count(), &self.edges))
    }
}

/// Open edges with at least one endpoint in `region`, in canonical order.
pub fn edges_touching(config: &Configuration, region: &Region) -> Result<Vec<(Point, Point)>> {
    if region.is_empty() {
        return Ok(Vec::new());
    }
    if !config.frame().region().covers(region) {
        return Err(Error::OutOfRange(format!(
            "region {region:?} is not inside the sampled frame"
        )));
    }
    Ok(config
        .edges()
        .filter(|(x, y)| region.contains(x) || region.contains(y))
        .collect())
}

/// Sampler settings beyond the model parameters.
#[derive(Clone, Copy, Debug)]
pub struct Sampler {
    pub backend: Backend,
    pub edge_budget: u64,
}

impl Default for Sampler {
    fn default() -> Self {
        Sampler { backend: Backend::Skip, edge_budget: DEFAULT_EDGE_BUDGET }
    }
}

/// Samples with the default edge budget.
pub fn sample_configuration(
    params: &Params,
    bx: &LatticeBox,
    halo: u64,
    seed: u64,
    backend: Backend,
) -> Result<Configuration> {
    Sampler { backend, ..Sampler::default() }.sample(params, bx, halo, seed)
}

/// One displacement class: all pairs `(x, x + k)` with `x` ranging over a
/// rectangle of the frame.
struct Class {
    code: u64,
    k: Point,
    /// Per-axis start offset (in frame coordinates) and length of the `x` range.
    start: Vec<u64>,
    len: Vec<u64>,
    count: u64,
    p: f64,
    /// Torus class equal to its own negation: keep only `x < x + k`.
    self_inverse: bool,
}

struct Geometry<'a> {
    params: &'a Params,
    bx: &'a LatticeBox,
    halo: u64,
    frame: &'a Frame,
}

impl Geometry<'_> {
    fn torus(&self) -> bool {
        self.params.boundary() == Boundary::Torus
    }

    fn class_space(&self) -> u64 {
        let w = self.frame.width();
        let per_axis = if self.torus() { w } else { 2 * w - 1 };
        per_axis.pow(self.frame.d() as u32)
    }

    fn check_class_space(&self) -> Result<()> {
        let classes = self.class_space();
        if classes > CLASS_LIMIT {
            return Err(Error::BudgetExceeded { estimate: classes as f64, budget: CLASS_LIMIT });
        }
        Ok(())
    }

    fn class(&self, code: u64) -> Option<Class> {
        let d = self.frame.d();
        let w = self.frame.width() as i64;
        let mut k = vec![0i64; d];
        let mut rest = code;
        let radix = if self.torus() { w as u64 } else { (2 * w - 1) as u64 };
        for i in (0..d).rev() {
            let r = (rest % radix) as i64;
            rest /= radix;
            k[i] = if self.torus() { r } else { r - (w - 1) };
        }
        if self.torus() {
            if k.iter().all(|&x| x == 0) {
                return None;
            }
            let neg: Point = k.iter().map(|&x| (w - x) % w).collect();
            if neg < k {
                return None;
            }
            let self_inverse = neg == k;
            let image: Point = k.iter().map(|&x| if 2 * x > w { x - w } else { x }).collect();
            let p = kernel(self.params, &image);
            let count = (w as u64).pow(d as u32);
            Some(Class {
                code,
                k,
                start: vec![0; d],
                len: vec![w as u64; d],
                count: if self_inverse { count / 2 } else { count },
                p,
                self_inverse,
            })
        } else {
            // lexicographically positive representatives only
            match k.iter().find(|&&x| x != 0) {
                Some(&x) if x > 0 => {}
                _ => return None,
            }
            let p = kernel(self.params, &k);
            let start: Vec<u64> = k.iter().map(|&x| (-x).max(0) as u64).collect();
            let len: Vec<u64> = k.iter().map(|&x| (w - x.abs()) as u64).collect();
            let count = len.iter().product();
            Some(Class { code, k, start, len, count, p, self_inverse: false })
        }
    }

    fn expected_edges(&self) -> f64 {
        (0..self.class_space() as usize)
            .into_par_iter()
            .with_min_len(4096)
            .filter_map(|c| self.class(c as u64))
            .map(|cl| cl.count as f64 * cl.p)
            .sum()
    }

    /// Emits the open pairs of one class, given the ranks (in the class's
    /// canonical order) of the open positions.
    fn pair_at(&self, class: &Class, pos: u64, x: &mut [i64], y: &mut [i64]) -> Option<(VertexId, VertexId)> {
        let d = x.len();
        let mut rest = pos;
        for i in (0..d).rev() {
            let r = rest % class.len[i];
            rest /= class.len[i];
            x[i] = self.frame.lo()[i] + (class.start[i] + r) as i64;
        }
        let w = self.frame.width() as i64;
        for i in 0..d {
            y[i] = if self.torus() {
                let lo = self.frame.lo()[i];
                lo + (x[i] - lo + class.k[i]).rem_euclid(w)
            } else {
                x[i] + class.k[i]
            };
        }
        if self.halo > 0 && !self.bx.contains(x) && !self.bx.contains(y) {
            return None;
        }
        let a = self.frame.index(x)?;
        let b = self.frame.index(y)?;
        if class.self_inverse && a > b {
            return None;
        }
        Some((a.min(b), a.max(b)))
    }

    fn sample_class(&self, seed: u64, class: &Class) -> Vec<(VertexId, VertexId)> {
        let d = self.frame.d();
        let mut x = vec![0i64; d];
        let mut y = vec![0i64; d];
        let mut out = Vec::new();
        if class.p <= 0.0 {
            return out;
        }
        let positions = class.len.iter().product::<u64>();
        if class.p >= 1.0 {
            for pos in 0..positions {
                out.extend(self.pair_at(class, pos, &mut x, &mut y));
            }
            return out;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, class.code));
        let log_q = (-class.p).ln_1p();
        let mut pos = 0u64;
        loop {
            // U in (0, 1]; P(gap = g) = p (1 - p)^g
            let u = 1.0 - rng.random::<f64>();
            let gap = (u.ln() / log_q).floor();
            if !(gap < (positions - pos) as f64) {
                break;
            }
            pos += gap as u64;
            out.extend(self.pair_at(class, pos, &mut x, &mut y));
            pos += 1;
            if pos >= positions {
                break;
            }
        }
        out
    }

    fn sample_skip(&self, seed: u64) -> Vec<(VertexId, VertexId)> {
        let mut edges: Vec<(VertexId, VertexId)> = (0..self.class_space() as usize)
            .into_par_iter()
            .with_min_len(1024)
            .filter_map(|c| self.class(c as u64))
            .flat_map_iter(|cl| self.sample_class(seed, &cl))
            .collect();
        edges.par_sort_unstable();
        edges
    }

    fn sample_hash(&self, seed: u64) -> Vec<(VertexId, VertexId)> {
        let n = self.frame.vertex_count() as VertexId;
        let d = self.frame.d();
        (0..n)
            .into_par_iter()
            .flat_map_iter(|u| {
                let mut out = Vec::new();
                let xu = self.frame.point(u);
                let u_in = self.bx.contains(&xu);
                let mut xv = vec![0i64; d];
                for v in u + 1..n {
                    self.frame.write_point(v, &mut xv);
                    if !u_in && !self.bx.contains(&xv) {
                        continue;
                    }
                    let k: Point = if self.torus() {
                        let w = self.frame.width() as i64;
                        xu.iter()
                            .zip(&xv)
                            .map(|(&a, &b)| {
                                let r = (b - a).rem_euclid(w);
                                if 2 * r > w {
                                    r - w
                                } else {
                                    r
                                }
                            })
                            .collect()
                    } else {
                        xu.iter().zip(&xv).map(|(&a, &b)| b - a).collect()
                    };
                    let p = kernel(self.params, &k);
                    if p >= 1.0 || (p > 0.0 && pair_uniform(seed, &xu, &xv) < p) {
                        out.push((u, v));
                    }
                }
                out
            })
            .collect()
    }
}

impl Sampler {
    pub fn new(backend: Backend) -> Self {
        Sampler { backend, ..Sampler::default() }
    }

    pub fn edge_budget(mut self, budget: u64) -> Self {
        self.edge_budget = budget;
        self
    }

    pub fn budget(&self) -> u64 {
        self.edge_budget
    }

    /// Expected number of open edges for this window, without sampling.
    pub fn expected_edges(&self, params: &Params, bx: &LatticeBox, halo: u64) -> Result<f64> {
        let fb = frame_box(params, bx, halo)?;
        let frame = Frame::new(&fb)?;
        let geo = Geometry { params, bx, halo, frame: &frame };
        geo.check_class_space()?;
        Ok(geo.expected_edges())
    }

    pub fn sample(
        &self,
        params: &Params,
        bx: &LatticeBox,
        halo: u64,
        seed: u64,
    ) -> Result<Configuration> {
        let fb = frame_box(params, bx, halo)?;
        let frame = Frame::new(&fb)?;
        let geo = Geometry { params, bx, halo, frame: &frame };
        geo.check_class_space()?;
        let estimate = geo.expected_edges();
        if estimate > self.edge_budget as f64 {
            return Err(Error::BudgetExceeded { estimate, budget: self.edge_budget });
        }
        let edges = match self.backend {
            Backend::Skip => geo.sample_skip(seed),
            Backend::Hash => {
                let n = frame.vertex_count() as u64;
                let pairs = n.saturating_mul(n.saturating_sub(1)) / 2;
                if pairs > HASH_PAIR_LIMIT {
                    return Err(Error::BudgetExceeded {
                        estimate: pairs as f64,
                        budget: HASH_PAIR_LIMIT,
                    });
                }
                geo.sample_hash(seed)
            }
        };
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(edges.iter().all(|&(u, v)| u < v));
        Ok(Configuration {
            params: params.clone(),
            bx: bx.clone(),
            halo,
            provenance: Provenance { seed, backend: self.backend, format_version: FORMAT_VERSION },
            frame,
            edges,
            adjacency: OnceLock::new(),
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleHeader {
    params: Params,
    #[serde(rename = "box")]
    bx: LatticeBox,
    halo: u64,
    seed: u64,
    backend: Backend,
    edge_count: u64,
    format_version: u32,
    crc32: u32,
}

fn payload(config: &Configuration) -> Vec<u8> {
    let mut out = Vec::with_capacity(config.edge_count() * 16);
    let mut line = String::new();
    for (x, y) in config.edges() {
        line.clear();
        for (i, c) in x.iter().chain(&y).enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&c.to_string());
        }
        line.push('\n');
        out.extend_from_slice(line.as_bytes());
    }
    out
}

/// Serializes a configuration into the bundle byte format.
pub fn encode_bundle(config: &Configuration) -> Result<Vec<u8>> {
    let body = payload(config);
    let header = BundleHeader {
        params: config.params.clone(),
        bx: config.bx.clone(),
        halo: config.halo,
        seed: config.provenance.seed,
        backend: config.provenance.backend,
        edge_count: config.edge_count() as u64,
        format_version: FORMAT_VERSION,
        crc32: crc32fast::hash(&body),
    };
    let mut out = serde_json::to_vec(&header)?;
    out.push(b'\n');
    out.extend_from_slice(&body);
    Ok(out)
}

pub fn save_bundle(config: &Configuration, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_bundle(config)?;
    let mut f = fs::File::create(path)?;
    f.write_all(&bytes)?;
    f.flush()?;
    Ok(())
}

pub fn load_bundle(path: impl AsRef<Path>) -> Result<Configuration> {
    let f = fs::File::open(path).map_err(BundleError::Io)?;
    decode_bundle(BufReader::new(f))
}

/// Parses a bundle from any reader.
pub fn decode_bundle(mut reader: impl BufRead) -> Result<Configuration> {
    let mut head = Vec::new();
    reader.read_until(b'\n', &mut head).map_err(BundleError::Io)?;
    if head.last() != Some(&b'\n') {
        return Err(BundleError::Header("missing header line".into()).into());
    }
    head.pop();
    let raw: serde_json::Value =
        serde_json::from_slice(&head).map_err(|e| BundleError::Header(e.to_string()))?;
    let version = raw
        .get("format_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| BundleError::Header("format_version missing".into()))?;
    if version != FORMAT_VERSION as u64 {
        return Err(BundleError::Version {
            found: version.min(u32::MAX as u64) as u32,
            expected: FORMAT_VERSION,
        }
        .into());
    }
    let header: BundleHeader =
        serde_json::from_value(raw).map_err(|e| BundleError::Header(e.to_string()))?;

    let mut body = Vec::new();
    reader.read_to_end(&mut body).map_err(BundleError::Io)?;
    let found = crc32fast::hash(&body);
    if found != header.crc32 {
        return Err(BundleError::Checksum { expected: header.crc32, found }.into());
    }

    let d = header.params.d();
    let text = std::str::from_utf8(&body).map_err(|e| BundleError::Record {
        line: 0,
        reason: e.to_string(),
    })?;
    let mut edges = Vec::with_capacity(header.edge_count as usize);
    for (n, line) in text.lines().enumerate() {
        let coords: std::result::Result<Vec<i64>, _> =
            line.split(' ').map(str::parse::<i64>).collect();
        let coords = coords.map_err(|e| BundleError::Record { line: n + 2, reason: e.to_string() })?;
        if coords.len() != 2 * d {
            return Err(BundleError::Record {
                line: n + 2,
                reason: format!("expected {} coordinates, found {}", 2 * d, coords.len()),
            }
            .into());
        }
        edges.push((coords[..d].to_vec(), coords[d..].to_vec()));
    }
    if edges.len() as u64 != header.edge_count {
        return Err(BundleError::Header(format!(
            "header announces {} edges, payload has {}",
            header.edge_count,
            edges.len()
        ))
        .into());
    }
    let provenance = Provenance {
        seed: header.seed,
        backend: header.backend,
        format_version: header.format_version,
    };
    Configuration::from_edges(header.params, header.bx, header.halo, provenance, edges).map_err(|e| {
        match e {
            Error::Bundle(b) => Error::Bundle(b),
            other => BundleError::Record { line: 0, reason: other.to_string() }.into(),
        }
    })
}
