//! Chemical (graph) distance on a configuration.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lattice_model::{Norm, Point, Region};
use crate::sampler::{Configuration, VertexId};

const UNSEEN: u32 = u32::MAX;

/// Hop count, or the explicit absence of any connecting path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Distance {
    Finite(u32),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<u32> {
        match self {
            Distance::Finite(v) => Some(v),
            Distance::Unreachable => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Distance::Finite(_))
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(v) => write!(f, "{v}"),
            Distance::Unreachable => f.write_str("UNREACHABLE"),
        }
    }
}

/// Sequence of lattice points `v_1 ... v_l` with `l >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    vertices: Vec<Point>,
}

impl Path {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(domain("a path has at least one vertex"));
        }
        let d = vertices[0].len();
        if vertices.iter().any(|v| v.len() != d) {
            return Err(domain("path vertices have mixed dimensions"));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(domain("consecutive path vertices must be distinct"));
        }
        Ok(Path { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of hops `l - 1`.
    pub fn hops(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn first(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn last(&self) -> &Point {
        self.vertices.last().expect("non-empty")
    }

    /// Sub-path over the inclusive index range `[start, end]`.
    pub fn slice(&self, start: usize, end: usize) -> Path {
        Path { vertices: self.vertices[start..=end].to_vec() }
    }

    /// Checks every vertex is in the frame and every step is an open edge.
    pub fn validate(&self, config: &Configuration) -> Result<()> {
        for v in &self.vertices {
            if config.frame().index(v).is_none() {
                return Err(Error::OutOfRange(format!("path vertex {v:?} outside the frame")));
            }
        }
        for w in self.vertices.windows(2) {
            if !config.contains_edge(&w[0], &w[1]) {
                return Err(domain(format!("step {:?} -> {:?} is not an open edge", w[0], w[1])));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceResult {
    pub value: Distance,
    pub witness: Option<Path>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PathStats {
    /// `L(path)`: hop count.
    pub hops: usize,
    /// `D(path)`: norm of the endpoint displacement.
    pub displacement: f64,
}

pub fn path_stats(path: &Path, norm: Norm) -> PathStats {
    let disp: Point = path.last().iter().zip(path.first()).map(|(a, b)| a - b).collect();
    PathStats { hops: path.hops(), displacement: norm.length(&disp) }
}

/// BFS distances from one source to every frame vertex.
#[derive(Clone, Debug)]
pub struct DistanceField<'a> {
    config: &'a Configuration,
    dist: Vec<u32>,
}

impl DistanceField<'_> {
    pub fn get(&self, x: &[i64]) -> Distance {
        match self.config.frame().index(x) {
            Some(i) if self.dist[i as usize] != UNSEEN => Distance::Finite(self.dist[i as usize]),
            _ => Distance::Unreachable,
        }
    }

    pub fn reached(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNSEEN).count()
    }
}

/// One BFS from `source` answering `D(source, ·)` for every vertex.
pub fn bfs_from<'a>(config: &'a Configuration, source: &[i64]) -> Result<DistanceField<'a>> {
    let s = config
        .frame()
        .index(source)
        .ok_or_else(|| Error::OutOfRange(format!("source {source:?} outside the frame")))?;
    let search = Search::run(config, s, None, None, false);
    Ok(DistanceField { config, dist: search.dist })
}

struct Search {
    dist: Vec<u32>,
    parent: Vec<VertexId>,
}

impl Search {
    fn run(
        config: &Configuration,
        source: VertexId,
        target: Option<VertexId>,
        region: Option<&Region>,
        track_parents: bool,
    ) -> Search {
        let adj = config.adjacency();
        let frame = config.frame();
        let n = adj.vertex_count();
        let mut dist = vec![UNSEEN; n];
        let mut parent = if track_parents { vec![0; n] } else { Vec::new() };
        let mut scratch = vec![0i64; frame.d()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            if Some(u) == target {
                break;
            }
            let du = dist[u as usize];
            for &v in adj.neighbors(u) {
                if dist[v as usize] != UNSEEN {
                    continue;
                }
                if let Some(r) = region {
                    frame.write_point(v, &mut scratch);
                    if !r.contains(&scratch) {
                        continue;
                    }
                }
                dist[v as usize] = du + 1;
                if track_parents {
                    parent[v as usize] = u;
                }
                queue.push_back(v);
            }
        }
        Search { dist, parent }
    }

    fn result(&self, config: &Configuration, source: VertexId, target: VertexId, witness: bool) -> DistanceResult {
        let d = self.dist[target as usize];
        if d == UNSEEN {
            return DistanceResult { value: Distance::Unreachable, witness: None };
        }
        let witness = witness.then(|| {
            let mut chain = vec![target];
            let mut cur = target;
            while cur != source {
                cur = self.parent[cur as usize];
                chain.push(cur);
            }
            chain.reverse();
            Path { vertices: chain.into_iter().map(|v| config.frame().point(v)).collect() }
        });
        DistanceResult { value: Distance::Finite(d), witness }
    }
}

/// Exact hop distance between two box vertices over the whole frame.
pub fn chemical_distance(
    config: &Configuration,
    x: &[i64],
    y: &[i64],
    want_witness: bool,
) -> Result<DistanceResult> {
    let bx = config.lattice_box();
    for p in [x, y] {
        if !bx.contains(p) {
            return Err(Error::OutOfRange(format!("{p:?} is not in the box")));
        }
    }
    let frame = config.frame();
    let (s, t) = (frame.index(x).expect("box in frame"), frame.index(y).expect("box in frame"));
    let search = Search::run(config, s, Some(t), None, want_witness);
    Ok(search.result(config, s, t, want_witness))
}

/// Hop distance using only vertices inside `region`.
pub fn restricted_distance(
    config: &Configuration,
    x: &[i64],
    y: &[i64],
    region: &Region,
    want_witness: bool,
) -> Result<DistanceResult> {
    for p in [x, y] {
        if !region.contains(p) {
            return Err(Error::OutOfRange(format!("{p:?} is not in the region")));
        }
    }
    let frame = config.frame();
    let (Some(s), Some(t)) = (frame.index(x), frame.index(y)) else {
        return Err(Error::OutOfRange("endpoint outside the sampled frame".into()));
    };
    let search = Search::run(config, s, Some(t), Some(region), want_witness);
    Ok(search.result(config, s, t, want_witness))
}
