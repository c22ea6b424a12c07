//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use lrp::{Configuration, Distance, Point};

pub const INF: u32 = u32::MAX;

/// All-pairs hop distances over the primary box by Floyd–Warshall on a
/// dense matrix. Returns the box points in row-major order and the matrix.
pub fn dense_distances(config: &Configuration) -> (Vec<Point>, Vec<Vec<u32>>) {
    let bx = config.lattice_box();
    let d = bx.d();
    let side = bx.side() as i64;
    let n = bx.volume() as usize;
    let point = |mut i: usize| -> Point {
        let mut p = vec![0i64; d];
        for axis in (0..d).rev() {
            p[axis] = bx.lo()[axis] + (i as i64 % side);
            i /= side as usize;
        }
        p
    };
    let index = |p: &[i64]| -> Option<usize> {
        let mut i = 0usize;
        for axis in 0..d {
            let off = p[axis] - bx.lo()[axis];
            if off < 0 || off >= side {
                return None;
            }
            i = i * side as usize + off as usize;
        }
        Some(i)
    };
    let points: Vec<Point> = (0..n).map(point).collect();
    let mut dist = vec![vec![INF; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (x, y) in config.edges() {
        if let (Some(a), Some(b)) = (index(&x), index(&y)) {
            dist[a][b] = 1;
            dist[b][a] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = dist[i][k];
            if dik == INF {
                continue;
            }
            for j in 0..n {
                let dkj = dist[k][j];
                if dkj != INF && dik + dkj < dist[i][j] {
                    dist[i][j] = dik + dkj;
                }
            }
        }
    }
    (points, dist)
}

pub fn as_distance(v: u32) -> Distance {
    if v == INF {
        Distance::Unreachable
    } else {
        Distance::Finite(v)
    }
}

fn factorial_sq(k: u32) -> u64 {
    (1..=k as u64).product::<u64>().pow(2)
}

/// `A_k = M (k!)^2`.
pub fn side(m: u64, k: u32) -> u64 {
    m * factorial_sq(k)
}

fn branching(k: u32) -> u64 {
    if k == 0 {
        1
    } else {
        (k as u64) * (k as u64)
    }
}

type Edge = (Point, Point);

fn in_cube(corner: &[i64], side: u64, x: &[i64]) -> bool {
    corner.iter().zip(x).all(|(&c, &v)| v >= c && v < c + side as i64)
}

/// Euclidean length strictly greater than `scale / 100`, in exact integers.
fn longer_than(e: &Edge, scale: u64) -> bool {
    let sq: i128 = e.0.iter().zip(&e.1).map(|(a, b)| ((b - a) as i128).pow(2)).sum();
    sq * 10_000 > (scale as i128).pow(2)
}

fn all_offsets(d: usize, values: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| values.iter().map(move |&v| {
                let mut q = p.clone();
                q.push(v);
                q
            }))
            .collect();
    }
    out
}

/// Straightforward reading of the good-block definition, no memoization,
/// euclidean norm. Clause (c) uses the configuration that keeps exactly the
/// edges touching the block, and checks every `j` including 0.
pub fn reference_good(edges: &[Edge], m: u64, level: u32, corner: &[i64]) -> bool {
    let a = side(m, level);
    let scale = side(m, level.saturating_sub(1));
    if !no_long_edge(edges, corner, a, scale) {
        return false;
    }
    if level == 0 {
        return true;
    }
    if !at_most_one_bad_child(edges, m, level, corner) {
        return false;
    }
    let repaired: Vec<Edge> = edges
        .iter()
        .filter(|e| in_cube(corner, a, &e.0) || in_cube(corner, a, &e.1))
        .cloned()
        .collect();
    let step = (scale / 2) as i64;
    all_offsets(corner.len(), &[-1, 0, 1]).into_iter().all(|j| {
        let copy: Vec<i64> = corner.iter().zip(&j).map(|(c, s)| c + s * step).collect();
        no_long_edge(&repaired, &copy, a, scale) && at_most_one_bad_child(&repaired, m, level, &copy)
    })
}

fn no_long_edge(edges: &[Edge], corner: &[i64], a: u64, scale: u64) -> bool {
    !edges
        .iter()
        .any(|e| in_cube(corner, a, &e.0) && in_cube(corner, a, &e.1) && longer_than(e, scale))
}

fn at_most_one_bad_child(edges: &[Edge], m: u64, level: u32, corner: &[i64]) -> bool {
    let child = side(m, level - 1) as i64;
    let c = branching(level) as i64;
    let hs: Vec<i64> = (0..c).collect();
    let bad = all_offsets(corner.len(), &hs)
        .into_iter()
        .filter(|h| {
            let cc: Vec<i64> = corner.iter().zip(h).map(|(x, h)| x + h * child).collect();
            !reference_good(edges, m, level - 1, &cc)
        })
        .count();
    bad <= 1
}
