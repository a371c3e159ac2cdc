//! Directed non-backtracking cycles in isogeny graphs.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::ssgraph::IsogenyGraph;

pub const MAX_DEPTH: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CycleError {
    #[error("cycle length {0} exceeds the supported maximum of {MAX_DEPTH}")]
    DepthExceeded(u32),
    #[error("cycle length {0} is below 3")]
    DepthTooSmall(u32),
}

/// One of the parallel edges `from → to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    pub from: usize,
    pub to: usize,
    pub copy: u32,
}

/// Reverse edge, pairing parallel copies by index.
pub fn dual(e: EdgeRef, graph: &IsogenyGraph) -> EdgeRef {
    let back = graph.multiplicity(e.to, e.from);
    debug_assert!(back > 0, "edge {e:?} has no reverse");
    EdgeRef {
        from: e.to,
        to: e.from,
        copy: e.copy % back.max(1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DirectedCycle {
    edges: Vec<EdgeRef>,
    spine_count: usize,
    tainted: bool,
}

impl DirectedCycle {
    fn from_walk(mut edges: Vec<EdgeRef>, graph: &IsogenyGraph) -> Self {
        canonicalize(&mut edges);
        let spine_count = edges.iter().filter(|e| graph.is_spine(e.from)).count();
        let tainted = edges.iter().any(|e| graph.is_special(e.from));
        Self {
            edges,
            spine_count,
            tainted,
        }
    }

    pub fn edges(&self) -> &[EdgeRef] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().map(|e| e.from)
    }

    pub fn spine_count(&self) -> usize {
        self.spine_count
    }

    pub fn tainted(&self) -> bool {
        self.tainted
    }

    /// The same cycle traversed backwards along dual edges.
    pub fn opposite(&self, graph: &IsogenyGraph) -> Self {
        let edges = self.edges.iter().rev().map(|&e| dual(e, graph)).collect();
        Self::from_walk(edges, graph)
    }
}

/// Rotate to the lexicographically least rotation.
fn canonicalize(edges: &mut [EdgeRef]) {
    let n = edges.len();
    let best = (0..n)
        .min_by(|&i, &j| {
            (0..n)
                .map(|k| edges[(i + k) % n])
                .cmp((0..n).map(|k| edges[(j + k) % n]))
        })
        .unwrap_or(0);
    edges.rotate_left(best);
}

fn is_periodic(edges: &[EdgeRef]) -> bool {
    let n = edges.len();
    (1..n)
        .filter(|d| n % d == 0)
        .any(|d| (0..n).all(|i| edges[i] == edges[(i + d) % n]))
}

fn check_length(r: u32) -> Result<(), CycleError> {
    if r > MAX_DEPTH {
        Err(CycleError::DepthExceeded(r))
    } else if r < 3 {
        Err(CycleError::DepthTooSmall(r))
    } else {
        Ok(())
    }
}

/// All directed `r`-cycles, sorted canonically.
pub fn enumerate_cycles(graph: &IsogenyGraph, r: u32) -> Result<Vec<DirectedCycle>, CycleError> {
    check_length(r)?;
    let found = (0..graph.vertex_count())
        .into_par_iter()
        .map(|s| cycles_from(graph, s, r as usize, true))
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        });
    Ok(found.into_iter().collect())
}

/// Cycles through `start`, found by walking from it alone.
pub fn cycles_through(
    graph: &IsogenyGraph,
    start: usize,
    r: u32,
) -> Result<Vec<DirectedCycle>, CycleError> {
    check_length(r)?;
    Ok(cycles_from(graph, start, r as usize, false)
        .into_iter()
        .collect())
}

/// Closed walks from `start`; with `min_start`, only those whose least vertex is `start`.
fn cycles_from(
    graph: &IsogenyGraph,
    start: usize,
    r: usize,
    min_start: bool,
) -> BTreeSet<DirectedCycle> {
    let mut out = BTreeSet::new();
    let mut path: Vec<EdgeRef> = Vec::with_capacity(r);
    walk(graph, start, r, min_start, &mut path, &mut out);
    out
}

fn walk(
    graph: &IsogenyGraph,
    start: usize,
    r: usize,
    min_start: bool,
    path: &mut Vec<EdgeRef>,
    out: &mut BTreeSet<DirectedCycle>,
) {
    let here = path.last().map_or(start, |e| e.to);
    let back = path.last().map(|&e| dual(e, graph));
    for &(to, m) in graph.neighbors(here) {
        if min_start && to < start {
            continue;
        }
        let last = path.len() + 1 == r;
        if last && to != start {
            continue;
        }
        for copy in 0..m {
            let e = EdgeRef {
                from: here,
                to,
                copy,
            };
            if Some(e) == back {
                continue;
            }
            if last && dual(e, graph) == path[0] {
                continue;
            }
            path.push(e);
            if last {
                if !is_periodic(path) {
                    out.insert(DirectedCycle::from_walk(path.clone(), graph));
                }
            } else {
                walk(graph, start, r, min_start, path, out);
            }
            path.pop();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCensus {
    pub p: u64,
    pub ell: u64,
    pub r: u32,
    pub n_t_graph: u64,
    pub n_s_graph: u64,
    pub spine_count_histogram: BTreeMap<usize, u64>,
    pub tainted_present: bool,
}

impl CycleCensus {
    pub fn from_cycles(graph: &IsogenyGraph, r: u32, cycles: &[DirectedCycle]) -> Self {
        let mut spine_count_histogram = BTreeMap::new();
        for c in cycles {
            *spine_count_histogram.entry(c.spine_count()).or_insert(0) += 1;
        }
        Self {
            p: graph.p(),
            ell: graph.ell(),
            r,
            n_t_graph: cycles.len() as u64,
            n_s_graph: cycles.iter().filter(|c| c.spine_count() > 0).count() as u64,
            spine_count_histogram,
            tainted_present: cycles.iter().any(|c| c.tainted()),
        }
    }

    /// Spine counts that occur.
    pub fn support(&self) -> BTreeSet<usize> {
        self.spine_count_histogram.keys().copied().collect()
    }
}

pub fn census(graph: &IsogenyGraph, r: u32) -> Result<CycleCensus, CycleError> {
    let cycles = enumerate_cycles(graph, r)?;
    Ok(CycleCensus::from_cycles(graph, r, &cycles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::FieldElementF2;
    use crate::ssgraph::build_graph;

    fn edge(from: usize, to: usize, copy: u32) -> EdgeRef {
        EdgeRef { from, to, copy }
    }

    #[test]
    fn worked_prime_counts() {
        let g = build_graph(4643, 3, 0).unwrap();
        let cycles = enumerate_cycles(&g, 3).unwrap();
        assert_eq!(cycles.len(), 8);
        let spine: Vec<_> = cycles.iter().filter(|c| c.spine_count() > 0).collect();
        assert_eq!(spine.len(), 4);
        assert!(spine.iter().all(|c| c.spine_count() == 1));
        assert!(cycles.iter().all(|c| !c.tainted()));
        let j173 = g.index_of(FieldElementF2::from_fp(173)).unwrap();
        let through_173 = spine
            .iter()
            .filter(|c| c.vertices().any(|v| v == j173))
            .count();
        assert_eq!(through_173, 2);
        let c = census(&g, 3).unwrap();
        assert_eq!((c.n_s_graph, c.n_t_graph), (4, 8));
        assert_eq!(c.support(), BTreeSet::from([0, 1]));
    }

    #[test]
    fn dual_is_involution_away_from_special_vertices() {
        let g = build_graph(4643, 3, 0).unwrap();
        let mut asymmetric = 0;
        for u in 0..g.vertex_count() {
            for &(v, m) in g.neighbors(u) {
                if g.multiplicity(v, u) != m {
                    assert!(g.is_special(u) || g.is_special(v));
                    asymmetric += 1;
                    continue;
                }
                for copy in 0..m {
                    let e = edge(u, v, copy);
                    assert_eq!(dual(dual(e, &g), &g), e);
                }
            }
        }
        // 0 and 1728 are both supersingular here and carry the asymmetries
        assert!(asymmetric > 0);
    }

    #[test]
    fn dual_of_simple_edge() {
        let g = build_graph(4643, 3, 0).unwrap();
        let (u, v) = (0..g.vertex_count())
            .find_map(|u| g.neighbors(u).iter().find(|e| e.1 == 1).map(|e| (u, e.0)))
            .unwrap();
        assert_eq!(dual(edge(u, v, 0), &g), edge(v, u, 0));
    }

    #[test]
    fn structural_invariants() {
        for (p, ell, r) in [
            (1019u64, 3u64, 3u32),
            (1009, 2, 5),
            (4643, 2, 6),
            (1013, 5, 3),
            (331, 3, 4),
        ] {
            let g = build_graph(p, ell, 0).unwrap();
            let cycles = enumerate_cycles(&g, r).unwrap();
            let set: BTreeSet<_> = cycles.iter().cloned().collect();
            assert_eq!(set.len(), cycles.len());
            assert!(cycles.windows(2).all(|w| w[0] < w[1]));
            for c in &cycles {
                let n = c.len();
                assert_eq!(n, r as usize);
                for i in 0..n {
                    let (a, b) = (c.edges()[i], c.edges()[(i + 1) % n]);
                    assert_eq!(a.to, b.from);
                    assert!(a.copy < g.multiplicity(a.from, a.to));
                    assert_ne!(b, dual(a, &g));
                }
                assert!(!is_periodic(c.edges()));
                let mut rotated = c.edges().to_vec();
                canonicalize(&mut rotated);
                assert_eq!(rotated, c.edges());
                if !c.tainted() {
                    assert!(set.contains(&c.opposite(&g)), "p={p} l={ell} r={r}");
                }
            }
        }
    }

    #[test]
    fn rotation_independence() {
        let g = build_graph(4643, 3, 0).unwrap();
        let all = enumerate_cycles(&g, 3).unwrap();
        for c in &all {
            for v in c.vertices() {
                let local = cycles_through(&g, v, 3).unwrap();
                assert!(local.contains(c));
                assert!(local.iter().all(|d| all.contains(d)));
            }
        }
    }

    #[test]
    fn periodicity_detection() {
        let (a, b) = (edge(0, 1, 0), edge(1, 0, 1));
        assert!(is_periodic(&[a, b, a, b]));
        assert!(!is_periodic(&[a, b, a, edge(1, 0, 0)]));
        let mut v = vec![edge(3, 1, 0), edge(1, 2, 0), edge(2, 3, 0)];
        canonicalize(&mut v);
        assert_eq!(v[0], edge(1, 2, 0));
    }

    #[test]
    fn depth_bounds() {
        let g = build_graph(101, 2, 0).unwrap();
        assert_eq!(enumerate_cycles(&g, 11), Err(CycleError::DepthExceeded(11)));
        assert_eq!(enumerate_cycles(&g, 2), Err(CycleError::DepthTooSmall(2)));
    }
}
