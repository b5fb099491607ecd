//! Finite undirected graphs with optional loops.
//!
//! Vertices are `0..n` internally; every file format and report uses `1..=n`.
//! A loop at `v` is stored as `v ∈ adj(v)` and mirrored in a separate loop set,
//! so rules quantified over edges `{x, y}` see loops as the case `x = y`.

pub mod families;
pub mod io;

use std::collections::VecDeque;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A length that may be infinite: distances between components, girth of forests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Length {
    Finite(usize),
    Infinite,
}

impl Length {
    pub fn finite(self) -> Option<usize> {
        match self {
            Length::Finite(d) => Some(d),
            Length::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Length::Finite(_))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(d) => write!(f, "{d}"),
            Length::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Length::Finite(d) => s.serialize_u64(*d as u64),
            Length::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Size limits for anything that gets materialized as a dense graph.
///
/// Dense adjacency costs `n²` bits, so both the vertex count and the number of
/// unordered vertex pairs are bounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Guard {
    pub max_vertices: u64,
    pub max_pair_checks: u64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            max_vertices: 1_000_000,
            max_pair_checks: 100_000_000,
        }
    }
}

impl Guard {
    pub fn with_max_vertices(max_vertices: u64) -> Self {
        Guard {
            max_vertices,
            ..Guard::default()
        }
    }

    /// `None` stands for a count that overflowed `u64`.
    pub fn admits(&self, vertices: Option<u64>) -> bool {
        match vertices {
            Some(n) => {
                let pairs = (n as u128) * (n.saturating_sub(1) as u128) / 2;
                n <= self.max_vertices && pairs <= self.max_pair_checks as u128
            }
            None => false,
        }
    }

    pub(crate) fn check(&self, vertices: Option<u64>, what: &str) -> Result<()> {
        if self.admits(vertices) {
            Ok(())
        } else {
            let size = vertices.map_or_else(|| "more than 2^64".to_string(), |n| n.to_string());
            Err(Error::resource(format!(
                "{what} has {size} vertices, over the guard of {} vertices / {} pair checks",
                self.max_vertices, self.max_pair_checks
            )))
        }
    }
}

/// A subset of the vertices `0..n` of some graph.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn from_vertices(
        universe: usize,
        vertices: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        let mut set = VertexSet::empty(universe);
        for v in vertices {
            if v >= universe {
                return Err(Error::input(format!("vertex {v} outside 0..{universe}")));
            }
            set.bits.insert(v);
        }
        Ok(set)
    }

    pub(crate) fn from_bits(bits: FixedBitSet) -> Self {
        VertexSet { bits }
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    /// 1-based vertex list.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|v| v + 1))
    }
}

/// An immutable finite graph, loops allowed, stored as bitset adjacency rows.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<FixedBitSet>,
    loops: FixedBitSet,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// The edgeless graph on `n ≥ 1` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("a graph needs at least one vertex"));
        }
        Ok(Graph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            loops: FixedBitSet::with_capacity(n),
        })
    }

    /// Builds a graph from unordered edges; `(v, v)` is a loop. Repeated edges collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u}, {v}) outside 0..{n}")));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
            if u == v {
                g.loops.insert(u);
            }
        }
        Ok(g)
    }

    /// Builds a graph from adjacency rows, rejecting asymmetric input.
    pub fn from_rows(rows: Vec<FixedBitSet>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::input("a graph needs at least one vertex"));
        }
        let mut loops = FixedBitSet::with_capacity(n);
        for (u, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::input(format!(
                    "row {u} has length {} instead of {n}",
                    row.len()
                )));
            }
            for v in row.ones() {
                if !rows[v].contains(u) {
                    return Err(Error::input(format!(
                        "adjacency not symmetric at ({u}, {v})"
                    )));
                }
            }
            if row.contains(u) {
                loops.insert(u);
            }
        }
        Ok(Graph { adj: rows, loops })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges, each loop counted once.
    pub fn edge_count(&self) -> usize {
        let twice: usize = self.adj.iter().map(|r| r.count_ones(..)).sum();
        let loops = self.loops.count_ones(..);
        (twice - loops) / 2 + loops
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.adj[u].contains(v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops.contains(v)
    }

    pub fn has_loops(&self) -> bool {
        !self.loops.is_clear()
    }

    pub fn loops(&self) -> VertexSet {
        VertexSet::from_bits(self.loops.clone())
    }

    /// Adjacency row of `v`; contains `v` itself iff `v` is looped.
    pub fn row(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    /// Neighbours of `v`, including `v` when looped.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].ones()
    }

    /// Number of neighbours other than `v` itself.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..) - usize::from(self.has_loop(v))
    }

    /// Every edge once as `(u, v)` with `u ≤ v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v >= u).map(move |v| (u, v)))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::input(format!("vertex {v} outside 0..{}", self.n())))
        }
    }

    /// Checks symmetry and the loop mirror bit for bit.
    pub fn is_symmetric(&self) -> bool {
        let n = self.n();
        (0..n).all(|u| {
            self.adj[u].ones().all(|v| self.adj[v].contains(u))
                && self.adj[u].contains(u) == self.loops.contains(u)
        })
    }

    /// The same edge set plus a loop at every vertex.
    pub fn add_loops(&self) -> Graph {
        let mut g = self.clone();
        for v in 0..g.n() {
            g.adj[v].insert(v);
        }
        g.loops.insert_range(..);
        g
    }

    /// Breadth-first distances from `source`; loops are ignored.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Length>> {
        self.check_vertex(source)?;
        let mut dist = vec![Length::Infinite; self.n()];
        dist[source] = Length::Finite(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let Length::Finite(du) = dist[u] else {
                unreachable!()
            };
            for w in self.neighbors(u) {
                if dist[w] == Length::Infinite {
                    dist[w] = Length::Finite(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn dist(&self, u: usize, v: usize) -> Result<Length> {
        self.check_vertex(v)?;
        Ok(self.distances_from(u)?[v])
    }

    /// Length of a shortest cycle. Only defined for loopless graphs.
    pub fn girth(&self) -> Result<Length> {
        if self.has_loops() {
            return Err(Error::input(
                "girth is only defined for graphs without loops",
            ));
        }
        let n = self.n();
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.fill(usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                // no shorter cycle through this root can appear past this depth
                if 2 * dist[u] + 1 >= best {
                    break;
                }
                for w in self.neighbors(u) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        best = best.min(dist[u] + dist[w] + 1);
                        if best == 3 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        Ok(if best == usize::MAX {
            Length::Infinite
        } else {
            Length::Finite(best)
        })
    }

    /// `{v}` together with every neighbour of `v`.
    pub fn closed_neighborhood(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        let mut bits = self.adj[v].clone();
        bits.insert(v);
        Ok(VertexSet::from_bits(bits))
    }

    /// Whether `set` is independent (a looped vertex is never independent).
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.adj[v].is_disjoint(set.bits()))
    }

    /// Whether the vertices are pairwise adjacent.
    pub fn is_clique(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| {
            vertices[i + 1..]
                .iter()
                .all(|&v| u != v && self.has_edge(u, v))
        })
    }

    /// The graph with vertices renamed by `perm` (vertex `v` becomes `perm[v]`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n();
        if perm.len() != n {
            return Err(Error::input("permutation length differs from vertex count"));
        }
        let mut seen = FixedBitSet::with_capacity(n);
        for &p in perm {
            if p >= n || seen.put(p) {
                return Err(Error::input("not a permutation"));
            }
        }
        Graph::from_edges(n, self.edges().map(|(u, v)| (perm[u], perm[v])))
    }
}
