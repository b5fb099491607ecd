//! Proper colorings and an exact DSATUR branch-and-bound solver.
//!
//! Colors are `1..=c` everywhere. The solver is single-threaded and
//! deterministic: vertices are picked by saturation, then degree, then lowest
//! index, and new colors are only opened in increasing order.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponential::{ExponentialContext, Mapping};
use crate::graph::Graph;

/// An assignment of colors `1..=palette` to the vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Coloring {
    colors: Vec<u32>,
    palette: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, palette: u32) -> Result<Self> {
        if let Some((v, &c)) = colors
            .iter()
            .enumerate()
            .find(|(_, &c)| c == 0 || c > palette)
        {
            return Err(Error::input(format!(
                "vertex {v} has color {c} outside 1..={palette}"
            )));
        }
        Ok(Coloring { colors, palette })
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> u32 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    /// The color class `Ψ^{-1}(b)`.
    pub fn class(&self, b: u32) -> Vec<usize> {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(v, &c)| (c == b).then_some(v))
            .collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.palette as usize];
        for &c in &self.colors {
            sizes[c as usize - 1] += 1;
        }
        sizes
    }

    pub fn colors_used(&self) -> usize {
        self.class_sizes().iter().filter(|&&s| s > 0).count()
    }

    /// `π ∘ Ψ` for a permutation given as `perm[b-1] = π(b)`.
    pub fn relabeled(&self, perm: &[u32]) -> Result<Coloring> {
        if perm.len() != self.palette as usize {
            return Err(Error::input(
                "permutation length differs from the palette size",
            ));
        }
        Coloring::new(
            self.colors.iter().map(|&c| perm[c as usize - 1]).collect(),
            self.palette,
        )
    }
}

/// First monochromatic edge `(u, v)`, `u ≤ v`; a looped vertex is always one.
pub fn first_conflict(g: &Graph, psi: &Coloring) -> Result<Option<(usize, usize)>> {
    if psi.len() != g.n() {
        return Err(Error::input(format!(
            "coloring has {} entries for {} vertices",
            psi.len(),
            g.n()
        )));
    }
    Ok(g.edges().find(|&(u, v)| psi.color(u) == psi.color(v)))
}

pub fn is_proper(g: &Graph, psi: &Coloring) -> Result<bool> {
    Ok(first_conflict(g, psi)?.is_none())
}

/// Search limits. `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub nodes: Option<u64>,
    pub time: Option<Duration>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(nodes: u64) -> Self {
        Budget {
            nodes: Some(nodes),
            time: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Sat(Coloring),
    Unsat,
    Timeout,
}

struct Clock {
    budget: Budget,
    start: Instant,
    nodes: u64,
}

impl Clock {
    fn new(budget: Budget) -> Self {
        Clock {
            budget,
            start: Instant::now(),
            nodes: 0,
        }
    }

    /// Counts one search node; `false` once the budget is spent.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.budget.nodes.is_some_and(|max| self.nodes > max) {
            return false;
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(limit) = self.budget.time {
                return self.start.elapsed() < limit;
            }
        }
        true
    }
}

struct Dsatur {
    nbrs: Vec<Vec<u32>>,
    degree: Vec<usize>,
    c: usize,
    color: Vec<u32>,
    // counts[v * (c + 1) + col]: colored neighbours of v with color col
    counts: Vec<u32>,
    saturation: Vec<u32>,
    colored: usize,
}

impl Dsatur {
    fn new(g: &Graph, c: usize) -> Self {
        let n = g.n();
        let nbrs: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                g.neighbors(v)
                    .filter(|&u| u != v)
                    .map(|u| u as u32)
                    .collect()
            })
            .collect();
        let degree = nbrs.iter().map(Vec::len).collect();
        Dsatur {
            nbrs,
            degree,
            c,
            color: vec![0; n],
            counts: vec![0; n * (c + 1)],
            saturation: vec![0; n],
            colored: 0,
        }
    }

    fn n(&self) -> usize {
        self.color.len()
    }

    fn select(&self) -> usize {
        let mut best = usize::MAX;
        for v in 0..self.n() {
            if self.color[v] != 0 {
                continue;
            }
            if best == usize::MAX
                || (self.saturation[v], self.degree[v]) > (self.saturation[best], self.degree[best])
            {
                best = v;
            }
        }
        best
    }

    fn available(&self, v: usize, col: u32) -> bool {
        self.counts[v * (self.c + 1) + col as usize] == 0
    }

    fn assign(&mut self, v: usize, col: u32) {
        self.color[v] = col;
        self.colored += 1;
        let stride = self.c + 1;
        for &u in &self.nbrs[v] {
            let slot = &mut self.counts[u as usize * stride + col as usize];
            *slot += 1;
            if *slot == 1 {
                self.saturation[u as usize] += 1;
            }
        }
    }

    fn unassign(&mut self, v: usize) {
        let col = self.color[v];
        self.color[v] = 0;
        self.colored -= 1;
        let stride = self.c + 1;
        for &u in &self.nbrs[v] {
            let slot = &mut self.counts[u as usize * stride + col as usize];
            *slot -= 1;
            if *slot == 0 {
                self.saturation[u as usize] -= 1;
            }
        }
    }

    /// Exhaustive search for a `c`-coloring.
    fn search(&mut self, clock: &mut Clock) -> SearchOutcome {
        struct Frame {
            vertex: usize,
            next: u32,
            max_before: u32,
        }
        let n = self.n();
        let mut stack: Vec<Frame> = Vec::with_capacity(n);
        let mut max_used = 0u32;
        loop {
            if self.colored == n {
                let coloring = Coloring::new(self.color.clone(), self.c as u32).expect("in range");
                return SearchOutcome::Sat(coloring);
            }
            let v = self.select();
            stack.push(Frame {
                vertex: v,
                next: 1,
                max_before: max_used,
            });
            // advance the top frame to its next feasible color, backtracking as needed
            loop {
                let Some(top) = stack.last_mut() else {
                    return SearchOutcome::Unsat;
                };
                let v = top.vertex;
                let limit = (top.max_before + 1).min(self.c as u32);
                let mut chosen = None;
                let mut col = top.next;
                while col <= limit {
                    if self.available(v, col) {
                        chosen = Some(col);
                        break;
                    }
                    col += 1;
                }
                match chosen {
                    Some(col) => {
                        if !clock.tick() {
                            return SearchOutcome::Timeout;
                        }
                        top.next = col + 1;
                        max_used = top.max_before.max(col);
                        self.assign(v, col);
                        break;
                    }
                    None => {
                        stack.pop();
                        match stack.last() {
                            Some(parent) => self.unassign(parent.vertex),
                            None => return SearchOutcome::Unsat,
                        }
                    }
                }
            }
        }
    }

    /// Plain DSATUR without backtracking and without a palette bound.
    fn greedy(g: &Graph) -> Coloring {
        let n = g.n();
        let mut solver = Dsatur::new(g, n);
        while solver.colored < n {
            let v = solver.select();
            let col = (1..=n as u32)
                .find(|&c| solver.available(v, c))
                .expect("n colors suffice");
            solver.assign(v, col);
        }
        let used = *solver.color.iter().max().unwrap();
        Coloring::new(solver.color, used).expect("in range")
    }
}

/// Decides whether `g` has a proper `c`-coloring.
pub fn find_proper_coloring(g: &Graph, c: u32, budget: Budget) -> Result<SearchOutcome> {
    if c == 0 {
        return Err(Error::input("palette size must be positive"));
    }
    if g.has_loops() {
        return Ok(SearchOutcome::Unsat);
    }
    let mut clock = Clock::new(budget);
    Ok(Dsatur::new(g, c as usize).search(&mut clock))
}

/// A clique found greedily from the highest-degree start vertices.
pub fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut best: Vec<usize> = vec![order[0]];
    for &start in order.iter().take(64) {
        let mut clique = vec![start];
        let mut candidates = g.row(start).clone();
        candidates.set(start, false);
        while let Some(next) = candidates.ones().max_by_key(|&u| {
            (
                g.row(u).intersection(&candidates).count(),
                std::cmp::Reverse(u),
            )
        }) {
            clique.push(next);
            candidates.intersect_with(g.row(next));
            candidates.set(next, false);
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best.sort_unstable();
    best
}

/// `χ(G)` together with the evidence for it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChromaticCertificate {
    pub value: usize,
    pub witness: Coloring,
    /// A clique of size `value`, when the greedy clique already matched it.
    pub lower_bound_clique: Option<Vec<usize>>,
}

/// Exact chromatic number by incremental search upward from a clique bound.
pub fn chromatic_number(g: &Graph, budget: Budget) -> Result<ChromaticCertificate> {
    if g.has_loops() {
        return Err(Error::input("graphs with loops have no proper coloring"));
    }
    let clique = greedy_clique(g);
    let greedy = Dsatur::greedy(g);
    let upper = greedy.palette() as usize;
    let mut clock = Clock::new(budget);
    for c in clique.len()..upper {
        match Dsatur::new(g, c).search(&mut clock) {
            SearchOutcome::Sat(witness) => {
                let lower_bound_clique = (clique.len() == c).then_some(clique);
                return Ok(ChromaticCertificate {
                    value: c,
                    witness,
                    lower_bound_clique,
                });
            }
            SearchOutcome::Unsat => continue,
            SearchOutcome::Timeout => return Err(Error::Timeout { lower: c, upper }),
        }
    }
    let lower_bound_clique = (clique.len() == upper).then_some(clique);
    Ok(ChromaticCertificate {
        value: upper,
        witness: greedy,
        lower_bound_clique,
    })
}

/// Every proper `c`-coloring, for tiny instances only (`n ≤ 12`, `c ≤ 4`).
pub fn all_proper_colorings(g: &Graph, c: u32) -> Result<Vec<Coloring>> {
    if g.n() > 12 || c > 4 || c == 0 {
        return Err(Error::resource(format!(
            "exhaustive enumeration is limited to 12 vertices and 1..=4 colors (got {} and {c})",
            g.n()
        )));
    }
    let n = g.n();
    let mut out = Vec::new();
    let mut colors = vec![0u32; n];
    fn rec(g: &Graph, c: u32, v: usize, colors: &mut Vec<u32>, out: &mut Vec<Coloring>) {
        if v == colors.len() {
            out.push(Coloring::new(colors.clone(), c).expect("in range"));
            return;
        }
        for col in 1..=c {
            if g.neighbors(v).all(|u| u > v || colors[u] != col) {
                colors[v] = col;
                rec(g, c, v + 1, colors, out);
            }
        }
        colors[v] = 0;
    }
    rec(g, c, 0, &mut colors, &mut out);
    Ok(out)
}

/// Relabels a proper `c`-coloring of `E_c(Γ)` so that the constant mapping
/// with value `i` gets color `i`. Returns the suited coloring and the
/// permutation used (`perm[b-1] = π(b)`).
pub fn make_suited(psi: &Coloring, ctx: &ExponentialContext) -> Result<(Coloring, Vec<u32>)> {
    let c = ctx.c();
    if psi.palette() != c {
        return Err(Error::precondition(format!(
            "palette {} differs from c = {c}",
            psi.palette()
        )));
    }
    let graph = ctx.materialize()?;
    if let Some((a, b)) = first_conflict(&graph, psi)? {
        return Err(Error::precondition(format!(
            "coloring is not proper on E_c: mappings {} and {} share color {}",
            ctx.decode(a as u64),
            ctx.decode(b as u64),
            psi.color(a)
        )));
    }
    let mut perm = vec![0u32; c as usize];
    for i in 1..=c {
        let constant = Mapping::constant(ctx.n(), i);
        let b = psi.color(ctx.encode(&constant)? as usize);
        if perm[b as usize - 1] != 0 {
            return Err(Error::precondition(format!(
                "two constant mappings share color {b}; they must form a clique"
            )));
        }
        perm[b as usize - 1] = i;
    }
    Ok((psi.relabeled(&perm)?, perm))
}

/// Whether the constant mapping with value `i` has color `i` for every `i`.
pub fn is_suited(psi: &Coloring, ctx: &ExponentialContext) -> Result<bool> {
    for i in 1..=ctx.c() {
        let idx = ctx.encode(&Mapping::constant(ctx.n(), i))?;
        if psi.color(idx as usize) != i {
            return Ok(false);
        }
    }
    Ok(true)
}
